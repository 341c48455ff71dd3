#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsi/acquisition.hpp"
#include "fsi/image.hpp"
#include "fsi/metrics.hpp"

namespace fsi {

// Bad user-supplied configuration (as opposed to runtime failures like
// unreadable files). The CLI maps this to its config-error exit code.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SweepSpec {
    std::filesystem::path object_path;
    std::vector<Method> methods;
    std::vector<PatternMode> modes;
    std::vector<std::uint64_t> budgets;
    std::vector<double> sigmas;
    std::vector<std::uint64_t> seeds;
    std::filesystem::path output_dir;
    int threads = 0;  // 0 = one worker per hardware thread
};

struct ResultRow {
    Method method = Method::cfsi;
    PatternMode mode = PatternMode::grayscale;
    std::uint64_t budget = 0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::size_t coefficients_covered = 0;
    double mse = 0.0;
    double psnr_db = 0.0;
    std::int64_t wall_ms = 0;
};

struct RunOutput {
    Image image;
    ResultRow row;
};

// One experiment cell: schedule -> acquire -> assemble -> symmetrize ->
// reconstruct -> psnr. Deterministic given its arguments. The object
// must be square with even dimensions. Row metrics are evaluated on
// the 8-bit quantization of the reconstruction (what the PGM will
// hold), so exact runs report the inf sentinel; the returned image is
// the unquantized reconstruction.
RunOutput run_single(const Image& object, Method method, PatternMode mode,
                     std::uint64_t budget, double sigma, std::uint64_t seed,
                     double background_flux = 0.0);

// Cartesian product of the spec lists. Writes one results.csv (header
// method,mode,budget,sigma,seed,coefficients_covered,mse,psnr_db,wall_ms)
// plus one PGM per cell into output_dir. Rows are flushed in product
// order regardless of worker interleaving, so output bytes do not
// depend on the thread count. Cells whose key already appears in an
// existing results.csv are skipped (resume).
void run_sweep(const SweepSpec& spec);

// Key=value spec file: object, methods, modes, budgets, sigmas, seeds,
// output_dir, threads. Lists are comma-separated. '#' starts a comment.
SweepSpec parse_sweep_spec(std::istream& in);
SweepSpec load_sweep_spec(const std::filesystem::path& path);
void validate_sweep_spec(const SweepSpec& spec);

// Row/file naming helpers, pinned so tests can assert on them.
std::string results_csv_header();
std::string format_result_row(const ResultRow& row);
// "{method}_{mode}_m{budget}_s{sigma}_seed{seed}.pgm", '.' in sigma
// rendered as 'p' (s0p5).
std::string cell_image_name(Method method, PatternMode mode,
                            std::uint64_t budget, double sigma,
                            std::uint64_t seed);

struct DiffPatternsReport {
    int differing_pixels = 0;
    std::vector<std::filesystem::path> files;  // the five written panels
};

// Compare complement-of-dither against dither-of-(phase+pi) for one
// fringe pattern; writes the grayscale pattern, its dither, the
// dither's complement, the shifted pattern's dither, and their XOR map
// as PGMs into out_dir.
DiffPatternsReport diff_patterns(double fx, double fy, double phase, int size,
                                 const std::filesystem::path& out_dir);

}  // namespace fsi
