#include "fsi/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "fsi/patterns.hpp"
#include "fsi/reconstruction.hpp"

namespace fsi {

namespace {

std::string g15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::uint64_t parse_u64(const std::string& text, const std::string& field) {
    std::uint64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ConfigError(field + ": bad integer '" + text + "'");
    return value;
}

double parse_double(const std::string& text, const std::string& field) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(value))
            throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ConfigError(field + ": bad number '" + text + "'");
    }
}

}  // namespace

RunOutput run_single(const Image& object, Method method, PatternMode mode,
                     std::uint64_t budget, double sigma, std::uint64_t seed,
                     double background_flux) {
    if (object.width != object.height)
        throw ConfigError("object: must be square, got " + std::to_string(object.width) +
                          "x" + std::to_string(object.height));
    if (object.width % 2 != 0)
        throw ConfigError("object: dimensions must be even, got " +
                          std::to_string(object.width));
    if (sigma < 0.0)
        throw ConfigError("sigma: must be >= 0");

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<FrequencyCoord> schedule =
        frequency_schedule(object.width, object.height);

    AcquisitionConfig config;
    config.method = method;
    config.mode = mode;
    config.budget = budget;
    config.noise.sigma = sigma;
    config.noise.mu = 0.0;
    config.noise.master_seed = seed;
    config.background_flux = background_flux;

    const MeasurementSet set = acquire(object, schedule, config);
    Image recon = reconstruct(symmetrize(assemble(set)));

    // Row metrics describe the 8-bit image the harness writes, so they
    // are computed on the PGM-quantized reconstruction (clip + round
    // half-up); a full-sampling noiseless run therefore reports the
    // inf sentinel. The returned image keeps full precision.
    Image quantized = recon;
    for (double& v : quantized.data) {
        double clipped = v;
        if (!(clipped > 0.0)) clipped = 0.0;
        if (clipped > 255.0) clipped = 255.0;
        v = std::floor(clipped + 0.5);
    }
    const QualityReport quality = psnr(object, quantized);
    const auto t1 = std::chrono::steady_clock::now();

    RunOutput out;
    out.row.method = method;
    out.row.mode = mode;
    out.row.budget = budget;
    out.row.sigma = sigma;
    out.row.seed = seed;
    out.row.coefficients_covered = set.coefficients_covered;
    out.row.mse = quality.mse;
    out.row.psnr_db = quality.psnr_db;
    out.row.wall_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    out.image = std::move(recon);
    return out;
}

std::string results_csv_header() {
    return "method,mode,budget,sigma,seed,coefficients_covered,mse,psnr_db,wall_ms";
}

std::string format_result_row(const ResultRow& row) {
    std::ostringstream out;
    out << to_string(row.method) << ',' << to_string(row.mode) << ',' << row.budget << ','
        << g15(row.sigma) << ',' << row.seed << ',' << row.coefficients_covered << ','
        << g15(row.mse) << ','
        << (std::isinf(row.psnr_db) ? std::string("inf") : g15(row.psnr_db)) << ','
        << row.wall_ms;
    return out.str();
}

std::string cell_image_name(Method method, PatternMode mode, std::uint64_t budget,
                            double sigma, std::uint64_t seed) {
    char sig[32];
    std::snprintf(sig, sizeof(sig), "%g", sigma);
    for (char* p = sig; *p; ++p)
        if (*p == '.') *p = 'p';
    std::ostringstream out;
    out << to_string(method) << '_' << to_string(mode) << "_m" << budget << "_s" << sig
        << "_seed" << seed << ".pgm";
    return out.str();
}

SweepSpec parse_sweep_spec(std::istream& in) {
    SweepSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("spec line " + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        try {
            if (key == "object") {
                spec.object_path = value;
            } else if (key == "output_dir") {
                spec.output_dir = value;
            } else if (key == "threads") {
                spec.threads = static_cast<int>(parse_u64(value, key));
            } else if (key == "methods") {
                spec.methods.clear();
                for (const std::string& item : split(value, ','))
                    spec.methods.push_back(parse_method(trim(item)));
            } else if (key == "modes") {
                spec.modes.clear();
                for (const std::string& item : split(value, ','))
                    spec.modes.push_back(parse_mode(trim(item)));
            } else if (key == "budgets") {
                spec.budgets.clear();
                for (const std::string& item : split(value, ','))
                    spec.budgets.push_back(parse_u64(trim(item), key));
            } else if (key == "sigmas") {
                spec.sigmas.clear();
                for (const std::string& item : split(value, ','))
                    spec.sigmas.push_back(parse_double(trim(item), key));
            } else if (key == "seeds") {
                spec.seeds.clear();
                for (const std::string& item : split(value, ','))
                    spec.seeds.push_back(parse_u64(trim(item), key));
            } else {
                throw ConfigError("spec line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key + ": " + e.what());
        }
    }
    return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open sweep spec: " + path.string());
    return parse_sweep_spec(in);
}

void validate_sweep_spec(const SweepSpec& spec) {
    if (spec.object_path.empty()) throw ConfigError("object: missing path");
    if (spec.output_dir.empty()) throw ConfigError("output_dir: missing path");
    if (spec.methods.empty()) throw ConfigError("methods: list must be non-empty");
    if (spec.modes.empty()) throw ConfigError("modes: list must be non-empty");
    if (spec.budgets.empty()) throw ConfigError("budgets: list must be non-empty");
    if (spec.sigmas.empty()) throw ConfigError("sigmas: list must be non-empty");
    if (spec.seeds.empty()) throw ConfigError("seeds: list must be non-empty");
    for (const std::uint64_t b : spec.budgets)
        if (b == 0) throw ConfigError("budgets: must be positive");
    for (const double s : spec.sigmas)
        if (s < 0.0) throw ConfigError("sigmas: must be >= 0");
    if (spec.threads < 0) throw ConfigError("threads: must be >= 0");
}

namespace {

struct SweepCell {
    Method method;
    PatternMode mode;
    std::uint64_t budget;
    double sigma;
    std::uint64_t seed;
    std::string key;
    bool skip = false;
};

std::string cell_key(Method method, PatternMode mode, std::uint64_t budget, double sigma,
                     std::uint64_t seed) {
    std::ostringstream out;
    out << to_string(method) << ',' << to_string(mode) << ',' << budget << ',' << g15(sigma)
        << ',' << seed;
    return out.str();
}

std::string row_key(const std::string& row) {
    // First five CSV fields identify the cell.
    std::size_t pos = 0;
    for (int i = 0; i < 5; ++i) {
        pos = row.find(',', pos);
        if (pos == std::string::npos) return {};
        ++pos;
    }
    return row.substr(0, pos - 1);
}

}  // namespace

void run_sweep(const SweepSpec& spec) {
    validate_sweep_spec(spec);
    const Image object = load_image(spec.object_path);

    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    const std::filesystem::path csv_path = spec.output_dir / "results.csv";

    // Resume support: keep every well-formed existing row, remember its
    // key, and recompute only the missing cells. A truncated trailing
    // line (interrupted run) is dropped and recomputed.
    std::set<std::string> have;
    std::vector<std::string> old_rows;
    if (std::filesystem::exists(csv_path)) {
        std::ifstream in(csv_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line == results_csv_header()) continue;
            if (split(line, ',').size() != 9) continue;
            const std::string key = row_key(line);
            if (key.empty() || have.count(key)) continue;
            have.insert(key);
            old_rows.push_back(line);
        }
    }

    std::ofstream out(csv_path, std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write results file: " + csv_path.string());
    out << results_csv_header() << '\n';
    for (const std::string& row : old_rows) out << row << '\n';
    out.flush();
    if (!out)
        throw std::runtime_error("short write to results file: " + csv_path.string());

    // Cells in Cartesian-product order; the writer emits rows in this
    // order no matter how workers interleave, so the file bytes do not
    // depend on the thread count.
    std::vector<SweepCell> cells;
    for (const Method method : spec.methods)
        for (const PatternMode mode : spec.modes)
            for (const std::uint64_t budget : spec.budgets)
                for (const double sigma : spec.sigmas)
                    for (const std::uint64_t seed : spec.seeds) {
                        SweepCell cell{method, mode, budget, sigma, seed,
                                       cell_key(method, mode, budget, sigma, seed)};
                        cell.skip = have.count(cell.key) != 0;
                        cells.push_back(std::move(cell));
                    }

    unsigned threads = spec.threads > 0
                           ? static_cast<unsigned>(spec.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
    const unsigned max_useful = static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1));
    threads = std::min(threads, max_useful);

    std::vector<std::string> row_text(cells.size());
    std::vector<char> done(cells.size(), 0);
    std::mutex mtx;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;

    auto worker = [&]() {
        for (;;) {
            if (failed.load()) return;
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const SweepCell& cell = cells[i];
            try {
                std::string text;
                if (!cell.skip) {
                    RunOutput result = run_single(object, cell.method, cell.mode,
                                                  cell.budget, cell.sigma, cell.seed);
                    save_image(result.image,
                               spec.output_dir /
                                   cell_image_name(cell.method, cell.mode, cell.budget,
                                                   cell.sigma, cell.seed));
                    text = format_result_row(result.row);
                }
                std::lock_guard<std::mutex> lock(mtx);
                row_text[i] = std::move(text);
                done[i] = 1;
            } catch (...) {
                std::lock_guard<std::mutex> lock(mtx);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
            }
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);

    // Single ordered writer; each row hits the disk before the next is
    // awaited, keeping interrupted sweeps resumable.
    {
        std::unique_lock<std::mutex> lock(mtx);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            cv.wait(lock, [&] { return done[i] || failed.load(); });
            if (failed.load() && !done[i]) break;
            if (!row_text[i].empty()) {
                out << row_text[i] << '\n';
                out.flush();
            }
        }
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    if (!out)
        throw std::runtime_error("short write to results file: " + csv_path.string());
}

DiffPatternsReport diff_patterns(double fx, double fy, double phase, int size,
                                 const std::filesystem::path& out_dir) {
    if (size < 1)
        throw ConfigError("size: must be >= 1, got " + std::to_string(size));
    if (!std::isfinite(fx) || !std::isfinite(fy) || !std::isfinite(phase))
        throw ConfigError("fx/fy/theta: must be finite");

    std::filesystem::create_directories(out_dir);

    PatternParams params;
    params.fx = fx;
    params.fy = fy;
    params.phase = phase;
    params.width = size;
    params.height = size;

    // Dither from the 8-bit display assets, not the raw cosine values:
    // at full double precision error diffusion commutes with
    // complementation except on exact threshold ties, and the
    // discrepancy this tool looks for is seeded by the asymmetric
    // rounding of near-half-intensity pixels in the stored patterns.
    const GrayPattern gray = fourier_pattern(params);
    const BinaryPattern dither = floyd_steinberg(quantize8(gray));
    const BinaryPattern dither_complement = complement_binary(dither);

    PatternParams shifted = params;
    shifted.phase = phase + std::numbers::pi;
    const BinaryPattern shift_dither = floyd_steinberg(quantize8(fourier_pattern(shifted)));

    // The two candidate "negative" patterns disagree wherever error
    // diffusion did not commute with complementation.
    Image difference(size, size);
    int differing = 0;
    for (std::size_t i = 0; i < dither_complement.data.size(); ++i) {
        const bool diff = dither_complement.data[i] != shift_dither.data[i];
        difference.data[i] = diff ? 255.0 : 0.0;
        differing += diff ? 1 : 0;
    }

    DiffPatternsReport report;
    report.differing_pixels = differing;
    const std::pair<std::filesystem::path, const Image> panels[] = {
        {out_dir / "pattern_gray.pgm", to_image(gray)},
        {out_dir / "pattern_dither.pgm", to_image(dither)},
        {out_dir / "dither_complement.pgm", to_image(dither_complement)},
        {out_dir / "pi_shift_dither.pgm", to_image(shift_dither)},
        {out_dir / "difference_map.pgm", difference},
    };
    for (const auto& [path, image] : panels) {
        save_image(image, path);
        report.files.push_back(path);
    }
    return report;
}

}  // namespace fsi
