// fsibench: single-pixel imaging benchmark harness.
//
// Subcommands:
//   simulate       one (method, mode, budget, sigma, seed) cell
//   sweep          Cartesian product driven by a spec file and/or flags
//   diff-patterns  complement-of-dither vs dither-of-shifted-pattern
//   schedule       dump the frequency sampling schedule as CSV
//
// Exit codes: 0 success, 2 bad configuration, 1 runtime failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fsi/harness.hpp"
#include "fsi/patterns.hpp"

namespace {

int cmd_simulate(const std::string& object_path, const std::string& method,
                 const std::string& mode, std::uint64_t budget, double sigma,
                 std::uint64_t seed, double background, const std::string& out_path) {
    const fsi::Image object = fsi::load_image(object_path);
    const fsi::RunOutput result =
        fsi::run_single(object, fsi::parse_method(method), fsi::parse_mode(mode), budget,
                        sigma, seed, background);
    fsi::save_image(result.image, out_path);
    std::cout << fsi::results_csv_header() << "\n"
              << fsi::format_result_row(result.row) << "\n";
    return 0;
}

int cmd_diff_patterns(int fx_num, int fy_num, double theta, int size,
                      const std::string& out_dir) {
    if (size < 1)
        throw fsi::ConfigError("size: must be >= 1, got " + std::to_string(size));
    const double fx = static_cast<double>(fx_num) / size;
    const double fy = static_cast<double>(fy_num) / size;
    const fsi::DiffPatternsReport report = fsi::diff_patterns(fx, fy, theta, size, out_dir);
    std::cout << "differing pixels: " << report.differing_pixels << "\n";
    for (const auto& file : report.files) std::cout << "wrote " << file.string() << "\n";
    return 0;
}

int cmd_schedule(int width, int height, const std::string& out_path) {
    const std::vector<fsi::FrequencyCoord> schedule = fsi::frequency_schedule(width, height);
    if (out_path.empty()) {
        fsi::write_schedule_csv(std::cout, schedule);
    } else {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open schedule output: " + out_path);
        fsi::write_schedule_csv(out, schedule);
        if (!out.flush())
            throw std::runtime_error("short write to schedule output: " + out_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier single-pixel imaging simulation benchmark"};
    app.require_subcommand(1);

    // simulate
    std::string sim_object, sim_method = "cfsi", sim_mode = "grayscale", sim_out;
    std::uint64_t sim_budget = 0, sim_seed = 0;
    double sim_sigma = 0.0, sim_background = 0.0;
    CLI::App* sim = app.add_subcommand("simulate", "Run one reconstruction cell");
    sim->add_option("--object", sim_object, "input object PGM")->required();
    sim->add_option("--method", sim_method, "cfsi|four-step|three-step|two-step");
    sim->add_option("--mode", sim_mode, "grayscale|binary");
    sim->add_option("--budget", sim_budget, "displayed-pattern budget")->required();
    sim->add_option("--sigma", sim_sigma, "noise standard deviation");
    sim->add_option("--seed", sim_seed, "noise master seed");
    sim->add_option("--background", sim_background, "constant background flux per reading");
    sim->add_option("--out", sim_out, "reconstruction PGM path")->required();

    // sweep
    std::string sweep_spec_path, sweep_object, sweep_outdir;
    std::vector<std::string> sweep_methods, sweep_modes;
    std::vector<std::uint64_t> sweep_budgets, sweep_seeds;
    std::vector<double> sweep_sigmas;
    int sweep_threads = -1;
    CLI::App* sweep = app.add_subcommand("sweep", "Run a method/mode/budget/sigma/seed grid");
    sweep->add_option("--spec", sweep_spec_path, "key=value spec file");
    sweep->add_option("--object", sweep_object, "input object PGM (overrides spec)");
    sweep->add_option("--methods", sweep_methods, "comma-separated methods")->delimiter(',');
    sweep->add_option("--modes", sweep_modes, "comma-separated modes")->delimiter(',');
    sweep->add_option("--budgets", sweep_budgets, "comma-separated budgets")->delimiter(',');
    sweep->add_option("--sigmas", sweep_sigmas, "comma-separated sigmas")->delimiter(',');
    sweep->add_option("--seeds", sweep_seeds, "comma-separated seeds")->delimiter(',');
    sweep->add_option("--output-dir", sweep_outdir, "results directory (overrides spec)");
    sweep->add_option("--threads", sweep_threads, "worker threads (0 = hardware)");

    // diff-patterns
    int dp_fx = 0, dp_fy = 0, dp_size = 0;
    double dp_theta = std::numbers::pi / 2.0;
    std::string dp_outdir = "diff-patterns";
    CLI::App* dp = app.add_subcommand(
        "diff-patterns", "Compare complement-of-dither with dither-of-pi-shift");
    dp->add_option("--fx-num", dp_fx, "fx numerator (fx = fx-num / size)")->required();
    dp->add_option("--fy-num", dp_fy, "fy numerator (fy = fy-num / size)")->required();
    dp->add_option("--theta", dp_theta, "pattern phase in radians (default pi/2)");
    dp->add_option("--size", dp_size, "pattern side length in pixels")->required();
    dp->add_option("--out-dir", dp_outdir, "panel output directory");

    // schedule
    int sch_width = 0, sch_height = 0;
    std::string sch_out;
    CLI::App* sch = app.add_subcommand("schedule", "Dump the frequency sampling schedule");
    sch->add_option("--width", sch_width, "grid width (even)")->required();
    sch->add_option("--height", sch_height, "grid height (even)")->required();
    sch->add_option("--out", sch_out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sim)
            return cmd_simulate(sim_object, sim_method, sim_mode, sim_budget, sim_sigma,
                                sim_seed, sim_background, sim_out);
        if (*sweep) {
            fsi::SweepSpec spec;
            if (!sweep_spec_path.empty()) spec = fsi::load_sweep_spec(sweep_spec_path);
            if (!sweep_object.empty()) spec.object_path = sweep_object;
            if (!sweep_outdir.empty()) spec.output_dir = sweep_outdir;
            if (!sweep_methods.empty()) {
                spec.methods.clear();
                for (const std::string& m : sweep_methods)
                    spec.methods.push_back(fsi::parse_method(m));
            }
            if (!sweep_modes.empty()) {
                spec.modes.clear();
                for (const std::string& m : sweep_modes)
                    spec.modes.push_back(fsi::parse_mode(m));
            }
            if (!sweep_budgets.empty()) spec.budgets = sweep_budgets;
            if (!sweep_sigmas.empty()) spec.sigmas = sweep_sigmas;
            if (!sweep_seeds.empty()) spec.seeds = sweep_seeds;
            if (sweep_threads >= 0) spec.threads = sweep_threads;
            fsi::run_sweep(spec);
            std::cout << "sweep complete: " << (spec.output_dir / "results.csv").string()
                      << "\n";
            return 0;
        }
        if (*dp)
            return cmd_diff_patterns(dp_fx, dp_fy, dp_theta, dp_size, dp_outdir);
        if (*sch)
            return cmd_schedule(sch_width, sch_height, sch_out);
    } catch (const std::invalid_argument& e) {  // includes fsi::ConfigError
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
