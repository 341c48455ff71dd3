#include "fsi/acquisition.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fsi {

const char* to_string(Method m) {
    switch (m) {
        case Method::cfsi: return "cfsi";
        case Method::four_step: return "four-step";
        case Method::three_step: return "three-step";
        case Method::two_step: return "two-step";
    }
    throw std::logic_error("to_string(Method): bad enum value");
}

const char* to_string(PatternMode m) {
    return m == PatternMode::grayscale ? "grayscale" : "binary";
}

const char* to_string(DetectorArm a) {
    switch (a) {
        case DetectorArm::plus: return "plus";
        case DetectorArm::minus: return "minus";
        case DetectorArm::single: return "single";
    }
    throw std::logic_error("to_string(DetectorArm): bad enum value");
}

Method parse_method(std::string_view name) {
    if (name == "cfsi") return Method::cfsi;
    if (name == "four-step") return Method::four_step;
    if (name == "three-step") return Method::three_step;
    if (name == "two-step") return Method::two_step;
    throw std::invalid_argument("unknown method '" + std::string(name) +
                                "' (want cfsi|four-step|three-step|two-step)");
}

PatternMode parse_mode(std::string_view name) {
    if (name == "grayscale") return PatternMode::grayscale;
    if (name == "binary") return PatternMode::binary;
    throw std::invalid_argument("unknown mode '" + std::string(name) +
                                "' (want grayscale|binary)");
}

DetectorArm parse_arm(std::string_view name) {
    if (name == "plus") return DetectorArm::plus;
    if (name == "minus") return DetectorArm::minus;
    if (name == "single") return DetectorArm::single;
    throw std::invalid_argument("unknown detector arm '" + std::string(name) + "'");
}

int patterns_per_coefficient(Method m) {
    switch (m) {
        case Method::cfsi: return 2;
        case Method::four_step: return 4;
        case Method::three_step: return 3;
        case Method::two_step: return 2;
    }
    throw std::logic_error("patterns_per_coefficient: bad enum value");
}

std::vector<double> method_phases(Method m) {
    const double pi = std::numbers::pi;
    switch (m) {
        case Method::cfsi: return {0.0, pi / 2.0};
        case Method::four_step: return {0.0, pi / 2.0, pi, 3.0 * pi / 2.0};
        case Method::three_step: return {0.0, 2.0 * pi / 3.0, 4.0 * pi / 3.0};
        case Method::two_step: return {0.0, pi / 2.0};
    }
    throw std::logic_error("method_phases: bad enum value");
}

double measure(const Image& object, const GrayPattern& pattern) {
    if (object.width != pattern.width || object.height != pattern.height)
        throw std::invalid_argument("measure: object/pattern dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < object.data.size(); ++i)
        acc += object.data[i] * pattern.data[i];
    return acc / static_cast<double>(object.pixel_count());
}

double measure(const Image& object, const BinaryPattern& pattern) {
    if (object.width != pattern.width || object.height != pattern.height)
        throw std::invalid_argument("measure: object/pattern dimension mismatch");
    // Summing only selected pixels keeps integer objects exact: the
    // result is (integer sum) / (pixel count).
    double acc = 0.0;
    for (std::size_t i = 0; i < object.data.size(); ++i)
        if (pattern.data[i]) acc += object.data[i];
    return acc / static_cast<double>(object.pixel_count());
}

namespace {

// splitmix64 finalizer; statistically solid and cheap enough to rerun
// per draw, which is what makes the generator counter-based.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double to_unit_open(std::uint64_t bits) {
    // (0, 1]: top 53 bits, +1 so log() never sees zero.
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1p-53;
}

double to_unit_half_open(std::uint64_t bits) {
    // [0, 1)
    return static_cast<double>(bits >> 11) * 0x1p-53;
}

// One standard-normal draw, a pure function of the key triple.
double standard_normal(std::uint64_t master_seed, std::uint64_t seq, DetectorArm arm) {
    std::uint64_t k = mix64(master_seed);
    k = mix64(k ^ seq);
    k = mix64(k ^ (static_cast<std::uint64_t>(arm) + 0x517cc1b727220a95ULL));
    const std::uint64_t k2 = mix64(k);
    const double u1 = to_unit_open(k);
    const double u2 = to_unit_half_open(k2);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

double add_noise(double value, const NoiseSpec& noise, std::uint64_t seq, DetectorArm arm) {
    if (noise.sigma < 0.0)
        throw std::invalid_argument("add_noise: sigma must be >= 0");
    if (noise.sigma == 0.0)
        return noise.mu == 0.0 ? value : value + noise.mu;  // exact identity at (0,0)
    return value + noise.mu + noise.sigma * standard_normal(noise.master_seed, seq, arm);
}

std::pair<double, double> measure_complementary(const Image& object,
                                                const BinaryPattern& pattern,
                                                const NoiseSpec& noise,
                                                std::uint64_t seq,
                                                double background) {
    const double plus = measure(object, pattern) + background;
    const double minus = measure(object, complement_binary(pattern)) + background;
    return {add_noise(plus, noise, seq, DetectorArm::plus),
            add_noise(minus, noise, seq, DetectorArm::minus)};
}

std::pair<double, double> measure_complementary(const Image& object,
                                                const GrayPattern& pattern,
                                                const NoiseSpec& noise,
                                                std::uint64_t seq,
                                                double background) {
    const double plus = measure(object, pattern) + background;
    const double minus = measure(object, complement_gray(pattern)) + background;
    return {add_noise(plus, noise, seq, DetectorArm::plus),
            add_noise(minus, noise, seq, DetectorArm::minus)};
}

namespace {

constexpr double kDefaultDc = 0.5;
constexpr double kDefaultContrast = 0.5;

// Constant pattern P == dc, used for the two-step DC calibration
// reading. Built directly rather than through fourier_pattern, which
// cannot express zero modulation.
GrayPattern uniform_pattern(int width, int height, double dc) {
    GrayPattern p;
    p.width = width;
    p.height = height;
    p.data.assign(static_cast<std::size_t>(width) * height, dc);
    p.params.dc = dc;
    p.params.contrast = 0.0;
    p.params.width = width;
    p.params.height = height;
    return p;
}

double measure_in_mode(const Image& object, const GrayPattern& pattern, PatternMode mode) {
    if (mode == PatternMode::binary) return measure(object, floyd_steinberg(pattern));
    return measure(object, pattern);
}

}  // namespace

MeasurementSet acquire(const Image& object,
                       const std::vector<FrequencyCoord>& schedule,
                       const AcquisitionConfig& config) {
    if (object.width < 1 || object.height < 1 || object.pixel_count() == 0)
        throw std::invalid_argument("acquire: empty object");
    if (config.background_flux < 0.0)
        throw std::invalid_argument("acquire: background_flux must be >= 0");

    const int steps = patterns_per_coefficient(config.method);
    if (config.budget < static_cast<std::uint64_t>(steps))
        throw std::invalid_argument(
            "acquire: budget " + std::to_string(config.budget) +
            " is smaller than one coefficient's phase set (" + std::to_string(steps) + ")");
    const std::uint64_t full_patterns =
        static_cast<std::uint64_t>(steps) * schedule.size();
    if (config.budget > full_patterns)
        throw std::invalid_argument("acquire: budget " + std::to_string(config.budget) +
                                    " exceeds the " + std::to_string(full_patterns) +
                                    " patterns of the full schedule");

    const std::size_t covered = static_cast<std::size_t>(config.budget / steps);

    MeasurementSet set;
    set.method = config.method;
    set.mode = config.mode;
    set.width = object.width;
    set.height = object.height;
    set.dc = kDefaultDc;
    set.contrast = kDefaultContrast;
    set.coefficients_covered = covered;

    const std::vector<double> phases = method_phases(config.method);
    std::uint64_t seq = 0;

    if (config.method == Method::two_step) {
        // One uniform-pattern reading, amortized over the whole
        // acquisition and excluded from the pattern budget. Taken with
        // the margins dark, so no background term, but it is a real
        // reading and gets noise.
        const GrayPattern uniform = uniform_pattern(object.width, object.height, set.dc);
        const double raw = measure_in_mode(object, uniform, config.mode);
        MeasurementRecord rec;
        rec.coord = {0, 0, classify_coord(0, 0, object.width, object.height)};
        rec.phase_index = -1;
        rec.arm = DetectorArm::single;
        rec.value = add_noise(raw, config.noise, seq, DetectorArm::single);
        rec.seq = seq++;
        set.records.push_back(rec);
    }

    for (std::size_t c = 0; c < covered; ++c) {
        const FrequencyCoord coord = schedule[c];
        PatternParams params;
        params.fx = static_cast<double>(coord.u) / object.width;
        params.fy = static_cast<double>(coord.v) / object.height;
        params.dc = set.dc;
        params.contrast = set.contrast;
        params.width = object.width;
        params.height = object.height;

        for (std::size_t pi = 0; pi < phases.size(); ++pi) {
            params.phase = phases[pi];
            const GrayPattern pattern = fourier_pattern(params);
            if (config.method == Method::cfsi) {
                std::pair<double, double> arms;
                if (config.mode == PatternMode::binary)
                    arms = measure_complementary(object, floyd_steinberg(pattern),
                                                 config.noise, seq, config.background_flux);
                else
                    arms = measure_complementary(object, pattern, config.noise, seq,
                                                 config.background_flux);
                set.records.push_back(
                    {coord, static_cast<int>(pi), DetectorArm::plus, arms.first, seq});
                set.records.push_back(
                    {coord, static_cast<int>(pi), DetectorArm::minus, arms.second, seq + 1});
                seq += 2;
            } else {
                const double raw =
                    measure_in_mode(object, pattern, config.mode) + config.background_flux;
                const double value = add_noise(raw, config.noise, seq, DetectorArm::single);
                set.records.push_back(
                    {coord, static_cast<int>(pi), DetectorArm::single, value, seq});
                seq += 1;
            }
        }
    }
    return set;
}

namespace {

std::string format_g15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

}  // namespace

void write_measurements_csv(std::ostream& out, const MeasurementSet& set) {
    out << "# method=" << to_string(set.method) << " mode=" << to_string(set.mode)
        << " width=" << set.width << " height=" << set.height << " dc=" << format_g15(set.dc)
        << " contrast=" << format_g15(set.contrast)
        << " coefficients_covered=" << set.coefficients_covered << "\n";
    out << "seq,u,v,phase_index,arm,value\n";
    for (const MeasurementRecord& r : set.records)
        out << r.seq << ',' << r.coord.u << ',' << r.coord.v << ',' << r.phase_index << ','
            << to_string(r.arm) << ',' << format_g15(r.value) << '\n';
}

namespace {

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

}  // namespace

MeasurementSet read_measurements_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.empty() || line[0] != '#')
        throw std::runtime_error("measurement CSV: missing metadata line");

    MeasurementSet set;
    {
        std::istringstream meta(line.substr(1));
        std::string kv;
        while (meta >> kv) {
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("measurement CSV: bad metadata token '" + kv + "'");
            const std::string key = kv.substr(0, eq);
            const std::string value = kv.substr(eq + 1);
            if (key == "method") set.method = parse_method(value);
            else if (key == "mode") set.mode = parse_mode(value);
            else if (key == "width") set.width = std::stoi(value);
            else if (key == "height") set.height = std::stoi(value);
            else if (key == "dc") set.dc = std::stod(value);
            else if (key == "contrast") set.contrast = std::stod(value);
            else if (key == "coefficients_covered")
                set.coefficients_covered = std::stoul(value);
            else
                throw std::runtime_error("measurement CSV: unknown metadata key '" + key + "'");
        }
    }
    if (set.width < 1 || set.height < 1)
        throw std::runtime_error("measurement CSV: missing width/height metadata");

    if (!std::getline(in, line) || line != "seq,u,v,phase_index,arm,value")
        throw std::runtime_error("measurement CSV: bad header line");

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 6)
            throw std::runtime_error("measurement CSV: bad row '" + line + "'");
        MeasurementRecord r;
        try {
            r.seq = std::stoull(f[0]);
            const int u = std::stoi(f[1]);
            const int v = std::stoi(f[2]);
            r.coord = {u, v, classify_coord(u, v, set.width, set.height)};
            r.phase_index = std::stoi(f[3]);
            r.arm = parse_arm(f[4]);
            r.value = std::stod(f[5]);
        } catch (const std::exception& e) {
            throw std::runtime_error("measurement CSV: bad row '" + line + "': " + e.what());
        }
        set.records.push_back(r);
    }
    return set;
}

}  // namespace fsi
