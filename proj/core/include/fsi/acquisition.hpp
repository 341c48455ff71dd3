#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fsi/image.hpp"
#include "fsi/patterns.hpp"

namespace fsi {

enum class Method { cfsi, four_step, three_step, two_step };
enum class PatternMode { grayscale, binary };
enum class DetectorArm { plus, minus, single };

const char* to_string(Method m);
const char* to_string(PatternMode m);
const char* to_string(DetectorArm a);
Method parse_method(std::string_view name);          // "cfsi" | "four-step" | ...
PatternMode parse_mode(std::string_view name);       // "grayscale" | "binary"
DetectorArm parse_arm(std::string_view name);        // "plus" | "minus" | "single"

// Displayed patterns needed per Fourier coefficient: 2/4/3/2 for
// cfsi / four-step / three-step / two-step.
int patterns_per_coefficient(Method m);

// The phase set displayed for one coefficient, in display order.
std::vector<double> method_phases(Method m);

// Additive Gaussian measurement noise. Draws are a pure function of
// (master_seed, seq, arm) — a counter-based generator, so results do
// not depend on call order or thread interleaving.
struct NoiseSpec {
    double sigma = 0.0;
    double mu = 0.0;
    std::uint64_t master_seed = 0;
};

// One detector reading. seq is a global per-acquisition index (unique
// per record); arm is `single` for the non-complementary methods.
struct MeasurementRecord {
    FrequencyCoord coord;
    int phase_index = 0;   // index into method_phases(); -1 marks the
                           // two-step uniform calibration reading
    DetectorArm arm = DetectorArm::single;
    double value = 0.0;
    std::uint64_t seq = 0;
};

// Readings in schedule order plus everything needed to assemble and
// reconstruct them offline.
struct MeasurementSet {
    Method method = Method::cfsi;
    PatternMode mode = PatternMode::grayscale;
    int width = 0;
    int height = 0;
    double dc = 0.5;        // pattern DC term
    double contrast = 0.5;  // pattern modulation depth
    std::size_t coefficients_covered = 0;
    std::vector<MeasurementRecord> records;
};

struct AcquisitionConfig {
    Method method = Method::cfsi;
    PatternMode mode = PatternMode::grayscale;
    std::uint64_t budget = 0;      // displayed-pattern budget, not readings
    NoiseSpec noise;
    double background_flux = 0.0;  // constant stray flux added to every
                                   // pattern reading (not the two-step
                                   // calibration reading)
};

// Bucket-detector reading: mean over pixels of object * pattern.
// Mean (not sum) normalization keeps readings on the object's 8-bit
// scale, so the sigma values used in sweeps are meaningful.
double measure(const Image& object, const GrayPattern& pattern);
double measure(const Image& object, const BinaryPattern& pattern);

// value + Gaussian(mu, sigma^2) keyed by (master_seed, seq, arm).
// sigma == 0 returns value unchanged (exactly).
double add_noise(double value, const NoiseSpec& noise, std::uint64_t seq, DetectorArm arm);

// Dual-arm readout of one displayed pattern: (I_plus, I_minus) where
// I_plus sees the pattern, I_minus its complement, both offset by
// `background` before noise. The two arms get independent noise draws
// keyed by the same seq.
std::pair<double, double> measure_complementary(const Image& object,
                                                const BinaryPattern& pattern,
                                                const NoiseSpec& noise,
                                                std::uint64_t seq,
                                                double background = 0.0);
std::pair<double, double> measure_complementary(const Image& object,
                                                const GrayPattern& pattern,
                                                const NoiseSpec& noise,
                                                std::uint64_t seq,
                                                double background = 0.0);

// Walk the schedule in order, displaying each coefficient's phase set
// until the pattern budget runs out (a partially-afforded trailing
// coefficient is dropped). Binary mode routes every pattern through
// floyd_steinberg. Two-step additionally takes one uniform-pattern
// calibration reading up front, outside the budget.
MeasurementSet acquire(const Image& object,
                       const std::vector<FrequencyCoord>& schedule,
                       const AcquisitionConfig& config);

// CSV round-trip: a "# key=value ..." metadata line, a header, then
// one row per record: seq,u,v,phase_index,arm,value (15 significant
// digits).
void write_measurements_csv(std::ostream& out, const MeasurementSet& set);
MeasurementSet read_measurements_csv(std::istream& in);

}  // namespace fsi
