#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fsi/image.hpp"

namespace fsi {

// Parameters of one sinusoidal fringe pattern
//   P(x, y) = dc + contrast * cos(2*pi*(fx*x + fy*y) + phase)
// fx, fy are in cycles per pixel; with dc = contrast = 0.5 the pattern
// spans exactly [0, 1].
struct PatternParams {
    double fx = 0.0;
    double fy = 0.0;
    double phase = 0.0;
    double dc = 0.5;
    double contrast = 0.5;
    int width = 0;
    int height = 0;
};

// Continuous-valued pattern, values in [0, 1] for the default dc/contrast.
struct GrayPattern {
    int width = 0;
    int height = 0;
    std::vector<double> data;
    PatternParams params;

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

// How a binary pattern was produced; kept around so exported stacks can
// be labelled and so complements know what they are complements of.
enum class BinarySource {
    spatial_dither,   // Floyd-Steinberg on a gray pattern
    bit_plane,        // one temporal bit-plane of an 8-bit quantization
    complement,       // bitwise NOT of another binary pattern
    random,           // externally supplied random mask
};

struct BinaryPattern {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // strictly 0 or 1
    BinarySource source = BinarySource::spatial_dither;
    int bit_index = -1;  // only meaningful for source == bit_plane (0 = LSB)

    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

// One spatial-frequency sample (u, v) on a width x height grid, i.e.
// fx = u / width, fy = v / height. A coordinate is self-conjugate when
// (-u, -v) aliases back onto (u, v) modulo the grid.
enum class CoordKind { representative, self_conjugate };

struct FrequencyCoord {
    int u = 0;
    int v = 0;
    CoordKind kind = CoordKind::representative;
};

const char* to_string(CoordKind kind);

// Sample the fringe equation on the integer pixel grid.
// Throws std::invalid_argument for non-positive dimensions, for
// contrast <= 0, or when dc +- contrast leaves [0, 1].
GrayPattern fourier_pattern(const PatternParams& params);

// Pointwise complement 2*dc - P: the pattern that an illumination
// device shows on the "other" output arm. For dc = 0.5 this is 1 - P.
GrayPattern complement_gray(const GrayPattern& pattern);

// Floyd-Steinberg error diffusion, raster order (left-to-right,
// top-to-bottom), threshold at 0.5 (>= 0.5 -> 1), error shares
// 7/16 right, 3/16 below-left, 5/16 below, 1/16 below-right.
// Error falling outside the grid is discarded. Input values are
// expected in [0, 1].
BinaryPattern floyd_steinberg(const GrayPattern& pattern);

// Bitwise complement; source is marked BinarySource::complement.
BinaryPattern complement_binary(const BinaryPattern& pattern);

// The 8-bit display asset of a pattern: v -> round(255*v)/255. This is
// the representation a DMD controller actually stores (the same
// quantization the bit-plane decomposition applies), and the input the
// pattern-difference comparison dithers from. Idempotent.
GrayPattern quantize8(const GrayPattern& pattern);

// Quantize to 8 bits (round(255 * v)) and slice into bit-planes,
// index 0 = least significant. Displaying plane k for a time slice
// proportional to 2^k reproduces the gray pattern.
std::array<BinaryPattern, 8> temporal_bitplanes(const GrayPattern& pattern);

// Half-plane acquisition schedule: every (u, v) kept is either
// self-conjugate or a representative whose conjugate partner is not in
// the list. Rows v = 0 and v = height/2 keep u <= width/2 only; rows
// 0 < v < height/2 keep all u. Sorted by ascending aliased radial
// distance min(u, W-u)^2 + min(v, H-v)^2, ties broken by (v, u), so
// the DC coordinate (0, 0) always comes first. Requires even
// dimensions >= 2; the result has width*height/2 + 2 entries.
std::vector<FrequencyCoord> frequency_schedule(int width, int height);

// Classification used by frequency_schedule, exposed for callers that
// build coordinates by hand.
CoordKind classify_coord(int u, int v, int width, int height);

// Rescale to [0, 255] rasters for PGM export.
Image to_image(const GrayPattern& pattern);
Image to_image(const BinaryPattern& pattern);

// One row per coordinate: "index,u,v,kind" after a header line.
void write_schedule_csv(std::ostream& out, const std::vector<FrequencyCoord>& schedule);

}  // namespace fsi
