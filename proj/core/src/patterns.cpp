#include "fsi/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fsi {

const char* to_string(CoordKind kind) {
    return kind == CoordKind::self_conjugate ? "self-conjugate" : "half-plane-representative";
}

GrayPattern fourier_pattern(const PatternParams& params) {
    if (params.width < 1 || params.height < 1)
        throw std::invalid_argument("fourier_pattern: dimensions must be >= 1");
    if (params.contrast <= 0.0)
        throw std::invalid_argument("fourier_pattern: contrast must be > 0");
    if (params.dc + params.contrast > 1.0 || params.dc - params.contrast < 0.0)
        throw std::invalid_argument(
            "fourier_pattern: dc/contrast leave [0,1] (dc=" + std::to_string(params.dc) +
            ", contrast=" + std::to_string(params.contrast) + ")");

    GrayPattern p;
    p.width = params.width;
    p.height = params.height;
    p.params = params;
    p.data.resize(static_cast<std::size_t>(p.width) * p.height);
    const double tau = 2.0 * std::numbers::pi;
    for (int y = 0; y < p.height; ++y) {
        for (int x = 0; x < p.width; ++x) {
            const double arg = tau * (params.fx * x + params.fy * y) + params.phase;
            p.at(x, y) = params.dc + params.contrast * std::cos(arg);
        }
    }
    return p;
}

GrayPattern complement_gray(const GrayPattern& pattern) {
    GrayPattern out = pattern;
    const double two_dc = 2.0 * pattern.params.dc;
    for (double& v : out.data) v = two_dc - v;
    out.params.phase = pattern.params.phase + std::numbers::pi;
    return out;
}

BinaryPattern floyd_steinberg(const GrayPattern& pattern) {
    const int w = pattern.width;
    const int h = pattern.height;
    BinaryPattern out;
    out.width = w;
    out.height = h;
    out.source = BinarySource::spatial_dither;
    out.data.resize(static_cast<std::size_t>(w) * h);

    // Working copy accumulates diffused error on top of the input.
    std::vector<double> buf = pattern.data;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double old = buf[i];
            const std::uint8_t bit = old >= 0.5 ? 1 : 0;
            out.data[i] = bit;
            const double err = old - bit;
            // 7/16 right, 3/16 below-left, 5/16 below, 1/16 below-right;
            // shares that fall off the grid are dropped.
            if (x + 1 < w) buf[i + 1] += err * (7.0 / 16.0);
            if (y + 1 < h) {
                const std::size_t below = i + static_cast<std::size_t>(w);
                if (x > 0) buf[below - 1] += err * (3.0 / 16.0);
                buf[below] += err * (5.0 / 16.0);
                if (x + 1 < w) buf[below + 1] += err * (1.0 / 16.0);
            }
        }
    }
    return out;
}

BinaryPattern complement_binary(const BinaryPattern& pattern) {
    BinaryPattern out = pattern;
    out.source = BinarySource::complement;
    for (std::uint8_t& v : out.data) v = v ? 0 : 1;
    return out;
}

GrayPattern quantize8(const GrayPattern& pattern) {
    GrayPattern out = pattern;
    for (double& v : out.data)
        v = static_cast<double>(std::lround(255.0 * v)) / 255.0;
    return out;
}

std::array<BinaryPattern, 8> temporal_bitplanes(const GrayPattern& pattern) {
    std::array<BinaryPattern, 8> planes;
    for (int k = 0; k < 8; ++k) {
        planes[k].width = pattern.width;
        planes[k].height = pattern.height;
        planes[k].source = BinarySource::bit_plane;
        planes[k].bit_index = k;
        planes[k].data.resize(pattern.data.size());
    }
    for (std::size_t i = 0; i < pattern.data.size(); ++i) {
        const long q = std::lround(255.0 * pattern.data[i]);
        for (int k = 0; k < 8; ++k)
            planes[k].data[i] = static_cast<std::uint8_t>((q >> k) & 1);
    }
    return planes;
}

CoordKind classify_coord(int u, int v, int width, int height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("classify_coord: bad grid size");
    if (u < 0 || u >= width || v < 0 || v >= height)
        throw std::invalid_argument("classify_coord: (u,v) outside grid");
    const bool self = (2 * u) % width == 0 && (2 * v) % height == 0;
    return self ? CoordKind::self_conjugate : CoordKind::representative;
}

std::vector<FrequencyCoord> frequency_schedule(int width, int height) {
    if (width < 2 || height < 2)
        throw std::invalid_argument("frequency_schedule: dimensions must be >= 2");
    if (width % 2 != 0 || height % 2 != 0)
        throw std::invalid_argument("frequency_schedule: dimensions must be even");

    // One representative per conjugate pair: rows v = 0 and v = H/2
    // keep u <= W/2, every other row below the horizontal midline keeps
    // all u. Total W*H/2 + 2.
    std::vector<FrequencyCoord> coords;
    coords.reserve(static_cast<std::size_t>(width) * height / 2 + 2);
    for (int v = 0; v <= height / 2; ++v) {
        const bool edge_row = v == 0 || v == height / 2;
        const int u_end = edge_row ? width / 2 : width - 1;
        for (int u = 0; u <= u_end; ++u)
            coords.push_back({u, v, classify_coord(u, v, width, height)});
    }

    auto wrapped_r2 = [width, height](const FrequencyCoord& c) {
        const long du = std::min(c.u, width - c.u);
        const long dv = std::min(c.v, height - c.v);
        return du * du + dv * dv;
    };
    std::sort(coords.begin(), coords.end(),
              [&](const FrequencyCoord& a, const FrequencyCoord& b) {
                  const long ra = wrapped_r2(a), rb = wrapped_r2(b);
                  if (ra != rb) return ra < rb;
                  if (a.v != b.v) return a.v < b.v;
                  return a.u < b.u;
              });
    return coords;
}

Image to_image(const GrayPattern& pattern) {
    Image img(pattern.width, pattern.height);
    for (std::size_t i = 0; i < pattern.data.size(); ++i)
        img.data[i] = 255.0 * pattern.data[i];
    return img;
}

Image to_image(const BinaryPattern& pattern) {
    Image img(pattern.width, pattern.height);
    for (std::size_t i = 0; i < pattern.data.size(); ++i)
        img.data[i] = pattern.data[i] ? 255.0 : 0.0;
    return img;
}

void write_schedule_csv(std::ostream& out, const std::vector<FrequencyCoord>& schedule) {
    out << "index,u,v,kind\n";
    for (std::size_t i = 0; i < schedule.size(); ++i)
        out << i << ',' << schedule[i].u << ',' << schedule[i].v << ','
            << to_string(schedule[i].kind) << '\n';
}

}  // namespace fsi
