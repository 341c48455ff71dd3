#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace fsi {

// Row-major raster of real-valued pixels. Values are nominally in
// [0, 255] (8-bit scenes promoted to double), but the container itself
// does not clamp; quantization happens only on PGM export.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // size = width * height

    Image() = default;
    Image(int w, int h, double fill = 0.0);

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    std::size_t pixel_count() const { return data.size(); }
    bool same_shape(const Image& other) const {
        return width == other.width && height == other.height;
    }
};

// Raised for any defect in a PGM stream: bad magic, malformed or
// truncated header, unsupported maxval, short or out-of-range samples.
struct PgmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Readers accept binary "P5" and ASCII "P2", maxval 255 only.
// The writer always emits P5 with maxval 255; samples are clamped to
// [0, 255] and rounded half-up.
Image parse_pgm(std::istream& in);
void write_pgm(const Image& img, std::ostream& out);

Image load_image(const std::filesystem::path& path);
void save_image(const Image& img, const std::filesystem::path& path);

}  // namespace fsi
