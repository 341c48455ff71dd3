#include "fsi/image.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace fsi {

Image::Image(int w, int h, double fill) {
    if (w < 1 || h < 1)
        throw std::invalid_argument("Image: dimensions must be >= 1, got " +
                                    std::to_string(w) + "x" + std::to_string(h));
    width = w;
    height = h;
    data.assign(static_cast<std::size_t>(w) * h, fill);
}

namespace {

// Next whitespace-delimited token, skipping '#' comments. Consumes the
// single delimiter after the token, which for P5 doubles as the
// mandatory separator before the sample bytes.
std::string next_token(std::istream& in, const char* phase) {
    std::string token;
    int c;
    for (;;) {
        c = in.get();
        if (c == std::char_traits<char>::eof())
            throw PgmError(std::string("truncated ") + phase);
        if (c == '#') {
            while (c != '\n' && c != std::char_traits<char>::eof()) c = in.get();
            continue;
        }
        if (!std::isspace(c)) break;
    }
    for (;;) {
        token.push_back(static_cast<char>(c));
        c = in.get();
        if (c == std::char_traits<char>::eof() || std::isspace(c)) break;
        if (c == '#') {  // comment glued to a token still ends it
            while (c != '\n' && c != std::char_traits<char>::eof()) c = in.get();
            break;
        }
    }
    return token;
}

int parse_header_int(std::istream& in, const char* what) {
    const std::string tok = next_token(in, "header");
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(tok, &used);
    } catch (const std::exception&) {
        throw PgmError(std::string("malformed header: bad ") + what + " '" + tok + "'");
    }
    if (used != tok.size())
        throw PgmError(std::string("malformed header: bad ") + what + " '" + tok + "'");
    return static_cast<int>(value);
}

}  // namespace

Image parse_pgm(std::istream& in) {
    const std::string magic = next_token(in, "header");
    if (magic != "P5" && magic != "P2")
        throw PgmError("unsupported magic '" + magic + "' (want P5 or P2)");

    const int width = parse_header_int(in, "width");
    const int height = parse_header_int(in, "height");
    const int maxval = parse_header_int(in, "maxval");
    if (width < 1 || height < 1)
        throw PgmError("malformed header: dimensions " + std::to_string(width) + "x" +
                       std::to_string(height));
    if (maxval != 255)
        throw PgmError("unsupported maxval " + std::to_string(maxval) + " (want 255)");

    Image img(width, height);
    const std::size_t n = img.pixel_count();
    if (magic == "P5") {
        std::string raw(n, '\0');
        in.read(raw.data(), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n)
            throw PgmError("truncated pixel data: expected " + std::to_string(n) +
                           " bytes, got " + std::to_string(in.gcount()));
        for (std::size_t i = 0; i < n; ++i)
            img.data[i] = static_cast<double>(static_cast<unsigned char>(raw[i]));
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::string tok = next_token(in, "pixel data");
            std::size_t used = 0;
            long value = 0;
            try {
                value = std::stol(tok, &used);
            } catch (const std::exception&) {
                throw PgmError("malformed sample '" + tok + "'");
            }
            if (used != tok.size())
                throw PgmError("malformed sample '" + tok + "'");
            if (value < 0 || value > 255)
                throw PgmError("sample out of range: " + std::to_string(value));
            img.data[i] = static_cast<double>(value);
        }
    }
    return img;
}

void write_pgm(const Image& img, std::ostream& out) {
    if (img.width < 1 || img.height < 1 ||
        img.data.size() != static_cast<std::size_t>(img.width) * img.height)
        throw std::invalid_argument("write_pgm: inconsistent image shape");

    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::string raw(img.pixel_count(), '\0');
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        double v = img.data[i];
        if (!(v > 0.0)) v = 0.0;  // also catches NaN
        if (v > 255.0) v = 255.0;
        raw[i] = static_cast<char>(static_cast<unsigned char>(std::floor(v + 0.5)));
    }
    out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
}

Image load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open image file: " + path.string());
    return parse_pgm(in);
}

void save_image(const Image& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open image file for writing: " + path.string());
    write_pgm(img, out);
    out.flush();
    if (!out)
        throw std::runtime_error("short write to image file: " + path.string());
}

}  // namespace fsi
