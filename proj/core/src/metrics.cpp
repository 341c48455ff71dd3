#include "fsi/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace fsi {

double mse(const Image& reference, const Image& test) {
    if (!reference.same_shape(test))
        throw std::invalid_argument("mse: dimension mismatch (" +
                                    std::to_string(reference.width) + "x" +
                                    std::to_string(reference.height) + " vs " +
                                    std::to_string(test.width) + "x" +
                                    std::to_string(test.height) + ")");
    if (reference.pixel_count() == 0)
        throw std::invalid_argument("mse: empty images");

    double acc = 0.0;
    for (std::size_t i = 0; i < reference.data.size(); ++i) {
        const double d = test.data[i] - reference.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(reference.pixel_count());
}

QualityReport psnr(const Image& reference, const Image& test, int bit_depth) {
    if (bit_depth < 1 || bit_depth > 32)
        throw std::invalid_argument("psnr: bit_depth out of range: " +
                                    std::to_string(bit_depth));
    QualityReport report;
    report.bit_depth = bit_depth;
    report.mse = mse(reference, test);
    if (report.mse == 0.0) {
        report.psnr_db = std::numeric_limits<double>::infinity();
    } else {
        const double peak = std::pow(2.0, bit_depth) - 1.0;
        report.psnr_db = 10.0 * std::log10(peak * peak / report.mse);
    }
    return report;
}

}  // namespace fsi
