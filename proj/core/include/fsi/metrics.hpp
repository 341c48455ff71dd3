#pragma once

#include "fsi/image.hpp"

namespace fsi {

struct QualityReport {
    double mse = 0.0;
    double psnr_db = 0.0;  // +inf when mse == 0
    int bit_depth = 8;
};

// Mean squared error over all pixels. Throws std::invalid_argument on
// shape mismatch or empty images.
double mse(const Image& reference, const Image& test);

// PSNR against a (2^bit_depth - 1) peak. A zero-MSE pair reports
// psnr_db = +infinity.
QualityReport psnr(const Image& reference, const Image& test, int bit_depth = 8);

}  // namespace fsi
