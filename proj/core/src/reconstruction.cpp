#include "fsi/reconstruction.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fsi {

SpectrumGrid::SpectrumGrid(int w, int h) {
    if (w < 1 || h < 1)
        throw std::invalid_argument("SpectrumGrid: dimensions must be >= 1");
    width = w;
    height = h;
    coeffs.assign(static_cast<std::size_t>(w) * h, {0.0, 0.0});
    filled.assign(static_cast<std::size_t>(w) * h, 0);
}

namespace {

std::string coord_str(const FrequencyCoord& c) {
    return "(" + std::to_string(c.u) + "," + std::to_string(c.v) + ")";
}

// Readings of one coefficient, keyed by (phase_index, arm).
struct CoeffReadings {
    FrequencyCoord coord;
    const MeasurementRecord* begin = nullptr;
    const MeasurementRecord* end = nullptr;

    std::size_t count() const { return static_cast<std::size_t>(end - begin); }

    double value(int phase_index, DetectorArm arm) const {
        const MeasurementRecord* found = nullptr;
        for (const MeasurementRecord* r = begin; r != end; ++r) {
            if (r->phase_index == phase_index && r->arm == arm) {
                if (found)
                    throw std::runtime_error("integrity error: coefficient " +
                                             coord_str(coord) + " has duplicate reading " +
                                             "phase " + std::to_string(phase_index) +
                                             " arm " + to_string(arm));
                found = r;
            }
        }
        if (!found)
            throw std::runtime_error("integrity error: coefficient " + coord_str(coord) +
                                     " missing reading phase " + std::to_string(phase_index) +
                                     " arm " + to_string(arm));
        return found->value;
    }
};

// Walk maximal runs of records sharing one coordinate (records arrive
// in schedule order, so a coefficient's readings are contiguous).
// Calibration rows (phase_index < 0) are skipped.
template <typename Fn>
SpectrumGrid assemble_grid(const MeasurementSet& set, double contrast,
                           std::size_t readings_per_coeff, Fn&& coefficient) {
    if (contrast <= 0.0)
        throw std::invalid_argument("assemble: contrast must be > 0");
    SpectrumGrid grid(set.width, set.height);

    const std::vector<MeasurementRecord>& rs = set.records;
    std::size_t i = 0;
    while (i < rs.size()) {
        if (rs[i].phase_index < 0) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < rs.size() && rs[j].phase_index >= 0 && rs[j].coord.u == rs[i].coord.u &&
               rs[j].coord.v == rs[i].coord.v)
            ++j;

        CoeffReadings chunk{rs[i].coord, rs.data() + i, rs.data() + j};
        if (chunk.coord.u < 0 || chunk.coord.u >= set.width || chunk.coord.v < 0 ||
            chunk.coord.v >= set.height)
            throw std::runtime_error("integrity error: coefficient " + coord_str(chunk.coord) +
                                     " outside the spectrum grid");
        if (chunk.count() != readings_per_coeff)
            throw std::runtime_error("integrity error: coefficient " + coord_str(chunk.coord) +
                                     " has " + std::to_string(chunk.count()) +
                                     " readings, expected " +
                                     std::to_string(readings_per_coeff));
        if (grid.is_filled(chunk.coord.u, chunk.coord.v))
            throw std::runtime_error("integrity error: coefficient " + coord_str(chunk.coord) +
                                     " measured twice");
        grid.set(chunk.coord.u, chunk.coord.v, coefficient(chunk));
        i = j;
    }
    return grid;
}

}  // namespace

SpectrumGrid assemble_cfsi(const MeasurementSet& set, double contrast) {
    return assemble_grid(set, contrast, 4, [contrast](const CoeffReadings& c) {
        const double re = c.value(0, DetectorArm::plus) - c.value(0, DetectorArm::minus);
        const double im = c.value(1, DetectorArm::plus) - c.value(1, DetectorArm::minus);
        return std::complex<double>(re, im) / (2.0 * contrast);
    });
}

SpectrumGrid assemble_four_step(const MeasurementSet& set, double contrast) {
    return assemble_grid(set, contrast, 4, [contrast](const CoeffReadings& c) {
        const double re = c.value(0, DetectorArm::single) - c.value(2, DetectorArm::single);
        const double im = c.value(1, DetectorArm::single) - c.value(3, DetectorArm::single);
        return std::complex<double>(re, im) / (2.0 * contrast);
    });
}

SpectrumGrid assemble_three_step(const MeasurementSet& set, double contrast) {
    // Inverting I_theta = a*S + b(Re F cos(theta) + Im F sin(theta)) at
    // theta = 0, 2pi/3, 4pi/3.
    return assemble_grid(set, contrast, 3, [contrast](const CoeffReadings& c) {
        const double i0 = c.value(0, DetectorArm::single);
        const double i1 = c.value(1, DetectorArm::single);
        const double i2 = c.value(2, DetectorArm::single);
        const double re = 2.0 * i0 - i1 - i2;
        const double im = std::sqrt(3.0) * (i1 - i2);
        return std::complex<double>(re, im) / (3.0 * contrast);
    });
}

SpectrumGrid assemble_two_step(const MeasurementSet& set, double contrast, double dc_reading) {
    return assemble_grid(set, contrast, 2, [contrast, dc_reading](const CoeffReadings& c) {
        const double re = c.value(0, DetectorArm::single) - dc_reading;
        const double im = c.value(1, DetectorArm::single) - dc_reading;
        return std::complex<double>(re, im) / contrast;
    });
}

SpectrumGrid assemble(const MeasurementSet& set) {
    switch (set.method) {
        case Method::cfsi:
            return assemble_cfsi(set, set.contrast);
        case Method::four_step:
            return assemble_four_step(set, set.contrast);
        case Method::three_step:
            return assemble_three_step(set, set.contrast);
        case Method::two_step: {
            const MeasurementRecord* calibration = nullptr;
            for (const MeasurementRecord& r : set.records)
                if (r.phase_index < 0) {
                    calibration = &r;
                    break;
                }
            if (!calibration)
                throw std::runtime_error(
                    "integrity error: two-step set has no calibration reading");
            return assemble_two_step(set, set.contrast, calibration->value);
        }
    }
    throw std::logic_error("assemble: bad method enum");
}

SpectrumGrid symmetrize(const SpectrumGrid& half) {
    const int w = half.width;
    const int h = half.height;
    SpectrumGrid full(w, h);

    auto mismatch = [](std::complex<double> a, std::complex<double> b) {
        const double tol = 1e-12 * std::max(1.0, std::abs(b));
        return std::abs(a - b) > tol;
    };

    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            if (!half.is_filled(u, v)) continue;
            const std::complex<double> val = half.at(u, v);
            const int cu = (w - u) % w;
            const int cv = (h - v) % h;
            if (cu == u && cv == v) {
                // Self-conjugate: must be real; the measured imaginary
                // part is pure noise and is dropped.
                full.set(u, v, {val.real(), 0.0});
                continue;
            }
            if (full.is_filled(u, v)) {
                if (mismatch(full.at(u, v), val))
                    throw std::runtime_error(
                        "integrity error: conjugate pair (" + std::to_string(u) + "," +
                        std::to_string(v) + ") filled with inconsistent values");
            } else {
                full.set(u, v, val);
            }
            const std::complex<double> conj_val = std::conj(val);
            if (full.is_filled(cu, cv)) {
                if (mismatch(full.at(cu, cv), conj_val))
                    throw std::runtime_error(
                        "integrity error: conjugate pair (" + std::to_string(cu) + "," +
                        std::to_string(cv) + ") filled with inconsistent values");
            } else {
                full.set(cu, cv, conj_val);
            }
        }
    }
    return full;
}

namespace {

struct FftwDeleter {
    void operator()(void* p) const { fftw_free(p); }
};

// fftw planning is not thread-safe; execution of a private plan is.
std::mutex g_fftw_plan_mutex;

}  // namespace

Image reconstruct(const SpectrumGrid& spectrum) {
    const int w = spectrum.width;
    const int h = spectrum.height;
    if (w < 1 || h < 1)
        throw std::invalid_argument("reconstruct: empty spectrum");
    const std::size_t n = static_cast<std::size_t>(w) * h;

    // fftw_malloc keeps the alignment (and therefore the chosen plan
    // and its rounding behaviour) identical run to run.
    std::unique_ptr<fftw_complex, FftwDeleter> in(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
    std::unique_ptr<fftw_complex, FftwDeleter> out(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
    if (!in || !out)
        throw std::runtime_error("reconstruct: fftw_malloc failed");

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        // Rows are v (height), columns u (width); FFTW_BACKWARD is the
        // unnormalized e^{+j} sum, matching the mean-normalized forward
        // convention with no extra scaling.
        plan = fftw_plan_dft_2d(h, w, in.get(), out.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    if (!plan)
        throw std::runtime_error("reconstruct: FFTW planning failed");

    for (std::size_t i = 0; i < n; ++i) {
        in.get()[i][0] = spectrum.coeffs[i].real();
        in.get()[i][1] = spectrum.coeffs[i].imag();
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }

    double max_re = 0.0;
    double max_im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        max_re = std::max(max_re, std::abs(out.get()[i][0]));
        max_im = std::max(max_im, std::abs(out.get()[i][1]));
    }
    if (max_im > 1e-6 * max_re)
        throw std::runtime_error(
            "reconstruct: imaginary residue " + std::to_string(max_im) + " vs max real " +
            std::to_string(max_re) + "; spectrum is not conjugate-symmetric");

    Image img(w, h);
    for (std::size_t i = 0; i < n; ++i)
        img.data[i] = std::clamp(out.get()[i][0], 0.0, 255.0);
    return img;
}

void write_spectrum_csv(std::ostream& out, const SpectrumGrid& grid) {
    char buf[96];
    out << "u,v,re,im,filled\n";
    for (int v = 0; v < grid.height; ++v) {
        for (int u = 0; u < grid.width; ++u) {
            const std::complex<double> c = grid.at(u, v);
            std::snprintf(buf, sizeof(buf), "%d,%d,%.15g,%.15g,%d", u, v, c.real(), c.imag(),
                          grid.is_filled(u, v) ? 1 : 0);
            out << buf << '\n';
        }
    }
}

}  // namespace fsi
