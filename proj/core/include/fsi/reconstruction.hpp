#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fsi/acquisition.hpp"
#include "fsi/image.hpp"

namespace fsi {

// Complex Fourier coefficients on the (u, v) grid, with a mask telling
// which entries were actually measured (or filled by symmetrize).
// Unfilled entries read as 0, the usual zero-fill treatment of
// unmeasured frequencies.
struct SpectrumGrid {
    int width = 0;
    int height = 0;
    std::vector<std::complex<double>> coeffs;
    std::vector<std::uint8_t> filled;

    SpectrumGrid() = default;
    SpectrumGrid(int w, int h);

    std::complex<double> at(int u, int v) const {
        return coeffs[static_cast<std::size_t>(v) * width + u];
    }
    bool is_filled(int u, int v) const {
        return filled[static_cast<std::size_t>(v) * width + u] != 0;
    }
    void set(int u, int v, std::complex<double> value) {
        coeffs[static_cast<std::size_t>(v) * width + u] = value;
        filled[static_cast<std::size_t>(v) * width + u] = 1;
    }
};

// Per-method spectrum assembly. The coefficient convention matches the
// mean-normalized forward transform F(u,v) = (1/WH) sum O exp(-j...),
// so a noiseless grayscale acquisition reproduces the DFT of the
// object exactly (up to round-off).
//
// cfsi:       ((Iplus_0 - Iminus_0) + j(Iplus_90 - Iminus_90)) / (2b)
// four-step:  ((I_0 - I_180) + j(I_90 - I_270)) / (2b)
// three-step: ((2 I_0 - I_1 - I_2) + j sqrt(3) (I_1 - I_2)) / (3b),
//             phases {0, 2pi/3, 4pi/3}
// two-step:   ((I_0 - dc_reading) + j(I_90 - dc_reading)) / b
//
// All throw std::runtime_error ("integrity error") when a claimed
// coefficient is missing a phase or arm, and std::invalid_argument for
// contrast <= 0.
SpectrumGrid assemble_cfsi(const MeasurementSet& set, double contrast);
SpectrumGrid assemble_four_step(const MeasurementSet& set, double contrast);
SpectrumGrid assemble_three_step(const MeasurementSet& set, double contrast);
SpectrumGrid assemble_two_step(const MeasurementSet& set, double contrast, double dc_reading);

// Dispatch on set.method using set.contrast; for two-step the
// calibration reading is located by its phase_index == -1 tag
// (missing -> integrity error).
SpectrumGrid assemble(const MeasurementSet& set);

// Fill conjugate positions (-u mod W, -v mod H) with conjugates;
// self-conjugate entries get their imaginary part (measurement noise
// on a necessarily-real value) dropped. If the input already carries
// both members of a pair they must agree, else integrity error.
SpectrumGrid symmetrize(const SpectrumGrid& half);

// Inverse transform O'(x,y) = sum coeffs[u,v] exp(+j 2 pi (ux/W + vy/H)),
// the inverse of the mean-normalized forward convention above. The
// imaginary residue must stay below 1e-6 * max|Re| (anything larger
// means the spectrum was not conjugate-symmetric); the real part is
// clipped to [0, 255].
Image reconstruct(const SpectrumGrid& spectrum);

// Debug dump: header then "u,v,re,im,filled" per grid entry.
void write_spectrum_csv(std::ostream& out, const SpectrumGrid& grid);

}  // namespace fsi
