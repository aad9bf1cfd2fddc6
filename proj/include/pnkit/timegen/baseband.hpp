#pragma once

#include <complex>
#include <vector>

#include "pnkit/model/oscillator.hpp"
#include "pnkit/timegen/series.hpp"

namespace pnkit {

/// Baseband-equivalent of the disturbed oscillator's first harmonic: the
/// carrier is removed and only the phase modulation e^{j phi[n]} remains,
/// phi[n] = 2 pi f0 alpha[n]. Every sample has magnitude 1.
inline std::vector<std::complex<double>> alpha_to_baseband(const TimeShiftSeries& s, double f0) {
    require(f0 > 0.0, "alpha_to_baseband: f0 must be > 0");
    std::vector<std::complex<double>> out(s.samples.size());
    const double w0 = 2.0 * pi * f0;
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        const double phi = w0 * s.samples[i];
        out[i] = {std::cos(phi), std::sin(phi)};
    }
    return out;
}

}  // namespace pnkit
