#pragma once

#include <cmath>
#include <string>

#include "pnkit/errors.hpp"

namespace pnkit {

/// A free-running oscillator driven by white noise on its control voltage.
/// The stochastic time shift alpha(t) is a Wiener process scaled by the
/// oscillator constant c (seconds); c fully characterizes the phase-noise
/// spectrum of the oscillator.
struct OscillatorSpec {
    double f0 = 0.0;  // carrier frequency, Hz
    double c = 0.0;   // oscillator constant, s
    int k = 2;        // roll-off exponent (dB/decade = -10k in the tail)

    OscillatorSpec() = default;
    OscillatorSpec(double f0_, double c_, int k_ = 2) : f0(f0_), c(c_), k(k_) {
        require(std::isfinite(f0) && f0 > 0.0, "oscillator: f0 must be > 0");
        require(std::isfinite(c) && c >= 0.0, "oscillator: c must be >= 0");
        require(k >= 1, "oscillator: k must be >= 1");
    }
};

/// 3 dB cut-off of the Lorentzian phase-noise spectrum ("phase noise
/// bandwidth"): f_3dB = pi * f0^2 * c.
inline double f_3db(const OscillatorSpec& s) { return pi * s.f0 * s.f0 * s.c; }

/// Peak of the single-sideband spectrum, at zero offset: -10 log10(pi^2 f0^2 c).
inline double l_max_dbc(const OscillatorSpec& s) {
    require(s.c > 0.0, "degenerate: ideal oscillator has Dirac PSD");
    return -10.0 * std::log10(pi * pi * s.f0 * s.f0 * s.c);
}

/// Single-sideband phase noise of a free-running oscillator at offset f_offs,
/// in dBc/Hz referenced to 1 Hz:
///   L(f_offs) = 10 log10( f0^2 c / (f_offs^2 + pi^2 f0^4 c^2) ).
/// Even in f_offs; finite at f_offs = 0.
inline double lorentzian_psd_dbc(const OscillatorSpec& s, double f_offs) {
    require(s.c > 0.0, "degenerate: ideal oscillator has Dirac PSD");
    require(std::isfinite(f_offs), "lorentzian_psd: f_offs must be finite");
    const double half_width = f_3db(s);  // Hz
    return 10.0 * std::log10(s.f0 * s.f0 * s.c / (f_offs * f_offs + half_width * half_width));
}

/// Linear-power version of the above (1/Hz). Integrates to 1 over all offsets.
inline double lorentzian_psd_linear(const OscillatorSpec& s, double f_offs) {
    require(s.c > 0.0, "degenerate: ideal oscillator has Dirac PSD");
    const double h = f_3db(s);
    return s.f0 * s.f0 * s.c / (f_offs * f_offs + h * h);
}

/// Normalized envelope ACF of the asymptotic oscillator output (first
/// harmonic, unit carrier power): exp(-0.5 (2 pi f0)^2 c |tau|).
inline double vco_output_acf(const OscillatorSpec& s, double tau) {
    const double w0 = 2.0 * pi * s.f0;
    return std::exp(-0.5 * w0 * w0 * s.c * std::abs(tau));
}

}  // namespace pnkit
