#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pnkit/model/oscillator.hpp"

namespace pnkit {

/// A locked first-order PLL: reference oscillator, VCO, loop bandwidth and
/// divider ratio. The loop bandwidth absorbs the detector gain and control
/// sensitivity (f_pll = k_pfd * sqrt(c_ctl) / 2 pi); neither appears alone.
struct PllSpec {
    OscillatorSpec ref;
    OscillatorSpec vco;
    double f_pll = 0.0;  // loop bandwidth, Hz
    double m = 1.0;      // divider ratio, vco.f0 = m * ref.f0

    PllSpec() = default;
    PllSpec(OscillatorSpec ref_, OscillatorSpec vco_, double f_pll_, double m_ = 1.0)
        : ref(ref_), vco(vco_), f_pll(f_pll_), m(m_) {
        require(std::isfinite(f_pll) && f_pll > 0.0, "pll: f_pll must be > 0");
        require(m >= 1.0, "pll: divider ratio must be >= 1");
        // lock assumption: the divided output tracks the reference
        require(std::abs(ref.f0 * m - vco.f0) <= 1e-9 * vco.f0,
                "pll: not locked (ref.f0 * m != vco.f0)");
    }

    double omega_loop() const { return 2.0 * pi * f_pll; }  // rad/s
};

/// ACF value of the PLL output time-shift process, with the arguments it was
/// evaluated at. Units of value: s^2.
struct AcfValue {
    double t = 0.0;
    double tau = 0.0;
    double value = 0.0;
};

enum class VarianceMode { exact, approx };

struct VarianceValue {
    double t = 0.0;
    VarianceMode mode = VarianceMode::exact;
    double value = 0.0;  // s^2
};

/// Closed-form ACF R(t, t+tau) of alpha_PLL for a first-order loop. The
/// printed form assumes tau >= 0; the symmetric extension substitutes
/// t -> min(t, t+tau), matching the min() convention of the underlying
/// Wiener term.
inline AcfValue pll_acf(const PllSpec& p, double t, double tau) {
    require(t >= 0.0, "pll_acf: t must be >= 0");
    require(t + tau >= 0.0, "pll_acf: t + tau must be >= 0");
    const double w = p.omega_loop();
    const double t_min = std::min(t, t + tau);
    const double t_max = std::max(t, t + tau);
    const double at = std::abs(tau);
    const double c_r = p.ref.c, c_v = p.vco.c;

    const double term_ou = (c_v + c_r) / (2.0 * w) *
                           (std::exp(-w * at) - std::exp(-w * (t_min + t_max)));
    const double term_cross = -c_r / w *
                              (std::exp(-w * at) - std::exp(-w * t_max) + 1.0 - std::exp(-w * t_min));
    const double term_ref = c_r * t_min;
    return {t, tau, term_ou + term_cross + term_ref};
}

/// Var(alpha_PLL(t)). Exact mode is pll_acf(t, 0); approx mode is the
/// collapsed single-exponential form (c_VCO - 3 c_REF)/(4 pi f_PLL) *
/// (1 - e^{-4 pi f_PLL t}) + c_REF t. Both grow as c_REF t for large t.
inline VarianceValue pll_variance(const PllSpec& p, double t, VarianceMode mode = VarianceMode::exact) {
    require(t >= 0.0, "pll_variance: t must be >= 0");
    if (mode == VarianceMode::exact) {
        return {t, mode, pll_acf(p, t, 0.0).value};
    }
    const double w = p.omega_loop();
    const double v = (p.vco.c - 3.0 * p.ref.c) / (2.0 * w) * (1.0 - std::exp(-2.0 * w * t)) +
                     p.ref.c * t;
    return {t, mode, v};
}

/// Stationary plateau constant (c_VCO - 3 c_REF) / (4 pi f_PLL): the level the
/// variance holds once the loop has settled and before the c_REF t drift of
/// the reference dominates.
inline double pll_variance_plateau(const PllSpec& p) {
    return (p.vco.c - 3.0 * p.ref.c) / (2.0 * p.omega_loop());
}

namespace detail {

struct PoissonSeries {
    double rate = 0.0;   // mu of the Poisson weights
    int terms = 0;       // number of terms kept
    double mass = 0.0;   // total weight kept (<= 1)
};

}  // namespace detail

/// Single-sideband PSD of the locked PLL output in dBc/Hz: a Poisson-weighted
/// sum of Lorentzians. Weight rate mu = pi f0^2 (c_VCO - c_REF) / f_PLL with
/// f0 the output carrier; term n has half-width pi f0^2 c_REF + n f_PLL (Hz).
/// The sum is truncated once the kept Poisson mass exceeds 1 - tol (tail mass
/// bounds the spectral error at any offset); weights are not renormalized.
inline double pll_psd_series_dbc(const PllSpec& p, double f_offs, double tol = 1e-9,
                                 detail::PoissonSeries* info = nullptr) {
    require(p.vco.c > p.ref.c, "series weights undefined: requires c_VCO > c_REF");
    require(tol > 0.0 && tol <= 1e-3, "pll_psd_series: tol must be in (0, 1e-3]");
    require(p.ref.c > 0.0 || f_offs != 0.0,
            "degenerate: ideal reference puts a Dirac at zero offset");
    const double f0 = p.vco.f0;  // output carrier
    const double mu = pi * f0 * f0 * (p.vco.c - p.ref.c) / p.f_pll;
    const double h0 = pi * f0 * f0 * p.ref.c;
    const int max_terms = static_cast<int>(10.0 * (mu + 10.0));

    double weight = std::exp(-mu);  // eta_0
    double mass = 0.0;
    double sum = 0.0;
    int n = 0;
    while (n < max_terms) {
        const double h = h0 + n * p.f_pll;
        sum += weight * h / (pi * (h * h + f_offs * f_offs));
        mass += weight;
        if (mass >= 1.0 - tol) break;
        ++n;
        weight *= mu / n;
    }
    if (info) *info = {mu, n + 1, mass};
    return 10.0 * std::log10(sum);
}

/// Poisson weights eta_n of the series, truncated by the same rule.
inline std::vector<double> pll_psd_series_weights(const PllSpec& p, double tol = 1e-9) {
    require(p.vco.c > p.ref.c, "series weights undefined: requires c_VCO > c_REF");
    require(tol > 0.0 && tol <= 1e-3, "pll_psd_series: tol must be in (0, 1e-3]");
    const double f0 = p.vco.f0;
    const double mu = pi * f0 * f0 * (p.vco.c - p.ref.c) / p.f_pll;
    const int max_terms = static_cast<int>(10.0 * (mu + 10.0));
    std::vector<double> w;
    double weight = std::exp(-mu);
    double mass = 0.0;
    for (int n = 0; n < max_terms; ++n) {
        w.push_back(weight);
        mass += weight;
        if (mass >= 1.0 - tol) break;
        weight *= mu / (n + 1);
    }
    return w;
}

}  // namespace pnkit
