#pragma once

#include <cmath>
#include <optional>

#include "pnkit/model/oscillator.hpp"

namespace pnkit {

/// Parametric single-sideband phase-noise model of a locked PLL: a low-pass
/// plateau at -10 log10(pi f_3dB,REF), a transition shelf between f_tr and
/// f_pll, and (optionally) a flat noise floor entered at f_nf.
struct SpectrumModelParams {
    double f_3db_ref = 0.0;            // Hz
    double f_tr = 0.0;                 // Hz
    double f_pll = 0.0;                // Hz
    std::optional<double> f_nf;        // Hz; absent = no noise floor
    int k_ref = 3;
    int k_vco = 3;

    SpectrumModelParams() = default;
    SpectrumModelParams(double f_3db_ref_, double f_tr_, double f_pll_,
                        std::optional<double> f_nf_ = std::nullopt,
                        int k_ref_ = 3, int k_vco_ = 3)
        : f_3db_ref(f_3db_ref_), f_tr(f_tr_), f_pll(f_pll_), f_nf(f_nf_),
          k_ref(k_ref_), k_vco(k_vco_) {
        require(f_3db_ref > 0.0 && f_tr > f_3db_ref && f_pll > f_tr,
                "spectrum model: requires 0 < f_3db_ref < f_tr < f_pll");
        if (f_nf) require(*f_nf > f_pll, "spectrum model: requires f_pll < f_nf");
        require(k_ref >= 1 && k_vco >= 1, "spectrum model: exponents must be >= 1");
    }

    /// Level at f -> 0: -10 log10(pi f_3db_ref) dBc/Hz.
    double l_max_dbc() const { return -10.0 * std::log10(pi * f_3db_ref); }
};

/// Simplified PLL phase-noise spectrum (no noise floor), dBc/Hz:
///   L(f) = 10 log10[ 1/(pi f_3dB,REF)
///          * (1 + (f/f_TR)^k_ref) / (1 + (f/f_3dB,REF)^k_ref)
///          * 1 / (1 + (f/f_PLL)^k_vco) ].
inline double simplified_psd_dbc(const SpectrumModelParams& p, double f) {
    require(f > 0.0, "simplified_psd: f must be > 0");
    require(!p.f_nf, "simplified_psd: params carry a noise floor; use extended_psd");
    const double num = 1.0 + std::pow(f / p.f_tr, p.k_ref);
    const double den_ref = 1.0 + std::pow(f / p.f_3db_ref, p.k_ref);
    const double den_pll = 1.0 + std::pow(f / p.f_pll, p.k_vco);
    return p.l_max_dbc() + 10.0 * std::log10(num / den_ref / den_pll);
}

// Exponent convention for the extended model's denominators. The ratio form
// (f/f_c)^k keeps the -10k dB/decade roll-offs of the simplified model; the
// squared-ratio form (f^2/f_c^2)^k doubles them and is kept selectable for
// comparison only.
enum class FloorDenominator { ratio_pow_k, squared_ratio_pow_k };

/// Simplified spectrum with a flat noise floor entering at f_nf, dBc/Hz.
/// Tends to the simplified model pointwise as f_nf -> infinity; tends to a
/// flat floor of L_max + 10 log10[(f_3dB,REF/f_TR)^k_ref (f_PLL/f_NF)^k_vco]
/// as f -> infinity.
inline double extended_psd_dbc(const SpectrumModelParams& p, double f,
                               FloorDenominator conv = FloorDenominator::ratio_pow_k) {
    require(f > 0.0, "extended_psd: f must be > 0");
    require(p.f_nf.has_value(), "extended_psd: params carry no noise floor; use simplified_psd");
    const double num_tr = 1.0 + std::pow(f / p.f_tr, p.k_ref);
    const double num_nf = 1.0 + std::pow(f / *p.f_nf, p.k_vco);
    double den_ref, den_pll;
    if (conv == FloorDenominator::ratio_pow_k) {
        den_ref = 1.0 + std::pow(f / p.f_3db_ref, p.k_ref);
        den_pll = 1.0 + std::pow(f / p.f_pll, p.k_vco);
    } else {
        const double r1 = (f / p.f_3db_ref) * (f / p.f_3db_ref);
        const double r2 = (f / p.f_pll) * (f / p.f_pll);
        den_ref = 1.0 + std::pow(r1, p.k_ref);
        den_pll = 1.0 + std::pow(r2, p.k_vco);
    }
    return p.l_max_dbc() + 10.0 * std::log10(num_tr / den_ref * num_nf / den_pll);
}

/// Asymptotic noise-floor level of the extended model, dBc/Hz.
inline double extended_floor_dbc(const SpectrumModelParams& p) {
    require(p.f_nf.has_value(), "extended_floor: params carry no noise floor");
    return p.l_max_dbc() +
           10.0 * (p.k_ref * std::log10(p.f_3db_ref / p.f_tr) +
                   p.k_vco * std::log10(p.f_pll / *p.f_nf));
}

/// Plateau level of the transition shelf, dBc/Hz:
/// 10 log10( f_3dB,REF^(k_ref-1) / (pi f_TR^k_ref) ).
inline double transition_plateau_dbc(const SpectrumModelParams& p) {
    return p.l_max_dbc() + 10.0 * p.k_ref * std::log10(p.f_3db_ref / p.f_tr);
}

/// Frequency where the reference low-pass model crosses the VCO model's level
/// at f_PLL, i.e. the start of the transition shelf. Solves
/// L_REF(f_TR) = L_VCO(f_PLL) for low-pass models
/// L(f) = -10 log10[ pi f_3dB (1 + (f/f_3dB)^k) ]:
///   f_TR^k_ref = f_R^(k_ref-1) (f_V^k_vco + f_PLL^k_vco) / f_V^(k_vco-1)
///                - f_R^k_ref.
/// Reduces to f_R sqrt((f_V^2 + f_PLL^2)/(f_V f_R) - 1) for k_ref=k_vco=2.
inline double transition_frequency(double f_3db_ref, double f_3db_vco, double f_pll,
                                   int k_ref, int k_vco) {
    require(f_3db_ref > 0.0 && f_3db_vco > 0.0 && f_pll > 0.0,
            "transition_frequency: inputs must be > 0");
    require(k_ref >= 1 && k_vco >= 1, "transition_frequency: exponents must be >= 1");
    const double rhs = std::pow(f_3db_ref, k_ref - 1) *
                           (std::pow(f_3db_vco, k_vco) + std::pow(f_pll, k_vco)) /
                           std::pow(f_3db_vco, k_vco - 1) -
                       std::pow(f_3db_ref, k_ref);
    require(rhs > 0.0, "models do not intersect");
    return std::pow(rhs, 1.0 / k_ref);
}

}  // namespace pnkit
