#pragma once

#include <array>
#include <optional>
#include <string>

#include "pnkit/fit/estimators.hpp"
#include "pnkit/fit/segments.hpp"
#include "pnkit/model/spectrum_model.hpp"

namespace pnkit {

struct FitConfig {
    double f0_hz = 0.0;                   // carrier during the measurement
    int k_ref = 3;
    int k_vco = 3;
    std::optional<SegmentSpec> segments;  // manual override; skips classification
    std::optional<double> spur_mask_db;   // residual mask for estimator inputs
    ClassifyConfig classify;
};

/// Everything the estimation stage produces for one trace. The oscillator
/// constants satisfy c = f_3db / (pi f0^2) against the stored cut-offs
/// exactly.
struct FitReport {
    SegmentSpec segments;
    std::array<double, 4> slopes_db_per_decade{};  // ref, transition, vco, noise_floor
    double f_3db_ref_hz = 0.0;
    double f_3db_vco_hz = 0.0;
    double c_ref_s = 0.0;
    double c_vco_s = 0.0;
    double level_tr_dbc = 0.0;
    double level_nf_dbc = 0.0;
    double f_tr_hz = 0.0;
    double f_pll_hz = 0.0;
    double f_nf_hz = 0.0;
    int k_ref = 3;
    int k_vco = 3;
    double residual_rms_db = 0.0;

    SpectrumModelParams model_params() const {
        return SpectrumModelParams(f_3db_ref_hz, f_tr_hz, f_pll_hz, f_nf_hz, k_ref, k_vco);
    }
};

namespace detail {

template <class Fn>
auto run_stage(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const error& e) {
        throw error(std::string(stage) + ": " + e.what());
    }
}

}  // namespace detail

/// Full estimation pipeline: segment the trace, regress per-band slopes,
/// estimate the two cut-offs and oscillator constants, the two plateau
/// levels, and the three corner frequencies; finally score the fitted model
/// against the trace (RMS of the dB residuals on the trace grid).
inline FitReport fit_pipeline(const PsdTrace& trace, const FitConfig& cfg) {
    require(cfg.f0_hz > 0.0, "fit: f0 must be > 0");
    validate(trace);

    FitReport rep;
    rep.k_ref = cfg.k_ref;
    rep.k_vco = cfg.k_vco;

    if (cfg.segments) {
        rep.segments = *cfg.segments;
        detail::run_stage("segments", [&] { validate(trace, rep.segments); return 0; });
    } else {
        ClassifyConfig ccfg = cfg.classify;
        ccfg.k_ref = cfg.k_ref;
        ccfg.k_vco = cfg.k_vco;
        rep.segments = detail::run_stage("classify_regions", [&] { return classify_regions(trace, ccfg); });
    }

    auto view = [&](const Interval& iv) {
        auto v = detail::select(trace, iv);
        if (cfg.spur_mask_db) v = mask_spurs(v, *cfg.spur_mask_db);
        return v;
    };

    detail::run_stage("slopes", [&] {
        for (std::size_t i = 0; i < 4; ++i) {
            const auto v = view(rep.segments[i]);
            rep.slopes_db_per_decade[i] =
                linear_regression_loglog(v.freqs, v.levels).slope_db_per_decade;
        }
        return 0;
    });

    detail::run_stage("estimate_f3db", [&] {
        const auto vr = view(rep.segments.ref);
        const auto vv = view(rep.segments.vco);
        rep.f_3db_ref_hz = estimate_f3db(vr.freqs, vr.levels, cfg.k_ref);
        rep.f_3db_vco_hz = estimate_f3db(vv.freqs, vv.levels, cfg.k_vco);
        return 0;
    });

    rep.c_ref_s = estimate_c(rep.f_3db_ref_hz, cfg.f0_hz);
    rep.c_vco_s = estimate_c(rep.f_3db_vco_hz, cfg.f0_hz);

    detail::run_stage("estimate_level", [&] {
        rep.level_tr_dbc = estimate_level(trace, rep.segments.transition);
        rep.level_nf_dbc = estimate_level(trace, rep.segments.noise_floor);
        return 0;
    });

    detail::run_stage("estimate_corner", [&] {
        rep.f_tr_hz = estimate_corner(rep.f_3db_ref_hz, rep.level_tr_dbc, cfg.k_ref);
        rep.f_pll_hz = estimate_corner(rep.f_3db_vco_hz, rep.level_tr_dbc, cfg.k_vco);
        rep.f_nf_hz = estimate_corner(rep.f_3db_vco_hz, rep.level_nf_dbc, cfg.k_vco);
        return 0;
    });

    detail::run_stage("residual", [&] {
        const SpectrumModelParams params = rep.model_params();
        double acc = 0.0;
        for (std::size_t i = 0; i < trace.size(); ++i) {
            const double d = extended_psd_dbc(params, trace.freqs[i]) - trace.levels[i];
            acc += d * d;
        }
        rep.residual_rms_db = std::sqrt(acc / static_cast<double>(trace.size()));
        return 0;
    });

    return rep;
}

}  // namespace pnkit
