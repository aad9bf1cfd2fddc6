#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "pnkit/fit/segments.hpp"
#include "pnkit/model/oscillator.hpp"
#include "pnkit/spectral/trace.hpp"

namespace pnkit {

namespace detail {

struct IntervalView {
    std::vector<double> freqs;
    std::vector<double> levels;
};

inline IntervalView select(const PsdTrace& t, const Interval& iv) {
    IntervalView v;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (iv.contains(t.freqs[i])) {
            v.freqs.push_back(t.freqs[i]);
            v.levels.push_back(t.levels[i]);
        }
    return v;
}

}  // namespace detail

/// 3 dB cut-off estimator from far-tail samples of a -10k dB/dec roll-off.
/// Inverts L = 10 log10( f_3dB^(k-1) / (pi f^k) ) per point and averages in
/// the log domain:
///   f_3dB = 10^{ mean_n log10( 10^(L_n/10) pi f_n^k ) / (k-1) }.
/// mean_form=false drops the 1/N normalization (the raw sum), kept only for
/// comparison; without the mean the result depends on the point count.
inline double estimate_f3db(std::span<const double> freqs, std::span<const double> levels,
                            int k, bool mean_form = true) {
    require(!freqs.empty() && freqs.size() == levels.size(), "estimate_f3db: empty interval");
    require(k >= 2, "estimate_f3db: k must be >= 2");
    double acc = 0.0;
    for (std::size_t i = 0; i < freqs.size(); ++i)
        acc += std::log10(std::pow(10.0, levels[i] / 10.0) * pi * std::pow(freqs[i], k));
    if (mean_form) acc /= static_cast<double>(freqs.size());
    return std::pow(10.0, acc / (k - 1));
}

inline double estimate_f3db(const PsdTrace& t, const Interval& iv, int k, bool mean_form = true) {
    const auto v = detail::select(t, iv);
    require(!v.freqs.empty(), "estimate_f3db: empty interval");
    return estimate_f3db(v.freqs, v.levels, k, mean_form);
}

/// Oscillator constant from the cut-off frequency: c = f_3dB / (pi f0^2).
inline double estimate_c(double f_3db_hz, double f0_hz) {
    require(f0_hz > 0.0, "estimate_c: f0 must be > 0");
    return f_3db_hz / (pi * f0_hz * f0_hz);
}

/// Plateau level: arithmetic mean of the dB samples in the interval.
inline double estimate_level(const PsdTrace& t, const Interval& iv) {
    const auto v = detail::select(t, iv);
    require(!v.levels.empty(), "estimate_level: empty interval");
    double acc = 0.0;
    for (double l : v.levels) acc += l;
    return acc / static_cast<double>(v.levels.size());
}

/// Frequency where the low-pass model with cut-off f_3dB crosses a plateau of
/// the given level:  f = f_3dB (1/(10^(L/10) pi f_3dB) - 1)^(1/k).
/// Exact inverse of L(f) = -10 log10[ pi f_3dB (1 + (f/f_3dB)^k) ].
inline double estimate_corner(double f_3db_hz, double level_dbc, int k) {
    require(f_3db_hz > 0.0, "estimate_corner: f_3db must be > 0");
    require(k >= 1, "estimate_corner: k must be >= 1");
    const double x = 1.0 / (std::pow(10.0, level_dbc / 10.0) * pi * f_3db_hz) - 1.0;
    require(x > 0.0, "level above model plateau");
    return f_3db_hz * std::pow(x, 1.0 / k);
}

/// Spur mask: drops points whose residual from a first-pass log-log fit
/// deviates from the median residual by more than max_dev_db. Optional
/// pre-filter for estimator inputs on spurious measured traces.
inline detail::IntervalView mask_spurs(const detail::IntervalView& v, double max_dev_db) {
    if (v.levels.size() < 5) return v;
    const auto fit = linear_regression_loglog(v.freqs, v.levels);
    std::vector<double> resid(v.levels.size());
    for (std::size_t i = 0; i < v.levels.size(); ++i)
        resid[i] = v.levels[i] - (fit.intercept_db + fit.slope_db_per_decade * std::log10(v.freqs[i]));
    std::vector<double> sorted = resid;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double med = sorted[sorted.size() / 2];
    detail::IntervalView out;
    for (std::size_t i = 0; i < v.levels.size(); ++i) {
        if (std::abs(resid[i] - med) <= max_dev_db) {
            out.freqs.push_back(v.freqs[i]);
            out.levels.push_back(v.levels[i]);
        }
    }
    return out.freqs.size() >= 2 ? out : v;
}

}  // namespace pnkit
