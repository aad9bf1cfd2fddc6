#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pnkit/fit/regression.hpp"
#include "pnkit/spectral/trace.hpp"

namespace pnkit {

struct Interval {
    double lo_hz = 0.0;
    double hi_hz = 0.0;
    bool contains(double f) const { return f >= lo_hz && f <= hi_hz; }
};

/// The four characteristic bands of a locked PLL's phase-noise spectrum, in
/// ascending frequency: reference-dominated roll-off, transition shelf,
/// VCO-dominated roll-off, noise floor.
struct SegmentSpec {
    Interval ref;
    Interval transition;
    Interval vco;
    Interval noise_floor;

    const Interval& operator[](std::size_t i) const {
        switch (i) {
            case 0: return ref;
            case 1: return transition;
            case 2: return vco;
            default: return noise_floor;
        }
    }
    static const char* name(std::size_t i) {
        constexpr const char* names[] = {"ref", "transition", "vco", "noise_floor"};
        return names[i];
    }
};

inline std::size_t points_in(const PsdTrace& t, const Interval& iv) {
    std::size_t n = 0;
    for (double f : t.freqs) n += iv.contains(f) ? 1 : 0;
    return n;
}

inline void validate(const PsdTrace& t, const SegmentSpec& s) {
    double prev_hi = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const Interval& iv = s[i];
        require(iv.lo_hz > 0.0 && iv.hi_hz > iv.lo_hz,
                std::string("segments: bad interval ") + SegmentSpec::name(i));
        require(iv.lo_hz >= prev_hi,
                std::string("segments: intervals must ascend without overlap at ") +
                    SegmentSpec::name(i));
        require(points_in(t, iv) >= 3,
                std::string("segments: fewer than 3 trace points in ") + SegmentSpec::name(i));
        prev_hi = iv.hi_hz;
    }
}

struct ClassifyConfig {
    double window_decades = 1.0 / 3.0;
    double slope_tolerance = 7.0;  // dB/decade around the -10k targets; plateau = |slope| below it
    int k_ref = 3;
    int k_vco = 3;
};

namespace detail {

enum class WindowLabel { none, steep, plateau };

struct Run {
    std::size_t first = 0;  // first window index
    std::size_t last = 0;   // last window index (inclusive)
    WindowLabel label = WindowLabel::none;
};

}  // namespace detail

/// Slope-based segmentation of a trace into the four PLL bands. Sliding
/// windows of cfg.window_decades are labeled steep (slope within tolerance of
/// -10 k_ref or -10 k_vco) or plateau (|slope| < tolerance) at their
/// geometric center; contiguous runs give the intervals. With k_ref == k_vco
/// the steep targets coincide, so runs are told apart by order: the first
/// steep run is the reference band, the steep run between transition and
/// floor is the VCO band. Among plateau runs after the reference band the
/// lowest-level one is the floor (ties: the higher-frequency one), and the
/// first plateau above the floor level is the transition shelf.
inline SegmentSpec classify_regions(const PsdTrace& trace, const ClassifyConfig& cfg = {}) {
    validate(trace);
    const std::size_t n = trace.size();
    require(trace.freqs.back() / trace.freqs.front() >= 1e4 * (1.0 - 1e-12),
            "classify_regions: trace must span at least 4 decades");

    const double span = std::pow(10.0, cfg.window_decades);
    const double half_span = std::pow(10.0, cfg.window_decades / 2.0);

    // label one window per trace point (those with >= 3 points)
    std::vector<detail::WindowLabel> labels(n, detail::WindowLabel::none);
    std::size_t hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f_hi = trace.freqs[i] * span;
        if (hi < i + 1) hi = i + 1;
        while (hi < n && trace.freqs[hi] <= f_hi) ++hi;
        if (hi - i < 3) continue;
        const auto fit = linear_regression_loglog(
            std::span<const double>(trace.freqs).subspan(i, hi - i),
            std::span<const double>(trace.levels).subspan(i, hi - i));
        const double s = fit.slope_db_per_decade;
        if (std::abs(s + 10.0 * cfg.k_ref) <= cfg.slope_tolerance ||
            std::abs(s + 10.0 * cfg.k_vco) <= cfg.slope_tolerance) {
            labels[i] = detail::WindowLabel::steep;
        } else if (std::abs(s) < cfg.slope_tolerance) {
            labels[i] = detail::WindowLabel::plateau;
        }
    }

    std::vector<detail::Run> runs;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == detail::WindowLabel::none) continue;
        if (!runs.empty() && runs.back().label == labels[i] && runs.back().last + 1 == i)
            runs.back().last = i;
        else
            runs.push_back({i, i, labels[i]});
    }

    // window i covers [f_i, f_i * span]; its label describes the center, so a
    // run of windows [a, b] maps to the interval of window centers.
    auto run_interval = [&](const detail::Run& r) {
        const double lo = std::min(trace.freqs[r.first] * half_span, trace.freqs.back());
        const double hi_f = std::min(trace.freqs[r.last] * half_span, trace.freqs.back());
        return Interval{lo, hi_f};
    };
    auto mean_level = [&](const detail::Run& r) {
        const Interval iv = run_interval(r);
        double sum = 0.0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (iv.contains(trace.freqs[i])) {
                sum += trace.levels[i];
                ++cnt;
            }
        return cnt ? sum / static_cast<double>(cnt) : 0.0;
    };

    const detail::Run* ref = nullptr;
    for (const auto& r : runs)
        if (r.label == detail::WindowLabel::steep) {
            ref = &r;
            break;
        }
    require(ref != nullptr, "classify_regions: no region found: ref");

    std::vector<const detail::Run*> plateaus;
    for (const auto& r : runs)
        if (r.label == detail::WindowLabel::plateau && r.first > ref->last) plateaus.push_back(&r);
    require(plateaus.size() >= 2, "classify_regions: no region found: noise_floor");

    const detail::Run* floor = plateaus.front();
    double floor_level = mean_level(*floor);
    for (const auto* r : plateaus) {
        const double lvl = mean_level(*r);
        if (lvl < floor_level - 1e-12 ||
            (std::abs(lvl - floor_level) <= 1e-12 && r->first > floor->first)) {
            floor = r;
            floor_level = lvl;
        }
    }

    const detail::Run* transition = nullptr;
    for (const auto* r : plateaus)
        if (r != floor && r->first < floor->first && mean_level(*r) > floor_level) {
            transition = r;
            break;
        }
    require(transition != nullptr, "classify_regions: no region found: transition");

    const detail::Run* vco = nullptr;
    for (const auto& r : runs)
        if (r.label == detail::WindowLabel::steep && r.first > transition->last &&
            r.last < floor->first) {
            vco = &r;
            break;
        }
    require(vco != nullptr, "classify_regions: no region found: vco");

    SegmentSpec out{run_interval(*ref), run_interval(*transition), run_interval(*vco),
                    run_interval(*floor)};
    validate(trace, out);
    return out;
}

}  // namespace pnkit
