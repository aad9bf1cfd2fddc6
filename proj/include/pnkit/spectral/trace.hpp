#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pnkit/errors.hpp"

namespace pnkit {

/// A sampled single-sideband phase-noise spectrum: offset frequencies (Hz,
/// strictly increasing, > 0) and levels (dBc/Hz).
struct PsdTrace {
    std::vector<double> freqs;   // Hz
    std::vector<double> levels;  // dBc/Hz
    // estimation metadata; zero/empty when the trace was not measured
    double rbw_hz = 0.0;
    std::string window;
    int averages = 0;

    std::size_t size() const { return freqs.size(); }
};

inline void validate(const PsdTrace& t) {
    require(t.freqs.size() == t.levels.size(), "trace: freqs/levels length mismatch");
    require(!t.freqs.empty(), "trace: empty");
    double prev = 0.0;
    for (std::size_t i = 0; i < t.freqs.size(); ++i) {
        require(std::isfinite(t.freqs[i]) && t.freqs[i] > prev,
                "trace: freqs must be strictly increasing and > 0");
        require(std::isfinite(t.levels[i]), "trace: levels must be finite");
        prev = t.freqs[i];
    }
}

/// Per-bin mean in linear power, back to dB. Grids must match exactly.
inline PsdTrace average_traces(const std::vector<PsdTrace>& traces) {
    require(!traces.empty(), "average_traces: no traces");
    const PsdTrace& first = traces.front();
    std::vector<double> acc(first.size(), 0.0);
    for (const auto& t : traces) {
        require(t.freqs == first.freqs, "average_traces: frequency grid mismatch");
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc[i] += std::pow(10.0, t.levels[i] / 10.0);
    }
    PsdTrace out = first;
    out.averages = 0;
    for (const auto& t : traces) out.averages += std::max(t.averages, 1);
    for (std::size_t i = 0; i < acc.size(); ++i)
        out.levels[i] = 10.0 * std::log10(acc[i] / static_cast<double>(traces.size()));
    return out;
}

/// Log-spaced rebinning: geometric-mean of linear power per bin (equivalently
/// the dB mean), bin frequency the geometric mean of its members. Empty bins
/// are dropped.
inline PsdTrace log_resample(const PsdTrace& t, int points_per_decade) {
    require(points_per_decade >= 1, "log_resample: points_per_decade must be >= 1");
    require(t.size() >= 1, "log_resample: empty trace");
    PsdTrace out;
    out.rbw_hz = t.rbw_hz;
    out.window = t.window;
    out.averages = t.averages;
    if (t.size() == 1) {
        out.freqs = t.freqs;
        out.levels = t.levels;
        return out;
    }
    const double lo = std::log10(t.freqs.front());
    const double hi = std::log10(t.freqs.back());
    const double step = 1.0 / points_per_decade;
    const int nbins = static_cast<int>(std::ceil((hi - lo) / step)) + 1;
    std::size_t idx = 0;
    for (int b = 0; b < nbins && idx < t.size(); ++b) {
        const double edge = lo + (b + 1) * step;
        double sum_db = 0.0, sum_logf = 0.0;
        int count = 0;
        while (idx < t.size() && (std::log10(t.freqs[idx]) < edge || b == nbins - 1)) {
            sum_db += t.levels[idx];
            sum_logf += std::log10(t.freqs[idx]);
            ++count;
            ++idx;
        }
        if (count == 0) continue;
        out.freqs.push_back(std::pow(10.0, sum_logf / count));
        out.levels.push_back(sum_db / count);
    }
    return out;
}

/// Trapezoidal integral of linear power over the trace's span (1/Hz * Hz).
inline double integrate_power(const PsdTrace& t) {
    double acc = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double p0 = std::pow(10.0, t.levels[i - 1] / 10.0);
        const double p1 = std::pow(10.0, t.levels[i] / 10.0);
        acc += 0.5 * (p0 + p1) * (t.freqs[i] - t.freqs[i - 1]);
    }
    return acc;
}

}  // namespace pnkit
