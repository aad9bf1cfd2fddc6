#pragma once

#include <cmath>
#include <span>

#include "pnkit/errors.hpp"

namespace pnkit {

struct LogLogFit {
    double intercept_db = 0.0;       // level at log10 f = 0, i.e. f = 1 Hz
    double slope_db_per_decade = 0.0;
};

/// Ordinary least squares of level [dB] against log10(f): the normal-equation
/// solution R = (X^T X)^{-1} X^T Y with X = [1, log10 f].
inline LogLogFit linear_regression_loglog(std::span<const double> freqs,
                                          std::span<const double> levels) {
    require(freqs.size() == levels.size(), "regression: length mismatch");
    require(freqs.size() >= 2, "regression: needs at least 2 points");
    const double n = static_cast<double>(freqs.size());
    double sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        require(freqs[i] > 0.0, "regression: frequencies must be > 0");
        const double x = std::log10(freqs[i]);
        sx += x;
        sxx += x * x;
        sy += levels[i];
        sxy += x * levels[i];
    }
    const double det = n * sxx - sx * sx;
    require(det > 0.0 && std::isfinite(det), "regression: singular design (all points at one frequency)");
    return {(sxx * sy - sx * sxy) / det, (n * sxy - sx * sy) / det};
}

}  // namespace pnkit
