#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pnkit/errors.hpp"

namespace pnkit {

/// A sampled stochastic time-shift path alpha[n] (seconds) at interval dt.
/// alpha[0] == 0 by convention of the generators.
struct TimeShiftSeries {
    double dt = 0.0;              // s
    std::vector<double> samples;  // s
    std::string kind;             // generator id, e.g. "wiener", "pll"
    uint64_t seed = 0;

    std::size_t size() const { return samples.size(); }
    double duration() const { return dt * static_cast<double>(samples.size() - 1); }
};

inline void validate(const TimeShiftSeries& s) {
    require(s.dt > 0.0, "time series: dt must be > 0");
    require(!s.samples.empty(), "time series: length must be >= 1");
    require(s.samples.front() == 0.0, "time series: samples[0] must be 0");
}

}  // namespace pnkit
