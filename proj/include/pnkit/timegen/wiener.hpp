#pragma once

#include <cstdint>

#include "pnkit/model/oscillator.hpp"
#include "pnkit/timegen/rng.hpp"
#include "pnkit/timegen/series.hpp"

namespace pnkit {

/// Discrete Wiener time-shift path of a free-running oscillator:
///   alpha[0] = 0,  alpha[n] = sqrt(c dt) * sum_{i<n} xi_i,
/// with xi_i iid standard normal from the seeded stream (channel 0).
inline TimeShiftSeries gen_wiener_alpha(const OscillatorSpec& spec, double fs,
                                        std::size_t n, uint64_t seed) {
    require(fs > 0.0, "gen_wiener_alpha: fs must be > 0");
    require(n >= 1, "gen_wiener_alpha: n must be >= 1");
    const double dt = 1.0 / fs;
    TimeShiftSeries out;
    out.dt = dt;
    out.kind = "wiener";
    out.seed = seed;
    out.samples.assign(n, 0.0);
    if (n == 1 || spec.c == 0.0) return out;

    NormalSource src(derive_stream_seed(seed, stream_tag::channel(0)));
    const double scale = std::sqrt(spec.c * dt);
    double acc = 0.0;
    double block[kNoiseBlock];
    std::size_t filled = 1;
    while (filled < n) {
        const int blk = static_cast<int>(std::min<std::size_t>(kNoiseBlock, n - filled));
        src.fill(block, blk, scale);
        for (int i = 0; i < blk; ++i) {
            acc += block[i];
            out.samples[filled + i] = acc;
        }
        filled += blk;
    }
    return out;
}

}  // namespace pnkit
