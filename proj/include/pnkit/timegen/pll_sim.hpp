#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "pnkit/model/pll.hpp"
#include "pnkit/timegen/rng.hpp"
#include "pnkit/timegen/series.hpp"

namespace pnkit {

// Explicit-Euler stability limits for the loop recursion.
inline constexpr double kPllStepHardLimit = 2.0;  // 2 pi f_pll dt below this or error
inline constexpr double kPllStepWarnLimit = 0.1;  // above this, Euler bias grows

struct PllAlphaPaths {
    TimeShiftSeries pll;
    TimeShiftSeries ref;
    TimeShiftSeries vco;
};

inline double pll_step_product(const PllSpec& p, double fs) { return p.omega_loop() / fs; }

inline void check_pll_stability(const PllSpec& p, double fs) {
    require(fs > 0.0, "gen_pll_alpha: fs must be > 0");
    const double k = pll_step_product(p, fs);
    if (k >= kPllStepHardLimit) {
        throw error("gen_pll_alpha: unstable step, 2*pi*f_pll/fs = " + std::to_string(k) +
                    " >= 2; requires fs > pi*f_pll = " + std::to_string(pi * p.f_pll) + " Hz");
    }
}

inline bool pll_step_wants_warning(const PllSpec& p, double fs) {
    return pll_step_product(p, fs) > kPllStepWarnLimit;
}

namespace detail {

// One realization of the loop recursion
//   alpha_pll[n] = alpha_pll[n-1] - 2 pi f_pll dt (alpha_pll[n-1] - alpha_ref[n-1])
//                  + (alpha_vco[n] - alpha_vco[n-1]),
// equal to the cumulative-sum form by telescoping. VCO noise is channel 0,
// REF noise channel 1. OnStep receives (index, a_pll, a_ref, a_vco) for
// indices 1..n-1.
template <class OnStep>
inline void run_pll_recursion(const PllSpec& p, double fs, std::size_t n, uint64_t seed,
                              OnStep&& on_step) {
    const double dt = 1.0 / fs;
    const double k = p.omega_loop() * dt;
    NormalSource src_vco(derive_stream_seed(seed, stream_tag::channel(0)));
    NormalSource src_ref(derive_stream_seed(seed, stream_tag::channel(1)));
    const double sv = std::sqrt(p.vco.c * dt);
    const double sr = std::sqrt(p.ref.c * dt);

    double a_pll = 0.0, a_ref = 0.0, a_vco = 0.0;
    double dv[kNoiseBlock], dr[kNoiseBlock];
    std::size_t done = 1;
    while (done < n) {
        const int blk = static_cast<int>(std::min<std::size_t>(kNoiseBlock, n - done));
        src_vco.fill(dv, blk, sv);
        src_ref.fill(dr, blk, sr);
        for (int i = 0; i < blk; ++i) {
            a_pll += -k * (a_pll - a_ref) + dv[i];
            a_vco += dv[i];
            a_ref += dr[i];
            on_step(done + i, a_pll, a_ref, a_vco);
        }
        done += blk;
    }
}

}  // namespace detail

/// Time-shift path of a locked first-order PLL, plus the embedded reference
/// and VCO paths it was driven by. alpha[0] = 0 for all three.
inline PllAlphaPaths gen_pll_alpha(const PllSpec& p, double fs, std::size_t n, uint64_t seed) {
    check_pll_stability(p, fs);
    require(n >= 1, "gen_pll_alpha: n must be >= 1");
    PllAlphaPaths out;
    const double dt = 1.0 / fs;
    for (auto* s : {&out.pll, &out.ref, &out.vco}) {
        s->dt = dt;
        s->seed = seed;
        s->samples.assign(n, 0.0);
    }
    out.pll.kind = "pll";
    out.ref.kind = "pll.ref";
    out.vco.kind = "pll.vco";
    detail::run_pll_recursion(p, fs, n, seed,
                              [&](std::size_t i, double a_pll, double a_ref, double a_vco) {
                                  out.pll.samples[i] = a_pll;
                                  out.ref.samples[i] = a_ref;
                                  out.vco.samples[i] = a_vco;
                              });
    return out;
}

struct PllProbeSample {
    std::size_t index = 0;
    double alpha_pll = 0.0;
    double alpha_ref = 0.0;
    double alpha_vco = 0.0;
};

/// alpha_pll at one step index for `count` consecutive realizations
/// (realization_seed(master, first..first+count-1)), advanced in lockstep so
/// the serial recursions pipeline. Values are identical to generating each
/// realization on its own.
inline std::vector<double> gen_pll_alpha_ensemble_at(const PllSpec& p, double fs,
                                                     std::size_t index, uint64_t master_seed,
                                                     uint64_t first_realization, int count) {
    check_pll_stability(p, fs);
    require(index >= 1, "gen_pll_alpha_ensemble_at: index must be >= 1");
    require(count >= 1, "gen_pll_alpha_ensemble_at: count must be >= 1");
    const double dt = 1.0 / fs;
    const double k = p.omega_loop() * dt;
    const double sv = std::sqrt(p.vco.c * dt);
    const double sr = std::sqrt(p.ref.c * dt);

    std::vector<double> out(count);
    constexpr int kLanes = 4;
    std::vector<std::array<double, kNoiseBlock>> dv(kLanes), dr(kLanes);
    for (int base = 0; base < count; base += kLanes) {
        const int lanes = std::min(kLanes, count - base);
        std::vector<NormalSource> src_vco, src_ref;
        for (int j = 0; j < lanes; ++j) {
            const uint64_t seed = realization_seed(master_seed, first_realization + base + j);
            src_vco.emplace_back(derive_stream_seed(seed, stream_tag::channel(0)));
            src_ref.emplace_back(derive_stream_seed(seed, stream_tag::channel(1)));
        }
        double a_pll[kLanes] = {}, a_ref[kLanes] = {};
        std::size_t done = 1;
        while (done <= index) {
            const int blk =
                static_cast<int>(std::min<std::size_t>(kNoiseBlock, index + 1 - done));
            for (int j = 0; j < lanes; ++j) {
                src_vco[j].fill(dv[j].data(), blk, sv);
                src_ref[j].fill(dr[j].data(), blk, sr);
            }
            if (lanes == kLanes) {
                for (int i = 0; i < blk; ++i) {
                    for (int j = 0; j < kLanes; ++j) {
                        a_pll[j] += -k * (a_pll[j] - a_ref[j]) + dv[j][i];
                        a_ref[j] += dr[j][i];
                    }
                }
            } else {
                for (int i = 0; i < blk; ++i) {
                    for (int j = 0; j < lanes; ++j) {
                        a_pll[j] += -k * (a_pll[j] - a_ref[j]) + dv[j][i];
                        a_ref[j] += dr[j][i];
                    }
                }
            }
            done += blk;
        }
        for (int j = 0; j < lanes; ++j) out[base + j] = a_pll[j];
    }
    return out;
}

/// Same recursion, but keeps only the requested step indices (ascending).
/// For long-horizon ensemble statistics where storing the path is wasteful.
inline std::vector<PllProbeSample> gen_pll_alpha_probe(const PllSpec& p, double fs,
                                                       std::span<const std::size_t> indices,
                                                       uint64_t seed) {
    check_pll_stability(p, fs);
    require(!indices.empty(), "gen_pll_alpha_probe: no probe indices");
    for (std::size_t i = 1; i < indices.size(); ++i)
        require(indices[i] > indices[i - 1], "gen_pll_alpha_probe: indices must ascend");
    std::vector<PllProbeSample> out;
    out.reserve(indices.size());
    std::size_t next = 0;
    if (indices[0] == 0) {
        out.push_back({0, 0.0, 0.0, 0.0});
        ++next;
    }
    const std::size_t n = indices.back() + 1;
    detail::run_pll_recursion(p, fs, n, seed,
                              [&](std::size_t i, double a_pll, double a_ref, double a_vco) {
                                  if (next < indices.size() && i == indices[next]) {
                                      out.push_back({i, a_pll, a_ref, a_vco});
                                      ++next;
                                  }
                              });
    return out;
}

}  // namespace pnkit
