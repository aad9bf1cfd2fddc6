#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pnkit/errors.hpp"
#include "pnkit/timegen/rng.hpp"

namespace pnkit {

/// Linear SDE  dy = -A y dt + B dW  with p state variables and q independent
/// white-noise channels. Matrices are row-major.
struct SdeSystem {
    std::size_t p = 0;
    std::size_t q = 0;
    std::vector<double> a;  // p x p drift
    std::vector<double> b;  // p x q noise gain
    std::vector<std::string> labels;

    SdeSystem() = default;
    SdeSystem(std::size_t p_, std::size_t q_, std::vector<double> a_, std::vector<double> b_,
              std::vector<std::string> labels_ = {})
        : p(p_), q(q_), a(std::move(a_)), b(std::move(b_)), labels(std::move(labels_)) {
        require(p >= 1 && q >= 1, "sde: p and q must be >= 1");
        require(a.size() == p * p, "sde: A must be p x p");
        require(b.size() == p * q, "sde: B must be p x q");
        if (labels.empty()) {
            for (std::size_t i = 0; i < p; ++i) labels.push_back("y" + std::to_string(i));
        }
        require(labels.size() == p, "sde: one label per state variable");
    }
};

struct SdeSeries {
    double dt = 0.0;
    std::vector<std::vector<double>> channels;  // p channels, each length n
    std::vector<std::string> labels;
    uint64_t seed = 0;
};

namespace detail {

// Spectral radius by power iteration; m is p x p row-major. Good enough for
// the small systems this toolkit integrates.
inline double spectral_radius(const std::vector<double>& m, std::size_t p) {
    if (p == 1) return std::abs(m[0]);
    std::vector<double> v(p, 1.0), w(p);
    double norm = 0.0;
    for (int it = 0; it < 2000; ++it) {
        for (std::size_t i = 0; i < p; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < p; ++j) s += m[i * p + j] * v[j];
            w[i] = s;
        }
        norm = 0.0;
        for (double x : w) norm = std::max(norm, std::abs(x));
        if (norm == 0.0) return 0.0;
        for (std::size_t i = 0; i < p; ++i) v[i] = w[i] / norm;
    }
    return norm;
}

}  // namespace detail

/// Euler-Maruyama integration of the linear SDE:
///   y[n+1] = y[n] - A y[n] dt + B sqrt(dt) xi[n],   y[0] = 0,
/// with xi[n] a q-vector of iid standard normals. Noise channel j draws from
/// the stream derive_stream_seed(seed, channel(j)); with p=1, q=2,
/// A=[2 pi f_pll], B=[sqrt(c_vco), -sqrt(c_ref)] this is the loop's internal
/// difference process beta(t) and consumes the same streams as the PLL
/// generator.
inline SdeSeries integrate_linear_sde(const SdeSystem& sys, double fs, std::size_t n,
                                      uint64_t seed) {
    require(fs > 0.0, "integrate_linear_sde: fs must be > 0");
    require(n >= 1, "integrate_linear_sde: n must be >= 1");
    const double dt = 1.0 / fs;
    const std::size_t p = sys.p, q = sys.q;

    // propagator I - A dt must be a contraction
    std::vector<double> prop(p * p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            prop[i * p + j] = (i == j ? 1.0 : 0.0) - sys.a[i * p + j] * dt;
    const double rho = detail::spectral_radius(prop, p);
    require(rho < 1.0, "integrate_linear_sde: unstable step, spectral radius of (I - A dt) = " +
                           std::to_string(rho) + " >= 1");

    SdeSeries out;
    out.dt = dt;
    out.labels = sys.labels;
    out.seed = seed;
    out.channels.assign(p, std::vector<double>(n, 0.0));

    std::vector<NormalSource> noise;
    noise.reserve(q);
    for (std::size_t j = 0; j < q; ++j)
        noise.emplace_back(derive_stream_seed(seed, stream_tag::channel(static_cast<int>(j))));

    const double sqdt = std::sqrt(dt);
    std::vector<std::vector<double>> xi(q, std::vector<double>(kNoiseBlock));
    std::vector<double> y(p, 0.0), ynew(p);
    std::size_t done = 1;
    while (done < n) {
        const int blk = static_cast<int>(std::min<std::size_t>(kNoiseBlock, n - done));
        for (std::size_t j = 0; j < q; ++j) noise[j].fill(xi[j].data(), blk);
        for (int s = 0; s < blk; ++s) {
            for (std::size_t i = 0; i < p; ++i) {
                double drift = 0.0;
                for (std::size_t j = 0; j < p; ++j) drift += sys.a[i * p + j] * y[j];
                double kick = 0.0;
                for (std::size_t j = 0; j < q; ++j) kick += sys.b[i * q + j] * xi[j][s];
                ynew[i] = y[i] - drift * dt + kick * sqdt;
            }
            y = ynew;
            for (std::size_t i = 0; i < p; ++i) out.channels[i][done + s] = y[i];
        }
        done += blk;
    }
    return out;
}

/// The p=1, q=2 system matching the first-order loop's difference process.
inline SdeSystem pll_beta_system(double f_pll, double c_vco, double c_ref) {
    return SdeSystem(1, 2, {2.0 * pi * f_pll}, {std::sqrt(c_vco), -std::sqrt(c_ref)}, {"beta"});
}

}  // namespace pnkit
