#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "pnkit/fit/regression.hpp"
#include "pnkit/spectral/welch.hpp"
#include "pnkit/timegen/baseband.hpp"
#include "pnkit/timegen/rng.hpp"
#include "pnkit/timegen/wiener.hpp"

using namespace pnkit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<std::complex<double>> white_complex(std::size_t n, uint64_t seed) {
    NormalSource re(derive_stream_seed(seed, stream_tag::channel(0)));
    NormalSource im(derive_stream_seed(seed, stream_tag::channel(1)));
    std::vector<std::complex<double>> x(n);
    const double s = std::sqrt(0.5);
    for (auto& v : x) v = {s * re.next(), s * im.next()};
    return x;
}

double rect_integral(const PsdTrace& t, double bin_hz) {
    double acc = 0.0;
    for (double l : t.levels) acc += std::pow(10.0, l / 10.0) * bin_hz;
    return acc;
}

}  // namespace

TEST_CASE("welch: tone and noise calibration") {
    SECTION("pure tone integrates to unit carrier power") {
        const double fs = 1e6;
        const std::size_t n = 1 << 15, seg = 4096;
        const double f1 = 200.0 * fs / static_cast<double>(seg);  // on-grid, mid-band
        std::vector<std::complex<double>> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ph = 2.0 * pi * f1 * static_cast<double>(i) / fs;
            x[i] = {std::cos(ph), std::sin(ph)};
        }
        WelchConfig cfg;
        cfg.segment_len = seg;
        const PsdTrace t = welch_psd(x, fs, cfg);
        REQUIRE_THAT(rect_integral(t, fs / static_cast<double>(seg)), WithinAbs(1.0, 0.01));
    }

    SECTION("unit-power white noise sits at -10 log10(fs)") {
        const double fs = 1e6;
        const auto x = white_complex(1 << 18, 0x777);
        WelchConfig cfg;
        cfg.segment_len = 256;
        const PsdTrace t = welch_psd(x, fs, cfg);
        for (std::size_t i = 0; i < t.size(); ++i)
            REQUIRE_THAT(t.levels[i], WithinAbs(-10.0 * std::log10(fs), 0.5));
    }

    SECTION("levels unaffected by a constant phase rotation") {
        auto x = white_complex(1 << 13, 0x9a9a);
        WelchConfig cfg;
        cfg.segment_len = 512;
        const PsdTrace a = welch_psd(x, 1e6, cfg);
        const std::complex<double> rot = std::polar(1.0, 1.234567);
        for (auto& v : x) v *= rot;
        const PsdTrace b = welch_psd(x, 1e6, cfg);
        for (std::size_t i = 0; i < a.size(); ++i)
            REQUIRE_THAT(a.levels[i], WithinAbs(b.levels[i], 1e-12));
    }

    SECTION("input shorter than a segment is rejected") {
        WelchConfig cfg;
        cfg.segment_len = 1024;
        const auto x = white_complex(512, 1);
        REQUIRE_THROWS_AS(welch_psd(x, 1e6, cfg), error);
    }

    SECTION("overlap domain") {
        WelchConfig cfg;
        cfg.overlap_fraction = 0.95;
        const auto x = white_complex(4096, 1);
        REQUIRE_THROWS_AS(welch_psd(x, 1e6, cfg), error);
    }

    SECTION("rect window drops only the dc bin") {
        const auto x = white_complex(4096, 2);
        WelchConfig hann_cfg, rect_cfg;
        hann_cfg.segment_len = rect_cfg.segment_len = 512;
        rect_cfg.window = Window::rect;
        const PsdTrace th = welch_psd(x, 1e6, hann_cfg);
        const PsdTrace tr = welch_psd(x, 1e6, rect_cfg);
        REQUIRE(tr.freqs.front() == 1e6 / 512.0);        // bin 1
        REQUIRE(th.freqs.front() == 2.0 * 1e6 / 512.0);  // bin 2
    }
}

TEST_CASE("welch: simulated oscillator spectrum") {
    // free-running oscillator; averaged spectrum follows the 1/f^2 tail
    const OscillatorSpec spec(5e5, 1e-11);
    const double fs = 1e8;
    const std::size_t n = 100000;
    const int reals = 30;
    WelchConfig cfg;
    cfg.segment_len = 20000;
    std::vector<PsdTrace> traces(reals);
    for (int r = 0; r < reals; ++r) {
        const auto alpha = gen_wiener_alpha(spec, fs, n, realization_seed(0x4F16, r));
        traces[r] = welch_psd(alpha_to_baseband(alpha, spec.f0), fs, cfg);
    }
    const PsdTrace avg = average_traces(traces);
    std::vector<double> bf, bl;
    for (std::size_t i = 0; i < avg.size(); ++i)
        if (avg.freqs[i] >= 1e4 && avg.freqs[i] <= 1e6) {
            bf.push_back(avg.freqs[i]);
            bl.push_back(avg.levels[i]);
        }
    const double slope = linear_regression_loglog(bf, bl).slope_db_per_decade;
    REQUIRE_THAT(slope, WithinAbs(-20.0, 1.0));
}

TEST_CASE("welch: averaging gain") {
    // doubling the averaging count shrinks the per-bin scatter by sqrt(2)
    const double fs = 1e6;
    const std::size_t bin = 40;
    auto level_at = [&](std::size_t n, uint64_t seed) {
        WelchConfig cfg;
        cfg.segment_len = 256;
        return welch_psd(white_complex(n, seed), fs, cfg).levels[bin];
    };
    const int repeats = 80;
    std::vector<double> a(repeats), b(repeats);
    for (int r = 0; r < repeats; ++r) {
        a[r] = level_at(1 << 13, realization_seed(0xAA, r));
        b[r] = level_at(1 << 14, realization_seed(0xBB, r));
    }
    auto sdev = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double acc = 0.0;
        for (double x : v) acc += (x - m) * (x - m);
        return std::sqrt(acc / static_cast<double>(v.size() - 1));
    };
    const double ratio = sdev(a) / sdev(b);
    REQUIRE(ratio >= std::sqrt(2.0) * 0.8);
    REQUIRE(ratio <= std::sqrt(2.0) * 1.2);
}

TEST_CASE("trace averaging") {
    PsdTrace t;
    t.freqs = {1.0, 2.0, 4.0};
    t.levels = {-10.0, -20.0, -30.0};

    SECTION("single trace is the identity") {
        const PsdTrace avg = average_traces({t});
        REQUIRE(avg.levels == t.levels);
        REQUIRE(avg.freqs == t.freqs);
    }

    SECTION("equal traces average to themselves") {
        const PsdTrace avg = average_traces({t, t});
        for (std::size_t i = 0; i < t.size(); ++i)
            REQUIRE_THAT(avg.levels[i], WithinAbs(t.levels[i], 1e-12));
    }

    SECTION("zero power averages against full power") {
        PsdTrace a = t, b = t;
        a.levels = {0.0, 0.0, 0.0};
        b.levels = {-std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
        const PsdTrace avg = average_traces({a, b});
        for (double l : avg.levels) REQUIRE_THAT(l, WithinAbs(-3.0103, 1e-4));
    }

    SECTION("grid mismatch is rejected") {
        PsdTrace other = t;
        other.freqs[1] = 2.5;
        REQUIRE_THROWS_AS(average_traces({t, other}), error);
    }
}

TEST_CASE("log resampling") {
    SECTION("flat stays flat, single point passes through") {
        PsdTrace t;
        for (int i = 1; i <= 1000; ++i) {
            t.freqs.push_back(static_cast<double>(i));
            t.levels.push_back(-42.0);
        }
        const PsdTrace r = log_resample(t, 10);
        for (double l : r.levels) REQUIRE_THAT(l, WithinAbs(-42.0, 1e-12));

        PsdTrace one;
        one.freqs = {100.0};
        one.levels = {-7.0};
        const PsdTrace r1 = log_resample(one, 10);
        REQUIRE(r1.freqs == one.freqs);
        REQUIRE(r1.levels == one.levels);
    }

    SECTION("power-law slope preserved") {
        PsdTrace t;
        for (int i = 0; i <= 4000; ++i) {
            const double f = std::pow(10.0, 1.0 + i / 1000.0);
            t.freqs.push_back(f);
            t.levels.push_back(-20.0 * std::log10(f));
        }
        const PsdTrace r = log_resample(t, 25);
        const double slope = linear_regression_loglog(r.freqs, r.levels).slope_db_per_decade;
        REQUIRE_THAT(slope, WithinAbs(-20.0, 0.1));
    }

    SECTION("smooth traces keep their integrated power") {
        PsdTrace t;
        for (int i = 0; i <= 6000; ++i) {
            const double f = std::pow(10.0, i / 1000.0);  // 1 Hz .. 1 MHz
            t.freqs.push_back(f);
            t.levels.push_back(-40.0 - 15.0 * std::log10(f));
        }
        const PsdTrace r = log_resample(t, 100);
        REQUIRE_THAT(integrate_power(r), WithinRel(integrate_power(t), 0.01));
    }
}
