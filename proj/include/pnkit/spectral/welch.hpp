#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "pnkit/spectral/fft.hpp"
#include "pnkit/spectral/trace.hpp"

namespace pnkit {

enum class Window { hann, rect };

inline std::string window_name(Window w) { return w == Window::hann ? "hann" : "rect"; }

struct WelchConfig {
    std::size_t segment_len = 0;     // 0 = length/8
    double overlap_fraction = 0.5;   // in [0, 0.9]
    Window window = Window::hann;
};

namespace detail {

inline std::vector<double> make_window(Window w, std::size_t n) {
    std::vector<double> win(n, 1.0);
    if (w == Window::hann) {
        for (std::size_t i = 0; i < n; ++i)
            win[i] = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(n));
    }
    return win;
}

// Number of leading bins occupied by the carrier line after windowing: the
// mainlobe of a line at DC covers bin 0 only for rect and bins 0..1 for hann
// (the raised-cosine kernel is exactly zero at integer bins >= 2).
inline std::size_t carrier_bins(Window w) { return w == Window::hann ? 2 : 1; }

}  // namespace detail

/// Averaged modified periodogram of a complex baseband record, one-sided in
/// offset frequency (positive offsets only), scaled to density (1/Hz) and
/// normalized by total signal power, so levels read dBc/Hz. The carrier line
/// is removed by subtracting each segment's mean and dropping the bins its
/// window mainlobe occupies; power normalization uses the raw input.
inline PsdTrace welch_psd(std::span<const std::complex<double>> samples, double fs,
                          const WelchConfig& cfg = {}) {
    require(fs > 0.0, "welch_psd: fs must be > 0");
    require(cfg.overlap_fraction >= 0.0 && cfg.overlap_fraction <= 0.9,
            "welch_psd: overlap_fraction must be in [0, 0.9]");
    const std::size_t seg = cfg.segment_len == 0 ? samples.size() / 8 : cfg.segment_len;
    require(seg >= 8, "welch_psd: segment too short");
    require(seg <= samples.size(), "welch_psd: input shorter than one segment");

    const std::size_t hop =
        std::max<std::size_t>(1, static_cast<std::size_t>(
                                     static_cast<double>(seg) * (1.0 - cfg.overlap_fraction) + 0.5));
    const std::size_t nseg = (samples.size() - seg) / hop + 1;

    const std::vector<double> win = detail::make_window(cfg.window, seg);
    double wss = 0.0;
    for (double w : win) wss += w * w;

    double total_power = 0.0;
    for (const auto& x : samples) total_power += std::norm(x);
    total_power /= static_cast<double>(samples.size());
    require(total_power > 0.0, "welch_psd: input has zero power");

    ForwardFft fft(seg);
    std::vector<double> acc(seg, 0.0);
    for (std::size_t s = 0; s < nseg; ++s) {
        const std::complex<double>* src = samples.data() + s * hop;
        std::complex<double> mean{0.0, 0.0};
        for (std::size_t i = 0; i < seg; ++i) mean += src[i];
        mean /= static_cast<double>(seg);
        auto* in = fft.in();
        for (std::size_t i = 0; i < seg; ++i) in[i] = win[i] * (src[i] - mean);
        fft.execute();
        const auto* out = fft.out();
        for (std::size_t i = 0; i < seg; ++i) acc[i] += std::norm(out[i]);
    }

    const double scale = 1.0 / (static_cast<double>(nseg) * fs * wss * total_power);
    const std::size_t first = detail::carrier_bins(cfg.window);
    PsdTrace trace;
    // equivalent noise bandwidth of the window, Hz
    double wsum = 0.0;
    for (double w : win) wsum += w;
    trace.rbw_hz = fs * wss / (wsum * wsum);
    trace.window = window_name(cfg.window);
    trace.averages = static_cast<int>(nseg);
    trace.freqs.reserve(seg / 2 - first);
    trace.levels.reserve(seg / 2 - first);
    for (std::size_t k = first; k < seg / 2; ++k) {
        trace.freqs.push_back(static_cast<double>(k) * fs / static_cast<double>(seg));
        trace.levels.push_back(10.0 * std::log10(acc[k] * scale));
    }
    return trace;
}

}  // namespace pnkit
