#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "pnkit/errors.hpp"

namespace pnkit {

namespace detail {
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

/// RAII forward complex FFT of a fixed size. Plan creation is serialized
/// (FFTW planning is not thread-safe); execution on the owned buffers is.
class ForwardFft {
public:
    explicit ForwardFft(std::size_t n) : n_(n) {
        require(n >= 2, "fft: size must be >= 2");
        in_ = fftw_alloc_complex(n);
        out_ = fftw_alloc_complex(n);
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    ~ForwardFft() {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(in_);
        fftw_free(out_);
    }
    ForwardFft(const ForwardFft&) = delete;
    ForwardFft& operator=(const ForwardFft&) = delete;

    std::size_t size() const { return n_; }
    std::complex<double>* in() { return reinterpret_cast<std::complex<double>*>(in_); }
    const std::complex<double>* out() const {
        return reinterpret_cast<const std::complex<double>*>(out_);
    }
    void execute() { fftw_execute(plan_); }

private:
    std::size_t n_;
    fftw_complex* in_;
    fftw_complex* out_;
    fftw_plan plan_;
};

}  // namespace pnkit
