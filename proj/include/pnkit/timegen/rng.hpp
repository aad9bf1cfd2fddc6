#pragma once

// Deterministic noise source for all generators.
//
// Algorithm (fixed so seeds are reproducible): standard normals come from the
// trigonometric Box-Muller transform applied to 53-bit uniforms drawn from a
// xoshiro256++ engine. Each logical stream (one per noise channel per
// realization) is an independent engine whose 256-bit state is expanded from
// a 64-bit stream seed by splitmix64; stream seeds derive from the master
// seed via splitmix64(master ^ tag) with the tags below. Draws are produced
// in blocks; with identical seeds the sequence is bit-identical for a given
// build and platform (transcendental libm calls pin the last ulp).

#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#if defined(__AVX512F__)
#include <immintrin.h>
extern "C" {
__m512d _ZGVeN8v_log(__m512d);   // glibc libmvec, vector ABI
__m512d _ZGVeN8v_sin(__m512d);
__m512d _ZGVeN8v_cos(__m512d);
}
#endif

namespace pnkit {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream-splitting rule: channel streams and per-realization streams are
// domain-separated by fixed tags.
namespace stream_tag {
inline constexpr uint64_t vco = 0x56434f2d43480000ULL;          // channel 0
inline constexpr uint64_t ref = 0x5245462d43480000ULL;          // channel 1
inline constexpr uint64_t realization = 0x5245414c495a4531ULL;  // + index
inline uint64_t channel(int idx) { return vco + static_cast<uint64_t>(idx); }
}  // namespace stream_tag

inline uint64_t derive_stream_seed(uint64_t master, uint64_t tag) {
    return splitmix64(master ^ tag);
}
inline uint64_t realization_seed(uint64_t master, uint64_t index) {
    return splitmix64(master ^ (stream_tag::realization + index));
}

struct Xoshiro256pp {
    uint64_t s[4];

    explicit Xoshiro256pp(uint64_t seed = 0) {
        uint64_t z = seed;
        for (auto& w : s) {
            z += 0x9e3779b97f4a7c15ULL;
            uint64_t t = z;
            t = (t ^ (t >> 30)) * 0xbf58476d1ce4e5b9ULL;
            t = (t ^ (t >> 27)) * 0x94d049bb133111ebULL;
            w = t ^ (t >> 31);
        }
    }

    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t next() {
        const uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }
};

namespace detail {

inline constexpr double two_pi = 6.283185307179586476925286766559;
inline constexpr double inv_2_53 = 1.0 / 9007199254740992.0;  // 2^-53

// Scalar Box-Muller block: fills out[0..count) (count even) with normals
// scaled by 'scale'. u1 in (0,1] keeps the log finite.
inline void normal_block_scalar(Xoshiro256pp& g, double* out, int count, double scale) {
    for (int i = 0; i < count; i += 2) {
        const double u1 = static_cast<double>((g.next() >> 11) + 1) * inv_2_53;
        const double u2 = static_cast<double>(g.next() >> 11) * inv_2_53;
        const double r = scale * std::sqrt(-2.0 * std::log(u1));
        const double th = two_pi * u2;
        out[i] = r * std::cos(th);
        out[i + 1] = r * std::sin(th);
    }
}

#if defined(__AVX512F__)
// Same transform, 8 lanes at a time through libmvec. Identical pair ordering
// to the scalar path is not guaranteed at the ulp level, so a build uses one
// path exclusively (compile-time choice).
inline void normal_block_avx512(Xoshiro256pp& g, double* out, int count, double scale) {
    alignas(64) double u1[8], u2[8];
    const __m512d vm2 = _mm512_set1_pd(-2.0);
    const __m512d v2pi = _mm512_set1_pd(two_pi);
    const __m512d vs = _mm512_set1_pd(scale);
    int i = 0;
    for (; i + 16 <= count; i += 16) {
        for (int j = 0; j < 8; ++j) {
            u1[j] = static_cast<double>((g.next() >> 11) + 1) * inv_2_53;
            u2[j] = static_cast<double>(g.next() >> 11) * inv_2_53;
        }
        const __m512d a = _mm512_load_pd(u1);
        const __m512d b = _mm512_load_pd(u2);
        const __m512d r = _mm512_mul_pd(vs, _mm512_sqrt_pd(_mm512_mul_pd(vm2, _ZGVeN8v_log(a))));
        const __m512d th = _mm512_mul_pd(v2pi, b);
        const __m512d zc = _mm512_mul_pd(r, _ZGVeN8v_cos(th));
        const __m512d zs = _mm512_mul_pd(r, _ZGVeN8v_sin(th));
        // interleave to scalar pair order (c0, s0, c1, s1, ...)
        const __m512i idx_lo = _mm512_setr_epi64(0, 8, 1, 9, 2, 10, 3, 11);
        const __m512i idx_hi = _mm512_setr_epi64(4, 12, 5, 13, 6, 14, 7, 15);
        _mm512_storeu_pd(out + i, _mm512_permutex2var_pd(zc, idx_lo, zs));
        _mm512_storeu_pd(out + i + 8, _mm512_permutex2var_pd(zc, idx_hi, zs));
    }
    if (i < count) normal_block_scalar(g, out + i, count - i, scale);
}
#endif

}  // namespace detail

// Generators fill noise in blocks of this size; keeping it shared makes
// paths from different entry points consume their streams identically.
inline constexpr int kNoiseBlock = 8192;

/// Stream of standard normals (optionally pre-scaled) from a seeded engine.
class NormalSource {
public:
    explicit NormalSource(uint64_t stream_seed) : engine_(stream_seed) {}

    /// Fill out[0..count) with normals scaled by 'scale'. Draws are consumed
    /// in pairs; an odd count discards the second draw of the last pair.
    void fill(double* out, int count, double scale = 1.0) {
        const int even = count & ~1;
        fill_even(out, even, scale);
        if (count & 1) {
            double pair[2];
            fill_even(pair, 2, scale);
            out[even] = pair[0];
        }
    }

    /// Single draw (buffered in pairs).
    double next() {
        if (!have_) {
            double pair[2];
            fill_even(pair, 2, 1.0);
            stash_ = pair[1];
            have_ = true;
            return pair[0];
        }
        have_ = false;
        return stash_;
    }

private:
    void fill_even(double* out, int count, double scale) {
#if defined(__AVX512F__)
        detail::normal_block_avx512(engine_, out, count, scale);
#else
        detail::normal_block_scalar(engine_, out, count, scale);
#endif
    }

    Xoshiro256pp engine_;
    double stash_ = 0.0;
    bool have_ = false;
};

}  // namespace pnkit
