// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

// AVX2 lane. Compiled with -mavx2 only when the toolchain targets x86-64;
// callers reach it through the dispatch layer after a runtime CPU check.
// Multiplies and adds are kept separate (no FMA contraction) so the lane
// differs from the scalar reference by reassociation only.

#include "riskdp/kernels.hpp"

#if defined(RISKDP_HAVE_AVX2)

#include <cassert>
#include <cmath>
#include <immintrin.h>

namespace riskdp::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_min_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_min_sd(lo, shuf));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, shuf));
}

inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
    return _mm256_and_pd(v, mask);
}

} // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    const std::size_t n = a.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a.data() + i);
        const __m256d vb = _mm256_loadu_pd(b.data() + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
    }
    double r = hsum(acc);
    for (; i < n; ++i)
        r += a[i] * b[i];
    return r;
}

double sum(std::span<const double> a) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(a.data() + i));
    double r = hsum(acc);
    for (; i < n; ++i)
        r += a[i];
    return r;
}

double min_value(std::span<const double> a) {
    assert(!a.empty());
    const std::size_t n = a.size();
    std::size_t i = 0;
    double r = a[0];
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(a.data());
        for (i = 4; i + 4 <= n; i += 4)
            acc = _mm256_min_pd(acc, _mm256_loadu_pd(a.data() + i));
        r = hmin(acc);
    }
    for (; i < n; ++i)
        if (a[i] < r) r = a[i];
    return r;
}

double max_value(std::span<const double> a) {
    assert(!a.empty());
    const std::size_t n = a.size();
    std::size_t i = 0;
    double r = a[0];
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(a.data());
        for (i = 4; i + 4 <= n; i += 4)
            acc = _mm256_max_pd(acc, _mm256_loadu_pd(a.data() + i));
        r = hmax(acc);
    }
    for (; i < n; ++i)
        if (a[i] > r) r = a[i];
    return r;
}

double sup_norm_diff(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    const std::size_t n = a.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a.data() + i);
        const __m256d vb = _mm256_loadu_pd(b.data() + i);
        acc = _mm256_max_pd(acc, abs_pd(_mm256_sub_pd(va, vb)));
    }
    double r = hmax(acc);
    for (; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > r) r = d;
    }
    return r;
}

double max_abs(std::span<const double> a) {
    const std::size_t n = a.size();
    std::size_t i = 0;
    __m256d acc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(a.data() + i)));
    double r = hmax(acc);
    for (; i < n; ++i) {
        const double d = std::fabs(a[i]);
        if (d > r) r = d;
    }
    return r;
}

} // namespace riskdp::kernels::avx2

#endif // RISKDP_HAVE_AVX2
