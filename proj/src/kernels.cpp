// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

// Runtime backend dispatch. The backend is resolved once, on first use:
// RISKDP_KERNELS=scalar|avx2 wins if set, otherwise the best lane the CPU
// supports. set_backend() repoints the dispatch table afterwards (used by the
// equivalence tests).

#include "riskdp/kernels.hpp"

#include "riskdp/errors.hpp"

#include <cstdlib>
#include <string>

namespace riskdp::kernels {

namespace {

struct Vtable {
    double (*dot)(std::span<const double>, std::span<const double>);
    double (*sum)(std::span<const double>);
    double (*min_value)(std::span<const double>);
    double (*max_value)(std::span<const double>);
    double (*sup_norm_diff)(std::span<const double>, std::span<const double>);
    double (*max_abs)(std::span<const double>);
};

constexpr Vtable kScalar{scalar::dot,       scalar::sum,           scalar::min_value,
                         scalar::max_value, scalar::sup_norm_diff, scalar::max_abs};

#if defined(RISKDP_HAVE_AVX2)
constexpr Vtable kAvx2{avx2::dot,       avx2::sum,           avx2::min_value,
                       avx2::max_value, avx2::sup_norm_diff, avx2::max_abs};
#endif

bool cpu_has_avx2() {
#if defined(RISKDP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

struct State {
    Backend backend;
    const Vtable* table;
};

State detect() {
    Backend pick = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
    if (const char* env = std::getenv("RISKDP_KERNELS")) {
        const std::string v(env);
        if (v == "scalar")
            pick = Backend::scalar;
        else if (v == "avx2" && backend_supported(Backend::avx2))
            pick = Backend::avx2;
    }
#if defined(RISKDP_HAVE_AVX2)
    if (pick == Backend::avx2) return {Backend::avx2, &kAvx2};
#endif
    return {Backend::scalar, &kScalar};
}

State& state() {
    static State s = detect();
    return s;
}

} // namespace

Backend active_backend() { return state().backend; }

bool backend_supported(Backend b) {
    switch (b) {
    case Backend::scalar: return true;
    case Backend::avx2: return cpu_has_avx2();
    }
    return false;
}

void set_backend(Backend b) {
    if (!backend_supported(b))
        throw ValidationError("KERNEL_BACKEND", "",
                              std::string(backend_name(b)) + " is not supported on this host");
#if defined(RISKDP_HAVE_AVX2)
    if (b == Backend::avx2) {
        state() = {Backend::avx2, &kAvx2};
        return;
    }
#endif
    state() = {Backend::scalar, &kScalar};
}

std::string_view backend_name(Backend b) {
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    }
    return "unknown";
}

double dot(std::span<const double> a, std::span<const double> b) { return state().table->dot(a, b); }
double sum(std::span<const double> a) { return state().table->sum(a); }
double min_value(std::span<const double> a) { return state().table->min_value(a); }
double max_value(std::span<const double> a) { return state().table->max_value(a); }
double sup_norm_diff(std::span<const double> a, std::span<const double> b) {
    return state().table->sup_norm_diff(a, b);
}
double max_abs(std::span<const double> a) { return state().table->max_abs(a); }

} // namespace riskdp::kernels
