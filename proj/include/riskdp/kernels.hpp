// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace riskdp::kernels {

/// Dense-array reduction kernels used by the risk evaluators and the solver.
/// A scalar reference lane always exists; on x86-64 an AVX2 lane is compiled
/// in and picked at runtime when the CPU supports it. The lanes are
/// equivalence-tested against each other: min/max/sup-norm reductions agree
/// bit-exactly, dot/sum agree up to reassociation error.
///
/// Backend selection happens once, at first use. The environment variable
/// RISKDP_KERNELS=scalar|avx2 overrides autodetection; set_backend() does the
/// same programmatically (tests use it to pin a lane).
enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_supported(Backend b);
void set_backend(Backend b); // throws ValidationError if unsupported on this host
std::string_view backend_name(Backend b);

/// Sum of element-wise products; 0 for empty input. Sizes must match.
double dot(std::span<const double> a, std::span<const double> b);

/// Sum of elements; 0 for empty input.
double sum(std::span<const double> a);

/// Smallest / largest element; input must be non-empty.
double min_value(std::span<const double> a);
double max_value(std::span<const double> a);

/// max_i |a_i - b_i|; 0 for empty input. Sizes must match.
double sup_norm_diff(std::span<const double> a, std::span<const double> b);

/// max_i |a_i|; 0 for empty input.
double max_abs(std::span<const double> a);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double min_value(std::span<const double> a);
double max_value(std::span<const double> a);
double sup_norm_diff(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
} // namespace scalar

#if defined(RISKDP_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
double min_value(std::span<const double> a);
double max_value(std::span<const double> a);
double sup_norm_diff(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
} // namespace avx2
#endif

} // namespace riskdp::kernels
