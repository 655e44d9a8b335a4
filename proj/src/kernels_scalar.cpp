// Copyright (C) 2026 riskdp contributors
// SPDX-License-Identifier: Apache-2.0

#include "riskdp/kernels.hpp"

#include <cassert>
#include <cmath>

namespace riskdp::kernels::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += a[i] * b[i];
    return acc;
}

double sum(std::span<const double> a) {
    double acc = 0.0;
    for (double v : a)
        acc += v;
    return acc;
}

double min_value(std::span<const double> a) {
    assert(!a.empty());
    double m = a[0];
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] < m) m = a[i];
    return m;
}

double max_value(std::span<const double> a) {
    assert(!a.empty());
    double m = a[0];
    for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] > m) m = a[i];
    return m;
}

double sup_norm_diff(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) {
        const double d = std::fabs(v);
        if (d > m) m = d;
    }
    return m;
}

} // namespace riskdp::kernels::scalar
