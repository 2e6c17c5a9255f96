#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace hirota {

namespace detail {
// 15-point Gauss-Legendre rule on [-1, 1].
inline constexpr double gl15_x[8] = {
    0.0,
    0.2011940939974345, 0.3941513470775634, 0.5709721726085388,
    0.7244177313601700, 0.8482065834104272, 0.9372733924007059,
    0.9879925180204854};
inline constexpr double gl15_w[8] = {
    0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939,
    0.1395706779261543, 0.1071592204671719, 0.0703660474881081,
    0.0307532419961173};

template <class F>
auto gl15(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto acc = gl15_w[0] * f(mid);
    for (int k = 1; k < 8; ++k) {
        const double dx = half * gl15_x[k];
        acc += gl15_w[k] * (f(mid + dx) + f(mid - dx));
    }
    return half * acc;
}

template <class F, class R>
void adapt(const F& f, double a, double b, R whole, double tol, int depth, R& out) {
    const double mid = 0.5 * (a + b);
    const R left = gl15(f, a, mid);
    const R right = gl15(f, mid, b);
    const R sum = left + right;
    if (depth <= 0 || std::abs(sum - whole) <= tol) {
        out += sum;
        return;
    }
    adapt(f, a, mid, left, 0.5 * tol, depth - 1, out);
    adapt(f, mid, b, right, 0.5 * tol, depth - 1, out);
}
}  // namespace detail

/// Adaptive Gauss-Legendre quadrature of a real- or complex-valued integrand
/// over [a, b].
template <class F>
auto integrate(const F& f, double a, double b, double tol = 1e-11, int max_depth = 28) {
    using R = decltype(f(a));
    R out{};
    if (a == b) return out;
    detail::adapt(f, a, b, detail::gl15(f, a, b), tol, max_depth, out);
    return out;
}

/// Same, with forced subdivision points (singularity neighbors, grid edges).
template <class F>
auto integrate_with_breaks(const F& f, double a, double b, std::vector<double> breaks,
                           double tol = 1e-11, int max_depth = 28) {
    using R = decltype(f(a));
    breaks.push_back(a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    R out{};
    for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
        const double lo = std::max(a, breaks[j]);
        const double hi = std::min(b, breaks[j + 1]);
        if (hi > lo) out += integrate(f, lo, hi, tol, max_depth);
    }
    return out;
}

}  // namespace hirota
