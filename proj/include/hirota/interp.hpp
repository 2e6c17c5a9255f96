#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hirota/types.hpp"

namespace hirota {

/// Natural cubic spline through (x_k, y_k) with complex values.  Knots must be
/// strictly increasing.  Evaluation outside the knot range returns zero, which
/// matches how sampled potentials and reflection coefficients are used (both
/// decay at the window edges).
class CubicSpline {
  public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> x, std::vector<cplx> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw std::invalid_argument("spline: need >= 2 knots");
        for (std::size_t j = 1; j < n; ++j)
            if (!(x_[j] > x_[j - 1])) throw std::invalid_argument("spline: knots not increasing");
        m_.assign(n, cplx(0.0));
        if (n == 2) return;

        // Tridiagonal system for second derivatives, natural boundary.
        std::vector<double> h(n - 1);
        for (std::size_t j = 0; j + 1 < n; ++j) h[j] = x_[j + 1] - x_[j];
        std::vector<double> diag(n, 0.0), sub(n, 0.0);
        std::vector<cplx> rhs(n, cplx(0.0));
        for (std::size_t j = 1; j + 1 < n; ++j) {
            diag[j] = 2.0 * (h[j - 1] + h[j]);
            sub[j] = h[j - 1];
            rhs[j] = 6.0 * ((y_[j + 1] - y_[j]) / h[j] - (y_[j] - y_[j - 1]) / h[j - 1]);
        }
        // forward elimination on rows 1..n-2
        for (std::size_t j = 2; j + 1 < n; ++j) {
            const double w = sub[j] / diag[j - 1];
            diag[j] -= w * h[j - 1];
            rhs[j] -= w * rhs[j - 1];
        }
        for (std::size_t jj = n - 2; jj >= 1; --jj) {
            const cplx upper = (jj + 2 < n) ? h[jj] * m_[jj + 1] : cplx(0.0);
            m_[jj] = (rhs[jj] - upper) / diag[jj];
            if (jj == 1) break;
        }
    }

    static CubicSpline uniform(double x0, double dx, const std::vector<cplx>& y) {
        std::vector<double> x(y.size());
        for (std::size_t j = 0; j < y.size(); ++j) x[j] = x0 + static_cast<double>(j) * dx;
        return CubicSpline(std::move(x), y);
    }

    cplx operator()(double x) const {
        if (x_.empty() || x < x_.front() || x > x_.back()) return cplx(0.0);
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        const double h = x_[hi] - x_[lo];
        const double a = (x_[hi] - x) / h, b = (x - x_[lo]) / h;
        return a * y_[lo] + b * y_[hi] +
               ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * (h * h) / 6.0;
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

  private:
    std::vector<double> x_;
    std::vector<cplx> y_;
    std::vector<cplx> m_;  // second derivatives at knots
};

}  // namespace hirota
