#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "hirota/scattering.hpp"
#include "hirota/types.hpp"

namespace hirota {

enum class TwistDirection { add, remove };

/// Blaschke twist of the reflection coefficient and bound-state bookkeeping.
/// remove(z_s): r *= (z - z_s)/(z - z_s*), drops the state, survivors get
/// c_k *= (z_k - z_s)/(z_k - z_s*); add is the exact inverse.  On add, the new
/// state carries c_new (default: the soliton centered at x_off = 0 with
/// gamma = 0).
inline ScatteringData twist_reflection(const ScatteringData& d, cplx z_s, TwistDirection dir,
                                       std::optional<cplx> c_new = std::nullopt) {
    if (!(z_s.imag() > 0.0)) throw std::invalid_argument("twist: Im z_s must be > 0");
    d.validate();
    ScatteringData out = d;
    const cplx zc = std::conj(z_s);
    for (std::size_t i = 0; i < out.r.size(); ++i) {
        const cplx z(out.zgrid[i], 0.0);
        out.r[i] *= (dir == TwistDirection::add) ? (z - zc) / (z - z_s) : (z - z_s) / (z - zc);
    }
    if (dir == TwistDirection::add) {
        for (auto& b : out.bound_states) b.c *= (b.z - zc) / (b.z - z_s);
        const double eta = z_s.imag();
        const cplx c = c_new.value_or(2.0 * eta * std::exp(iu * (-M_PI / 2.0)));
        out.bound_states.push_back({z_s, c});
    } else {
        auto it = out.bound_states.end();
        double best = 1e300;
        for (auto j = out.bound_states.begin(); j != out.bound_states.end(); ++j) {
            const double dist = std::abs(j->z - z_s);
            if (dist < best) {
                best = dist;
                it = j;
            }
        }
        if (it == out.bound_states.end() || best > 1e-9 * std::max(1.0, std::abs(z_s)))
            throw not_found_error("twist: no bound state at requested z_s");
        out.bound_states.erase(it);
        for (auto& b : out.bound_states) b.c *= (b.z - z_s) / (b.z - zc);
    }
    return out;
}

/// Value of the dressed Jost solution Psi(x, z_s) used by the dressing matrix.
using JostSupplier = std::function<Mat2(double x)>;

/// Psi for the zero seed: e^{-i z_s x sigma3}.  Time dependence enters only
/// through the norming constant, never through the supplier.
inline JostSupplier free_jost_supplier(cplx z_s) {
    return [z_s](double x) -> Mat2 {
        const cplx e = std::exp(-iu * z_s * x);
        return {e, cplx(0.0), cplx(0.0), 1.0 / e};
    };
}

/// Psi for a numerical seed: columns assembled from the half-plane-analytic
/// Jost columns, first column normalized by s11 (the RH-solution convention).
/// Values are tabulated on the seed's grid; queries must land on grid nodes.
inline JostSupplier numerical_jost_supplier(const Potential& q, cplx z_s,
                                            const JostConfig& cfg = {}) {
    if (!(z_s.imag() > 0.0))
        throw std::invalid_argument("jost supplier: Im z_s must be > 0");
    auto qs = detail::spline_of(q, cfg);
    const std::size_t n = q.n();

    auto col1 = std::make_shared<std::vector<std::array<cplx, 2>>>(n);
    auto col2 = std::make_shared<std::vector<std::array<cplx, 2>>>(n);
    detail::propagate(qs, z_s, q.x0, q.dx, 0, n - 1, Mat2::identity(),
                      detail::ColumnSet::first, cfg,
                      [&](std::size_t j, const Mat2& m) { (*col1)[j] = {m.a11, m.a21}; });
    detail::propagate(qs, z_s, q.x0, q.dx, n - 1, 0, Mat2::identity(),
                      detail::ColumnSet::second, cfg,
                      [&](std::size_t j, const Mat2& m) { (*col2)[j] = {m.a12, m.a22}; });
    const std::size_t j0 = detail::matching_node(q);
    const cplx s11 = (*col1)[j0][0] * (*col2)[j0][1] - (*col1)[j0][1] * (*col2)[j0][0];
    if (std::abs(s11) < 1e-12)
        throw degeneracy_error("jost supplier: z_s is (numerically) an existing bound state");

    const double x0 = q.x0, dx = q.dx;
    return [=](double x) -> Mat2 {
        const double u = (x - x0) / dx;
        const auto j = static_cast<long>(std::llround(u));
        if (j < 0 || static_cast<std::size_t>(j) >= n ||
            std::abs(u - static_cast<double>(j)) > 1e-6)
            throw std::invalid_argument("jost supplier: x off the seed grid");
        const auto& c1 = (*col1)[static_cast<std::size_t>(j)];
        const auto& c2 = (*col2)[static_cast<std::size_t>(j)];
        const cplx ph = std::exp(-iu * z_s * x);
        return {c1[0] * ph / s11, c2[0] / ph, c1[1] * ph / s11, c2[1] / ph};
    };
}

/// One Darboux step: insert the bound state (z_s, c1) into the seed q.  The
/// dressing column is b1 = Psi(x, z_s) (1, -c1(t)/(z_s - z_s*))^T and
///   q~ = q - 2i (z_s - z_s*) (b1)_1 (b1)_2^* / (|(b1)_1|^2 + |(b1)_2|^2).
/// With the zero seed this reproduces the closed-form soliton; t phases the
/// norming constant by the validated e^{i(8 beta z^3 + 4 alpha z^2) t} factor.
inline Potential add_bound_state(const Potential& q, const DressingPair& d,
                                 const JostSupplier& psi, double t = 0.0,
                                 double alpha = 1.0, double beta = 0.0) {
    d.validate();
    const cplx c_t = d.c1 * std::exp(iu * phase_rate(d.z_s, alpha, beta) * t);
    const cplx gap = d.z_s - std::conj(d.z_s);  // 2i Im z_s
    Potential out = q;
    for (std::size_t j = 0; j < q.n(); ++j) {
        const Mat2 psi_x = psi(q.x_at(j));
        const cplx b1 = psi_x.a11 - (c_t / gap) * psi_x.a12;
        const cplx b2 = psi_x.a21 - (c_t / gap) * psi_x.a22;
        const double den = std::norm(b1) + std::norm(b2);
        if (!(den > 1e-280))
            throw degeneracy_error("darboux: dressing column vanished at x = " +
                                   std::to_string(q.x_at(j)));
        out.samples[j] = q.samples[j] - 2.0 * iu * gap * b1 * std::conj(b2) / den;
    }
    return out;
}

/// Soliton-extraction term: q~ = q - B strips the bound state (z_s, c1) from q
/// when m is the radiative RH solution evaluated at z_s (m = I for a
/// reflectionless seed).
inline cplx backlund_B(const JostEvaluation& m, const DressingPair& d, double x, double t,
                       double alpha = 1.0, double beta = 0.0) {
    d.validate();
    const cplx z_s = d.z_s;
    const cplx c_t = d.c1 * std::exp(iu * phase_rate(z_s, alpha, beta) * t);
    const cplx gap = z_s - std::conj(z_s);
    const cplx ep = std::exp(iu * z_s * x);
    const cplx f1 = m.m.a11 / ep - (c_t / gap) * m.m.a12 * ep;
    const cplx f2 = m.m.a21 / ep - (c_t / gap) * m.m.a22 * ep;
    const double den = std::norm(f1) + std::norm(f2);
    if (!(den > 1e-280)) throw degeneracy_error("backlund: ||f|| vanished");
    return -2.0 * iu * gap * f1 * std::conj(f2) / den;
}

}  // namespace hirota
