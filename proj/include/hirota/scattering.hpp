#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hirota/interp.hpp"
#include "hirota/types.hpp"

namespace hirota {

struct JostConfig {
    // Max |(1 + 2|z|) h| per RK4 substep; the substep count per grid cell grows
    // with |z| so the oscillation q(y) e^{2izy} stays resolved.
    double phase_budget = 0.04;
    std::size_t min_substeps_per_cell = 1;
    std::size_t max_substeps_per_cell = 4096;
    double truncation_tol = 1e-8;  // relative boundary decay required of inputs
    bool strict_tails = false;
    double s11_floor = 1e-8;       // non-generic threshold for r = s21/s11
    std::size_t threads = 0;       // 0: use HIROTA_THREADS env var, else 1
};

namespace detail {

enum class ColumnSet { both, first, second };

// Advance Phi across [x(j_from), x(j_to)].  Within each substep the commutator
// phase e^{2iz(tau - s)} is applied analytically, so the scheme stays exact on
// the oscillatory factor and RK4 only resolves the potential itself.  Columns
// decouple: the first column is the one stable for Im z > 0 when integrating
// rightward, the second when integrating leftward.
inline Mat2 propagate(const CubicSpline& q, cplx z, double x0, double dx,
                      std::size_t j_from, std::size_t j_to, Mat2 m, ColumnSet cols,
                      const JostConfig& cfg,
                      const std::function<void(std::size_t, const Mat2&)>& on_node = {}) {
    if (on_node) on_node(j_from, m);
    if (j_from == j_to) return m;
    const bool fwd = j_to > j_from;
    const double absz = std::abs(z);
    std::size_t msub = static_cast<std::size_t>(
        std::ceil(dx * (1.0 + 2.0 * absz) / cfg.phase_budget));
    msub = std::min(std::max(msub, std::max<std::size_t>(cfg.min_substeps_per_cell, 1)),
                    cfg.max_substeps_per_cell);
    const double h = (fwd ? dx : -dx) / static_cast<double>(msub);
    const cplx p = std::exp(iu * z * h);   // e^{2iz h} = p^2
    const cplx p2 = p * p;

    const bool do1 = cols != ColumnSet::second;
    const bool do2 = cols != ColumnSet::first;

    std::size_t j = j_from;
    while (j != j_to) {
        const std::size_t jn = fwd ? j + 1 : j - 1;
        const double xc = x0 + static_cast<double>(j) * dx;
        for (std::size_t s = 0; s < msub; ++s) {
            const double xs = xc + static_cast<double>(s) * h;
            const cplx q0 = q(xs);
            const cplx qm = q(xs + 0.5 * h);
            const cplx q1 = q(xs + h);
            auto rk4 = [&](cplx a, cplx b) -> std::array<cplx, 2> {
                // a' = q E b, b' = -q* E^{-1} a with E = e^{2iz(tau-s)}
                const cplx k1a = q0 * b, k1b = -std::conj(q0) * a;
                cplx aa = a + 0.5 * h * k1a, bb = b + 0.5 * h * k1b;
                const cplx k2a = qm * p * bb, k2b = -std::conj(qm) / p * aa;
                aa = a + 0.5 * h * k2a; bb = b + 0.5 * h * k2b;
                const cplx k3a = qm * p * bb, k3b = -std::conj(qm) / p * aa;
                aa = a + h * k3a; bb = b + h * k3b;
                const cplx k4a = q1 * p2 * bb, k4b = -std::conj(q1) / p2 * aa;
                return {a + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a),
                        b + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)};
            };
            if (do1) {
                const auto r = rk4(m.a11, m.a21);        // (v1, u2), u2(start) = v2
                m.a11 = r[0];
                m.a21 = p2 * r[1];                       // v2 = e^{2izh} u2
            }
            if (do2) {
                const auto r = rk4(m.a12, m.a22);        // (u1, w2), u1(start) = w1
                m.a12 = r[0] / p2;                       // w1 = e^{-2izh} u1
                m.a22 = r[1];
            }
        }
        j = jn;
        if (on_node) on_node(j, m);
    }
    return m;
}

inline CubicSpline spline_of(const Potential& q, const JostConfig& cfg) {
    validate_tails(q, cfg.truncation_tol, cfg.strict_tails);
    return CubicSpline::uniform(q.x0, q.dx, q.samples);
}

inline std::size_t node_of(const Potential& q, double x) {
    const double u = (x - q.x0) / q.dx;
    const auto j = static_cast<long>(std::llround(u));
    if (j < 0 || static_cast<std::size_t>(j) >= q.n() || std::abs(u - static_cast<double>(j)) > 1e-6)
        throw std::invalid_argument("jost: target x is not a grid node");
    return static_cast<std::size_t>(j);
}

/// Index of the grid node nearest to x = 0 (the Wronskian matching point).
inline std::size_t matching_node(const Potential& q) {
    const double u = -q.x0 / q.dx;
    auto j = static_cast<long>(std::llround(u));
    j = std::max<long>(0, std::min<long>(j, static_cast<long>(q.n()) - 1));
    return static_cast<std::size_t>(j);
}

inline std::size_t thread_count(const JostConfig& cfg) {
    if (cfg.threads) return cfg.threads;
    if (const char* e = std::getenv("HIROTA_THREADS")) {
        const long v = std::strtol(e, nullptr, 10);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 1;
}

template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& body) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t tcount = std::min(threads, n);
    for (std::size_t t = 0; t < tcount; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += tcount) body(i);
        });
    for (auto& th : pool) th.join();
}

// Attach e^{i omega t sigma3-hat}: converts the frozen-time normalization to
// the time-dependent Jost convention, whose Wronskians give the t-independent
// scattering matrix.
inline void apply_time_phase(Mat2& m, cplx z, double t, double alpha, double beta) {
    if (t == 0.0) return;
    const cplx w = phase_rate(z, alpha, beta, PhaseConvention::half);
    const cplx f = std::exp(2.0 * iu * w * t);
    m.a12 *= f;
    m.a21 /= f;
}

}  // namespace detail

/// Phi_-(x; z) integrated from the left edge with Phi -> I, evaluated at the
/// right grid edge.  Trustworthy as a full matrix for real z; at complex z only
/// the column analytic in that half-plane is meaningful (first column for
/// Im z > 0, second for Im z < 0).  t_phase attaches the e^{-i omega t
/// sigma3-hat} normalization phase of the time-dependent Jost convention; it
/// does not change determinants or analytic columns' moduli.
inline JostEvaluation jost_minus(const Potential& q, cplx z, double t_phase = 0.0,
                                 const JostConfig& cfg = {}, double alpha = 1.0,
                                 double beta = 0.0) {
    const auto qs = detail::spline_of(q, cfg);
    Mat2 m = detail::propagate(qs, z, q.x0, q.dx, 0, q.n() - 1, Mat2::identity(),
                               detail::ColumnSet::both, cfg);
    detail::apply_time_phase(m, z, t_phase, alpha, beta);
    return {q.x_end(), z, m};
}

/// Mirror of jost_minus: Phi_+ integrated from the right edge, evaluated at
/// the left grid edge.
inline JostEvaluation jost_plus(const Potential& q, cplx z, double t_phase = 0.0,
                                const JostConfig& cfg = {}, double alpha = 1.0,
                                double beta = 0.0) {
    const auto qs = detail::spline_of(q, cfg);
    Mat2 m = detail::propagate(qs, z, q.x0, q.dx, q.n() - 1, 0, Mat2::identity(),
                               detail::ColumnSet::both, cfg);
    detail::apply_time_phase(m, z, t_phase, alpha, beta);
    return {q.x0, z, m};
}

namespace detail {

// Analytic columns at the matching node x ~ 0 (valid for Im z >= 0).
struct MatchedColumns {
    std::array<cplx, 2> minus1;  // Phi_-,1(0, z)
    std::array<cplx, 2> plus2;   // Phi_+,2(0, z)
};

inline MatchedColumns matched_columns(const CubicSpline& qs, const Potential& q, cplx z,
                                      const JostConfig& cfg) {
    const std::size_t j0 = matching_node(q);
    const Mat2 l = propagate(qs, z, q.x0, q.dx, 0, j0, Mat2::identity(), ColumnSet::first, cfg);
    const Mat2 r = propagate(qs, z, q.x0, q.dx, q.n() - 1, j0, Mat2::identity(),
                             ColumnSet::second, cfg);
    return {{l.a11, l.a21}, {r.a12, r.a22}};
}

inline cplx s11_of(const MatchedColumns& mc) {
    return mc.minus1[0] * mc.plus2[1] - mc.minus1[1] * mc.plus2[0];
}

}  // namespace detail

/// Scattering matrix from Wronskians of the Jost columns matched at x = 0.
/// Full matrix on the real axis; for Im z > 0 only s11 is computed (the other
/// entries are NaN), for Im z < 0 only s22.
inline ScatteringMatrixValue scattering_matrix(const Potential& q, cplx z,
                                               double t_phase = 0.0,
                                               const JostConfig& cfg = {},
                                               double alpha = 1.0, double beta = 0.0) {
    const auto qs = detail::spline_of(q, cfg);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ScatteringMatrixValue s;
    s.z = z;
    if (z.imag() > 0.0) {
        const auto mc = detail::matched_columns(qs, q, z, cfg);
        s.s11 = detail::s11_of(mc);
        s.s12 = s.s21 = s.s22 = cplx(nan, nan);
        return s;
    }
    if (z.imag() < 0.0) {
        const std::size_t j0 = detail::matching_node(q);
        const Mat2 l = detail::propagate(qs, z, q.x0, q.dx, 0, j0, Mat2::identity(),
                                         detail::ColumnSet::second, cfg);
        const Mat2 r = detail::propagate(qs, z, q.x0, q.dx, q.n() - 1, j0, Mat2::identity(),
                                         detail::ColumnSet::first, cfg);
        s.s22 = r.a11 * l.a22 - r.a21 * l.a12;  // det(Phi_+,1, Phi_-,2)
        s.s11 = s.s12 = s.s21 = cplx(nan, nan);
        return s;
    }
    const std::size_t j0 = detail::matching_node(q);
    const Mat2 l = detail::propagate(qs, z, q.x0, q.dx, 0, j0, Mat2::identity(),
                                     detail::ColumnSet::both, cfg);
    const Mat2 r = detail::propagate(qs, z, q.x0, q.dx, q.n() - 1, j0, Mat2::identity(),
                                     detail::ColumnSet::both, cfg);
    const auto det2 = [](std::array<cplx, 2> u, std::array<cplx, 2> v) {
        return u[0] * v[1] - u[1] * v[0];
    };
    // Phi_- = Phi_+ e^{-izx sigma3-hat} S, expanded column by column at x = 0
    s.s11 = det2(l.col1(), r.col2());
    s.s22 = det2(r.col1(), l.col2());
    s.s21 = det2(r.col1(), l.col1());
    s.s12 = det2(l.col2(), r.col2());
    if (t_phase != 0.0) {
        const cplx w = phase_rate(z, alpha, beta, PhaseConvention::half);
        const cplx f = std::exp(-2.0 * iu * w * t_phase);
        s.s21 *= f;
        s.s12 /= f;
    }
    return s;
}

/// Reflection coefficient r = s21/s11 sampled on a real z-grid.
inline ScatteringData reflection_coefficient(const Potential& q,
                                             const std::vector<double>& zgrid,
                                             double alpha, double beta,
                                             const JostConfig& cfg = {}) {
    const auto qs = detail::spline_of(q, cfg);
    ScatteringData d;
    d.zgrid = zgrid;
    d.r.resize(zgrid.size());
    d.alpha = alpha;
    d.beta = beta;
    std::vector<double> bad(zgrid.size(), 0.0);
    detail::parallel_for(zgrid.size(), detail::thread_count(cfg), [&](std::size_t i) {
        const cplx z(zgrid[i], 0.0);
        const std::size_t j0 = detail::matching_node(q);
        const Mat2 l = detail::propagate(qs, z, q.x0, q.dx, 0, j0, Mat2::identity(),
                                         detail::ColumnSet::both, cfg);
        const Mat2 r = detail::propagate(qs, z, q.x0, q.dx, q.n() - 1, j0, Mat2::identity(),
                                         detail::ColumnSet::both, cfg);
        const cplx s11 = l.a11 * r.a22 - l.a21 * r.a12;
        const cplx s21 = r.a11 * l.a21 - r.a21 * l.a11;
        if (std::abs(s11) < cfg.s11_floor) {
            bad[i] = 1.0;
            d.r[i] = cplx(0.0);
        } else {
            d.r[i] = s21 / s11;
        }
    });
    for (std::size_t i = 0; i < bad.size(); ++i)
        if (bad[i] != 0.0)
            throw non_generic_potential_error(
                zgrid[i], "reflection: |s11| below threshold at z = " + std::to_string(zgrid[i]));
    d.validate();
    return d;
}

// ---------------------------------------------------------------------------
// Bound states
// ---------------------------------------------------------------------------

struct SearchBox {
    double re_lo = -6.0, re_hi = 6.0;
    double im_lo = 1e-3, im_hi = 2.0;
};

struct BoundStateConfig {
    JostConfig jost;
    int boundary_samples = 32;     // initial samples per box edge
    int max_refine_depth = 30;     // phase-tracking bisection depth
    int max_box_splits = 40;
    double newton_tol = 1e-11;
    int newton_iters = 60;
    double fd_step = 1e-6;         // for s11' central differences
    double derivative_floor = 1e-8;
};

namespace detail {

struct S11Fn {
    const CubicSpline* qs;
    const Potential* q;
    const JostConfig* cfg;
    cplx operator()(cplx z) const { return s11_of(matched_columns(*qs, *q, z, *cfg)); }
};

// Winding number of s11 around a rectangle via adaptive phase tracking.
inline double wind_edge(const S11Fn& f, cplx a, cplx b, cplx fa, cplx fb, int depth) {
    const double d = std::arg(fb / fa);
    if (std::abs(d) < 0.8 || depth <= 0) return d;
    const cplx m = 0.5 * (a + b);
    const cplx fm = f(m);
    return wind_edge(f, a, m, fa, fm, depth - 1) + wind_edge(f, m, b, fm, fb, depth - 1);
}

inline int winding_number(const S11Fn& f, const SearchBox& box, const BoundStateConfig& cfg) {
    const std::array<cplx, 4> corners = {cplx(box.re_lo, box.im_lo), cplx(box.re_hi, box.im_lo),
                                         cplx(box.re_hi, box.im_hi), cplx(box.re_lo, box.im_hi)};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        const cplx a = corners[e], b = corners[(e + 1) % 4];
        cplx prev = a;
        cplx fprev = f(a);
        for (int s = 1; s <= cfg.boundary_samples; ++s) {
            const cplx cur = a + (b - a) * (static_cast<double>(s) / cfg.boundary_samples);
            const cplx fcur = f(cur);
            total += wind_edge(f, prev, cur, fprev, fcur, cfg.max_refine_depth);
            prev = cur;
            fprev = fcur;
        }
    }
    const double w = total / (2.0 * M_PI);
    const int wi = static_cast<int>(std::lround(w));
    if (std::abs(w - wi) > 0.25)
        throw numerical_error("bound states: winding number did not converge to an integer");
    return wi;
}

inline std::optional<cplx> newton_root(const S11Fn& f, cplx z0, const SearchBox& box,
                                       const BoundStateConfig& cfg) {
    cplx z = z0;
    for (int it = 0; it < cfg.newton_iters; ++it) {
        const double h = cfg.fd_step * std::max(1.0, std::abs(z));
        const cplx fz = f(z);
        const cplx d = (f(z + h) - f(z - h)) / (2.0 * h);
        if (std::abs(d) == 0.0) return std::nullopt;
        const cplx step = fz / d;
        z -= step;
        if (z.imag() <= 0.0) z = cplx(z.real(), 1e-6);
        if (std::abs(step) < cfg.newton_tol) {
            const bool inside = z.real() >= box.re_lo - 1e-6 && z.real() <= box.re_hi + 1e-6 &&
                                z.imag() > 0.0 && z.imag() <= box.im_hi + 1e-3;
            return inside ? std::optional<cplx>(z) : std::nullopt;
        }
    }
    return std::nullopt;
}

inline void collect_roots(const S11Fn& f, SearchBox box, const BoundStateConfig& cfg,
                          std::vector<cplx>& roots, int splits_left) {
    const int w = winding_number(f, box, cfg);
    if (w == 0) return;
    const cplx center(0.5 * (box.re_lo + box.re_hi), 0.5 * (box.im_lo + box.im_hi));
    if (w == 1) {
        if (auto r = newton_root(f, center, box, cfg)) {
            for (const auto& known : roots)
                if (std::abs(known - *r) < 1e-7) return;
            roots.push_back(*r);
            return;
        }
    }
    if (splits_left <= 0)
        throw inconsistent_count_error(w, 0, "bound states: box refinement exhausted");
    SearchBox a = box, b = box;
    if (box.re_hi - box.re_lo >= box.im_hi - box.im_lo) {
        const double mid = center.real();
        a.re_hi = mid;
        b.re_lo = mid;
    } else {
        const double mid = center.imag();
        a.im_hi = mid;
        b.im_lo = mid;
    }
    collect_roots(f, a, cfg, roots, splits_left - 1);
    collect_roots(f, b, cfg, roots, splits_left - 1);
}

}  // namespace detail

/// Zeros of s11 inside the box (argument-principle count, then Newton on s11
/// with finite-difference derivatives) together with their norming constants
/// c_k = b_k / s11'(z_k), b_k measured from the column proportionality
/// Phi_-,1(0, z_k) = b_k Phi_+,2(0, z_k).
inline std::vector<BoundState> find_bound_states(const Potential& q, const SearchBox& box,
                                                 const BoundStateConfig& cfg = {}) {
    const auto qs = detail::spline_of(q, cfg.jost);
    const detail::S11Fn f{&qs, &q, &cfg.jost};
    const int total = detail::winding_number(f, box, cfg);
    std::vector<cplx> roots;
    if (total > 0) detail::collect_roots(f, box, cfg, roots, cfg.max_box_splits);
    if (static_cast<int>(roots.size()) != total)
        throw inconsistent_count_error(total, static_cast<int>(roots.size()),
                                       "bound states: argument-principle count (" +
                                           std::to_string(total) + ") != converged roots (" +
                                           std::to_string(roots.size()) + ")");
    std::sort(roots.begin(), roots.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });

    std::vector<BoundState> out;
    for (const cplx zk : roots) {
        const double h = cfg.fd_step * std::max(1.0, std::abs(zk));
        const cplx d = (f(zk + h) - f(zk - h)) / (2.0 * h);
        if (std::abs(d) < cfg.derivative_floor)
            throw degeneracy_error("bound states: |s11'| below threshold (non-simple zero?)");
        const auto mc = detail::matched_columns(qs, q, zk, cfg.jost);
        const double vv = std::norm(mc.plus2[0]) + std::norm(mc.plus2[1]);
        if (vv == 0.0) throw degeneracy_error("bound states: vanishing Jost column");
        const cplx b = (mc.minus1[0] * std::conj(mc.plus2[0]) +
                        mc.minus1[1] * std::conj(mc.plus2[1])) / vv;
        out.push_back({zk, b / d});
    }
    return out;
}

/// Trivial time evolution of the scattering data.  The doubled jump-factor
/// convention Theta = 8 beta z^3 + 4 alpha z^2 is the one consistent with the
/// PDE flow; the halved variant of Prop-2.3 type is selectable so the
/// round-trip experiment can report both.
inline ScatteringData evolve_scattering(const ScatteringData& d, double t,
                                        PhaseConvention conv = PhaseConvention::jump_doubled) {
    d.validate();
    ScatteringData out = d;
    for (std::size_t i = 0; i < out.r.size(); ++i) {
        const double th = phase_rate(cplx(d.zgrid[i], 0.0), d.alpha, d.beta, conv).real() * t;
        out.r[i] *= cplx(std::cos(th), std::sin(th));
    }
    for (auto& b : out.bound_states)
        b.c *= std::exp(iu * phase_rate(b.z, d.alpha, d.beta, conv) * t);
    return out;
}

}  // namespace hirota
