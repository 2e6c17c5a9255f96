#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "hirota/gamma.hpp"
#include "hirota/interp.hpp"
#include "hirota/quadrature.hpp"
#include "hirota/soliton.hpp"
#include "hirota/types.hpp"

namespace hirota {

struct StationaryPair {
    double z1 = 0.0, z2 = 0.0;  // z1 <= z2, roots of x/t + 4 alpha z + 12 beta z^2
};

/// Real critical points of the phase theta = z x/t + 2 alpha z^2 + 4 beta z^3.
inline StationaryPair stationary_points(double x, double t, double alpha, double beta) {
    if (t == 0.0) throw cone_error("stationary points: t must be nonzero");
    if (beta == 0.0)
        throw cone_error("stationary points: beta = 0 is the NLS-degenerate case; "
                         "use the single point z = -x/(4 alpha t)");
    const double disc = alpha * alpha - 3.0 * beta * x / t;
    if (disc < 0.0)
        throw cone_error("stationary points: no real stationary point (outside the cone)");
    const double s = std::sqrt(disc);
    const double za = (-alpha - s) / (6.0 * beta);
    const double zb = (-alpha + s) / (6.0 * beta);
    return {std::min(za, zb), std::max(za, zb)};
}

inline double nu_of(cplx r_at_s) { return -std::log1p(std::norm(r_at_s)) / (2.0 * M_PI); }

struct PcConstants {
    double kappa = 0.0;   // <= 0
    cplx beta12{0.0};
    cplx beta21{0.0};
};

/// Off-diagonal constants of the parabolic-cylinder model.  beta21 uses the
/// sign that satisfies beta12 * beta21 = kappa exactly (via the Gamma
/// reflection identity); |beta12|^2 = |kappa|.
inline PcConstants pc_constants(cplx r0) {
    if (r0 == cplx(0.0)) return {0.0, cplx(0.0), cplx(0.0)};
    const double kappa = -std::log1p(std::norm(r0)) / (2.0 * M_PI);
    const double root = std::sqrt(2.0 * M_PI);
    const double damp = std::exp(-M_PI * kappa / 2.0);
    const cplx b12 = -iu * root * std::exp(iu * M_PI / 4.0) * damp /
                     (r0 * gamma_c(cplx(0.0, -kappa)));
    const cplx b21 = -iu * root * std::exp(-iu * M_PI / 4.0) * damp /
                     (std::conj(r0) * gamma_c(cplx(0.0, kappa)));
    return {kappa, b12, b21};
}

struct AsymptoticsConfig {
    double quad_tol = 1e-12;
    double contour_clearance = 1e-6;
    double tail_tol = 1e-6;   // absolute bound on the dropped half-line exponent
    double t_min = 1.0;       // dispersive prediction refuses smaller t
};

namespace detail {

/// nu(s) interpolant built from |r|^2 samples; zero outside the grid.
class NuInterp {
  public:
    explicit NuInterp(const ScatteringData& d) {
        std::vector<cplx> a2(d.r.size());
        for (std::size_t i = 0; i < d.r.size(); ++i) a2[i] = std::norm(d.r[i]);
        spline_ = CubicSpline(d.zgrid, std::move(a2));
    }
    double operator()(double s) const {
        const double a2 = std::max(0.0, spline_(s).real());
        return -std::log1p(a2) / (2.0 * M_PI);
    }

  private:
    CubicSpline spline_;
};

inline double dist_to_segment(cplx z, double a, double b) {
    const double x = z.real();
    const double dx = x < a ? a - x : (x > b ? x - b : 0.0);
    return std::hypot(dx, z.imag());
}

}  // namespace detail

/// delta(z) = exp[i int_{z1}^{z2} nu(s)/(s - z) ds], z off the segment.
inline cplx delta_fn(const ScatteringData& d, double z1, double z2, cplx z,
                     const AsymptoticsConfig& cfg = {}) {
    if (!(z2 >= z1)) throw std::invalid_argument("delta: need z1 <= z2");
    if (detail::dist_to_segment(z, z1, z2) < cfg.contour_clearance)
        throw contour_error("delta: z too close to the contour [z1, z2]");
    const detail::NuInterp nu(d);
    std::vector<double> breaks;
    if (z.real() > z1 && z.real() < z2) breaks.push_back(z.real());
    const cplx integral = integrate_with_breaks(
        [&](double s) { return nu(s) / (s - z); }, z1, z2, breaks, cfg.quad_tol);
    return std::exp(iu * integral);
}

enum class HalfLine { plus, minus };

struct HalfLineFactor {
    cplx value{1.0};
    double tail_bound = 0.0;  // bound on the dropped part of the exponent
};

/// nu(z_s) (plus: integral over (-inf, Re z_s]) or Lambda(z_s) (minus:
/// [Re z_s, +inf)), Cauchy-weighted half-line integrals of log(1+|r|^2).
/// The integral is truncated at the grid edge; the dropped tail is bounded by
/// fitting an exponential decay to the outer samples of |r|^2.
inline HalfLineFactor nu_at_pole(const ScatteringData& d, cplx z_s, HalfLine side,
                                 const AsymptoticsConfig& cfg = {}) {
    if (!(z_s.imag() > 0.0)) throw std::invalid_argument("nu_at_pole: Im z_s must be > 0");
    if (d.zgrid.size() < 4) throw insufficient_grid_error(1.0, "nu_at_pole: grid too small");
    const double a1 = z_s.real();
    const detail::NuInterp nu(d);
    // log(1 + |r|^2) = -2 pi nu
    const auto f = [&](double s) { return -2.0 * M_PI * nu(s) / (s - z_s); };

    const double zmin = d.zgrid.front(), zmax = d.zgrid.back();
    double lo, hi, edge;
    if (side == HalfLine::plus) {
        lo = zmin;
        hi = std::min(a1, zmax);
        edge = zmin;
    } else {
        lo = std::max(a1, zmin);
        hi = zmax;
        edge = zmax;
    }
    cplx integral(0.0);
    if (hi > lo) integral = integrate([&](double s) { return f(s); }, lo, hi, cfg.quad_tol);

    // Tail: |r(s)|^2 <= r_edge^2 e^{-2 mu |s - edge|} with mu fitted on the
    // outer quarter of the grid; log(1+a e^{-x}) <= e^{-x} log(1+a).
    double tail = 0.0;
    const double redge2 = std::norm(side == HalfLine::plus ? d.r.front() : d.r.back());
    if (redge2 > 0.0) {
        const std::size_t n = d.zgrid.size();
        const std::size_t m = std::max<std::size_t>(3, n / 4);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t used = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (side == HalfLine::plus) ? i : n - 1 - i;
            if (i >= m) break;
            const double a2 = std::norm(d.r[j]);
            if (a2 < 1e-280) continue;
            const double xx = std::abs(d.zgrid[j] - edge), yy = std::log(a2);
            sx += xx; sy += yy; sxx += xx * xx; sxy += xx * yy;
            ++used;
        }
        double mu = 0.0;
        if (used >= 3) {
            const double det = used * sxx - sx * sx;
            if (det > 0.0) {
                const double slope = (used * sxy - sx * sy) / det;  // d log|r|^2 / d|s-edge|
                mu = std::max(0.0, 0.5 * slope);
            }
        }
        const double dist = std::abs(cplx(edge, 0.0) - z_s);
        tail = (mu > 0.0) ? std::log1p(redge2) / (2.0 * mu * dist) / (2.0 * M_PI)
                          : std::numeric_limits<double>::infinity();
        if (!(tail <= cfg.tail_tol))
            throw insufficient_grid_error(
                tail, "nu_at_pole: half-line tail bound exceeds tolerance");
    }
    return {std::exp(integral / (2.0 * M_PI * iu)), tail};
}

namespace detail {

struct DeltaLocal {
    double nu = 0.0;
    cplx reg{1.0};  // unimodular regular part of delta at the stationary point
};

inline DeltaLocal delta_local(const NuInterp& nu, const CubicSpline& rsp, double z1, double z2,
                              int which, const AsymptoticsConfig& cfg) {
    const double zj = which == 1 ? z1 : z2;
    const double nj = -std::log1p(std::max(0.0, std::norm(rsp(zj)))) / (2.0 * M_PI);
    const auto integrand = [&](double s) {
        const double ds = s - zj;
        if (std::abs(ds) < 1e-14) return 0.0;
        return (nu(s) - nj) / ds;
    };
    const double chi = integrate_with_breaks(integrand, z1, z2, {zj}, cfg.quad_tol);
    const double span = std::max(z2 - z1, 1e-300);
    // delta(z) ~ reg * (z - z2)^{i nu} at z2, reg * (z - z1)^{-i nu} at z1
    // (modulus-one conventions; the mirrored model absorbs the branch shift).
    const double ang = which == 2 ? chi - nj * std::log(span) : chi + nj * std::log(span);
    return {nj, std::exp(iu * ang)};
}

}  // namespace detail

/// Leading-order radiation profile at (x, t) inside the oscillatory cone:
/// both stationary-point contributions of order t^{-1/2}, each the
/// parabolic-cylinder off-diagonal constant carrying the local delta and
/// theta phases.  The subleading dbar remainder is not computed.
inline cplx dispersive_leading_term(const ScatteringData& d, double x, double t,
                                    const AsymptoticsConfig& cfg = {}) {
    if (!d.bound_states.empty())
        throw unsupported_configuration_error("dispersive term: data has bound states");
    if (!(t >= cfg.t_min))
        throw cone_error("dispersive term: t below threshold");
    const auto sp = stationary_points(x, t, d.alpha, d.beta);
    const detail::NuInterp nu(d);
    const CubicSpline rsp(d.zgrid, d.r);

    const double w1 = 8.0 * t * std::abs(d.alpha + 6.0 * d.beta * sp.z1);
    const double w2 = 8.0 * t * (d.alpha + 6.0 * d.beta * sp.z2);
    const auto theta2t = [&](double zj) {
        return 2.0 * (zj * x + (2.0 * d.alpha * zj * zj + 4.0 * d.beta * zj * zj * zj) * t);
    };

    cplx out(0.0);
    if (w2 > 0.0) {
        const auto loc = detail::delta_local(nu, rsp, sp.z1, sp.z2, 2, cfg);
        const cplx r2 = rsp(sp.z2);
        const cplx attach = std::exp(iu * (theta2t(sp.z2) + loc.nu * std::log(w2)));
        const cplx r0 = r2 / (loc.reg * loc.reg) * attach;
        out += 2.0 * pc_constants(r0).beta12 / std::sqrt(w2);
    }
    if (w1 > 0.0) {
        const auto loc = detail::delta_local(nu, rsp, sp.z1, sp.z2, 1, cfg);
        const cplx r1 = rsp(sp.z1);
        const cplx attach = std::exp(iu * (theta2t(sp.z1) - loc.nu * std::log(w1)));
        const cplx big_r = r1 / (loc.reg * loc.reg) * attach;
        out += 2.0 * std::conj(pc_constants(-std::conj(big_r)).beta12) / std::sqrt(w1);
    }
    return out;
}

enum class TimeSign { plus, minus };

/// Phase-shifted asymptotic soliton: the closed form with the sech argument
/// shifted by log|nu(z_s)| (t -> +inf) or log|Lambda(z_s)| (t -> -inf).
inline cplx asymptotic_soliton(const SolitonParams& p, const ScatteringData& d, double x,
                               double t, TimeSign sign, const AsymptoticsConfig& cfg = {}) {
    if (d.bound_states.size() != 1)
        throw unsupported_configuration_error("asymptotic soliton: need exactly one bound state");
    const cplx z_s = d.bound_states.front().z;
    if (std::abs(z_s - cplx(p.xi, p.eta)) > 1e-6)
        throw unsupported_configuration_error(
            "asymptotic soliton: params do not match the bound state");
    const auto factor =
        nu_at_pole(d, z_s, sign == TimeSign::plus ? HalfLine::plus : HalfLine::minus, cfg);
    SolitonParams shifted = p;
    shifted.x_off += std::log(std::abs(factor.value)) / (2.0 * p.eta);
    return soliton_value(shifted, x, t);
}

}  // namespace hirota
