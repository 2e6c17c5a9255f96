#include <catch_amalgamated.hpp>

#include <fftw3.h>

#include <cmath>
#include <random>
#include <vector>

#include "hirota/soliton.hpp"

using namespace hirota;

namespace {

// Spectral-in-x / high-order-FD-in-t residual of the Hirota equation on the
// closed form; the independent oracle for soliton_value.
double pde_residual_sup(const SolitonParams& p, double t) {
    const std::size_t n = 2048;
    const double L = 40.0;
    const double dx = 2.0 * L / n;
    std::vector<cplx> q(n), qx(n), qxx(n), qxxx(n), qt(n);
    const double ht = 1e-3;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = -L + j * dx;
        q[j] = soliton_value(p, x, t);
        qt[j] = (-soliton_value(p, x, t + 2 * ht) + 8.0 * soliton_value(p, x, t + ht) -
                 8.0 * soliton_value(p, x, t - ht) + soliton_value(p, x, t - 2 * ht)) /
                (12.0 * ht);
    }
    std::vector<cplx> spec(q);
    auto* ptr = reinterpret_cast<fftw_complex*>(spec.data());
    fftw_plan fwd = fftw_plan_dft_1d(n, ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(fwd);
    auto deriv = [&](int order, std::vector<cplx>& out) {
        std::vector<cplx> tmp(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double m = (j <= n / 2) ? double(j) : double(j) - double(n);
            const cplx ik = iu * (M_PI / L) * m;
            cplx f = spec[j] / double(n);
            for (int o = 0; o < order; ++o) f *= ik;
            tmp[j] = f;
        }
        auto* tp = reinterpret_cast<fftw_complex*>(tmp.data());
        fftw_plan bwd = fftw_plan_dft_1d(n, tp, tp, FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_execute(bwd);
        fftw_destroy_plan(bwd);
        out = tmp;
    };
    deriv(1, qx);
    deriv(2, qxx);
    deriv(3, qxxx);
    fftw_destroy_plan(fwd);
    double worst = 0.0;
    for (std::size_t j = n / 8; j < 7 * n / 8; ++j) {
        const double a2 = std::norm(q[j]);
        const cplx res = iu * qt[j] + p.alpha * (2.0 * a2 * q[j] + qxx[j]) +
                         iu * p.beta * (qxxx[j] + 6.0 * a2 * qx[j]);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

// Continuous peak location by ternary search on |q| around a bracket.
double peak_location(const SolitonParams& p, double t, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (std::abs(soliton_value(p, m1, t)) < std::abs(soliton_value(p, m2, t)))
            lo = m1;
        else
            hi = m2;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("sech reduction at eta=1/2") {
    SolitonParams p;
    p.eta = 0.5;
    p.xi = 0.0;
    p.gamma = 0.0;
    p.alpha = 1.0;
    p.beta = 0.3;
    for (double x : {-3.0, -0.7, 0.0, 1.9}) {
        CHECK(std::abs(soliton_value(p, x, 0.0) - 1.0 / std::cosh(x)) < 1e-15);
    }
}

TEST_CASE("peak amplitude is 2 eta at all times") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
        SolitonParams p;
        p.eta = 0.4 + 0.5 * std::abs(u(rng));
        p.xi = 0.6 * u(rng);
        p.gamma = 2.0 * u(rng);
        p.alpha = 1.0 + 0.3 * u(rng);
        p.beta = 0.4 * u(rng);
        p.x_off = u(rng);
        for (double t : {0.0, 1.0, 5.0}) {
            const double xc = p.x_off + soliton_velocity(p) * t;
            const double xp = peak_location(p, t, xc - 2.0, xc + 2.0);
            CHECK(std::abs(std::abs(soliton_value(p, xp, t)) - 2.0 * p.eta) < 1e-10);
        }
    }
}

TEST_CASE("closed form satisfies the PDE to spectral accuracy") {
    // includes the beta = 0 (NLS) and alpha = 0 reductions
    for (double alpha : {0.0, 1.0, -0.5}) {
        for (double beta : {0.0, 0.25, -0.3}) {
            if (alpha == 0.0 && beta == 0.0) continue;
            SolitonParams p;
            p.eta = 0.55;
            p.xi = 0.3;
            p.gamma = 0.4;
            p.alpha = alpha;
            p.beta = beta;
            CHECK(pde_residual_sup(p, 0.7) < 1e-6);
        }
    }
}

TEST_CASE("velocity formula against peak tracking") {
    SECTION("xi = 0 gives v = 4 beta eta^2") {
        SolitonParams p;
        p.eta = 0.8;
        p.xi = 0.0;
        p.beta = 0.3;
        p.alpha = 0.7;
        CHECK(std::abs(soliton_velocity(p) - 4.0 * p.beta * p.eta * p.eta) < 1e-15);
    }
    SECTION("tracked peak moves at soliton_velocity") {
        SolitonParams cases[2];
        cases[0] = {0.5, 0.25, 0.0, 1.0, 0.2, 0.0};
        cases[1] = {1.0, 1.0, 0.0, 0.0, 0.25, 0.0};  // v = -(3 - 1) = -2
        CHECK(std::abs(soliton_velocity(cases[1]) + 2.0) < 1e-15);
        for (const auto& p : cases) {
            const double v = soliton_velocity(p);
            const double t1 = 10.0;
            const double x0 = peak_location(p, 0.0, p.x_off - 2.0, p.x_off + 2.0);
            const double x1 = peak_location(p, t1, p.x_off + v * t1 - 2.0, p.x_off + v * t1 + 2.0);
            CHECK(std::abs((x1 - x0) / t1 - v) < 1e-8);
        }
    }
}

TEST_CASE("L2 norm of the soliton is 4 eta at any time") {
    SolitonParams p;
    p.eta = 0.7;
    p.xi = -0.2;
    p.alpha = 1.0;
    p.beta = 0.15;
    for (double t : {0.0, 2.0}) {
        // direct quadrature on a wide fine grid
        const double v = soliton_velocity(p) * t;
        double sum = 0.0;
        const double dx = 0.002;
        for (double x = v - 60.0; x <= v + 60.0; x += dx)
            sum += std::norm(soliton_value(p, x, t)) * dx;
        CHECK(std::abs(sum - 4.0 * p.eta) < 1e-8);
    }
}

TEST_CASE("|q| is even about its peak") {
    SolitonParams p;
    p.eta = 0.6;
    p.xi = 0.35;
    p.alpha = 1.0;
    p.beta = 0.2;
    p.x_off = 0.3;
    const double t = 1.2;
    const double xp = p.x_off + soliton_velocity(p) * t;  // exact for the closed form
    for (double d : {0.3, 1.1, 2.7}) {
        CHECK(std::abs(std::abs(soliton_value(p, xp + d, t)) -
                       std::abs(soliton_value(p, xp - d, t))) < 1e-9);
    }
}

TEST_CASE("bound-state dictionary round trip") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        SolitonParams p;
        p.eta = 0.3 + 0.7 * std::abs(u(rng));
        p.xi = 0.8 * u(rng);
        p.gamma = 3.0 * u(rng);
        p.alpha = 1.0;
        p.beta = 0.25 * u(rng);
        p.x_off = 1.5 * u(rng);
        p = p.normalized();
        const auto d = soliton_bound_state(p);
        const auto back = soliton_from_bound_state(d, p.alpha, p.beta);
        CHECK(std::abs(back.eta - p.eta) < 1e-12);
        CHECK(std::abs(back.xi - p.xi) < 1e-12);
        CHECK(std::abs(wrap_angle(back.gamma - p.gamma)) < 1e-10);
        CHECK(std::abs(back.x_off - p.x_off) < 1e-10);
    }
}
