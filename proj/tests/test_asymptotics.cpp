#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hirota/asymptotics.hpp"
#include "hirota/quadrature.hpp"

using namespace hirota;

namespace {

ScatteringData gaussian_data(double amp = 0.4, double center = 0.0, double width = 1.0,
                             double slope = 0.3) {
    ScatteringData d;
    d.alpha = 1.0;
    d.beta = 0.2;
    for (int i = 0; i <= 640; ++i) {
        const double z = -8.0 + i * 0.025;
        d.zgrid.push_back(z);
        const double u = (z - center) / width;
        d.r.push_back(amp * std::exp(-u * u) * std::exp(iu * slope * z));
    }
    return d;
}

ScatteringData zero_data() {
    ScatteringData d;
    d.alpha = 1.0;
    d.beta = 0.2;
    for (int i = 0; i <= 64; ++i) {
        d.zgrid.push_back(-4.0 + i * 0.125);
        d.r.push_back(cplx(0.0));
    }
    return d;
}

}  // namespace

TEST_CASE("stationary points") {
    SECTION("alpha=1, beta=1/3, x/t=0 gives (-1, 0)") {
        const auto sp = stationary_points(0.0, 2.0, 1.0, 1.0 / 3.0);
        CHECK(std::abs(sp.z1 + 1.0) < 1e-14);
        CHECK(std::abs(sp.z2) < 1e-14);
    }
    SECTION("double root at the cone edge") {
        const double alpha = 1.0, beta = 0.25;
        const double ray = alpha * alpha / (3.0 * beta);
        const auto sp = stationary_points(ray * 3.0, 3.0, alpha, beta);
        CHECK(std::abs(sp.z1 - sp.z2) < 1e-7);
        CHECK(std::abs(sp.z1 + alpha / (6.0 * beta)) < 1e-7);
    }
    SECTION("theta' residual vanishes at the roots") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> u(0.1, 1.0);
        for (int trial = 0; trial < 30; ++trial) {
            const double alpha = u(rng), beta = 0.5 * u(rng), t = 1.0 + 10.0 * u(rng);
            const double ray_max = alpha * alpha / (3.0 * beta);
            const double x = (ray_max - 2.0 * u(rng)) * t;
            const auto sp = stationary_points(x, t, alpha, beta);
            for (double z : {sp.z1, sp.z2})
                CHECK(std::abs(x / t + 4.0 * alpha * z + 12.0 * beta * z * z) < 1e-12);
        }
    }
    SECTION("error paths") {
        CHECK_THROWS_AS(stationary_points(10.0, 1.0, 1.0, 0.25), cone_error);
        CHECK_THROWS_AS(stationary_points(0.0, 1.0, 1.0, 0.0), cone_error);
        CHECK_THROWS_AS(stationary_points(1.0, 0.0, 1.0, 0.25), cone_error);
    }
}

TEST_CASE("nu_of") {
    CHECK(nu_of(cplx(0.0)) == 0.0);
    CHECK(std::abs(nu_of(cplx(1.0, 0.0)) + std::log(2.0) / (2.0 * M_PI)) < 1e-15);
    CHECK(nu_of(cplx(0.5, 0.0)) > nu_of(cplx(0.9, 0.0)));  // |r| up -> nu down
}

TEST_CASE("delta function") {
    const auto d = gaussian_data();
    const double z1 = -1.4, z2 = 0.6;

    SECTION("zero reflection gives delta = 1") {
        const auto z0 = zero_data();
        CHECK(std::abs(delta_fn(z0, z1, z2, cplx(0.3, 0.7)) - 1.0) < 1e-13);
    }
    SECTION("delta(z) delta*(z*) = 1") {
        for (cplx z : {cplx(0.1, 0.8), cplx(-2.2, 0.4), cplx(1.4, -0.6)}) {
            const cplx a = delta_fn(d, z1, z2, z);
            const cplx b = delta_fn(d, z1, z2, std::conj(z));
            CHECK(std::abs(a * std::conj(b) - 1.0) < 1e-10);
        }
    }
    SECTION("modulus bounds <rho>^{-1} <= |delta| <= <rho>") {
        const double rho = d.sup_abs_r();
        const double bound = std::sqrt(1.0 + rho * rho);
        for (cplx z : {cplx(0.0, 0.5), cplx(-1.0, 1.5), cplx(0.6, -0.2), cplx(2.0, 0.05)}) {
            const double a = std::abs(delta_fn(d, z1, z2, z));
            CHECK(a <= bound + 1e-12);
            CHECK(a >= 1.0 / bound - 1e-12);
        }
    }
    SECTION("agrees with a dense direct quadrature") {
        const cplx z(0.2, 0.35);
        // straightforward trapezoid with a fine step as the independent route
        const int n = 400000;
        cplx acc(0.0);
        for (int i = 0; i <= n; ++i) {
            const double s = z1 + (z2 - z1) * i / double(n);
            double a2 = 0.0;
            // piecewise-linear |r|^2 lookup
            const auto& zg = d.zgrid;
            if (s >= zg.front() && s <= zg.back()) {
                const auto it = std::upper_bound(zg.begin(), zg.end(), s);
                const std::size_t hi = std::min<std::size_t>(it - zg.begin(), zg.size() - 1);
                const std::size_t lo = hi - 1;
                const double w = (s - zg[lo]) / (zg[hi] - zg[lo]);
                a2 = (1.0 - w) * std::norm(d.r[lo]) + w * std::norm(d.r[hi]);
            }
            const double nu = -std::log1p(a2) / (2.0 * M_PI);
            const double trap = (i == 0 || i == n) ? 0.5 : 1.0;
            acc += trap * nu / (s - z);
        }
        acc *= (z2 - z1) / double(n);
        const cplx direct = std::exp(iu * acc);
        // the linear-interpolation oracle is itself O(dz^2) ~ 1e-5 accurate
        CHECK(std::abs(delta_fn(d, z1, z2, z) - direct) < 2e-5);
    }
    SECTION("too close to the contour") {
        CHECK_THROWS_AS(delta_fn(d, z1, z2, cplx(0.0, 1e-9)), contour_error);
    }
}

TEST_CASE("half-line factors nu(z_s) and Lambda(z_s)") {
    SECTION("zero reflection gives 1") {
        const auto z0 = zero_data();
        const auto f = nu_at_pole(z0, cplx(0.2, 0.6), HalfLine::plus);
        CHECK(std::abs(f.value - 1.0) < 1e-14);
        CHECK(f.tail_bound == 0.0);
    }
    SECTION("log nu scales quadratically with the reflection size") {
        auto d1 = gaussian_data(0.2);
        auto d2 = gaussian_data(0.1);
        const cplx z_s(0.3, 0.5);
        const double l1 = std::log(std::abs(nu_at_pole(d1, z_s, HalfLine::plus).value));
        const double l2 = std::log(std::abs(nu_at_pole(d2, z_s, HalfLine::plus).value));
        CHECK(std::abs(l1 / l2 - 4.0) < 0.1);
    }
    SECTION("plus and minus differ for an asymmetric r") {
        const auto d = gaussian_data(0.4, 1.0);
        const cplx z_s(0.0, 0.5);
        const double nu = std::abs(nu_at_pole(d, z_s, HalfLine::plus).value);
        const double la = std::abs(nu_at_pole(d, z_s, HalfLine::minus).value);
        CHECK(std::abs(nu - la) > 1e-3);
        CHECK(nu > 1.0);  // positive half-line weight
        CHECK(la > 1.0);
    }
    SECTION("two quadrature resolutions agree") {
        const auto d = gaussian_data();
        AsymptoticsConfig c1, c2;
        c1.quad_tol = 1e-9;
        c2.quad_tol = 1e-13;
        const cplx z_s(0.1, 0.4);
        const cplx a = nu_at_pole(d, z_s, HalfLine::plus, c1).value;
        const cplx b = nu_at_pole(d, z_s, HalfLine::plus, c2).value;
        CHECK(std::abs(a - b) < 1e-8);
    }
}

TEST_CASE("parabolic cylinder constants") {
    SECTION("vanishing r0") {
        const auto pc = pc_constants(cplx(0.0));
        CHECK(pc.kappa == 0.0);
        CHECK(std::abs(pc.beta12) == 0.0);
        CHECK(std::abs(pc.beta21) == 0.0);
    }
    SECTION("product identity at a fixed point") {
        const auto pc = pc_constants(cplx(0.3, 0.1));
        CHECK(std::abs(pc.beta12 * pc.beta21 - pc.kappa) < 1e-10);
    }
    SECTION("|beta12|^2 against the Gamma reflection oracle") {
        for (cplx r0 : {cplx(0.5, 0.0), cplx(0.2, -0.6), cplx(1.5, 0.9)}) {
            const auto pc = pc_constants(r0);
            const double absk = std::abs(pc.kappa);
            // |Gamma(-i kappa)|^2 = pi / (|kappa| sinh(pi |kappa|))
            const double gam2 = M_PI / (absk * std::sinh(M_PI * absk));
            const double oracle =
                2.0 * M_PI * std::exp(-M_PI * pc.kappa) / (std::norm(r0) * gam2);
            CHECK(std::abs(std::norm(pc.beta12) - oracle) < 1e-10);
            CHECK(std::abs(std::norm(pc.beta12) - absk) < 1e-10);
        }
    }
    SECTION("product identity for 100 random r0 with |r0| <= 2") {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            cplx r0(2.0 * u(rng), 2.0 * u(rng));
            if (std::abs(r0) > 2.0) r0 *= 2.0 / std::abs(r0);
            if (std::abs(r0) < 1e-3) r0 += 0.1;
            const auto pc = pc_constants(r0);
            CHECK(std::abs(pc.beta12 * pc.beta21 - pc.kappa) < 1e-10);
        }
    }
}

TEST_CASE("dispersive leading term") {
    SECTION("zero reflection gives zero") {
        const auto z0 = zero_data();
        CHECK(std::abs(dispersive_leading_term(z0, -10.0, 30.0)) == 0.0);
    }
    SECTION("per-stationary-point amplitude scales exactly as 1/sqrt(t)") {
        // data supported near z2 only: the z1 term vanishes and the modulus
        // of the prediction times sqrt(t) is t-independent by construction
        const auto sp = stationary_points(-10.0, 30.0, 1.0, 0.2);
        const auto d = gaussian_data(0.4, sp.z2, 0.35);
        REQUIRE(std::abs(d.r[0]) < 1e-30);
        const double ray = -10.0 / 30.0;
        const double a1 = std::abs(dispersive_leading_term(d, ray * 30.0, 30.0)) * std::sqrt(30.0);
        const double a2 =
            std::abs(dispersive_leading_term(d, ray * 120.0, 120.0)) * std::sqrt(120.0);
        CHECK(std::abs(a1 - a2) < 1e-12 * std::max(a1, 1.0));
        CHECK(a1 > 0.0);
    }
    SECTION("amplitude equals 2 sqrt(|nu|) / sqrt(8 t (alpha + 6 beta z2)) per point") {
        const auto sp = stationary_points(-10.0, 50.0, 1.0, 0.2);
        const auto d = gaussian_data(0.4, sp.z2, 0.35);
        const double t = 50.0;
        // r vanishes at z1, so only the z2 term contributes
        double rz2 = 0.0;
        {
            CubicSpline rs(d.zgrid, d.r);
            rz2 = std::abs(rs(sp.z2));
        }
        const double nu2 = std::log1p(rz2 * rz2) / (2.0 * M_PI);
        const double expect = 2.0 * std::sqrt(nu2) / std::sqrt(8.0 * t * (1.0 + 1.2 * sp.z2));
        CHECK(std::abs(std::abs(dispersive_leading_term(d, -10.0, t)) - expect) < 1e-12);
    }
    SECTION("cone and bound-state guards") {
        auto d = gaussian_data();
        CHECK_THROWS_AS(dispersive_leading_term(d, 100.0, 10.0), cone_error);
        d.bound_states.push_back({cplx(0.0, 0.5), cplx(1.0)});
        CHECK_THROWS_AS(dispersive_leading_term(d, -10.0, 30.0),
                        unsupported_configuration_error);
    }
}

TEST_CASE("asymptotic soliton") {
    SolitonParams p{0.5, 0.25, 0.4, 1.0, 0.2, 0.3};
    SECTION("reduces to the closed form when r = 0") {
        auto d = zero_data();
        d.bound_states.push_back({cplx(0.25, 0.5), cplx(1.0, 0.0)});
        for (double x : {-2.0, 0.0, 1.5})
            CHECK(std::abs(asymptotic_soliton(p, d, x, 3.0, TimeSign::plus) -
                           soliton_value(p, x, 3.0)) < 1e-13);
    }
    SECTION("spatial shift is log|nu|/(2 eta) read off the sech argument") {
        auto d = gaussian_data();
        d.bound_states.push_back({cplx(0.25, 0.5), cplx(1.0, 0.0)});
        const double shift =
            std::log(std::abs(nu_at_pole(d, cplx(0.25, 0.5), HalfLine::plus).value)) /
            (2.0 * p.eta);
        SolitonParams shifted = p;
        shifted.x_off += shift;
        for (double x : {-1.0, 0.7})
            CHECK(std::abs(asymptotic_soliton(p, d, x, 2.0, TimeSign::plus) -
                           soliton_value(shifted, x, 2.0)) < 1e-12);
    }
    SECTION("plus and minus shifts differ generically") {
        auto d = gaussian_data(0.4, 1.0);
        d.bound_states.push_back({cplx(0.25, 0.5), cplx(1.0, 0.0)});
        const cplx a = asymptotic_soliton(p, d, 0.9, 2.0, TimeSign::plus);
        const cplx b = asymptotic_soliton(p, d, 0.9, 2.0, TimeSign::minus);
        CHECK(std::abs(a - b) > 1e-6);
    }
    SECTION("configuration guards") {
        auto d = zero_data();
        CHECK_THROWS_AS(asymptotic_soliton(p, d, 0.0, 1.0, TimeSign::plus),
                        unsupported_configuration_error);
        d.bound_states.push_back({cplx(0.7, 0.9), cplx(1.0, 0.0)});
        CHECK_THROWS_AS(asymptotic_soliton(p, d, 0.0, 1.0, TimeSign::plus),
                        unsupported_configuration_error);
    }
}
