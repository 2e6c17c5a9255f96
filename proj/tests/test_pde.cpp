#include <catch_amalgamated.hpp>

#include <cmath>

#include "hirota/pde.hpp"
#include "hirota/soliton.hpp"

using namespace hirota;

namespace {

EvolutionConfig small_cfg(double alpha, double beta) {
    EvolutionConfig cfg;
    cfg.L = 40.0;
    cfg.n_modes = 2048;
    cfg.dt = 1e-3;
    cfg.alpha = alpha;
    cfg.beta = beta;
    return cfg;
}

double sup_diff_vs_soliton(const Potential& q, const SolitonParams& p, double t) {
    double worst = 0.0;
    for (std::size_t j = 0; j < q.n(); ++j)
        worst = std::max(worst, std::abs(q.samples[j] - soliton_value(p, q.x_at(j), t)));
    return worst;
}

}  // namespace

TEST_CASE("linear multiplier basics") {
    CHECK(std::abs(linear_multiplier(0.0, 0.7, 1.0, 0.3) - 1.0) < 1e-15);
    CHECK(std::abs(linear_multiplier(1.0, M_PI, 1.0, 0.0) - cplx(-1.0, 0.0)) < 1e-13);
    for (double k : {0.3, 2.0, -5.7})
        CHECK(std::abs(std::abs(linear_multiplier(k, 0.13, 1.0, 0.2)) - 1.0) < 1e-15);
}

TEST_CASE("zero data stays zero") {
    auto cfg = small_cfg(1.0, 0.2);
    Potential q0 = sample_on_pde_grid(cfg, [](double) { return cplx(0.0); });
    const auto q1 = step(q0, cfg);
    CHECK(q1.max_abs() == 0.0);
}

TEST_CASE("tiny plane wave follows the linear multiplier") {
    auto cfg = small_cfg(1.0, 0.2);
    const double k = 2.0 * M_PI * 13.0 / (2.0 * cfg.L);  // a grid mode
    const double eps = 1e-8;
    Potential q0 = sample_on_pde_grid(cfg, [&](double x) { return eps * std::exp(iu * k * x); });
    cfg.boundary_tol = 2.0;  // plane wave does not decay; skip the tail check
    SplitStepper s(q0, cfg);
    const int nsteps = 50;
    for (int i = 0; i < nsteps; ++i) s.step(cfg.dt);
    const cplx factor = linear_multiplier(k, nsteps * cfg.dt, cfg.alpha, cfg.beta);
    const auto q1 = s.state();
    double worst = 0.0;
    for (std::size_t j = 0; j < q1.n(); ++j)
        worst = std::max(worst, std::abs(q1.samples[j] - factor * q0.samples[j]));
    CHECK(worst < 1e-12 * eps / 1e-8);
}

TEST_CASE("one step against the closed-form soliton") {
    SolitonParams gentle{0.3, 0.0, 0.3, 1.0, 0.1, 0.0};
    auto cfg = small_cfg(gentle.alpha, gentle.beta);
    Potential q0 =
        sample_on_pde_grid(cfg, [&](double x) { return soliton_value(gentle, x, 0.0); });
    CHECK(sup_diff_vs_soliton(step(q0, cfg), gentle, cfg.dt) < 1e-9);

    // steeper carrier soliton: larger splitting constant, still third order locally
    SolitonParams p{0.5, 0.25, 0.3, 1.0, 0.2, 0.0};
    cfg = small_cfg(p.alpha, p.beta);
    q0 = sample_on_pde_grid(cfg, [&](double x) { return soliton_value(p, x, 0.0); });
    CHECK(sup_diff_vs_soliton(step(q0, cfg), p, cfg.dt) < 5e-8);
}

TEST_CASE("splitting is second order in dt") {
    SolitonParams p{0.5, 0.25, 0.0, 1.0, 0.2, 0.0};
    auto cfg = small_cfg(p.alpha, p.beta);
    Potential q0 = sample_on_pde_grid(cfg, [&](double x) { return soliton_value(p, x, 0.0); });
    const double T = 0.2;
    auto err_at = [&](double dt) {
        EvolutionConfig c = cfg;
        c.dt = dt;
        SplitStepper s(q0, c);
        s.advance_to(T);
        return sup_diff_vs_soliton(s.state(), p, T);
    };
    const double e1 = err_at(4e-3);
    const double e2 = err_at(2e-3);
    CHECK(e1 / e2 > 3.2);
    CHECK(e1 / e2 < 4.8);
}

TEST_CASE("soliton propagation over t = 2") {
    SolitonParams p{0.5, 0.25, 0.0, 1.0, 0.2, 0.0};
    auto cfg = small_cfg(p.alpha, p.beta);
    cfg.dt = 2e-3;
    cfg.t_max = 2.0;
    cfg.snapshot_times = {1.0, 2.0};
    cfg.order = 4;
    Potential q0 = sample_on_pde_grid(cfg, [&](double x) { return soliton_value(p, x, 0.0); });
    const auto res = run(q0, cfg);
    CHECK(res.snapshots.size() == 2);
    CHECK(sup_diff_vs_soliton(res.snapshots[0].q, p, 1.0) < 1e-7);
    CHECK(sup_diff_vs_soliton(res.snapshots[1].q, p, 2.0) < 1e-7);
    CHECK(res.max_rel_mass_drift < 1e-10);
    CHECK(res.max_rel_momentum_drift < 1e-6);
}

TEST_CASE("time reversal returns the initial data") {
    SolitonParams p{0.5, 0.1, 0.0, 1.0, 0.2, 0.0};
    auto cfg = small_cfg(p.alpha, p.beta);
    Potential q0 = sample_on_pde_grid(cfg, [&](double x) {
        return soliton_value(p, x, 0.0) + 0.05 / std::cosh(0.7 * x);
    });
    SplitStepper s(q0, cfg);
    s.advance_to(1.0);
    s.advance_to(0.0);
    const auto qb = s.state();
    double worst = 0.0;
    for (std::size_t j = 0; j < q0.n(); ++j)
        worst = std::max(worst, std::abs(qb.samples[j] - q0.samples[j]));
    CHECK(worst < 1e-7);
}

TEST_CASE("mass conservation for 0.3 sech x") {
    auto cfg = small_cfg(1.0, 0.2);
    cfg.dt = 2e-3;
    cfg.t_max = 2.0;
    Potential q0 = sample_on_pde_grid(cfg, [](double x) { return 0.3 / std::cosh(x); });
    const auto res = run(q0, cfg);
    CHECK(res.max_rel_mass_drift < 1e-10);
}

TEST_CASE("config validation and CFL guard") {
    EvolutionConfig cfg;
    cfg.n_modes = 100;  // not a power of two
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    auto ok = small_cfg(1.0, 0.0);
    Potential q0 = sample_on_pde_grid(ok, [](double x) { return 3.0 / std::cosh(x); });
    ok.dt = 1.0;  // far beyond dx / max|q|^2
    CHECK_THROWS_AS(step(q0, ok), std::invalid_argument);
}
