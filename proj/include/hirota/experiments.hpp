#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hirota/asymptotics.hpp"
#include "hirota/darboux.hpp"
#include "hirota/fit.hpp"
#include "hirota/interp.hpp"
#include "hirota/pde.hpp"
#include "hirota/scattering.hpp"
#include "hirota/soliton.hpp"
#include "hirota/types.hpp"

namespace hirota {

/// Discrete H^1 cap L^{2,s} norm (max of the two pieces), the epsilon of the
/// stability statement.  Derivatives by centered differences.
inline double h1_l2s_norm(const Potential& q, double s = 1.0) {
    const std::size_t n = q.n();
    if (n < 3) return 0.0;
    double h1 = 0.0, l2s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double a2 = std::norm(q.samples[j]);
        double d2 = 0.0;
        if (j > 0 && j + 1 < n)
            d2 = std::norm((q.samples[j + 1] - q.samples[j - 1]) / (2.0 * q.dx));
        h1 += (a2 + d2) * q.dx;
        const double x = q.x_at(j);
        l2s += std::pow(1.0 + x * x, s) * a2 * q.dx;
    }
    return std::max(std::sqrt(h1), std::sqrt(l2s));
}

// ---------------------------------------------------------------------------
// Perturbations
// ---------------------------------------------------------------------------

enum class PerturbationShape { sech_bump, gauss_bump, random_lowpass };

struct PerturbationSpec {
    PerturbationShape shape = PerturbationShape::sech_bump;
    double epsilon = 0.05;    // target H^1 cap L^{2,s} size
    double width = 2.0;
    double center = 0.0;
    double carrier = 0.3;     // e^{i carrier x} modulation
    std::uint64_t seed = 12345;
    double s_weight = 1.0;    // s of the weighted norm
};

inline Potential build_perturbation(const PerturbationSpec& spec, double x0, double dx,
                                    std::size_t n) {
    Potential p{x0, dx, std::vector<cplx>(n, cplx(0.0))};
    std::mt19937_64 rng(spec.seed);
    switch (spec.shape) {
        case PerturbationShape::sech_bump:
            for (std::size_t j = 0; j < n; ++j) {
                const double x = p.x_at(j);
                p.samples[j] = std::exp(iu * spec.carrier * x) /
                               std::cosh((x - spec.center) / spec.width);
            }
            break;
        case PerturbationShape::gauss_bump:
            for (std::size_t j = 0; j < n; ++j) {
                const double x = p.x_at(j);
                const double u = (x - spec.center) / spec.width;
                p.samples[j] = std::exp(iu * spec.carrier * x) * std::exp(-u * u);
            }
            break;
        case PerturbationShape::random_lowpass: {
            // sum of a few random smooth bumps; the seed pins the report
            std::uniform_real_distribution<double> uc(-1.0, 1.0);
            const int modes = 5;
            std::vector<double> amp(modes), pos(modes), ph(modes), kk(modes);
            for (int m = 0; m < modes; ++m) {
                amp[m] = uc(rng);
                pos[m] = spec.center + 3.0 * spec.width * uc(rng);
                ph[m] = M_PI * uc(rng);
                kk[m] = spec.carrier * (1.0 + 0.5 * uc(rng));
            }
            for (std::size_t j = 0; j < n; ++j) {
                const double x = p.x_at(j);
                cplx v(0.0);
                for (int m = 0; m < modes; ++m) {
                    const double u = (x - pos[m]) / spec.width;
                    v += amp[m] * std::exp(-u * u) * std::exp(iu * (kk[m] * x + ph[m]));
                }
                p.samples[j] = v;
            }
            break;
        }
    }
    const double nrm = h1_l2s_norm(p, spec.s_weight);
    if (nrm > 0.0)
        for (auto& v : p.samples) v *= spec.epsilon / nrm;
    return p;
}

// ---------------------------------------------------------------------------
// Shared fitting helpers
// ---------------------------------------------------------------------------

namespace detail {

/// Least-squares slope of log|y| vs log|t| restricted to |t| >= t_min.
inline double loglog_slope(const std::vector<double>& t, const std::vector<double>& y,
                           double t_min) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (std::abs(t[i]) < t_min || y[i] <= 0.0) continue;
        const double lx = std::log(std::abs(t[i])), ly = std::log(y[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw numerical_error("slope fit: fewer than two usable samples");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// (A) Dispersive decay for pure radiation
// ---------------------------------------------------------------------------

struct RadiationConfig {
    EvolutionConfig evo;
    std::vector<double> sample_times;       // defaults to geometric [20, 200]
    std::vector<double> rays;               // x/t rays for the pointwise check
    double slope_lo = -0.65, slope_hi = -0.35;
    double band_frac = 0.20;                // sup * sqrt(t) stability band
    double ray_rel_tol = 0.35;              // empirical pointwise tolerance
    double t_min_fit = 20.0;
    std::vector<double> zgrid;              // for the reflection coefficient
    JostConfig jost;
    BoundStateConfig bs_cfg;
    SearchBox bs_box;

    void fill_defaults() {
        if (sample_times.empty())
            for (int k = 0; k <= 8; ++k)
                sample_times.push_back(20.0 * std::pow(10.0, k / 8.0));
        if (zgrid.empty())
            for (int i = 0; i <= 800; ++i) zgrid.push_back(-8.0 + i * 0.02);
        if (rays.empty()) rays = {-2.0, -1.0, 0.0, 1.0};
    }
};

struct RadiationRow {
    double t = 0.0, sup = 0.0, sup_sqrt_t = 0.0;
};

struct RayRow {
    double t = 0.0, ray = 0.0, meas_abs = 0.0, pred_abs = 0.0, rel_err = 0.0;
};

struct RadiationReport {
    std::vector<RadiationRow> rows;
    std::vector<RayRow> ray_rows;
    double slope = 0.0;
    double band_dev = 0.0;     // max relative deviation of sup*sqrt(t) from its mean
    double final_ray_err = 0.0;
    bool pass_slope = false, pass_band = false, pass_rays = false, pass = false;
};

inline RadiationReport run_radiation_experiment(const Potential& q0, RadiationConfig cfg) {
    cfg.fill_defaults();
    const auto states = find_bound_states(q0, cfg.bs_box, cfg.bs_cfg);
    if (!states.empty())
        throw unsupported_configuration_error(
            "radiation experiment: initial data has bound states; run the stability "
            "experiment instead");
    ScatteringData d = reflection_coefficient(q0, cfg.zgrid, cfg.evo.alpha, cfg.evo.beta,
                                              cfg.jost);

    EvolutionConfig evo = cfg.evo;
    evo.snapshot_times = cfg.sample_times;
    evo.t_max = cfg.sample_times.back();
    const auto result = run(q0, evo);

    RadiationReport rep;
    std::vector<double> ts, sups;
    for (const auto& snap : result.snapshots) {
        const double sup = snap.q.sup_norm();
        rep.rows.push_back({snap.t, sup, sup * std::sqrt(snap.t)});
        ts.push_back(snap.t);
        sups.push_back(sup);
    }
    rep.slope = detail::loglog_slope(ts, sups, cfg.t_min_fit);

    double mean = 0.0;
    int nb = 0;
    for (const auto& r : rep.rows)
        if (r.t >= cfg.t_min_fit) {
            mean += r.sup_sqrt_t;
            ++nb;
        }
    mean /= std::max(nb, 1);
    for (const auto& r : rep.rows)
        if (r.t >= cfg.t_min_fit)
            rep.band_dev = std::max(rep.band_dev, std::abs(r.sup_sqrt_t - mean) / mean);

    // pointwise dispersive prediction along rays, every sampled time
    for (const auto& snap : result.snapshots) {
        if (snap.t < cfg.t_min_fit) continue;
        CubicSpline qs = CubicSpline::uniform(snap.q.x0, snap.q.dx, snap.q.samples);
        for (double ray : cfg.rays) {
            const double x = ray * snap.t;
            if (x < snap.q.x0 + 1.0 || x > snap.q.x_end() - 1.0) continue;
            double pred = 0.0;
            try {
                pred = std::abs(dispersive_leading_term(d, x, snap.t));
            } catch (const cone_error&) {
                continue;
            }
            const double meas = std::abs(qs(x));
            const double rel = std::abs(pred - meas) / std::max(meas, 1e-12);
            rep.ray_rows.push_back({snap.t, ray, meas, pred, rel});
        }
    }
    for (const auto& rr : rep.ray_rows)
        if (rr.t == rep.ray_rows.back().t) rep.final_ray_err = std::max(rep.final_ray_err, rr.rel_err);

    rep.pass_slope = rep.slope >= cfg.slope_lo && rep.slope <= cfg.slope_hi;
    rep.pass_band = rep.band_dev <= cfg.band_frac;
    rep.pass_rays = rep.final_ray_err <= cfg.ray_rel_tol;
    rep.pass = rep.pass_slope && rep.pass_band && rep.pass_rays;
    return rep;
}

// ---------------------------------------------------------------------------
// (B) Asymptotic stability of the one-soliton
// ---------------------------------------------------------------------------

struct StabilityConfig {
    EvolutionConfig evo;
    std::vector<double> fit_times;     // |t| values, increasing
    double t_min_fit = 20.0;
    double slope_lo = -0.65, slope_hi = -0.35;
    double drift_C = 10.0;             // pass iff param_drift <= drift_C * epsilon
    double shift_rel_tol = 0.25;
    int shift_avg_count = 4;           // trailing fits averaged for the shift
    TimeSign time_sign = TimeSign::plus;
    std::vector<double> zgrid;
    JostConfig jost;
    BoundStateConfig bs_cfg;
    SearchBox bs_box;
    FitConfig fit;
    AsymptoticsConfig asym;

    void fill_defaults() {
        if (fit_times.empty())
            for (double t = 20.0; t <= 150.0 + 1e-9; t += 10.0) fit_times.push_back(t);
        if (zgrid.empty())
            for (int i = 0; i <= 800; ++i) zgrid.push_back(-8.0 + i * 0.02);
    }
};

struct StabilityRow {
    double t = 0.0;
    SolitonParams params;
    double residual_sup = 0.0;
};

struct StabilityReport {
    double epsilon = 0.0;
    std::vector<StabilityRow> fitted;
    double decay_exponent = 0.0;
    double param_drift = 0.0;
    cplx z_s{0.0};
    cplx c1{0.0};
    double shift_measured = 0.0;
    double shift_predicted = 0.0;  // log|nu or Lambda(z_s)| / (2 eta)
    double shift_rel_err = 0.0;
    bool pass_decay = false, pass_drift = false, pass_shift = false, pass = false;
};

inline StabilityReport run_stability_experiment(const SolitonParams& p0,
                                                const PerturbationSpec& pert,
                                                StabilityConfig cfg) {
    cfg.fill_defaults();
    p0.validate();
    const double sgn = cfg.time_sign == TimeSign::plus ? 1.0 : -1.0;

    Potential q0 = sample_on_pde_grid(cfg.evo, [&](double x) { return soliton_value(p0, x, 0.0); });
    const Potential bump = build_perturbation(pert, q0.x0, q0.dx, q0.n());
    for (std::size_t j = 0; j < q0.n(); ++j) q0.samples[j] += bump.samples[j];

    StabilityReport rep;
    rep.epsilon = h1_l2s_norm(bump, pert.s_weight);

    // scattering data of the perturbed initial state
    const auto states = find_bound_states(q0, cfg.bs_box, cfg.bs_cfg);
    if (states.size() != 1)
        throw unsupported_configuration_error(
            "stability experiment: expected exactly one bound state, found " +
            std::to_string(states.size()));
    ScatteringData d = reflection_coefficient(q0, cfg.zgrid, cfg.evo.alpha, cfg.evo.beta,
                                              cfg.jost);
    d.bound_states = states;
    rep.z_s = states[0].z;
    rep.c1 = states[0].c;

    const SolitonParams bare =
        soliton_from_bound_state({rep.z_s, rep.c1}, cfg.evo.alpha, cfg.evo.beta);
    const auto halfline = cfg.time_sign == TimeSign::plus ? HalfLine::plus : HalfLine::minus;
    rep.shift_predicted =
        std::log(std::abs(nu_at_pole(d, rep.z_s, halfline, cfg.asym).value)) /
        (2.0 * rep.z_s.imag());

    EvolutionConfig evo = cfg.evo;
    evo.snapshot_times.clear();
    for (double t : cfg.fit_times) evo.snapshot_times.push_back(sgn * t);
    evo.t_max = sgn * cfg.fit_times.back();
    const auto result = run(q0, evo);

    SolitonParams guess = p0;
    std::vector<double> ts, res;
    for (const auto& snap : result.snapshots) {
        const auto fr = fit_soliton(snap.q, snap.t, cfg.evo.alpha, cfg.evo.beta, &guess, cfg.fit);
        guess = fr.params;
        rep.fitted.push_back({snap.t, fr.params, fr.residual_sup});
        ts.push_back(snap.t);
        res.push_back(fr.residual_sup);
    }
    rep.decay_exponent = detail::loglog_slope(ts, res, cfg.t_min_fit);

    const auto& last = rep.fitted.back().params;
    const double dgamma = wrap_angle(last.gamma - p0.gamma);
    rep.param_drift = std::sqrt(std::pow(last.eta - p0.eta, 2) + std::pow(last.xi - p0.xi, 2) +
                                dgamma * dgamma + std::pow(last.x_off - p0.x_off, 2));

    // measured radiation-induced displacement: trailing-average fitted offset
    // minus the bare offset encoded by c1
    double xoff_meas = 0.0;
    const int avg = std::min<int>(cfg.shift_avg_count, static_cast<int>(rep.fitted.size()));
    for (int k = 0; k < avg; ++k)
        xoff_meas += rep.fitted[rep.fitted.size() - 1 - k].params.x_off;
    xoff_meas /= avg;
    rep.shift_measured = xoff_meas - bare.x_off;
    rep.shift_rel_err = std::abs(rep.shift_measured - rep.shift_predicted) /
                        std::max(std::abs(rep.shift_predicted), 1e-300);

    rep.pass_decay = rep.decay_exponent >= cfg.slope_lo && rep.decay_exponent <= cfg.slope_hi;
    rep.pass_drift = rep.param_drift <= cfg.drift_C * rep.epsilon;
    rep.pass_shift = rep.shift_rel_err <= cfg.shift_rel_tol;
    rep.pass = rep.pass_decay && rep.pass_drift && rep.pass_shift;
    return rep;
}

// ---------------------------------------------------------------------------
// (C) Isospectral round trip
// ---------------------------------------------------------------------------

struct RoundtripConfig {
    EvolutionConfig evo;
    double t1 = 2.0;
    std::vector<double> zgrid;
    JostConfig jost;
    BoundStateConfig bs_cfg;
    SearchBox bs_box;
    bool expect_bound_state = true;
    double tol_r = 1e-3;
    double tol_bs = 1e-5;

    void fill_defaults() {
        if (zgrid.empty())
            for (int i = 0; i <= 512; ++i) zgrid.push_back(-6.0 + i * (12.0 / 512.0));
    }
};

struct RoundtripReport {
    double dev_doubled = 0.0, dev_half = 0.0;  // max |Delta r| per convention
    PhaseConvention chosen = PhaseConvention::jump_doubled;
    double max_dr = 0.0;
    double bs_drift = 0.0;     // |z_s(t) - z_s(0)|
    double c_rel_err = 0.0;    // norming-constant round trip under chosen convention
    bool pass_r = false, pass_bs = true, pass = false;
};

inline RoundtripReport run_roundtrip_experiment(const Potential& q0, RoundtripConfig cfg) {
    cfg.fill_defaults();
    ScatteringData d0 = reflection_coefficient(q0, cfg.zgrid, cfg.evo.alpha, cfg.evo.beta,
                                               cfg.jost);
    std::vector<BoundState> bs0;
    if (cfg.expect_bound_state) {
        bs0 = find_bound_states(q0, cfg.bs_box, cfg.bs_cfg);
        d0.bound_states = bs0;
    }

    EvolutionConfig evo = cfg.evo;
    evo.snapshot_times = {cfg.t1};
    evo.t_max = cfg.t1;
    const auto result = run(q0, evo);
    const Potential& q1 = result.snapshots.back().q;

    const ScatteringData d1 =
        reflection_coefficient(q1, cfg.zgrid, cfg.evo.alpha, cfg.evo.beta, cfg.jost);

    RoundtripReport rep;
    const auto dev = [&](PhaseConvention conv) {
        const ScatteringData de = evolve_scattering(d0, cfg.t1, conv);
        double m = 0.0;
        for (std::size_t i = 0; i < de.r.size(); ++i)
            m = std::max(m, std::abs(de.r[i] - d1.r[i]));
        return m;
    };
    rep.dev_doubled = dev(PhaseConvention::jump_doubled);
    rep.dev_half = dev(PhaseConvention::half);
    rep.chosen = rep.dev_doubled <= rep.dev_half ? PhaseConvention::jump_doubled
                                                 : PhaseConvention::half;
    rep.max_dr = std::min(rep.dev_doubled, rep.dev_half);
    if (rep.max_dr > std::min(cfg.tol_r * 50.0, 0.5))
        throw numerical_error("roundtrip: neither phase convention reproduces the evolved data");

    if (cfg.expect_bound_state && !bs0.empty()) {
        const auto bs1 = find_bound_states(q1, cfg.bs_box, cfg.bs_cfg);
        if (bs1.size() != bs0.size())
            throw inconsistent_count_error(static_cast<int>(bs0.size()),
                                           static_cast<int>(bs1.size()),
                                           "roundtrip: bound-state count changed");
        const ScatteringData de = evolve_scattering(d0, cfg.t1, rep.chosen);
        for (std::size_t k = 0; k < bs0.size(); ++k) {
            rep.bs_drift = std::max(rep.bs_drift, std::abs(bs1[k].z - bs0[k].z));
            rep.c_rel_err = std::max(rep.c_rel_err,
                                     std::abs(bs1[k].c - de.bound_states[k].c) /
                                         std::abs(de.bound_states[k].c));
        }
        rep.pass_bs = rep.bs_drift < cfg.tol_bs;
    }
    rep.pass_r = rep.max_dr < cfg.tol_r;
    rep.pass = rep.pass_r && rep.pass_bs;
    return rep;
}

}  // namespace hirota
