#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "hirota/soliton.hpp"
#include "hirota/types.hpp"

namespace hirota {

struct FitConfig {
    double window_halfwidths = 10.0;  // fit window, in sech half-widths around the peak
    int max_iters = 200;
    double step_tol = 1e-12;
    double lambda0 = 1e-3;
    double multi_peak_ratio = 0.5;    // secondary peak above this (outside the window) flags
};

struct FitResult {
    SolitonParams params;
    double residual_sup = 0.0;  // max |w - model| over the fit window
    double residual_l2 = 0.0;
    bool ambiguous = false;     // multi-peak input
    int iterations = 0;
};

struct fit_failure_error : numerical_error {
    SolitonParams best;
    fit_failure_error(const SolitonParams& p, const std::string& what)
        : numerical_error(what), best(p) {}
};

namespace detail {

// Dense Levenberg-Marquardt on 4 parameters with forward-difference Jacobian.
// Residuals are the stacked re/im misfits on the window.
template <std::size_t NP>
struct SmallLM {
    using Params = std::array<double, NP>;
    std::function<void(const Params&, std::vector<double>&)> residuals;

    int solve(Params& p, const FitConfig& cfg) const {
        std::vector<double> r0, r1, rj;
        residuals(p, r0);
        double cost = dot(r0, r0);
        double lambda = cfg.lambda0;
        int it = 0;
        for (; it < cfg.max_iters; ++it) {
            // Jacobian by forward differences
            const std::size_t m = r0.size();
            std::array<std::vector<double>, NP> J;
            for (std::size_t k = 0; k < NP; ++k) {
                const double h = 1e-7 * std::max(1.0, std::abs(p[k]));
                Params ph = p;
                ph[k] += h;
                residuals(ph, rj);
                J[k].resize(m);
                for (std::size_t i = 0; i < m; ++i) J[k][i] = (rj[i] - r0[i]) / h;
            }
            std::array<std::array<double, NP>, NP> A{};
            std::array<double, NP> g{};
            for (std::size_t a = 0; a < NP; ++a) {
                g[a] = dot(J[a], r0);
                for (std::size_t b = a; b < NP; ++b) A[a][b] = A[b][a] = dot(J[a], J[b]);
            }
            double gnorm = 0.0;
            for (auto v : g) gnorm = std::max(gnorm, std::abs(v));
            if (gnorm < 1e-14 * std::max(1.0, cost)) return it;

            bool stepped = false;
            for (int tries = 0; tries < 18 && !stepped; ++tries) {
                auto Ad = A;
                for (std::size_t a = 0; a < NP; ++a) Ad[a][a] *= (1.0 + lambda);
                Params dp{};
                if (!cholesky_solve(Ad, g, dp)) {
                    lambda *= 10.0;
                    continue;
                }
                Params pn = p;
                for (std::size_t a = 0; a < NP; ++a) pn[a] -= dp[a];
                residuals(pn, r1);
                const double cn = dot(r1, r1);
                if (cn < cost) {
                    double steplen = 0.0;
                    for (auto v : dp) steplen = std::max(steplen, std::abs(v));
                    p = pn;
                    r0 = r1;
                    cost = cn;
                    lambda = std::max(lambda * 0.3, 1e-14);
                    stepped = true;
                    if (steplen < cfg.step_tol) return it + 1;
                } else {
                    lambda *= 10.0;
                }
            }
            if (!stepped) return it;  // stalled; caller inspects the residual
        }
        return it;
    }

  private:
    static double dot(const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    }
    static bool cholesky_solve(std::array<std::array<double, NP>, NP> A,
                               std::array<double, NP> b, std::array<double, NP>& x) {
        for (std::size_t i = 0; i < NP; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double s = A[i][j];
                for (std::size_t k = 0; k < j; ++k) s -= A[i][k] * A[j][k];
                if (i == j) {
                    if (s <= 0.0) return false;
                    A[i][i] = std::sqrt(s);
                } else {
                    A[i][j] = s / A[j][j];
                }
            }
        }
        for (std::size_t i = 0; i < NP; ++i) {
            double s = b[i];
            for (std::size_t k = 0; k < i; ++k) s -= A[i][k] * x[k];
            x[i] = s / A[i][i];
        }
        for (std::size_t ii = NP; ii-- > 0;) {
            double s = x[ii];
            for (std::size_t k = ii + 1; k < NP; ++k) s -= A[k][ii] * x[k];
            x[ii] = s / A[ii][ii];
        }
        return true;
    }
};

inline std::size_t argmax_abs(const std::vector<cplx>& v) {
    std::size_t best = 0;
    double bm = -1.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double a = std::abs(v[j]);
        if (a > bm) {
            bm = a;
            best = j;
        }
    }
    return best;
}

}  // namespace detail

/// Least-squares fit of a modulated soliton to a single-peaked waveform at
/// time t.  Optimizes (eta, xi, gamma, x_off) on a window of
/// cfg.window_halfwidths sech half-widths around the peak; alpha and beta are
/// the known equation coefficients.  Initialization comes from the peak
/// height, peak location, and the local phase slope unless a guess is given.
inline FitResult fit_soliton(const Potential& w, double t, double alpha, double beta,
                             const SolitonParams* guess = nullptr, const FitConfig& cfg = {}) {
    if (w.n() < 8) throw std::invalid_argument("fit: waveform too short");
    const std::size_t jpk = detail::argmax_abs(w.samples);
    const double peak = std::abs(w.samples[jpk]);
    if (!(peak > 0.0)) throw fit_failure_error(SolitonParams{}, "fit: zero waveform");

    SolitonParams p0;
    p0.alpha = alpha;
    p0.beta = beta;
    if (guess) {
        p0 = *guess;
        p0.alpha = alpha;
        p0.beta = beta;
    } else {
        p0.eta = 0.5 * peak;
        // phase slope across the core -> carrier xi
        const std::size_t lo = jpk > 4 ? jpk - 4 : 0;
        const std::size_t hi = std::min(w.n() - 1, jpk + 4);
        double sl = 0.0;
        int cnt = 0;
        for (std::size_t j = lo; j < hi; ++j) {
            const cplx a = w.samples[j], b = w.samples[j + 1];
            if (std::abs(a) > 0.1 * peak && std::abs(b) > 0.1 * peak) {
                sl += std::arg(b / a);
                ++cnt;
            }
        }
        p0.xi = cnt ? -0.5 * sl / (cnt * w.dx) : 0.0;
        const double xpk = w.x_at(jpk);
        p0.x_off = xpk - soliton_velocity(p0) * t;
        SolitonParams ptry = p0;
        ptry.gamma = 0.0;
        const cplx model = soliton_value(ptry, xpk, t);
        p0.gamma = wrap_angle(std::arg(w.samples[jpk]) - std::arg(model));
    }

    const double half_width = 1.3169578969248166 / (2.0 * p0.eta);
    const double win = cfg.window_halfwidths * half_width;
    const double xpk = w.x_at(jpk);
    std::size_t wlo = 0, whi = w.n() - 1;
    while (wlo < jpk && w.x_at(wlo) < xpk - win) ++wlo;
    while (whi > jpk && w.x_at(whi) > xpk + win) --whi;

    bool ambiguous = false;
    for (std::size_t j = 1; j + 1 < w.n(); ++j) {
        if (j >= wlo && j <= whi) continue;
        const double a = std::abs(w.samples[j]);
        if (a > cfg.multi_peak_ratio * peak && a >= std::abs(w.samples[j - 1]) &&
            a >= std::abs(w.samples[j + 1])) {
            ambiguous = true;
            break;
        }
    }

    detail::SmallLM<4> lm;
    lm.residuals = [&](const std::array<double, 4>& pr, std::vector<double>& out) {
        SolitonParams p = p0;
        p.eta = std::abs(pr[0]);
        p.xi = pr[1];
        p.gamma = pr[2];
        p.x_off = pr[3];
        out.clear();
        out.reserve(2 * (whi - wlo + 1));
        for (std::size_t j = wlo; j <= whi; ++j) {
            const cplx diff = w.samples[j] - soliton_value(p, w.x_at(j), t);
            out.push_back(diff.real());
            out.push_back(diff.imag());
        }
    };
    std::array<double, 4> pr = {p0.eta, p0.xi, p0.gamma, p0.x_off};
    const int iters = lm.solve(pr, cfg);

    FitResult res;
    res.params = p0;
    res.params.eta = std::abs(pr[0]);
    res.params.xi = pr[1];
    res.params.gamma = wrap_angle(pr[2]);
    res.params.x_off = pr[3];
    res.iterations = iters;
    res.ambiguous = ambiguous;
    double sup = 0.0, l2 = 0.0;
    for (std::size_t j = wlo; j <= whi; ++j) {
        const double a = std::abs(w.samples[j] - soliton_value(res.params, w.x_at(j), t));
        sup = std::max(sup, a);
        l2 += a * a;
    }
    res.residual_sup = sup;
    res.residual_l2 = std::sqrt(l2 * w.dx);
    if (!(res.params.eta > 0.0) || !std::isfinite(sup))
        throw fit_failure_error(res.params, "fit: optimizer failed to converge");
    return res;
}

}  // namespace hirota
