#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "hirota/types.hpp"

namespace hirota {

struct EvolutionConfig {
    double L = 60.0;            // domain half-width; grid on [-L, L)
    std::size_t n_modes = 1024; // power of two, >= 256
    double dt = 1e-3;           // step magnitude, > 0
    double t_max = 1.0;         // may be negative (time-reversed run)
    double alpha = 1.0;
    double beta = 0.0;
    std::vector<double> snapshot_times;
    double cfl_factor = 1.0;    // require |dt| <= cfl_factor * dx / max(1, max|q|^2)
    double boundary_tol = 1e-10;
    bool dealias = true;        // 2/3-rule projection of the state
    double growth_guard = 1.10; // sup-norm growth ratio treated as blow-up
    int order = 2;              // 2: Strang; 4: Yoshida triple jump of the Strang map

    void validate() const {
        if (dt <= 0.0) throw std::invalid_argument("evolution: dt must be > 0");
        if (n_modes < 256 || (n_modes & (n_modes - 1)) != 0)
            throw std::invalid_argument("evolution: n_modes must be a power of two >= 256");
        if (!(L > 0.0)) throw std::invalid_argument("evolution: L must be > 0");
        if (order != 2 && order != 4)
            throw std::invalid_argument("evolution: order must be 2 or 4");
    }
};

/// Unit multiplier advancing mode e^{ikx} by dt under the linearized flow.
inline cplx linear_multiplier(double k, double dt, double alpha, double beta) {
    return std::exp(iu * ((beta * k * k * k - alpha * k * k) * dt));
}

namespace detail {
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;  // FFTW planning is not thread-safe
    return m;
}
}  // namespace detail

/// Strang-split spectral stepper: half nonlinear, full linear (exact in
/// Fourier space), half nonlinear.  The nonlinear substep
/// q_t = 2 i alpha |q|^2 q - 6 beta |q|^2 q_x is integrated with RK4 and a
/// spectral derivative.
class SplitStepper {
  public:
    SplitStepper(const Potential& q0, const EvolutionConfig& cfg) : cfg_(cfg) {
        cfg.validate();
        n_ = cfg.n_modes;
        if (q0.samples.size() != n_)
            throw std::invalid_argument("stepper: sample count != n_modes");
        const double dx_expect = 2.0 * cfg.L / static_cast<double>(n_);
        if (std::abs(q0.dx - dx_expect) > 1e-12 * dx_expect || std::abs(q0.x0 + cfg.L) > 1e-9)
            throw std::invalid_argument("stepper: grid does not match [-L, L)");
        validate_tails(q0, cfg.boundary_tol, true);

        q_ = q0.samples;
        buf_.resize(n_);
        der_.resize(n_);
        k_.resize(n_);
        mask_.resize(n_);
        const double dk = M_PI / cfg.L;
        for (std::size_t j = 0; j < n_; ++j) {
            const double m = (j <= n_ / 2) ? static_cast<double>(j)
                                           : static_cast<double>(j) - static_cast<double>(n_);
            k_[j] = dk * m;
            mask_[j] = (!cfg.dealias || 3 * std::min(j, n_ - j) <= n_) ? 1.0 : 0.0;
        }
        {
            std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
            auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
            fwd_ = fftw_plan_dft_1d(static_cast<int>(n_), p, p, FFTW_FORWARD, FFTW_ESTIMATE);
            bwd_ = fftw_plan_dft_1d(static_cast<int>(n_), p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
        project();
        mass0_ = mass();
        sup0_ = sup();
    }

    SplitStepper(const SplitStepper&) = delete;
    SplitStepper& operator=(const SplitStepper&) = delete;

    ~SplitStepper() {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    double t() const { return t_; }

    Potential state() const {
        return Potential{-cfg_.L, 2.0 * cfg_.L / static_cast<double>(n_), q_};
    }

    double mass() const {
        double s = 0.0;
        for (const auto& v : q_) s += std::norm(v);
        return s * 2.0 * cfg_.L / static_cast<double>(n_);
    }

    /// Im int q* q_x dx, evaluated spectrally.
    double momentum() {
        buf_ = q_;
        fftw_execute(fwd_);
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += k_[j] * std::norm(buf_[j]);
        return s * 2.0 * cfg_.L / (static_cast<double>(n_) * static_cast<double>(n_));
    }

    double sup() const {
        double m = 0.0;
        for (const auto& v : q_) m = std::max(m, std::abs(v));
        return m;
    }

    /// One Strang step of signed size h.
    void step(double h) {
        check_cfl(h);
        nonlinear_substep(0.5 * h);
        linear_substep(h);
        nonlinear_substep(0.5 * h);
        t_ += h;
        guard();
    }

    /// One fourth-order composed step (Yoshida coefficients on the Strang map).
    void step_composed(double h) {
        constexpr double w1 = 1.3512071919596578;   // 1/(2 - 2^{1/3})
        constexpr double w0 = -1.7024143839193153;  // 1 - 2 w1
        step(w1 * h);
        step(w0 * h);
        step(w1 * h);
    }

    /// Advance to t_target with steps of magnitude cfg.dt (shorter final step).
    void advance_to(double t_target) {
        const double dir = (t_target >= t_) ? 1.0 : -1.0;
        while (std::abs(t_target - t_) > 1e-13 * std::max(1.0, std::abs(t_target))) {
            const double h = dir * std::min(cfg_.dt, std::abs(t_target - t_));
            if (cfg_.order == 4)
                step_composed(h);
            else
                step(h);
        }
        t_ = t_target;
    }

  private:
    void check_cfl(double h) const {
        const double dx = 2.0 * cfg_.L / static_cast<double>(n_);
        double a2 = 0.0;
        for (const auto& v : q_) a2 = std::max(a2, std::norm(v));
        const double lim = cfg_.cfl_factor * dx / std::max(1.0, a2);
        if (std::abs(h) > lim * (1.0 + 1e-12))
            throw std::invalid_argument("stepper: dt exceeds CFL-type bound");
    }

    void guard() const {
        const double s = sup();
        if (!std::isfinite(s) || (sup0_ > 0.0 && s > cfg_.growth_guard * std::max(sup0_, 1e-12) &&
                                  s > 10.0 * std::sqrt(mass0_ / (2.0 * cfg_.L))))
            throw blow_up_error(t_, "stepper: sup-norm growth beyond guard at t=" +
                                        std::to_string(t_));
    }

    void linear_substep(double h) {
        buf_ = q_;
        fftw_execute(fwd_);
        const double inv_n = 1.0 / static_cast<double>(n_);
        for (std::size_t j = 0; j < n_; ++j)
            buf_[j] *= mask_[j] * inv_n * linear_multiplier(k_[j], h, cfg_.alpha, cfg_.beta);
        fftw_execute(bwd_);
        q_ = buf_;
    }

    void project() {
        if (!cfg_.dealias) return;
        buf_ = q_;
        fftw_execute(fwd_);
        const double inv_n = 1.0 / static_cast<double>(n_);
        for (std::size_t j = 0; j < n_; ++j) buf_[j] *= mask_[j] * inv_n;
        fftw_execute(bwd_);
        q_ = buf_;
    }

    // der_ <- q_x of `in`, spectral, de-aliased
    void derivative(const std::vector<cplx>& in) {
        buf_ = in;
        fftw_execute(fwd_);
        const double inv_n = 1.0 / static_cast<double>(n_);
        for (std::size_t j = 0; j < n_; ++j) buf_[j] *= mask_[j] * inv_n * iu * k_[j];
        fftw_execute(bwd_);
        der_ = buf_;
    }

    void nl_rhs(const std::vector<cplx>& in, std::vector<cplx>& out) {
        derivative(in);
        out.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            const double a2 = std::norm(in[j]);
            out[j] = 2.0 * iu * cfg_.alpha * a2 * in[j] - 6.0 * cfg_.beta * a2 * der_[j];
        }
    }

    void nonlinear_substep(double h) {
        nl_rhs(q_, k1_);
        tmp_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) tmp_[j] = q_[j] + 0.5 * h * k1_[j];
        nl_rhs(tmp_, k2_);
        for (std::size_t j = 0; j < n_; ++j) tmp_[j] = q_[j] + 0.5 * h * k2_[j];
        nl_rhs(tmp_, k3_);
        for (std::size_t j = 0; j < n_; ++j) tmp_[j] = q_[j] + h * k3_[j];
        nl_rhs(tmp_, k4_);
        for (std::size_t j = 0; j < n_; ++j)
            q_[j] += h / 6.0 * (k1_[j] + 2.0 * k2_[j] + 2.0 * k3_[j] + k4_[j]);
    }

    EvolutionConfig cfg_;
    std::size_t n_ = 0;
    double t_ = 0.0, mass0_ = 0.0, sup0_ = 0.0;
    std::vector<cplx> q_, buf_, der_, tmp_, k1_, k2_, k3_, k4_;
    std::vector<double> k_, mask_;
    fftw_plan fwd_{}, bwd_{};
};

/// Uniform grid on [-L, L) matching the stepper layout.
inline Potential sample_on_pde_grid(const EvolutionConfig& cfg,
                                    const std::function<cplx(double)>& f) {
    const double dx = 2.0 * cfg.L / static_cast<double>(cfg.n_modes);
    Potential q{-cfg.L, dx, std::vector<cplx>(cfg.n_modes)};
    for (std::size_t j = 0; j < cfg.n_modes; ++j) q.samples[j] = f(q.x_at(j));
    return q;
}

/// One Strang step of size cfg.dt.
inline Potential step(const Potential& q, const EvolutionConfig& cfg) {
    SplitStepper s(q, cfg);
    s.step(cfg.dt);
    return s.state();
}

struct Snapshot {
    double t = 0.0;
    Potential q;
};

struct ConservationRow {
    double t = 0.0, mass = 0.0, momentum = 0.0, sup = 0.0;
};

struct EvolutionResult {
    std::vector<Snapshot> snapshots;
    std::vector<ConservationRow> conservation;
    double max_rel_mass_drift = 0.0;
    double max_rel_momentum_drift = 0.0;
};

/// Run to every requested snapshot time (monotone in the direction of t_max;
/// t_max itself is appended when absent).
inline EvolutionResult run(const Potential& q0, const EvolutionConfig& cfg) {
    EvolutionConfig c = cfg;
    c.validate();
    std::vector<double> times = cfg.snapshot_times;
    const bool fwd = cfg.t_max >= 0.0;
    if (times.empty() || std::abs(times.back() - cfg.t_max) > 1e-12)
        times.push_back(cfg.t_max);
    for (std::size_t j = 1; j < times.size(); ++j)
        if (fwd ? times[j] <= times[j - 1] : times[j] >= times[j - 1])
            throw std::invalid_argument("run: snapshot times not monotone toward t_max");

    SplitStepper s(q0, c);
    EvolutionResult out;
    const double mass0 = s.mass();
    const double mom0 = s.momentum();
    out.conservation.push_back({0.0, mass0, mom0, s.sup()});
    const double mom_scale = std::max(std::abs(mom0), std::max(mass0, 1e-300));
    for (double tt : times) {
        s.advance_to(tt);
        Snapshot snap{tt, s.state()};
        const double m = s.mass(), p = s.momentum();
        out.conservation.push_back({tt, m, p, s.sup()});
        out.max_rel_mass_drift =
            std::max(out.max_rel_mass_drift, std::abs(m - mass0) / std::max(mass0, 1e-300));
        out.max_rel_momentum_drift =
            std::max(out.max_rel_momentum_drift, std::abs(p - mom0) / mom_scale);
        out.snapshots.push_back(std::move(snap));
    }
    return out;
}

}  // namespace hirota
