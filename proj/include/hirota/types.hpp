#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hirota {

using cplx = std::complex<double>;
inline constexpr cplx iu{0.0, 1.0};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// |s11| fell below threshold on the real axis; carries the offending z.
struct non_generic_potential_error : numerical_error {
    double z;
    non_generic_potential_error(double z_, const std::string& what)
        : numerical_error(what), z(z_) {}
};

struct degeneracy_error : numerical_error {
    using numerical_error::numerical_error;
};

/// Argument-principle count and converged Newton roots disagree.
struct inconsistent_count_error : numerical_error {
    int winding, converged;
    inconsistent_count_error(int w, int c, const std::string& what)
        : numerical_error(what), winding(w), converged(c) {}
};

struct blow_up_error : numerical_error {
    double t_blow;
    blow_up_error(double t, const std::string& what) : numerical_error(what), t_blow(t) {}
};

/// (x,t) outside the oscillatory cone, or a degenerate dispersion request.
struct cone_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct contour_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Half-line quadrature tail estimate exceeded tolerance.
struct insufficient_grid_error : numerical_error {
    double tail_bound;
    insufficient_grid_error(double tb, const std::string& what)
        : numerical_error(what), tail_bound(tb) {}
};

struct not_found_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct unsupported_configuration_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Small 2x2 complex matrix
// ---------------------------------------------------------------------------

struct Mat2 {
    cplx a11{1.0}, a12{0.0}, a21{0.0}, a22{1.0};

    static Mat2 identity() { return {}; }

    cplx det() const { return a11 * a22 - a12 * a21; }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }

    std::array<cplx, 2> col1() const { return {a11, a21}; }
    std::array<cplx, 2> col2() const { return {a12, a22}; }

    /// sigma2 M* sigma2 — the focusing symmetry companion.
    Mat2 sigma2_conj() const {
        return {std::conj(a22), -std::conj(a21), -std::conj(a12), std::conj(a11)};
    }
};

// ---------------------------------------------------------------------------
// Waveform on a uniform x-grid
// ---------------------------------------------------------------------------

struct Potential {
    double x0 = 0.0;   // left grid edge
    double dx = 1.0;   // grid spacing, > 0
    std::vector<cplx> samples;

    std::size_t n() const { return samples.size(); }
    double x_at(std::size_t j) const { return x0 + static_cast<double>(j) * dx; }
    double x_end() const { return samples.empty() ? x0 : x_at(samples.size() - 1); }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : samples) m = std::max(m, std::abs(v));
        return m;
    }

    double sup_norm() const { return max_abs(); }

    /// Trapezoid ||q||_{L^2}^2 on the sampled window.
    double l2_norm_sq() const {
        if (samples.size() < 2) return 0.0;
        double s = 0.0;
        for (std::size_t j = 0; j < samples.size(); ++j) {
            double w = (j == 0 || j + 1 == samples.size()) ? 0.5 : 1.0;
            s += w * std::norm(samples[j]);
        }
        return s * dx;
    }
    double l2_norm() const { return std::sqrt(l2_norm_sq()); }
};

/// Check the tail-decay invariant: boundary samples below tol * max|q|.
/// Returns the worst relative boundary magnitude; throws when strict.
inline double validate_tails(const Potential& q, double rel_tol = 1e-10, bool strict = false) {
    if (q.samples.empty() || q.dx <= 0.0)
        throw std::invalid_argument("potential: empty samples or non-positive dx");
    const double scale = std::max(q.max_abs(), 1e-300);
    const double worst =
        std::max(std::abs(q.samples.front()), std::abs(q.samples.back())) / scale;
    if (strict && worst > rel_tol)
        throw std::invalid_argument("potential: boundary samples above truncation tolerance");
    return worst;
}

// ---------------------------------------------------------------------------
// Jost / scattering values
// ---------------------------------------------------------------------------

struct JostEvaluation {
    double x = 0.0;
    cplx z{0.0, 0.0};
    Mat2 m;   // value of the e^{i t theta sigma3}-normalized Jost solution
};

struct ScatteringMatrixValue {
    cplx z{0.0, 0.0};
    cplx s11{1.0}, s12{0.0}, s21{0.0}, s22{1.0};
    cplx det() const { return s11 * s22 - s12 * s21; }
};

struct BoundState {
    cplx z{0.0, 1.0};   // Im z > 0
    cplx c{1.0, 0.0};   // norming constant, != 0
};

struct ScatteringData {
    std::vector<double> zgrid;       // strictly increasing real samples
    std::vector<cplx> r;             // reflection coefficient on zgrid
    std::vector<BoundState> bound_states;
    double alpha = 1.0;
    double beta = 0.0;

    void validate() const {
        if (zgrid.size() != r.size())
            throw std::invalid_argument("scattering data: zgrid/r size mismatch");
        for (std::size_t j = 1; j < zgrid.size(); ++j)
            if (!(zgrid[j] > zgrid[j - 1]))
                throw std::invalid_argument("scattering data: zgrid not strictly increasing");
        for (const auto& b : bound_states) {
            if (!(b.z.imag() > 0.0))
                throw std::invalid_argument("scattering data: bound state with Im z <= 0");
            if (b.c == cplx(0.0, 0.0))
                throw std::invalid_argument("scattering data: zero norming constant");
        }
        for (const auto& v : r)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("scattering data: non-finite r sample");
    }

    double sup_abs_r() const {
        double m = 0.0;
        for (const auto& v : r) m = std::max(m, std::abs(v));
        return m;
    }
};

// ---------------------------------------------------------------------------
// Soliton family
// ---------------------------------------------------------------------------

inline double wrap_angle(double a) {
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a < 0.0) a += 2.0 * M_PI;
    return a - M_PI;
}

struct SolitonParams {
    double eta = 0.5;    // amplitude / 2, > 0
    double xi = 0.0;     // carrier
    double gamma = 0.0;  // phase, normalized to (-pi, pi]
    double alpha = 1.0;  // equation coefficients
    double beta = 0.0;
    double x_off = 0.0;  // translation

    void validate() const {
        if (!(eta > 0.0)) throw std::invalid_argument("soliton: eta must be > 0");
    }
    SolitonParams normalized() const {
        SolitonParams p = *this;
        p.gamma = wrap_angle(p.gamma);
        if (p.gamma <= -M_PI) p.gamma = M_PI;
        return p;
    }
};

struct DressingPair {
    cplx z_s{0.0, 0.5};  // Im z_s > 0
    cplx c1{1.0, 0.0};   // != 0

    void validate() const {
        if (!(z_s.imag() > 0.0)) throw std::invalid_argument("dressing pair: Im z_s must be > 0");
        if (c1 == cplx(0.0, 0.0)) throw std::invalid_argument("dressing pair: c1 must be nonzero");
    }
};

// Dispersion phase rate of the scattering data under the flow.  The jump-factor
// convention Theta = 8 beta z^3 + 4 alpha z^2 is the one validated by the PDE
// round-trip; the halved variant is kept selectable for the round-trip report.
enum class PhaseConvention { jump_doubled, half };

inline cplx phase_rate(cplx z, double alpha, double beta,
                       PhaseConvention conv = PhaseConvention::jump_doubled) {
    const cplx w = 4.0 * beta * z * z * z + 2.0 * alpha * z * z;
    return conv == PhaseConvention::jump_doubled ? 2.0 * w : w;
}

}  // namespace hirota
