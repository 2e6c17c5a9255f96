#pragma once

#include <cmath>
#include <complex>

namespace hirota {

namespace detail {
// Lanczos approximation, g = 7, 9 terms (Godfrey coefficients).  Relative
// error below ~1e-13 for Re z >= 1/2; the reflection formula covers the rest.
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_c[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
}  // namespace detail

/// log Gamma(z), principal branch off the negative real axis.
inline std::complex<double> log_gamma(std::complex<double> z) {
    using cd = std::complex<double>;
    const double pi = M_PI;
    if (z.real() < 0.5) {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    cd x = detail::lanczos_c[0];
    for (int k = 1; k < 9; ++k) x += detail::lanczos_c[k] / (z + static_cast<double>(k));
    const cd t = z + detail::lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline std::complex<double> gamma_c(std::complex<double> z) {
    return std::exp(log_gamma(z));
}

}  // namespace hirota
