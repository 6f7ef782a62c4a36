#pragma once

// Gamma/Beta evaluation and the constants that scale the Toeplitz asymptotics:
// the Fourier decay constant C_alpha, the lower-bound constant psi and the
// kernel sandwich constant H.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fhspec/errors.hpp"

namespace fhspec {

/// A Fisher-Hartwig exponent. The admissible interval depends on the use:
/// eigenvalue asymptotics need (0, 1/2), Fourier coefficients accept (-1/2, 1/2).
struct Exponent {
    double value = 0.0;

    constexpr Exponent() = default;
    constexpr explicit Exponent(double v) : value(v) {}

    constexpr bool in_eigen_range() const { return value > 0.0 && value < 0.5; }
    constexpr bool in_fourier_range() const { return value > -0.5 && value < 0.5; }

    friend constexpr auto operator<=>(const Exponent&, const Exponent&) = default;
};

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286061;

// zeta(k) for k = 2..30
inline constexpr std::array<double, 29> zeta_table = {
    1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915,
    1.0369277551433699263, 1.0173430619844491397, 1.0083492773819228268,
    1.0040773561979443394, 1.0020083928260822144, 1.0009945751278180853,
    1.0004941886041194646, 1.0002460865533080483, 1.0001227133475784891,
    1.0000612481350587048, 1.0000305882363070205, 1.0000152822594086519,
    1.0000076371976378998, 1.0000038172932649998, 1.0000019082127165539,
    1.0000009539620338728, 1.0000004769329867878, 1.0000002384505027277,
    1.0000001192199259653, 1.0000000596081890513, 1.0000000298035035147,
    1.0000000149015548284, 1.0000000074507117898, 1.0000000037253340248,
    1.0000000018626597235, 1.0000000009313274324};

// ln Gamma(1 + z) for |z| <= 0.25 from the Taylor series about 1. Keeps full
// relative accuracy near the zero of ln Gamma at 1.
inline double log_gamma_1p_series(double z) {
    double sum = -euler_gamma * z;
    double zk = -z;  // (-z)^k
    for (std::size_t i = 0; i < zeta_table.size(); ++i) {
        const int k = static_cast<int>(i) + 2;
        zk *= -z;
        const double term = zeta_table[i] * zk / k;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Lanczos approximation, g = 7, nine coefficients. Valid for x >= 1/2.
inline double log_gamma_lanczos(double x) {
    static constexpr std::array<double, 9> p = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double g = 7.0;
    const double z = x - 1.0;
    double a = p[0];
    for (std::size_t i = 1; i < p.size(); ++i) a += p[i] / (z + static_cast<double>(i));
    const double t = z + g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace detail

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive, got " + std::to_string(x));
    if (std::isinf(x)) return x;
    if (x < 0.25) return detail::log_gamma_1p_series(x) - std::log(x);
    if (std::abs(x - 1.0) <= 0.25) return detail::log_gamma_1p_series(x - 1.0);
    if (std::abs(x - 2.0) <= 0.25) return std::log1p(x - 2.0) + detail::log_gamma_1p_series(x - 2.0);
    if (x < 0.5) return detail::log_gamma_lanczos(x + 1.0) - std::log(x);
    return detail::log_gamma_lanczos(x);
}

/// Euler Beta function B(a, b), evaluated in log space.
inline double beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("beta: arguments must be positive, got (" + std::to_string(a) + ", " +
                          std::to_string(b) + ")");
    return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

/// Decay constant of the Fourier coefficients of |1 - e^{i theta}|^{-2 alpha}:
/// Gamma(1 - 2 alpha) sin(pi alpha) / pi. Requires alpha in (0, 1/2).
inline double c_alpha(Exponent alpha) {
    if (!alpha.in_eigen_range())
        throw DomainError("c_alpha: exponent must lie in (0, 1/2), got " + std::to_string(alpha.value));
    return std::exp(log_gamma(1.0 - 2.0 * alpha.value)) * std::sin(std::numbers::pi * alpha.value) /
           std::numbers::pi;
}

namespace detail {
// Same constant on the full Fourier range (-1/2, 1/2) \ {0}; negative for alpha < 0.
inline double c_alpha_signed(double alpha) {
    if (!(alpha > -0.5 && alpha < 0.5) || alpha == 0.0)
        throw DomainError("fourier decay constant: exponent must lie in (-1/2, 1/2) \\ {0}, got " +
                          std::to_string(alpha));
    return std::exp(log_gamma(1.0 - 2.0 * alpha)) * std::sin(std::numbers::pi * alpha) / std::numbers::pi;
}
}  // namespace detail

/// psi(alpha) = (1 / 2 alpha) (2 / (4 alpha + 1) + 2 Gamma(2 alpha + 1)^2 / Gamma(4 alpha + 2))^{1/2},
/// the L^2(0,1) norm of x -> (x^{2 alpha} + (1 - x)^{2 alpha}) / (2 alpha).
inline double psi_lower(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("psi_lower: alpha must be positive, got " + std::to_string(alpha));
    const double ratio = std::exp(2.0 * log_gamma(2.0 * alpha + 1.0) - log_gamma(4.0 * alpha + 2.0));
    return std::sqrt(2.0 / (4.0 * alpha + 1.0) + 2.0 * ratio) / (2.0 * alpha);
}

/// Kernel sandwich constant in its three-Beta form
///   B(2a1, 2a2) + B(2a2, 3 - 2a1 - 2a2) + B(2a1, 3 - 2a1 - 2a2).
inline double h_bound(Exponent alpha1, Exponent alpha2) {
    if (!alpha1.in_eigen_range() || !alpha2.in_eigen_range())
        throw DomainError("h_bound: exponents must lie in (0, 1/2)");
    const double a = 2.0 * alpha1.value;
    const double b = 2.0 * alpha2.value;
    return beta(a, b) + beta(b, 3.0 - a - b) + beta(a, 3.0 - a - b);
}

/// Kernel sandwich constant in its improper-integral form
///   B(2a1, 2a2) + int_0^inf (v^{2a1-1}(1+v)^{2a2-1} + v^{2a2-1}(1+v)^{2a1-1}) dv,
/// evaluated in closed form as B(a,b) + B(a, 1-a-b) + B(b, 1-a-b) with a = 2a1, b = 2a2.
/// The integral diverges when a1 + a2 >= 1/2; +inf is returned there.
///
/// This is not the same number as h_bound(): the two printed forms differ in the
/// second Beta argument (1 - a - b against 3 - a - b).
inline double h_bound_integral(Exponent alpha1, Exponent alpha2) {
    if (!alpha1.in_eigen_range() || !alpha2.in_eigen_range())
        throw DomainError("h_bound_integral: exponents must lie in (0, 1/2)");
    const double a = 2.0 * alpha1.value;
    const double b = 2.0 * alpha2.value;
    if (a + b >= 1.0) return std::numeric_limits<double>::infinity();
    return beta(a, b) + beta(a, 1.0 - a - b) + beta(b, 1.0 - a - b);
}

}  // namespace fhspec
