#pragma once

// Matrix-free power iteration for the dominant eigenvalue of
//   * a Hermitian positive semidefinite operator B (used for A^* A), and
//   * a product T1 T2 of Hermitian positive definite operators, whose spectrum is
//     real and positive because T1 T2 is similar to T2^{1/2} T1 T2^{1/2}.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fhspec/errors.hpp"

namespace fhspec {

inline constexpr std::uint64_t default_seed = 0x5eedf00dcafeULL;

struct SpectralResult {
    double value = 0.0;
    int iterations = 0;
    /// Relative residual ||M v - mu v|| / (|mu| ||v||) of the final iterate.
    double residual = 0.0;
    bool converged = false;
    std::uint64_t seed = default_seed;
};

namespace detail {

using cvec = std::vector<std::complex<double>>;

inline double norm2(std::span<const std::complex<double>> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

inline std::complex<double> dot(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b) {
    std::complex<double> s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline cvec random_start(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    cvec v(n);
    for (auto& x : v) x = unif(rng);
    const double nv = norm2(v);
    for (auto& x : v) x /= nv;
    return v;
}

inline double residual_norm(std::span<const std::complex<double>> mv, std::span<const std::complex<double>> v,
                            double mu) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::norm(mv[i] - mu * v[i]);
    return std::sqrt(s);
}

}  // namespace detail

/// Dominant eigenvalue of a Hermitian PSD operator given as apply(in, out).
/// Stops when successive Rayleigh quotients agree to tol * value and the relative
/// residual is at most tol.
template <class Apply>
SpectralResult power_iteration_hermitian(Apply&& apply, std::size_t dim, double tol, int max_iter,
                                         std::uint64_t seed = default_seed) {
    if (!(tol > 0.0)) throw DomainError("power iteration: tol must be positive");
    SpectralResult result;
    result.seed = seed;
    if (dim == 0) return result;
    detail::cvec v = detail::random_start(dim, seed);
    detail::cvec mv(dim);
    double previous = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        apply(std::span<const std::complex<double>>(v), std::span<std::complex<double>>(mv));
        const double mu = detail::dot(v, mv).real();
        if (mu < 0.0) throw DomainError("power iteration: negative Rayleigh quotient on a PSD operator");
        result.value = mu;
        result.iterations = it;
        if (mu == 0.0) {
            result.residual = detail::norm2(mv) == 0.0 ? 0.0 : 1.0;
            result.converged = result.residual == 0.0;
            return result;
        }
        result.residual = detail::residual_norm(mv, v, mu) / mu;
        if (it > 1 && std::abs(mu - previous) <= tol * mu && result.residual <= tol) {
            result.converged = true;
            return result;
        }
        previous = mu;
        const double nm = detail::norm2(mv);
        for (std::size_t i = 0; i < dim; ++i) v[i] = mv[i] / nm;
    }
    return result;
}

/// Dominant eigenvalue of T1 T2 for Hermitian positive definite T1, T2 given as
/// apply1/apply2. The estimate is the generalized Rayleigh quotient
/// <T2 v, T1 T2 v> / <T2 v, v>.
template <class Apply1, class Apply2>
SpectralResult power_iteration_product(Apply1&& apply1, Apply2&& apply2, std::size_t dim, double tol, int max_iter,
                                       std::uint64_t seed = default_seed) {
    if (!(tol > 0.0)) throw DomainError("power iteration: tol must be positive");
    SpectralResult result;
    result.seed = seed;
    if (dim == 0) return result;
    detail::cvec v = detail::random_start(dim, seed);
    detail::cvec w(dim), u(dim);
    double previous = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        apply2(std::span<const std::complex<double>>(v), std::span<std::complex<double>>(w));
        apply1(std::span<const std::complex<double>>(w), std::span<std::complex<double>>(u));
        const double denom = detail::dot(w, v).real();
        const double lambda = detail::dot(w, u).real() / denom;
        if (!(denom > 0.0) || !(lambda > 0.0))
            throw DomainError("power iteration: product is not similar to a positive definite matrix");
        result.value = lambda;
        result.iterations = it;
        result.residual = detail::residual_norm(u, v, lambda) / lambda;
        if (it > 1 && std::abs(lambda - previous) <= tol * lambda && result.residual <= tol) {
            result.converged = true;
            return result;
        }
        previous = lambda;
        const double nu = detail::norm2(u);
        for (std::size_t i = 0; i < dim; ++i) v[i] = u[i] / nu;
    }
    return result;
}

}  // namespace fhspec
