#pragma once

// The limit integral operator K_{a1,a2} on L^2(0,1) with kernel
//   k(x, y) = int_0^1 |x - t|^{2 a1 - 1} |y - t|^{2 a2 - 1} dt,
// its discrete counterpart k_N, Nystrom norm estimates and the associated
// two-sided bounds.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "fhspec/errors.hpp"
#include "fhspec/power.hpp"
#include "fhspec/quadrature.hpp"
#include "fhspec/specfun.hpp"

namespace fhspec {

struct KernelParams {
    Exponent alpha1;
    Exponent alpha2;

    KernelParams(double a1, double a2) : alpha1(a1), alpha2(a2) {
        if (!alpha1.in_eigen_range() || !alpha2.in_eigen_range())
            throw DomainError("KernelParams: exponents must lie in (0, 1/2), got (" + std::to_string(a1) + ", " +
                              std::to_string(a2) + ")");
    }

    double total() const { return alpha1.value + alpha2.value; }
    bool symmetric() const { return alpha1 == alpha2; }
    KernelParams swapped() const { return {alpha2.value, alpha1.value}; }
};

enum class NormMethod { nystrom_midpoint, dense_svd };

inline const char* to_string(NormMethod m) {
    return m == NormMethod::nystrom_midpoint ? "nystrom-midpoint" : "dense-svd";
}

struct NormEstimate {
    double value = 0.0;
    int grid_m = 0;
    NormMethod method = NormMethod::nystrom_midpoint;
    double residual = 0.0;
    bool converged = true;
};

namespace detail {

// J(X) = int_0^X v^{a-1} (1 + v)^{b-1} dv for a in (0,1), b in (0,1).
//   [0, min(X, 1/2)]  binomial series of (1 + v)^{b-1}
//   [1/2, min(X, 2)]  one 16-point Gauss panel (integrand analytic there)
//   [2, X]            series of v^{a+b-2} (1 + 1/v)^{b-1} in 1/v
class SegmentIntegral {
public:
    SegmentIntegral(double a, double b) : a_(a), b_(b) {
        head_ = series_near_zero(0.5);
        middle_ = gauss_piece(0.5, 2.0);
    }

    double operator()(double x) const {
        if (x <= 0.0) return 0.0;
        if (x <= 0.5) return series_near_zero(x);
        if (x <= 2.0) return head_ + gauss_piece(0.5, x);
        return head_ + middle_ + series_tail(2.0, x);
    }

private:
    double integrand(double v) const { return std::pow(v, a_ - 1.0) * std::pow(1.0 + v, b_ - 1.0); }

    double series_near_zero(double x) const {
        double coef = 1.0;  // binom(b - 1, k)
        double xp = std::pow(x, a_);
        double sum = 0.0;
        for (int k = 0; k < 200; ++k) {
            const double term = coef * xp / (a_ + k);
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
            coef *= (b_ - 1.0 - k) / (k + 1.0);
            xp *= x;
        }
        return sum;
    }

    double gauss_piece(double lo, double hi) const {
        return quad::integrate_panel([this](double v) { return integrand(v); }, lo, hi, quad::gauss16());
    }

    double series_tail(double lo, double hi) const {
        const double log_ratio = std::log(hi / lo);
        const double e0 = a_ + b_ - 1.0;
        double coef = 1.0;
        double sum = std::pow(lo, e0) * (e0 == 0.0 ? log_ratio : std::expm1(e0 * log_ratio) / e0);
        double hp = std::pow(hi, e0);
        double lp = std::pow(lo, e0);
        for (int k = 1; k < 200; ++k) {
            coef *= (b_ - k) / static_cast<double>(k);  // binom(b - 1, k)
            hp /= hi;
            lp /= lo;
            const double e = e0 - k;
            const double term = coef * (hp - lp) / e;
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }

    double a_, b_;
    double head_ = 0.0, middle_ = 0.0;
};

}  // namespace detail

/// Evaluates k_{a1,a2} through the split at t = x and t = y: with d = |y - x| and
/// x < y,
///   k = d^{2a1+2a2-1} (J_{2a1,2a2}(x/d) + B(2a1, 2a2) + J_{2a2,2a1}((1-y)/d)).
/// Holds precomputed segment data and is safe to share between threads.
class KernelEvaluator {
public:
    explicit KernelEvaluator(KernelParams p)
        : p_(p),
          a_(2.0 * p.alpha1.value),
          b_(2.0 * p.alpha2.value),
          beta_ab_(beta(a_, b_)),
          left_(a_, b_),
          right_(b_, a_) {}

    const KernelParams& params() const { return p_; }

    double operator()(double x, double y) const {
        if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
            throw DomainError("kernel_eval: arguments must lie in [0, 1]");
        if (x == y) return diagonal(x);
        return split(x, y, 1.0 - y, y - x);
    }

    /// k(x, x + u) with the separation u taken exactly rather than recovered from
    /// a rounded y.
    double at_offset(double x, double u) const {
        if (!(x >= 0.0 && x <= 1.0 && x + u >= 0.0 && x + u <= 1.0))
            throw DomainError("kernel_eval: arguments must lie in [0, 1]");
        if (u == 0.0) return diagonal(x);
        return split(x, x + u, (1.0 - x) - u, u);
    }

    /// (1/h) int over [x - h/2, x + h/2] of k(x, .), the finite replacement for the
    /// diagonal of a Nystrom matrix. Graded 8-point panels toward y = x with a
    /// leading-order tail on the innermost piece.
    double cell_average(double x, double h) const {
        const double s = a_ + b_;
        const auto t = quad::graded_offsets(0.5 * h, 40);
        double total = 0.0;
        for (int dir : {-1, +1}) {
            auto f = [&](double u) { return at_offset(x, dir * u); };
            const double delta = t[1];
            const double k_delta = f(delta);
            double tail = delta * k_delta;
            if (s < 1.0)
                tail /= s;
            else if (s == 1.0)
                tail += 2.0 * delta;
            total += tail;
            for (std::size_t i = 1; i + 1 < t.size(); ++i) total += quad::integrate_panel(f, t[i], t[i + 1], quad::gauss8());
        }
        return total / h;
    }

private:
    double diagonal(double x) const {
        const double s = a_ + b_;
        if (s <= 1.0) throw DomainError("kernel_eval: diagonal diverges when alpha1 + alpha2 <= 1/2");
        return (std::pow(x, s - 1.0) + std::pow(1.0 - x, s - 1.0)) / (s - 1.0);
    }

    // right = 1 - y and u = y - x, each formed as accurately as the caller can.
    double split(double x, double y, double right, double u) const {
        const double s = a_ + b_;
        const double d = std::abs(u);
        if (u > 0.0) return std::pow(d, s - 1.0) * (left_(x / d) + beta_ab_ + right_(right / d));
        // k_{a1,a2}(x, y) = k_{a2,a1}(y, x)
        return std::pow(d, s - 1.0) * (right_(y / d) + beta_ab_ + left_((1.0 - x) / d));
    }

    KernelParams p_;
    double a_, b_;
    double beta_ab_;
    detail::SegmentIntegral left_, right_;
};

/// k_{a1,a2}(x, y). Throws DomainError on the diagonal when a1 + a2 <= 1/2.
inline double kernel_eval(const KernelParams& p, double x, double y) { return KernelEvaluator(p)(x, y); }

struct KernelBounds {
    double lower = 0.0;
    double value = 0.0;
    double upper = 0.0;
    bool ok = false;
};

inline constexpr double bounds_slack = 1e-9;

/// |y - x|^{2s-1} <= k(x, y) <= h_bound * |x - y|^{2s-1}, s = a1 + a2, checked with
/// relative slack 1e-9.
inline KernelBounds kernel_bounds_check(const KernelEvaluator& k, double x, double y) {
    if (x == y) throw DomainError("kernel_bounds_check: requires x != y");
    const auto& p = k.params();
    const double power = std::pow(std::abs(y - x), 2.0 * p.total() - 1.0);
    KernelBounds r;
    r.lower = power;
    r.upper = h_bound(p.alpha1, p.alpha2) * power;
    r.value = k(x, y);
    r.ok = r.lower * (1.0 - bounds_slack) <= r.value && r.value <= r.upper * (1.0 + bounds_slack);
    return r;
}

inline KernelBounds kernel_bounds_check(const KernelParams& p, double x, double y) {
    return kernel_bounds_check(KernelEvaluator(p), x, y);
}

/// Precomputed power tables for
///   k_N(x, y) = N^{1 - 2a1 - 2a2} sum_{0<=u<=N, u != [Nx], [Ny]} |[Nx]-u|^{2a1-1} |[Ny]-u|^{2a2-1}.
class DiscreteKernel {
public:
    DiscreteKernel(KernelParams p, long n) : p_(p), n_(n) {
        if (n < 2) throw DomainError("discrete kernel: N must be at least 2");
        pow1_.resize(static_cast<std::size_t>(n) + 1);
        pow2_.resize(static_cast<std::size_t>(n) + 1);
        for (long k = 1; k <= n; ++k) {
            pow1_[static_cast<std::size_t>(k)] = std::pow(static_cast<double>(k), 2.0 * p.alpha1.value - 1.0);
            pow2_[static_cast<std::size_t>(k)] = std::pow(static_cast<double>(k), 2.0 * p.alpha2.value - 1.0);
        }
        scale_ = std::pow(static_cast<double>(n), 1.0 - 2.0 * p.total());
    }

    long n() const { return n_; }

    double operator()(double x, double y) const {
        const long i = std::clamp(static_cast<long>(std::floor(static_cast<double>(n_) * x)), 0L, n_);
        const long j = std::clamp(static_cast<long>(std::floor(static_cast<double>(n_) * y)), 0L, n_);
        double sum = 0.0;
        for (long u = 0; u <= n_; ++u) {
            if (u == i || u == j) continue;
            sum += pow1_[static_cast<std::size_t>(std::abs(i - u))] * pow2_[static_cast<std::size_t>(std::abs(j - u))];
        }
        return scale_ * sum;
    }

private:
    KernelParams p_;
    long n_;
    std::vector<double> pow1_, pow2_;
    double scale_ = 1.0;
};

inline double discrete_kernel_eval(const KernelParams& p, long n, double x, double y) {
    return DiscreteKernel(p, n)(x, y);
}

/// sup over the off-diagonal points (i/(g-1), j/(g-1)) with |x - y| > cutoff of
/// |k_N - k|. The default cutoff N^{-1/4} keeps the points away from the diagonal.
inline double discretization_gap(const KernelParams& p, long n, int grid = 51, double cutoff = -1.0) {
    if (cutoff < 0.0) cutoff = std::pow(static_cast<double>(n), -0.25);
    const KernelEvaluator k(p);
    const DiscreteKernel kn(p, n);
    double sup = 0.0;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double x = static_cast<double>(i) / (grid - 1);
            const double y = static_cast<double>(j) / (grid - 1);
            if (!(std::abs(x - y) > cutoff)) continue;
            sup = std::max(sup, std::abs(kn(x, y) - k(x, y)));
        }
    }
    return sup;
}

namespace detail {

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Row-parallel fill of an m x m matrix; fill_row(i, row_ptr) writes row i.
template <class FillRow>
void parallel_rows(int m, unsigned workers, FillRow&& fill_row) {
    workers = std::clamp(workers, 1u, static_cast<unsigned>(std::max(1, m)));
    if (workers == 1) {
        for (int i = 0; i < m; ++i) fill_row(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = static_cast<int>(w); i < m; i += static_cast<int>(workers)) fill_row(i);
        });
}

}  // namespace detail

/// Nystrom matrix of K_{a1,a2} on the midpoints x_i = (i + 1/2)/m: entries
/// k(x_i, x_j)/m off the diagonal, cell averages of k(x_i, .) (divided by m) on it.
inline Eigen::MatrixXd nystrom_matrix(const KernelParams& p, int m, unsigned workers = detail::default_workers()) {
    if (m < 2) throw DomainError("nystrom_matrix: m must be at least 2");
    const KernelEvaluator k(p);
    const double h = 1.0 / m;
    Eigen::MatrixXd g(m, m);
    detail::parallel_rows(m, workers, [&](int i) {
        const double x = (i + 0.5) * h;
        for (int j = 0; j < m; ++j) g(i, j) = (i == j ? k.cell_average(x, h) : k(x, (j + 0.5) * h)) * h;
    });
    return g;
}

/// Nystrom matrix of the comparison kernel |x - y|^{2s-1}, with the exact cell
/// average m * int_{-h/2}^{h/2} |u|^{2s-1} du on the diagonal.
inline Eigen::MatrixXd comparison_nystrom_matrix(double s, int m) {
    if (!(s > 0.0)) throw DomainError("comparison kernel: exponent sum must be positive");
    if (m < 2) throw DomainError("comparison kernel: m must be at least 2");
    const double h = 1.0 / m;
    Eigen::MatrixXd g(m, m);
    const double diag = 2.0 * std::pow(0.5 * h, 2.0 * s) / (2.0 * s) / h;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g(i, j) = (i == j ? diag : std::pow(std::abs(i - j) * h, 2.0 * s - 1.0)) * h;
    return g;
}

inline constexpr double norm_power_tol = 1e-10;
inline constexpr int norm_power_max_iter = 10000;

/// Largest singular value of a dense real matrix.
inline NormEstimate matrix_norm(const Eigen::MatrixXd& g, NormMethod method, double tol = norm_power_tol,
                                int max_iter = norm_power_max_iter) {
    NormEstimate est;
    est.grid_m = static_cast<int>(g.rows());
    est.method = method;
    if (method == NormMethod::dense_svd) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(g);
        est.value = svd.singularValues()(0);
        return est;
    }
    const Eigen::MatrixXd gram = g.transpose() * g;
    Eigen::VectorXd re(g.rows()), im(g.rows());
    auto apply = [&](std::span<const std::complex<double>> x, std::span<std::complex<double>> y) {
        for (Eigen::Index i = 0; i < re.size(); ++i) {
            re(i) = x[static_cast<std::size_t>(i)].real();
            im(i) = x[static_cast<std::size_t>(i)].imag();
        }
        const Eigen::VectorXd yr = gram * re;
        const Eigen::VectorXd yi = gram * im;
        for (Eigen::Index i = 0; i < re.size(); ++i) y[static_cast<std::size_t>(i)] = {yr(i), yi(i)};
    };
    const SpectralResult r = power_iteration_hermitian(apply, static_cast<std::size_t>(g.rows()), tol, max_iter);
    est.value = std::sqrt(r.value);
    est.residual = r.residual;
    est.converged = r.converged;
    return est;
}

/// ||K_{a1,a2}|| from the m-point midpoint Nystrom matrix.
inline NormEstimate operator_norm(const KernelParams& p, int m, NormMethod method = NormMethod::nystrom_midpoint) {
    return matrix_norm(nystrom_matrix(p, m), method);
}

struct GammaBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// psi(s) C1 C2 / C_s <= gamma_{a1,a2} <= H C1 C2 / (C_s s), s = a1 + a2 < 1/2.
inline GammaBounds gamma_bounds(const KernelParams& p) {
    const double s = p.total();
    if (s >= 0.5)
        throw DomainError("gamma_bounds: C_{alpha1+alpha2} has its pole at alpha1 + alpha2 = 1/2; got " +
                          std::to_string(s));
    const double c12 = c_alpha(p.alpha1) * c_alpha(p.alpha2);
    const double cs = c_alpha(Exponent(s));
    return {psi_lower(s) * c12 / cs, h_bound(p.alpha1, p.alpha2) * c12 / (cs * s)};
}

struct WidomCheck {
    double matrix_norm = 0.0;
    double scaled_operator_norm = 0.0;
    double gap = 0.0;
};

/// Compares ||A|| with N ||G_N||, where G_N has the piecewise constant kernel
/// a_{[Nx],[Ny]}, discretized on m_factor * N midpoints per axis.
inline WidomCheck widom_identity_check(const Eigen::MatrixXcd& a, int m_factor) {
    if (a.rows() != a.cols() || a.rows() < 1) throw DimensionError("widom_identity_check: A must be square, N >= 1");
    if (m_factor < 1) throw DomainError("widom_identity_check: m_factor must be at least 1");
    const Eigen::Index n = a.rows();
    const Eigen::Index m = n * m_factor;
    Eigen::MatrixXcd g(m, m);
    const double nd = static_cast<double>(n);
    for (Eigen::Index p = 0; p < m; ++p) {
        const auto ip = static_cast<Eigen::Index>(std::floor(nd * (p + 0.5) / static_cast<double>(m)));
        for (Eigen::Index q = 0; q < m; ++q) {
            const auto iq = static_cast<Eigen::Index>(std::floor(nd * (q + 0.5) / static_cast<double>(m)));
            g(p, q) = a(ip, iq) / static_cast<double>(m);
        }
    }
    WidomCheck r;
    r.matrix_norm = Eigen::BDCSVD<Eigen::MatrixXcd>(a).singularValues()(0);
    r.scaled_operator_norm = nd * Eigen::BDCSVD<Eigen::MatrixXcd>(g).singularValues()(0);
    const double diff = std::abs(r.scaled_operator_norm - r.matrix_norm);
    r.gap = r.matrix_norm > 0.0 ? diff / r.matrix_norm : diff;
    return r;
}

}  // namespace fhspec
