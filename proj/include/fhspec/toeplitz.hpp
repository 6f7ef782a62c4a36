#pragma once

// Toeplitz matrices T_N(f) stored through their generating coefficients, with a
// direct O(N^2) product and an O(N log N) product through circulant embedding.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fftw3.h>

#include "fhspec/errors.hpp"
#include "fhspec/power.hpp"
#include "fhspec/symbol.hpp"

namespace fhspec {

namespace detail {

// FFTW's planner is not thread-safe; plan execution on fresh arrays is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

/// One-dimensional complex FFT pair of fixed size with its own aligned buffer.
class FftPair {
public:
    explicit FftPair(std::size_t size) : size_(size) {
        buffer_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size_));
        if (!buffer_) throw std::bad_alloc();
        std::lock_guard lock(fftw_planner_mutex());
        const int n = static_cast<int>(size_);
        forward_ = fftw_plan_dft_1d(n, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_1d(n, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    FftPair(const FftPair&) = delete;
    FftPair& operator=(const FftPair&) = delete;

    ~FftPair() {
        {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(forward_);
            fftw_destroy_plan(backward_);
        }
        fftw_free(buffer_);
    }

    std::size_t size() const { return size_; }
    std::span<std::complex<double>> data() {
        return {reinterpret_cast<std::complex<double>*>(buffer_), size_};
    }
    void forward() { fftw_execute(forward_); }
    /// Unnormalized inverse transform.
    void backward() { fftw_execute(backward_); }

private:
    std::size_t size_;
    fftw_complex* buffer_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

inline std::size_t embedding_size(std::size_t order) {
    std::size_t p = 1;
    while (p < 2 * order) p <<= 1;
    return p;
}

}  // namespace detail

/// (N+1) x (N+1) Toeplitz matrix with entry (i, j) = coeff(j - i).
class ToeplitzOperator {
public:
    /// From the full coefficient list f^(-N), ..., f^(N) (length 2N + 1).
    static ToeplitzOperator from_full(std::vector<cplx> coeffs) {
        if (coeffs.empty() || coeffs.size() % 2 == 0)
            throw DimensionError("ToeplitzOperator: coefficient list must have odd length 2N+1");
        return ToeplitzOperator(std::move(coeffs));
    }

    /// Hermitian matrix from f^(0), ..., f^(N); f^(-n) = conj(f^(n)).
    static ToeplitzOperator hermitian(std::span<const cplx> nonnegative) {
        if (nonnegative.empty()) throw DimensionError("ToeplitzOperator: need at least f^(0)");
        const std::size_t n = nonnegative.size() - 1;
        std::vector<cplx> full(2 * n + 1);
        full[n] = cplx(nonnegative[0].real(), 0.0);
        for (std::size_t k = 1; k <= n; ++k) {
            full[n + k] = nonnegative[k];
            full[n - k] = std::conj(nonnegative[k]);
        }
        return ToeplitzOperator(std::move(full));
    }

    static ToeplitzOperator identity(std::size_t order) {
        std::vector<cplx> c(order, cplx{});
        c[0] = 1.0;
        return hermitian(c);
    }

    std::size_t order() const { return order_; }
    /// N, the largest coefficient index; order() = N + 1.
    std::size_t degree() const { return order_ - 1; }

    cplx coeff(long n) const { return coeffs_[static_cast<std::size_t>(n + static_cast<long>(order_) - 1)]; }
    cplx entry(std::size_t i, std::size_t j) const {
        return coeff(static_cast<long>(j) - static_cast<long>(i));
    }
    const std::vector<cplx>& coefficients() const { return coeffs_; }

    bool is_hermitian() const {
        const long n = static_cast<long>(degree());
        for (long k = 0; k <= n; ++k)
            if (coeff(-k) != std::conj(coeff(k))) return false;
        return true;
    }

    ToeplitzOperator adjoint() const {
        const std::size_t n = degree();
        std::vector<cplx> c(coeffs_.size());
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::conj(coeffs_[2 * n - k]);
        return ToeplitzOperator(std::move(c));
    }

    Eigen::MatrixXcd to_dense() const {
        Eigen::MatrixXcd m(order_, order_);
        for (std::size_t i = 0; i < order_; ++i)
            for (std::size_t j = 0; j < order_; ++j) m(i, j) = entry(i, j);
        return m;
    }

    /// DFT of the first column of the circulant embedding.
    const std::vector<cplx>& circulant_spectrum() const { return *spectrum_; }

private:
    explicit ToeplitzOperator(std::vector<cplx> coeffs)
        : order_((coeffs.size() + 1) / 2), coeffs_(std::move(coeffs)) {
        // First column: f^(0), f^(-1), ..., f^(-N), zeros, f^(N), ..., f^(1).
        detail::FftPair fft(detail::embedding_size(order_));
        auto buf = fft.data();
        std::fill(buf.begin(), buf.end(), cplx{});
        const long n = static_cast<long>(degree());
        const std::size_t p = fft.size();
        for (long k = 0; k <= n; ++k) buf[static_cast<std::size_t>(k)] = coeff(-k);
        for (long k = 1; k <= n; ++k) buf[p - static_cast<std::size_t>(k)] = coeff(k);
        fft.forward();
        spectrum_ = std::make_shared<const std::vector<cplx>>(buf.begin(), buf.end());
    }

    std::size_t order_;
    std::vector<cplx> coeffs_;
    std::shared_ptr<const std::vector<cplx>> spectrum_;
};

/// T_N(f) for the symbol s, coefficients by singularity-graded quadrature.
inline ToeplitzOperator build(const SymbolSpec& s, int N, double tol) {
    if (N < 0) throw DimensionError("build: N must be non-negative");
    const auto c = fourier_coefficients(s, N, tol);
    return ToeplitzOperator::hermitian(c);
}

inline constexpr std::size_t fast_matvec_threshold = 256;

/// Reusable FFT buffers for repeated fast products of one order.
class CirculantWorkspace {
public:
    explicit CirculantWorkspace(std::size_t order) : order_(order), fft_(detail::embedding_size(order)) {}
    std::size_t order() const { return order_; }

    void apply(const ToeplitzOperator& t, std::span<const cplx> x, std::span<cplx> y) {
        auto buf = fft_.data();
        std::fill(buf.begin(), buf.end(), cplx{});
        std::copy(x.begin(), x.end(), buf.begin());
        fft_.forward();
        const auto& lam = t.circulant_spectrum();
        for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= lam[k];
        fft_.backward();
        const double scale = 1.0 / static_cast<double>(buf.size());
        for (std::size_t i = 0; i < order_; ++i) y[i] = buf[i] * scale;
    }

private:
    std::size_t order_;
    detail::FftPair fft_;
};

namespace detail {
inline void check_dims(const ToeplitzOperator& t, std::size_t nx, std::size_t ny) {
    if (nx != t.order() || ny != t.order())
        throw DimensionError("matvec: vector length " + std::to_string(nx) + " does not match order " +
                             std::to_string(t.order()));
}
}  // namespace detail

inline void matvec_direct(const ToeplitzOperator& t, std::span<const cplx> x, std::span<cplx> y) {
    detail::check_dims(t, x.size(), y.size());
    const std::size_t n = t.order();
    for (std::size_t i = 0; i < n; ++i) {
        cplx s{};
        for (std::size_t j = 0; j < n; ++j) s += t.entry(i, j) * x[j];
        y[i] = s;
    }
}

inline void matvec_fast(const ToeplitzOperator& t, std::span<const cplx> x, std::span<cplx> y,
                        CirculantWorkspace& ws) {
    detail::check_dims(t, x.size(), y.size());
    if (ws.order() != t.order()) throw DimensionError("matvec_fast: workspace order mismatch");
    ws.apply(t, x, y);
}

inline std::vector<cplx> matvec_direct(const ToeplitzOperator& t, std::span<const cplx> x) {
    std::vector<cplx> y(x.size());
    matvec_direct(t, x, y);
    return y;
}

inline std::vector<cplx> matvec_fast(const ToeplitzOperator& t, std::span<const cplx> x) {
    std::vector<cplx> y(x.size());
    CirculantWorkspace ws(t.order());
    matvec_fast(t, x, y, ws);
    return y;
}

/// Tx; FFT-based above fast_matvec_threshold.
inline std::vector<cplx> matvec(const ToeplitzOperator& t, std::span<const cplx> x) {
    return t.order() > fast_matvec_threshold ? matvec_fast(t, x) : matvec_direct(t, x);
}

namespace detail {

// Callable applying a Toeplitz operator, owning its private workspace.
class ToeplitzApplier {
public:
    explicit ToeplitzApplier(const ToeplitzOperator& t) : t_(&t) {
        if (t.order() > fast_matvec_threshold) ws_ = std::make_unique<CirculantWorkspace>(t.order());
    }
    void operator()(std::span<const cplx> x, std::span<cplx> y) {
        if (ws_)
            ws_->apply(*t_, x, y);
        else
            matvec_direct(*t_, x, y);
    }

private:
    const ToeplitzOperator* t_;
    std::unique_ptr<CirculantWorkspace> ws_;
};

inline void check_pair(const ToeplitzOperator& t1, const ToeplitzOperator& t2) {
    if (t1.order() != t2.order()) throw DimensionError("spectral product: operator orders differ");
}

}  // namespace detail

/// Largest eigenvalue of T1 T2 (both Hermitian positive definite).
inline SpectralResult largest_eigenvalue_product(const ToeplitzOperator& t1, const ToeplitzOperator& t2, double tol,
                                                 int max_iter, std::uint64_t seed = default_seed) {
    detail::check_pair(t1, t2);
    detail::ToeplitzApplier a1(t1), a2(t2);
    return power_iteration_product(a1, a2, t1.order(), tol, max_iter, seed);
}

/// Largest singular value of T1 T2, from the dominant eigenvalue of (T1 T2)^* (T1 T2).
inline SpectralResult spectral_norm_product(const ToeplitzOperator& t1, const ToeplitzOperator& t2, double tol,
                                            int max_iter, std::uint64_t seed = default_seed) {
    detail::check_pair(t1, t2);
    const ToeplitzOperator t1h = t1.adjoint();
    const ToeplitzOperator t2h = t2.adjoint();
    detail::ToeplitzApplier a1(t1), a2(t2), a1h(t1h), a2h(t2h);
    std::vector<cplx> tmp1(t1.order()), tmp2(t1.order());
    auto gram = [&](std::span<const cplx> x, std::span<cplx> y) {
        a2(x, tmp1);
        a1(tmp1, tmp2);
        a1h(tmp2, tmp1);
        a2h(tmp1, y);
    };
    SpectralResult r = power_iteration_hermitian(gram, t1.order(), tol, max_iter, seed);
    r.value = std::sqrt(r.value);
    return r;
}

/// Delta_0(chi_0) T Delta_0(chi_0)^{-1} with Delta_0 = diag(chi_0^i): entry (i, j)
/// is multiplied by chi_0^{i - j}, i.e. coeff(n) by e^{-i n theta_0}.
inline ToeplitzOperator rotate_conjugate(const ToeplitzOperator& t, UnitCirclePoint chi0) {
    const long n = static_cast<long>(t.degree());
    std::vector<cplx> c(t.coefficients().size());
    for (long k = -n; k <= n; ++k)
        c[static_cast<std::size_t>(k + n)] =
            t.coeff(k) * std::polar(1.0, -std::fmod(static_cast<double>(k) * chi0.theta(), two_pi));
    return ToeplitzOperator::from_full(std::move(c));
}

}  // namespace fhspec
