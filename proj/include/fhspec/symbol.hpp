#pragma once

// Fisher-Hartwig symbols with real exponents:
//   f(e^{i theta}) = prod_j |e^{i theta_j} - e^{i theta}|^{-2 alpha_j} * c(e^{i theta}),
// where c is a strictly positive trigonometric polynomial. Provides pointwise
// evaluation, Fourier coefficients by singularity-graded Gauss quadrature and the
// leading-order coefficient asymptotics.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fhspec/errors.hpp"
#include "fhspec/quadrature.hpp"
#include "fhspec/specfun.hpp"

namespace fhspec {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Point e^{i theta} of the unit circle; theta is kept in [0, 2 pi).
class UnitCirclePoint {
public:
    UnitCirclePoint() = default;
    explicit UnitCirclePoint(double theta) : theta_(normalize(theta)) {}

    double theta() const { return theta_; }
    cplx chi() const { return std::polar(1.0, theta_); }

    static double normalize(double theta) {
        double t = std::fmod(theta, two_pi);
        if (t < 0.0) t += two_pi;
        if (t >= two_pi) t = 0.0;
        return t;
    }

    friend bool operator==(const UnitCirclePoint&, const UnitCirclePoint&) = default;

private:
    double theta_ = 0.0;
};

/// |e^{i a} - e^{i b}| written through the angle difference d = a - b, which keeps
/// full relative accuracy when d is computed in local coordinates.
inline double chord(double d) { return std::abs(2.0 * std::sin(0.5 * d)); }

struct Singularity {
    UnitCirclePoint location;
    Exponent exponent;
};

/// Regular factor c as a finite Fourier series with Hermitian coefficients, so c is
/// real-valued.
class RegularPart {
public:
    RegularPart() : coeffs_{{0, cplx(1.0, 0.0)}} {}

    /// Builds from coefficients; entries with negative index may be omitted and are
    /// then filled by conjugate reflection. Throws DomainError on asymmetric input.
    explicit RegularPart(std::map<int, cplx> coeffs) {
        for (const auto& [n, value] : coeffs) {
            auto mirror = coeffs.find(-n);
            if (mirror == coeffs.end()) continue;
            const double scale = std::max(1.0, std::abs(value));
            if (std::abs(mirror->second - std::conj(value)) > 1e-14 * scale)
                throw DomainError("RegularPart: coefficients are not Hermitian at n = " + std::to_string(n));
        }
        for (const auto& [n, value] : coeffs) {
            if (value == cplx{}) continue;
            coeffs_[n] = value;
            if (!coeffs.contains(-n)) coeffs_[-n] = std::conj(value);
        }
        if (auto it = coeffs_.find(0); it != coeffs_.end()) it->second = cplx(it->second.real(), 0.0);
    }

    static RegularPart constant(double value) { return RegularPart(std::map<int, cplx>{{0, cplx(value, 0.0)}}); }

    const std::map<int, cplx>& coefficients() const { return coeffs_; }

    cplx coefficient(int n) const {
        auto it = coeffs_.find(n);
        return it == coeffs_.end() ? cplx{} : it->second;
    }

    /// Largest |n| with a nonzero coefficient.
    int degree() const {
        int k = 0;
        for (const auto& [n, value] : coeffs_) k = std::max(k, std::abs(n));
        return k;
    }

    double evaluate(double theta) const {
        double sum = coefficient(0).real();
        for (auto it = coeffs_.upper_bound(0); it != coeffs_.end(); ++it)
            sum += 2.0 * (it->second * std::polar(1.0, it->first * theta)).real();
        return sum;
    }

    double min_on_grid(int points = 4096) const {
        double lo = std::numeric_limits<double>::infinity();
        for (int k = 0; k < points; ++k) lo = std::min(lo, evaluate(two_pi * k / points));
        return lo;
    }

    /// c(theta - theta0): coefficients pick up e^{-i n theta0}.
    RegularPart shifted(double theta0) const {
        RegularPart out = *this;
        for (auto& [n, value] : out.coeffs_) value *= std::polar(1.0, -n * theta0);
        return out;
    }

    bool is_real_coefficients() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& kv) { return kv.second.imag() == 0.0; });
    }

private:
    std::map<int, cplx> coeffs_;
};

/// sum_{|u| <= K} |u|^r |c^(u)|: the weighted Wiener norm used as the regularity
/// hypothesis on c. Always finite for trigonometric polynomials.
inline double wiener_r_norm(const RegularPart& c, double r) {
    if (!(r > 0.0)) throw DomainError("wiener_r_norm: r must be positive");
    double sum = 0.0;
    for (const auto& [n, value] : c.coefficients())
        if (n != 0) sum += std::pow(std::abs(static_cast<double>(n)), r) * std::abs(value);
    return sum;
}

class SymbolSpec {
public:
    SymbolSpec() = default;

    SymbolSpec(std::vector<Singularity> singularities, RegularPart regular)
        : singularities_(std::move(singularities)), regular_(std::move(regular)) {
        for (std::size_t i = 0; i < singularities_.size(); ++i) {
            const double a = singularities_[i].exponent.value;
            if (!singularities_[i].exponent.in_fourier_range() || a == 0.0)
                throw DomainError("SymbolSpec: exponent must lie in (-1/2, 1/2) \\ {0}, got " + std::to_string(a));
            for (std::size_t j = 0; j < i; ++j)
                if (singularities_[i].location == singularities_[j].location)
                    throw DomainError("SymbolSpec: singularity locations must be distinct");
        }
        if (!(regular_.min_on_grid() > 0.0)) throw DomainError("SymbolSpec: regular part must be strictly positive");
    }

    /// Single singularity of exponent alpha at theta, regular part c.
    static SymbolSpec single(double theta, double alpha, RegularPart c = {}) {
        return SymbolSpec({Singularity{UnitCirclePoint(theta), Exponent(alpha)}}, std::move(c));
    }

    const std::vector<Singularity>& singularities() const { return singularities_; }
    const RegularPart& regular() const { return regular_; }

    /// Index of the singularity of strictly largest exponent, if unique.
    std::optional<std::size_t> dominant() const {
        if (singularities_.empty()) return std::nullopt;
        std::size_t best = 0;
        bool unique = true;
        for (std::size_t i = 1; i < singularities_.size(); ++i) {
            const double a = singularities_[i].exponent.value;
            const double b = singularities_[best].exponent.value;
            if (a > b) {
                best = i;
                unique = true;
            } else if (a == b) {
                unique = false;
            }
        }
        if (!unique) return std::nullopt;
        return best;
    }

    const Singularity& dominant_or_throw() const {
        auto d = dominant();
        if (!d) throw HypothesisError("symbol has no unique dominant singularity");
        return singularities_[*d];
    }

    /// Symbol theta -> f(theta - theta0): every singularity moves by +theta0 and the
    /// Fourier coefficients pick up the factor e^{-i n theta0}.
    SymbolSpec rotated(double theta0) const {
        std::vector<Singularity> moved = singularities_;
        for (auto& s : moved) s.location = UnitCirclePoint(s.location.theta() + theta0);
        return SymbolSpec(std::move(moved), regular_.shifted(theta0));
    }

    /// True when f(-theta) = f(theta), which makes every coefficient real.
    bool is_even() const {
        if (!regular_.is_real_coefficients()) return false;
        for (const auto& s : singularities_) {
            const UnitCirclePoint mirror(-s.location.theta());
            const bool found = std::any_of(singularities_.begin(), singularities_.end(), [&](const Singularity& t) {
                return t.location == mirror && t.exponent == s.exponent;
            });
            if (!found) return false;
        }
        return true;
    }

    /// Product of singular factors at theta = base + offset, with the angle
    /// differences formed as (base - theta_j) + offset.
    double singular_factor(double base, double offset) const {
        double value = 1.0;
        for (const auto& s : singularities_) {
            const double d = (base - s.location.theta()) + offset;
            value *= std::pow(chord(d), -2.0 * s.exponent.value);
        }
        return value;
    }

private:
    std::vector<Singularity> singularities_;
    RegularPart regular_;
};

/// f(e^{i theta}); +inf exactly at a singularity with positive exponent.
inline double evaluate(const SymbolSpec& s, double theta) {
    return s.singular_factor(UnitCirclePoint::normalize(theta), 0.0) * s.regular().evaluate(theta);
}

namespace detail {

// Quadrature nodes for (1/2 pi) int_0^{2 pi} f(theta) e^{-i n theta} d theta. Node k
// sits at theta = base[k] + offset[k]; value[k] already contains weight * f / (2 pi).
struct FourierGrid {
    std::vector<double> base;
    std::vector<double> offset;
    std::vector<double> value;

    std::size_t size() const { return value.size(); }
};

inline constexpr int graded_depth = 60;

// Gauss panels over [base + lo, base + hi] (lo < hi, signed offsets), split so that
// no panel is wider than max_width.
inline void add_panels(const SymbolSpec& s, FourierGrid& grid, double base, double lo, double hi, double max_width) {
    const auto& rule = quad::gauss16();
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
    const double width = (hi - lo) / pieces;
    for (int p = 0; p < pieces; ++p) {
        const double a = lo + p * width;
        const double b = (p + 1 == pieces) ? hi : a + width;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (std::size_t k = 0; k < rule.size(); ++k) {
            const double t = mid + half * rule.nodes[k];
            const double f = s.singular_factor(base, t) * s.regular().evaluate(base + t);
            grid.base.push_back(base);
            grid.offset.push_back(t);
            grid.value.push_back(rule.weights[k] * half * f / two_pi);
        }
    }
}

// Half-interval of length len starting at a singular point (direction +1 or -1),
// graded toward the singular end. The innermost panel [0, t1] is replaced by the
// leading-order integral f(t1) t1 / (1 - 2 alpha).
inline void add_graded_half(const SymbolSpec& s, FourierGrid& grid, const Singularity& sing, double len,
                            int direction, double max_width) {
    const double base = sing.location.theta();
    const auto t = quad::graded_offsets(len, graded_depth);
    const double t1 = t[1];
    const double alpha = sing.exponent.value;
    const double tip = direction * t1;
    const double f_tip = s.singular_factor(base, tip) * s.regular().evaluate(base + tip);
    grid.base.push_back(base);
    grid.offset.push_back(tip);
    grid.value.push_back(f_tip * t1 / (1.0 - 2.0 * alpha) / two_pi);
    for (std::size_t k = 1; k + 1 < t.size(); ++k) {
        if (direction > 0)
            add_panels(s, grid, base, t[k], t[k + 1], max_width);
        else
            add_panels(s, grid, base, -t[k + 1], -t[k], max_width);
    }
}

inline FourierGrid build_fourier_grid(const SymbolSpec& s, double max_width) {
    FourierGrid grid;
    const auto& sing = s.singularities();
    if (sing.empty()) {
        add_panels(s, grid, 0.0, 0.0, two_pi, max_width);
        return grid;
    }
    std::vector<std::size_t> order(sing.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sing[a].location.theta() < sing[b].location.theta();
    });
    for (std::size_t k = 0; k < order.size(); ++k) {
        const Singularity& left = sing[order[k]];
        const Singularity& right = sing[order[(k + 1) % order.size()]];
        double len = right.location.theta() - left.location.theta();
        if (len <= 0.0) len += two_pi;
        add_graded_half(s, grid, left, 0.5 * len, +1, max_width);
        add_graded_half(s, grid, right, 0.5 * len, -1, max_width);
    }
    return grid;
}

// All coefficients n = 0..nmax; phases by running products of e^{-i theta}.
inline std::vector<cplx> coefficients_on_grid(const FourierGrid& grid, int nmax) {
    const auto count = static_cast<std::size_t>(nmax) + 1;
    std::vector<double> re(count, 0.0), im(count, 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double phi = grid.base[k] + grid.offset[k];
        const double sr = std::cos(phi), si = -std::sin(phi);
        double tr = grid.value[k], ti = 0.0;
        for (std::size_t n = 0; n < count; ++n) {
            re[n] += tr;
            im[n] += ti;
            const double nr = tr * sr - ti * si;
            ti = tr * si + ti * sr;
            tr = nr;
        }
    }
    std::vector<cplx> acc(count);
    for (std::size_t n = 0; n < count; ++n) acc[n] = cplx(re[n], im[n]);
    return acc;
}

inline cplx coefficient_on_grid(const FourierGrid& grid, long n) {
    cplx acc{};
    double last_base = std::numeric_limits<double>::quiet_NaN();
    cplx base_phase{};
    const double nd = static_cast<double>(n);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.base[k] != last_base) {
            last_base = grid.base[k];
            base_phase = std::polar(1.0, -std::fmod(nd * last_base, two_pi));
        }
        acc += grid.value[k] * base_phase * std::polar(1.0, -std::fmod(nd * grid.offset[k], two_pi));
    }
    return acc;
}

inline double max_panel_width(const SymbolSpec& s, long nmax, int level) {
    const double freq = static_cast<double>(std::max<long>(1, nmax + s.regular().degree()));
    return std::ldexp(two_pi / freq, -level);
}

inline constexpr int max_refinement_level = 6;

template <class Compute>
auto refine_until(const SymbolSpec& s, long nmax, double tol, Compute&& compute) {
    auto coarse = compute(build_fourier_grid(s, max_panel_width(s, nmax, 0)));
    double err = std::numeric_limits<double>::infinity();
    for (int level = 1; level <= max_refinement_level; ++level) {
        auto fine = compute(build_fourier_grid(s, max_panel_width(s, nmax, level)));
        bool ok = true;
        err = 0.0;
        for (std::size_t i = 0; i < fine.size(); ++i) {
            const double e = std::abs(fine[i] - coarse[i]);
            err = std::max(err, e);
            if (e > tol * (1.0 + std::abs(fine[i]))) ok = false;
        }
        if (ok) return fine;
        coarse = std::move(fine);
    }
    throw ConvergenceError("fourier quadrature did not reach the requested tolerance", err);
}

inline void check_even_imaginary(const SymbolSpec& s, const std::vector<cplx>& values, double tol) {
    if (!s.is_even()) return;
    for (const auto& v : values)
        if (std::abs(v.imag()) > tol * (1.0 + std::abs(v)))
            throw ConvergenceError("even symbol produced a complex Fourier coefficient", std::abs(v.imag()));
}

}  // namespace detail

/// Fourier coefficients f^(0), ..., f^(nmax) computed on one shared quadrature grid.
inline std::vector<cplx> fourier_coefficients(const SymbolSpec& s, int nmax, double tol) {
    if (nmax < 0) throw DomainError("fourier_coefficients: nmax must be non-negative");
    if (!(tol > 0.0)) throw DomainError("fourier_coefficients: tol must be positive");
    auto values = detail::refine_until(s, nmax, tol,
                                       [&](const detail::FourierGrid& g) { return detail::coefficients_on_grid(g, nmax); });
    detail::check_even_imaginary(s, values, tol);
    return values;
}

/// f^(n) = (1/2 pi) int f(e^{i theta}) e^{-i n theta} d theta.
inline cplx fourier_coefficient(const SymbolSpec& s, long n, double tol) {
    if (!(tol > 0.0)) throw DomainError("fourier_coefficient: tol must be positive");
    const long m = n < 0 ? -n : n;
    auto values = detail::refine_until(s, m, tol, [&](const detail::FourierGrid& g) {
        return std::vector<cplx>{detail::coefficient_on_grid(g, m)};
    });
    detail::check_even_imaginary(s, values, tol);
    return n < 0 ? std::conj(values[0]) : values[0];
}

/// Leading term of f^(n) for n >= 1, driven by the dominant singularity chi_d:
///   e^{-i n theta_d} C_{alpha_d} c(chi_d) prod_{j != d} |chi_d - chi_j|^{-2 alpha_j} n^{2 alpha_d - 1}.
/// Real when theta_d = 0.
inline cplx fourier_asymptotic(const SymbolSpec& s, long n) {
    if (n < 1) throw DomainError("fourier_asymptotic: n must be positive");
    const auto dom = s.dominant();
    if (!dom) throw HypothesisError("fourier_asymptotic: no unique dominant singularity");
    const Singularity& d = s.singularities()[*dom];
    const double theta_d = d.location.theta();
    double amplitude = detail::c_alpha_signed(d.exponent.value) * s.regular().evaluate(theta_d);
    for (std::size_t j = 0; j < s.singularities().size(); ++j) {
        if (j == *dom) continue;
        const auto& other = s.singularities()[j];
        amplitude *= std::pow(chord(theta_d - other.location.theta()), -2.0 * other.exponent.value);
    }
    amplitude *= std::pow(static_cast<double>(n), 2.0 * d.exponent.value - 1.0);
    return amplitude * std::polar(1.0, -std::fmod(static_cast<double>(n) * theta_d, two_pi));
}

}  // namespace fhspec
