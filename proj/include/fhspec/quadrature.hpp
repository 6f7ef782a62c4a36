#pragma once

// Gauss-Legendre panel rules and geometrically graded meshes for integrands with
// algebraic endpoint singularities.

#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace fhspec::quad {

/// Gauss-Legendre rule on [-1, 1] with all nodes spelled out (Boost stores only
/// the non-negative half).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

template <unsigned Points>
GaussRule make_gauss_rule() {
    using Gauss = boost::math::quadrature::gauss<double, Points>;
    const auto& abscissa = Gauss::abscissa();
    const auto& weight = Gauss::weights();
    GaussRule rule;
    rule.nodes.reserve(Points);
    rule.weights.reserve(Points);
    // Boost lists x >= 0 first, with x = 0 leading for odd orders.
    for (std::size_t i = abscissa.size(); i-- > 0;) {
        if (abscissa[i] == 0.0) continue;
        rule.nodes.push_back(-abscissa[i]);
        rule.weights.push_back(weight[i]);
    }
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
        rule.nodes.push_back(abscissa[i]);
        rule.weights.push_back(weight[i]);
    }
    return rule;
}

inline const GaussRule& gauss8() {
    static const GaussRule rule = make_gauss_rule<8>();
    return rule;
}

inline const GaussRule& gauss16() {
    static const GaussRule rule = make_gauss_rule<16>();
    return rule;
}

/// Integral of f over [a, b] with one panel of the given rule.
template <class F>
auto integrate_panel(F&& f, double a, double b, const GaussRule& rule) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    decltype(f(mid)) sum{};
    for (std::size_t k = 0; k < rule.size(); ++k) sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return sum * half;
}

/// Breakpoints 0 = t_0 < t_1 < ... < t_n = length with ratio-1/2 grading toward 0:
/// t_1 = length * 2^{-depth}, ..., t_{n-1} = length / 2.
inline std::vector<double> graded_offsets(double length, int depth) {
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(depth) + 2);
    t.push_back(0.0);
    for (int k = depth; k >= 1; --k) t.push_back(std::ldexp(length, -k));
    t.push_back(length);
    return t;
}

}  // namespace fhspec::quad
