// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                    run all criteria
//   acceptance --criterion AC-4   run one

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fhspec/experiments.hpp"

using namespace fhspec;
namespace ex = fhspec::experiments;
using json = ex::json;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool passed = true;
    std::ostringstream log;

    void require(bool ok, const std::string& what) {
        log << "    [" << (ok ? "ok" : "FAILED") << "] " << what << '\n';
        passed = passed && ok;
    }
};

std::string g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// AC-1: ||A|| = N ||G_N|| on 20 seeded random matrices.
void ac1(Outcome& o) {
    std::mt19937_64 rng(20240601);
    double worst = 0.0;
    int count = 0;
    for (long n : {1L, 8L, 32L, 64L})
        for (int t = 0; t < 5; ++t) {
            worst = std::max(worst, widom_identity_check(ex::random_matrix(n, rng), 2).gap);
            ++count;
        }
    o.require(count == 20 && worst <= 1e-10, std::to_string(count) + " matrices, worst gap " + g(worst) + " <= 1e-10");
}

// AC-2: kernel sandwich with the three-Beta constant on the 101 x 101 grid.
void ac2(Outcome& o) {
    for (auto [a1, a2] : {std::pair{0.1, 0.1}, {0.25, 0.25}, {0.4, 0.4}, {0.1, 0.4}}) {
        const auto st = ex::kernel_sandwich(KernelParams(a1, a2));
        std::ostringstream msg;
        msg << "(" << a1 << ", " << a2 << "): " << st.both_pass << "/" << st.points << " pass (lower "
            << st.lower_pass << ", upper " << st.upper_pass << ")";
        o.require(st.both_pass == st.points, msg.str());
    }
}

// AC-3: constant identities.
void ac3(Outcome& o) {
    double worst_h = 0.0;
    for (auto [a1, a2] : {std::pair{0.1, 0.1}, {0.05, 0.2}, {0.15, 0.2}, {0.2, 0.25}}) {
        const double three = h_bound(Exponent(a1), Exponent(a2));
        const double integral = h_bound_integral(Exponent(a1), Exponent(a2));
        const double d = std::abs(three - integral) / integral;
        worst_h = std::max(worst_h, d);
        o.log << "    H(" << a1 << ", " << a2 << "): three-Beta " << g(three) << ", integral " << g(integral) << '\n';
    }
    o.require(worst_h <= 1e-8, "two printed forms of H agree, worst relative difference " + g(worst_h));

    boost::math::quadrature::tanh_sinh<double> ts;
    double worst_psi = 0.0;
    for (double a : {0.1, 0.2, 0.25, 0.3, 0.45}) {
        auto f = [a](double x) {
            const double v = (std::pow(x, 2 * a) + std::pow(1 - x, 2 * a)) / (2 * a);
            return v * v;
        };
        const double ref = std::sqrt(ts.integrate(f, 0.0, 1.0));
        worst_psi = std::max(worst_psi, std::abs(psi_lower(a) - ref) / ref);
    }
    o.require(worst_psi <= 1e-10, "psi_lower vs its defining quadrature, worst " + g(worst_psi));
    const double d = std::abs(c_alpha(Exponent(0.25)) - 1.0 / std::sqrt(2 * pi));
    o.require(d <= 1e-12, "c_alpha(0.25) = 1/sqrt(2 pi), error " + g(d));
}

// AC-4: gamma sandwich.
void ac4(Outcome& o) {
    for (auto [a1, a2] : {std::pair{0.1, 0.1}, {0.05, 0.2}, {0.15, 0.2}}) {
        const KernelParams p(a1, a2);
        const NormEstimate k = operator_norm(p, 1024);
        const double gamma = c_alpha(p.alpha1) * c_alpha(p.alpha2) * k.value;
        const GammaBounds b = gamma_bounds(p);
        std::ostringstream msg;
        msg << "(" << a1 << ", " << a2 << "): " << g(b.lower) << " <= " << g(gamma) << " <= " << g(b.upper)
            << "  (||K|| = " << g(k.value) << ")";
        o.require(k.converged && b.lower <= gamma && gamma <= b.upper, msg.str());
    }
}

// AC-5: Fourier asymptotics and the closed-form oracle.
void ac5(Outcome& o) {
    const auto single = SymbolSpec::single(0.0, 0.25);
    std::vector<double> gaps;
    double last_ratio = 0.0;
    for (long n : {1000L, 10000L, 100000L}) {
        const cplx r = fourier_coefficient(single, n, 1e-13) / fourier_asymptotic(single, n);
        gaps.push_back(std::abs(r - 1.0));
        last_ratio = r.real();
        o.log << "    alpha 0.25, n = " << n << ": ratio " << g(r.real()) << '\n';
    }
    o.require(last_ratio >= 0.98 && last_ratio <= 1.02, "ratio at n = 1e5 in [0.98, 1.02]: " + g(last_ratio));
    o.require(gaps[1] < gaps[0] && gaps[2] < gaps[1], "|ratio - 1| decreasing over 1e3, 1e4, 1e5");

    // Two singularities: the companion factor |chi_dom - chi_j|^{-2 alpha_j} = 2^{-0.2}
    // against the opposite sign 2^{+0.2}.
    const SymbolSpec two({Singularity{UnitCirclePoint(0.0), Exponent(0.3)}, Singularity{UnitCirclePoint(pi), Exponent(0.1)}},
                         RegularPart{});
    const long n = 100000;
    const double q = fourier_coefficient(two, n, 1e-13).real();
    const double with_minus = q / fourier_asymptotic(two, n).real();
    const double with_plus = with_minus / std::pow(2.0, 0.4);
    o.require(std::abs(with_minus - 1.0) <= 0.05 && std::abs(with_minus - 1.0) < std::abs(with_plus - 1.0),
              "companion factor with -2 alpha_j: ratio " + g(with_minus) + " (with +2 alpha_j: " + g(with_plus) + ")");

    double worst = 0.0;
    for (double alpha : {0.25, 0.1, 0.4, -0.25}) {
        const auto s = SymbolSpec::single(0.0, alpha);
        const auto c = fourier_coefficients(s, 64, 1e-12);
        long double v = std::exp(std::lgammal(1.0L - 2.0L * alpha) - 2.0L * std::lgammal(1.0L - alpha));
        for (int k = 0; k <= 64; ++k) {
            const double ref = static_cast<double>(v);
            worst = std::max({worst, std::abs(c[k] - ref) / std::abs(ref),
                              std::abs(fourier_coefficient(s, -k, 1e-12) - ref) / std::abs(ref)});
            v *= (k + static_cast<long double>(alpha)) / (k + 1.0L - alpha);
        }
    }
    o.require(worst <= 1e-8, "closed-form Gamma ratio vs quadrature, |n| <= 64, worst relative " + g(worst));
}

// AC-6: main asymptotics, alpha1 = alpha2 = 1/4.
void ac6(Outcome& o) {
    const json sym = {{"singularities", {{{"theta", 0.0}, {"alpha", 0.25}}}}};
    const auto cfg = ex::parse_config({{"campaign", "convergence"},
                                       {"symbol1", sym},
                                       {"symbol2", sym},
                                       {"N_list", {256, 512, 1024, 2048, 4096}},
                                       {"grid_m", 1024},
                                       {"quad_tol", 1e-12},
                                       {"power_tol", 1e-10},
                                       {"final_gap_max", 0.10},
                                       {"output_path", "unused.csv"}});
    ex::MemorySink sink;
    const auto report = ex::run_convergence(cfg, sink);
    o.log << "    reference C^2 ||K|| = " << g(report.records.front().reference) << " (||K|| = " << g(report.operator_norm)
          << ")\n";
    for (const auto& r : report.records)
        o.log << "    N = " << r.N << ": lambda/N = " << g(r.normalized_lambda) << ", sigma/N = " << g(r.normalized_sigma)
              << ", gaps " << g(r.rel_gap_lambda) << " / " << g(r.rel_gap_sigma) << ", eig_norm_gap "
              << g(r.eig_norm_gap) << '\n';
    for (const auto& c : report.checks) o.require(c.passed, c.name + ": " + c.detail);
}

// AC-7: rotation similarity.
void ac7(Outcome& o) {
    const SymbolSpec s1({Singularity{UnitCirclePoint(0.0), Exponent(0.25)}, Singularity{UnitCirclePoint(2.0), Exponent(0.1)}},
                        RegularPart(std::map<int, cplx>{{0, 1.0}, {1, cplx(0.2, 0.1)}}));
    const SymbolSpec s2 = SymbolSpec::single(0.0, 0.2, RegularPart(std::map<int, cplx>{{0, 2.0}, {2, 0.3}}));
    const double theta0 = pi / 3;
    ex::ExperimentConfig cfg;
    cfg.power_tol = 1e-12;
    double worst = 0.0;
    for (long n : {64L, 256L, 1024L}) {
        const auto a = ex::detail::product_spectrum(s1, s2, n, cfg);
        const auto b = ex::detail::product_spectrum(s1.rotated(theta0), s2.rotated(theta0), n, cfg);
        worst = std::max({worst, std::abs(a.lambda.value - b.lambda.value) / a.lambda.value,
                          std::abs(a.sigma.value - b.sigma.value) / a.sigma.value});
    }
    o.require(worst <= 1e-8, "rotated symbols reproduce normalized spectra, worst relative " + g(worst));

    double worst_dense = 0.0;
    for (int n : {4, 16, 32}) {
        const auto t = build(s1, n, 1e-12);
        const auto r = rotate_conjugate(t, UnitCirclePoint(theta0));
        const Eigen::VectorXd e1 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(t.to_dense()).eigenvalues();
        const Eigen::VectorXd e2 = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(r.to_dense()).eigenvalues();
        worst_dense = std::max(worst_dense, (e1 - e2).cwiseAbs().maxCoeff() / e1.cwiseAbs().maxCoeff());
    }
    o.require(worst_dense <= 1e-10, "dense spectra of rotate_conjugate, N <= 32, worst relative " + g(worst_dense));
}

// AC-8: discretization proxy and small-N oracles.
void ac8(Outcome& o) {
    for (auto [a1, a2] : {std::pair{0.25, 0.25}, {0.1, 0.3}}) {
        std::vector<double> gaps;
        for (long n : {100L, 1000L, 10000L}) gaps.push_back(discretization_gap(KernelParams(a1, a2), n));
        std::ostringstream msg;
        msg << "(" << a1 << ", " << a2 << ") sup |k_N - k|: " << g(gaps[0]) << ", " << g(gaps[1]) << ", " << g(gaps[2]);
        o.require(gaps[1] < gaps[0] && gaps[2] < gaps[1], msg.str());
    }

    const SymbolSpec s1({Singularity{UnitCirclePoint(0.0), Exponent(0.25)}, Singularity{UnitCirclePoint(2.0), Exponent(0.1)}},
                        RegularPart(std::map<int, cplx>{{0, 1.0}, {1, cplx(0.2, 0.1)}}));
    const SymbolSpec s2 = SymbolSpec::single(0.5, 0.3);
    double worst = 0.0;
    for (int n : {1, 7, 31, 63}) {
        const auto t1 = build(s1, n, 1e-12), t2 = build(s2, n, 1e-12);
        const Eigen::MatrixXcd p = t1.to_dense() * t2.to_dense();
        const Eigen::VectorXcd ev = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(p, false).eigenvalues();
        double lam = -1e300;
        for (Eigen::Index i = 0; i < ev.size(); ++i) lam = std::max(lam, ev(i).real());
        const double sig = Eigen::BDCSVD<Eigen::MatrixXcd>(p).singularValues()(0);
        const auto l = largest_eigenvalue_product(t1, t2, 1e-12, 20000);
        const auto s = spectral_norm_product(t1, t2, 1e-12, 20000);
        worst = std::max({worst, std::abs(l.value - lam) / lam, std::abs(s.value - sig) / sig});

        std::vector<cplx> x(t1.order());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = cplx(std::cos(1.0 + i), std::sin(2.0 * i));
        const Eigen::VectorXcd ref = t1.to_dense() * Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
        const auto y = matvec_fast(t1, x);
        worst = std::max(worst, (Eigen::Map<const Eigen::VectorXcd>(y.data(), y.size()) - ref).norm() / ref.norm());
    }
    o.require(worst <= 1e-8, "power iteration and FFT product vs dense eigen/SVD, order <= 64, worst " + g(worst));
}

struct Criterion {
    const char* id;
    const char* title;
    std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {"AC-1", "Widom identity", ac1},         {"AC-2", "kernel sandwich", ac2},
        {"AC-3", "constant identities", ac3},    {"AC-4", "gamma sandwich", ac4},
        {"AC-5", "Fourier asymptotics", ac5},    {"AC-6", "main asymptotics", ac6},
        {"AC-7", "rotation similarity", ac7},    {"AC-8", "discretization", ac8},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    std::string only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--criterion AC-n]\n";
            return 1;
        }
    }
    int failures = 0, ran = 0;
    for (const auto& c : criteria()) {
        if (!only.empty() && only != c.id) continue;
        ++ran;
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << c.id << ' ' << (o.passed ? "PASS" : "FAIL") << "  " << c.title << "  (" << g(secs) << " s)\n"
                  << o.log.str() << std::flush;
        failures += !o.passed;
    }
    if (ran == 0) {
        std::cerr << "unknown criterion '" << only << "'\n";
        return 1;
    }
    return failures == 0 ? 0 : 1;
}
