#pragma once

// Config-driven verification campaigns. Each campaign streams rows to a RowSink
// (header first, one flushed row per completed unit of work) and returns the
// list of checks it evaluated.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fhspec/errors.hpp"
#include "fhspec/kernelop.hpp"
#include "fhspec/symbol.hpp"
#include "fhspec/toeplitz.hpp"

namespace fhspec::experiments {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// SymbolSpec <-> JSON
//   {"singularities":[{"theta":t,"alpha":a}], "regular":{"coeffs":[[n,re,im],...]}}

inline SymbolSpec symbol_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("symbol: expected a JSON object");
    std::vector<Singularity> sings;
    if (j.contains("singularities")) {
        const auto& arr = j.at("singularities");
        if (!arr.is_array()) throw ConfigError("symbol: 'singularities' must be an array");
        for (const auto& s : arr) {
            if (!s.is_object() || !s.contains("theta") || !s.contains("alpha") || !s.at("theta").is_number() ||
                !s.at("alpha").is_number())
                throw ConfigError("symbol: each singularity needs numeric 'theta' and 'alpha'");
            sings.push_back({UnitCirclePoint(s.at("theta").get<double>()), Exponent(s.at("alpha").get<double>())});
        }
    }
    RegularPart regular;
    if (j.contains("regular")) {
        const auto& r = j.at("regular");
        if (!r.is_object() || !r.contains("coeffs") || !r.at("coeffs").is_array())
            throw ConfigError("symbol: 'regular' must be {\"coeffs\": [[n, re, im], ...]}");
        std::map<int, cplx> coeffs;
        for (const auto& c : r.at("coeffs")) {
            if (!c.is_array() || c.size() != 3 || !c[0].is_number_integer() || !c[1].is_number() || !c[2].is_number())
                throw ConfigError("symbol: regular coefficient entries are [n, re, im] with integer n");
            const int n = c[0].get<int>();
            if (coeffs.contains(n)) throw ConfigError("symbol: duplicate regular coefficient index " + std::to_string(n));
            coeffs[n] = cplx(c[1].get<double>(), c[2].get<double>());
        }
        try {
            regular = RegularPart(std::move(coeffs));
        } catch (const DomainError& e) {
            throw ConfigError(std::string("symbol: ") + e.what());
        }
    }
    try {
        return SymbolSpec(std::move(sings), std::move(regular));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("symbol: ") + e.what());
    }
}

inline json symbol_to_json(const SymbolSpec& s) {
    json sings = json::array();
    for (const auto& x : s.singularities()) sings.push_back({{"theta", x.location.theta()}, {"alpha", x.exponent.value}});
    json coeffs = json::array();
    const int d = s.regular().degree();
    for (int n = -d; n <= d; ++n) {
        const cplx c = s.regular().coefficient(n);
        if (c != cplx{}) coeffs.push_back({n, c.real(), c.imag()});
    }
    return {{"singularities", sings}, {"regular", {{"coeffs", coeffs}}}};
}

// ---------------------------------------------------------------------------
// Configuration

enum class Campaign { convergence, bounds, fourier, widom, kernel_table };

inline const char* to_string(Campaign c) {
    switch (c) {
        case Campaign::convergence: return "convergence";
        case Campaign::bounds: return "bounds";
        case Campaign::fourier: return "fourier";
        case Campaign::widom: return "widom";
        case Campaign::kernel_table: return "kernel-table";
    }
    return "?";
}

inline Campaign campaign_from_string(const std::string& s) {
    for (Campaign c : {Campaign::convergence, Campaign::bounds, Campaign::fourier, Campaign::widom,
                       Campaign::kernel_table})
        if (s == to_string(c)) return c;
    throw ConfigError("unknown campaign '" + s + "'");
}

struct ExperimentConfig {
    Campaign campaign = Campaign::convergence;
    std::optional<SymbolSpec> symbol1;
    std::optional<SymbolSpec> symbol2;
    std::vector<long> n_list;
    int grid_m = 1024;
    double quad_tol = 1e-12;
    double power_tol = 1e-10;
    int max_iter = 10000;
    std::uint64_t seed = default_seed;
    std::optional<double> rotation_theta;
    std::string output_path;
    // exponent pairs for the bounds and kernel-table campaigns
    std::vector<std::pair<double, double>> alpha_pairs;
    // threshold on the last row's gap; defaults depend on the campaign
    std::optional<double> final_gap_max;
    // widom: matrices per N and refinement factor of the operator grid
    int repeats = 5;
    int m_factor = 2;
    json raw;
};

namespace detail {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: field '") + key + "' has the wrong type");
    }
}

inline double positive(const json& j, const char* key, double fallback) {
    const double v = get_or<double>(j, key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("config: '") + key + "' must be positive");
    return v;
}

inline void require_eigen_exponents(const SymbolSpec& s, const char* which) {
    if (s.singularities().empty())
        throw ConfigError(std::string("config: ") + which + " needs at least one singularity for this campaign");
    for (const auto& x : s.singularities())
        if (!x.exponent.in_eigen_range())
            throw ConfigError(std::string("config: ") + which + " exponents must lie in (0, 1/2)");
    if (!s.dominant()) throw ConfigError(std::string("config: ") + which + " has no unique dominant singularity");
}

}  // namespace detail

/// Parses and validates a config document; throws ConfigError on any problem.
inline ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    ExperimentConfig cfg;
    cfg.raw = j;
    if (!j.contains("campaign") || !j.at("campaign").is_string()) throw ConfigError("config: 'campaign' is required");
    cfg.campaign = campaign_from_string(j.at("campaign").get<std::string>());
    if (j.contains("symbol1")) cfg.symbol1 = symbol_from_json(j.at("symbol1"));
    if (j.contains("symbol2")) cfg.symbol2 = symbol_from_json(j.at("symbol2"));

    if (j.contains("N_list")) {
        const auto& arr = j.at("N_list");
        if (!arr.is_array()) throw ConfigError("config: 'N_list' must be an array of integers");
        for (const auto& v : arr) {
            if (!v.is_number_integer()) throw ConfigError("config: 'N_list' must be an array of integers");
            cfg.n_list.push_back(v.get<long>());
        }
    }
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        if (cfg.n_list[i] < 1) throw ConfigError("config: N_list entries must be positive");
        if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]) throw ConfigError("config: N_list must be strictly increasing");
    }

    cfg.grid_m = detail::get_or<int>(j, "grid_m", cfg.grid_m);
    if (cfg.grid_m < 2) throw ConfigError("config: 'grid_m' must be at least 2");
    cfg.quad_tol = detail::positive(j, "quad_tol", cfg.quad_tol);
    cfg.power_tol = detail::positive(j, "power_tol", cfg.power_tol);
    cfg.max_iter = detail::get_or<int>(j, "max_iter", cfg.max_iter);
    if (cfg.max_iter < 1) throw ConfigError("config: 'max_iter' must be positive");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_integer()) throw ConfigError("config: 'seed' must be an integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("rotation_theta")) cfg.rotation_theta = detail::get_or<double>(j, "rotation_theta", 0.0);
    if (!j.contains("output_path") || !j.at("output_path").is_string() || j.at("output_path").get<std::string>().empty())
        throw ConfigError("config: 'output_path' is required");
    cfg.output_path = j.at("output_path").get<std::string>();
    if (j.contains("final_gap_max")) cfg.final_gap_max = detail::positive(j, "final_gap_max", 1.0);
    cfg.repeats = detail::get_or<int>(j, "repeats", cfg.repeats);
    cfg.m_factor = detail::get_or<int>(j, "m_factor", cfg.m_factor);
    if (cfg.repeats < 1 || cfg.m_factor < 1) throw ConfigError("config: 'repeats' and 'm_factor' must be positive");

    if (j.contains("alpha_pairs")) {
        const auto& arr = j.at("alpha_pairs");
        if (!arr.is_array()) throw ConfigError("config: 'alpha_pairs' must be an array of [a1, a2]");
        for (const auto& p : arr) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                throw ConfigError("config: 'alpha_pairs' must be an array of [a1, a2]");
            const double a1 = p[0].get<double>(), a2 = p[1].get<double>();
            if (!Exponent(a1).in_eigen_range() || !Exponent(a2).in_eigen_range())
                throw ConfigError("config: alpha_pairs entries must lie in (0, 1/2)");
            cfg.alpha_pairs.emplace_back(a1, a2);
        }
    }

    switch (cfg.campaign) {
        case Campaign::convergence:
            if (!cfg.symbol1 || !cfg.symbol2) throw ConfigError("config: convergence needs symbol1 and symbol2");
            detail::require_eigen_exponents(*cfg.symbol1, "symbol1");
            detail::require_eigen_exponents(*cfg.symbol2, "symbol2");
            if (cfg.symbol1->dominant_or_throw().location != cfg.symbol2->dominant_or_throw().location)
                throw ConfigError("config: the dominant singularities of symbol1 and symbol2 must coincide");
            if (cfg.n_list.empty()) throw ConfigError("config: convergence needs a non-empty N_list");
            break;
        case Campaign::fourier:
            if (!cfg.symbol1) throw ConfigError("config: fourier needs symbol1");
            if (!cfg.symbol1->dominant()) throw ConfigError("config: symbol1 has no unique dominant singularity");
            if (cfg.n_list.empty()) throw ConfigError("config: fourier needs a non-empty N_list");
            break;
        case Campaign::widom:
            if (cfg.n_list.empty()) throw ConfigError("config: widom needs a non-empty N_list");
            break;
        case Campaign::bounds:
            if (cfg.alpha_pairs.empty()) throw ConfigError("config: bounds needs a non-empty 'alpha_pairs'");
            break;
        case Campaign::kernel_table:
            if (cfg.alpha_pairs.empty()) throw ConfigError("config: kernel-table needs a non-empty 'alpha_pairs'");
            if (cfg.n_list.empty()) throw ConfigError("config: kernel-table needs a non-empty N_list");
            for (long n : cfg.n_list)
                if (n < 2) throw ConfigError("config: kernel-table N values must be at least 2");
            break;
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------------------
// Output

using Cell = std::variant<long, double, std::string>;

inline std::string format_cell(const Cell& c) {
    if (const auto* i = std::get_if<long>(&c)) return std::to_string(*i);
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(c));
    return buf;
}

class RowSink {
public:
    virtual ~RowSink() = default;
    virtual void header(const std::vector<std::string>& columns) = 0;
    virtual void row(const std::vector<Cell>& cells) = 0;
};

/// Keeps rows in memory.
class MemorySink : public RowSink {
public:
    void header(const std::vector<std::string>& columns) override { columns_ = columns; }
    void row(const std::vector<Cell>& cells) override { rows_.push_back(cells); }
    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

/// CSV file, flushed after every row so a later failure leaves earlier rows intact.
class CsvSink : public RowSink {
public:
    explicit CsvSink(const std::string& path) {
        const auto parent = std::filesystem::path(path).parent_path();
        std::error_code ec;
        if (!parent.empty()) std::filesystem::create_directories(parent, ec);
        out_.open(path, std::ios::trunc);
        if (!out_) throw ConfigError("cannot open output file '" + path + "'");
    }
    void header(const std::vector<std::string>& columns) override { write(columns); }
    void row(const std::vector<Cell>& cells) override {
        std::vector<std::string> text;
        text.reserve(cells.size());
        for (const auto& c : cells) text.push_back(format_cell(c));
        write(text);
    }

private:
    void write(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
        out_ << '\n';
        out_.flush();
    }
    std::ofstream out_;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CampaignReport {
    std::vector<Check> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

namespace detail {

inline std::string fmt(double v) { return format_cell(Cell{v}); }

// Strictly decreasing sequence check; slack allows ties up to that absolute amount.
inline Check decreasing(const std::string& name, const std::vector<double>& v, double slack = 0.0) {
    Check c{name, true, ""};
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1] + slack)) {
            c.passed = false;
            c.detail = "entry " + std::to_string(i) + ": " + fmt(v[i]) + " >= " + fmt(v[i - 1]);
            return c;
        }
    }
    c.detail = std::to_string(v.size()) + " values";
    return c;
}

inline Check at_most(const std::string& name, double value, double bound) {
    return {name, value <= bound, fmt(value) + (value <= bound ? " <= " : " > ") + fmt(bound)};
}

// c(chi_d) * prod_{j != d} |chi_d - chi_j|^{-2 alpha_j} for the dominant singularity d.
inline double companion_amplitude(const SymbolSpec& s) {
    const auto d = *s.dominant();
    const double theta = s.singularities()[d].location.theta();
    double v = s.regular().evaluate(theta);
    for (std::size_t j = 0; j < s.singularities().size(); ++j) {
        if (j == d) continue;
        const auto& o = s.singularities()[j];
        v *= std::pow(chord(theta - o.location.theta()), -2.0 * o.exponent.value);
    }
    return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// convergence

struct ConvergenceRecord {
    long N = 0;
    double lambda_max = 0.0;
    double sigma_max = 0.0;
    double normalized_lambda = 0.0;
    double normalized_sigma = 0.0;
    double reference = 0.0;
    double rel_gap_lambda = 0.0;
    double rel_gap_sigma = 0.0;
    double eig_norm_gap = 0.0;
};

inline constexpr double eig_norm_slack = 1e-12;
inline constexpr double rotation_tolerance = 1e-8;
inline constexpr double default_convergence_gap = 0.10;

struct ConvergenceReport : CampaignReport {
    std::vector<ConvergenceRecord> records;
    double operator_norm = 0.0;
};

namespace detail {

struct SpectralPair {
    SpectralResult lambda;
    SpectralResult sigma;
};

inline SpectralPair product_spectrum(const SymbolSpec& s1, const SymbolSpec& s2, long n, const ExperimentConfig& cfg) {
    const auto t1 = build(s1, static_cast<int>(n), cfg.quad_tol);
    const auto t2 = build(s2, static_cast<int>(n), cfg.quad_tol);
    SpectralPair r{largest_eigenvalue_product(t1, t2, cfg.power_tol, cfg.max_iter, cfg.seed),
                   spectral_norm_product(t1, t2, cfg.power_tol, cfg.max_iter, cfg.seed)};
    if (!r.lambda.converged)
        throw ConvergenceError("power iteration for lambda_max did not converge at N = " + std::to_string(n),
                               r.lambda.residual);
    if (!r.sigma.converged)
        throw ConvergenceError("power iteration for sigma_max did not converge at N = " + std::to_string(n),
                               r.sigma.residual);
    return r;
}

}  // namespace detail

/// lambda_max and sigma_max of T_N(f1) T_N(f2) against the limit
/// N^{2 a_tot} C_{a1} C_{a2} c1 c2 (companions) ||K_{a1,a2}||.
inline ConvergenceReport run_convergence(const ExperimentConfig& cfg, RowSink& sink) {
    if (cfg.campaign != Campaign::convergence) throw ConfigError("run_convergence: campaign must be convergence");
    const SymbolSpec& s1 = *cfg.symbol1;
    const SymbolSpec& s2 = *cfg.symbol2;
    const Exponent a1 = s1.dominant_or_throw().exponent;
    const Exponent a2 = s2.dominant_or_throw().exponent;
    const double a_tot = a1.value + a2.value;

    ConvergenceReport report;
    const NormEstimate k = operator_norm(KernelParams(a1.value, a2.value), cfg.grid_m);
    if (!k.converged) throw ConvergenceError("operator norm power iteration did not converge", k.residual);
    report.operator_norm = k.value;
    const double reference = c_alpha(a1) * c_alpha(a2) * detail::companion_amplitude(s1) *
                             detail::companion_amplitude(s2) * k.value;

    std::vector<std::string> columns = {"N",
                                        "lambda_max",
                                        "sigma_max",
                                        "normalized_lambda",
                                        "normalized_sigma",
                                        "reference",
                                        "rel_gap_lambda",
                                        "rel_gap_sigma",
                                        "eig_norm_gap"};
    std::optional<SymbolSpec> r1, r2;
    if (cfg.rotation_theta) {
        columns.insert(columns.end(), {"normalized_lambda_rotated", "normalized_sigma_rotated"});
        r1 = s1.rotated(*cfg.rotation_theta);
        r2 = s2.rotated(*cfg.rotation_theta);
    }
    sink.header(columns);

    Check nonneg{"eig_norm_gap >= -1e-12 at every N", true, ""};
    Check rotation{"rotated normalized spectra agree to 1e-8", true, ""};
    double worst_rotation = 0.0;
    for (long n : cfg.n_list) {
        const auto sp = detail::product_spectrum(s1, s2, n, cfg);
        ConvergenceRecord rec;
        rec.N = n;
        rec.lambda_max = sp.lambda.value;
        rec.sigma_max = sp.sigma.value;
        const double scale = std::pow(static_cast<double>(n), 2.0 * a_tot);
        rec.normalized_lambda = rec.lambda_max / scale;
        rec.normalized_sigma = rec.sigma_max / scale;
        rec.reference = reference;
        rec.rel_gap_lambda = std::abs(rec.normalized_lambda - reference) / reference;
        rec.rel_gap_sigma = std::abs(rec.normalized_sigma - reference) / reference;
        rec.eig_norm_gap = (rec.sigma_max - rec.lambda_max) / rec.sigma_max;
        if (rec.eig_norm_gap < -eig_norm_slack) {
            nonneg.passed = false;
            nonneg.detail = "N = " + std::to_string(n) + ": " + detail::fmt(rec.eig_norm_gap);
        }
        std::vector<Cell> cells = {rec.N,
                                   rec.lambda_max,
                                   rec.sigma_max,
                                   rec.normalized_lambda,
                                   rec.normalized_sigma,
                                   rec.reference,
                                   rec.rel_gap_lambda,
                                   rec.rel_gap_sigma,
                                   rec.eig_norm_gap};
        if (r1) {
            const auto rp = detail::product_spectrum(*r1, *r2, n, cfg);
            const double nl = rp.lambda.value / scale, ns = rp.sigma.value / scale;
            const double diff = std::max(std::abs(nl - rec.normalized_lambda) / rec.normalized_lambda,
                                         std::abs(ns - rec.normalized_sigma) / rec.normalized_sigma);
            worst_rotation = std::max(worst_rotation, diff);
            if (diff > rotation_tolerance) rotation.passed = false;
            cells.insert(cells.end(), {nl, ns});
        }
        sink.row(cells);
        report.records.push_back(rec);
    }

    std::vector<double> gl, gs, ge;
    for (const auto& r : report.records) {
        gl.push_back(r.rel_gap_lambda);
        gs.push_back(r.rel_gap_sigma);
        ge.push_back(r.eig_norm_gap);
    }
    const double bound = cfg.final_gap_max.value_or(default_convergence_gap);
    report.checks.push_back(nonneg);
    report.checks.push_back(detail::decreasing("rel_gap_lambda strictly decreasing", gl));
    report.checks.push_back(detail::decreasing("rel_gap_sigma strictly decreasing", gs));
    report.checks.push_back(detail::decreasing("eig_norm_gap decreasing", ge, eig_norm_slack));
    report.checks.push_back(detail::at_most("final rel_gap_lambda", gl.back(), bound));
    report.checks.push_back(detail::at_most("final rel_gap_sigma", gs.back(), bound));
    if (r1) {
        rotation.detail = "max relative difference " + detail::fmt(worst_rotation);
        report.checks.push_back(rotation);
    }
    return report;
}

// ---------------------------------------------------------------------------
// bounds

inline constexpr int sandwich_grid = 101;

struct SandwichStats {
    int points = 0;
    int lower_pass = 0;
    int upper_pass = 0;
    int both_pass = 0;
    int integral_upper_pass = 0;
};

/// Kernel sandwich over the off-diagonal points of a g x g grid on [0,1]^2. The
/// upper side is counted for both printed forms of the constant.
inline SandwichStats kernel_sandwich(const KernelParams& p, int g = sandwich_grid) {
    const KernelEvaluator k(p);
    const double h_int = h_bound_integral(p.alpha1, p.alpha2);
    SandwichStats st;
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            if (i == j) continue;
            const double x = static_cast<double>(i) / (g - 1), y = static_cast<double>(j) / (g - 1);
            const KernelBounds b = kernel_bounds_check(k, x, y);
            ++st.points;
            const bool lo = b.lower * (1.0 - bounds_slack) <= b.value;
            const bool up = b.value <= b.upper * (1.0 + bounds_slack);
            st.lower_pass += lo;
            st.upper_pass += up;
            st.both_pass += b.ok;
            st.integral_upper_pass += b.value <= h_int * b.lower * (1.0 + bounds_slack);
        }
    }
    return st;
}

inline CampaignReport run_bounds(const ExperimentConfig& cfg, RowSink& sink) {
    if (cfg.campaign != Campaign::bounds) throw ConfigError("run_bounds: campaign must be bounds");
    sink.header({"alpha1", "alpha2", "h_bound", "h_integral", "gamma_lower", "gamma_upper", "gamma_estimate",
                 "gamma_inside", "sandwich_pass_rate", "lower_pass_rate", "upper_pass_rate", "upper_integral_pass_rate"});
    CampaignReport report;
    for (const auto& [a1, a2] : cfg.alpha_pairs) {
        const KernelParams p(a1, a2);
        const std::string tag = "(" + detail::fmt(a1) + ", " + detail::fmt(a2) + ")";
        const NormEstimate k = operator_norm(p, cfg.grid_m);
        if (!k.converged) throw ConvergenceError("operator norm did not converge for " + tag, k.residual);
        const double gamma = c_alpha(p.alpha1) * c_alpha(p.alpha2) * k.value;
        Cell lower = std::string("pole"), upper = std::string("pole"), inside = std::string("pole");
        if (p.total() < 0.5) {
            const GammaBounds gb = gamma_bounds(p);
            lower = gb.lower;
            upper = gb.upper;
            const bool ok = gb.lower <= gamma && gamma <= gb.upper;
            inside = std::string(ok ? "yes" : "no");
            report.checks.push_back({"gamma inside bounds " + tag, ok,
                                     detail::fmt(gb.lower) + " <= " + detail::fmt(gamma) + " <= " + detail::fmt(gb.upper)});
        }
        const SandwichStats st = kernel_sandwich(p);
        const double n = st.points;
        const double h_int = h_bound_integral(p.alpha1, p.alpha2);
        sink.row({a1, a2, h_bound(p.alpha1, p.alpha2), h_int, lower, upper, gamma, inside, st.both_pass / n,
                  st.lower_pass / n, st.upper_pass / n, st.integral_upper_pass / n});
        report.checks.push_back({"kernel sandwich 100% " + tag, st.both_pass == st.points,
                                 std::to_string(st.both_pass) + "/" + std::to_string(st.points) + " points"});
    }
    return report;
}

// ---------------------------------------------------------------------------
// fourier

inline constexpr double default_fourier_gap = 0.02;

inline CampaignReport run_fourier(const ExperimentConfig& cfg, RowSink& sink) {
    if (cfg.campaign != Campaign::fourier) throw ConfigError("run_fourier: campaign must be fourier");
    const SymbolSpec& s = *cfg.symbol1;
    sink.header({"n", "coefficient_re", "coefficient_im", "asymptotic_re", "asymptotic_im", "ratio_re", "ratio_im",
                 "abs_ratio_minus_1"});
    std::vector<double> gaps;
    for (long n : cfg.n_list) {
        const cplx q = fourier_coefficient(s, n, cfg.quad_tol);
        const cplx a = fourier_asymptotic(s, n);
        const cplx r = q / a;
        gaps.push_back(std::abs(r - 1.0));
        sink.row({n, q.real(), q.imag(), a.real(), a.imag(), r.real(), r.imag(), gaps.back()});
    }
    CampaignReport report;
    report.checks.push_back(detail::decreasing("|ratio - 1| strictly decreasing", gaps));
    report.checks.push_back(
        detail::at_most("final |ratio - 1|", gaps.back(), cfg.final_gap_max.value_or(default_fourier_gap)));
    return report;
}

// ---------------------------------------------------------------------------
// widom

inline constexpr double widom_tolerance = 1e-10;

/// Complex matrix with entries uniform in [-1, 1] + i[-1, 1].
inline Eigen::MatrixXcd random_matrix(long n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd a(n, n);
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i) {
            const double re = u(rng);
            a(i, j) = cplx(re, u(rng));
        }
    return a;
}

inline CampaignReport run_widom(const ExperimentConfig& cfg, RowSink& sink) {
    if (cfg.campaign != Campaign::widom) throw ConfigError("run_widom: campaign must be widom");
    sink.header({"N", "trial", "matrix_norm", "scaled_operator_norm", "gap"});
    std::mt19937_64 rng(cfg.seed);
    double worst = 0.0;
    for (long n : cfg.n_list) {
        for (int t = 0; t < cfg.repeats; ++t) {
            const WidomCheck w = widom_identity_check(random_matrix(n, rng), cfg.m_factor);
            worst = std::max(worst, w.gap);
            sink.row({n, static_cast<long>(t), w.matrix_norm, w.scaled_operator_norm, w.gap});
        }
    }
    CampaignReport report;
    report.checks.push_back(detail::at_most("all Widom gaps", worst, widom_tolerance));
    return report;
}

// ---------------------------------------------------------------------------
// kernel-table

inline CampaignReport run_kernel_table(const ExperimentConfig& cfg, RowSink& sink) {
    if (cfg.campaign != Campaign::kernel_table) throw ConfigError("run_kernel_table: campaign must be kernel-table");
    sink.header({"alpha1", "alpha2", "N", "sup_gap"});
    CampaignReport report;
    for (const auto& [a1, a2] : cfg.alpha_pairs) {
        const KernelParams p(a1, a2);
        std::vector<double> gaps;
        for (long n : cfg.n_list) {
            gaps.push_back(discretization_gap(p, n));
            sink.row({a1, a2, n, gaps.back()});
        }
        report.checks.push_back(
            detail::decreasing("sup |k_N - k| decreasing (" + detail::fmt(a1) + ", " + detail::fmt(a2) + ")", gaps));
    }
    return report;
}

// ---------------------------------------------------------------------------

inline CampaignReport run_campaign(const ExperimentConfig& cfg, RowSink& sink) {
    switch (cfg.campaign) {
        case Campaign::convergence: return run_convergence(cfg, sink);
        case Campaign::bounds: return run_bounds(cfg, sink);
        case Campaign::fourier: return run_fourier(cfg, sink);
        case Campaign::widom: return run_widom(cfg, sink);
        case Campaign::kernel_table: return run_kernel_table(cfg, sink);
    }
    throw ConfigError("unknown campaign");
}

inline json sidecar(const ExperimentConfig& cfg, const CampaignReport& report, double wall_seconds,
                    const std::string& status) {
    json checks = json::array();
    for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return {{"config", cfg.raw},
            {"campaign", to_string(cfg.campaign)},
            {"seed", cfg.seed},
            {"tolerances", {{"quad_tol", cfg.quad_tol}, {"power_tol", cfg.power_tol}, {"max_iter", cfg.max_iter}}},
            {"grid_m", cfg.grid_m},
            {"wall_time_seconds", wall_seconds},
            {"status", status},
            {"checks", checks}};
}

}  // namespace fhspec::experiments
