// fhspec run <config.json> | fhspec validate <config.json>
//
// Exit codes: 0 all checks passed, 1 usage or config error, 2 a check failed,
// 3 numerical non-convergence.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fhspec/experiments.hpp"

namespace ex = fhspec::experiments;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_assertion = 2;
constexpr int exit_nonconvergence = 3;

void write_sidecar(const ex::ExperimentConfig& cfg, const ex::CampaignReport& report, double seconds,
                   const std::string& status) {
    std::ofstream out(cfg.output_path + ".json", std::ios::trunc);
    out << ex::sidecar(cfg, report, seconds, status).dump(2) << '\n';
}

int run(const std::string& path) {
    ex::ExperimentConfig cfg;
    try {
        cfg = ex::load_config(path);
    } catch (const fhspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }

    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    ex::CampaignReport report;
    try {
        ex::CsvSink sink(cfg.output_path);
        report = ex::run_campaign(cfg, sink);
    } catch (const fhspec::ConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << " (achieved " << e.achieved_error() << ")\n";
        write_sidecar(cfg, report, elapsed(), "nonconvergence");
        return exit_nonconvergence;
    } catch (const fhspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        write_sidecar(cfg, report, elapsed(), "error");
        return exit_assertion;
    }

    for (const auto& c : report.checks)
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    const bool ok = report.all_passed();
    write_sidecar(cfg, report, elapsed(), ok ? "passed" : "failed");
    std::cout << "wrote " << cfg.output_path << '\n';
    return ok ? exit_ok : exit_assertion;
}

int validate(const std::string& path) {
    try {
        const auto cfg = ex::load_config(path);
        std::cout << "ok: " << ex::to_string(cfg.campaign) << " campaign, output " << cfg.output_path << '\n';
        return exit_ok;
    } catch (const fhspec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fisher-Hartwig Toeplitz spectral experiments"};
    app.require_subcommand(1);
    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run a campaign and write its CSV and JSON sidecar");
    run_cmd->add_option("config", config_path, "JSON config file")->required();
    auto* validate_cmd = app.add_subcommand("validate", "Check a config file without running it");
    validate_cmd->add_option("config", config_path, "JSON config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }
    if (run_cmd->parsed()) return run(config_path);
    return validate(config_path);
}
