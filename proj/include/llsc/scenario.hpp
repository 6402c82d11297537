#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>

#include "llsc/montecarlo.hpp"

namespace llsc::cli {

struct SweepSpec {
    double rho_min_db = 0.0;
    double rho_max_db = 50.0;
    double step_db = 5.0;
};

struct ScenarioConfig {
    std::string name;
    std::vector<BranchParams> branches; // expanded to one entry per branch
    double gamma_th_db = 10.0;
    ModulationParams modulation{};
    SweepSpec sweep{};
    mc::SimConfig sim{};
    std::set<Method> methods{Method::exact_h, Method::quadrature, Method::asymptotic,
                             Method::monte_carlo};
    std::set<std::string> metrics{"outage", "ber", "capacity"};
};

bool is_builtin(const std::string& name);
ScenarioConfig builtin_scenario(const std::string& name);

/// Resolves a built-in scenario name, otherwise reads and validates a flat
/// key = value config file. Parse errors carry the line number; validation
/// errors name the offending field.
ScenarioConfig load_config(const std::string& path_or_name);

/// Parses config text directly (exposed for tests).
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin);

struct SweepRow {
    double rho_db = 0.0;
    std::string metric; // outage | ber | capacity
    std::optional<double> exact_h, quadrature, asymptotic, mc_estimate, mc_stderr;
    double exact_err = 0.0;
    double quad_err = 0.0;
    double mc_sigma_floor = 0.0; // true sampling std error bound from quadrature
    double max_discrepancy = std::numeric_limits<double>::quiet_NaN();
    std::string note; // per-cell failure notes; the run continues
};

/// One row per (rho point x metric); cells for disabled methods stay empty.
std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg);

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& os);
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

struct ReportResult {
    bool pass = true;
    int failures = 0;
    std::string summary;
};

/// exact-vs-quadrature gaps checked against max(tolerance*|quad|, reported
/// numeric error estimates); Monte Carlo against 3 sigma with the sigma floor.
ReportResult consistency_report(const std::vector<SweepRow>& rows, double tolerance = 1e-4);

} // namespace llsc::cli
