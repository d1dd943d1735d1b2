#pragma once
#include "leafwise/conditions.hpp"
#include "leafwise/heat_flow.hpp"
#include "leafwise/spectral.hpp"
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace leafwise::scenario {

// Bad or inconsistent scenario input; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SpectralOperator { Full, TopOnly };  // -Lap - (beta_top + Phi) or -Lap - beta_top

struct Scenario {
    std::string name;
    TorusGrid grid;
    std::string source;  // "constants", "fields" or "geometry"
    ScalarField beta_top, phi, psi1, psi2, psi3;
    std::optional<cubic::FieldStats> h_top_sq, t_bot_sq;
    int n = 1;
    SpectralOperator spectral_operator = SpectralOperator::Full;
    std::optional<cubic::RegimeTag> expect_regime;
    std::optional<std::string> theorem;
    std::string case_name;
    cubic::K2Grouping k2 = cubic::K2Grouping::AsPrinted;
    heat::EvolutionConfig evolution;
    std::optional<double> initial_ratio;       // u0 = ratio * e0
    std::optional<ScalarField> initial_field;  // u0 given directly
    // neither: u0 = e0 (y2- - eps/2), inside the invariant band and off the attractor
    int probe_seeds = 0;
    double probe_tolerance = 1e-6;
    std::optional<unsigned long long> seed;
    std::string output;

    ScalarField beta() const;
};

Scenario parse(const nlohmann::json& j, const std::string& base_dir = ".");
// seed, when given, replaces the scenario's own
Scenario load(const std::string& path, std::optional<unsigned long long> seed = std::nullopt);

// constant, inline array, CSV path or {"constant": c, "terms": [{"fn": "cos", "amp": a, "k": [k0, k1]}]}
ScalarField field_from_spec(const nlohmann::json& spec, const TorusGrid& grid, const std::string& base_dir);

struct Certificate {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunOptions {
    int threads = 0;
    bool light = false;  // skip probe, decay fit and sandwich (sweep points)
};

struct RunResult {
    nlohmann::json report;
    std::vector<Certificate> certificates;
    int exit_code = 1;

    // kept for output files
    std::optional<spectral::SpectralResult> spec;
    std::optional<ScalarField> u_star;
    std::optional<heat::EvolutionTrace> trace;
    std::optional<std::pair<double, double>> y2;

    std::vector<std::string> failed() const;
};

RunResult run_pipeline(const Scenario& s, const RunOptions& opt = {});
void write_outputs(const Scenario& s, const RunResult& r, const std::string& dir);

// "Phi", "beta_shift", "psi1_scale", "psi2_scale", "psi3_scale"
Scenario with_parameter(const Scenario& s, const std::string& param, double value);

struct SweepOptions {
    std::string param;
    double from = 0, to = 0;
    int steps = 0;
    int threads = 0;
    std::string points_dir;  // per-point report.json, empty to skip
};

struct SweepRow {
    int index = 0;
    double value = 0;
    nlohmann::json row;
};

std::vector<SweepRow> sweep(const Scenario& s, const SweepOptions& opt);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace leafwise::scenario
