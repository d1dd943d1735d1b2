#pragma once
#include "leafwise/cubic_kit.hpp"
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace leafwise::cubic {

struct Check {
    std::string name;
    double lhs = 0, rhs = 0;
    std::string relation;  // "<", ">", "<=", ">=", "=="
    bool pass = false;
    double margin = 0;     // positive when the inequality holds
};

struct ConditionReport {
    std::string theorem;
    std::string case_name;
    std::vector<Check> checks;
    std::optional<std::pair<double, double>> phi_interval;      // unbounded ends are +-inf
    std::optional<std::pair<double, double>> lambda0_interval;  // envelope-level theorems
    std::string k2_grouping;

    bool all_pass() const;
    std::vector<std::string> failed() const;
    const Check& at(const std::string& name) const;
};

// AsPrinted reads the second K2 operand literally; Bracketed groups the psi3 squares
// under the 27 psi3^+ (psi2^+)^2 factor.
enum class K2Grouping { AsPrinted, Bracketed };
std::string to_string(K2Grouping g);
K2Grouping k2_grouping_from_string(const std::string& s);

struct FieldStats {
    double min = 0, max = 0, min_abs = 0, max_abs = 0;
    static FieldStats of(const ScalarField& f);
    static FieldStats of_constant(double c);
    bool all_positive() const { return min > 0; }
    bool all_negative() const { return max < 0; }
    bool all_zero() const { return min == 0 && max == 0; }
};

struct ConditionInputs {
    double lambda0 = 0;
    double delta_e0 = 1;
    std::optional<EnvelopeSet> envelopes;
    std::optional<std::array<FieldStats, 3>> psi;  // sampled Psi_1..3
    double delta_abs_psi3 = 1;                      // delta(|Psi_3|)
    std::optional<FieldStats> beta_top;
    std::optional<FieldStats> h_top_sq, t_bot_sq;
    int n = 1;
    K2Grouping k2 = K2Grouping::AsPrinted;
};

ConditionInputs make_inputs(double lambda0, const ScalarField& e0, const ScalarField& psi1, const ScalarField& psi2,
                            const ScalarField& psi3);

// theorem ids:
//   attractor_positive_cubic, attractor_positive_cubic_no_inverse_cube,
//   attractor_negative_cubic, attractor_negative_cubic_linear,
//   attractor_zero_cubic, attractor_zero_cubic_no_inverse_cube,
//   prescribe_positive_cubic, prescribe_negative_cubic, prescribe_zero_cubic,
//   prescribe_integrable_normal, prescribe_fibred, prescribe_fibred_integrable,
//   prescribe_indefinite_zero_cubic
ConditionReport check_conditions(const std::string& theorem_id, const ConditionInputs& in,
                                 const std::string& case_name = "");

std::vector<std::string> theorem_ids();
std::string default_theorem(RegimeTag regime, const EnvelopeSet& env);

nlohmann::json to_json(const ConditionReport& r);

// scalar pieces, exposed for hand-checkable arithmetic
double k1_constant(const std::array<FieldStats, 3>& psi);
double k2_constant(const std::array<FieldStats, 3>& psi, K2Grouping g);
double kbar_constant(const EnvelopeSet& env);
double kb_constant(const EnvelopeSet& env);

}  // namespace leafwise::cubic
