#pragma once
#include "leafwise/grid.hpp"
#include "leafwise/polynomial.hpp"
#include <json.hpp>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace leafwise::cubic {

enum class RegimeTag { A, B, C1, C2, C3, Degenerate };

std::string to_string(RegimeTag r);
RegimeTag regime_from_string(const std::string& s);

// Tag for the scalar problem y' = P(y^2)/y^3, P(z) = psi3 z^3 + beta z^2 + psi1 z - psi2.
RegimeTag classify_regime(double beta, double psi1, double psi2, double psi3);
// Tag for sampled coefficients, using the sign pattern of psi3 and lambda0.
RegimeTag classify_fields(double lambda0, const ScalarField& psi1, const ScalarField& psi2, const ScalarField& psi3);

struct EnvelopeSet {
    std::array<double, 3> lo{};  // Psi_k^-
    std::array<double, 3> hi{};  // Psi_k^+

    double spread(int k) const { return hi[k] - lo[k]; }
    bool collapsed() const { return lo == hi; }
    static EnvelopeSet constant(double psi1, double psi2, double psi3);
};

EnvelopeSet envelope_coefficients(const ScalarField& psi1, const ScalarField& psi2, const ScalarField& psi3,
                                  const ScalarField& e0);

nlohmann::json to_json(const EnvelopeSet& e);

// Raised when an envelope function lacks the positive roots a regime needs.
class HypothesisError : public std::runtime_error {
public:
    HypothesisError(std::string failed, const std::string& what)
        : std::runtime_error(what), failed_(std::move(failed)) {}
    const std::string& failed() const { return failed_; }

private:
    std::string failed_;
};

struct LadderOptions {
    double sigma_fraction = 0.05;  // of the admissible sigma window
    double tau_fraction = 0.05;
};

struct RootLadder {
    RegimeTag regime = RegimeTag::Degenerate;
    std::string variant;  // "cubic", "no_inverse_cube", "linear_cube"
    std::map<std::string, double> roots_minus, roots_plus;
    std::vector<std::pair<std::string, double>> chain;
    bool ordering_verified = false;  // non-strict chain
    bool strict_ordering = false;
    bool degenerate = false;          // a tie inside a polynomial
    std::optional<double> mu_plus;
    double sigma = 0, tau = 0;
    double basin_lo = 0, basin_hi = 0;   // U_1 for u/e0
    double eps_max = 0, eta_max = 0;     // admissible windows around [y2-, y2+]

    double y(const std::string& name) const;  // "y2-" style lookup
    double y2_minus() const { return roots_minus.at("y2"); }
    double y2_plus() const { return roots_plus.at("y2"); }
};

RootLadder root_ladder(RegimeTag regime, double lambda0, const EnvelopeSet& env, const LadderOptions& opt = {});
nlohmann::json to_json(const RootLadder& l);

// Envelope functions and their y-derivatives, as used by the ladder and the barrier ODEs.
struct OdeCoefficients {
    double beta, psi1, psi2, psi3;
};
// lower / upper envelope right-hand sides phi_-, phi_+ written as y' = P(y^2)/y^3 coefficients
std::pair<OdeCoefficients, OdeCoefficients> envelope_odes(RegimeTag regime, double lambda0, const EnvelopeSet& env);

struct ResultantSweep {
    std::string name;
    Coeffs closed_form;   // leading-first in t
    Coeffs generic;
    double relative_error = 0;
    double min_value = 0;
    double argmin = 0;
    bool a3_criterion = false;
    std::string normalization;
};

class TranscriptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ResultantSweep resultant_sweep_R1(double lambda0, const EnvelopeSet& env);
ResultantSweep resultant_sweep_R2(double lambda0, const EnvelopeSet& env);
ResultantSweep resultant_sweep_R3(double lambda0, const EnvelopeSet& env);
nlohmann::json to_json(const ResultantSweep& s);

// Discriminant of theta3 z^3 - lambda0 z^2 + theta1 z - theta2 in the printed lambda0 form.
double envelope_discriminant(double lambda0, double theta1, double theta2, double theta3);

// Bounds on the lambda0-window for regime A from the trigonometric roots.
struct LambdaWindow {
    double floor = 0;    // mu2^+ + (Psi1^+)^2/(12 Psi2^-)
    double ceiling = 0;  // mu1^- + (Psi1^-)^2/(12 Psi2^+)
    double mu1_minus = 0, mu2_plus = 0;
};
LambdaWindow lambda_window(const EnvelopeSet& env);

}  // namespace leafwise::cubic
