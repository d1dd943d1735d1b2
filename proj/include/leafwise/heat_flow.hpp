#pragma once
#include "leafwise/cubic_kit.hpp"
#include "leafwise/grid.hpp"
#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace leafwise::heat {

// Coefficients of  du/dt = Lap u + beta u + psi1/u - psi2/u^3 + psi3 u^3
struct ReactionFields {
    ScalarField beta, psi1, psi2, psi3;

    static ReactionFields constant(const TorusGrid& g, double beta, double psi1, double psi2, double psi3);
    const TorusGrid& grid() const { return beta.grid(); }
    void validate() const;

    Eigen::VectorXd reaction(const Eigen::VectorXd& u) const;
    // d/du of the reaction, pointwise
    Eigen::VectorXd reaction_derivative(const Eigen::VectorXd& u) const;
    // Lap u + reaction(u)
    Eigen::VectorXd residual(const Eigen::VectorXd& u) const;
};

enum class Scheme { Imex, Explicit };
std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct EvolutionConfig {
    double dt_initial = 1e-3;
    double t_end = 100;
    Scheme scheme = Scheme::Imex;
    int snapshot_stride = 1;          // used when snapshot_dt == 0
    double snapshot_dt = 0.05;        // steps land on multiples of this
    double positivity_floor = 1e-10;
    bool adaptive = true;
    double rtol = 1e-9, atol = 1e-11;
    double dt_max = 0.1;
    bool stop_on_convergence = true;
    bool stop_on_leaving_set = false;

    std::optional<ScalarField> limit;                    // for sup_dist
    std::optional<ScalarField> e0;                       // for the ratio columns
    std::optional<std::pair<double, double>> band;       // invariant set on u/e0
    std::function<void(double, const Eigen::VectorXd&)> observer;  // called at every snapshot
};

enum class Terminal { Converged, LeftInvariantSet, BlowUp, BlowDown, MaxTime };
std::string to_string(Terminal t);

struct EvolutionTrace {
    std::vector<double> times, sup_dist, min_ratio, max_ratio, dudt_norm;
    std::vector<bool> in_set;
    Terminal terminal = Terminal::MaxTime;
    double t_final = 0;
    long accepted = 0, rejected = 0;
    std::string diagnosis;

    bool all_in_set() const;
};

struct EvolutionResult {
    ScalarField u_final;
    EvolutionTrace trace;
};

EvolutionResult evolve(const ReactionFields& f, const ScalarField& u0, const EvolutionConfig& cfg);

void write_trace_csv(const std::string& path, const EvolutionTrace& tr);
nlohmann::json to_json(const EvolutionTrace& tr);

struct SandwichReport {
    bool holds = false;
    int violations = 0;
    double worst_margin = 0;   // min over snapshots of the slack to either barrier
    std::vector<double> lower, upper;
};

// Integrates y' = phi_-(y) from y2- - eps and y' = phi_+(y) from y2+ + eta and compares with u/e0.
SandwichReport sandwich_check(const EvolutionTrace& tr, const cubic::RootLadder& ladder, double lambda0,
                              const cubic::EnvelopeSet& env, double eps, double eta, double tol = 1e-7);

struct DecayFit {
    double rate = 0;
    double r_squared = 0;
    std::size_t used = 0;
};
DecayFit fit_decay_rate(const EvolutionTrace& tr, double floor = 1e-10);

// First snapshot time after which u/e0 stays inside [lo, hi].
std::optional<double> entry_time(const EvolutionTrace& tr, double lo, double hi);

struct DuhamelReport {
    double discrepancy = 0;      // stepped vs reconstructed, sup norm
    double kernel_min_entry = 0; // min of exp(t Lap_h)
    double row_sum_error = 0;    // ||exp(t Lap_h) 1 - 1||_inf
};

DuhamelReport verify_duhamel(const ReactionFields& f, const ScalarField& u0, double t, double dt = 1e-4);

}  // namespace leafwise::heat
