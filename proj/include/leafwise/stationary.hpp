#pragma once
#include "leafwise/cubic_kit.hpp"
#include "leafwise/heat_flow.hpp"
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace leafwise::stationary {

struct StationarySolution {
    ScalarField u_star;
    double elliptic_residual = 0;                 // sup norm
    std::pair<double, double> ratio_bounds{0, 0}; // min, max of u*/e0
    double linearization_gap = 0;
    int iterations = 0;
    std::vector<double> residual_history;
};

struct NewtonOptions {
    double tol = 1e-10;
    int max_iterations = 60;
    int max_halvings = 30;
};

class NewtonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when Psi_1 = Psi_2 = Psi_3 = 0: the equation is the eigenproblem H u = 0.
class LinearCaseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

StationarySolution solve_stationary(const heat::ReactionFields& f, const ScalarField& u_seed, const ScalarField& e0,
                                    const NewtonOptions& opt = {});

// Least eigenvalue of -Lap - d/du[beta u + psi1/u - psi2/u^3 + psi3 u^3](u*)
double certify_stability(const ScalarField& u_star, const heat::ReactionFields& f);

// Residual with the Fourier Laplacian in place of the stencil
double continuum_residual(const ScalarField& u, const heat::ReactionFields& f);

struct SeedOutcome {
    int index = 0;
    double seed_lo = 0, seed_hi = 0;   // range of seed/e0
    std::string terminal;
    bool in_basin = true;
    double distance = 0;               // to the reference solution
};

struct ProbeReport {
    int n_seeds = 0;
    int converged = 0;
    int out_of_basin = 0;
    int failed = 0;                    // inside U_1 but did not reach the reference
    double max_pairwise = 0;
    double basin_lo = 0, basin_hi = 0;
    bool pass = false;
    std::vector<SeedOutcome> seeds;
};

struct ProbeOptions {
    int n_seeds = 10;
    unsigned long long seed = 1;
    double tolerance = 1e-6;
    int threads = 0;                           // 0: hardware concurrency
    std::optional<std::pair<double, double>> ratio_range;  // overrides U_1
    heat::EvolutionConfig evolution;
};

// U_1 on u/e0 for the ladder's regime; capped at 3 y2+ when unbounded above.
std::pair<double, double> basin_u1(const cubic::RootLadder& ladder);

ProbeReport uniqueness_probe(const heat::ReactionFields& f, const ScalarField& e0, const cubic::RootLadder& ladder,
                             const ProbeOptions& opt);

nlohmann::json to_json(const StationarySolution& s, bool with_field = false);
nlohmann::json to_json(const ProbeReport& r);

}  // namespace leafwise::stationary
