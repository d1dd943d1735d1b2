#pragma once
// Shared regime instances for the heat-flow, stationary and acceptance suites.

#include "leafwise/comparison_ode.hpp"
#include "leafwise/conditions.hpp"
#include "leafwise/heat_flow.hpp"
#include "leafwise/spectral.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace testkit {

using namespace leafwise;

struct Instance {
    std::string name;
    cubic::RegimeTag regime;
    heat::ReactionFields fields;
    spectral::SpectralResult spec;
    cubic::EnvelopeSet env;
    cubic::RootLadder ladder;
    std::string theorem;
};

// Constant-coefficient reference values: limits of the factored constructions.
struct ConstantCase {
    std::string name;
    double beta, psi1, psi2, psi3;
    double y0, ystar;
};

inline std::vector<ConstantCase> constant_cases()
{
    return {{"A", -3.5, 3.5, 1, 1, 0.9, 1.0},
            {"B", 4.75, -2.75, 1, -1, 1.5, 2.0},
            {"C1", -1, 2, 0.5, 0, 1.2, std::sqrt((2 + std::sqrt(2.0)) / 2)},
            {"C3", -1, 4, 0, 0, 1.0, 2.0}};
}

// Regime A sits mid-window for s = 0.01.
// beta = 0.1 cos x - lambda_target + (lambda0 of 0.1 cos x), so lambda0 = lambda_target; Psi_k = c_k e0^{p_k} (1 + s sin x) with p = (2, 4, -2),
// so the envelope functions are c_k (1 -+ s) and the constants c_k place the collapsed roots.
inline Instance variable_instance(cubic::RegimeTag tag, int n = 64, double s = 0.01)
{
    const auto g = TorusGrid::line(n, 2 * M_PI);
    double target = 0, c1 = 0, c2 = 0, c3 = 0;
    std::string theorem;
    switch (tag) {
    case cubic::RegimeTag::A: target = 3.525; c1 = 3.5; c2 = 1; c3 = 1; theorem = "attractor_positive_cubic"; break;
    case cubic::RegimeTag::B: target = -2.5; c1 = -0.5; c2 = 0.2; c3 = -0.2; theorem = "attractor_negative_cubic"; break;
    case cubic::RegimeTag::C1: target = 1; c1 = 2; c2 = 0.5; c3 = 0; theorem = "attractor_zero_cubic"; break;
    default: target = 1; c1 = 4; c2 = 0; c3 = 0; theorem = "attractor_zero_cubic_no_inverse_cube"; break;
    }
    auto wobble = ScalarField::sample(g, [](double x, double) { return 0.1 * std::cos(x); });
    const double shift = spectral::ground_state(wobble, {1e-12}).lambda0;
    auto beta = wobble.with_values(wobble.values().array() - target + shift);
    auto sr = spectral::ground_state(beta, {1e-11});
    const Eigen::ArrayXd e = sr.ground_state.values().array();
    const Eigen::ArrayXd m = ScalarField::sample(g, [&](double x, double) { return 1 + s * std::sin(x); }).values().array();
    heat::ReactionFields f{beta, ScalarField(g, (c1 * e.square() * m).matrix()),
                           ScalarField(g, (c2 * e.square().square() * m).matrix()),
                           ScalarField(g, (c3 * e.square().inverse() * m).matrix())};
    Instance in{std::string(cubic::to_string(tag)), tag, f, sr, {}, {}, theorem};
    in.env = cubic::envelope_coefficients(f.psi1, f.psi2, f.psi3, sr.ground_state);
    in.ladder = cubic::root_ladder(tag, sr.lambda0, in.env);
    return in;
}

inline cubic::ConditionReport conditions(const Instance& in, const std::string& case_name = "uniqueness")
{
    auto inputs = cubic::make_inputs(in.spec.lambda0, in.spec.ground_state, in.fields.psi1, in.fields.psi2,
                                     in.fields.psi3);
    return cubic::check_conditions(in.theorem, inputs, case_name);
}

// max over snapshots of |u - y_ode| for constant data
inline double ode_discrepancy(const ConstantCase& c, double t_end, heat::Scheme scheme = heat::Scheme::Imex)
{
    const auto line = TorusGrid::line(16, 2 * M_PI);
    auto f = heat::ReactionFields::constant(line, c.beta, c.psi1, c.psi2, c.psi3);
    std::vector<double> times;
    std::vector<Eigen::VectorXd> us;
    heat::EvolutionConfig cfg;
    cfg.t_end = t_end;
    cfg.scheme = scheme;
    cfg.rtol = 1e-11;
    cfg.atol = 1e-13;
    cfg.snapshot_dt = 0.1;
    cfg.stop_on_convergence = false;
    cfg.observer = [&](double t, const Eigen::VectorXd& u) {
        times.push_back(t);
        us.push_back(u);
    };
    evolve(f, ScalarField::constant(line, c.y0), cfg);
    ode::IntegrateOptions o;
    o.rtol = 1e-12;
    o.atol = 1e-14;
    o.sample_times = times;
    auto run = ode::integrate({c.beta, c.psi1, c.psi2, c.psi3}, c.y0, t_end, o);
    if (run.values.size() != times.size()) return std::numeric_limits<double>::infinity();
    double worst = 0;
    for (std::size_t i = 0; i < times.size(); ++i)
        worst = std::max(worst, (us[i].array() - run.values[i]).abs().maxCoeff());
    return worst;
}

inline ScalarField random_band_field(const ScalarField& e0, double lo, double hi, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(0, 1);
    const double a = lo + (hi - lo) * U(rng), b = lo + (hi - lo) * U(rng);
    const double ph = 2 * M_PI * U(rng);
    const int k = 1 + static_cast<int>(3 * U(rng));
    auto w = ScalarField::sample(e0.grid(), [&](double x, double) {
        return 0.5 * (a + b) + 0.5 * (b - a) * std::cos(k * x + ph);
    });
    return e0.with_values((w.values().array() * e0.values().array()).matrix());
}

}  // namespace testkit
