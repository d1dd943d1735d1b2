#include <doctest.h>

#include "instances.hpp"
#include "leafwise/comparison_ode.hpp"
#include "leafwise/stationary.hpp"

#include <cmath>

using namespace leafwise;
using namespace leafwise::stationary;

namespace {

const TorusGrid kLine = TorusGrid::line(16, 2 * M_PI);

ScalarField ones(const TorusGrid& g) { return ScalarField::constant(g, 1.0); }

}  // namespace

TEST_CASE("constant regime A: Newton from 0.95")
{
    auto f = heat::ReactionFields::constant(kLine, -3.5, 3.5, 1, 1);
    auto s = solve_stationary(f, ScalarField::constant(kLine, 0.95), ones(kLine));
    CHECK((s.u_star.values().array() - 1).abs().maxCoeff() < 1e-12);
    CHECK(s.elliptic_residual < 1e-12);
    CHECK(std::abs(s.linearization_gap - 1) < 1e-8);
    CHECK(s.ratio_bounds.first == doctest::Approx(1.0));
    // quadratic terminal convergence: the last productive step squares the residual roughly
    REQUIRE(s.residual_history.size() >= 3);
    const auto& h = s.residual_history;
    CHECK(h[h.size() - 1] < h[h.size() - 2] * h[h.size() - 2] * 100 + 1e-14);
}

TEST_CASE("constant zero-cubic instance: Newton from 1.2")
{
    auto f = heat::ReactionFields::constant(kLine, -1, 2, 0.5, 0);
    auto s = solve_stationary(f, ScalarField::constant(kLine, 1.2), ones(kLine));
    CHECK((s.u_star.values().array() - std::sqrt((2 + std::sqrt(2.0)) / 2)).abs().maxCoeff() < 1e-12);
    CHECK(s.linearization_gap > 0);
}

TEST_CASE("linear equation is refused")
{
    auto f = heat::ReactionFields::constant(kLine, -1, 0, 0, 0);
    CHECK_THROWS_AS(solve_stationary(f, ones(kLine), ones(kLine)), LinearCaseError);
    auto g = heat::ReactionFields::constant(kLine, -1, 4, 0, 0);
    CHECK_THROWS_AS(solve_stationary(g, ScalarField::constant(kLine, -1.0), ones(kLine)), std::invalid_argument);
}

TEST_CASE("linearization gap")
{
    auto c3 = heat::ReactionFields::constant(kLine, -1, 4, 0, 0);
    CHECK(std::abs(certify_stability(ScalarField::constant(kLine, 2.0), c3) - 2) < 1e-9);
    auto a = heat::ReactionFields::constant(kLine, -3.5, 3.5, 1, 1);
    CHECK(std::abs(certify_stability(ones(kLine), a) - 1) < 1e-9);
    const double r2 = std::sqrt(2.0);
    const double g = certify_stability(ScalarField::constant(kLine, r2), a);
    CHECK(g < 0);
    CHECK(std::abs(g + std::abs(ode::rhs_derivative(ode::from_lambda0(3.5, 3.5, 1, 1), r2))) < 1e-8);
    auto s = solve_stationary(a, ScalarField::constant(kLine, 1.45), ones(kLine));
    CHECK(std::abs(s.u_star[0] - r2) < 1e-10);
    CHECK(s.linearization_gap < 0);
}

TEST_CASE("uniqueness probe: constant zero-cubic instance")
{
    auto f = heat::ReactionFields::constant(kLine, -1, 2, 0.5, 0);
    auto ladder = cubic::root_ladder(cubic::RegimeTag::C1, 1.0, cubic::EnvelopeSet::constant(2, 0.5, 0));
    ProbeOptions o;
    o.n_seeds = 10;
    o.seed = 7;
    o.threads = 2;
    auto rep = uniqueness_probe(f, ones(kLine), ladder, o);
    CHECK(rep.pass);
    CHECK(rep.converged == 10);
    CHECK(rep.max_pairwise < 1e-8);
    CHECK(rep.basin_lo == doctest::Approx(ladder.y("y1-")));
}

TEST_CASE("uniqueness probe: seeds below y3 are out of basin, not a uniqueness failure")
{
    auto f = heat::ReactionFields::constant(kLine, -3.5, 3.5, 1, 1);
    auto ladder = cubic::root_ladder(cubic::RegimeTag::A, 3.5, cubic::EnvelopeSet::constant(3.5, 1, 1));
    ProbeOptions o;
    o.n_seeds = 12;
    o.seed = 3;
    o.ratio_range = std::make_pair(0.45, 1.3);
    auto rep = uniqueness_probe(f, ones(kLine), ladder, o);
    CHECK(rep.out_of_basin > 0);
    CHECK(rep.failed == 0);
    CHECK(rep.pass);
    for (const auto& s : rep.seeds)
        if (s.seed_hi < std::sqrt(0.5)) CHECK(s.terminal == "blow_down");
}

TEST_CASE("variable zero-cubic instance: flow, Newton and probe agree")
{
    auto in = testkit::variable_instance(cubic::RegimeTag::C1, 64);
    REQUIRE(testkit::conditions(in).all_pass());
    const auto& e0 = in.spec.ground_state;
    const double mid = 0.5 * (in.ladder.y2_minus() + in.ladder.y2_plus());
    heat::EvolutionConfig cfg;
    cfg.t_end = 200;
    auto flow = heat::evolve(in.fields, e0.with_values(mid * e0.values()), cfg);
    REQUIRE(flow.trace.terminal == heat::Terminal::Converged);
    auto s = solve_stationary(in.fields, flow.u_final, e0);
    CHECK(s.elliptic_residual < 1e-9);
    CHECK((s.u_star.values() - flow.u_final.values()).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK(s.ratio_bounds.first >= in.ladder.y2_minus());
    CHECK(s.ratio_bounds.second <= in.ladder.y2_plus());
    CHECK(s.linearization_gap > 0);

    ProbeOptions o;
    o.n_seeds = 10;
    o.seed = 11;
    auto rep = uniqueness_probe(in.fields, e0, in.ladder, o);
    CHECK(rep.pass);
    CHECK(rep.max_pairwise <= 1e-6);
    auto j = to_json(rep);
    CHECK(j["seeds"].size() == 10);
}

TEST_CASE("decay rate matches the linearization gap on constant instances")
{
    for (const auto& c : testkit::constant_cases()) {
        CAPTURE(c.name);
        auto f = heat::ReactionFields::constant(kLine, c.beta, c.psi1, c.psi2, c.psi3);
        auto s = solve_stationary(f, ScalarField::constant(kLine, c.y0), ones(kLine));
        heat::EvolutionConfig cfg;
        cfg.limit = s.u_star;
        auto flow = heat::evolve(f, ScalarField::constant(kLine, c.y0), cfg);
        REQUIRE(flow.trace.terminal == heat::Terminal::Converged);
        const double rate = heat::fit_decay_rate(flow.trace).rate;
        CHECK(std::abs(rate - s.linearization_gap) < 0.15 * s.linearization_gap);
    }
}

TEST_CASE("continuum residual shrinks at second order under refinement")
{
    auto residual_at = [](int n) {
        auto in = testkit::variable_instance(cubic::RegimeTag::C1, n);
        const auto& e0 = in.spec.ground_state;
        const double mid = 0.5 * (in.ladder.y2_minus() + in.ladder.y2_plus());
        auto s = solve_stationary(in.fields, e0.with_values(mid * e0.values()), e0);
        return continuum_residual(s.u_star, in.fields);
    };
    const double r32 = residual_at(32), r64 = residual_at(64), r128 = residual_at(128);
    CHECK(r32 / r64 >= 3.5);
    CHECK(r32 / r64 <= 4.5);
    CHECK(r64 / r128 >= 3.5);
    CHECK(r64 / r128 <= 4.5);
}

TEST_CASE("solution json")
{
    auto f = heat::ReactionFields::constant(kLine, -1, 4, 0, 0);
    auto s = solve_stationary(f, ones(kLine), ones(kLine));
    auto j = to_json(s, true);
    CHECK(j.contains("residual"));
    CHECK(j.contains("ratio_bounds"));
    CHECK(j.contains("gap"));
    CHECK(j["field"]["values"].size() == kLine.size());
}
