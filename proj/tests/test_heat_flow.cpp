#include <doctest.h>

#include "instances.hpp"
#include "leafwise/comparison_ode.hpp"
#include "leafwise/heat_flow.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

using namespace leafwise;
using namespace leafwise::heat;

namespace {

const TorusGrid kLine = TorusGrid::line(16, 2 * M_PI);

}  // namespace

TEST_CASE("configuration and input validation")
{
    auto f = ReactionFields::constant(kLine, -1, 4, 0, 0);
    EvolutionConfig cfg;
    CHECK_THROWS(evolve(f, ScalarField::constant(kLine, -1.0), cfg));
    cfg.t_end = -1;
    CHECK_THROWS(evolve(f, ScalarField::constant(kLine, 1.0), cfg));
    CHECK(scheme_from_string("explicit") == Scheme::Explicit);
    CHECK_THROWS(scheme_from_string("implicit"));
    auto bad = ReactionFields::constant(kLine, -1, 4, -0.1, 0);
    CHECK_THROWS(evolve(bad, ScalarField::constant(kLine, 1.0), EvolutionConfig{}));
}

TEST_CASE("constant data follows the comparison ODE")
{
    for (const auto& c : testkit::constant_cases()) {
        CAPTURE(c.name);
        CHECK(testkit::ode_discrepancy(c, 20) < 1e-6);
    }
}

TEST_CASE("explicit and IMEX schemes agree")
{
    auto c = testkit::constant_cases()[0];
    CHECK(testkit::ode_discrepancy(c, 5, Scheme::Explicit) < 1e-6);

    auto in = testkit::variable_instance(cubic::RegimeTag::C1, 32);
    auto u0 = in.spec.ground_state.with_values(1.2 * in.spec.ground_state.values());
    EvolutionConfig a, b;
    a.t_end = b.t_end = 3;
    a.stop_on_convergence = b.stop_on_convergence = false;
    a.rtol = 1e-11;
    b.scheme = Scheme::Explicit;
    auto ra = evolve(in.fields, u0, a);
    auto rb = evolve(in.fields, u0, b);
    CHECK((ra.u_final.values() - rb.u_final.values()).lpNorm<Eigen::Infinity>() < 1e-5);
}

TEST_CASE("regime A constant data converges to 1")
{
    auto f = ReactionFields::constant(kLine, -3.5, 3.5, 1, 1);
    EvolutionConfig cfg;
    cfg.limit = ScalarField::constant(kLine, 1.0);
    auto r = evolve(f, ScalarField::constant(kLine, 0.9), cfg);
    CHECK(r.trace.terminal == Terminal::Converged);
    CHECK((r.u_final.values().array() - 1).abs().maxCoeff() < 1e-9);
    auto fit = fit_decay_rate(r.trace);
    CHECK(std::abs(fit.rate - 1) < 0.1);

    auto down = evolve(f, ScalarField::constant(kLine, 0.6), EvolutionConfig{});
    CHECK(down.trace.terminal == Terminal::BlowDown);
    auto up = evolve(f, ScalarField::constant(kLine, 1.6), EvolutionConfig{});
    CHECK(up.trace.terminal == Terminal::BlowUp);
}

TEST_CASE("decay rate for the zero-cubic no-inverse-cube constant case")
{
    auto f = ReactionFields::constant(kLine, -1, 4, 0, 0);
    EvolutionConfig cfg;
    cfg.limit = ScalarField::constant(kLine, 2.0);
    auto r = evolve(f, ScalarField::constant(kLine, 1.0), cfg);
    REQUIRE(r.trace.terminal == Terminal::Converged);
    CHECK(std::abs(fit_decay_rate(r.trace).rate - 2) < 0.2);
    EvolutionTrace open = r.trace;
    open.terminal = Terminal::MaxTime;
    CHECK_THROWS(fit_decay_rate(open));
}

TEST_CASE("ground-state substitution collapses to a constant-coefficient limit")
{
    auto g = TorusGrid::line(64, 2 * M_PI);
    auto beta = ScalarField::sample(g, [](double x, double) { return std::cos(x) - 1; });
    auto sr = spectral::ground_state(beta, {1e-12});
    REQUIRE(sr.lambda0 > 0);
    const double c = 0.3;
    const Eigen::VectorXd e = sr.ground_state.values();
    ReactionFields f{beta, ScalarField(g, (c * e.array().square()).matrix()),
                     ScalarField::constant(g, 0), ScalarField::constant(g, 0)};
    EvolutionConfig cfg;
    cfg.t_end = 200;
    auto r = evolve(f, sr.ground_state.with_values(e * 1.7), cfg);
    CHECK(r.trace.terminal == Terminal::Converged);
    const double w = std::sqrt(c / sr.lambda0);
    CHECK((r.u_final.values() - w * e).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("sandwich between the envelope barriers")
{
    SUBCASE("constant coefficients: barriers coincide with the solution")
    {
        auto f = ReactionFields::constant(kLine, -1, 2, 0.5, 0);
        auto sr = spectral::ground_state(f.beta);
        // scale so that e0 = 1: envelopes are then the constants themselves
        const double e = sr.ground_state[0];
        ReactionFields fs{f.beta, f.psi1.with_values(f.psi1.values() * e * e),
                          f.psi2.with_values(f.psi2.values() * std::pow(e, 4)), f.psi3};
        auto env = cubic::envelope_coefficients(fs.psi1, fs.psi2, fs.psi3, sr.ground_state);
        auto ladder = cubic::root_ladder(cubic::RegimeTag::C1, sr.lambda0, env);
        EvolutionConfig cfg;
        cfg.e0 = sr.ground_state;
        cfg.t_end = 10;
        cfg.stop_on_convergence = false;
        const double eps = 0.1;
        auto r = evolve(fs, sr.ground_state.with_values(sr.ground_state.values() * (ladder.y2_minus() - eps)), cfg);
        auto rep = sandwich_check(r.trace, ladder, sr.lambda0, env, eps, 0.0);
        CHECK(rep.holds);
        for (std::size_t i = 0; i < rep.lower.size(); ++i) CHECK(std::abs(rep.lower[i] - r.trace.min_ratio[i]) < 1e-6);
    }
    SUBCASE("variable zero-cubic instance")
    {
        auto in = testkit::variable_instance(cubic::RegimeTag::C1, 64);
        REQUIRE(testkit::conditions(in).all_pass());
        const double eps = 0.5 * in.ladder.eps_max, eta = 0.3;
        EvolutionConfig cfg;
        cfg.e0 = in.spec.ground_state;
        cfg.t_end = 30;
        auto u0 = in.spec.ground_state.with_values(in.spec.ground_state.values() * (in.ladder.y2_plus() + eta));
        auto r = evolve(in.fields, u0, cfg);
        auto rep = sandwich_check(r.trace, in.ladder, in.spec.lambda0, in.env, eps, eta);
        CHECK(rep.violations == 0);
    }
    SUBCASE("initial data below the basin is refused")
    {
        auto in = testkit::variable_instance(cubic::RegimeTag::A, 32);
        EvolutionConfig cfg;
        cfg.e0 = in.spec.ground_state;
        cfg.t_end = 0.5;
        auto u0 = in.spec.ground_state.with_values(in.spec.ground_state.values() * 0.9 * in.ladder.y("y3-"));
        auto r = evolve(in.fields, u0, cfg);
        CHECK_THROWS_AS(sandwich_check(r.trace, in.ladder, in.spec.lambda0, in.env, 0.5 * in.ladder.eps_max, 0.1),
                        std::invalid_argument);
        auto wrong = in.ladder;
        wrong.regime = cubic::RegimeTag::B;
        CHECK_THROWS_AS(sandwich_check(r.trace, wrong, in.spec.lambda0, in.env, 0.0, 0.0), std::invalid_argument);
    }
}

TEST_CASE("invariant band, shrinking and order preservation on variable instances")
{
    std::mt19937_64 rng(53);
    for (auto tag : {cubic::RegimeTag::A, cubic::RegimeTag::B, cubic::RegimeTag::C1, cubic::RegimeTag::C3}) {
        auto in = testkit::variable_instance(tag, 32);
        CAPTURE(in.name);
        REQUIRE(testkit::conditions(in).all_pass());
        const double eps = 0.5 * in.ladder.eps_max;
        const double eta = std::isfinite(in.ladder.eta_max) ? 0.5 * in.ladder.eta_max : 0.5;
        const double lo = in.ladder.y2_minus() - eps, hi = in.ladder.y2_plus() + eta;
        const auto& e0 = in.spec.ground_state;
        for (int k = 0; k < 20; ++k) {
            EvolutionConfig cfg;
            cfg.e0 = e0;
            cfg.band = std::make_pair(lo, hi);
            cfg.t_end = 40;
            auto r = evolve(in.fields, testkit::random_band_field(e0, lo, hi, rng), cfg);
            CHECK(r.trace.all_in_set());
            CHECK(r.trace.terminal == Terminal::Converged);
            const double sig = 0.5 * in.ladder.sigma + 1e-9, tau = 0.5 * (in.ladder.tau > 0 ? in.ladder.tau : 0.1);
            CHECK(entry_time(r.trace, in.ladder.y2_minus() - sig, in.ladder.y2_plus() + tau).has_value());
        }
        for (int k = 0; k < 10; ++k) {
            auto a = testkit::random_band_field(e0, lo, hi, rng);
            std::uniform_real_distribution<double> U(0, 1);
            auto bump = testkit::random_band_field(e0, 0.0, 0.3 * eps, rng);
            auto b = a.with_values(a.values() + bump.values() + 1e-3 * U(rng) * e0.values());
            std::vector<Eigen::VectorXd> ua, ub;
            EvolutionConfig cfg;
            cfg.t_end = 10;
            cfg.snapshot_dt = 0.5;
            cfg.stop_on_convergence = false;
            cfg.adaptive = false;
            cfg.dt_initial = 0.01;
            cfg.observer = [&](double, const Eigen::VectorXd& u) { ua.push_back(u); };
            evolve(in.fields, a, cfg);
            cfg.observer = [&](double, const Eigen::VectorXd& u) { ub.push_back(u); };
            evolve(in.fields, b, cfg);
            REQUIRE(ua.size() == ub.size());
            for (std::size_t i = 0; i < ua.size(); ++i) CHECK((ub[i] - ua[i]).minCoeff() >= -1e-9);
        }
    }
}

TEST_CASE("Duhamel reconstruction and the discrete heat kernel")
{
    auto g = TorusGrid::line(128, 2 * M_PI);
    auto u0 = ScalarField::sample(g, [](double x, double) { return 1 + 0.3 * std::cos(x) + 0.1 * std::sin(3 * x); });
    auto zero = ReactionFields::constant(g, 0, 0, 0, 0);
    auto pure = verify_duhamel(zero, u0, 1.0, 1e-3);
    CHECK(pure.discrepancy < 1e-6);
    CHECK(pure.row_sum_error < 1e-10);
    CHECK(pure.kernel_min_entry > 0);

    auto f = ReactionFields::constant(g, -1, 2, 0.5, 0);
    auto rep = verify_duhamel(f, u0, 1.0, 1e-4);
    CHECK(rep.discrepancy < 1e-5);
    CHECK_THROWS(verify_duhamel(f, ScalarField::constant(TorusGrid::line(1024, 1.0), 1.0), 1.0));
}

TEST_CASE("trace output")
{
    auto f = ReactionFields::constant(kLine, -1, 4, 0, 0);
    EvolutionConfig cfg;
    cfg.t_end = 1;
    cfg.e0 = ScalarField::constant(kLine, 1.0);
    auto r = evolve(f, ScalarField::constant(kLine, 1.5), cfg);
    const std::string path = "test_trace.csv";
    write_trace_csv(path, r.trace);
    std::ifstream is(path);
    std::string header;
    std::getline(is, header);
    CHECK(header == "t,sup_dist,min_ratio,max_ratio,in_set");
    std::remove(path.c_str());
    auto j = to_json(r.trace);
    CHECK(j["terminal"] == "max_time");
    CHECK(r.trace.times.back() == doctest::Approx(1.0));
}
