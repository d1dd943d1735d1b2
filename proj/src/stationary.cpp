#include "leafwise/stationary.hpp"
#include "leafwise/field_io.hpp"
#include "leafwise/spectral.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace leafwise::stationary {

namespace {

double sup(const Eigen::VectorXd& v) { return v.lpNorm<Eigen::Infinity>(); }

}  // namespace

StationarySolution solve_stationary(const heat::ReactionFields& f, const ScalarField& u_seed, const ScalarField& e0,
                                    const NewtonOptions& opt)
{
    f.validate();
    require_same_grid(f.beta, u_seed);
    require_same_grid(f.beta, e0);
    if (sup_norm(f.psi1) == 0 && sup_norm(f.psi2) == 0 && sup_norm(f.psi3) == 0)
        throw LinearCaseError("equation is linear (Psi1 = Psi2 = Psi3 = 0); a positive solution exists only when "
                              "0 is the least eigenvalue of H, and then u* = e0 up to scale: use the eigensolver");
    if (!(u_seed.values().minCoeff() > 0)) throw std::invalid_argument("Newton seed must be strictly positive");

    const TorusGrid& grid = f.grid();
    const Eigen::SparseMatrix<double> L = laplacian_matrix(grid);
    Eigen::VectorXd u = u_seed.values();
    Eigen::VectorXd G = f.residual(u);
    double r = sup(G);
    StationarySolution sol;
    sol.residual_history.push_back(r);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    int it = 0;
    for (; it < opt.max_iterations && r >= opt.tol; ++it) {
        Eigen::SparseMatrix<double> J = L;
        const Eigen::VectorXd d = f.reaction_derivative(u);
        for (Eigen::Index i = 0; i < d.size(); ++i) J.coeffRef(i, i) += d[i];
        J.makeCompressed();
        lu.compute(J);
        if (lu.info() != Eigen::Success) throw NewtonError("Jacobian singular (marginal instance?)");
        const Eigen::VectorXd step = lu.solve(-G);
        if (!step.allFinite()) throw NewtonError("Jacobian singular (marginal instance?)");
        double lam = 1;
        bool ok = false;
        for (int k = 0; k <= opt.max_halvings; ++k, lam *= 0.5) {
            const Eigen::VectorXd cand = u + lam * step;
            if (!(cand.minCoeff() > 0)) continue;
            const Eigen::VectorXd Gc = f.residual(cand);
            const double rc = sup(Gc);
            if (std::isfinite(rc) && rc < r) {
                u = cand;
                G = Gc;
                r = rc;
                ok = true;
                break;
            }
        }
        if (!ok) throw NewtonError("Newton diverged: no damped step decreased the residual (seed outside any basin?)");
        sol.residual_history.push_back(r);
    }
    if (!(r < opt.tol)) throw NewtonError("Newton did not reach the residual tolerance");
    sol.iterations = it;
    sol.u_star = u_seed.with_values(u);
    sol.elliptic_residual = r;
    const Eigen::ArrayXd w = u.array() / e0.values().array();
    sol.ratio_bounds = {w.minCoeff(), w.maxCoeff()};
    sol.linearization_gap = certify_stability(sol.u_star, f);
    return sol;
}

double certify_stability(const ScalarField& u_star, const heat::ReactionFields& f)
{
    const ScalarField pot = u_star.with_values(f.reaction_derivative(u_star.values()));
    spectral::GroundStateOptions o;
    o.tol = 1e-9;
    return spectral::ground_state(pot, o).lambda0;
}

double continuum_residual(const ScalarField& u, const heat::ReactionFields& f)
{
    return sup(spectral_laplacian(u).values() + f.reaction(u.values()));
}

std::pair<double, double> basin_u1(const cubic::RootLadder& l)
{
    const double cap = 3 * l.y2_plus();
    switch (l.regime) {
    case cubic::RegimeTag::A: return {l.y("y3-"), l.y("y1+")};
    case cubic::RegimeTag::B:
    case cubic::RegimeTag::C1: return {l.roots_minus.count("y1") ? l.y("y1-") : 0.0, cap};
    default: return {0.0, cap};
    }
}

ProbeReport uniqueness_probe(const heat::ReactionFields& f, const ScalarField& e0, const cubic::RootLadder& ladder,
                             const ProbeOptions& opt)
{
    if (opt.n_seeds < 1) throw std::invalid_argument("uniqueness probe needs at least one seed");
    const auto u1 = basin_u1(ladder);
    const bool open_top = ladder.regime != cubic::RegimeTag::A;
    const auto range = opt.ratio_range ? *opt.ratio_range : u1;
    const TorusGrid& grid = e0.grid();

    ProbeReport rep;
    rep.n_seeds = opt.n_seeds;
    rep.basin_lo = u1.first;
    rep.basin_hi = open_top ? std::numeric_limits<double>::infinity() : u1.second;
    rep.seeds.resize(opt.n_seeds);
    std::vector<std::optional<Eigen::VectorXd>> limits(opt.n_seeds);

    // all seeds drawn before the parallel section
    std::vector<ScalarField> seeds;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int s = 0; s < opt.n_seeds; ++s) {
        const double lo = range.first + 0.02 * (range.second - range.first);
        const double hi = range.second - 0.02 * (range.second - range.first);
        const double c = lo + (hi - lo) * U(rng);
        const double a = 0.5 * U(rng) * std::min(c - lo, hi - c);
        const int k0 = 1 + static_cast<int>(3 * U(rng));
        const int k1 = grid.dim > 1 ? static_cast<int>(3 * U(rng)) : 0;
        const double ph = 2 * M_PI * U(rng);
        const double w0 = 2 * M_PI / grid.periods[0];
        const double w1 = grid.dim > 1 ? 2 * M_PI / grid.periods[1] : 0.0;
        ScalarField w = ScalarField::sample(grid, [&](double x, double y) {
            return c + a * std::cos(k0 * w0 * x + k1 * w1 * y + ph);
        });
        auto [wl, wh] = min_max(w);
        rep.seeds[s].index = s;
        rep.seeds[s].seed_lo = wl;
        rep.seeds[s].seed_hi = wh;
        rep.seeds[s].in_basin = wl > u1.first && (open_top || wh < u1.second);
        seeds.push_back(w.with_values((w.values().array() * e0.values().array()).matrix()));
    }

    auto work = [&](int s) {
        heat::EvolutionConfig cfg = opt.evolution;
        cfg.observer = nullptr;
        cfg.limit.reset();
        cfg.band.reset();
        cfg.e0 = e0;
        cfg.stop_on_convergence = true;
        auto& out = rep.seeds[s];
        try {
            auto ev = heat::evolve(f, seeds[s], cfg);
            out.terminal = heat::to_string(ev.trace.terminal);
            if (ev.trace.terminal == heat::Terminal::Converged || ev.trace.terminal == heat::Terminal::MaxTime) {
                auto sol = solve_stationary(f, ev.u_final, e0);
                limits[s] = sol.u_star.values();
            }
        } catch (const std::exception& e) {
            out.terminal = std::string("error: ") + e.what();
        }
    };
    int nt = opt.threads > 0 ? opt.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    nt = std::min(nt, opt.n_seeds);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int i = 0; i < nt; ++i)
        pool.emplace_back([&] {
            for (int s; (s = next++) < opt.n_seeds;) work(s);
        });
    for (auto& t : pool) t.join();

    std::optional<Eigen::VectorXd> ref;
    for (int s = 0; s < opt.n_seeds; ++s) {
        auto& o = rep.seeds[s];
        if (!o.in_basin) {
            ++rep.out_of_basin;
            o.distance = limits[s] && ref ? sup(*limits[s] - *ref) : std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        if (!limits[s]) {
            ++rep.failed;
            o.distance = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        ++rep.converged;
        if (!ref) ref = limits[s];
        o.distance = sup(*limits[s] - *ref);
        for (int q = 0; q < s; ++q)
            if (rep.seeds[q].in_basin && limits[q]) rep.max_pairwise = std::max(rep.max_pairwise, sup(*limits[s] - *limits[q]));
    }
    rep.pass = rep.failed == 0 && rep.converged > 0 && rep.max_pairwise <= opt.tolerance;
    return rep;
}

nlohmann::json to_json(const StationarySolution& s, bool with_field)
{
    nlohmann::json j = {{"residual", s.elliptic_residual},
                        {"ratio_bounds", {s.ratio_bounds.first, s.ratio_bounds.second}},
                        {"gap", s.linearization_gap},
                        {"iterations", s.iterations},
                        {"residual_history", s.residual_history}};
    if (with_field) j["field"] = field_to_json(s.u_star);
    return j;
}

nlohmann::json to_json(const ProbeReport& r)
{
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& s : r.seeds)
        seeds.push_back({{"index", s.index},
                         {"seed_ratio", {s.seed_lo, s.seed_hi}},
                         {"terminal", s.terminal},
                         {"in_basin", s.in_basin},
                         {"distance", num(s.distance)}});
    return {{"n_seeds", r.n_seeds},     {"converged", r.converged}, {"out_of_basin", r.out_of_basin},
            {"failed", r.failed},       {"max_pairwise", r.max_pairwise},
            {"basin", {r.basin_lo, num(r.basin_hi)}}, {"pass", r.pass}, {"seeds", seeds}};
}

}  // namespace leafwise::stationary
