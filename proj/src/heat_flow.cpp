#include "leafwise/heat_flow.hpp"
#include "leafwise/comparison_ode.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace leafwise::heat {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ARK3(2)4L[2]SA, Kennedy & Carpenter
constexpr double g = 1767732205903.0 / 4055673282236.0;
constexpr double AE[4][4] = {
    {0, 0, 0, 0},
    {2 * g, 0, 0, 0},
    {5535828885825.0 / 10492691773637.0, 788022342437.0 / 10882634858940.0, 0, 0},
    {6485989280629.0 / 16251701735622.0, -4246266847089.0 / 9704473918619.0, 10755448449292.0 / 10357097424841.0, 0}};
constexpr double B[4] = {1471266399579.0 / 7840856788654.0, -4482444167858.0 / 7529755066697.0,
                         11266239266428.0 / 11593286722821.0, g};
constexpr double AI[4][4] = {{0, 0, 0, 0},
                             {g, g, 0, 0},
                             {2746238789719.0 / 10658868560708.0, -640167445237.0 / 6845629431997.0, g, 0},
                             {B[0], B[1], B[2], g}};
constexpr double BH[4] = {2756255671327.0 / 12835298489170.0, -10771552573575.0 / 22201958757719.0,
                          9247589265047.0 / 10645013368117.0, 2193209047091.0 / 5459859503100.0};
}  // namespace

ReactionFields ReactionFields::constant(const TorusGrid& gr, double beta, double psi1, double psi2, double psi3)
{
    return {ScalarField::constant(gr, beta), ScalarField::constant(gr, psi1), ScalarField::constant(gr, psi2),
            ScalarField::constant(gr, psi3)};
}

void ReactionFields::validate() const
{
    require_same_grid(beta, psi1);
    require_same_grid(beta, psi2);
    require_same_grid(beta, psi3);
    if (psi2.values().minCoeff() < 0)
        throw std::invalid_argument("Psi2 >= 0 is required everywhere (min Psi2 = " + std::to_string(psi2.values().minCoeff()) + ")");
}

Eigen::VectorXd ReactionFields::reaction(const Eigen::VectorXd& u) const
{
    const Eigen::ArrayXd a = u.array();
    const Eigen::ArrayXd inv = a.inverse();
    return (beta.values().array() * a + psi1.values().array() * inv - psi2.values().array() * inv.cube() +
            psi3.values().array() * a.cube())
        .matrix();
}

Eigen::VectorXd ReactionFields::reaction_derivative(const Eigen::VectorXd& u) const
{
    const Eigen::ArrayXd a = u.array();
    const Eigen::ArrayXd inv2 = a.inverse().square();
    return (beta.values().array() - psi1.values().array() * inv2 + 3 * psi2.values().array() * inv2.square() +
            3 * psi3.values().array() * a.square())
        .matrix();
}

Eigen::VectorXd ReactionFields::residual(const Eigen::VectorXd& u) const
{
    return laplacian_values(grid(), u) + reaction(u);
}

std::string to_string(Scheme s) { return s == Scheme::Imex ? "imex" : "explicit"; }

Scheme scheme_from_string(const std::string& s)
{
    if (s == "imex") return Scheme::Imex;
    if (s == "explicit") return Scheme::Explicit;
    throw std::invalid_argument("scheme must be imex or explicit");
}

std::string to_string(Terminal t)
{
    switch (t) {
    case Terminal::Converged: return "converged";
    case Terminal::LeftInvariantSet: return "left_invariant_set";
    case Terminal::BlowUp: return "blow_up";
    case Terminal::BlowDown: return "blow_down";
    default: return "max_time";
    }
}

bool EvolutionTrace::all_in_set() const
{
    return std::all_of(in_set.begin(), in_set.end(), [](bool b) { return b; });
}

namespace {

struct StepOut {
    bool ok = false;
    Eigen::VectorXd u;
    double err = 0;   // scaled, <= 1 accepted
};

class Stepper {
public:
    Stepper(const ReactionFields& f, const EvolutionConfig& cfg)
        : f_(f), cfg_(cfg), symbol_(laplacian_symbol(f.grid()))
    {
    }

    StepOut imex(const Eigen::VectorXd& u, double dt)
    {
        if (dt != cached_dt_) {
            mult_ = (1.0 - g * dt * symbol_.array()).inverse().matrix();
            cached_dt_ = dt;
        }
        Eigen::VectorXd R[4], L[4], U[4];
        U[0] = u;
        R[0] = f_.reaction(u);
        L[0] = laplacian_values(f_.grid(), u);
        for (int i = 1; i < 4; ++i) {
            Eigen::VectorXd rhs = u;
            for (int j = 0; j < i; ++j) rhs += dt * (AE[i][j] * R[j] + AI[i][j] * L[j]);
            U[i] = apply_fourier_multiplier(f_.grid(), rhs, mult_);
            if (!admissible(U[i])) return {};
            R[i] = f_.reaction(U[i]);
            L[i] = laplacian_values(f_.grid(), U[i]);
        }
        StepOut out;
        out.u = u;
        Eigen::VectorXd uh = u;
        for (int i = 0; i < 4; ++i) {
            out.u += dt * B[i] * (R[i] + L[i]);
            uh += dt * BH[i] * (R[i] + L[i]);
        }
        if (!admissible(out.u)) return {};
        const Eigen::ArrayXd sc = cfg_.atol + cfg_.rtol * out.u.array().abs().max(u.array().abs());
        out.err = ((out.u - uh).array().abs() / sc).maxCoeff();
        out.ok = true;
        return out;
    }

    StepOut rk4(const Eigen::VectorXd& u, double dt)
    {
        auto F = [&](const Eigen::VectorXd& v) { return f_.residual(v); };
        Eigen::VectorXd k1 = F(u);
        Eigen::VectorXd s = u + 0.5 * dt * k1;
        if (!admissible(s)) return {};
        Eigen::VectorXd k2 = F(s);
        s = u + 0.5 * dt * k2;
        if (!admissible(s)) return {};
        Eigen::VectorXd k3 = F(s);
        s = u + dt * k3;
        if (!admissible(s)) return {};
        Eigen::VectorXd k4 = F(s);
        StepOut out;
        out.u = u + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        out.ok = admissible(out.u);
        return out;
    }

private:
    bool admissible(const Eigen::VectorXd& v) const
    {
        return v.allFinite() && v.minCoeff() > cfg_.positivity_floor;
    }

    const ReactionFields& f_;
    const EvolutionConfig& cfg_;
    Eigen::VectorXd symbol_, mult_;
    double cached_dt_ = -1;
};

}  // namespace

EvolutionResult evolve(const ReactionFields& f, const ScalarField& u0, const EvolutionConfig& cfg)
{
    f.validate();
    require_same_grid(f.beta, u0);
    if (!(u0.values().minCoeff() > 0)) throw std::invalid_argument("initial data must be strictly positive");
    if (!(cfg.dt_initial > 0) || !(cfg.t_end > 0)) throw std::invalid_argument("dt_initial and t_end must be positive");
    if (cfg.limit) require_same_grid(*cfg.limit, u0);
    if (cfg.e0) require_same_grid(*cfg.e0, u0);

    const TorusGrid& grid = u0.grid();
    EvolutionTrace tr;
    Eigen::VectorXd u = u0.values();
    Eigen::VectorXd last_snap;
    Eigen::ArrayXd inv_e0;
    if (cfg.e0) inv_e0 = cfg.e0->values().array().inverse();

    bool converged = false;
    bool left = false;
    auto snapshot = [&](double t) {
        const Eigen::VectorXd r = f.residual(u);
        if (!r.allFinite()) throw std::runtime_error("NaN detected in the evolution at t=" + std::to_string(t));
        tr.times.push_back(t);
        tr.dudt_norm.push_back(r.lpNorm<Eigen::Infinity>());
        tr.sup_dist.push_back(cfg.limit ? (u - cfg.limit->values()).lpNorm<Eigen::Infinity>() : kNaN);
        double lo = kNaN, hi = kNaN;
        if (cfg.e0) {
            const Eigen::ArrayXd w = u.array() * inv_e0;
            lo = w.minCoeff();
            hi = w.maxCoeff();
        }
        tr.min_ratio.push_back(lo);
        tr.max_ratio.push_back(hi);
        bool inside = true;
        if (cfg.band && cfg.e0) {
            const double slack = 1e-12 * std::max(1.0, std::abs(cfg.band->second));
            inside = lo >= cfg.band->first - slack && hi <= cfg.band->second + slack;
        }
        tr.in_set.push_back(inside);
        if (!inside) left = true;
        if (cfg.observer) cfg.observer(t, u);
        if (last_snap.size() > 0 && tr.dudt_norm.back() < 1e-10 &&
            (u - last_snap).lpNorm<Eigen::Infinity>() < 1e-11)
            converged = true;
        last_snap = u;
    };

    Stepper st(f, cfg);
    double t = 0;
    double dt = cfg.dt_initial;
    if (cfg.scheme == Scheme::Explicit) {
        const double cfl = std::pow(grid.min_spacing(), 2) / (2 * grid.dim);
        dt = std::min(dt, cfl);
    }
    long k_snap = 0;
    long since_snap = 0;
    snapshot(0);
    auto stop = [&](Terminal term, std::string why) {
        tr.terminal = term;
        tr.t_final = t;
        tr.diagnosis = std::move(why);
    };
    tr.terminal = Terminal::MaxTime;
    bool done = false;
    while (!done) {
        if (t >= cfg.t_end) {
            stop(converged ? Terminal::Converged : Terminal::MaxTime, "reached t_end");
            break;
        }
        double target = cfg.t_end;
        if (cfg.snapshot_dt > 0) target = std::min(target, (k_snap + 1) * cfg.snapshot_dt);
        double h = std::min(dt, target - t);
        if (cfg.scheme == Scheme::Imex && cfg.adaptive) h = std::min(h, cfg.dt_max);
        const bool lands = h >= target - t;
        StepOut s = cfg.scheme == Scheme::Imex ? st.imex(u, h) : st.rk4(u, h);
        if (!s.ok || (cfg.adaptive && cfg.scheme == Scheme::Imex && s.err > 1)) {
            ++tr.rejected;
            if (!(cfg.adaptive && cfg.scheme == Scheme::Imex) || h < 1e-12) {
                const double umax = u.maxCoeff();
                if (umax > 1e3) stop(Terminal::BlowUp, "solution escaping to infinity");
                else stop(Terminal::BlowDown, "positivity lost (min u below the floor)");
                break;
            }
            dt = s.ok ? h * std::max(0.2, 0.9 * std::pow(s.err, -1.0 / 3)) : 0.25 * h;
            continue;
        }
        ++tr.accepted;
        u = s.u;
        t = lands ? target : t + h;
        if (cfg.scheme == Scheme::Imex && cfg.adaptive) {
            const double next = h * std::min(4.0, s.err > 0 ? 0.9 * std::pow(s.err, -1.0 / 3) : 4.0);
            dt = lands && h < dt ? std::max(dt, next) : next;
        }
        if (u.maxCoeff() > 1e6) {
            snapshot(t);
            stop(Terminal::BlowUp, "max u above 1e6");
            break;
        }
        bool snap = false;
        if (cfg.snapshot_dt > 0) {
            snap = lands;
            if (lands && target == (k_snap + 1) * cfg.snapshot_dt) ++k_snap;
        } else if (++since_snap >= std::max(1, cfg.snapshot_stride) || t >= cfg.t_end) {
            snap = true;
            since_snap = 0;
        }
        if (snap) {
            snapshot(t);
            if (left && cfg.stop_on_leaving_set) {
                stop(Terminal::LeftInvariantSet, "u/e0 left the invariant band");
                done = true;
            } else if (converged && cfg.stop_on_convergence) {
                stop(Terminal::Converged, "time derivative below 1e-10");
                done = true;
            }
        }
    }
    if (tr.times.empty() || tr.times.back() != t) snapshot(t);
    if (tr.terminal == Terminal::MaxTime && converged) tr.terminal = Terminal::Converged;
    tr.t_final = t;
    return {u0.with_values(u), tr};
}

void write_trace_csv(const std::string& path, const EvolutionTrace& tr)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "t,sup_dist,min_ratio,max_ratio,in_set\n" << std::setprecision(17);
    for (std::size_t i = 0; i < tr.times.size(); ++i)
        os << tr.times[i] << ',' << tr.sup_dist[i] << ',' << tr.min_ratio[i] << ',' << tr.max_ratio[i] << ','
           << (tr.in_set[i] ? 1 : 0) << '\n';
}

nlohmann::json to_json(const EvolutionTrace& tr)
{
    return {{"terminal", to_string(tr.terminal)},
            {"t_final", tr.t_final},
            {"snapshots", tr.times.size()},
            {"accepted", tr.accepted},
            {"rejected", tr.rejected},
            {"all_in_set", tr.all_in_set()},
            {"diagnosis", tr.diagnosis}};
}

SandwichReport sandwich_check(const EvolutionTrace& tr, const cubic::RootLadder& ladder, double lambda0,
                              const cubic::EnvelopeSet& env, double eps, double eta, double tol)
{
    if (tr.times.empty() || std::isnan(tr.min_ratio.front()))
        throw std::invalid_argument("sandwich check needs a trace with u/e0 ratios");
    auto [lower, upper] = cubic::envelope_odes(ladder.regime, lambda0, env);
    const double y2m = ladder.y2_minus(), y2p = ladder.y2_plus();
    if (std::abs(ode::rhs(lower, y2m)) > 1e-8 * (1 + std::abs(lower.beta) * y2m) ||
        std::abs(ode::rhs(upper, y2p)) > 1e-8 * (1 + std::abs(upper.beta) * y2p))
        throw std::invalid_argument("ladder does not match the envelope functions (regime mismatch)");
    const double a = y2m - eps, b = y2p + eta;
    if (!(a > 0)) throw std::invalid_argument("y2- - eps must stay positive");
    if (tr.min_ratio.front() < a - tol * (1 + a) || tr.max_ratio.front() > b + tol * (1 + b))
        throw std::invalid_argument("initial data outside the invariant band; sandwich precondition violated");
    ode::IntegrateOptions opt;
    opt.rtol = 1e-11;
    opt.atol = 1e-13;
    opt.sample_times = tr.times;
    const double tend = std::max(tr.times.back(), 1e-12);
    auto lo = ode::integrate(lower, a, tend, opt);
    auto hi = ode::integrate(upper, b, tend, opt);
    if (lo.values.size() != tr.times.size() || hi.values.size() != tr.times.size())
        throw std::runtime_error("barrier integration stopped early (" + ode::to_string(lo.terminal) + ", " +
                                 ode::to_string(hi.terminal) + ")");
    SandwichReport rep;
    rep.lower = lo.values;
    rep.upper = hi.values;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double ml = tr.min_ratio[i] - lo.values[i];
        const double mh = hi.values[i] - tr.max_ratio[i];
        rep.worst_margin = std::min({rep.worst_margin, ml, mh});
        if (ml < -tol * (1 + lo.values[i]) || mh < -tol * (1 + hi.values[i])) ++rep.violations;
    }
    rep.holds = rep.violations == 0;
    return rep;
}

DecayFit fit_decay_rate(const EvolutionTrace& tr, double floor)
{
    if (tr.terminal != Terminal::Converged) throw std::invalid_argument("decay fit needs a converged trace");
    for (double d : tr.sup_dist)
        if (std::isnan(d)) throw std::invalid_argument("decay fit needs sup distances to a limit");
    auto f = ode::fit_exponential(tr.times, tr.sup_dist, floor, 10);
    return {f.rate, f.r_squared, f.used};
}

std::optional<double> entry_time(const EvolutionTrace& tr, double lo, double hi)
{
    std::optional<double> t;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const bool in = tr.min_ratio[i] >= lo && tr.max_ratio[i] <= hi;
        if (!in) t.reset();
        else if (!t) t = tr.times[i];
    }
    return t;
}

DuhamelReport verify_duhamel(const ReactionFields& f, const ScalarField& u0, double t, double dt)
{
    const TorusGrid& grid = u0.grid();
    if (grid.size() > 512) throw std::invalid_argument("Duhamel check limited to 512 grid points");
    if (!(t > 0) || !(dt > 0)) throw std::invalid_argument("t and dt must be positive");
    const Eigen::MatrixXd L = Eigen::MatrixXd(laplacian_matrix(grid));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    const Eigen::MatrixXd& V = es.eigenvectors();
    const Eigen::VectorXd& lam = es.eigenvalues();

    std::vector<double> taus;
    std::vector<Eigen::VectorXd> coeffs;  // V^T f(u(tau))
    EvolutionConfig cfg;
    cfg.t_end = t;
    cfg.snapshot_dt = dt;
    cfg.dt_max = dt;
    cfg.dt_initial = dt;
    cfg.rtol = 1e-11;
    cfg.atol = 1e-13;
    cfg.stop_on_convergence = false;
    cfg.observer = [&](double tau, const Eigen::VectorXd& u) {
        taus.push_back(tau);
        coeffs.push_back(V.transpose() * f.reaction(u));
    };
    auto res = evolve(f, u0, cfg);
    if (res.trace.terminal == Terminal::BlowUp || res.trace.terminal == Terminal::BlowDown)
        throw std::runtime_error("evolution failed before t");

    Eigen::VectorXd acc = (lam.array() * t).exp().matrix().cwiseProduct(V.transpose() * u0.values());
    for (std::size_t k = 0; k + 1 < taus.size(); ++k) {
        const double w = 0.5 * (taus[k + 1] - taus[k]);
        acc += w * ((lam.array() * (t - taus[k])).exp().matrix().cwiseProduct(coeffs[k]) +
                    (lam.array() * (t - taus[k + 1])).exp().matrix().cwiseProduct(coeffs[k + 1]));
    }
    const Eigen::VectorXd rec = V * acc;

    DuhamelReport rep;
    rep.discrepancy = (rec - res.u_final.values()).lpNorm<Eigen::Infinity>();
    const Eigen::MatrixXd H = (t * L).exp();
    rep.kernel_min_entry = H.minCoeff();
    rep.row_sum_error = (H.rowwise().sum().array() - 1.0).abs().maxCoeff();
    return rep;
}

}  // namespace leafwise::heat
