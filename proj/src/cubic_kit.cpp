#include "leafwise/cubic_kit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace leafwise::cubic {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(RegimeTag r)
{
    switch (r) {
    case RegimeTag::A: return "A";
    case RegimeTag::B: return "B";
    case RegimeTag::C1: return "C1";
    case RegimeTag::C2: return "C2";
    case RegimeTag::C3: return "C3";
    default: return "DEGENERATE";
    }
}

RegimeTag regime_from_string(const std::string& s)
{
    if (s == "A") return RegimeTag::A;
    if (s == "B") return RegimeTag::B;
    if (s == "C1") return RegimeTag::C1;
    if (s == "C2") return RegimeTag::C2;
    if (s == "C3") return RegimeTag::C3;
    if (s == "DEGENERATE") return RegimeTag::Degenerate;
    throw std::invalid_argument("unknown regime tag '" + s + "'");
}

RegimeTag classify_regime(double beta, double psi1, double psi2, double psi3)
{
    if (psi3 > 0) return RegimeTag::A;
    if (psi3 < 0) return RegimeTag::B;
    if (psi2 == 0) return psi1 == 0 ? RegimeTag::Degenerate : RegimeTag::C3;
    if (beta < 0) return RegimeTag::C1;
    if (beta > 0) return RegimeTag::C2;
    return RegimeTag::Degenerate;
}

RegimeTag classify_fields(double lambda0, const ScalarField& psi1, const ScalarField& psi2, const ScalarField& psi3)
{
    auto [lo3, hi3] = min_max(psi3);
    if (lo3 > 0) return RegimeTag::A;
    if (hi3 < 0) return RegimeTag::B;
    if (lo3 != 0 || hi3 != 0) return RegimeTag::Degenerate;
    if (sup_norm(psi2) == 0) return sup_norm(psi1) == 0 ? RegimeTag::Degenerate : RegimeTag::C3;
    if (lambda0 > 0) return RegimeTag::C1;
    if (lambda0 < 0) return RegimeTag::C2;
    return RegimeTag::Degenerate;
}

EnvelopeSet EnvelopeSet::constant(double psi1, double psi2, double psi3)
{
    EnvelopeSet e;
    e.lo = e.hi = {std::abs(psi1), std::abs(psi2), std::abs(psi3)};
    return e;
}

EnvelopeSet envelope_coefficients(const ScalarField& psi1, const ScalarField& psi2, const ScalarField& psi3,
                                  const ScalarField& e0)
{
    require_same_grid(psi1, e0);
    require_same_grid(psi2, e0);
    require_same_grid(psi3, e0);
    if (!(e0.values().minCoeff() > 0)) throw std::domain_error("envelopes need a positive ground state");
    const Eigen::ArrayXd e = e0.values().array();
    const Eigen::ArrayXd w[3] = {psi1.values().array().abs() / e.square(),
                                 psi2.values().array().abs() / e.square().square(),
                                 psi3.values().array().abs() * e.square()};
    EnvelopeSet out;
    for (int k = 0; k < 3; ++k) {
        out.lo[k] = w[k].minCoeff();
        out.hi[k] = w[k].maxCoeff();
    }
    return out;
}

nlohmann::json to_json(const EnvelopeSet& e)
{
    return {{"psi1_minus", e.lo[0]}, {"psi1_plus", e.hi[0]}, {"psi2_minus", e.lo[1]},
            {"psi2_plus", e.hi[1]},  {"psi3_minus", e.lo[2]}, {"psi3_plus", e.hi[2]}};
}

std::pair<OdeCoefficients, OdeCoefficients> envelope_odes(RegimeTag regime, double lambda0, const EnvelopeSet& env)
{
    const double b = -lambda0;
    if (regime == RegimeTag::B)
        return {{b, -env.hi[0], env.hi[1], -env.hi[2]}, {b, -env.lo[0], env.lo[1], -env.lo[2]}};
    return {{b, env.lo[0], env.hi[1], env.lo[2]}, {b, env.hi[0], env.lo[1], env.hi[2]}};
}

namespace {

Coeffs phi_poly(const OdeCoefficients& c) { return {c.psi3, c.beta, c.psi1, -c.psi2}; }
// y^4 times  beta - psi1 y^-2 + 3 psi2 y^-4 + 3 psi3 y^2
Coeffs dphi_poly(double beta, double psi1, double psi2, double psi3) { return {3 * psi3, beta, -psi1, 3 * psi2}; }
double dphi_eval(const Coeffs& d, double y)
{
    // d = {3 psi3, beta, -psi1, 3 psi2}
    double y2 = y * y;
    return d[1] + d[2] / y2 + d[3] / (y2 * y2) + d[0] * y2;
}

struct Pos {
    std::vector<double> y;
    bool repeated = false;
};

Pos positive_y(const Coeffs& c)
{
    auto ca = roots_cubic(c[0], c[1], c[2], c[3]);
    Pos p;
    p.repeated = ca.repeated;
    for (double z : ca.positive_roots()) p.y.push_back(std::sqrt(z));
    return p;
}

double max_on_interval(const Coeffs& d, double a, double b)
{
    double best = std::max(dphi_eval(d, a), dphi_eval(d, b));
    // critical points: 6 psi3 z^3 + 2 psi1 z - 12 psi2 = 0
    const double psi3 = d[0] / 3, psi1 = -d[2], psi2 = d[3] / 3;
    if (psi3 != 0 || psi1 != 0) {
        auto ca = roots_cubic(6 * psi3, 0, 2 * psi1, -12 * psi2);
        for (double z : ca.positive_roots()) {
            double y = std::sqrt(z);
            if (y > a && y < b) best = std::max(best, dphi_eval(d, y));
        }
    }
    return best;
}

void finish_chain(RootLadder& l)
{
    l.ordering_verified = l.strict_ordering = true;
    for (std::size_t i = 1; i < l.chain.size(); ++i) {
        if (!(l.chain[i - 1].second <= l.chain[i].second)) l.ordering_verified = false;
        if (!(l.chain[i - 1].second < l.chain[i].second)) l.strict_ordering = false;
    }
}

}  // namespace

double RootLadder::y(const std::string& name) const
{
    if (name.size() < 3) throw std::invalid_argument("ladder name like y2- expected");
    const auto key = name.substr(0, name.size() - 1);
    const auto& m = name.back() == '-' ? roots_minus : roots_plus;
    auto it = m.find(key);
    if (it == m.end()) throw std::out_of_range("ladder has no root " + name);
    return it->second;
}

RootLadder root_ladder(RegimeTag regime, double lambda0, const EnvelopeSet& env, const LadderOptions& opt)
{
    RootLadder l;
    l.regime = regime;
    auto [lower, upper] = envelope_odes(regime, lambda0, env);
    const double b = -lambda0;
    const auto& lo = env.lo;
    const auto& hi = env.hi;

    switch (regime) {
    case RegimeTag::A: {
        if (!(lambda0 > 0)) throw HypothesisError("lambda0_positive", "regime A ladder needs lambda0 > 0");
        const bool cubic = hi[1] > 0;
        l.variant = cubic ? "cubic" : "no_inverse_cube";
        const std::size_t need = cubic ? 3 : 2;
        auto pm = positive_y(phi_poly(lower));
        auto pp = positive_y(phi_poly(upper));
        const Coeffs dm = dphi_poly(b, hi[0], lo[1], lo[2]);
        const Coeffs dp = dphi_poly(b, lo[0], hi[1], hi[2]);
        auto qm = positive_y(dm);
        auto qp = positive_y(dp);
        if (pm.y.size() != need || pp.y.size() != need) {
            if (cubic && !(lo[0] * lo[0] * lo[0] > 27 * hi[1] * hi[1] * hi[2]))
                throw HypothesisError("envelope_cubic_bound", "envelope functions lack three positive roots");
            throw HypothesisError("lambda0_in_window", "lambda0 outside the three-root window of the envelopes");
        }
        if (qm.y.size() != need - 1 || qp.y.size() != need - 1)
            throw HypothesisError("lambda0_in_window", "envelope derivatives lack the expected positive roots");
        l.degenerate = pm.repeated || pp.repeated || qm.repeated || qp.repeated;
        if (cubic) {
            l.roots_minus = {{"y3", pm.y[0]}, {"y2", pm.y[1]}, {"y1", pm.y[2]}, {"y5", qm.y[0]}, {"y4", qm.y[1]}};
            l.roots_plus = {{"y3", pp.y[0]}, {"y2", pp.y[1]}, {"y1", pp.y[2]}, {"y5", qp.y[0]}, {"y4", qp.y[1]}};
            l.chain = {{"y3+", pp.y[0]}, {"y3-", pm.y[0]}, {"y5+", qp.y[0]}, {"y2-", pm.y[1]},
                       {"y2+", pp.y[1]}, {"y4-", qm.y[1]}, {"y1+", pp.y[2]}, {"y1-", pm.y[2]}};
            l.basin_lo = pm.y[0];
            l.basin_hi = pp.y[2];
            l.eps_max = pm.y[1] - pm.y[0];
            l.eta_max = pp.y[2] - pp.y[1];
            const double swin = pm.y[1] - qp.y[0], twin = qp.y[1] - pp.y[1];
            finish_chain(l);
            if (swin > 0 && twin > 0) {
                l.sigma = opt.sigma_fraction * swin;
                l.tau = opt.tau_fraction * twin;
                l.mu_plus = -max_on_interval(dp, pm.y[1] - l.sigma, pp.y[1] + l.tau);
            }
        } else {
            l.roots_minus = {{"y2", pm.y[0]}, {"y1", pm.y[1]}, {"y4", qm.y[0]}};
            l.roots_plus = {{"y2", pp.y[0]}, {"y1", pp.y[1]}, {"y4", qp.y[0]}};
            l.chain = {{"y2-", pm.y[0]}, {"y2+", pp.y[0]}, {"y4-", qm.y[0]}, {"y1+", pp.y[1]}, {"y1-", pm.y[1]}};
            l.basin_lo = 0;
            l.basin_hi = pp.y[1];
            l.eps_max = pm.y[0];
            l.eta_max = pp.y[1] - pp.y[0];
            finish_chain(l);
            const double twin = qp.y[0] - pp.y[0];
            if (twin > 0) {
                l.sigma = opt.sigma_fraction * pm.y[0];
                l.tau = opt.tau_fraction * twin;
                l.mu_plus = -max_on_interval(dp, pm.y[0] - l.sigma, pp.y[0] + l.tau);
            }
        }
        break;
    }
    case RegimeTag::B: {
        if (!(lambda0 < 0)) throw HypothesisError("lambda0_negative", "regime B ladder needs lambda0 < 0");
        const bool linear = hi[0] == 0 && hi[1] == 0;
        l.variant = linear ? "linear_cube" : (hi[1] > 0 ? "cubic" : "no_inverse_cube");
        const std::size_t need = linear ? 1 : 2;
        auto pm = positive_y(phi_poly(lower));
        auto pp = positive_y(phi_poly(upper));
        const Coeffs dm = dphi_poly(b, -lo[0], lo[1], -hi[2]);
        const Coeffs dp = dphi_poly(b, -hi[0], hi[1], -lo[2]);
        auto qm = positive_y(dm);
        auto qp = positive_y(dp);
        if (pm.y.size() != need || pp.y.size() != need)
            throw HypothesisError("lambda0_maclaurin_bound", "envelope functions lack two positive roots");
        if (qm.y.size() != 1 || qp.y.size() != 1)
            throw HypothesisError("lambda0_maclaurin_bound", "envelope derivatives lack a positive root");
        l.degenerate = pm.repeated || pp.repeated || qm.repeated || qp.repeated;
        const double y2m = pm.y.back(), y2p = pp.y.back();
        l.roots_minus = {{"y2", y2m}, {"y3", qm.y[0]}};
        l.roots_plus = {{"y2", y2p}, {"y3", qp.y[0]}};
        if (!linear) {
            l.roots_minus["y1"] = pm.y[0];
            l.roots_plus["y1"] = pp.y[0];
            l.chain = {{"y1+", pp.y[0]}, {"y1-", pm.y[0]}};
        }
        l.chain.push_back({"y3+", qp.y[0]});
        l.chain.push_back({"y2-", y2m});
        l.chain.push_back({"y2+", y2p});
        l.basin_lo = linear ? 0.0 : pm.y[0];
        l.basin_hi = kInf;
        l.eps_max = y2m - l.basin_lo;
        l.eta_max = kInf;
        finish_chain(l);
        const double swin = y2m - qp.y[0];
        if (swin > 0) {
            l.sigma = opt.sigma_fraction * swin;
            l.mu_plus = -dphi_eval(dp, y2m - l.sigma);
        }
        break;
    }
    case RegimeTag::C1: {
        if (!(lambda0 > 0)) throw HypothesisError("lambda0_positive", "regime C1 ladder needs lambda0 > 0");
        if (!(lambda0 < lo[0] * lo[0] / (4 * hi[1])))
            throw HypothesisError("lambda0_quadratic_bound", "lambda0 above (Psi1^-)^2/(4 Psi2^+)");
        l.variant = "cubic";
        auto pm = positive_y(phi_poly(lower));
        auto pp = positive_y(phi_poly(upper));
        const Coeffs dm = dphi_poly(b, lo[0], hi[1], 0.0);
        auto qm = positive_y(dm);
        if (pm.y.size() != 2 || pp.y.empty() || qm.y.size() != 1)
            throw HypothesisError("lambda0_quadratic_bound", "envelope functions lack the expected roots");
        l.degenerate = pm.repeated || pp.repeated || qm.repeated;
        const double y1p = pp.y.size() == 2 ? pp.y[0] : 0.0;
        l.roots_minus = {{"y1", pm.y[0]}, {"y2", pm.y[1]}, {"y3", qm.y[0]}, {"y4", std::sqrt(6 * hi[1] / lo[0])}};
        l.roots_plus = {{"y1", y1p}, {"y2", pp.y.back()}};
        l.chain = {{"y1+", y1p}, {"y1-", pm.y[0]}, {"y3-", qm.y[0]}, {"y2-", pm.y[1]}, {"y2+", pp.y.back()}};
        l.basin_lo = pm.y[0];
        l.basin_hi = kInf;
        l.eps_max = pm.y[1] - pm.y[0];
        l.eta_max = kInf;
        finish_chain(l);
        const double swin = pm.y[1] - qm.y[0];
        if (swin > 0) {
            l.sigma = opt.sigma_fraction * swin;
            l.mu_plus = std::min(std::abs(dphi_eval(dm, pm.y[1] - l.sigma)), lambda0);
        }
        break;
    }
    case RegimeTag::C3: {
        if (!(lambda0 > 0)) throw HypothesisError("lambda0_positive", "regime C3 ladder needs lambda0 > 0");
        if (!(lo[0] > 0)) throw HypothesisError("psi1_positive", "regime C3 ladder needs Psi1^- > 0");
        l.variant = "no_inverse_cube";
        const double y2m = std::sqrt(lo[0] / lambda0), y2p = std::sqrt(hi[0] / lambda0);
        l.roots_minus = {{"y2", y2m}};
        l.roots_plus = {{"y2", y2p}};
        l.chain = {{"y2-", y2m}, {"y2+", y2p}};
        l.basin_lo = 0;
        l.basin_hi = kInf;
        l.eps_max = y2m;
        l.eta_max = kInf;
        finish_chain(l);
        l.sigma = opt.sigma_fraction * y2m;
        l.mu_plus = lambda0;
        break;
    }
    case RegimeTag::C2:
        throw HypothesisError("lambda0_positive", "regime C2 has no stable stationary point");
    default:
        throw HypothesisError("regime", "degenerate regime has no root ladder");
    }
    return l;
}

nlohmann::json to_json(const RootLadder& l)
{
    nlohmann::json chain = nlohmann::json::array();
    for (auto& [n, v] : l.chain) chain.push_back({n, v});
    nlohmann::json j = {{"regime", to_string(l.regime)},
                        {"variant", l.variant},
                        {"roots_minus", l.roots_minus},
                        {"roots_plus", l.roots_plus},
                        {"chain", chain},
                        {"ordering_verified", l.ordering_verified},
                        {"strict_ordering", l.strict_ordering},
                        {"degenerate", l.degenerate},
                        {"sigma", l.sigma},
                        {"tau", l.tau},
                        {"basin", {l.basin_lo, std::isfinite(l.basin_hi) ? nlohmann::json(l.basin_hi) : nlohmann::json()}},
                        {"eps_max", l.eps_max},
                        {"eta_max", std::isfinite(l.eta_max) ? nlohmann::json(l.eta_max) : nlohmann::json()}};
    j["mu_plus"] = l.mu_plus ? nlohmann::json(*l.mu_plus) : nlohmann::json();
    return j;
}

double envelope_discriminant(double l, double t1, double t2, double t3)
{
    return -4 * t2 * l * l * l + t1 * t1 * l * l + 18 * t1 * t2 * t3 * l - 4 * t1 * t1 * t1 * t3 - 27 * t2 * t2 * t3 * t3;
}

LambdaWindow lambda_window(const EnvelopeSet& env)
{
    const double p1m = env.lo[0], p2m = env.lo[1], p3m = env.lo[2];
    const double p1p = env.hi[0], p2p = env.hi[1], p3p = env.hi[2];
    if (!(p2m > 0 && p1m > 0)) throw std::domain_error("lambda window needs Psi1^-, Psi2^- > 0");
    const double pp = -p1m * (std::pow(p1m, 3) + 216 * p2m * p2m * p3m) / (48 * p2p * p2p);
    const double pm = -p1p * (std::pow(p1p, 3) + 216 * p2p * p2p * p3p) / (48 * p2m * p2m);
    const double Ap = 2 * std::sqrt(-pm / 3), Am = 2 * std::sqrt(-pp / 3);
    const double zp = p3p * p2p * p2p / std::pow(p1m, 3);
    const double php = std::acos(c_of_z(zp)) / 3;
    LambdaWindow w;
    w.mu1_minus = Am * std::cos(php);
    const double c = std::cos(php - 2 * M_PI / 3);
    w.mu2_plus = (c > 0 ? Ap : Am) * c;
    w.floor = w.mu2_plus + p1p * p1p / (12 * p2m);
    w.ceiling = w.mu1_minus + p1m * p1m / (12 * p2p);
    return w;
}

namespace {

Coeffs blend(const Coeffs& a, const Coeffs& b, double t)
{
    Coeffs c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = (1 - t) * a[i] + t * b[i];
    return c;
}

// fits the polynomial in t through samples of  scale * Res(P, (1-t)Q0 + t Q1)
Coeffs generic_resultant(const Coeffs& P, const Coeffs& Q0, const Coeffs& Q1, double scale, int degree)
{
    const int n = degree + 1;
    Eigen::MatrixXd V(n, n);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
        double t = degree == 0 ? 0.0 : static_cast<double>(i) / degree;
        for (int k = 0; k < n; ++k) V(i, k) = std::pow(t, degree - k);
        r[i] = scale * reduced_resultant(P, blend(Q0, Q1, t));
    }
    Eigen::VectorXd c = V.fullPivLu().solve(r);
    return Coeffs(c.data(), c.data() + n);
}

void finish_sweep(ResultantSweep& s)
{
    double num = 0, den = 0;
    for (std::size_t i = 0; i < s.closed_form.size(); ++i) {
        num = std::max(num, std::abs(s.closed_form[i] - s.generic[i]));
        den = std::max(den, std::abs(s.closed_form[i]));
    }
    s.relative_error = den > 0 ? num / den : num;
    if (!(s.relative_error <= 1e-8))
        throw TranscriptionError(s.name + ": closed form disagrees with the Sylvester resultant (relative error " +
                                 std::to_string(s.relative_error) + ")");
    s.min_value = kInf;
    auto consider = [&](double t) {
        double v = poly_eval(s.closed_form, t);
        if (v < s.min_value) { s.min_value = v; s.argmin = t; }
    };
    for (int i = 0; i <= 1000; ++i) consider(i / 1000.0);
    if (s.closed_form.size() == 4) {
        Coeffs d = poly_derivative(s.closed_form);
        if (d[0] != 0 || d[1] != 0) {
            auto ca = roots_cubic(0, d[0], d[1], d[2]);
            for (double t : ca.real_roots)
                if (t > 0 && t < 1) consider(t);
        }
    }
    s.a3_criterion = positivity_criterion_a3(s.closed_form);
}

}  // namespace

ResultantSweep resultant_sweep_R1(double l0, const EnvelopeSet& env)
{
    const double p1 = env.lo[0], p2 = env.hi[1], p3m = env.lo[2], p3p = env.hi[2];
    if (!(p2 > 0)) throw std::domain_error("R1 needs Psi2^+ > 0");
    const double d3 = env.spread(2);
    const Coeffs P = {p3m, -l0, p1, -p2};
    const Coeffs Q0 = {3 * p3m, -l0, -p1, 3 * p2};
    const Coeffs Q1 = {3 * p3p, -l0, -p1, 3 * p2};
    const double D = envelope_discriminant(l0, p1, p2, p3m);
    ResultantSweep s;
    s.name = "R1";
    s.normalization = "-Res/Psi2^+";
    s.closed_form = {-27 * d3 * d3 * d3 * p2 * p2,
                     18 * d3 * d3 * (4 * p1 * p2 * l0 - p1 * p1 * p1 - 9 * p2 * p2 * p3m),
                     12 * d3 * D,
                     8 * p3m * D};
    s.generic = generic_resultant(P, Q0, Q1, -1.0 / p2, 3);
    finish_sweep(s);
    return s;
}

ResultantSweep resultant_sweep_R2(double l0, const EnvelopeSet& env)
{
    const double p1 = env.hi[0], p2 = env.lo[1], p3m = env.lo[2], p3p = env.hi[2];
    const double d3 = env.spread(2);
    ResultantSweep s;
    s.name = "R2";
    const Coeffs P = {p3p, -l0, p1, -p2};
    const Coeffs Q0 = {3 * p3p, -l0, -p1, 3 * p2};
    const Coeffs Q1 = {3 * p3m, -l0, -p1, 3 * p2};
    if (p2 > 0) {
        const double D = envelope_discriminant(l0, p1, p2, p3p);
        s.normalization = "-Res/Psi2^-";
        s.closed_form = {27 * d3 * d3 * d3 * p2 * p2,
                         18 * d3 * d3 * (4 * p1 * p2 * l0 - p1 * p1 * p1 - 9 * p2 * p2 * p3p),
                         -12 * d3 * D,
                         8 * p3p * D};
        s.generic = generic_resultant(P, Q0, Q1, -1.0 / p2, 3);
    } else {
        if (!(p1 > 0)) throw std::domain_error("R2 without inverse-cube term needs Psi1^+ > 0");
        const double X = l0 * l0 - 4 * p1 * p3p;
        s.normalization = "-Res/Psi1^+ (common factor z removed)";
        s.closed_form = {-9 * d3 * d3 * p1, -6 * d3 * X, 4 * p3p * X};
        s.generic = generic_resultant(P, Q0, Q1, -1.0 / p1, 2);
    }
    finish_sweep(s);
    return s;
}

ResultantSweep resultant_sweep_R3(double l0, const EnvelopeSet& env)
{
    const double p1 = env.hi[0], p2 = env.hi[1], p3m = env.lo[2], p3p = env.hi[2];
    const double d3 = env.spread(2);
    ResultantSweep s;
    s.name = "R3";
    const Coeffs P = {-p3p, -l0, -p1, -p2};
    const Coeffs Q0 = {-3 * p3p, -l0, p1, 3 * p2};
    const Coeffs Q1 = {-3 * p3m, -l0, p1, 3 * p2};
    if (p2 > 0) {
        const double D = discriminant_cubic(-p3p, -l0, -p1, -p2);
        s.normalization = "+Res/Psi2^+";
        s.closed_form = {27 * d3 * d3 * d3 * p2 * p2,
                         -18 * d3 * d3 * (4 * p1 * p2 * (-l0) + p1 * p1 * p1 + 9 * p2 * p2 * p3p),
                         -12 * d3 * D,
                         8 * p3p * D};
        s.generic = generic_resultant(P, Q0, Q1, 1.0 / p2, 3);
    } else if (p1 == 0) {
        if (!(l0 < 0)) throw std::domain_error("R3 linear form needs lambda0 < 0");
        s.normalization = "Res/(-lambda0) (common factor z^2 removed)";
        s.closed_form = {-3 * d3, 2 * p3p};
        s.generic = generic_resultant(P, Q0, Q1, 1.0 / (-l0), 1);
    } else {
        throw std::domain_error("R3 closed form needs Psi2^+ > 0 or Psi1 = Psi2 = 0");
    }
    finish_sweep(s);
    return s;
}

nlohmann::json to_json(const ResultantSweep& s)
{
    return {{"name", s.name},       {"closed_form", s.closed_form}, {"generic", s.generic},
            {"relative_error", s.relative_error}, {"min_value", s.min_value}, {"argmin", s.argmin},
            {"a3_criterion", s.a3_criterion}, {"normalization", s.normalization}};
}

}  // namespace leafwise::cubic
