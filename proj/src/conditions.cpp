#include "leafwise/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace leafwise::cubic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Check make_check(std::string name, double lhs, std::string rel, double rhs)
{
    Check c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.relation = std::move(rel);
    if (std::isnan(lhs) || std::isnan(rhs)) {
        c.margin = kNaN;
        c.pass = false;
        return c;
    }
    if (c.relation == "<" || c.relation == "<=") c.margin = rhs - lhs;
    else if (c.relation == ">" || c.relation == ">=") c.margin = lhs - rhs;
    else c.margin = -std::abs(lhs - rhs);
    if (c.relation == "<") c.pass = lhs < rhs;
    else if (c.relation == "<=") c.pass = lhs <= rhs;
    else if (c.relation == ">") c.pass = lhs > rhs;
    else if (c.relation == ">=") c.pass = lhs >= rhs;
    else c.pass = lhs == rhs;
    return c;
}

// lo < x < hi, reported against the nearer end
Check interval_check(std::string name, double x, double lo, double hi)
{
    Check c;
    c.name = std::move(name);
    c.lhs = x;
    c.relation = "in";
    if (std::isnan(x) || std::isnan(lo) || std::isnan(hi)) {
        c.rhs = c.margin = kNaN;
        return c;
    }
    const double ml = x - lo, mh = hi - x;
    c.rhs = ml < mh ? lo : hi;
    c.margin = std::min(ml, mh);
    c.pass = x > lo && x < hi;
    return c;
}

double safe_div(double a, double b) { return b != 0 ? a / b : kNaN; }

const EnvelopeSet& need_env(const ConditionInputs& in)
{
    if (!in.envelopes) throw std::invalid_argument("theorem needs envelope coefficients");
    return *in.envelopes;
}

const std::array<FieldStats, 3>& need_psi(const ConditionInputs& in)
{
    if (!in.psi) throw std::invalid_argument("theorem needs sampled Psi statistics");
    return *in.psi;
}

const FieldStats& need_beta_top(const ConditionInputs& in)
{
    if (!in.beta_top) throw std::invalid_argument("theorem needs beta_top statistics");
    return *in.beta_top;
}

// 27 max Psi2^2 max|Psi3| / min|Psi1|^3 < delta^8(e0)
Check ground_state_cubic_bound(const ConditionInputs& in, const std::array<FieldStats, 3>& psi)
{
    const double lhs = safe_div(27 * psi[1].max_abs * psi[1].max_abs * psi[2].max_abs, std::pow(psi[0].min_abs, 3));
    return make_check("ground_state_cubic_bound", lhs, "<", std::pow(in.delta_e0, 8));
}

Check psi3_ground_state_spread(const ConditionInputs& in)
{
    return make_check("psi3_ground_state_spread", in.delta_abs_psi3 * in.delta_e0 * in.delta_e0, ">", 1.0 / 3);
}

Check sign_check(const std::string& name, const FieldStats& s, int sign)
{
    if (sign > 0) return make_check(name, s.min, ">", 0.0);
    if (sign < 0) return make_check(name, s.max, "<", 0.0);
    return make_check(name, s.max_abs, "==", 0.0);
}

void set_phi(ConditionReport& r, double lo, double hi)
{
    r.checks.push_back(make_check("phi_interval_nonempty", hi, ">", lo));
    if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) r.phi_interval.reset();
    else r.phi_interval = std::make_pair(lo, hi);
}

double quadratic_gap(const std::array<FieldStats, 3>& psi, double delta_e0)
{
    return std::pow(delta_e0, 4) * safe_div(psi[0].min * psi[0].min, 4 * psi[1].max);
}

// ---- envelope-level theorems ----

void positive_cubic(ConditionReport& r, const ConditionInputs& in, bool uniqueness)
{
    const auto& e = need_env(in);
    const double l0 = in.lambda0;
    const double p1m = e.lo[0], p2m = e.lo[1], p3m = e.lo[2];
    const double p1p = e.hi[0], p2p = e.hi[1], p3p = e.hi[2];
    r.checks.push_back(make_check("lambda0_positive", l0, ">", 0.0));
    auto cb = make_check("envelope_cubic_bound", p1m * p1m * p1m, ">", 27 * p2p * p2p * p3p);
    r.checks.push_back(cb);
    double lo = kNaN, hi = kNaN, wl = kNaN, wr = kNaN;
    if (cb.pass && p2m > 0) {
        auto w = lambda_window(e);
        lo = w.floor;
        hi = w.ceiling;
        wl = p1p * p1p / (12 * p2m) - p1m * p1m / (12 * p2p);
        wr = w.mu1_minus - w.mu2_plus;
    }
    r.checks.push_back(make_check("lambda_window_nonempty", wl, "<", wr));
    r.checks.push_back(interval_check("lambda0_in_window", l0, lo, hi));
    if (!std::isnan(lo) && lo < hi) r.lambda0_interval = std::make_pair(lo, hi);
    if (!uniqueness) return;
    r.checks.push_back(make_check("cubic_spread_bound", 3 * p3m, ">", p3p));
    const double d3 = e.spread(2);
    const double Dm = envelope_discriminant(l0, p1m, p2p, p3m);
    const double Dp = envelope_discriminant(l0, p1p, p2m, p3p);
    const double t1 = safe_div(8 * p3m * Dm, 27 * p2p * p2p +
                                                 18 * (4 * p1m * p2p * l0 + p1m * p1m * p1m + 9 * p2p * p2p * p3m));
    const double t2 = safe_div((3 * p3m - p3p) * Dp, 9 * (4 * p1p * p2m * l0 + p1p * p1p * p1p + 9 * p2m * p2m * p3p));
    r.checks.push_back(make_check("resultant_spread_bound", d3 * d3, "<=", std::min({1.0, t1, t2})));
}

void positive_cubic_no_inverse_cube(ConditionReport& r, const ConditionInputs& in)
{
    const auto& e = need_env(in);
    const double l0 = in.lambda0;
    r.checks.push_back(make_check("psi2_envelope_zero", e.hi[1], "==", 0.0));
    r.checks.push_back(make_check("lambda0_positive", l0, ">", 0.0));
    r.checks.push_back(make_check("psi1_envelope_positive", e.lo[0], ">", 0.0));
    auto sp = make_check("cubic_spread_bound", 3 * e.lo[2], ">", e.hi[2]);
    r.checks.push_back(sp);
    const double bound = sp.pass ? std::sqrt(e.hi[0] * std::pow(3 * e.lo[2] + e.hi[2], 2) / (2 * (3 * e.lo[2] - e.hi[2])))
                                 : kNaN;
    r.checks.push_back(make_check("lambda0_resultant_bound", l0, ">", bound));
    if (!std::isnan(bound)) r.lambda0_interval = std::make_pair(bound, kInf);
}

void negative_cubic(ConditionReport& r, const ConditionInputs& in, bool uniqueness)
{
    const auto& e = need_env(in);
    const double l0 = in.lambda0;
    r.checks.push_back(make_check("lambda0_negative", l0, "<", 0.0));
    const double kbar = kbar_constant(e);
    r.checks.push_back(make_check("lambda0_maclaurin_bound", l0, "<", -kbar));
    double top = -kbar;
    if (uniqueness) {
        auto sp = make_check("cubic_spread_bound", 3 * e.lo[2], ">", e.hi[2]);
        r.checks.push_back(sp);
        const double K = sp.pass ? kb_constant(e) : kNaN;
        const double rhs = 1 + std::sqrt(K);
        r.checks.push_back(make_check("lambda0_resultant_bound", -l0, ">", rhs));
        top = std::min(top, -rhs);
    }
    if (!std::isnan(top)) r.lambda0_interval = std::make_pair(-kInf, top);
}

void negative_cubic_linear(ConditionReport& r, const ConditionInputs& in)
{
    const auto& e = need_env(in);
    r.checks.push_back(make_check("psi1_envelope_zero", e.hi[0], "==", 0.0));
    r.checks.push_back(make_check("psi2_envelope_zero", e.hi[1], "==", 0.0));
    r.checks.push_back(make_check("lambda0_negative", in.lambda0, "<", 0.0));
    r.checks.push_back(make_check("cubic_spread_bound", 3 * e.lo[2], ">", e.hi[2]));
    r.lambda0_interval = std::make_pair(-kInf, 0.0);
}

void zero_cubic(ConditionReport& r, const ConditionInputs& in)
{
    const auto& e = need_env(in);
    r.checks.push_back(make_check("psi3_envelope_zero", e.hi[2], "==", 0.0));
    r.checks.push_back(make_check("lambda0_positive", in.lambda0, ">", 0.0));
    const double cap = safe_div(e.lo[0] * e.lo[0], 4 * e.hi[1]);
    r.checks.push_back(make_check("lambda0_quadratic_bound", in.lambda0, "<", cap));
    if (!std::isnan(cap)) r.lambda0_interval = std::make_pair(0.0, cap);
}

void zero_cubic_no_inverse_cube(ConditionReport& r, const ConditionInputs& in)
{
    const auto& e = need_env(in);
    r.checks.push_back(make_check("psi3_envelope_zero", e.hi[2], "==", 0.0));
    r.checks.push_back(make_check("psi2_envelope_zero", e.hi[1], "==", 0.0));
    r.checks.push_back(make_check("lambda0_positive", in.lambda0, ">", 0.0));
    r.checks.push_back(make_check("psi1_envelope_positive", e.lo[0], ">", 0.0));
    r.lambda0_interval = std::make_pair(0.0, kInf);
}

// ---- field-level theorems: constant Phi, beta = beta_top + Phi ----

void prescribe_zero_cubic_case(ConditionReport& r, const ConditionInputs& in)
{
    const auto& psi = need_psi(in);
    const auto& bt = need_beta_top(in);
    r.checks.push_back(sign_check("psi3_zero", psi[2], 0));
    r.checks.push_back(sign_check("psi1_positive", psi[0], 1));
    r.checks.push_back(make_check("psi2_positive", psi[1].max, ">", 0.0));
    set_phi(r, -bt.min - quadratic_gap(psi, in.delta_e0), -bt.max);
}

void prescribe_positive(ConditionReport& r, const ConditionInputs& in)
{
    const auto& psi = need_psi(in);
    const auto& bt = need_beta_top(in);
    r.checks.push_back(sign_check("psi3_positive", psi[2], 1));
    r.checks.push_back(sign_check("psi1_positive", psi[0], 1));
    r.checks.push_back(ground_state_cubic_bound(in, psi));
    set_phi(r, -kInf, -bt.max);
}

void prescribe_negative(ConditionReport& r, const ConditionInputs& in, bool uniqueness)
{
    const auto& psi = need_psi(in);
    const auto& bt = need_beta_top(in);
    r.checks.push_back(sign_check("psi3_negative", psi[2], -1));
    r.checks.push_back(sign_check("psi1_negative", psi[0], -1));
    r.checks.push_back(make_check("psi2_nonvanishing", psi[1].min_abs, ">", 0.0));
    double k = k1_constant(psi);
    if (uniqueness) {
        auto sp = make_check("psi3_sampled_spread", 3 * psi[2].min_abs, ">", psi[2].max_abs);
        r.checks.push_back(sp);
        k = sp.pass ? std::max(k, k2_constant(psi, in.k2)) : kNaN;
        r.k2_grouping = to_string(in.k2);
    }
    set_phi(r, -bt.min + 1 + std::pow(in.delta_e0, -4) * std::sqrt(k), kInf);
}

// Psi2 = 0 cases shared by the integrable-normal and fibred corollaries
void prescribe_integrable(ConditionReport& r, const ConditionInputs& in, const std::string& c)
{
    const auto& psi = need_psi(in);
    const auto& bt = need_beta_top(in);
    r.checks.push_back(sign_check("psi2_zero", psi[1], 0));
    if (c == "positive_cubic") {
        r.checks.push_back(sign_check("psi3_positive", psi[2], 1));
        r.checks.push_back(sign_check("psi1_positive", psi[0], 1));
        r.checks.push_back(ground_state_cubic_bound(in, psi));
        auto sp = make_check("psi3_sampled_spread", 3 * psi[2].min, ">", psi[2].max);
        r.checks.push_back(sp);
        double gap = kNaN;
        if (sp.pass)
            gap = std::pow(in.delta_e0, -2) * std::sqrt(psi[0].max) * (3 * psi[2].min + psi[2].max) /
                  (std::sqrt(2.0) * std::sqrt(3 * psi[2].min - psi[2].max));
        set_phi(r, -kInf, -bt.max - gap);
    } else if (c == "negative_cubic") {
        r.checks.push_back(sign_check("psi3_negative", psi[2], -1));
        r.checks.push_back(sign_check("psi1_zero", psi[0], 0));
        r.checks.push_back(psi3_ground_state_spread(in));
        set_phi(r, -bt.min, kInf);
    } else if (c == "zero_cubic") {
        r.checks.push_back(sign_check("psi3_zero", psi[2], 0));
        r.checks.push_back(sign_check("psi1_positive", psi[0], 1));
        set_phi(r, -kInf, -bt.max);
    } else {
        throw std::invalid_argument("unknown case '" + c + "'");
    }
}

void prescribe_fibred(ConditionReport& r, const ConditionInputs& in, const std::string& c)
{
    const auto& psi = need_psi(in);
    const auto& bt = need_beta_top(in);
    if (c == "negative_cubic") {
        r.checks.push_back(sign_check("psi3_negative", psi[2], -1));
        r.checks.push_back(sign_check("psi1_negative", psi[0], -1));
        r.checks.push_back(make_check("psi2_nonvanishing", psi[1].min_abs, ">", 0.0));
        r.checks.push_back(psi3_ground_state_spread(in));
        auto sp = make_check("psi3_sampled_spread", 3 * psi[2].min_abs, ">", psi[2].max_abs);
        r.checks.push_back(sp);
        const double k = sp.pass ? k2_constant(psi, in.k2) : kNaN;
        r.k2_grouping = to_string(in.k2);
        set_phi(r, 1 - bt.min + std::pow(in.delta_e0, -4) * std::sqrt(k), kInf);
    } else if (c == "zero_cubic") {
        prescribe_zero_cubic_case(r, in);
    } else {
        throw std::invalid_argument("unknown case '" + c + "'");
    }
}

void prescribe_indefinite(ConditionReport& r, const ConditionInputs& in)
{
    const auto& psi = need_psi(in);
    const auto& bt = need_beta_top(in);
    r.checks.push_back(sign_check("psi3_zero", psi[2], 0));
    FieldStats h = in.h_top_sq ? *in.h_top_sq : FieldStats{};
    FieldStats t = in.t_bot_sq ? *in.t_bot_sq : FieldStats{};
    if (!in.h_top_sq) {
        h.min = psi[0].min * in.n;
        h.max = psi[0].max * in.n;
    }
    if (!in.t_bot_sq) {
        t.min = psi[1].min * in.n;
        t.max = psi[1].max * in.n;
    }
    r.checks.push_back(make_check("h_top_positive", h.min, ">", 0.0));
    r.checks.push_back(make_check("t_bot_nonzero", t.max, ">", 0.0));
    const double gap = std::pow(in.delta_e0, 4) * safe_div(h.min * h.min, 4.0 * in.n * t.max);
    set_phi(r, -bt.min - gap, -bt.max);
}

std::string default_case(const std::string& id)
{
    if (id == "prescribe_integrable_normal" || id == "prescribe_fibred_integrable") return "positive_cubic";
    if (id == "prescribe_fibred") return "negative_cubic";
    return "existence";
}

}  // namespace

bool ConditionReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::vector<std::string> ConditionReport::failed() const
{
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.pass) out.push_back(c.name);
    return out;
}

const Check& ConditionReport::at(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw std::out_of_range("no check named " + name);
}

std::string to_string(K2Grouping g) { return g == K2Grouping::AsPrinted ? "as_printed" : "bracketed"; }

K2Grouping k2_grouping_from_string(const std::string& s)
{
    if (s == "as_printed") return K2Grouping::AsPrinted;
    if (s == "bracketed") return K2Grouping::Bracketed;
    throw std::invalid_argument("k2_grouping must be as_printed or bracketed");
}

FieldStats FieldStats::of(const ScalarField& f)
{
    const auto a = f.values().array();
    return {a.minCoeff(), a.maxCoeff(), a.abs().minCoeff(), a.abs().maxCoeff()};
}

FieldStats FieldStats::of_constant(double c) { return {c, c, std::abs(c), std::abs(c)}; }

ConditionInputs make_inputs(double lambda0, const ScalarField& e0, const ScalarField& psi1, const ScalarField& psi2,
                            const ScalarField& psi3)
{
    ConditionInputs in;
    in.lambda0 = lambda0;
    in.delta_e0 = delta_ratio(e0);
    in.envelopes = envelope_coefficients(psi1, psi2, psi3, e0);
    in.psi = std::array<FieldStats, 3>{FieldStats::of(psi1), FieldStats::of(psi2), FieldStats::of(psi3)};
    const auto& s3 = (*in.psi)[2];
    in.delta_abs_psi3 = s3.max_abs > 0 ? s3.min_abs / s3.max_abs : 0.0;
    return in;
}

double k1_constant(const std::array<FieldStats, 3>& psi)
{
    const double p1 = psi[0].max_abs, p2 = psi[1].max_abs, p3 = psi[2].max_abs, p2m = psi[1].min_abs;
    return safe_div(p3 * std::max(18 * p1 * p2, 4 * p1 * p1 * p1 + 27 * p2 * p2 * p3), 4 * p2m);
}

double k2_constant(const std::array<FieldStats, 3>& psi, K2Grouping g)
{
    const double p1 = psi[0].max_abs, p2 = psi[1].max_abs;
    const double p3p = psi[2].max_abs, p3m = psi[2].min_abs;
    const double first = 36 * p1 * p2 * p3m * (p3m + p3p);
    const double tail = p1 * p1 * p1 * std::pow(p3p + 3 * p3m, 2);
    const double second = g == K2Grouping::AsPrinted ? 27 * p3p * p2 * p2 * p3p * p3p + 3 * p3m * p3m + tail
                                                     : 27 * p3p * p2 * p2 * (p3p * p3p + 3 * p3m * p3m) + tail;
    return safe_div(std::max(first, second), 8 * p2 * (3 * p3m - p3p));
}

double kbar_constant(const EnvelopeSet& e)
{
    const double p1 = e.hi[0], p2 = e.hi[1], p3 = e.hi[2];
    return 1 + std::sqrt(safe_div(std::max(18 * p1 * p2, 4 * p1 * p1 * p1 + 27 * p2 * p2 * p3) * p3, 4 * e.lo[1]));
}

double kb_constant(const EnvelopeSet& e)
{
    const double p1 = e.hi[0], p2 = e.hi[1], p3p = e.hi[2], p3m = e.lo[2];
    const double a = 36 * p1 * p2 * p3m * (p3m + p3p);
    const double b = 27 * p3p * p2 * p2 * (p3p * p3p + 3 * p3m * p3m) + p1 * p1 * p1 * std::pow(p3p + 3 * p3m, 2);
    return safe_div(std::max(a, b), 8 * p2 * (3 * p3m - p3p));
}

std::vector<std::string> theorem_ids()
{
    return {"attractor_positive_cubic",   "attractor_positive_cubic_no_inverse_cube",
            "attractor_negative_cubic",   "attractor_negative_cubic_linear",
            "attractor_zero_cubic",       "attractor_zero_cubic_no_inverse_cube",
            "prescribe_positive_cubic",   "prescribe_negative_cubic",
            "prescribe_zero_cubic",       "prescribe_integrable_normal",
            "prescribe_fibred",           "prescribe_fibred_integrable",
            "prescribe_indefinite_zero_cubic"};
}

std::string default_theorem(RegimeTag regime, const EnvelopeSet& env)
{
    switch (regime) {
    case RegimeTag::A: return env.hi[1] > 0 ? "attractor_positive_cubic" : "attractor_positive_cubic_no_inverse_cube";
    case RegimeTag::B:
        return env.hi[0] == 0 && env.hi[1] == 0 ? "attractor_negative_cubic_linear" : "attractor_negative_cubic";
    case RegimeTag::C1: return "attractor_zero_cubic";
    case RegimeTag::C3: return "attractor_zero_cubic_no_inverse_cube";
    default: return "";
    }
}

ConditionReport check_conditions(const std::string& id, const ConditionInputs& in, const std::string& case_name)
{
    ConditionReport r;
    r.theorem = id;
    r.case_name = case_name.empty() ? default_case(id) : case_name;
    const bool uniq = r.case_name == "uniqueness";
    auto plain = [&](std::initializer_list<const char*> ok) {
        for (const char* s : ok)
            if (r.case_name == s) return;
        throw std::invalid_argument("theorem " + id + " has no case '" + r.case_name + "'");
    };
    if (id == "attractor_positive_cubic") {
        plain({"existence", "uniqueness"});
        positive_cubic(r, in, uniq);
    } else if (id == "attractor_positive_cubic_no_inverse_cube") {
        plain({"existence", "uniqueness"});
        positive_cubic_no_inverse_cube(r, in);
    } else if (id == "attractor_negative_cubic") {
        plain({"existence", "uniqueness"});
        negative_cubic(r, in, uniq);
    } else if (id == "attractor_negative_cubic_linear") {
        plain({"existence", "uniqueness"});
        negative_cubic_linear(r, in);
    } else if (id == "attractor_zero_cubic") {
        plain({"existence", "uniqueness"});
        zero_cubic(r, in);
    } else if (id == "attractor_zero_cubic_no_inverse_cube") {
        plain({"existence", "uniqueness"});
        zero_cubic_no_inverse_cube(r, in);
    } else if (id == "prescribe_positive_cubic") {
        plain({"existence"});
        prescribe_positive(r, in);
    } else if (id == "prescribe_negative_cubic") {
        plain({"existence", "uniqueness"});
        prescribe_negative(r, in, uniq);
    } else if (id == "prescribe_zero_cubic") {
        plain({"existence"});
        prescribe_zero_cubic_case(r, in);
    } else if (id == "prescribe_integrable_normal" || id == "prescribe_fibred_integrable") {
        prescribe_integrable(r, in, r.case_name);
    } else if (id == "prescribe_fibred") {
        prescribe_fibred(r, in, r.case_name);
    } else if (id == "prescribe_indefinite_zero_cubic") {
        plain({"existence"});
        prescribe_indefinite(r, in);
    } else {
        throw std::invalid_argument("unknown theorem id '" + id + "'");
    }
    return r;
}

nlohmann::json to_json(const ConditionReport& r)
{
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); };
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"lhs", num(c.lhs)},
                          {"relation", c.relation},
                          {"rhs", num(c.rhs)},
                          {"pass", c.pass},
                          {"margin", num(c.margin)}});
    nlohmann::json j = {{"theorem", r.theorem}, {"case", r.case_name}, {"checks", checks}, {"all_pass", r.all_pass()}};
    j["phi_interval"] = r.phi_interval ? nlohmann::json::array({num(r.phi_interval->first), num(r.phi_interval->second)})
                                       : nlohmann::json();
    j["lambda0_interval"] = r.lambda0_interval
                                ? nlohmann::json::array({num(r.lambda0_interval->first), num(r.lambda0_interval->second)})
                                : nlohmann::json();
    if (!r.k2_grouping.empty()) j["k2_grouping"] = r.k2_grouping;
    return j;
}

}  // namespace leafwise::cubic
