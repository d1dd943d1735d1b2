#include "leafwise/scenario.hpp"

#include "leafwise/field_io.hpp"
#include "leafwise/geometry.hpp"
#include "leafwise/stationary.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace leafwise::scenario {

namespace {

using nlohmann::json;

double num(const json& j, const char* key, double fallback)
{
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return j[key].get<double>();
}

TorusGrid parse_grid(const json& j)
{
    if (!j.is_object() || !j.contains("points")) throw ConfigError("grid needs 'points'");
    std::vector<int> pts;
    if (j["points"].is_number_integer()) pts = {j["points"].get<int>()};
    else pts = j["points"].get<std::vector<int>>();
    std::vector<double> per(pts.size(), 2 * M_PI);
    if (j.contains("periods")) {
        if (j["periods"].is_number()) per.assign(pts.size(), j["periods"].get<double>());
        else per = j["periods"].get<std::vector<double>>();
    }
    try {
        return TorusGrid::make(pts, per);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
}

bool is_constant(const ScalarField& f)
{
    auto [lo, hi] = min_max(f);
    return lo == hi;
}

void write_atomic(const std::string& path, const std::string& text)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw std::runtime_error("cannot write " + path);
        os << text;
    }
    fs::rename(tmp, path);
}

std::string fmt(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

std::string join(const std::vector<std::string>& v, const char* sep)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

}  // namespace

ScalarField Scenario::beta() const { return beta_top.with_values(beta_top.values() + phi.values()); }

ScalarField field_from_spec(const json& spec, const TorusGrid& grid, const std::string& base_dir)
{
    if (spec.is_number()) return ScalarField::constant(grid, spec.get<double>());
    if (spec.is_array()) {
        auto v = spec.get<std::vector<double>>();
        if (v.size() != grid.size())
            throw ConfigError("inline field has " + std::to_string(v.size()) + " values, grid has " +
                              std::to_string(grid.size()));
        return ScalarField(grid, Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    if (spec.is_string()) {
        fs::path p = fs::path(base_dir) / spec.get<std::string>();
        if (!fs::exists(p)) throw ConfigError("field file not found: " + p.string());
        try {
            return read_field_csv(p.string(), grid);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    if (spec.is_object()) {
        const double c = num(spec, "constant", 0.0);
        struct Term {
            bool cosine;
            double amp;
            std::vector<double> k;
        };
        std::vector<Term> terms;
        for (const auto& t : spec.value("terms", json::array())) {
            const std::string fn = t.value("fn", "cos");
            if (fn != "cos" && fn != "sin") throw ConfigError("term fn must be cos or sin");
            auto k = t.value("k", std::vector<double>{1.0});
            if (k.size() > static_cast<std::size_t>(grid.dim)) throw ConfigError("term has more wavenumbers than axes");
            terms.push_back({fn == "cos", num(t, "amp", 0.0), k});
        }
        return ScalarField::sample(grid, [&](double x, double y) {
            double v = c;
            for (const auto& t : terms) {
                double ph = t.k[0] * 2 * M_PI * x / grid.periods[0];
                if (t.k.size() > 1) ph += t.k[1] * 2 * M_PI * y / grid.periods[1];
                v += t.amp * (t.cosine ? std::cos(ph) : std::sin(ph));
            }
            return v;
        });
    }
    throw ConfigError("unsupported field value");
}

Scenario parse(const json& j, const std::string& base_dir)
{
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
    Scenario s;
    try {
        s.name = j.value("name", "scenario");
        if (!j.contains("grid")) throw ConfigError("scenario needs a 'grid'");
        s.grid = parse_grid(j["grid"]);
        const auto& g = s.grid;

        if (!j.contains("coefficients") || !j["coefficients"].is_object())
            throw ConfigError("scenario needs a 'coefficients' object");
        const auto& c = j["coefficients"];
        int sources = 0;
        for (const char* k : {"constants", "fields", "geometry"})
            if (c.contains(k)) {
                ++sources;
                s.source = k;
            }
        if (sources != 1) throw ConfigError("coefficients need exactly one of constants, fields, geometry");

        const auto& block = c[s.source];
        if (s.source == "geometry") {
            geometry::GeometryInput gi;
            gi.n = block.value("n", 1);
            gi.h_top_sq = field_from_spec(block.value("h_top_sq", json(0.0)), g, base_dir);
            gi.t_bot_sq = field_from_spec(block.value("t_bot_sq", json(0.0)), g, base_dir);
            gi.a_T = field_from_spec(block.value("a_T", json(0.0)), g, base_dir);
            gi.b_T = field_from_spec(block.value("b_T", json(0.0)), g, base_dir);
            gi.s_mix_bar = field_from_spec(block.value("s_mix_bar", json(0.0)), g, base_dir);
            try {
                auto co = geometry::coefficients_from_geometry(gi);
                s.beta_top = co.beta_top;
                s.psi1 = co.psi1;
                s.psi2 = co.psi2;
                s.psi3 = co.psi3;
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("geometry: ") + e.what());
            }
            s.n = gi.n;
            s.h_top_sq = cubic::FieldStats::of(gi.h_top_sq);
            s.t_bot_sq = cubic::FieldStats::of(gi.t_bot_sq);
            s.phi = field_from_spec(c.value("phi", json(0.0)), g, base_dir);
        } else {
            if (s.source == "constants")
                for (const auto& [k, v] : block.items())
                    if (!v.is_number()) throw ConfigError("constant '" + k + "' must be a number");
            s.beta_top = field_from_spec(block.value("beta_top", json(0.0)), g, base_dir);
            s.psi1 = field_from_spec(block.value("psi1", json(0.0)), g, base_dir);
            s.psi2 = field_from_spec(block.value("psi2", json(0.0)), g, base_dir);
            s.psi3 = field_from_spec(block.value("psi3", json(0.0)), g, base_dir);
            s.phi = field_from_spec(block.value("phi", json(0.0)), g, base_dir);
            s.n = c.value("n", 1);
        }

        const std::string op = j.value("spectral_operator", "beta_top_plus_phi");
        if (op == "beta_top_plus_phi") s.spectral_operator = SpectralOperator::Full;
        else if (op == "beta_top") s.spectral_operator = SpectralOperator::TopOnly;
        else throw ConfigError("spectral_operator must be beta_top_plus_phi or beta_top");
        if (s.spectral_operator == SpectralOperator::TopOnly && !is_constant(s.phi))
            throw ConfigError("spectral_operator beta_top needs a constant Phi");

        if (j.contains("expect_regime")) s.expect_regime = cubic::regime_from_string(j["expect_regime"]);
        if (j.contains("theorem")) {
            s.theorem = j["theorem"].get<std::string>();
            auto ids = cubic::theorem_ids();
            if (std::find(ids.begin(), ids.end(), *s.theorem) == ids.end())
                throw ConfigError("unknown theorem '" + *s.theorem + "'");
        }
        s.case_name = j.value("case", "");
        if (j.contains("k2_grouping")) s.k2 = cubic::k2_grouping_from_string(j["k2_grouping"]);

        if (j.contains("evolution")) {
            const auto& e = j["evolution"];
            auto& cfg = s.evolution;
            cfg.t_end = num(e, "t_end", cfg.t_end);
            cfg.dt_initial = num(e, "dt_initial", cfg.dt_initial);
            cfg.dt_max = num(e, "dt_max", cfg.dt_max);
            cfg.rtol = num(e, "rtol", cfg.rtol);
            cfg.atol = num(e, "atol", cfg.atol);
            cfg.snapshot_dt = num(e, "snapshot_dt", cfg.snapshot_dt);
            cfg.adaptive = e.value("adaptive", cfg.adaptive);
            if (e.contains("scheme")) cfg.scheme = heat::scheme_from_string(e["scheme"]);
            if (!(cfg.t_end > 0) || !(cfg.dt_initial > 0)) throw ConfigError("t_end and dt_initial must be positive");
        }
        if (j.contains("initial")) {
            const auto& in = j["initial"];
            if (in.contains("ratio") == in.contains("field"))
                throw ConfigError("initial needs exactly one of ratio, field");
            if (in.contains("ratio")) {
                s.initial_ratio = num(in, "ratio", 1.0);
                if (!(*s.initial_ratio > 0)) throw ConfigError("initial ratio must be positive");
            } else {
                s.initial_field = field_from_spec(in["field"], g, base_dir);
                if (!(s.initial_field->values().minCoeff() > 0)) throw ConfigError("initial field must be positive");
            }
        }
        if (j.contains("probe")) {
            s.probe_seeds = j["probe"].value("seeds", 0);
            s.probe_tolerance = num(j["probe"], "tolerance", s.probe_tolerance);
        }
        if (j.contains("seed")) s.seed = j["seed"].get<unsigned long long>();
        if (s.probe_seeds > 0 && !s.seed) throw ConfigError("scenarios with random probes need a 'seed'");
        s.output = j.value("output", "");

        heat::ReactionFields{s.beta(), s.psi1, s.psi2, s.psi3}.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed scenario: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

Scenario load(const std::string& path, std::optional<unsigned long long> seed)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.contains("name")) j["name"] = fs::path(path).stem().string();
    if (seed) j["seed"] = *seed;
    return parse(j, fs::path(path).parent_path().string().empty() ? "." : fs::path(path).parent_path().string());
}

std::vector<std::string> RunResult::failed() const
{
    std::vector<std::string> out;
    for (const auto& c : certificates)
        if (!c.pass) out.push_back(c.name);
    return out;
}

RunResult run_pipeline(const Scenario& s, const RunOptions& opt)
{
    RunResult r;
    auto& rep = r.report;
    auto cert = [&](const std::string& name, bool pass, const std::string& detail = "") {
        r.certificates.push_back({name, pass, detail});
    };

    const ScalarField beta = s.beta();
    heat::ReactionFields f{beta, s.psi1, s.psi2, s.psi3};
    f.validate();
    rep["scenario"] = s.name;
    rep["source"] = s.source;
    rep["grid"] = grid_to_json(s.grid);
    if (s.seed) rep["seed"] = *s.seed;

    // spectral pair of the full operator; the top-only convention is a constant shift of it
    spectral::SpectralResult sr;
    if (s.spectral_operator == SpectralOperator::TopOnly) {
        sr = spectral::ground_state(s.beta_top, {1e-11});
        rep["spectral_top"] = spectral::to_json(sr, false);
        sr.lambda0 -= s.phi[0];
        sr.lambda1 -= s.phi[0];
    } else {
        sr = spectral::ground_state(beta, {1e-11});
    }
    rep["spectral"] = spectral::to_json(sr, false);
    rep["spectral"]["operator"] = s.spectral_operator == SpectralOperator::Full ? "beta_top_plus_phi" : "beta_top";
    r.spec = sr;
    const ScalarField& e0 = sr.ground_state;

    const auto regime = cubic::classify_fields(sr.lambda0, s.psi1, s.psi2, s.psi3);
    rep["regime"] = cubic::to_string(regime);
    if (s.expect_regime)
        cert("regime_expectation", regime == *s.expect_regime,
             "expected " + cubic::to_string(*s.expect_regime) + ", got " + cubic::to_string(regime));

    const auto env = cubic::envelope_coefficients(s.psi1, s.psi2, s.psi3, e0);
    rep["envelopes"] = cubic::to_json(env);

    const std::string theorem = s.theorem ? *s.theorem : cubic::default_theorem(regime, env);
    if (theorem.empty()) {
        cert("hypotheses", false, "no theorem covers regime " + cubic::to_string(regime));
        rep["conditions"] = nullptr;
    } else {
        auto in = cubic::make_inputs(sr.lambda0, e0, s.psi1, s.psi2, s.psi3);
        in.beta_top = cubic::FieldStats::of(s.beta_top);
        in.h_top_sq = s.h_top_sq;
        in.t_bot_sq = s.t_bot_sq;
        in.n = s.n;
        in.k2 = s.k2;
        auto cond = cubic::check_conditions(theorem, in, s.case_name);
        rep["conditions"] = cubic::to_json(cond);
        cert("hypotheses", cond.all_pass(), join(cond.failed(), ", "));
        if (cond.phi_interval && is_constant(s.phi)) {
            const double p = s.phi[0];
            cert("phi_in_interval", p > cond.phi_interval->first && p < cond.phi_interval->second,
                 "Phi = " + fmt(p) + " vs (" + fmt(cond.phi_interval->first) + ", " +
                     fmt(cond.phi_interval->second) + ")");
        }
    }

    std::optional<cubic::RootLadder> ladder;
    try {
        ladder = cubic::root_ladder(regime, sr.lambda0, env);
        rep["ladder"] = cubic::to_json(*ladder);
        cert("root_ordering", ladder->strict_ordering);
        r.y2 = std::make_pair(ladder->y2_minus(), ladder->y2_plus());
    } catch (const cubic::HypothesisError& e) {
        rep["ladder"] = nullptr;
        cert("root_ladder", false, e.failed() + ": " + e.what());
    } catch (const std::exception& e) {
        rep["ladder"] = nullptr;
        cert("root_ladder", false, e.what());
    }

    double eps = 0, eta = 0;
    heat::EvolutionConfig cfg = s.evolution;
    cfg.e0 = e0;
    if (ladder) {
        eps = 0.5 * ladder->eps_max;
        eta = std::isfinite(ladder->eta_max) ? 0.5 * ladder->eta_max : 0.5 * ladder->y2_plus();
        cfg.band = std::make_pair(ladder->y2_minus() - eps, ladder->y2_plus() + eta);
    }
    const double ratio = s.initial_ratio ? *s.initial_ratio
                         : ladder        ? ladder->y2_minus() - 0.5 * eps
                                         : 1.0;
    const ScalarField u0 = s.initial_field ? *s.initial_field : e0.with_values(ratio * e0.values());

    auto flow = heat::evolve(f, u0, cfg);
    rep["evolution"] = {{"initial_ratio", s.initial_field ? json(nullptr) : json(ratio)},
                        {"terminal", heat::to_string(flow.trace.terminal)},
                        {"t_final", flow.trace.t_final},
                        {"accepted", flow.trace.accepted},
                        {"rejected", flow.trace.rejected},
                        {"diagnosis", flow.trace.diagnosis}};
    r.trace = flow.trace;
    const bool converged = flow.trace.terminal == heat::Terminal::Converged;
    cert("flow_converged", converged, heat::to_string(flow.trace.terminal));

    std::optional<stationary::StationarySolution> sol;
    if (converged) {
        try {
            sol = stationary::solve_stationary(f, flow.u_final, e0);
            rep["stationary"] = stationary::to_json(*sol);
            r.u_star = sol->u_star;
            cert("stationary_residual", sol->elliptic_residual < 1e-8, fmt(sol->elliptic_residual));
            cert("linearization_gap", sol->linearization_gap > 0, fmt(sol->linearization_gap));
            if (ladder) {
                const double lo = ladder->y2_minus(), hi = ladder->y2_plus();
                const auto [a, b] = sol->ratio_bounds;
                cert("ratio_bounds", a >= lo - 1e-9 * (1 + lo) && b <= hi + 1e-9 * (1 + hi),
                     "[" + fmt(a) + ", " + fmt(b) + "] in [" + fmt(lo) + ", " + fmt(hi) + "]");
            }
        } catch (const std::exception& e) {
            rep["stationary"] = nullptr;
            cert("stationary", false, e.what());
        }
    }

    if (!opt.light && sol) {
        heat::EvolutionConfig c2 = cfg;
        c2.limit = sol->u_star;
        auto decay_run = heat::evolve(f, u0, c2);
        r.trace = decay_run.trace;
        try {
            auto fit = heat::fit_decay_rate(decay_run.trace);
            rep["decay"] = {{"rate", fit.rate}, {"r_squared", fit.r_squared}, {"used", fit.used}};
            if (ladder && ladder->mu_plus) {
                rep["decay"]["mu_plus"] = *ladder->mu_plus;
                cert("decay_rate", fit.rate >= 0.9 * *ladder->mu_plus,
                     fmt(fit.rate) + " vs mu+ " + fmt(*ladder->mu_plus));
            }
        } catch (const std::exception& e) {
            rep["decay"] = nullptr;
            cert("decay_rate", false, e.what());
        }
        if (ladder) {
            try {
                auto sw = heat::sandwich_check(decay_run.trace, *ladder, sr.lambda0, env, eps, eta);
                rep["sandwich"] = {{"violations", sw.violations}, {"worst_margin", sw.worst_margin}};
                cert("sandwich", sw.holds, std::to_string(sw.violations) + " violations");
            } catch (const std::exception& e) {
                rep["sandwich"] = nullptr;
                cert("sandwich", false, e.what());
            }
        }
    }

    if (!opt.light && ladder && s.probe_seeds > 0) {
        stationary::ProbeOptions po;
        po.n_seeds = s.probe_seeds;
        po.seed = *s.seed;
        po.tolerance = s.probe_tolerance;
        po.threads = opt.threads;
        auto pr = stationary::uniqueness_probe(f, e0, *ladder, po);
        rep["probe"] = stationary::to_json(pr);
        cert("uniqueness_probe", pr.pass,
             std::to_string(pr.converged) + " converged, max pairwise " + fmt(pr.max_pairwise));
    }

    bool all = true;
    json cs = json::array();
    for (const auto& c : r.certificates) {
        cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        all = all && c.pass;
    }
    rep["certificates"] = cs;
    rep["all_pass"] = all;
    r.exit_code = all ? 0 : 1;
    rep["exit_code"] = r.exit_code;
    return r;
}

void write_outputs(const Scenario& s, const RunResult& r, const std::string& dir)
{
    fs::create_directories(fs::path(dir) / "fields");
    fs::create_directories(fs::path(dir) / "plotdata");
    write_atomic((fs::path(dir) / "report.json").string(), r.report.dump(2) + "\n");
    if (r.trace) heat::write_trace_csv((fs::path(dir) / "trace.csv").string(), *r.trace);

    auto field = [&](const char* name, const ScalarField& f) {
        write_field_csv((fs::path(dir) / "fields" / (std::string(name) + ".csv")).string(), f);
    };
    field("beta", s.beta());
    field("beta_top", s.beta_top);
    field("psi1", s.psi1);
    field("psi2", s.psi2);
    field("psi3", s.psi3);
    if (r.spec) field("e0", r.spec->ground_state);
    if (r.u_star) field("u_star", *r.u_star);

    if (r.trace) {
        std::ofstream os(fs::path(dir) / "plotdata" / "sup_distance.csv");
        os << "t,sup_dist\n" << std::setprecision(12);
        for (std::size_t i = 0; i < r.trace->times.size(); ++i)
            os << r.trace->times[i] << "," << fmt(r.trace->sup_dist[i]) << "\n";
    }
    if (r.u_star && r.spec) {
        std::ofstream os(fs::path(dir) / "plotdata" / "ratio_profile.csv");
        os << "x,y,ratio,y2_minus,y2_plus\n" << std::setprecision(12);
        const auto& g = s.grid;
        for (std::size_t i = 0; i < g.size(); ++i) {
            os << g.coordinate(i, 0) << "," << (g.dim > 1 ? g.coordinate(i, 1) : 0.0) << ","
               << (*r.u_star)[i] / r.spec->ground_state[i] << "," << (r.y2 ? fmt(r.y2->first) : "nan") << ","
               << (r.y2 ? fmt(r.y2->second) : "nan") << "\n";
        }
    }
}

Scenario with_parameter(const Scenario& s, const std::string& param, double value)
{
    Scenario o = s;
    auto scaled = [&](const ScalarField& f) { return f.with_values(value * f.values()); };
    if (param == "Phi") o.phi = ScalarField::constant(s.grid, value);
    else if (param == "beta_shift") o.beta_top = s.beta_top.with_values(s.beta_top.values().array() + value);
    else if (param == "psi1_scale") o.psi1 = scaled(s.psi1);
    else if (param == "psi2_scale") o.psi2 = scaled(s.psi2);
    else if (param == "psi3_scale") o.psi3 = scaled(s.psi3);
    else throw ConfigError("sweep parameter must be Phi, beta_shift, psi1_scale, psi2_scale or psi3_scale");
    try {
        heat::ReactionFields{o.beta(), o.psi1, o.psi2, o.psi3}.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return o;
}

std::vector<SweepRow> sweep(const Scenario& s, const SweepOptions& opt)
{
    if (opt.steps < 2 || !(opt.from < opt.to)) throw ConfigError("sweep range is empty (need from < to and steps >= 2)");
    with_parameter(s, opt.param, opt.from);
    with_parameter(s, opt.param, opt.to);

    std::vector<SweepRow> rows(static_cast<std::size_t>(opt.steps));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next++; i < opt.steps; i = next++) {
            const double v = opt.from + (opt.to - opt.from) * i / (opt.steps - 1);
            auto& row = rows[static_cast<std::size_t>(i)];
            row.index = i;
            row.value = v;
            json j{{"index", i}, {"param", opt.param}, {"value", v}};
            try {
                auto sc = with_parameter(s, opt.param, v);
                RunOptions ro;
                ro.light = true;
                ro.threads = 1;
                auto r = run_pipeline(sc, ro);
                const auto& rep = r.report;
                j["regime"] = rep["regime"];
                j["lambda0"] = rep["spectral"]["lambda0"];
                const auto& cond = rep["conditions"];
                j["theorem"] = cond.is_null() ? "" : cond["theorem"].get<std::string>();
                j["hypotheses_pass"] = !cond.is_null() && cond["all_pass"].get<bool>();
                std::vector<std::string> margins, failed;
                if (!cond.is_null())
                    for (const auto& c : cond["checks"]) {
                        const double m = c["margin"].is_number() ? c["margin"].get<double>() : NAN;
                        margins.push_back(c["name"].get<std::string>() + "=" + fmt(m));
                        if (!c["pass"].get<bool>()) failed.push_back(c["name"]);
                    }
                j["margins"] = join(margins, ";");
                j["failed_checks"] = join(failed, ";");
                const bool has_phi = !cond.is_null() && cond["phi_interval"].is_array();
                j["phi_lo"] = has_phi ? cond["phi_interval"][0] : json(nullptr);
                j["phi_hi"] = has_phi ? cond["phi_interval"][1] : json(nullptr);
                j["y2_minus"] = r.y2 ? json(r.y2->first) : json(nullptr);
                j["y2_plus"] = r.y2 ? json(r.y2->second) : json(nullptr);
                j["terminal"] = rep["evolution"]["terminal"];
                j["converged"] = rep["evolution"]["terminal"] == "converged";
                const bool st = rep.contains("stationary") && !rep["stationary"].is_null();
                j["ratio_min"] = st ? rep["stationary"]["ratio_bounds"][0] : json(nullptr);
                j["ratio_max"] = st ? rep["stationary"]["ratio_bounds"][1] : json(nullptr);
                j["exit_code"] = r.exit_code;
                j["error"] = "";
                row.row = j;
                if (!opt.points_dir.empty()) {
                    std::ostringstream name;
                    name << "point_" << std::setw(4) << std::setfill('0') << i << ".json";
                    write_atomic((fs::path(opt.points_dir) / name.str()).string(), rep.dump(2) + "\n");
                }
            } catch (const std::exception& e) {
                j["error"] = e.what();
                j["converged"] = false;
                j["hypotheses_pass"] = false;
                row.row = j;
            }
        }
    };
    int nt = opt.threads > 0 ? opt.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    nt = std::min(nt, opt.steps);
    if (!opt.points_dir.empty()) fs::create_directories(opt.points_dir);
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows)
{
    static const std::vector<std::string> cols{
        "index",    "param",    "value",      "regime",  "lambda0",   "theorem",   "hypotheses_pass",
        "phi_lo",   "phi_hi",   "y2_minus",   "y2_plus", "terminal",  "converged", "ratio_min",
        "ratio_max", "exit_code", "failed_checks", "margins", "error"};
    std::ostringstream os;
    os << join(cols, ",") << "\n";
    for (const auto& r : rows) {
        std::vector<std::string> cells;
        for (const auto& c : cols) {
            const auto& v = r.row.contains(c) ? r.row[c] : json(nullptr);
            std::string cell;
            if (v.is_null()) cell = "";
            else if (v.is_string()) cell = v.get<std::string>();
            else if (v.is_boolean()) cell = v.get<bool>() ? "1" : "0";
            else if (v.is_number_integer()) cell = std::to_string(v.get<long long>());
            else if (v.is_number()) cell = fmt(v.get<double>());
            else cell = v.dump();
            if (cell.find_first_of(",\"") != std::string::npos) {
                std::string q = "\"";
                for (char ch : cell) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                cell = q + "\"";
            }
            cells.push_back(cell);
        }
        os << join(cells, ",") << "\n";
    }
    write_atomic(path, os.str());
}

}  // namespace leafwise::scenario
