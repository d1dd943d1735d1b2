#include "leafwise/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace leafwise;

namespace {

std::string out_dir(const scenario::Scenario& s, const std::string& flag)
{
    if (!flag.empty()) return flag;
    if (!s.output.empty()) return s.output;
    return "out/" + s.name;
}

int solve(const std::string& path, const std::string& out, int threads, std::optional<unsigned long long> seed)
{
    auto s = scenario::load(path, seed);
    scenario::RunOptions ro;
    ro.threads = threads;
    auto r = scenario::run_pipeline(s, ro);
    const auto dir = out_dir(s, out);
    scenario::write_outputs(s, r, dir);
    std::cout << s.name << ": regime " << r.report["regime"].get<std::string>() << ", lambda0 "
              << r.report["spectral"]["lambda0"].get<double>() << "\n";
    for (const auto& c : r.certificates)
        std::cout << "  " << (c.pass ? "ok    " : "FAILED") << " " << c.name << (c.detail.empty() ? "" : "  " + c.detail)
                  << "\n";
    for (const auto& name : r.failed()) std::cerr << "failed certificate: " << name << "\n";
    std::cout << "wrote " << dir << "\n";
    return r.exit_code;
}

int run_sweep(const std::string& path, const std::string& out, int threads, std::optional<unsigned long long> seed,
              const scenario::SweepOptions& base)
{
    auto s = scenario::load(path, seed);
    auto opt = base;
    opt.threads = threads;
    const auto dir = out_dir(s, out);
    opt.points_dir = (std::filesystem::path(dir) / "points").string();
    auto rows = scenario::sweep(s, opt);
    scenario::write_sweep_csv((std::filesystem::path(dir) / "sweep.csv").string(), rows);
    int converged = 0;
    for (const auto& r : rows) converged += r.row.value("converged", false) ? 1 : 0;
    std::cout << s.name << ": " << rows.size() << " points, " << converged << " converged\nwrote " << dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Leafwise elliptic solver: scenario runs and parameter sweeps"};
    app.require_subcommand(1);

    std::string scenario_path, out;
    int threads = 0;
    std::optional<unsigned long long> seed;
    scenario::SweepOptions sw;

    auto* solve_cmd = app.add_subcommand("solve", "run the full pipeline on one scenario");
    solve_cmd->add_option("scenario", scenario_path, "scenario JSON")->required();

    auto* sweep_cmd = app.add_subcommand("sweep", "run the pipeline across a parameter range");
    sweep_cmd->add_option("scenario", scenario_path, "scenario JSON")->required();
    sweep_cmd->add_option("--param", sw.param, "Phi, beta_shift, psi1_scale, psi2_scale or psi3_scale")->required();
    sweep_cmd->add_option("--from", sw.from, "range start")->required();
    sweep_cmd->add_option("--to", sw.to, "range end")->required();
    sweep_cmd->add_option("--steps", sw.steps, "number of points")->required();

    for (auto* cmd : {solve_cmd, sweep_cmd}) {
        cmd->add_option("--out", out, "output directory");
        cmd->add_option("--threads", threads, "worker threads, 0 for all cores");
        cmd->add_option("--seed", seed, "RNG seed, overrides the scenario");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve_cmd) return solve(scenario_path, out, threads, seed);
        return run_sweep(scenario_path, out, threads, seed, sw);
    } catch (const scenario::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
