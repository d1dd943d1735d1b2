#include <doctest.h>

#include "leafwise/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace leafwise;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = LEAFWISE_CLI;
const std::string kScenarios = SCENARIO_DIR;

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("leafwise_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args)
{
    const int st = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json small_constant(double psi2)
{
    return {{"name", "tiny"},
            {"grid", {{"points", 16}}},
            {"coefficients", {{"constants", {{"beta_top", -1}, {"psi1", 4}, {"psi2", psi2}, {"psi3", 0}}}}},
            {"evolution", {{"t_end", 40}}}};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p)
{
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') quoted = !quoted;
            else if (c == ',' && !quoted) {
                cells.push_back(cell);
                cell.clear();
            } else cell += c;
        }
        cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name)
{
    return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
}

}  // namespace

TEST_CASE("bundled regime A scenario: three roots, stable middle root, exit 0")
{
    auto dir = scratch("regimeA");
    CHECK(run_cli("solve " + kScenarios + "/regimeA_constant.json --out " + dir.string()) == 0);
    auto rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep["regime"] == "A");
    CHECK(rep["all_pass"] == true);
    CHECK(rep["exit_code"] == 0);
    CHECK(rep["stationary"]["gap"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    // constant data: u* = 1, the middle of the roots 1/2, 1, 2 of P(z) = (z - 1/2)(z - 1)(z - 2)
    const double e0 = 1 / std::sqrt(2 * M_PI);
    CHECK(rep["ladder"]["roots_minus"]["y2"].get<double>() == doctest::Approx(1 / e0));
    CHECK(rep["ladder"]["roots_minus"]["y3"].get<double>() == doctest::Approx(std::sqrt(0.5) / e0));
    CHECK(rep["ladder"]["roots_minus"]["y1"].get<double>() == doctest::Approx(std::sqrt(2.0) / e0));
    for (const char* f : {"trace.csv", "fields/u_star.csv", "fields/e0.csv", "plotdata/sup_distance.csv",
                          "plotdata/ratio_profile.csv"})
        CHECK(fs::exists(dir / f));
}

TEST_CASE("bundled zero-cubic scenario: ratio bounds inside the y2 band")
{
    auto dir = scratch("c1");
    CHECK(run_cli("solve " + kScenarios + "/c1_variable_beta.json --out " + dir.string()) == 0);
    auto rep = json::parse(slurp(dir / "report.json"));
    const double lo = rep["stationary"]["ratio_bounds"][0], hi = rep["stationary"]["ratio_bounds"][1];
    CHECK(lo >= rep["ladder"]["roots_minus"]["y2"].get<double>());
    CHECK(hi <= rep["ladder"]["roots_plus"]["y2"].get<double>());
    CHECK(rep["probe"]["pass"] == true);
}

TEST_CASE("report.json is byte-identical across runs with the same seed")
{
    auto a = scratch("repro_a"), b = scratch("repro_b");
    REQUIRE(run_cli("solve " + kScenarios + "/c1_variable_beta.json --threads 3 --out " + a.string()) == 0);
    REQUIRE(run_cli("solve " + kScenarios + "/c1_variable_beta.json --threads 3 --out " + b.string()) == 0);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
}

TEST_CASE("config errors exit 2")
{
    auto dir = scratch("config");
    auto write = [&](const std::string& name, const json& j) {
        std::ofstream(dir / name) << j.dump();
        return (dir / name).string();
    };

    auto neg = small_constant(0.5);
    neg["coefficients"]["constants"]["psi2"] = nullptr;
    neg["coefficients"].erase("constants");
    neg["coefficients"]["fields"] = {{"beta_top", -1}, {"psi1", 4},
                                     {"psi2", {{"constant", 0.1}, {"terms", {{{"fn", "sin"}, {"amp", 0.5}}}}}}};
    CHECK(run_cli("solve " + write("neg.json", neg)) == 2);
    try {
        scenario::parse(neg);
        FAIL("negative Psi2 accepted");
    } catch (const scenario::ConfigError& e) {
        CHECK(std::string(e.what()).find("Psi2 >= 0") != std::string::npos);
    }

    auto two = small_constant(0.5);
    two["coefficients"]["fields"] = {{"psi1", 1}};
    CHECK(run_cli("solve " + write("two.json", two)) == 2);

    auto probe = small_constant(0.5);
    probe["probe"] = {{"seeds", 4}};
    CHECK(run_cli("solve " + write("probe.json", probe)) == 2);
    CHECK(run_cli("solve " + write("probe2.json", probe) + " --seed 5 --out " + (dir / "p").string()) == 0);

    auto missing = small_constant(0.5);
    missing["coefficients"]["constants"].erase("psi1");
    missing["coefficients"].erase("constants");
    missing["coefficients"]["fields"] = {{"psi1", "nowhere.csv"}};
    CHECK(run_cli("solve " + write("missing.json", missing)) == 2);

    CHECK(run_cli("solve " + (dir / "absent.json").string()) == 2);
    CHECK(run_cli("solve") == 2);
    CHECK(run_cli("sweep " + write("ok.json", small_constant(0.5)) + " --param Phi --from 1 --to 1 --steps 4") == 2);
    CHECK(run_cli("sweep " + (dir / "ok.json").string() + " --param Phi --from 0 --to 1 --steps 1") == 2);
    CHECK(run_cli("sweep " + (dir / "ok.json").string() + " --param gamma --from 0 --to 1 --steps 3") == 2);
    CHECK(run_cli("sweep " + (dir / "ok.json").string() + " --param psi2_scale --from -1 --to 1 --steps 3") == 2);
}

TEST_CASE("failed certificate exits 1 and names the check")
{
    auto j = small_constant(0.5);
    j["expect_regime"] = "A";
    auto s = scenario::parse(j);
    auto r = scenario::run_pipeline(s);
    CHECK(r.exit_code == 1);
    CHECK(r.failed() == std::vector<std::string>{"regime_expectation"});

    // lambda0 = 1 above Psi1^2 / (4 Psi2) = 0.5: no stable root
    auto k = small_constant(8);
    auto rk = scenario::run_pipeline(scenario::parse(k));
    CHECK(rk.exit_code == 1);
    CHECK(rk.report["conditions"]["all_pass"] == false);
    auto f = rk.failed();
    CHECK(std::find(f.begin(), f.end(), "hypotheses") != f.end());
}

TEST_CASE("Phi sweep: converged rows coincide with the predicted interval")
{
    auto dir = scratch("sweep_phi");
    REQUIRE(run_cli("sweep " + kScenarios + "/geometry_c1_phi.json --param Phi --from -1.5 --to 0.5 --steps 21 --out " +
                    dir.string()) == 0);
    auto rows = read_csv(dir / "sweep.csv");
    REQUIRE(rows.size() == 22);
    const auto& h = rows[0];
    const auto cv = column(h, "converged"), hp = column(h, "hypotheses_pass"), val = column(h, "value");
    // the predicted edge lambda0 = 0 lies in (-0.1, 0); allow one grid step of disagreement
    int mismatches = 0;
    double last_pred = -1e9, last_conv = -1e9;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double v = std::stod(rows[i][val]);
        if (rows[i][hp] == "1") last_pred = v;
        if (rows[i][cv] == "1") last_conv = v;
        mismatches += rows[i][cv] != rows[i][hp];
    }
    CHECK(mismatches <= 1);
    CHECK(std::abs(last_pred - last_conv) <= 0.1 + 1e-12);
    CHECK(last_pred == doctest::Approx(-0.1));
    CHECK(fs::exists(dir / "points" / "point_0000.json"));
}

TEST_CASE("psi3 scale sweep flips the regime at the sign change")
{
    auto s = scenario::load(kScenarios + "/regimeA_constant.json");
    scenario::SweepOptions o{"psi3_scale", -1, 1, 5, 2, ""};
    auto rows = scenario::sweep(s, o);
    std::vector<std::string> tags;
    for (const auto& r : rows) tags.push_back(r.row["regime"]);
    CHECK(tags == std::vector<std::string>{"B", "B", "C1", "A", "A"});
}

TEST_CASE("field value formats")
{
    auto g = TorusGrid::line(8, 2 * M_PI);
    auto f = scenario::field_from_spec(json{{"constant", 1}, {"terms", {{{"fn", "cos"}, {"amp", 0.5}, {"k", {2}}}}}},
                                       g, ".");
    CHECK(f[1] == doctest::Approx(1 + 0.5 * std::cos(2 * 2 * M_PI / 8)));
    CHECK(scenario::field_from_spec(json(3.0), g, ".")[5] == 3.0);
    CHECK(scenario::field_from_spec(json::array({0, 1, 2, 3, 4, 5, 6, 7}), g, ".")[6] == 6);
    CHECK_THROWS_AS(scenario::field_from_spec(json::array({1, 2}), g, "."), scenario::ConfigError);
    CHECK_THROWS_AS(scenario::field_from_spec(json("nope.csv"), g, "."), scenario::ConfigError);
}
