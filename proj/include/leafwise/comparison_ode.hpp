#pragma once
#include "leafwise/cubic_kit.hpp"
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace leafwise::ode {

// f(y) = beta y + psi1 / y - psi2 / y^3 + psi3 y^3 = P(y^2) / y^3
using OdeParams = cubic::OdeCoefficients;

double rhs(const OdeParams& p, double y);
double rhs_derivative(const OdeParams& p, double y);

// beta = -lambda0
OdeParams from_lambda0(double lambda0, double psi1, double psi2, double psi3);

enum class Stability { Stable, Unstable, Marginal };
std::string to_string(Stability s);

struct StationaryPoint {
    double y = 0;
    double slope = 0;  // f'(y)
    Stability stability = Stability::Marginal;
};

std::vector<StationaryPoint> stationary_points(const OdeParams& p);

enum class Terminal { Converged, BlowDown, BlowUp, MaxTime };
std::string to_string(Terminal t);

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol = 1e-13;
    double h_initial = 1e-3;
    double h_max = 0.5;
    bool stop_on_convergence = true;
    std::vector<double> sample_times;  // ascending; when set only these are stored
    long max_steps = 5'000'000;
};

struct OdeRun {
    OdeParams params{};
    double y0 = 0;
    double t_end = 0;
    std::vector<double> times, values;
    Terminal terminal = Terminal::MaxTime;
    double y_final = 0;
    double t_final = 0;
    long accepted = 0, rejected = 0;
};

constexpr double kBlowUp = 1e6;
constexpr double kBlowDown = 1e-8;

// Dormand-Prince 5(4) with step rejection whenever a trial leaves y > 0.
OdeRun integrate(const OdeParams& p, double y0, double t_end, const IntegrateOptions& opt = {});

nlohmann::json to_json(const OdeRun& r);
void write_run_csv(const std::string& path, const OdeRun& r);

struct ExpFit {
    double rate = 0;       // d ~ C exp(-rate t)
    double r_squared = 0;
    std::size_t used = 0;
};

// Log-linear least squares over the last decade above floor, widened until min_points are used.
ExpFit fit_exponential(const std::vector<double>& t, const std::vector<double>& d, double floor = 1e-10,
                       std::size_t min_points = 10);

}  // namespace leafwise::ode
