#include "leafwise/comparison_ode.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace leafwise::ode {

double rhs(const OdeParams& p, double y)
{
    const double y2 = y * y;
    return p.beta * y + p.psi1 / y - p.psi2 / (y2 * y) + p.psi3 * y2 * y;
}

double rhs_derivative(const OdeParams& p, double y)
{
    const double y2 = y * y;
    return p.beta - p.psi1 / y2 + 3 * p.psi2 / (y2 * y2) + 3 * p.psi3 * y2;
}

OdeParams from_lambda0(double lambda0, double psi1, double psi2, double psi3) { return {-lambda0, psi1, psi2, psi3}; }

std::string to_string(Stability s)
{
    switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    default: return "marginal";
    }
}

std::string to_string(Terminal t)
{
    switch (t) {
    case Terminal::Converged: return "converged";
    case Terminal::BlowDown: return "blow_down";
    case Terminal::BlowUp: return "blow_up";
    default: return "max_time";
    }
}

std::vector<StationaryPoint> stationary_points(const OdeParams& p)
{
    std::vector<StationaryPoint> out;
    if (p.psi3 == 0 && p.beta == 0 && p.psi1 == 0 && p.psi2 == 0) return out;
    auto ca = cubic::roots_cubic(p.psi3, p.beta, p.psi1, -p.psi2);
    std::vector<double> z = ca.positive_roots();
    for (std::size_t i = 0; i < z.size(); ++i) {
        const bool dup = i + 1 < z.size() && z[i + 1] == z[i];
        StationaryPoint s;
        s.y = std::sqrt(z[i]);
        s.slope = rhs_derivative(p, s.y);
        if (dup || std::abs(s.slope) <= 1e-10) s.stability = Stability::Marginal;
        else s.stability = s.slope < 0 ? Stability::Stable : Stability::Unstable;
        out.push_back(s);
        if (dup) {
            while (i + 1 < z.size() && z[i + 1] == z[i]) ++i;
        }
    }
    return out;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Trial {
    bool ok = false;
    double y = 0, err = 0, k7 = 0;
};

Trial dopri_step(const OdeParams& p, double y, double k1, double h)
{
    Trial t;
    auto f = [&](double v, double& out) {
        if (!(v > 0) || !std::isfinite(v)) return false;
        out = rhs(p, v);
        return std::isfinite(out);
    };
    double k2, k3, k4, k5, k6, k7;
    if (!f(y + h * a21 * k1, k2)) return t;
    if (!f(y + h * (a31 * k1 + a32 * k2), k3)) return t;
    if (!f(y + h * (a41 * k1 + a42 * k2 + a43 * k3), k4)) return t;
    if (!f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), k5)) return t;
    if (!f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), k6)) return t;
    const double yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    if (!f(yn, k7)) return t;
    t.ok = true;
    t.y = yn;
    t.k7 = k7;
    t.err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return t;
}

bool is_converged(const OdeParams& p, double y) { return std::abs(rhs(p, y)) < 1e-10 && rhs_derivative(p, y) < 0; }

}  // namespace

OdeRun integrate(const OdeParams& p, double y0, double t_end, const IntegrateOptions& opt)
{
    if (!(y0 > 0)) throw std::invalid_argument("initial value must be positive");
    if (!(t_end > 0)) throw std::invalid_argument("t_end must be positive");
    OdeRun run;
    run.params = p;
    run.y0 = y0;
    run.t_end = t_end;
    const bool sampled = !opt.sample_times.empty();
    std::size_t next = 0;
    auto record = [&](double t, double y) {
        run.times.push_back(t);
        run.values.push_back(y);
    };
    double t = 0, y = y0, h = std::min(opt.h_initial, t_end);
    if (sampled) {
        while (next < opt.sample_times.size() && opt.sample_times[next] <= 0) {
            record(opt.sample_times[next], y);
            ++next;
        }
    } else {
        record(0, y);
    }
    double k1 = rhs(p, y);
    const double eps = std::numeric_limits<double>::epsilon();
    auto finish = [&](Terminal term) {
        run.terminal = term;
        run.y_final = y;
        run.t_final = t;
        return run;
    };
    if (!sampled && opt.stop_on_convergence && is_converged(p, y)) return finish(Terminal::Converged);

    while (t < t_end) {
        if (run.accepted + run.rejected > opt.max_steps) throw std::runtime_error("ODE step budget exhausted");
        double target = t_end;
        if (sampled && next < opt.sample_times.size()) target = std::min(target, opt.sample_times[next]);
        double hs = std::min({h, opt.h_max, target - t});
        if (hs < 16 * eps * std::max(1.0, std::abs(t))) {
            if (hs == target - t && hs > 0) {
                // landing on a sample time a rounding step away
                hs = target - t;
            } else if (y < 1e-3 && k1 < 0) {
                return finish(Terminal::BlowDown);
            } else if (y > 1e3 && k1 > 0) {
                return finish(Terminal::BlowUp);
            } else {
                throw std::runtime_error("ODE step size underflow at t=" + std::to_string(t));
            }
        }
        Trial tr = dopri_step(p, y, k1, hs);
        if (!tr.ok) {
            ++run.rejected;
            h = 0.25 * hs;
            if (h < 16 * eps * std::max(1.0, std::abs(t))) {
                if (k1 < 0 && y < 1e-3) return finish(Terminal::BlowDown);
                if (k1 > 0 && y > 1e3) return finish(Terminal::BlowUp);
            }
            continue;
        }
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y), std::abs(tr.y));
        const double en = std::abs(tr.err) / sc;
        if (en > 1) {
            ++run.rejected;
            h = hs * std::max(0.2, 0.9 * std::pow(en, -0.2));
            continue;
        }
        ++run.accepted;
        t = (hs == target - t) ? target : t + hs;
        y = tr.y;
        k1 = tr.k7;
        h = hs * std::min(5.0, en > 0 ? 0.9 * std::pow(en, -0.2) : 5.0);
        if (sampled) {
            while (next < opt.sample_times.size() && opt.sample_times[next] <= t) {
                record(opt.sample_times[next], y);
                ++next;
            }
        } else {
            record(t, y);
        }
        if (y > kBlowUp) return finish(Terminal::BlowUp);
        if (y < kBlowDown) return finish(Terminal::BlowDown);
        if (!sampled && opt.stop_on_convergence && is_converged(p, y)) return finish(Terminal::Converged);
    }
    return finish(is_converged(p, y) ? Terminal::Converged : Terminal::MaxTime);
}

nlohmann::json to_json(const OdeRun& r)
{
    return {{"params", {{"beta", r.params.beta}, {"psi1", r.params.psi1}, {"psi2", r.params.psi2}, {"psi3", r.params.psi3}}},
            {"y0", r.y0},
            {"t_end", r.t_end},
            {"terminal", to_string(r.terminal)},
            {"y_final", r.y_final},
            {"t_final", r.t_final},
            {"accepted", r.accepted},
            {"rejected", r.rejected}};
}

void write_run_csv(const std::string& path, const OdeRun& r)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "t,y\n" << std::setprecision(17);
    for (std::size_t i = 0; i < r.times.size(); ++i) os << r.times[i] << ',' << r.values[i] << '\n';
}

ExpFit fit_exponential(const std::vector<double>& t, const std::vector<double>& d, double floor, std::size_t min_points)
{
    if (t.size() != d.size()) throw std::invalid_argument("fit_exponential: size mismatch");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > floor && std::isfinite(d[i])) idx.push_back(i);
    if (idx.size() < min_points) throw std::runtime_error("fewer than " + std::to_string(min_points) + " usable snapshots");
    double dmin = d[idx.back()];
    for (std::size_t i : idx) dmin = std::min(dmin, d[i]);
    std::vector<std::size_t> use;
    for (double span = 10;; span *= 10) {
        use.clear();
        // trailing run of samples within the window [dmin, span * dmin]
        for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
            if (d[*it] > span * dmin) break;
            use.push_back(*it);
        }
        if (use.size() >= min_points || use.size() == idx.size()) break;
        if (span > 1e300) break;
    }
    const double n = static_cast<double>(use.size());
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (std::size_t i : use) {
        const double l = std::log(d[i]);
        st += t[i];
        sl += l;
        stt += t[i] * t[i];
        stl += t[i] * l;
    }
    const double den = n * stt - st * st;
    if (!(den > 0)) throw std::runtime_error("fit_exponential: degenerate time samples");
    const double slope = (n * stl - st * sl) / den;
    const double icpt = (sl - slope * st) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sl / n;
    for (std::size_t i : use) {
        const double l = std::log(d[i]);
        ss_res += std::pow(l - (icpt + slope * t[i]), 2);
        ss_tot += std::pow(l - mean, 2);
    }
    ExpFit f;
    f.rate = -slope;
    f.r_squared = ss_tot > 0 ? 1 - ss_res / ss_tot : 1.0;
    f.used = use.size();
    return f;
}

}  // namespace leafwise::ode
