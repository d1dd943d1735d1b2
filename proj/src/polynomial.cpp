#include "leafwise/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace leafwise::cubic {

double poly_eval(const Coeffs& c, double t)
{
    double s = 0;
    for (double a : c) s = s * t + a;
    return s;
}

Coeffs poly_derivative(const Coeffs& c)
{
    if (c.size() <= 1) return {0.0};
    Coeffs d(c.size() - 1);
    const std::size_t n = c.size() - 1;
    for (std::size_t i = 0; i < n; ++i) d[i] = c[i] * static_cast<double>(n - i);
    return d;
}

double sylvester_resultant(const Coeffs& p, const Coeffs& q)
{
    if (p.empty() || q.empty()) throw std::invalid_argument("empty polynomial");
    const int m = static_cast<int>(p.size()) - 1, n = static_cast<int>(q.size()) - 1;
    if (m + n == 0) return 1.0;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m + n, m + n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) S(r, r + k) = p[k];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) S(n + r, r + k) = q[k];
    return S.fullPivLu().determinant();
}

double reduced_resultant(const Coeffs& p, const Coeffs& q, int* stripped)
{
    Coeffs a = p, b = q;
    int k = 0;
    while (a.size() > 1 && b.size() > 1 && a.back() == 0.0 && b.back() == 0.0) {
        a.pop_back();
        b.pop_back();
        ++k;
    }
    if (stripped) *stripped = k;
    return sylvester_resultant(a, b);
}

double discriminant_cubic(double a, double b, double c, double d)
{
    return 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c - 27 * a * a * d * d;
}

std::vector<double> CubicAnalysis::positive_roots() const
{
    std::vector<double> out;
    for (double r : real_roots)
        if (r > 0) out.push_back(r);
    return out;
}

namespace {

void polish(const CubicAnalysis& ca, double& r)
{
    const Coeffs c = {ca.a3, ca.a2, ca.a1, ca.a0};
    const Coeffs d = poly_derivative(c);
    double fr = std::abs(poly_eval(c, r));
    for (int it = 0; it < 3 && fr > 0; ++it) {
        double dv = poly_eval(d, r);
        if (dv == 0) break;
        double cand = r - poly_eval(c, r) / dv;
        double fc = std::abs(poly_eval(c, cand));
        if (!(fc < fr)) break;
        r = cand;
        fr = fc;
    }
}

std::vector<double> quadratic_roots(double a, double b, double c, bool& complex_pair)
{
    complex_pair = false;
    if (a == 0) {
        if (b == 0) return {};
        return {-c / b};
    }
    double disc = b * b - 4 * a * c;
    if (disc < 0) {
        complex_pair = true;
        return {};
    }
    double s = std::sqrt(disc);
    double qq = -0.5 * (b + (b >= 0 ? s : -s));
    std::vector<double> r;
    if (qq == 0) {
        r = {0.0, 0.0};
    } else {
        r = {qq / a, c / qq};
    }
    std::sort(r.begin(), r.end());
    return r;
}

}  // namespace

CubicAnalysis roots_cubic(double a3, double a2, double a1, double a0)
{
    if (a3 == 0 && a2 == 0 && a1 == 0 && a0 == 0) throw std::invalid_argument("all-zero polynomial");
    for (double v : {a3, a2, a1, a0})
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite polynomial coefficient");
    CubicAnalysis ca;
    ca.a3 = a3; ca.a2 = a2; ca.a1 = a1; ca.a0 = a0;
    ca.discriminant = discriminant_cubic(a3, a2, a1, a0);

    if (a3 == 0) {
        ca.degree = a2 != 0 ? 2 : (a1 != 0 ? 1 : 0);
        ca.real_roots = quadratic_roots(a2, a1, a0, ca.complex_pair);
    } else {
        const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
        const double p = c - b * b / 3;
        const double q = 2 * b * b * b / 27 - b * c / 3 + d;
        const double shift = -b / 3;
        const double scale = std::max({1.0, std::abs(b), std::sqrt(std::abs(c)), std::cbrt(std::abs(d))});
        const double dm = discriminant_cubic(1, b, c, d);
        std::vector<double> t;
        if (std::abs(dm) <= 1e-14 * std::pow(scale, 6)) {
            if (std::abs(p) <= 1e-14 * scale * scale) {
                t = {0, 0, 0};
            } else {
                double dbl = -1.5 * q / p, sgl = 3 * q / p;
                t = {dbl, dbl, sgl};
            }
        } else if (dm > 0) {
            auto mu = trig_roots_depressed(p, q);
            t = {mu[0], mu[1], mu[2]};
        } else {
            double delta = q * q / 4 + p * p * p / 27;
            double sq = std::sqrt(std::max(delta, 0.0));
            double u = std::cbrt(-q / 2 - (q >= 0 ? sq : -sq));
            t = {u == 0 ? 0.0 : u - p / (3 * u)};
            ca.complex_pair = true;
        }
        for (double v : t) ca.real_roots.push_back(v + shift);
        std::sort(ca.real_roots.begin(), ca.real_roots.end());
    }
    for (double& r : ca.real_roots) polish(ca, r);
    std::sort(ca.real_roots.begin(), ca.real_roots.end());
    for (std::size_t i = 1; i < ca.real_roots.size(); ++i) {
        double& lo = ca.real_roots[i - 1];
        double& hi = ca.real_roots[i];
        if (std::abs(hi - lo) <= 1e-10 * (1 + std::abs(hi))) {
            ca.repeated = true;
            hi = lo = 0.5 * (lo + hi);
        }
    }
    return ca;
}

std::array<double, 3> trig_roots_depressed(double p, double q)
{
    if (!(p < 0)) throw std::domain_error("trigonometric roots need p < 0");
    const double A = 2 * std::sqrt(-p / 3);
    double c = -4 * q / (A * A * A);
    if (std::abs(c) > 1 + 1e-12) throw std::domain_error("cos(3 phi) outside [-1, 1]: one real root");
    c = std::clamp(c, -1.0, 1.0);
    const double phi = std::acos(c) / 3;
    return {A * std::cos(phi), A * std::cos(phi - 2 * M_PI / 3), A * std::cos(phi + 2 * M_PI / 3)};
}

double c_of_z(double z)
{
    if (!(z >= 0 && z <= 1.0 / 27 + 1e-15)) throw std::domain_error("C(z) defined on [0, 1/27]");
    return -(5832 * z * z + 540 * z - 1) / std::pow(216 * z + 1, 1.5);
}

double maclaurin_bound(const Coeffs& c)
{
    if (c.empty() || !(c[0] > 0)) throw std::domain_error("Maclaurin bound needs a positive leading coefficient");
    int m = -1;
    double B = 0;
    for (std::size_t i = 1; i < c.size(); ++i) {
        if (c[i] < 0) {
            if (m < 0) m = static_cast<int>(i);
            B = std::max(B, -c[i]);
        }
    }
    if (m < 0) return std::numeric_limits<double>::infinity();
    return 1 + std::pow(B / c[0], 1.0 / m);
}

bool positivity_criterion_a3(const Coeffs& c)
{
    if (c.empty()) return false;
    double neg = 0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
        if (c[i] < 0) neg += -c[i];
    return c.back() > neg;
}

}  // namespace leafwise::cubic
