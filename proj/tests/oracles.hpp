#pragma once
// Independent oracles and random instance generators shared by the unit and acceptance suites.

#include "leafwise/conditions.hpp"
#include "leafwise/cubic_kit.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using namespace leafwise;
using namespace leafwise::cubic;

// real roots of a leading-first polynomial via its companion matrix
inline std::vector<double> companion_real_roots(Coeffs c, double imag_tol = 1e-7)
{
    while (!c.empty() && c.front() == 0) c.erase(c.begin());
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<double> out;
    if (n < 1) return out;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) C(0, j) = -c[j + 1] / c[0];
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1;
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    for (int i = 0; i < n; ++i) {
        auto z = es.eigenvalues()[i];
        if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z))) out.push_back(z.real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// straightforward Sylvester determinant, independent of the library routine
inline double sylvester_det(const Coeffs& p, const Coeffs& q)
{
    const int m = static_cast<int>(p.size()) - 1, n = static_cast<int>(q.size()) - 1;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m + n, m + n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) S(r, r + k) = p[k];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) S(n + r, r + k) = q[k];
    return S.determinant();
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

inline EnvelopeSet spread_envelope(double p1, double p2, double p3, double s1, double s2, double s3)
{
    EnvelopeSet e;
    e.lo = {p1, p2, p3};
    e.hi = {p1 * (1 + s1), p2 * (1 + s2), p3 * (1 + s3)};
    return e;
}

// regime A: constant cubic factored from z roots a < b < c, then small spreads
struct Instance {
    double lambda0;
    EnvelopeSet env;
};

inline Instance random_regime_a(std::mt19937_64& rng, double max_spread)
{
    std::uniform_real_distribution<double> U(0, 1);
    const double a = 0.2 + 0.8 * U(rng), b = a * (1.5 + 2 * U(rng)), c = b * (1.5 + 2 * U(rng));
    const double p3 = 0.2 + 2 * U(rng);
    const double l0 = p3 * (a + b + c), p1 = p3 * (a * b + b * c + c * a), p2 = p3 * a * b * c;
    const double s = max_spread;
    EnvelopeSet e = spread_envelope(p1, p2, p3, s * U(rng), s * U(rng), s * U(rng));
    // keep the collapsed cubic's lambda0 inside the envelope family
    return {l0 * (1 + 0.5 * s * U(rng)), e};
}

inline Instance random_regime_b(std::mt19937_64& rng, double max_spread)
{
    std::uniform_real_distribution<double> U(0, 1);
    const double s = max_spread;
    EnvelopeSet e = spread_envelope(0.1 + 3 * U(rng), 0.1 + 2 * U(rng), 0.1 + 2 * U(rng), s * U(rng), s * U(rng),
                                    s * U(rng));
    const double need = std::max(kbar_constant(e), 1 + std::sqrt(kb_constant(e)));
    return {-(need * (1.01 + U(rng))), e};
}

inline Instance random_regime_c1(std::mt19937_64& rng, double max_spread)
{
    std::uniform_real_distribution<double> U(0, 1);
    const double s = max_spread;
    EnvelopeSet e = spread_envelope(0.5 + 3 * U(rng), 0.1 + 2 * U(rng), 0.0, s * U(rng), s * U(rng), 0.0);
    const double cap = e.lo[0] * e.lo[0] / (4 * e.hi[1]);
    return {cap * (0.05 + 0.9 * U(rng)), e};
}

inline ConditionInputs env_inputs(const Instance& in)
{
    ConditionInputs c;
    c.lambda0 = in.lambda0;
    c.envelopes = in.env;
    return c;
}

}  // namespace oracle
