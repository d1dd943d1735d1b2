#pragma once
#include <array>
#include <string>
#include <vector>

namespace leafwise::cubic {

// Coefficient vectors are leading-first: c[0] t^n + ... + c[n].
using Coeffs = std::vector<double>;

double poly_eval(const Coeffs& c, double t);
Coeffs poly_derivative(const Coeffs& c);

// Determinant of the Sylvester matrix, degrees taken as size()-1 (no trimming).
double sylvester_resultant(const Coeffs& p, const Coeffs& q);

// Resultant after dividing out a common power of z (exact trailing zeros in both).
double reduced_resultant(const Coeffs& p, const Coeffs& q, int* stripped = nullptr);

double discriminant_cubic(double a3, double a2, double a1, double a0);

struct CubicAnalysis {
    double a3 = 0, a2 = 0, a1 = 0, a0 = 0;
    double discriminant = 0;
    std::vector<double> real_roots;  // ascending, repeated roots listed with multiplicity
    bool complex_pair = false;
    bool repeated = false;
    int degree = 3;

    std::vector<double> positive_roots() const;
};

CubicAnalysis roots_cubic(double a3, double a2, double a1, double a0);

// mu^3 + p mu + q = 0 with three real roots, mu1 >= mu2 >= mu3
std::array<double, 3> trig_roots_depressed(double p, double q);

// -(5832 z^2 + 540 z - 1) / (216 z + 1)^{3/2} on [0, 1/27]
double c_of_z(double z);

// 1 + (B/a0)^{1/m}; +infinity when no coefficient is negative
double maclaurin_bound(const Coeffs& c);

// constant term exceeds the summed magnitude of the negative coefficients
bool positivity_criterion_a3(const Coeffs& c);

}  // namespace leafwise::cubic
