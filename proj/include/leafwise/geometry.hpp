#pragma once
#include "leafwise/grid.hpp"
#include "leafwise/spectral.hpp"
#include <json.hpp>
#include <optional>
#include <string>

namespace leafwise::geometry {

struct GeometryInput {
    int n = 1;               // rank of the normal distribution
    ScalarField h_top_sq;    // <h^T, h^T>
    ScalarField t_bot_sq;    // <T^perp, T^perp>, nonnegative
    ScalarField a_T;         // mixed scalar contorsion curvature
    ScalarField b_T;
    ScalarField s_mix_bar;

    void validate() const;
};

struct GeometryCoefficients {
    ScalarField beta_top, psi1, psi2, psi3;
};

// Psi1 = (<h,h> - b_T)/n, Psi2 = <T,T>/n, Psi3 = a_T/n, beta_top = Psi2 - Psi1 - Psi3 - S_mix/n
GeometryCoefficients coefficients_from_geometry(const GeometryInput& g);

nlohmann::json geometry_to_json(const GeometryInput& g);

enum class TorsionVariant {
    NTimesU,     // n u (tr T^T)(u)
    USquared,    // u^2 (tr T^T)(u)
};
std::string to_string(TorsionVariant v);
TorsionVariant torsion_variant_from_string(const std::string& s);

struct TwistedProductSpec {
    TorusGrid base_grid, fiber_grid;   // one axis each
    ScalarField u;                     // on base_grid
    ScalarField v;                     // on fiber_grid
    // sampled (tr T^T)(u) and (tr T^perp)(v) on the product grid; absent means zero
    std::optional<ScalarField> trace_top_u, trace_bot_v;
    TorsionVariant variant = TorsionVariant::NTimesU;
};

TorusGrid product_grid(const TorusGrid& base, const TorusGrid& fiber);
// base-only field repeated along the fiber axis
ScalarField broadcast_base(const ScalarField& f, const TorusGrid& product);
ScalarField broadcast_fiber(const ScalarField& f, const TorusGrid& product);

// -n Lap_B u / u - p Lap_F v / v plus torsion terms, on the product grid
ScalarField twisted_smix(const TwistedProductSpec& spec);

struct EigenproductReport {
    double max_deviation = 0;      // max |(-Lap e0 - beta e0)/e0 - lambda0_reference|
    double lambda0_discrete = 0;
    double lambda0_reference = 0;
    double eigensolve_error = 0;   // |lambda0_discrete - lambda0_reference|
    double smix_bar = 0;           // n * lambda0_discrete
};

// Fourier-Galerkin least eigenvalue of -Lap - beta with |k| <= modes per axis
double reference_lambda0(const ScalarField& beta, int modes = 0);

EigenproductReport verify_eigenproduct(const ScalarField& beta, const spectral::SpectralResult& sr, int n,
                                       std::optional<double> lambda0_reference = std::nullopt);

}  // namespace leafwise::geometry
