#pragma once
#include "leafwise/grid.hpp"
#include <json.hpp>
#include <optional>
#include <string>

namespace leafwise::spectral {

struct SpectralResult {
    double lambda0 = 0;
    ScalarField ground_state;
    double residual = 0;   // ||H e0 - lambda0 e0||_L2
    double delta_e0 = 0;
    double lambda1 = 0;
    double gap = 0;        // lambda1 - lambda0
    std::string method;    // "dense" or "inverse_iteration"
};

struct GroundStateOptions {
    double tol = 1e-8;
    std::size_t dense_limit = 1024;
    int max_iterations = 2000;
};

// H = -Delta_h - diag(beta)
Eigen::SparseMatrix<double> assemble_operator(const ScalarField& beta);
Eigen::MatrixXd assemble_dense(const ScalarField& beta);

SpectralResult ground_state(const ScalarField& beta, const GroundStateOptions& opt = {});

// Solves (H + shift I) u = rhs
ScalarField shifted_solve(const ScalarField& beta, double shift, const ScalarField& rhs,
                          std::optional<double> lambda0 = std::nullopt);

nlohmann::json to_json(const SpectralResult& r, bool with_field = true);

}  // namespace leafwise::spectral
