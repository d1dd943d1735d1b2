#include "leafwise/spectral.hpp"
#include "leafwise/field_io.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>

namespace leafwise::spectral {

Eigen::SparseMatrix<double> assemble_operator(const ScalarField& beta)
{
    Eigen::SparseMatrix<double> H = -laplacian_matrix(beta.grid());
    for (Eigen::Index i = 0; i < H.rows(); ++i) H.coeffRef(i, i) -= beta.values()[i];
    H.makeCompressed();
    return H;
}

Eigen::MatrixXd assemble_dense(const ScalarField& beta)
{
    return Eigen::MatrixXd(assemble_operator(beta));
}

namespace {

double l2(const TorusGrid& g, const Eigen::VectorXd& v) { return std::sqrt(v.squaredNorm() * g.cell_volume()); }

// inverse iteration at a fixed shift below the spectrum; returns the Rayleigh quotient
double inverse_iterate(const Eigen::SparseMatrix<double>& H, double shift, Eigen::VectorXd& v,
                       const Eigen::VectorXd* deflate, int max_it, double tol)
{
    Eigen::SparseMatrix<double> A = H;
    for (Eigen::Index i = 0; i < A.rows(); ++i) A.coeffRef(i, i) -= shift;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success) throw std::runtime_error("shifted factorization failed");
    double rq = 0, best = INFINITY;
    int stall = 0;
    for (int it = 0; it < max_it; ++it) {
        if (deflate) v -= deflate->dot(v) * *deflate;
        v.normalize();
        Eigen::VectorXd w = solver.solve(v);
        if (deflate) w -= deflate->dot(w) * *deflate;
        w.normalize();
        Eigen::VectorXd Hw = H * w;
        rq = w.dot(Hw);
        double res = (Hw - rq * w).norm();
        v = w;
        if (res <= tol) break;
        if (res < 0.99 * best) { best = res; stall = 0; }
        else if (++stall >= 10) break;
    }
    return rq;
}

}  // namespace

SpectralResult ground_state(const ScalarField& beta, const GroundStateOptions& opt)
{
    if (!(opt.tol > 0)) throw std::invalid_argument("ground state tolerance must be positive");
    const TorusGrid& g = beta.grid();
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::SparseMatrix<double> H = assemble_operator(beta);
    const double hscale = 4.0 * g.dim / (g.min_spacing() * g.min_spacing()) + beta.values().cwiseAbs().maxCoeff();

    SpectralResult r;
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    double lam0_est, lam1_est;
    if (g.size() <= opt.dense_limit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(H), Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
        lam0_est = es.eigenvalues()[0];
        lam1_est = es.eigenvalues()[1];
        double gap = lam1_est - lam0_est;
        double shift = lam0_est - 1e-3 * std::max(gap, 1e-12);
        inverse_iterate(H, shift, v, nullptr, opt.max_iterations, 1e-15 * hscale);
        r.method = "dense";
    } else {
        double shift = -beta.values().maxCoeff() - 1.0;
        inverse_iterate(H, shift, v, nullptr, opt.max_iterations, 1e-12 * hscale);
        double rq = v.dot(H * v);
        // tighten with a shift just below the estimate
        inverse_iterate(H, rq - 1e-6 * std::max(1.0, std::abs(rq)), v, nullptr, 50, 1e-15 * hscale);
        lam0_est = v.dot(H * v);
        Eigen::VectorXd e = v.normalized();
        Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
        for (Eigen::Index i = 0; i < n; ++i) w[i] = std::cos(2 * M_PI * w[i]) + 0.1 * std::sin(7.0 * i);
        lam1_est = inverse_iterate(H, shift, w, &e, opt.max_iterations, 1e-9 * hscale);
        r.method = "inverse_iteration";
    }
    if (v.sum() < 0) v = -v;
    if (v.minCoeff() <= 0)
        throw std::runtime_error("ground state has a non-positive entry; refine the grid");
    v /= l2(g, v);
    double lam0 = v.dot(H * v) / v.squaredNorm();
    r.lambda0 = lam0;
    r.residual = l2(g, H * v - lam0 * v);
    r.ground_state = ScalarField(g, v);
    r.delta_e0 = delta_ratio(r.ground_state);
    r.lambda1 = lam1_est;
    r.gap = lam1_est - lam0;
    if (!(r.residual <= opt.tol))
        throw std::runtime_error("ground state residual " + std::to_string(r.residual) + " above tolerance");
    if (!(r.gap > 0)) throw std::runtime_error("least eigenvalue is not simple on this grid");
    return r;
}

ScalarField shifted_solve(const ScalarField& beta, double shift, const ScalarField& rhs,
                          std::optional<double> lambda0)
{
    require_same_grid(beta, rhs);
    if (lambda0 && std::abs(*lambda0 + shift) <= 1e-8)
        throw std::domain_error("shift too close to the spectrum");
    Eigen::SparseMatrix<double> A = assemble_operator(beta);
    for (Eigen::Index i = 0; i < A.rows(); ++i) A.coeffRef(i, i) += shift;
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) throw std::domain_error("shifted operator is singular");
    Eigen::VectorXd u = lu.solve(rhs.values());
    double rn = rhs.values().norm();
    if (!u.allFinite()) throw std::domain_error("shifted operator is singular");
    double rel = (A * u - rhs.values()).norm() / std::max(rn, 1e-300);
    if (rn > 0 && u.norm() > 1e8 * rn) throw std::domain_error("shift too close to the spectrum");
    if (rn > 0 && rel > 1e-10) {
        u += lu.solve(rhs.values() - A * u);
        rel = (A * u - rhs.values()).norm() / rn;
        if (rel > 1e-10) throw std::runtime_error("shifted solve residual above 1e-10");
    }
    return rhs.with_values(u);
}

nlohmann::json to_json(const SpectralResult& r, bool with_field)
{
    nlohmann::json j = {{"lambda0", r.lambda0}, {"residual", r.residual}, {"delta_e0", r.delta_e0},
                        {"lambda1", r.lambda1}, {"gap", r.gap}, {"method", r.method}};
    if (with_field) j["ground_state"] = field_to_json(r.ground_state);
    return j;
}

}  // namespace leafwise::spectral
