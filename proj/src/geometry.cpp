#include "leafwise/geometry.hpp"
#include "leafwise/field_io.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace leafwise::geometry {

void GeometryInput::validate() const
{
    if (n < 1) throw std::invalid_argument("geometry: n must be a positive integer");
    require_same_grid(h_top_sq, t_bot_sq);
    require_same_grid(h_top_sq, a_T);
    require_same_grid(h_top_sq, b_T);
    require_same_grid(h_top_sq, s_mix_bar);
    if (t_bot_sq.values().minCoeff() < 0) throw std::invalid_argument("geometry: t_bot_sq must be nonnegative");
}

GeometryCoefficients coefficients_from_geometry(const GeometryInput& g)
{
    g.validate();
    const double inv = 1.0 / g.n;
    GeometryCoefficients c;
    c.psi1 = g.h_top_sq.with_values(inv * (g.h_top_sq.values() - g.b_T.values()));
    c.psi2 = g.t_bot_sq.with_values(inv * g.t_bot_sq.values());
    c.psi3 = g.a_T.with_values(inv * g.a_T.values());
    c.beta_top = g.s_mix_bar.with_values(c.psi2.values() - c.psi1.values() - c.psi3.values() -
                                         inv * g.s_mix_bar.values());
    return c;
}

nlohmann::json geometry_to_json(const GeometryInput& g)
{
    return {{"n", g.n},
            {"h_top_sq", field_to_json(g.h_top_sq)},
            {"t_bot_sq", field_to_json(g.t_bot_sq)},
            {"a_T", field_to_json(g.a_T)},
            {"b_T", field_to_json(g.b_T)},
            {"s_mix_bar", field_to_json(g.s_mix_bar)}};
}

std::string to_string(TorsionVariant v) { return v == TorsionVariant::NTimesU ? "n_u" : "u_squared"; }

TorsionVariant torsion_variant_from_string(const std::string& s)
{
    if (s == "n_u") return TorsionVariant::NTimesU;
    if (s == "u_squared") return TorsionVariant::USquared;
    throw std::invalid_argument("torsion_variant must be n_u or u_squared");
}

TorusGrid product_grid(const TorusGrid& base, const TorusGrid& fiber)
{
    if (base.dim != 1 || fiber.dim != 1) throw std::invalid_argument("product grids take one axis per factor");
    return TorusGrid::make({base.points[0], fiber.points[0]}, {base.periods[0], fiber.periods[0]});
}

ScalarField broadcast_base(const ScalarField& f, const TorusGrid& prod)
{
    const int nb = prod.points[0], nf = prod.points[1];
    if (static_cast<int>(f.size()) != nb) throw std::invalid_argument("base field does not match the product grid");
    Eigen::VectorXd v(prod.size());
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nf; ++j) v[static_cast<Eigen::Index>(prod.flatten(i, j))] = f[i];
    return ScalarField(prod, v);
}

ScalarField broadcast_fiber(const ScalarField& f, const TorusGrid& prod)
{
    const int nb = prod.points[0], nf = prod.points[1];
    if (static_cast<int>(f.size()) != nf) throw std::invalid_argument("fiber field does not match the product grid");
    Eigen::VectorXd v(prod.size());
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nf; ++j) v[static_cast<Eigen::Index>(prod.flatten(i, j))] = f[j];
    return ScalarField(prod, v);
}

ScalarField twisted_smix(const TwistedProductSpec& s)
{
    if (s.u.grid() != s.base_grid || s.v.grid() != s.fiber_grid)
        throw std::invalid_argument("u must live on the base grid and v on the fiber grid");
    if (s.u.values().minCoeff() < 1e-12 || s.v.values().minCoeff() < 1e-12)
        throw std::domain_error("twisted product needs u, v above 1e-12");
    const TorusGrid prod = product_grid(s.base_grid, s.fiber_grid);
    const double p = s.base_grid.dim, n = s.fiber_grid.dim;
    const ScalarField lu = laplacian(s.u), lv = laplacian(s.v);
    const Eigen::ArrayXd qu = lu.values().array() / s.u.values().array();
    const Eigen::ArrayXd qv = lv.values().array() / s.v.values().array();
    Eigen::ArrayXd out = -n * broadcast_base(s.u.with_values(qu.matrix()), prod).values().array() -
                         p * broadcast_fiber(s.v.with_values(qv.matrix()), prod).values().array();
    const Eigen::ArrayXd U = broadcast_base(s.u, prod).values().array();
    const Eigen::ArrayXd V = broadcast_fiber(s.v, prod).values().array();
    if (s.trace_top_u) {
        if (s.trace_top_u->grid() != prod) throw std::invalid_argument("trace_top_u must live on the product grid");
        const Eigen::ArrayXd t = s.trace_top_u->values().array();
        out += s.variant == TorsionVariant::NTimesU ? (n * U * t).eval() : (U * U * t).eval();
    }
    if (s.trace_bot_v) {
        if (s.trace_bot_v->grid() != prod) throw std::invalid_argument("trace_bot_v must live on the product grid");
        out += p * V * s.trace_bot_v->values().array();
    }
    return ScalarField(prod, out.matrix());
}

double reference_lambda0(const ScalarField& beta, int modes)
{
    const TorusGrid& g = beta.grid();
    if (modes <= 0) {
        int lim = g.dim == 1 ? 128 : 16;
        modes = lim;
        for (int a = 0; a < g.dim; ++a) modes = std::min(modes, g.points[a] / 4);
    }
    const int M = modes;
    const int W = 2 * M + 1;
    const int nb = g.dim == 1 ? 1 : W;
    const int K = W * nb;
    const double w0 = 2 * M_PI / g.periods[0];
    const double w1 = g.dim > 1 ? 2 * M_PI / g.periods[1] : 0.0;
    // beta-hat on the difference lattice |m| <= 2M
    const int D = 4 * M + 1;
    const int Db = g.dim == 1 ? 1 : D;
    std::vector<std::complex<double>> bh(static_cast<std::size_t>(D) * Db);
    const double inv_n = 1.0 / static_cast<double>(g.size());
    for (int a = 0; a < D; ++a)
        for (int b = 0; b < Db; ++b) {
            const int ma = a - 2 * M, mb = g.dim == 1 ? 0 : b - 2 * M;
            std::complex<double> s = 0;
            for (std::size_t j = 0; j < g.size(); ++j) {
                const double ph = ma * w0 * g.coordinate(j, 0) + (g.dim > 1 ? mb * w1 * g.coordinate(j, 1) : 0.0);
                s += beta[j] * std::polar(1.0, -ph);
            }
            bh[static_cast<std::size_t>(a) * Db + b] = s * inv_n;
        }
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(K, K);
    auto idx = [&](int ka, int kb) { return (ka + M) * nb + (g.dim == 1 ? 0 : kb + M); };
    const int kbl = g.dim == 1 ? 0 : -M, kbh = g.dim == 1 ? 0 : M;
    for (int ka = -M; ka <= M; ++ka)
        for (int kb = kbl; kb <= kbh; ++kb) {
            const int r = idx(ka, kb);
            H(r, r) += std::pow(ka * w0, 2) + std::pow(kb * w1, 2);
            for (int la = -M; la <= M; ++la)
                for (int lb = kbl; lb <= kbh; ++lb) {
                    const int da = ka - la + 2 * M, db = g.dim == 1 ? 0 : kb - lb + 2 * M;
                    H(r, idx(la, lb)) -= bh[static_cast<std::size_t>(da) * Db + db];
                }
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

EigenproductReport verify_eigenproduct(const ScalarField& beta, const spectral::SpectralResult& sr, int n,
                                       std::optional<double> lambda0_reference)
{
    require_same_grid(beta, sr.ground_state);
    if (n < 1) throw std::invalid_argument("n must be positive");
    const double scale = 4.0 * beta.grid().dim / std::pow(beta.grid().min_spacing(), 2) + sup_norm(beta);
    if (sr.residual > 1e-6 * scale) throw std::runtime_error("spectral residual too large to certify");
    EigenproductReport rep;
    rep.lambda0_discrete = sr.lambda0;
    rep.lambda0_reference = lambda0_reference ? *lambda0_reference : reference_lambda0(beta);
    rep.eigensolve_error = std::abs(rep.lambda0_discrete - rep.lambda0_reference);
    const auto& e = sr.ground_state.values();
    const Eigen::ArrayXd q = (-laplacian_values(beta.grid(), e).array() - beta.values().array() * e.array()) / e.array();
    rep.max_deviation = (q - rep.lambda0_reference).abs().maxCoeff();
    rep.smix_bar = n * sr.lambda0;
    return rep;
}

}  // namespace leafwise::geometry
