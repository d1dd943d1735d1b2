#include "leafwise/grid.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <complex>
#include <string>

namespace leafwise {

TorusGrid TorusGrid::make(std::vector<int> points, std::vector<double> periods)
{
    if (points.empty() || points.size() > 2)
        throw std::invalid_argument("torus grid must have 1 or 2 axes");
    if (points.size() != periods.size())
        throw std::invalid_argument("points and periods differ in length");
    TorusGrid g;
    g.dim = static_cast<int>(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i] < 8)
            throw std::invalid_argument("torus grid needs at least 8 points per axis");
        if (!(periods[i] > 0) || !std::isfinite(periods[i]))
            throw std::invalid_argument("torus period must be positive");
        g.spacing.push_back(periods[i] / points[i]);
    }
    g.points = std::move(points);
    g.periods = std::move(periods);
    return g;
}

TorusGrid TorusGrid::line(int n, double period) { return make({n}, {period}); }

std::size_t TorusGrid::size() const
{
    std::size_t n = 1;
    for (int p : points) n *= static_cast<std::size_t>(p);
    return n;
}

double TorusGrid::cell_volume() const
{
    double v = 1;
    for (double h : spacing) v *= h;
    return v;
}

double TorusGrid::volume() const
{
    double v = 1;
    for (double p : periods) v *= p;
    return v;
}

std::array<int, 2> TorusGrid::unflatten(std::size_t flat) const
{
    if (dim == 1) return {static_cast<int>(flat), 0};
    return {static_cast<int>(flat / points[1]), static_cast<int>(flat % points[1])};
}

std::size_t TorusGrid::flatten(int i0, int i1) const
{
    if (dim == 1) return static_cast<std::size_t>(i0);
    return static_cast<std::size_t>(i0) * points[1] + i1;
}

double TorusGrid::coordinate(std::size_t flat, int axis) const
{
    auto idx = unflatten(flat);
    return idx[axis] * spacing[axis];
}

double TorusGrid::min_spacing() const
{
    double h = spacing[0];
    for (double s : spacing) h = std::min(h, s);
    return h;
}

bool TorusGrid::operator==(const TorusGrid& o) const
{
    return dim == o.dim && points == o.points && periods == o.periods;
}

ScalarField::ScalarField(TorusGrid grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values))
{
    if (static_cast<std::size_t>(values_.size()) != grid_.size())
        throw std::invalid_argument("field length " + std::to_string(values_.size()) +
                                    " does not match grid size " + std::to_string(grid_.size()));
    if (!values_.allFinite())
        throw std::invalid_argument("field contains non-finite values");
}

ScalarField ScalarField::constant(const TorusGrid& grid, double c)
{
    return ScalarField(grid, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid.size()), c));
}

ScalarField ScalarField::sample(const TorusGrid& grid, const std::function<double(double, double)>& fn)
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double x = grid.coordinate(i, 0);
        double y = grid.dim == 2 ? grid.coordinate(i, 1) : 0.0;
        v[static_cast<Eigen::Index>(i)] = fn(x, y);
    }
    return ScalarField(grid, std::move(v));
}

void require_same_grid(const ScalarField& a, const ScalarField& b)
{
    if (a.grid() != b.grid()) throw std::invalid_argument("fields live on different grids");
}

Eigen::VectorXd laplacian_values(const TorusGrid& g, const Eigen::VectorXd& v)
{
    Eigen::VectorXd out(v.size());
    if (g.dim == 1) {
        const int n = g.points[0];
        const double ih2 = 1.0 / (g.spacing[0] * g.spacing[0]);
        for (int i = 0; i < n; ++i) {
            int l = i == 0 ? n - 1 : i - 1, r = i == n - 1 ? 0 : i + 1;
            out[i] = (v[l] - 2 * v[i] + v[r]) * ih2;
        }
        return out;
    }
    const int n0 = g.points[0], n1 = g.points[1];
    const double a = 1.0 / (g.spacing[0] * g.spacing[0]);
    const double b = 1.0 / (g.spacing[1] * g.spacing[1]);
    for (int i = 0; i < n0; ++i) {
        int im = i == 0 ? n0 - 1 : i - 1, ip = i == n0 - 1 ? 0 : i + 1;
        for (int j = 0; j < n1; ++j) {
            int jm = j == 0 ? n1 - 1 : j - 1, jp = j == n1 - 1 ? 0 : j + 1;
            double c = v[i * n1 + j];
            out[i * n1 + j] = (v[im * n1 + j] - 2 * c + v[ip * n1 + j]) * a +
                              (v[i * n1 + jm] - 2 * c + v[i * n1 + jp]) * b;
        }
    }
    return out;
}

ScalarField laplacian(const ScalarField& f)
{
    return f.with_values(laplacian_values(f.grid(), f.values()));
}

Eigen::SparseMatrix<double> laplacian_matrix(const TorusGrid& g)
{
    using T = Eigen::Triplet<double>;
    std::vector<T> trips;
    const auto n = static_cast<Eigen::Index>(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        auto idx = g.unflatten(k);
        double diag = 0;
        for (int ax = 0; ax < g.dim; ++ax) {
            double w = 1.0 / (g.spacing[ax] * g.spacing[ax]);
            diag -= 2 * w;
            for (int s : {-1, 1}) {
                auto j = idx;
                j[ax] = (j[ax] + s + g.points[ax]) % g.points[ax];
                trips.emplace_back(static_cast<int>(k), static_cast<int>(g.flatten(j[0], j[1])), w);
            }
        }
        trips.emplace_back(static_cast<int>(k), static_cast<int>(k), diag);
    }
    Eigen::SparseMatrix<double> L(n, n);
    L.setFromTriplets(trips.begin(), trips.end());
    return L;
}

namespace {

double wavenumber(int k, int n, double period)
{
    int m = k <= n / 2 ? k : k - n;
    return 2 * M_PI * m / period;
}

Eigen::VectorXd per_axis_symbol(const TorusGrid& g, bool discrete)
{
    Eigen::VectorXd s(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto idx = g.unflatten(i);
        double val = 0;
        for (int ax = 0; ax < g.dim; ++ax) {
            if (discrete) {
                double sn = std::sin(M_PI * idx[ax] / g.points[ax]);
                val -= 4 * sn * sn / (g.spacing[ax] * g.spacing[ax]);
            } else {
                double k = wavenumber(idx[ax], g.points[ax], g.periods[ax]);
                val -= k * k;
            }
        }
        s[static_cast<Eigen::Index>(i)] = val;
    }
    return s;
}

}  // namespace

Eigen::VectorXd laplacian_symbol(const TorusGrid& g) { return per_axis_symbol(g, true); }
Eigen::VectorXd spectral_symbol(const TorusGrid& g) { return per_axis_symbol(g, false); }

Eigen::VectorXd apply_fourier_multiplier(const TorusGrid& g, const Eigen::VectorXd& v,
                                         const Eigen::VectorXd& m)
{
    Eigen::FFT<double> fft;
    if (g.dim == 1) {
        std::vector<double> in(v.data(), v.data() + v.size());
        std::vector<std::complex<double>> spec;
        fft.fwd(spec, in);
        for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= m[static_cast<Eigen::Index>(k)];
        std::vector<std::complex<double>> back;
        fft.inv(back, spec);
        Eigen::VectorXd out(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = back[static_cast<std::size_t>(i)].real();
        return out;
    }
    const int n0 = g.points[0], n1 = g.points[1];
    std::vector<std::complex<double>> data(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) data[i] = v[static_cast<Eigen::Index>(i)];
    std::vector<std::complex<double>> row(n1), rowout, col(n0), colout;
    auto pass = [&](bool forward) {
        for (int i = 0; i < n0; ++i) {
            for (int j = 0; j < n1; ++j) row[j] = data[i * n1 + j];
            if (forward) fft.fwd(rowout, row); else fft.inv(rowout, row);
            for (int j = 0; j < n1; ++j) data[i * n1 + j] = rowout[j];
        }
        for (int j = 0; j < n1; ++j) {
            for (int i = 0; i < n0; ++i) col[i] = data[i * n1 + j];
            if (forward) fft.fwd(colout, col); else fft.inv(colout, col);
            for (int i = 0; i < n0; ++i) data[i * n1 + j] = colout[i];
        }
    };
    pass(true);
    for (std::size_t i = 0; i < g.size(); ++i) data[i] *= m[static_cast<Eigen::Index>(i)];
    pass(false);
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[static_cast<Eigen::Index>(i)] = data[i].real();
    return out;
}

ScalarField spectral_laplacian(const ScalarField& f)
{
    return f.with_values(apply_fourier_multiplier(f.grid(), f.values(), spectral_symbol(f.grid())));
}

double inner_l2(const ScalarField& f, const ScalarField& g)
{
    require_same_grid(f, g);
    return f.values().dot(g.values()) * f.grid().cell_volume();
}

double l2_norm(const ScalarField& f) { return std::sqrt(inner_l2(f, f)); }

double sup_norm(const ScalarField& f) { return f.values().cwiseAbs().maxCoeff(); }

std::pair<double, double> min_max(const ScalarField& f)
{
    return {f.values().minCoeff(), f.values().maxCoeff()};
}

double delta_ratio(const ScalarField& f)
{
    auto [lo, hi] = min_max(f);
    if (!(lo > 0)) throw std::domain_error("delta ratio needs a strictly positive field");
    return lo / hi;
}

}  // namespace leafwise
