#pragma once
#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace leafwise {

/// Uniform periodic grid on a flat 1-D or 2-D torus. Axis 0 is the slowest index.
struct TorusGrid {
    int dim = 1;
    std::vector<int> points;
    std::vector<double> periods;
    std::vector<double> spacing;

    static TorusGrid make(std::vector<int> points, std::vector<double> periods);
    static TorusGrid line(int n, double period);

    std::size_t size() const;
    double cell_volume() const;
    double volume() const;
    double coordinate(std::size_t flat, int axis) const;
    std::array<int, 2> unflatten(std::size_t flat) const;
    std::size_t flatten(int i0, int i1) const;
    double min_spacing() const;

    bool operator==(const TorusGrid& o) const;
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }
};

class ScalarField {
public:
    ScalarField() = default;
    ScalarField(TorusGrid grid, Eigen::VectorXd values);

    static ScalarField constant(const TorusGrid& grid, double c);
    // fn receives (x, y); y is 0 on 1-D grids
    static ScalarField sample(const TorusGrid& grid, const std::function<double(double, double)>& fn);

    const TorusGrid& grid() const { return grid_; }
    const Eigen::VectorXd& values() const { return values_; }
    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
    double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

    ScalarField with_values(Eigen::VectorXd v) const { return ScalarField(grid_, std::move(v)); }

private:
    TorusGrid grid_;
    Eigen::VectorXd values_;
};

void require_same_grid(const ScalarField& a, const ScalarField& b);

Eigen::VectorXd laplacian_values(const TorusGrid& grid, const Eigen::VectorXd& v);
ScalarField laplacian(const ScalarField& f);
Eigen::SparseMatrix<double> laplacian_matrix(const TorusGrid& grid);

// Fourier-exact Laplacian of the trigonometric interpolant (diagnostics only)
ScalarField spectral_laplacian(const ScalarField& f);

double inner_l2(const ScalarField& f, const ScalarField& g);
double l2_norm(const ScalarField& f);
double sup_norm(const ScalarField& f);
std::pair<double, double> min_max(const ScalarField& f);
double delta_ratio(const ScalarField& f);

// Eigenvalues of the discrete Laplacian on each Fourier mode, in grid layout
Eigen::VectorXd laplacian_symbol(const TorusGrid& grid);
Eigen::VectorXd spectral_symbol(const TorusGrid& grid);
// Real multiplier applied in Fourier space; multiplier must be even in k
Eigen::VectorXd apply_fourier_multiplier(const TorusGrid& grid, const Eigen::VectorXd& v,
                                         const Eigen::VectorXd& multiplier);

}  // namespace leafwise
