#include <doctest.h>

#include "leafwise/field_io.hpp"
#include "leafwise/grid.hpp"

#include <cmath>
#include <cstdio>
#include <random>

using namespace leafwise;

namespace {

ScalarField random_smooth(const TorusGrid& g, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(-1, 1);
    const double a = U(rng), b = U(rng), c = U(rng), d = U(rng);
    return ScalarField::sample(g, [=](double x, double y) {
        return a * std::cos(x) + b * std::sin(2 * x) + c * std::cos(y + 0.3) + d * std::sin(x + y);
    });
}

}  // namespace

TEST_CASE("grid construction validates axes and spacing")
{
    auto g = TorusGrid::make({16, 8}, {2 * M_PI, 3.0});
    CHECK(g.size() == 128);
    CHECK(g.spacing[0] == 2 * M_PI / 16);
    CHECK(g.spacing[1] == 3.0 / 8);
    CHECK_THROWS(TorusGrid::make({7}, {1.0}));
    CHECK_THROWS(TorusGrid::make({8, 8, 8}, {1, 1, 1}));
    CHECK_THROWS(TorusGrid::make({8}, {-1.0}));
    CHECK(g.flatten(3, 5) == 3 * 8 + 5);
    CHECK(g.unflatten(29)[0] == 3);
    CHECK(g.unflatten(29)[1] == 5);
}

TEST_CASE("fields reject non-finite values and wrong lengths")
{
    auto g = TorusGrid::line(8, 1.0);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(8);
    v[3] = std::nan("");
    CHECK_THROWS(ScalarField(g, v));
    CHECK_THROWS(ScalarField(g, Eigen::VectorXd::Ones(9)));
}

TEST_CASE("laplacian of a constant vanishes")
{
    auto g = TorusGrid::make({16, 16}, {2 * M_PI, 2 * M_PI});
    CHECK(sup_norm(laplacian(ScalarField::constant(g, 3.7))) < 1e-12);
}

TEST_CASE("laplacian of cos(2 pi x / L) at N=256")
{
    const double L = 2 * M_PI;
    auto g = TorusGrid::line(256, L);
    auto f = ScalarField::sample(g, [&](double x, double) { return std::cos(2 * M_PI * x / L); });
    auto lf = laplacian(f);
    double err = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        err = std::max(err, std::abs(lf[i] + std::pow(2 * M_PI / L, 2) * f[i]));
    CHECK(err < 1e-3);
}

TEST_CASE("2-D laplacian of sin x + sin y")
{
    auto g = TorusGrid::make({128, 128}, {2 * M_PI, 2 * M_PI});
    auto f = ScalarField::sample(g, [](double x, double y) { return std::sin(x) + std::sin(y); });
    auto lf = laplacian(f);
    double err = 0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(lf[i] + f[i]));
    CHECK(err < 1e-3);
}

TEST_CASE("inner products")
{
    auto g = TorusGrid::line(256, 2 * M_PI);
    auto one = ScalarField::constant(g, 1.0);
    CHECK(inner_l2(one, one) == doctest::Approx(2 * M_PI).epsilon(1e-14));
    auto s = ScalarField::sample(g, [](double x, double) { return std::sin(x); });
    auto c = ScalarField::sample(g, [](double x, double) { return std::cos(x); });
    CHECK(std::abs(inner_l2(s, c)) < 1e-12);
    CHECK(std::abs(inner_l2(s, s) - M_PI) < 1e-10);
    CHECK_THROWS(inner_l2(s, ScalarField::constant(TorusGrid::line(128, 2 * M_PI), 1.0)));
}

TEST_CASE("delta ratio")
{
    auto g = TorusGrid::line(8, 1.0);
    CHECK(delta_ratio(ScalarField::constant(g, 5.0)) == 1.0);
    Eigen::VectorXd v(8);
    v << 1, 2, 4, 2, 2, 1, 4, 2;
    CHECK(delta_ratio(ScalarField(g, v)) == 0.25);
    auto g2 = TorusGrid::line(256, 2 * M_PI);
    auto f = ScalarField::sample(g2, [](double x, double) { return 2 + std::sin(x); });
    CHECK(std::abs(delta_ratio(f) - 1.0 / 3) < 1e-6);
    v[0] = 0;
    CHECK_THROWS(delta_ratio(ScalarField(g, v)));
}

TEST_CASE("discrete divergence theorem, linearity and self-adjointness")
{
    std::mt19937_64 rng(7);
    for (auto g : {TorusGrid::line(64, 2 * M_PI), TorusGrid::make({32, 24}, {2 * M_PI, 2 * M_PI})}) {
        for (int trial = 0; trial < 20; ++trial) {
            auto f = random_smooth(g, rng);
            auto h = random_smooth(g, rng);
            const double n = static_cast<double>(g.size());
            CHECK(std::abs(laplacian(f).values().sum()) <= 1e-10 * sup_norm(f) * n);
            const double a = 1.7, b = -0.3;
            auto combo = f.with_values(a * f.values() + b * h.values());
            Eigen::VectorXd lhs = laplacian(combo).values();
            Eigen::VectorXd rhs = a * laplacian(f).values() + b * laplacian(h).values();
            CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-12 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>()));
            const double x = inner_l2(laplacian(f), h), y = inner_l2(f, laplacian(h));
            CHECK(std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x)));
        }
    }
}

TEST_CASE("laplacian converges at second order")
{
    auto err = [](int n) {
        auto g = TorusGrid::line(n, 2 * M_PI);
        auto f = ScalarField::sample(g, [](double x, double) { return std::exp(std::sin(x)); });
        auto lf = laplacian(f);
        double e = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double x = g.coordinate(i, 0);
            const double exact = std::exp(std::sin(x)) * (std::cos(x) * std::cos(x) - std::sin(x));
            e = std::max(e, std::abs(lf[i] - exact));
        }
        return e;
    };
    for (int n : {32, 64, 128}) {
        const double r = err(n) / err(2 * n);
        CHECK(r >= 3.5);
        CHECK(r <= 4.5);
    }
}

TEST_CASE("spectral laplacian is exact on trigonometric polynomials")
{
    auto g = TorusGrid::make({16, 32}, {2 * M_PI, 2 * M_PI});
    auto f = ScalarField::sample(g, [](double x, double y) { return std::cos(3 * x) + std::sin(2 * y); });
    auto lf = spectral_laplacian(f);
    double e = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coordinate(i, 0), y = g.coordinate(i, 1);
        e = std::max(e, std::abs(lf[i] + 9 * std::cos(3 * x) + 4 * std::sin(2 * y)));
    }
    CHECK(e < 1e-11);
}

TEST_CASE("field serialization round trips")
{
    auto g = TorusGrid::make({8, 10}, {1.5, 2.5});
    auto f = ScalarField::sample(g, [](double x, double y) { return 1 + x * y - 0.1 * x; });
    auto back = field_from_json(field_to_json(f));
    CHECK(back.grid() == g);
    CHECK((back.values() - f.values()).norm() == 0);
    const std::string path = "test_leaf_grid_field.csv";
    write_field_csv(path, f);
    auto csv = read_field_csv(path, g);
    CHECK((csv.values() - f.values()).norm() == 0);
    CHECK_THROWS(read_field_csv(path, TorusGrid::line(8, 1.0)));
    std::remove(path.c_str());
}
