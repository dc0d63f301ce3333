#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "stargraph/star_graph.hpp"
#include "support.hpp"

using namespace stargraph;
using stargraph::testing::quad_star;

namespace {
const GridSpec<double> kGrid(6.0, 513);
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

TEST_CASE("StarPoint validates its radius") {
    CHECK_THROWS_AS(StarPoint<double>(0, -0.1), InvalidPointError);
    CHECK_THROWS_AS(StarPoint<double>(0, std::nan("")), InvalidPointError);
    CHECK_THROWS_AS(StarPoint<double>(0, std::numeric_limits<double>::infinity()), InvalidPointError);
    CHECK_NOTHROW(StarPoint<double>(2, 0.0));
}

TEST_CASE("vertex points compare equal across edges") {
    CHECK(StarPoint<double>(0, 0.0) == StarPoint<double>(4, 0.0));
    CHECK_FALSE(StarPoint<double>(0, 1.0) == StarPoint<double>(1, 1.0));
    CHECK(StarPoint<double>(1, 1.0) == StarPoint<double>(1, 1.0));
    CHECK(StarPoint<double>(3, 0.0).at_vertex());
}

TEST_CASE("point must lie on the graph") {
    CHECK_THROWS_AS(require_point_on(StarPoint<double>(3, 1.0), 3), InvalidPointError);
    CHECK_THROWS_AS(require_point_on(StarPoint<double>(-1, 1.0), 3), InvalidPointError);
    CHECK_NOTHROW(require_point_on(StarPoint<double>(2, 1.0), 3));
}

TEST_CASE("StarGraph validation") {
    CHECK_THROWS_AS(StarGraph(0), InvalidGraphError);
    CHECK_THROWS_AS(StarGraph(3, 0.0), InvalidGraphError);
    CHECK_THROWS_AS(StarGraph(3, -2.0), InvalidGraphError);
    const StarGraph g(3, 8.0);
    CHECK(g.m == 3);
    CHECK(*g.truncation == 8.0);
}

TEST_CASE("GridSpec nodes are uniform and end at the cutoff") {
    const GridSpec<double> g(3.0, 7);
    CHECK(g.spacing() == doctest::Approx(0.5));
    for (int k = 0; k < 7; ++k) CHECK(g.radius(k) == k * 0.5);
    CHECK(g.radius(6) == 3.0);
    CHECK_THROWS_AS(GridSpec<double>(3.0, 1), ShapeError);
    CHECK_THROWS_AS(GridSpec<double>(0.0, 5), ShapeError);
    CHECK_THROWS_AS(GridSpec<double>(std::numeric_limits<double>::infinity(), 5), ShapeError);
}

TEST_CASE("mu density at the vertex") {
    CHECK(std::abs(mu_density(StarPoint<double>(0, 0.0), 2) - 0.5641895835477563) < 1e-15);
    CHECK(std::abs(mu_density(StarPoint<double>(0, 0.0), 1) - 1.1283791670955126) < 1e-15);
    CHECK_THROWS_AS(mu_density(StarPoint<double>(0, 0.0), 0), InvalidGraphError);
    for (int m = 1; m <= 5; ++m) {
        CHECK(mu_density(StarPoint<double>(0, 5.0), m) > 0.0);
    }
}

TEST_CASE("mu is a probability measure for m = 1..8") {
    for (int m = 1; m <= 8; ++m) {
        const auto one = StarFunction<double>::constant(StarGraph(m), kGrid, 1.0);
        CHECK(std::abs(integrate_star(one, MeasureKind::gaussian_mu) - 1.0) < 1e-12);
    }
}

TEST_CASE("second moment of mu_2 is 1/2") {
    const EdgeFunction<double> sq = [](int, double r) { return r * r; };
    const double value = integrate_star(sq, 2, MeasureKind::gaussian_mu, kGrid);
    CHECK(std::abs(value - 0.5) < 1e-12);
    CHECK(std::abs(value - quad_star(sq, 2, MeasureKind::gaussian_mu)) < 1e-12);
}

TEST_CASE("indicator of one edge has mu_3 mass 1/3") {
    const EdgeFunction<double> f = [](int e, double) { return e == 0 ? 1.0 : 0.0; };
    CHECK(std::abs(integrate_star(f, 3, MeasureKind::gaussian_mu, kGrid) - 1.0 / 3.0) < 1e-12);
}

TEST_CASE("Gaussian-weighted quadrature matches an adaptive oracle") {
    const EdgeFunction<double> f = [](int e, double r) { return std::cos((e + 1) * r) + r * r * r; };
    for (int m : {1, 2, 3, 5}) {
        const double oracle = quad_star(f, m, MeasureKind::gaussian_mu);
        const double coarse = std::abs(integrate_star(f, m, MeasureKind::gaussian_mu, kGrid) - oracle);
        const double fine = std::abs(integrate_star(f, m, MeasureKind::gaussian_mu, GridSpec<double>(6.0, 1025)) - oracle);
        CAPTURE(m);
        CHECK(coarse < 1e-9);
        // fourth order in h
        CHECK(coarse / fine > 12.0);
    }
}

TEST_CASE("Lebesgue quadrature is exact on cubics") {
    const auto cubic = [](double x) { return 1.0 + x - 2.0 * x * x + 3.0 * x * x * x; };
    const double L = 1.0;
    const double exact = L + L * L / 2 - 2.0 * L * L * L / 3 + 3.0 * L * L * L * L / 4;
    for (int points : {3, 4, 5, 8, 9, 17, 64, 65}) {
        const GridSpec<double> g(L, points);
        const auto f = StarFunction<double>::sample(StarGraph(1), g, [&](int, double r) { return cubic(r); });
        CAPTURE(points);
        CHECK(std::abs(integrate_star(f, MeasureKind::lebesgue) - exact) <= 10 * kEps * L * exact);
    }
}

TEST_CASE("integrate_star rejects bad input") {
    Matrix<double> v = Matrix<double>::Ones(kGrid.points_per_edge, 2);
    v(5, 1) = std::nan("");
    const auto f = StarFunction<double>::from_values(StarGraph(2), kGrid, v);
    CHECK_THROWS_AS(integrate_star(f, MeasureKind::lebesgue), NumericalInputError);
    const auto g = StarFunction<double>::constant(StarGraph(2), kGrid, 1.0);
    CHECK_THROWS_AS(integrate_star(g, MeasureKind::lebesgue, GridSpec<double>(6.0, 257)), ShapeError);
    CHECK_NOTHROW(integrate_star(g, MeasureKind::lebesgue, kGrid));
}

TEST_CASE("sup_distance examples") {
    const auto one = StarFunction<double>::constant(StarGraph(2), kGrid, 1.0);
    const auto zero = StarFunction<double>::constant(StarGraph(2), kGrid, 0.0);
    CHECK(sup_distance(one, one) == 0.0);
    CHECK(sup_distance(one, zero) == 1.0);
    const GridSpec<double> g3(3.0, 31);
    const auto x = StarFunction<double>::sample(StarGraph(2), g3, [](int e, double r) { return e == 0 ? r : 0.0; });
    CHECK(sup_distance(x, StarFunction<double>::constant(StarGraph(2), g3, 0.0)) == 3.0);
    CHECK_THROWS_AS(sup_distance(one, StarFunction<double>::constant(StarGraph(3), kGrid, 1.0)), ShapeError);
    CHECK_THROWS_AS(sup_distance(one, x), ShapeError);
}

TEST_CASE("StarFunction vertex handling") {
    const auto cont = StarFunction<double>::sample(StarGraph(3), kGrid, stargraph::testing::mixed_profile());
    CHECK(cont.continuous_at_vertex());
    CHECK(cont.vertex_value() == 1.0);
    const auto jump = StarFunction<double>::sample(StarGraph(3), kGrid, [](int e, double) { return e * 1.0; });
    CHECK_FALSE(jump.continuous_at_vertex());
    CHECK_THROWS_AS(jump.vertex_value(), PreconditionError);

    Matrix<double> near = Matrix<double>::Ones(kGrid.points_per_edge, 3);
    near(0, 2) = 1.0 + kEps;
    const auto snapped = StarFunction<double>::from_values(StarGraph(3), kGrid, near);
    CHECK(snapped.continuous_at_vertex());
    CHECK(snapped(2, 0) == snapped(0, 0));

    CHECK_THROWS_AS(StarFunction<double>::from_values(StarGraph(3), kGrid, Matrix<double>::Ones(10, 3)), ShapeError);
    CHECK_THROWS_AS(StarFunction<double>::from_vertex(StarGraph(3), kGrid, 1.0, Matrix<double>::Ones(10, 3)),
                    ShapeError);
}

TEST_CASE("StarFunction arithmetic") {
    const auto f = StarFunction<double>::sample(StarGraph(2), kGrid, [](int, double r) { return r; });
    const auto g = StarFunction<double>::constant(StarGraph(2), kGrid, 2.0);
    CHECK(sup_distance(f + g - g, f) == 0.0);
    CHECK(sup_distance(-f + f, StarFunction<double>::constant(StarGraph(2), kGrid, 0.0)) == 0.0);
    CHECK(sup_norm(3.0 * g) == 6.0);
    CHECK(sup_norm(g * 0.5) == 1.0);
    CHECK_THROWS_AS(f + StarFunction<double>::constant(StarGraph(3), kGrid, 1.0), ShapeError);
}

TEST_CASE("l2 norm against mu") {
    const auto one = StarFunction<double>::constant(StarGraph(4), kGrid, 1.0);
    CHECK(std::abs(l2_norm(one, MeasureKind::gaussian_mu) - 1.0) < 1e-12);
    const auto x = StarFunction<double>::sample(StarGraph(2), kGrid, [](int, double r) { return r; });
    CHECK(std::abs(l2_norm(x, MeasureKind::gaussian_mu) - std::sqrt(0.5)) < 1e-12);
}
