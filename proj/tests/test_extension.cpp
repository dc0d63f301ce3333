#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "stargraph/extension.hpp"
#include "support.hpp"

using namespace stargraph;

namespace {

const GridSpec<double> kGrid(6.0, 257);
const FoldTolerance kLoose{1e-10, std::numeric_limits<double>::infinity()};
// slope error of the one-sided stencil is O(h^2)
const FoldTolerance kSmooth{1e-10, 1e-3};

std::vector<LineFunction<double>> extend_all(const StarFunction<double>& f) {
    std::vector<LineFunction<double>> lines;
    for (int i = 0; i < f.m(); ++i) lines.push_back(reflect_extend(f, i));
    return lines;
}

}  // namespace

TEST_CASE("LineGrid is symmetric about the origin") {
    const LineGrid<double> g(4.0, 33);
    CHECK(g.size() == 65);
    CHECK(g.x(g.center()) == 0.0);
    for (int k = 0; k < g.size(); ++k) CHECK(g.x(k) == -g.x(g.size() - 1 - k));
    CHECK(g.x(0) == -4.0);
    CHECK(g.half_grid() == GridSpec<double>(4.0, 33));
    CHECK_THROWS_AS(LineGrid<double>(0.0, 33), ShapeError);
    CHECK_THROWS_AS(LineGrid<double>(1.0, 1), ShapeError);
}

TEST_CASE("m=2 extension glues the two edges into the line") {
    const auto f = StarFunction<double>::sample(StarGraph(2), kGrid, stargraph::testing::mixed_profile());
    const auto line = reflect_extend(f, 0);
    for (int k = 0; k < f.points(); ++k) {
        CHECK(line.at(k) == f(0, k));
        CHECK(std::abs(line.at(-k) - f(1, k)) < 1e-15);
    }
}

TEST_CASE("edge-symmetric data extends evenly") {
    const auto g = [](int, double r) { return std::cos(r) * std::exp(-r); };
    for (int m : {1, 3, 5}) {
        const auto f = StarFunction<double>::sample(StarGraph(m), kGrid, g);
        for (int i = 0; i < m; ++i) {
            const auto line = reflect_extend(f, i);
            for (int k = 1; k < f.points(); ++k) CHECK(std::abs(line.at(-k) - line.at(k)) < 1e-15);
        }
    }
}

TEST_CASE("m=3 indicator of edge 1 reflects to -1/3") {
    const EdgeFunction<double> f = [](int e, double) { return e == 0 ? 1.0 : 0.0; };
    const auto line = reflect_extend<double>(f, 3, 0);
    CHECK(std::abs(line(-0.7) - (-1.0 / 3.0)) < 1e-15);
    CHECK(line(0.7) == 1.0);
    const auto sampled = StarFunction<double>::sample(StarGraph(3), kGrid, f);
    CHECK_THROWS_AS(reflect_extend(sampled, 0), PreconditionError);
}

TEST_CASE("reflect_extend rejects bad edges") {
    const auto f = StarFunction<double>::constant(StarGraph(3), kGrid, 1.0);
    CHECK_THROWS_AS(reflect_extend(f, 3), InvalidPointError);
    CHECK_THROWS_AS(reflect_extend(f, -1), InvalidPointError);
    CHECK_THROWS_AS(reflect_extend<double>(stargraph::testing::mixed_profile(), 3, 5), InvalidPointError);
    CHECK_THROWS_AS(reflect_extend<double>(stargraph::testing::mixed_profile(), 0, 0), InvalidGraphError);
}

TEST_CASE("callable and grid extensions agree") {
    const auto fn = stargraph::testing::mixed_profile();
    const auto f = StarFunction<double>::sample(StarGraph(4), kGrid, fn);
    for (int i = 0; i < 4; ++i) {
        const auto grid_line = reflect_extend(f, i);
        const auto callable = reflect_extend<double>(fn, 4, i);
        for (int k = 0; k < grid_line.grid.size(); ++k) {
            CHECK(std::abs(grid_line.values(k) - callable(grid_line.grid.x(k))) < 1e-14);
        }
    }
}

TEST_CASE("property: extension round trip, odd differences, even sum") {
    std::mt19937 rng(20261016);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = 1 + trial % 6;
        const auto f = StarFunction<double>::sample(StarGraph(m), kGrid, stargraph::testing::random_profile(rng, m));
        REQUIRE(f.continuous_at_vertex());
        const auto lines = extend_all(f);

        const auto back = fold_to_star(lines, kLoose);
        CHECK(sup_distance(back, f) == 0.0);
        CHECK(back.continuous_at_vertex());

        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                CHECK(lines[i].at(0) == lines[j].at(0));
                for (int k = 1; k < f.points(); k += 16) {
                    const double plus = lines[i].at(k) - lines[j].at(-k);
                    const double minus = lines[i].at(-k) - lines[j].at(k);
                    CHECK(std::abs(plus + minus) < 1e-14);
                }
            }
        }
        for (int k = 0; k < f.points(); k += 8) {
            double left = 0.0;
            double right = 0.0;
            for (const auto& u : lines) {
                left += u.at(-k);
                right += u.at(k);
            }
            CHECK(std::abs(left - right) < 1e-13);
        }
    }
}

TEST_CASE("coefficient extension: OU drift becomes -x on the line") {
    const auto line = extend_coefficients(CoefficientTriple<double>::ornstein_uhlenbeck());
    for (double x : {-3.0, -0.5, 0.0, 0.5, 3.0}) {
        CHECK(line.b(x) == -x);
        CHECK(line.q(x) == 0.5);
        CHECK(line.c(x) == 0.0);
    }
    CHECK(line.c_sup_bound == 0.0);
}

TEST_CASE("coefficient extension: HO potential is even") {
    const auto line = extend_coefficients(CoefficientTriple<double>::harmonic_oscillator());
    for (double x : {0.0, 0.3, 1.0, 2.5}) {
        CHECK(line.c(-x) == line.c(x));
        CHECK(line.c(x) == -(x * x - 1.0) / 2.0);
        CHECK(line.b(x) == 0.0);
    }
    CHECK(line.c_sup_bound == 0.5);
}

TEST_CASE("coefficient extension: parity and restriction for general data") {
    const CoefficientTriple<double> coeffs([](double x) { return 1.0 + x * x; }, [](double x) { return std::sin(x) - x * x; },
                                           [](double x) { return -x; }, 0.0);
    const auto line = extend_coefficients(coeffs);
    for (double x : {0.1, 0.9, 2.0, 7.5}) {
        CHECK(line.q(-x) == line.q(x));
        CHECK(line.c(-x) == line.c(x));
        CHECK(line.b(-x) == -line.b(x));
        CHECK(line.q(x) == coeffs.q()(x));
        CHECK(line.b(x) == coeffs.b()(x));
        CHECK(line.c(x) == coeffs.c()(x));
    }
    const CoefficientTriple<double> unit([](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; },
                                         0.0);
    const auto unit_line = extend_coefficients(unit);
    CHECK(unit_line.q(-4.0) == 1.0);
    CHECK(unit_line.q(4.0) == 1.0);
}

TEST_CASE("CoefficientTriple admissibility") {
    const auto zero = [](double) { return 0.0; };
    const auto half = [](double) { return 0.5; };
    CHECK_THROWS_AS(CoefficientTriple<double>(half, [](double x) { return 1.0 - x; }, zero, 0.0), IllPosedExtensionError);
    CHECK_NOTHROW(CoefficientTriple<double>(half, [](double x) { return 1e-13 + x; }, zero, 0.0));
    CHECK_THROWS_AS(CoefficientTriple<double>([](double x) { return 1.0 - x; }, zero, zero, 0.0), PreconditionError);
    CHECK_THROWS_AS(CoefficientTriple<double>(half, zero, [](double x) { return x; }, 1.0), PreconditionError);
    CHECK_NOTHROW(CoefficientTriple<double>::heat());
}

TEST_CASE("even_odd_split examples") {
    const auto even = StarFunction<double>::sample(StarGraph(3), kGrid, [](int, double r) { return std::exp(-r); });
    auto parts = even_odd_split(even);
    CHECK(sup_distance(parts.even, even) < 1e-15);
    CHECK(sup_norm(parts.odd) < 1e-15);

    const auto g = [](int e, double r) { return (e == 0 ? 1.0 : -1.0) * std::sin(r); };
    const auto odd = StarFunction<double>::sample(StarGraph(2), kGrid, g);
    parts = even_odd_split(odd);
    CHECK(sup_norm(parts.even) == 0.0);
    CHECK(sup_distance(parts.odd, odd) == 0.0);

    const auto ind = StarFunction<double>::sample(StarGraph(3), kGrid, [](int e, double) { return e == 0 ? 1.0 : 0.0; });
    parts = even_odd_split(ind);
    for (int k = 0; k < kGrid.points_per_edge; k += 32) {
        for (int e = 0; e < 3; ++e) CHECK(std::abs(parts.even(e, k) - 1.0 / 3.0) < 1e-15);
        CHECK(std::abs(parts.odd(0, k) - 2.0 / 3.0) < 1e-15);
        CHECK(std::abs(parts.odd(1, k) + 1.0 / 3.0) < 1e-15);
        CHECK(std::abs(parts.odd(2, k) + 1.0 / 3.0) < 1e-15);
    }
}

TEST_CASE("property: even_odd_split structure and orthogonality") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 1 + trial % 5;
        const auto f = StarFunction<double>::sample(StarGraph(m), kGrid, stargraph::testing::random_profile(rng, m));
        const auto parts = even_odd_split(f);
        CHECK(sup_distance(parts.even + parts.odd, f) < 1e-15);
        for (int k = 0; k < f.points(); ++k) {
            const auto row = parts.even.values().row(k);
            CHECK(row.maxCoeff() == row.minCoeff());
            CHECK(std::abs(parts.odd.values().row(k).sum()) < 1e-14);
        }
        Matrix<double> product = parts.even.values().cwiseProduct(parts.odd.values());
        const auto prod = StarFunction<double>::from_values(f.graph(), f.grid(), product);
        CHECK(std::abs(integrate_star(prod, MeasureKind::gaussian_mu)) < 1e-14);
    }
}

TEST_CASE("one-sided slope is exact on quadratics") {
    const double h = 0.1;
    const auto p = [](double x) { return 2.0 - 3.0 * x + 5.0 * x * x; };
    CHECK(std::abs(one_sided_slope(p(0.0), p(h), p(2 * h), h) + 3.0) < 1e-12);
}

TEST_CASE("fold_to_star: equal even profiles") {
    const LineGrid<double> grid(kGrid);
    const auto g = LineFunction<double>::sample(grid, [](double x) { return std::exp(-x * x); });
    const std::vector<LineFunction<double>> lines(4, g);
    const auto f = fold_to_star(lines, kSmooth);
    CHECK(f.m() == 4);
    CHECK(f.continuous_at_vertex());
    for (int e = 0; e < 4; ++e) {
        for (int k = 0; k < f.points(); ++k) CHECK(f(e, k) == g.at(k));
    }
}

TEST_CASE("fold_to_star: m=2 distributes the halves of one line function") {
    const LineGrid<double> grid(kGrid);
    const auto u = LineFunction<double>::sample(grid, [](double x) { return std::exp(-(x - 0.3) * (x - 0.3)); });
    LineFunction<double> mirrored{grid, u.values.reverse()};
    const std::vector<LineFunction<double>> lines{u, mirrored};
    const auto f = fold_to_star(lines, kSmooth);
    for (int k = 0; k < f.points(); ++k) {
        CHECK(f(0, k) == u.at(k));
        CHECK(f(1, k) == u.at(-k));
    }
}

TEST_CASE("fold_to_star reports both vertex defects") {
    const LineGrid<double> grid(3.0, 31);
    const auto a = LineFunction<double>::sample(grid, [](double x) { return 1.0 + x; });
    const auto b = LineFunction<double>::sample(grid, [](double x) { return 1.5 + x; });
    try {
        fold_to_star(std::vector<LineFunction<double>>{a, b});
        FAIL("expected FoldError");
    } catch (const FoldError& e) {
        CHECK(std::abs(e.continuity - 0.5) < 1e-14);
        CHECK(std::abs(e.kirchhoff - 2.0) < 1e-12);
    }
    const auto c = LineFunction<double>::sample(grid, [](double x) { return 1.0 - x; });
    CHECK_NOTHROW(fold_to_star(std::vector<LineFunction<double>>{a, c}));
    CHECK_THROWS_AS(fold_to_star(std::vector<LineFunction<double>>{a, a}), FoldError);
}

TEST_CASE("fold_to_star input validation") {
    CHECK_THROWS_AS(fold_to_star(std::vector<LineFunction<double>>{}), InvalidGraphError);
    const LineGrid<double> small(1.0, 2);
    const auto tiny = LineFunction<double>::sample(small, [](double) { return 1.0; });
    CHECK_THROWS_AS(fold_to_star(std::vector<LineFunction<double>>{tiny}), StencilError);
    const auto a = LineFunction<double>::sample(LineGrid<double>(3.0, 31), [](double) { return 1.0; });
    const auto b = LineFunction<double>::sample(LineGrid<double>(3.0, 41), [](double) { return 1.0; });
    CHECK_THROWS_AS(fold_to_star(std::vector<LineFunction<double>>{a, b}), ShapeError);
    const auto folded = fold_to_star(std::vector<LineFunction<double>>{a}, {}, 3.0);
    CHECK(*folded.graph().truncation == 3.0);
}
