#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "stargraph/errors.hpp"
#include "stargraph/star_graph.hpp"

namespace stargraph {

/// Symmetric grid {-L, ..., -h, 0, h, ..., L} with `points_per_side` nodes on
/// [0, L] (the origin counted once).
template <typename Scalar>
struct LineGrid {
    Scalar half_width = Scalar(6);
    int points_per_side = 513;

    LineGrid() = default;
    LineGrid(Scalar L, int points) : half_width(L), points_per_side(points) {
        if (!(half_width > Scalar(0))) {
            throw ShapeError("line grid half width must be positive");
        }
        if (points_per_side < 2) {
            throw ShapeError("line grid needs at least two points per side");
        }
    }
    explicit LineGrid(const GridSpec<Scalar>& g) : LineGrid(g.cutoff, g.points_per_edge) {}

    Scalar spacing() const { return half_width / Scalar(points_per_side - 1); }
    int size() const { return 2 * points_per_side - 1; }
    int center() const { return points_per_side - 1; }
    /// Node k (0-based from the left end) sits at (k - center) * h, so the
    /// grid is exactly symmetric.
    Scalar x(int k) const { return Scalar(k - center()) * spacing(); }

    GridSpec<Scalar> half_grid() const { return GridSpec<Scalar>(half_width, points_per_side); }

    friend bool operator==(const LineGrid&, const LineGrid&) = default;
};

template <typename Scalar>
using LineCallable = std::function<Scalar(Scalar)>;

template <typename Scalar>
struct LineFunction {
    LineGrid<Scalar> grid;
    Vector<Scalar> values;

    static LineFunction sample(const LineGrid<Scalar>& grid, const LineCallable<Scalar>& fn) {
        LineFunction f{grid, Vector<Scalar>(grid.size())};
        for (int k = 0; k < grid.size(); ++k) {
            f.values(k) = fn(grid.x(k));
        }
        return f;
    }

    /// Value at signed offset j from the origin (x = j*h).
    Scalar at(int j) const { return values(grid.center() + j); }
};

/// Tilde f_i: f on edge i for x >= 0, mirrored through the vertex by
/// (2/m) sum_j f_j(|x|) - f_i(|x|) for x < 0.
template <typename Scalar>
LineFunction<Scalar> reflect_extend(const StarFunction<Scalar>& f, int i) {
    if (i < 0 || i >= f.m()) {
        throw InvalidPointError("reflect_extend: edge index out of range");
    }
    if (!f.continuous_at_vertex()) {
        throw PreconditionError("reflect_extend: function must be continuous at the vertex");
    }
    const LineGrid<Scalar> grid(f.grid());
    const int c = grid.center();
    const Scalar two_over_m = Scalar(2) / Scalar(f.m());
    LineFunction<Scalar> out{grid, Vector<Scalar>(grid.size())};
    out.values(c) = f.vertex_value();
    for (int k = 1; k < f.points(); ++k) {
        out.values(c + k) = f(i, k);
        out.values(c - k) = two_over_m * f.values().row(k).sum() - f(i, k);
    }
    return out;
}

template <typename Scalar>
LineCallable<Scalar> reflect_extend(EdgeFunction<Scalar> f, int m, int i) {
    require_edge_count(m);
    if (i < 0 || i >= m) {
        throw InvalidPointError("reflect_extend: edge index out of range");
    }
    return [f = std::move(f), m, i](Scalar x) {
        if (x >= Scalar(0)) {
            return f(i, x);
        }
        Scalar sum = Scalar(0);
        for (int j = 0; j < m; ++j) {
            sum += f(j, -x);
        }
        return Scalar(2) / Scalar(m) * sum - f(i, -x);
    };
}

/// Coefficients of the extended operator q u'' + b u' + c u on the real line.
template <typename Scalar>
struct LineCoefficients {
    LineCallable<Scalar> q;
    LineCallable<Scalar> b;
    LineCallable<Scalar> c;
    Scalar c_sup_bound = Scalar(0);
};

/// (q, b, c) on [0, inf) with sup c <= c_sup_bound. Positivity of q, b(0) = 0
/// and the bound on c are checked on a sampling grid; Holder regularity is
/// taken on trust.
template <typename Scalar>
class CoefficientTriple {
public:
    CoefficientTriple(LineCallable<Scalar> q, LineCallable<Scalar> b, LineCallable<Scalar> c, Scalar c_sup_bound,
                      GridSpec<Scalar> check_grid = GridSpec<Scalar>(Scalar(8), 1025))
        : q_(std::move(q)), b_(std::move(b)), c_(std::move(c)), c0_(c_sup_bound) {
        if (std::abs(b_(Scalar(0))) > Scalar(1e-12)) {
            throw IllPosedExtensionError("b(0) must vanish for the odd drift extension");
        }
        for (int k = 0; k < check_grid.points_per_edge; ++k) {
            const Scalar x = check_grid.radius(k);
            if (!(q_(x) > Scalar(0))) {
                throw PreconditionError("diffusion coefficient q must be positive");
            }
            if (c_(x) > c0_) {
                throw PreconditionError("potential c exceeds its stated upper bound");
            }
        }
    }

    static CoefficientTriple ornstein_uhlenbeck() {
        return {[](Scalar) { return Scalar(0.5); }, [](Scalar x) { return -x; }, [](Scalar) { return Scalar(0); },
                Scalar(0)};
    }

    static CoefficientTriple harmonic_oscillator() {
        return {[](Scalar) { return Scalar(0.5); }, [](Scalar) { return Scalar(0); },
                [](Scalar x) { return -(x * x - Scalar(1)) / Scalar(2); }, Scalar(0.5)};
    }

    static CoefficientTriple heat() {
        return {[](Scalar) { return Scalar(0.5); }, [](Scalar) { return Scalar(0); }, [](Scalar) { return Scalar(0); },
                Scalar(0)};
    }

    const LineCallable<Scalar>& q() const { return q_; }
    const LineCallable<Scalar>& b() const { return b_; }
    const LineCallable<Scalar>& c() const { return c_; }
    Scalar c_sup_bound() const { return c0_; }

private:
    LineCallable<Scalar> q_;
    LineCallable<Scalar> b_;
    LineCallable<Scalar> c_;
    Scalar c0_;
};

/// Even extension of q and c, odd extension of b.
template <typename Scalar>
LineCoefficients<Scalar> extend_coefficients(const CoefficientTriple<Scalar>& coeffs) {
    if (std::abs(coeffs.b()(Scalar(0))) > Scalar(1e-12)) {
        throw IllPosedExtensionError("b(0) must vanish for the odd drift extension");
    }
    LineCoefficients<Scalar> line;
    line.q = [q = coeffs.q()](Scalar x) { return q(std::abs(x)); };
    line.b = [b = coeffs.b()](Scalar x) { return x >= Scalar(0) ? b(x) : -b(-x); };
    line.c = [c = coeffs.c()](Scalar x) { return c(std::abs(x)); };
    line.c_sup_bound = coeffs.c_sup_bound();
    return line;
}

template <typename Scalar>
struct EvenOddParts {
    StarFunction<Scalar> even;
    StarFunction<Scalar> odd;
};

/// Even part: the edge average at each radius. Odd part: the remainder, whose
/// edge sum vanishes at each radius.
template <typename Scalar>
EvenOddParts<Scalar> even_odd_split(const StarFunction<Scalar>& f) {
    using MatrixType = Matrix<Scalar>;
    const Vector<Scalar> average = f.values().rowwise().mean();
    MatrixType even = average.replicate(1, f.m());
    MatrixType odd = f.values() - even;
    return {StarFunction<Scalar>::from_values(f.graph(), f.grid(), std::move(even)),
            StarFunction<Scalar>::from_values(f.graph(), f.grid(), std::move(odd))};
}

/// Second-order one-sided derivative (-3 u0 + 4 u1 - u2) / (2h).
template <typename Scalar>
Scalar one_sided_slope(Scalar u0, Scalar u1, Scalar u2, Scalar h) {
    return (Scalar(-3) * u0 + Scalar(4) * u1 - u2) / (Scalar(2) * h);
}

struct FoldTolerance {
    double continuity = 1e-10;
    double kirchhoff = 1e-6;
};

/// Restricts each line function to x >= 0 and places it on its own edge.
/// The vertex conditions are checked, not imposed: a violation beyond
/// `tol` raises FoldError carrying both defects.
template <typename Scalar>
StarFunction<Scalar> fold_to_star(std::span<const LineFunction<Scalar>> lines, FoldTolerance tol = {},
                                  std::optional<double> truncation = std::nullopt) {
    if (lines.empty()) {
        throw InvalidGraphError("fold_to_star: no line functions");
    }
    const LineGrid<Scalar>& grid = lines.front().grid;
    if (grid.points_per_side < 3) {
        throw StencilError("fold_to_star: need three nodes per side for the vertex slope");
    }
    for (const auto& u : lines) {
        if (!(u.grid == grid) || u.values.size() != grid.size()) {
            throw ShapeError("fold_to_star: line functions on different grids");
        }
    }
    const int m = static_cast<int>(lines.size());
    const Scalar h = grid.spacing();
    Scalar lo = lines.front().at(0);
    Scalar hi = lo;
    Scalar slope_sum = Scalar(0);
    for (const auto& u : lines) {
        lo = std::min(lo, u.at(0));
        hi = std::max(hi, u.at(0));
        slope_sum += one_sided_slope(u.at(0), u.at(1), u.at(2), h);
    }
    const double continuity = static_cast<double>(hi - lo);
    const double kirchhoff = std::abs(static_cast<double>(slope_sum));
    if (continuity > tol.continuity || kirchhoff > tol.kirchhoff) {
        throw FoldError(continuity, kirchhoff);
    }
    const int n = grid.points_per_side;
    Matrix<Scalar> off_vertex(n - 1, m);
    for (int e = 0; e < m; ++e) {
        off_vertex.col(e) = lines[e].values.segment(grid.center() + 1, n - 1);
    }
    return StarFunction<Scalar>::from_vertex(StarGraph(m, truncation), grid.half_grid(), lines.front().at(0),
                                             off_vertex);
}

template <typename Scalar>
StarFunction<Scalar> fold_to_star(const std::vector<LineFunction<Scalar>>& lines, FoldTolerance tol = {},
                                  std::optional<double> truncation = std::nullopt) {
    return fold_to_star(std::span<const LineFunction<Scalar>>(lines), tol, truncation);
}

}  // namespace stargraph
