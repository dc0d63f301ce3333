#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "stargraph/errors.hpp"
#include "stargraph/quadrature.hpp"

namespace stargraph {

inline void require_edge_count(int m) {
    if (m < 1) {
        throw InvalidGraphError("edge count must be at least 1, got " + std::to_string(m));
    }
}

/// A point of the star S_m: an edge (0-based) and a distance from the vertex.
/// All points at radius 0 are the same point.
template <typename Scalar>
struct StarPoint {
    int edge = 0;
    Scalar radius = Scalar(0);

    StarPoint() = default;
    StarPoint(int edge_index, Scalar r) : edge(edge_index), radius(r) {
        if (!(radius >= Scalar(0)) || !std::isfinite(static_cast<double>(radius))) {
            throw InvalidPointError("StarPoint radius must be finite and >= 0");
        }
    }

    bool at_vertex() const { return radius == Scalar(0); }

    friend bool operator==(const StarPoint& a, const StarPoint& b) {
        if (a.at_vertex() && b.at_vertex()) {
            return true;
        }
        return a.edge == b.edge && a.radius == b.radius;
    }
};

template <typename Scalar>
void require_point_on(const StarPoint<Scalar>& p, int m) {
    if (p.edge < 0 || p.edge >= m) {
        throw InvalidPointError("edge index " + std::to_string(p.edge) + " outside 0.." +
                                std::to_string(m - 1));
    }
}

/// S_m, or the truncated star S_m^n when `truncation` is set.
struct StarGraph {
    int m = 1;
    std::optional<double> truncation;

    StarGraph() = default;
    explicit StarGraph(int edges, std::optional<double> n = std::nullopt)
        : m(edges), truncation(n) {
        require_edge_count(m);
        if (truncation && !(*truncation > 0.0)) {
            throw InvalidGraphError("truncation radius must be positive");
        }
    }

    friend bool operator==(const StarGraph&, const StarGraph&) = default;
};

/// Uniform nodes {0, h, ..., L} on every edge; node 0 is the shared vertex.
template <typename Scalar>
struct GridSpec {
    Scalar cutoff = Scalar(6);
    int points_per_edge = 513;

    GridSpec() = default;
    GridSpec(Scalar L, int points) : cutoff(L), points_per_edge(points) {
        if (!(cutoff > Scalar(0)) || !std::isfinite(static_cast<double>(cutoff))) {
            throw ShapeError("grid cutoff must be positive and finite");
        }
        if (points_per_edge < 2) {
            throw ShapeError("grid needs at least two points per edge");
        }
    }

    Scalar spacing() const { return cutoff / Scalar(points_per_edge - 1); }
    Scalar radius(int node) const { return Scalar(node) * spacing(); }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Pointwise description of a function on S_m: value(edge, radius).
template <typename Scalar>
using EdgeFunction = std::function<Scalar(int, Scalar)>;

/// Grid samples of a function on S_m, one column per edge, row k at radius k*h.
///
/// When the edge values at radius 0 agree, the function is flagged continuous
/// and the vertex value is stored once (mirrored to every column).
template <typename Scalar>
class StarFunction {
public:
    using MatrixType = Matrix<Scalar>;

    StarFunction() = default;

    static StarFunction from_values(StarGraph graph, GridSpec<Scalar> grid, MatrixType values) {
        if (values.rows() != grid.points_per_edge || values.cols() != graph.m) {
            throw ShapeError("StarFunction values must be points_per_edge x m");
        }
        StarFunction f;
        f.graph_ = graph;
        f.grid_ = grid;
        f.values_ = std::move(values);
        f.settle_vertex();
        return f;
    }

    static StarFunction sample(StarGraph graph, GridSpec<Scalar> grid, const EdgeFunction<Scalar>& fn) {
        MatrixType values(grid.points_per_edge, graph.m);
        for (int e = 0; e < graph.m; ++e) {
            for (int k = 0; k < grid.points_per_edge; ++k) {
                values(k, e) = fn(e, grid.radius(k));
            }
        }
        return from_values(graph, grid, std::move(values));
    }

    static StarFunction constant(StarGraph graph, GridSpec<Scalar> grid, Scalar c) {
        return from_values(graph, grid, MatrixType::Constant(grid.points_per_edge, graph.m, c));
    }

    /// Builds a vertex-continuous function from the vertex value and the
    /// off-vertex samples (rows 1..N-1).
    static StarFunction from_vertex(StarGraph graph, GridSpec<Scalar> grid, Scalar vertex,
                                    const MatrixType& off_vertex) {
        if (off_vertex.rows() != grid.points_per_edge - 1 || off_vertex.cols() != graph.m) {
            throw ShapeError("off-vertex samples must be (points_per_edge-1) x m");
        }
        MatrixType values(grid.points_per_edge, graph.m);
        values.row(0).setConstant(vertex);
        values.bottomRows(grid.points_per_edge - 1) = off_vertex;
        StarFunction f;
        f.graph_ = graph;
        f.grid_ = grid;
        f.values_ = std::move(values);
        f.continuous_ = true;
        return f;
    }

    const StarGraph& graph() const { return graph_; }
    int m() const { return graph_.m; }
    const GridSpec<Scalar>& grid() const { return grid_; }
    int points() const { return grid_.points_per_edge; }
    Scalar radius(int node) const { return grid_.radius(node); }
    const MatrixType& values() const { return values_; }
    auto edge(int e) const { return values_.col(e); }
    Scalar operator()(int e, int node) const { return values_(node, e); }

    bool continuous_at_vertex() const { return continuous_; }

    Scalar vertex_value() const {
        if (!continuous_) {
            throw PreconditionError("function is not continuous at the vertex");
        }
        return values_(0, 0);
    }

    bool same_layout(const StarFunction& other) const {
        return graph_.m == other.graph_.m && grid_ == other.grid_;
    }

    StarFunction operator+(const StarFunction& rhs) const { return combine(rhs, values_ + rhs.values_); }
    StarFunction operator-(const StarFunction& rhs) const { return combine(rhs, values_ - rhs.values_); }
    StarFunction operator-() const { return rescaled(Scalar(-1)); }
    friend StarFunction operator*(Scalar s, const StarFunction& f) { return f.rescaled(s); }
    friend StarFunction operator*(const StarFunction& f, Scalar s) { return f.rescaled(s); }

private:
    void settle_vertex() {
        const Scalar first = values_(0, 0);
        const Scalar scale = std::max(Scalar(1), values_.row(0).cwiseAbs().maxCoeff());
        const Scalar tol = Scalar(8) * std::numeric_limits<Scalar>::epsilon() * scale;
        continuous_ = ((values_.row(0).array() - first).abs() <= tol).all();
        if (continuous_) {
            values_.row(0).setConstant(first);
        }
    }

    StarFunction combine(const StarFunction& rhs, MatrixType values) const {
        if (!same_layout(rhs)) {
            throw ShapeError("StarFunction arithmetic on mismatched grids");
        }
        return from_values(graph_, grid_, std::move(values));
    }

    StarFunction rescaled(Scalar s) const {
        StarFunction f = *this;
        f.values_ *= s;
        return f;
    }

    StarGraph graph_{};
    GridSpec<Scalar> grid_{};
    MatrixType values_{};
    bool continuous_ = false;
};

enum class MeasureKind { lebesgue, gaussian_mu };

/// Normalising constant 2/(m sqrt(pi)) of the invariant measure on one edge.
template <typename Scalar>
Scalar mu_normalization(int m) {
    require_edge_count(m);
    return Scalar(2) / (Scalar(m) * std::sqrt(std::numbers::pi_v<Scalar>));
}

/// Edgewise density of mu_m with respect to Lebesgue measure.
template <typename Scalar>
Scalar mu_density(const StarPoint<Scalar>& p, int m) {
    return mu_normalization<Scalar>(m) * std::exp(-p.radius * p.radius);
}

template <typename Scalar>
Vector<Scalar> measure_weights(const GridSpec<Scalar>& grid, MeasureKind measure, int m) {
    Vector<Scalar> w = simpson_weights<Scalar>(grid.points_per_edge, grid.spacing());
    if (measure == MeasureKind::gaussian_mu) {
        const Scalar c = mu_normalization<Scalar>(m);
        for (int k = 0; k < grid.points_per_edge; ++k) {
            const Scalar r = grid.radius(k);
            w(k) *= c * std::exp(-r * r);
        }
    }
    return w;
}

template <typename Scalar>
void require_finite(const StarFunction<Scalar>& f, const char* what) {
    if (!f.values().allFinite()) {
        throw NumericalInputError(std::string(what) + ": non-finite sample value");
    }
}

/// Sum over edges of the integral over [0, L] against the chosen measure,
/// by composite Simpson on the function's own grid.
template <typename Scalar>
Scalar integrate_star(const StarFunction<Scalar>& f, MeasureKind measure) {
    require_finite(f, "integrate_star");
    const Vector<Scalar> w = measure_weights(f.grid(), measure, f.m());
    return (w.transpose() * f.values()).sum();
}

template <typename Scalar>
Scalar integrate_star(const StarFunction<Scalar>& f, MeasureKind measure, const GridSpec<Scalar>& grid) {
    if (!(f.grid() == grid)) {
        throw ShapeError("integrate_star: function is sampled on a different grid");
    }
    return integrate_star(f, measure);
}

template <typename Scalar>
Scalar integrate_star(const EdgeFunction<Scalar>& f, int m, MeasureKind measure, const GridSpec<Scalar>& grid) {
    return integrate_star(StarFunction<Scalar>::sample(StarGraph(m), grid, f), measure);
}

template <typename Scalar>
Scalar sup_norm(const StarFunction<Scalar>& f) {
    return f.values().cwiseAbs().maxCoeff();
}

template <typename Scalar>
Scalar sup_distance(const StarFunction<Scalar>& f, const StarFunction<Scalar>& g) {
    if (!f.same_layout(g)) {
        throw ShapeError("sup_distance: mismatched grids or edge counts");
    }
    return (f.values() - g.values()).cwiseAbs().maxCoeff();
}

/// L^2 norm against `measure`, by the same quadrature as integrate_star.
template <typename Scalar>
Scalar l2_norm(const StarFunction<Scalar>& f, MeasureKind measure) {
    require_finite(f, "l2_norm");
    const Vector<Scalar> w = measure_weights(f.grid(), measure, f.m());
    return std::sqrt((w.transpose() * f.values().cwiseAbs2()).sum());
}

}  // namespace stargraph
