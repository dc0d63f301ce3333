#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "stargraph/errors.hpp"
#include "stargraph/extension.hpp"
#include "stargraph/kernels.hpp"
#include "stargraph/parallel.hpp"
#include "stargraph/star_graph.hpp"

namespace stargraph {

/// Radius beyond which the kernel mass seen from any point of [0, cutoff] is
/// below 1e-16 of its peak. Both closed-form kernels are centred at most at
/// 2a/(1+a^2) |x| with Gaussian width at most sqrt(d), a = e^{-t}, d = 1 - a^2.
template <typename Scalar>
Scalar integration_extent(const KernelSpec<Scalar>& spec, Scalar t, Scalar cutoff) {
    const KernelTimeFactors<Scalar> f(t);
    const Scalar a = f.decay;
    const Scalar centre = Scalar(2) * a / (Scalar(1) + a * a) * cutoff;
    Scalar extent = std::max(cutoff, centre + Scalar(8.6) * std::sqrt(f.spread));
    if (spec.kind == KernelKind::tabulated && spec.table) {
        extent = std::min(extent, spec.table->grid.half_width);
    }
    return extent;
}

/// Integration nodes {0, h, ..., y_max} sharing the spacing (and the first
/// nodes) of the output grid.
template <typename Scalar>
struct IntegrationGrid {
    Scalar spacing;
    int points;
    Vector<Scalar> weights;

    Scalar radius(int k) const { return Scalar(k) * spacing; }
};

template <typename Scalar>
IntegrationGrid<Scalar> integration_grid(const KernelSpec<Scalar>& spec, Scalar t, const GridSpec<Scalar>& grid) {
    const Scalar h = grid.spacing();
    const Scalar extent = integration_extent(spec, t, grid.cutoff);
    int intervals = std::max(grid.points_per_edge - 1, static_cast<int>(std::ceil(extent / h - Scalar(1e-9))));
    if (spec.kind != KernelKind::tabulated && intervals % 2 == 1) {
        ++intervals;
    }
    return {h, intervals + 1, simpson_weights<Scalar>(intervals + 1, h)};
}

namespace detail {

template <typename Scalar>
Matrix<Scalar> sample_on(const IntegrationGrid<Scalar>& nodes, int m, const EdgeFunction<Scalar>& f) {
    Matrix<Scalar> samples(nodes.points, m);
    for (int e = 0; e < m; ++e) {
        for (int k = 0; k < nodes.points; ++k) {
            samples(k, e) = f(e, nodes.radius(k));
        }
    }
    if (!samples.allFinite()) {
        throw NumericalInputError("semigroup: non-finite initial data");
    }
    return samples;
}

/// Grid samples extended past the cutoff by holding each edge's last value.
template <typename Scalar>
Matrix<Scalar> sample_on(const IntegrationGrid<Scalar>& nodes, const StarFunction<Scalar>& f) {
    require_finite(f, "semigroup");
    const int n = std::min(nodes.points, f.points());
    Matrix<Scalar> samples(nodes.points, f.m());
    samples.topRows(n) = f.values().topRows(n);
    for (int k = n; k < nodes.points; ++k) {
        samples.row(k) = f.values().row(f.points() - 1);
    }
    return samples;
}

/// Core of every semigroup application. With k+ = k(t, r, y) and
/// k- = k(t, r, -y) integrated against the samples F,
///   out_i(r) = (k+ F)_i - (k- F)_i + (2/m) sum_j (k- F)_j,
/// which is the scattering form of the star kernel. The vertex row uses the
/// edge-independent (2/m) sum_j (k- F)_j directly.
template <typename Scalar>
StarFunction<Scalar> integrate_against_kernel(const KernelSpec<Scalar>& spec, int m, Scalar t,
                                              const IntegrationGrid<Scalar>& nodes, const Matrix<Scalar>& samples,
                                              const GridSpec<Scalar>& out_grid) {
    const LineKernelAt<Scalar> k(spec, t);
    const int rows = out_grid.points_per_edge;
    Matrix<Scalar> direct(rows, nodes.points);
    Matrix<Scalar> reflected(rows, nodes.points);
    parallel_for(rows, [&](int begin, int end) {
        for (int r = begin; r < end; ++r) {
            const Scalar x = out_grid.radius(r);
            for (int l = 0; l < nodes.points; ++l) {
                const Scalar y = nodes.radius(l);
                direct(r, l) = nodes.weights(l) * k(x, y);
                reflected(r, l) = nodes.weights(l) * k(x, -y);
            }
        }
    });
    const Matrix<Scalar> a = direct * samples;
    const Matrix<Scalar> b = reflected * samples;
    const Vector<Scalar> transmitted = (Scalar(2) / Scalar(m)) * b.rowwise().sum();
    Matrix<Scalar> out = a - b;
    out.colwise() += transmitted;
    return StarFunction<Scalar>::from_vertex(StarGraph(m), out_grid, transmitted(0), out.bottomRows(rows - 1));
}

}  // namespace detail

/// x -> integral over S_m of p_m(t, x, y) f(y) dy at every node of `grid`.
/// The y-quadrature runs past the cutoff as far as the kernel reaches.
template <typename Scalar>
StarFunction<Scalar> apply(const KernelSpec<Scalar>& spec, int m, Scalar t, const EdgeFunction<Scalar>& f,
                           const GridSpec<Scalar>& grid) {
    require_edge_count(m);
    const IntegrationGrid<Scalar> nodes = integration_grid(spec, t, grid);
    return detail::integrate_against_kernel(spec, m, t, nodes, detail::sample_on(nodes, m, f), grid);
}

/// Grid-sampled initial data; the output lives on the same grid. Past the
/// cutoff each edge is continued by its last sample.
template <typename Scalar>
StarFunction<Scalar> apply(const KernelSpec<Scalar>& spec, Scalar t, const StarFunction<Scalar>& f) {
    const IntegrationGrid<Scalar> nodes = integration_grid(spec, t, f.grid());
    return detail::integrate_against_kernel(spec, f.m(), t, nodes, detail::sample_on(nodes, f), f.grid());
}

template <typename Scalar>
StarFunction<Scalar> apply(const KernelSpec<Scalar>& spec, int m, Scalar t, const StarFunction<Scalar>& f,
                           const GridSpec<Scalar>& grid) {
    if (f.m() != m || !(f.grid() == grid)) {
        throw ShapeError("apply: initial data does not live on the requested grid");
    }
    return apply(spec, t, f);
}

/// The semigroup image as a pointwise callable: each evaluation is one
/// quadrature with the spacing of `grid`. Lets compositions avoid
/// truncating intermediate results at the cutoff.
template <typename Scalar>
EdgeFunction<Scalar> propagate(const KernelSpec<Scalar>& spec, int m, Scalar t, const EdgeFunction<Scalar>& f,
                               const GridSpec<Scalar>& grid) {
    require_edge_count(m);
    auto nodes = std::make_shared<const IntegrationGrid<Scalar>>(integration_grid(spec, t, grid));
    const Matrix<Scalar> samples = detail::sample_on(*nodes, m, f);
    // Per node: own-edge samples, and the transmitted combination (2/m) sum_j f_j.
    auto data = std::make_shared<const Matrix<Scalar>>(samples);
    auto edge_sum = std::make_shared<const Vector<Scalar>>((Scalar(2) / Scalar(m)) * samples.rowwise().sum());
    const LineKernelAt<Scalar> k(spec, t);
    return [k, nodes, data, edge_sum, m](int edge, Scalar r) {
        if (edge < 0 || edge >= m) {
            throw InvalidPointError("propagate: edge index out of range");
        }
        Scalar sum = Scalar(0);
        if (r == Scalar(0)) {
            for (int l = 0; l < nodes->points; ++l) {
                sum += nodes->weights(l) * k(r, -nodes->radius(l)) * (*edge_sum)(l);
            }
            return sum;
        }
        for (int l = 0; l < nodes->points; ++l) {
            const Scalar y = nodes->radius(l);
            const Scalar own = (*data)(l, edge);
            sum += nodes->weights(l) * (k(r, y) * own + k(r, -y) * ((*edge_sum)(l) - own));
        }
        return sum;
    };
}

struct VertexDefect {
    double continuity = 0.0;
    double kirchhoff = 0.0;
};

/// Spread of the edge values at the vertex and |sum_i u_i'(0)| with
/// second-order one-sided slopes.
template <typename Scalar>
VertexDefect vertex_defect(const StarFunction<Scalar>& u) {
    if (u.points() < 3) {
        throw StencilError("vertex_defect: need at least three points per edge");
    }
    const auto& v = u.values();
    const Scalar spread = v.row(0).maxCoeff() - v.row(0).minCoeff();
    Scalar slope_sum = Scalar(0);
    for (int e = 0; e < u.m(); ++e) {
        slope_sum += one_sided_slope(v(0, e), v(1, e), v(2, e), u.grid().spacing());
    }
    return {static_cast<double>(spread), std::abs(static_cast<double>(slope_sum))};
}

/// One snapshot per time, each computed from the initial data directly.
template <typename Scalar>
std::vector<StarFunction<Scalar>> evolve_sequence(const KernelSpec<Scalar>& spec, int m, std::span<const Scalar> times,
                                                  const EdgeFunction<Scalar>& f, const GridSpec<Scalar>& grid) {
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (!(times[j] > Scalar(0)) || (j > 0 && !(times[j] > times[j - 1]))) {
            throw DomainError("evolve_sequence: times must be positive and strictly ascending");
        }
    }
    std::vector<StarFunction<Scalar>> out;
    out.reserve(times.size());
    for (const Scalar t : times) {
        out.push_back(apply(spec, m, t, f, grid));
    }
    return out;
}

template <typename Scalar>
std::vector<StarFunction<Scalar>> evolve_sequence(const KernelSpec<Scalar>& spec, int m,
                                                  const std::vector<Scalar>& times, const EdgeFunction<Scalar>& f,
                                                  const GridSpec<Scalar>& grid) {
    return evolve_sequence(spec, m, std::span<const Scalar>(times), f, grid);
}

}  // namespace stargraph
