#pragma once

#include <cmath>
#include <utility>

#include "stargraph/kernels.hpp"
#include "stargraph/semigroup.hpp"
#include "stargraph/star_graph.hpp"

namespace stargraph {

/// Past this radius e^{x^2/2} exceeds 1e6 (at ~5.26) and division by the
/// Gaussian amplifies grid noise beyond any signal.
inline constexpr double kTrustedRadius = 5.5;

template <typename Scalar>
Scalar flat_weight(int m, Scalar r) {
    return std::sqrt(mu_normalization<Scalar>(m)) * std::exp(-r * r / Scalar(2));
}

/// Isometry L^2(mu_m) -> L^2: multiply edgewise by sqrt(c_m) e^{-x^2/2}.
template <typename Scalar>
StarFunction<Scalar> to_flat(const StarFunction<Scalar>& f) {
    Matrix<Scalar> v = f.values();
    for (int k = 0; k < f.points(); ++k) {
        v.row(k) *= flat_weight<Scalar>(f.m(), f.radius(k));
    }
    return StarFunction<Scalar>::from_values(f.graph(), f.grid(), std::move(v));
}

template <typename Scalar>
EdgeFunction<Scalar> to_flat(EdgeFunction<Scalar> f, int m) {
    require_edge_count(m);
    return [f = std::move(f), m](int e, Scalar r) { return flat_weight<Scalar>(m, r) * f(e, r); };
}

template <typename Scalar>
struct Unflattened {
    StarFunction<Scalar> function;
    Scalar trusted_radius;
    int first_untrusted_node;  // == points() when every node is trusted
};

/// Inverse of to_flat. Nodes past kTrustedRadius are reported as untrusted.
template <typename Scalar>
Unflattened<Scalar> from_flat(const StarFunction<Scalar>& g) {
    Matrix<Scalar> v = g.values();
    int first_untrusted = g.points();
    for (int k = 0; k < g.points(); ++k) {
        const Scalar r = g.radius(k);
        v.row(k) /= flat_weight<Scalar>(g.m(), r);
        if (r > Scalar(kTrustedRadius) && first_untrusted == g.points()) {
            first_untrusted = k;
        }
    }
    return {StarFunction<Scalar>::from_values(g.graph(), g.grid(), std::move(v)), Scalar(kTrustedRadius),
            first_untrusted};
}

template <typename Scalar>
EdgeFunction<Scalar> from_flat(EdgeFunction<Scalar> g, int m) {
    require_edge_count(m);
    return [g = std::move(g), m](int e, Scalar r) { return g(e, r) / flat_weight<Scalar>(m, r); };
}

/// Sup over the trusted window of |U_m(t) f - T S_m(t) T^{-1} f|.
template <typename Scalar>
Scalar similarity_check(int m, Scalar t, const EdgeFunction<Scalar>& f, const GridSpec<Scalar>& grid) {
    const StarFunction<Scalar> direct = apply(KernelSpec<Scalar>::harmonic_oscillator(), m, t, f, grid);
    const StarFunction<Scalar> conjugated = to_flat(apply(KernelSpec<Scalar>::ou(), m, t, from_flat(f, m), grid));
    Scalar defect = Scalar(0);
    for (int k = 0; k < grid.points_per_edge && grid.radius(k) <= Scalar(kTrustedRadius); ++k) {
        defect = std::max(defect, (direct.values().row(k) - conjugated.values().row(k)).cwiseAbs().maxCoeff());
    }
    return defect;
}

}  // namespace stargraph
