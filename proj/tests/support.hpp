#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "stargraph/star_graph.hpp"

namespace stargraph::testing {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Adaptive Gauss-Kronrod on [a, b]; infinite ends are mapped internally.
inline double quad(const std::function<double(double)>& f, double a, double b) {
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14, &error);
}

/// Sum over edges of the half-line integral of f(e, r) against the given measure.
inline double quad_star(const EdgeFunction<double>& f, int m, MeasureKind measure) {
    double total = 0.0;
    for (int e = 0; e < m; ++e) {
        total += quad(
            [&](double r) {
                const double w = measure == MeasureKind::gaussian_mu ? mu_normalization<double>(m) * std::exp(-r * r) : 1.0;
                return w * f(e, r);
            },
            0.0, kInf);
    }
    return total;
}

/// Smooth vertex-continuous data with an edge-dependent Kirchhoff defect.
inline EdgeFunction<double> mixed_profile() {
    return [](int e, double r) { return (1.0 + 0.4 * (e + 1) * r) * std::exp(-r * r / 2); };
}

inline EdgeFunction<double> bump_on(int edge) {
    return [edge](int e, double r) { return e == edge ? r * r * std::exp(-2 * (r - 1.5) * (r - 1.5)) : 0.0; };
}

/// Random smooth data: per-edge Gaussians sharing one vertex value.
inline EdgeFunction<double> random_profile(std::mt19937& rng, int m) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double vertex = u(rng);
    std::vector<double> slope(m), width(m), offset(m);
    for (int e = 0; e < m; ++e) {
        slope[e] = u(rng);
        width[e] = 0.5 + 0.5 * (u(rng) + 1.0);
        offset[e] = u(rng);
    }
    return [=](int e, double r) {
        return (vertex + slope[e] * r + offset[e] * r * r) * std::exp(-width[e] * r * r);
    };
}

}  // namespace stargraph::testing
