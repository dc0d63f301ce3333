#pragma once

#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

#include "stargraph/errors.hpp"

namespace stargraph {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Composite Simpson weights on `points` equispaced nodes with spacing `h`.
///
/// An odd number of intervals is closed with the 3/8 rule on the last three,
/// so the rule integrates cubics exactly for every node count >= 3. Two nodes
/// fall back to the trapezoid rule.
template <typename Scalar>
Vector<Scalar> simpson_weights(std::ptrdiff_t points, Scalar h) {
    if (points < 2) {
        throw ShapeError("simpson_weights: need at least two nodes");
    }
    Vector<Scalar> w = Vector<Scalar>::Zero(points);
    const std::ptrdiff_t intervals = points - 1;
    if (intervals == 1) {
        w.setConstant(h / Scalar(2));
        return w;
    }
    std::ptrdiff_t simpson_intervals = intervals;
    if (intervals % 2 == 1) {
        simpson_intervals = intervals - 3;
        const std::ptrdiff_t s = simpson_intervals;
        const Scalar c = Scalar(3) * h / Scalar(8);
        w(s) += c;
        w(s + 1) += Scalar(3) * c;
        w(s + 2) += Scalar(3) * c;
        w(s + 3) += c;
    }
    for (std::ptrdiff_t k = 0; k < simpson_intervals; k += 2) {
        w(k) += h / Scalar(3);
        w(k + 1) += Scalar(4) * h / Scalar(3);
        w(k + 2) += h / Scalar(3);
    }
    return w;
}

/// Gauss-Legendre nodes and weights on [-1, 1].
template <typename Scalar>
struct GaussRule {
    Vector<Scalar> nodes;
    Vector<Scalar> weights;
};

/// Golub-Welsch: eigen-decomposition of the Legendre Jacobi matrix.
template <typename Scalar>
GaussRule<Scalar> gauss_legendre(int order) {
    if (order < 1) {
        throw DomainError("gauss_legendre: order must be positive");
    }
    Matrix<Scalar> jacobi = Matrix<Scalar>::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const Scalar beta = Scalar(k) / std::sqrt(Scalar(4 * k * k - 1));
        jacobi(k, k - 1) = beta;
        jacobi(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(jacobi);
    GaussRule<Scalar> rule;
    rule.nodes = solver.eigenvalues();
    rule.weights = Scalar(2) * solver.eigenvectors().row(0).transpose().cwiseAbs2();
    return rule;
}

}  // namespace stargraph
