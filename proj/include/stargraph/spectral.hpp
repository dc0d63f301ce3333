#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stargraph/errors.hpp"
#include "stargraph/kernels.hpp"
#include "stargraph/quadrature.hpp"
#include "stargraph/semigroup.hpp"
#include "stargraph/star_graph.hpp"

namespace stargraph {

/// Physicists' Hermite polynomial H_k(x) by H_{k+1} = 2x H_k - 2k H_{k-1}.
template <typename Scalar>
Scalar hermite(int k, Scalar x) {
    if (k < 0) {
        throw DomainError("hermite: degree must be non-negative");
    }
    Scalar prev = Scalar(1);
    if (k == 0) {
        return prev;
    }
    Scalar cur = Scalar(2) * x;
    for (int j = 1; j < k; ++j) {
        const Scalar next = Scalar(2) * x * cur - Scalar(2 * j) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Dense polynomial, coefficients in ascending powers.
template <typename Scalar>
struct Polynomial {
    Vector<Scalar> coeffs = Vector<Scalar>::Zero(1);

    static Polynomial monomial(int degree, Scalar c = Scalar(1)) {
        Polynomial p;
        p.coeffs = Vector<Scalar>::Zero(degree + 1);
        p.coeffs(degree) = c;
        return p;
    }

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    Scalar operator()(Scalar x) const {
        Scalar acc = Scalar(0);
        for (Eigen::Index j = coeffs.size() - 1; j >= 0; --j) {
            acc = acc * x + coeffs(j);
        }
        return acc;
    }

    Polynomial derivative() const {
        Polynomial d;
        if (coeffs.size() <= 1) {
            return d;
        }
        d.coeffs.resize(coeffs.size() - 1);
        for (Eigen::Index j = 1; j < coeffs.size(); ++j) {
            d.coeffs(j - 1) = Scalar(j) * coeffs(j);
        }
        return d;
    }

    Polynomial times_x() const {
        Polynomial p;
        p.coeffs = Vector<Scalar>::Zero(coeffs.size() + 1);
        p.coeffs.tail(coeffs.size()) = coeffs;
        return p;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        Polynomial p;
        p.coeffs = Vector<Scalar>::Zero(std::max(a.coeffs.size(), b.coeffs.size()));
        p.coeffs.head(a.coeffs.size()) += a.coeffs;
        p.coeffs.head(b.coeffs.size()) += b.coeffs;
        return p;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + Scalar(-1) * b; }
    friend Polynomial operator*(Scalar s, const Polynomial& a) { return Polynomial{s * a.coeffs}; }

    /// Equality of the represented polynomials (trailing zeros ignored).
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        const Eigen::Index n = std::max(a.coeffs.size(), b.coeffs.size());
        for (Eigen::Index j = 0; j < n; ++j) {
            const Scalar ca = j < a.coeffs.size() ? a.coeffs(j) : Scalar(0);
            const Scalar cb = j < b.coeffs.size() ? b.coeffs(j) : Scalar(0);
            if (ca != cb) return false;
        }
        return true;
    }
};

/// Exact integer coefficients of H_k (representable in double up to k ~ 25).
template <typename Scalar>
Polynomial<Scalar> hermite_polynomial(int k) {
    if (k < 0) {
        throw DomainError("hermite_polynomial: degree must be non-negative");
    }
    Polynomial<Scalar> prev = Polynomial<Scalar>::monomial(0);
    if (k == 0) return prev;
    Polynomial<Scalar> cur = Polynomial<Scalar>::monomial(1, Scalar(2));
    for (int j = 1; j < k; ++j) {
        Polynomial<Scalar> next = Scalar(2) * cur.times_x() - Scalar(2 * j) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// exp(-gamma x^2) P(x).
template <typename Scalar>
struct GaussianPolynomial {
    Scalar gamma = Scalar(0);
    Polynomial<Scalar> poly;

    Scalar operator()(Scalar x) const { return std::exp(-gamma * x * x) * poly(x); }

    /// Same Gaussian factor, polynomial P' - 2 gamma x P.
    GaussianPolynomial derivative() const {
        return {gamma, poly.derivative() - (Scalar(2) * gamma) * poly.times_x()};
    }
};

/// Edge profile shared by all edges up to a per-edge weight:
/// f(x_i) = weights(i) * profile(|x_i|).
template <typename Scalar>
struct AnalyticStarFunction {
    Vector<Scalar> weights;
    GaussianPolynomial<Scalar> profile;

    int m() const { return static_cast<int>(weights.size()); }
    Scalar operator()(int edge, Scalar r) const { return weights(edge) * profile(r); }

    EdgeFunction<Scalar> as_edge_function() const {
        return [f = *this](int e, Scalar r) { return f(e, r); };
    }

    StarFunction<Scalar> sample(const GridSpec<Scalar>& grid) const {
        return StarFunction<Scalar>::sample(StarGraph(m()), grid, as_edge_function());
    }
};

/// Vertex conditions evaluated from exact coefficients.
template <typename Scalar>
VertexDefect analytic_vertex_defect(const AnalyticStarFunction<Scalar>& f) {
    const Scalar v0 = f.profile.poly.coeffs(0);
    const Scalar d0 = f.profile.derivative().poly.coeffs(0);
    const Vector<Scalar> at_vertex = f.weights * v0;
    return {static_cast<double>(at_vertex.maxCoeff() - at_vertex.minCoeff()),
            std::abs(static_cast<double>(f.weights.sum() * d0))};
}

enum class GeneratorKind { ou, harmonic_oscillator };

/// Ornstein-Uhlenbeck generator (1/2) f'' - x f', or the harmonic oscillator
/// (1/2)(f'' - x^2 f + f), applied symbolically.
template <typename Scalar>
AnalyticStarFunction<Scalar> apply_generator(GeneratorKind kind, const AnalyticStarFunction<Scalar>& f) {
    const GaussianPolynomial<Scalar> d1 = f.profile.derivative();
    const GaussianPolynomial<Scalar> d2 = d1.derivative();
    const Scalar half = Scalar(0.5);
    GaussianPolynomial<Scalar> out{f.profile.gamma, {}};
    if (kind == GeneratorKind::ou) {
        out.poly = half * d2.poly - d1.poly.times_x();
    } else {
        out.poly = half * (d2.poly - f.profile.poly.times_x().times_x() + f.profile.poly);
    }
    return {f.weights, std::move(out)};
}

namespace detail {

/// Fourth-order first and second derivatives of one edge profile.
template <typename Scalar, typename Column>
void fourth_order_derivatives(const Column& f, Scalar h, Vector<Scalar>& d1, Vector<Scalar>& d2) {
    const int n = static_cast<int>(f.size());
    d1.resize(n);
    d2.resize(n);
    const Scalar c1 = Scalar(1) / (Scalar(12) * h);
    const Scalar c2 = Scalar(1) / (Scalar(12) * h * h);
    for (int k = 2; k < n - 2; ++k) {
        d1(k) = c1 * (f(k - 2) - Scalar(8) * f(k - 1) + Scalar(8) * f(k + 1) - f(k + 2));
        d2(k) = c2 * (-f(k - 2) + Scalar(16) * f(k - 1) - Scalar(30) * f(k) + Scalar(16) * f(k + 1) - f(k + 2));
    }
    // one-sided closures; the right end mirrors the left with s = -1
    const auto close = [&](int k0, int s) {
        const auto g = [&](int j) { return f(k0 + s * j); };
        d1(k0) = Scalar(s) * c1 *
                 (Scalar(-25) * g(0) + Scalar(48) * g(1) - Scalar(36) * g(2) + Scalar(16) * g(3) - Scalar(3) * g(4));
        d2(k0) = c2 * (Scalar(45) * g(0) - Scalar(154) * g(1) + Scalar(214) * g(2) - Scalar(156) * g(3) +
                       Scalar(61) * g(4) - Scalar(10) * g(5));
        const int k1 = k0 + s;
        d1(k1) = Scalar(s) * c1 *
                 (Scalar(-3) * g(0) - Scalar(10) * g(1) + Scalar(18) * g(2) - Scalar(6) * g(3) + g(4));
        d2(k1) = c2 * (Scalar(10) * g(0) - Scalar(15) * g(1) - Scalar(4) * g(2) + Scalar(14) * g(3) -
                       Scalar(6) * g(4) + g(5));
    };
    close(0, 1);
    close(n - 1, -1);
}

}  // namespace detail

/// Generator on grid data, edge by edge, with fourth-order differences
/// (one-sided at the vertex and at the cutoff). Needs six points per edge.
template <typename Scalar>
StarFunction<Scalar> apply_generator(GeneratorKind kind, const StarFunction<Scalar>& f) {
    if (f.points() < 6) {
        throw StencilError("apply_generator: fourth-order stencils need six points per edge");
    }
    const Scalar h = f.grid().spacing();
    Matrix<Scalar> out(f.points(), f.m());
    Vector<Scalar> d1;
    Vector<Scalar> d2;
    for (int e = 0; e < f.m(); ++e) {
        detail::fourth_order_derivatives<Scalar>(f.edge(e), h, d1, d2);
        for (int k = 0; k < f.points(); ++k) {
            const Scalar x = f.radius(k);
            out(k, e) = kind == GeneratorKind::ou ? Scalar(0.5) * d2(k) - x * d1(k)
                                                  : Scalar(0.5) * (d2(k) - x * x * f(e, k) + f(e, k));
        }
    }
    return StarFunction<Scalar>::from_values(f.graph(), f.grid(), std::move(out));
}

/// Multiplicity of the eigenvalue -k on S_m: 1 for even k, m - 1 for odd k.
inline int level_multiplicity(int m, int k) {
    require_edge_count(m);
    return k % 2 == 0 ? 1 : m - 1;
}

template <typename Scalar>
struct SpectralDatum {
    int level = 0;
    Scalar eigenvalue = Scalar(0);
    int multiplicity = 0;
    std::vector<AnalyticStarFunction<Scalar>> basis;
};

/// Eigenfunctions of level k: H_k on every edge for even k (Neumann branch),
/// H_k (e_1 - e_l), l = 2..m, for odd k (Dirichlet branch). Odd levels on
/// the half-line (m = 1) are empty.
template <typename Scalar>
SpectralDatum<Scalar> eigenbasis(int m, int k) {
    require_edge_count(m);
    if (k < 0) {
        throw DomainError("eigenbasis: level must be non-negative");
    }
    SpectralDatum<Scalar> datum;
    datum.level = k;
    datum.eigenvalue = -Scalar(k);
    datum.multiplicity = level_multiplicity(m, k);
    const GaussianPolynomial<Scalar> profile{Scalar(0), hermite_polynomial<Scalar>(k)};
    if (k % 2 == 0) {
        datum.basis.push_back({Vector<Scalar>::Ones(m), profile});
    } else {
        for (int l = 1; l < m; ++l) {
            Vector<Scalar> w = Vector<Scalar>::Zero(m);
            w(0) = Scalar(1);
            w(l) = Scalar(-1);
            datum.basis.push_back({std::move(w), profile});
        }
    }
    return datum;
}

/// Cyclic edge shift (f_1, ..., f_m) -> (f_2, ..., f_m, f_1).
struct RotationOperator {
    int m = 1;

    explicit RotationOperator(int edges) : m(edges) { require_edge_count(m); }

    int source_edge(int e) const { return (e + 1) % m; }

    template <typename Scalar>
    StarFunction<Scalar> operator()(const StarFunction<Scalar>& f) const {
        if (f.m() != m) throw ShapeError("rotation: edge count mismatch");
        Matrix<Scalar> out(f.points(), m);
        for (int e = 0; e < m; ++e) out.col(e) = f.edge(source_edge(e));
        return StarFunction<Scalar>::from_values(f.graph(), f.grid(), std::move(out));
    }

    template <typename Scalar>
    AnalyticStarFunction<Scalar> operator()(const AnalyticStarFunction<Scalar>& f) const {
        if (f.m() != m) throw ShapeError("rotation: edge count mismatch");
        Vector<Scalar> w(m);
        for (int e = 0; e < m; ++e) w(e) = f.weights(source_edge(e));
        return {std::move(w), f.profile};
    }

    /// Edge-weight vector (1, z^j, ..., z^{j(m-1)}), z = e^{2 pi i/m}: the
    /// eigenvector of the shift with eigenvalue z^j.
    static Eigen::VectorXcd eigenvector(int m, int j) {
        require_edge_count(m);
        Eigen::VectorXcd v(m);
        for (int e = 0; e < m; ++e) {
            v(e) = std::polar(1.0, 2.0 * std::numbers::pi * j * e / m);
        }
        return v;
    }

    Eigen::MatrixXd matrix() const {
        Eigen::MatrixXd r = Eigen::MatrixXd::Zero(m, m);
        for (int e = 0; e < m; ++e) r(e, source_edge(e)) = 1.0;
        return r;
    }
};

/// P1 finite-element discretisation of the form a(f, g) = 1/2 sum_i int f_i' g_i' dmu_m
/// and the mu_m inner product on the star grid. Degree of freedom 0 is the
/// shared vertex; edge e, node k >= 1 is dof 1 + e (N - 1) + (k - 1).
template <typename Scalar>
struct FormMatrices {
    int m = 1;
    GridSpec<Scalar> grid;
    Matrix<Scalar> stiffness;
    Matrix<Scalar> mass;

    int dof(int edge, int node) const { return node == 0 ? 0 : 1 + edge * (grid.points_per_edge - 1) + node - 1; }
    int size() const { return 1 + m * (grid.points_per_edge - 1); }
};

template <typename Scalar>
FormMatrices<Scalar> form_matrix(int m, const GridSpec<Scalar>& grid) {
    require_edge_count(m);
    if (grid.points_per_edge < 2 || !(grid.cutoff > Scalar(0))) {
        throw AssemblyError("form_matrix: degenerate grid");
    }
    FormMatrices<Scalar> fm;
    fm.m = m;
    fm.grid = grid;
    const int n = fm.size();
    fm.stiffness = Matrix<Scalar>::Zero(n, n);
    fm.mass = Matrix<Scalar>::Zero(n, n);
    const GaussRule<Scalar> rule = gauss_legendre<Scalar>(6);
    const Scalar h = grid.spacing();
    const Scalar c = mu_normalization<Scalar>(m);
    for (int k = 0; k + 1 < grid.points_per_edge; ++k) {
        const Scalar a = grid.radius(k);
        // Element integrals of mu, mu*phi_a*phi_b on [a, a + h].
        Scalar w_total = 0;
        Eigen::Matrix<Scalar, 2, 2> local_mass = Eigen::Matrix<Scalar, 2, 2>::Zero();
        for (int q = 0; q < rule.nodes.size(); ++q) {
            const Scalar s = (rule.nodes(q) + Scalar(1)) / Scalar(2);
            const Scalar x = a + s * h;
            const Scalar w = rule.weights(q) * h / Scalar(2) * c * std::exp(-x * x);
            const Scalar phi[2] = {Scalar(1) - s, s};
            w_total += w;
            local_mass(0, 0) += w * phi[0] * phi[0];
            local_mass(0, 1) += w * phi[0] * phi[1];
            local_mass(1, 1) += w * phi[1] * phi[1];
        }
        local_mass(1, 0) = local_mass(0, 1);
        const Scalar ks = w_total / (Scalar(2) * h * h);
        for (int e = 0; e < m; ++e) {
            const int dofs[2] = {fm.dof(e, k), fm.dof(e, k + 1)};
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    fm.stiffness(dofs[i], dofs[j]) += (i == j ? ks : -ks);
                    fm.mass(dofs[i], dofs[j]) += local_mass(i, j);
                }
            }
        }
    }
    return fm;
}

/// Ascending generalized eigenvalues of (stiffness, mass); they approximate
/// the negated spectrum {0, 1, 2, ...}.
template <typename Scalar>
Vector<Scalar> form_eigenvalues(const FormMatrices<Scalar>& fm) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix<Scalar>> solver(fm.stiffness, fm.mass, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw AssemblyError("form_eigenvalues: eigensolver failed");
    }
    return solver.eigenvalues();
}

template <typename Scalar>
struct LevelCluster {
    int level = 0;
    int multiplicity_analytic = 0;
    std::vector<Scalar> eigenvalues;  // numeric values within tolerance of the level
};

/// Groups numeric form eigenvalues around the levels 0..levels-1.
template <typename Scalar>
std::vector<LevelCluster<Scalar>> cluster_levels(const Vector<Scalar>& eigenvalues, int m, int levels,
                                                 Scalar tolerance) {
    std::vector<LevelCluster<Scalar>> out;
    for (int k = 0; k < levels; ++k) {
        LevelCluster<Scalar> c;
        c.level = k;
        c.multiplicity_analytic = level_multiplicity(m, k);
        for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
            if (std::abs(eigenvalues(j) - Scalar(k)) <= tolerance) {
                c.eigenvalues.push_back(eigenvalues(j));
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

template <typename Scalar>
struct TraceComparison {
    Scalar analytic_partial;  // sum_{k <= K} mult(k) e^{-kt}
    Scalar closed_form;       // (1 + (m-1) e^{-t}) / (1 - e^{-2t})
    Scalar kernel_trace;      // int_{S_m} p_m(t, x, x) dx
};

inline constexpr double kMinTraceTime = 0.05;

template <typename Scalar>
TraceComparison<Scalar> trace_partial(Scalar t, int m, int K) {
    require_edge_count(m);
    if (!(t >= Scalar(kMinTraceTime))) {
        throw DomainError("trace_partial: t must be >= 0.05");
    }
    if (K < 0) {
        throw DomainError("trace_partial: K must be non-negative");
    }
    TraceComparison<Scalar> out{};
    Scalar partial = Scalar(0);
    for (int k = 0; k <= K; ++k) {
        partial += Scalar(level_multiplicity(m, k)) * std::exp(-Scalar(k) * t);
    }
    out.analytic_partial = partial;
    out.closed_form = (Scalar(1) + Scalar(m - 1) * std::exp(-t)) / (-std::expm1(Scalar(-2) * t));

    // Diagonal decays like exp(-(1-a)^2 x^2 / d); integrate until that is e^{-40}.
    const KernelTimeFactors<Scalar> f(t);
    const Scalar extent = std::sqrt(Scalar(40) * f.spread) / (Scalar(1) - f.decay);
    const int points = 4001;
    const Scalar h = extent / Scalar(points - 1);
    const Vector<Scalar> w = simpson_weights<Scalar>(points, h);
    const Scalar reflect = Scalar(2 - m) / Scalar(m);
    Scalar integral = Scalar(0);
    for (int k = 0; k < points; ++k) {
        const Scalar x = Scalar(k) * h;
        integral += w(k) * (f.ou(x, x) + reflect * f.ou(x, -x));
    }
    out.kernel_trace = Scalar(m) * integral;
    return out;
}

}  // namespace stargraph
