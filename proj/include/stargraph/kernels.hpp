#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "stargraph/errors.hpp"
#include "stargraph/extension.hpp"
#include "stargraph/star_graph.hpp"

namespace stargraph {

/// Below this time the kernels are a numerical delta and every quadrature
/// built on them is meaningless.
inline constexpr double kMinKernelTime = 1e-8;

template <typename Scalar>
void require_kernel_time(Scalar t) {
    if (!(t >= Scalar(kMinKernelTime)) || !std::isfinite(static_cast<double>(t))) {
        throw DomainError("kernel time must be finite and >= 1e-8, got " + std::to_string(static_cast<double>(t)));
    }
}

/// Time-dependent constants shared by the closed-form kernels: a = e^{-t},
/// d = 1 - e^{-2t} (via expm1) and the prefactor (pi d)^{-1/2}.
template <typename Scalar>
struct KernelTimeFactors {
    Scalar decay;
    Scalar spread;
    Scalar prefactor;

    explicit KernelTimeFactors(Scalar t) {
        require_kernel_time(t);
        decay = std::exp(-t);
        spread = -std::expm1(Scalar(-2) * t);
        prefactor = Scalar(1) / std::sqrt(std::numbers::pi_v<Scalar> * spread);
    }

    Scalar ou(Scalar x, Scalar y) const {
        const Scalar z = decay * x - y;
        return prefactor * std::exp(-z * z / spread);
    }

    /// Mehler kernel of (1/2)(f'' - x^2 f + f).
    Scalar mehler(Scalar x, Scalar y) const {
        const Scalar num = Scalar(4) * x * y * decay - (x * x + y * y) * (Scalar(1) + decay * decay);
        return prefactor * std::exp(num / (Scalar(2) * spread));
    }
};

/// Ornstein-Uhlenbeck transition density of (1/2) f'' - x f' on the line.
template <typename Scalar>
Scalar ou_line_kernel(Scalar t, Scalar x, Scalar y) {
    return KernelTimeFactors<Scalar>(t).ou(x, y);
}

/// Harmonic-oscillator heat kernel (Mehler formula).
template <typename Scalar>
Scalar ho_line_kernel(Scalar t, Scalar x, Scalar y) {
    return KernelTimeFactors<Scalar>(t).mehler(x, y);
}

/// A line kernel k(t, x, y) tabulated on a symmetric grid at fixed times,
/// e.g. from the finite-difference propagator. Bilinear in (x, y); zero
/// outside the table, matching the Dirichlet truncation it came from.
template <typename Scalar>
struct TabulatedKernel {
    std::vector<Scalar> times;
    LineGrid<Scalar> grid;
    std::vector<Matrix<Scalar>> tables;  // tables[j](k, l) = k(times[j], x_k, x_l)

    std::size_t time_index(Scalar t) const {
        for (std::size_t j = 0; j < times.size(); ++j) {
            if (std::abs(times[j] - t) <= Scalar(1e-12) * std::max(Scalar(1), std::abs(t))) {
                return j;
            }
        }
        throw DomainError("tabulated kernel has no table at t = " + std::to_string(static_cast<double>(t)));
    }

    Scalar operator()(Scalar t, Scalar x, Scalar y) const { return at(time_index(t), x, y); }

    Scalar at(std::size_t j, Scalar x, Scalar y) const {
        const Scalar h = grid.spacing();
        const Scalar L = grid.half_width;
        if (std::abs(x) > L || std::abs(y) > L) {
            return Scalar(0);
        }
        const int last = grid.size() - 1;
        const auto locate = [&](Scalar v, int& k, Scalar& frac) {
            const Scalar s = (v + L) / h;
            k = std::clamp(static_cast<int>(std::floor(s)), 0, last - 1);
            frac = s - Scalar(k);
        };
        int kx = 0;
        int ky = 0;
        Scalar fx = 0;
        Scalar fy = 0;
        locate(x, kx, fx);
        locate(y, ky, fy);
        const Matrix<Scalar>& table = tables[j];
        return (Scalar(1) - fx) * ((Scalar(1) - fy) * table(kx, ky) + fy * table(kx, ky + 1)) +
               fx * ((Scalar(1) - fy) * table(kx + 1, ky) + fy * table(kx + 1, ky + 1));
    }
};

enum class KernelKind { ou, harmonic_oscillator, tabulated };

template <typename Scalar>
struct KernelSpec {
    KernelKind kind = KernelKind::ou;
    std::shared_ptr<const TabulatedKernel<Scalar>> table;

    static KernelSpec ou() { return {KernelKind::ou, nullptr}; }
    static KernelSpec harmonic_oscillator() { return {KernelKind::harmonic_oscillator, nullptr}; }
    static KernelSpec tabulated(TabulatedKernel<Scalar> t) {
        return {KernelKind::tabulated, std::make_shared<const TabulatedKernel<Scalar>>(std::move(t))};
    }
};

/// The line kernel of `spec` frozen at one time, for repeated evaluation.
template <typename Scalar>
class LineKernelAt {
public:
    LineKernelAt(const KernelSpec<Scalar>& spec, Scalar t) : kind_(spec.kind), factors_(t) {
        if (kind_ == KernelKind::tabulated) {
            if (!spec.table) {
                throw PreconditionError("tabulated kernel spec without a table");
            }
            table_ = spec.table.get();
            index_ = table_->time_index(t);
        }
    }

    Scalar operator()(Scalar x, Scalar y) const {
        switch (kind_) {
            case KernelKind::ou:
                return factors_.ou(x, y);
            case KernelKind::harmonic_oscillator:
                return factors_.mehler(x, y);
            case KernelKind::tabulated:
                return table_->at(index_, x, y);
        }
        return Scalar(0);
    }

    const KernelTimeFactors<Scalar>& factors() const { return factors_; }

private:
    KernelKind kind_;
    KernelTimeFactors<Scalar> factors_;
    const TabulatedKernel<Scalar>* table_ = nullptr;
    std::size_t index_ = 0;
};

template <typename Scalar>
Scalar line_kernel(const KernelSpec<Scalar>& spec, Scalar t, Scalar x, Scalar y) {
    return LineKernelAt<Scalar>(spec, t)(x, y);
}

/// Vertex scattering: sigma_ii = (2 - m)/m, sigma_ij = 2/m.
template <typename Scalar>
struct ScatteringMatrix {
    Matrix<Scalar> entries;

    int m() const { return static_cast<int>(entries.rows()); }
    Scalar operator()(int i, int j) const { return entries(i, j); }
};

template <typename Scalar>
ScatteringMatrix<Scalar> scattering_matrix(int m) {
    require_edge_count(m);
    const Scalar off = Scalar(2) / Scalar(m);
    Matrix<Scalar> s = Matrix<Scalar>::Constant(m, m, off);
    s.diagonal().setConstant(Scalar(2 - m) / Scalar(m));
    return {std::move(s)};
}

/// Transition kernel on S_m assembled from a line kernel:
///   p(t, x_i, y_j) = delta_ij k(t, |x|, |y|) + sigma_ij k(t, |x|, -|y|).
/// At the vertex both terms merge into (2/m) k(t, |x|, -|y|), independent of
/// the edge labels.
template <typename Scalar>
Scalar star_kernel(const KernelSpec<Scalar>& spec, int m, Scalar t, const StarPoint<Scalar>& x,
                   const StarPoint<Scalar>& y) {
    require_edge_count(m);
    require_point_on(x, m);
    require_point_on(y, m);
    const LineKernelAt<Scalar> k(spec, t);
    const Scalar transmitted = k(x.radius, -y.radius);
    if (x.at_vertex() || y.at_vertex()) {
        return Scalar(2) / Scalar(m) * transmitted;
    }
    if (x.edge == y.edge) {
        return k(x.radius, y.radius) + Scalar(2 - m) / Scalar(m) * transmitted;
    }
    return Scalar(2) / Scalar(m) * transmitted;
}

}  // namespace stargraph
