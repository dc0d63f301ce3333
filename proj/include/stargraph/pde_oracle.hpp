#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stargraph/errors.hpp"
#include "stargraph/extension.hpp"
#include "stargraph/kernels.hpp"
#include "stargraph/parallel.hpp"
#include "stargraph/star_graph.hpp"

namespace stargraph {

/// Truncated Cauchy-Dirichlet problem on (-n, n): spatial step h, time step
/// dt, theta-method implicitness in [1/2, 1].
template <typename Scalar>
struct OracleConfig {
    Scalar n = Scalar(8);
    Scalar h = Scalar(1) / Scalar(64);
    Scalar dt = Scalar(1e-3);
    Scalar theta = Scalar(0.5);
    Scalar t_final = Scalar(1);

    int half_intervals() const { return static_cast<int>(std::lround(n / h)); }
    int steps_to(Scalar t) const { return static_cast<int>(std::lround(t / dt)); }

    LineGrid<Scalar> line_grid() const { return LineGrid<Scalar>(n, half_intervals() + 1); }
    GridSpec<Scalar> star_grid() const { return GridSpec<Scalar>(n, half_intervals() + 1); }

    void validate() const {
        if (!(n > Scalar(0)) || !(h > Scalar(0)) || !(h < n)) {
            throw PreconditionError("oracle: need 0 < h < n");
        }
        if (std::abs(n / h - Scalar(half_intervals())) > Scalar(1e-9) * (n / h)) {
            throw PreconditionError("oracle: n/h must be an integer");
        }
        if (!(dt > Scalar(0))) {
            throw PreconditionError("oracle: dt must be positive");
        }
        if (!(theta >= Scalar(0.5) && theta <= Scalar(1))) {
            throw PreconditionError("oracle: theta must lie in [1/2, 1]");
        }
        if (!(t_final > Scalar(0))) {
            throw PreconditionError("oracle: t_final must be positive");
        }
    }
};

template <typename F>
struct Snapshot {
    double time;
    F value;
};

namespace detail {

/// Tridiagonal theta-method stepper for q u'' + b u' + c u on the interior
/// nodes of the line grid, with homogeneous Dirichlet data at both ends.
/// Centred differences throughout; the implicit matrix is factored once.
/// Elimination runs inward from both ends and meets at the centre node, so
/// reflection-symmetric coefficients give bitwise parity of the solution.
template <typename Scalar>
class ThetaStepper {
public:
    ThetaStepper(const LineCoefficients<Scalar>& coeffs, const LineGrid<Scalar>& grid, Scalar dt, Scalar theta)
        : size_(grid.size() - 2), mid_(size_ / 2), lower_(size_), diag_(size_), upper_(size_), ratio_(size_),
          denom_(size_), explicit_weight_((Scalar(1) - theta) * dt), implicit_weight_(theta * dt) {
        const Scalar h = grid.spacing();
        for (int k = 0; k < size_; ++k) {
            const Scalar x = grid.x(k + 1);
            const Scalar q = coeffs.q(x);
            const Scalar b = coeffs.b(x);
            const Scalar c = coeffs.c(x);
            lower_(k) = q / (h * h) - b / (Scalar(2) * h);
            diag_(k) = Scalar(-2) * q / (h * h) + c;
            upper_(k) = q / (h * h) + b / (Scalar(2) * h);
        }
        // twisted factorisation of (I - theta dt L)
        for (int k = 0; k < mid_; ++k) {
            denom_(k) = k == 0 ? sys_diag(k) : sys_diag(k) - sys_lower(k) * ratio_(k - 1);
            ratio_(k) = sys_upper(k) / denom_(k);
        }
        for (int k = size_ - 1; k > mid_; --k) {
            denom_(k) = k == size_ - 1 ? sys_diag(k) : sys_diag(k) - sys_upper(k) * ratio_(k + 1);
            ratio_(k) = sys_lower(k) / denom_(k);
        }
        const Scalar from_left = mid_ > 0 ? sys_lower(mid_) * ratio_(mid_ - 1) : Scalar(0);
        const Scalar from_right = mid_ + 1 < size_ ? sys_upper(mid_) * ratio_(mid_ + 1) : Scalar(0);
        denom_(mid_) = sys_diag(mid_) - (from_left + from_right);
    }

    /// Advances the interior values (length grid.size() - 2) by one step.
    /// Works column-wise on a matrix of independent right-hand sides.
    template <typename Derived>
    void step(Eigen::MatrixBase<Derived>& u) const {
        using Row = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
        Matrix<Scalar> rhs = u;
        if (explicit_weight_ != Scalar(0)) {
            const Row zero = Row::Zero(u.cols());
            for (int k = 0; k < size_; ++k) {
                const Row left = k > 0 ? Row(lower_(k) * u.row(k - 1)) : zero;
                const Row right = k + 1 < size_ ? Row(upper_(k) * u.row(k + 1)) : zero;
                rhs.row(k) += explicit_weight_ * (diag_(k) * u.row(k) + (left + right));
            }
        }
        for (int k = 0; k < mid_; ++k) {
            if (k > 0) rhs.row(k) -= sys_lower(k) * rhs.row(k - 1);
            rhs.row(k) /= denom_(k);
        }
        for (int k = size_ - 1; k > mid_; --k) {
            if (k < size_ - 1) rhs.row(k) -= sys_upper(k) * rhs.row(k + 1);
            rhs.row(k) /= denom_(k);
        }
        {
            const Row zero = Row::Zero(u.cols());
            const Row left = mid_ > 0 ? Row(sys_lower(mid_) * rhs.row(mid_ - 1)) : zero;
            const Row right = mid_ + 1 < size_ ? Row(sys_upper(mid_) * rhs.row(mid_ + 1)) : zero;
            rhs.row(mid_) = (rhs.row(mid_) - (left + right)) / denom_(mid_);
        }
        for (int k = mid_ - 1; k >= 0; --k) rhs.row(k) -= ratio_(k) * rhs.row(k + 1);
        for (int k = mid_ + 1; k < size_; ++k) rhs.row(k) -= ratio_(k) * rhs.row(k - 1);
        u = rhs;
    }

    int size() const { return size_; }

private:
    Scalar sys_lower(int k) const { return -implicit_weight_ * lower_(k); }
    Scalar sys_diag(int k) const { return Scalar(1) - implicit_weight_ * diag_(k); }
    Scalar sys_upper(int k) const { return -implicit_weight_ * upper_(k); }

    int size_;
    int mid_;
    Vector<Scalar> lower_, diag_, upper_, ratio_, denom_;
    Scalar explicit_weight_;
    Scalar implicit_weight_;
};

template <typename Scalar>
std::vector<int> output_steps(const OracleConfig<Scalar>& cfg, std::span<const Scalar> times) {
    std::vector<int> steps;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const Scalar t = times[j];
        if (!(t > Scalar(0)) || t > cfg.t_final * (Scalar(1) + Scalar(1e-12)) || (j > 0 && !(t > times[j - 1]))) {
            throw PreconditionError("oracle: output times must be ascending in (0, t_final]");
        }
        const int s = cfg.steps_to(t);
        if (std::abs(Scalar(s) * cfg.dt - t) > Scalar(1e-9) * std::max(Scalar(1), t)) {
            throw PreconditionError("oracle: output times must be multiples of dt");
        }
        steps.push_back(s);
    }
    return steps;
}

}  // namespace detail

/// Solves du/dt = q u'' + b u' + c u on (-n, n), u(t, +-n) = 0, from f0.
/// Snapshots at `times` (default: t_final). Throws StabilityError as soon as
/// the discrete sup norm exceeds 1.05 e^{c0 t} ||f0||.
template <typename Scalar>
std::vector<Snapshot<LineFunction<Scalar>>> solve_line_dirichlet(const LineCoefficients<Scalar>& coeffs,
                                                                 const LineFunction<Scalar>& f0,
                                                                 const OracleConfig<Scalar>& cfg,
                                                                 std::span<const Scalar> times = {}) {
    cfg.validate();
    const LineGrid<Scalar> grid = cfg.line_grid();
    if (!(f0.grid == grid) || f0.values.size() != grid.size()) {
        throw ShapeError("solve_line_dirichlet: initial data not on the oracle grid");
    }
    if (!f0.values.allFinite()) {
        throw NumericalInputError("solve_line_dirichlet: non-finite initial data");
    }
    const Scalar default_time[] = {cfg.t_final};
    const std::vector<int> out_steps =
        detail::output_steps(cfg, times.empty() ? std::span<const Scalar>(default_time) : times);

    const detail::ThetaStepper<Scalar> stepper(coeffs, grid, cfg.dt, cfg.theta);
    Matrix<Scalar> u = f0.values.segment(1, grid.size() - 2);
    const Scalar initial_sup = f0.values.cwiseAbs().maxCoeff();

    std::vector<Snapshot<LineFunction<Scalar>>> out;
    std::size_t next = 0;
    for (int s = 1; next < out_steps.size(); ++s) {
        stepper.step(u);
        const Scalar t = Scalar(s) * cfg.dt;
        const Scalar bound = Scalar(1.05) * std::exp(coeffs.c_sup_bound * t) * initial_sup;
        const Scalar sup = u.cwiseAbs().maxCoeff();
        if (!std::isfinite(static_cast<double>(sup)) || sup > bound) {
            throw StabilityError("oracle: sup norm " + std::to_string(static_cast<double>(sup)) + " exceeds bound " +
                                 std::to_string(static_cast<double>(bound)) + " at t = " +
                                 std::to_string(static_cast<double>(t)));
        }
        if (s == out_steps[next]) {
            LineFunction<Scalar> snap{grid, Vector<Scalar>::Zero(grid.size())};
            snap.values.segment(1, grid.size() - 2) = u;
            out.push_back({static_cast<double>(t), std::move(snap)});
            ++next;
        }
    }
    return out;
}

template <typename Scalar>
std::vector<Snapshot<LineFunction<Scalar>>> solve_line_dirichlet(const LineCoefficients<Scalar>& coeffs,
                                                                 const LineFunction<Scalar>& f0,
                                                                 const OracleConfig<Scalar>& cfg,
                                                                 const std::vector<Scalar>& times) {
    return solve_line_dirichlet(coeffs, f0, cfg, std::span<const Scalar>(times));
}

/// Star solution by the extension construction: reflect f onto m line
/// problems, solve each on (-n, n), fold back at every output time. The fold
/// checks continuity to rounding and the Kirchhoff sum to O(h).
template <typename Scalar>
std::vector<Snapshot<StarFunction<Scalar>>> solve_star(const CoefficientTriple<Scalar>& coeffs,
                                                       const StarFunction<Scalar>& f, const OracleConfig<Scalar>& cfg,
                                                       std::span<const Scalar> times = {}) {
    cfg.validate();
    if (!(f.grid() == cfg.star_grid())) {
        throw ShapeError("solve_star: initial data not sampled on the truncated-star grid");
    }
    const LineCoefficients<Scalar> line = extend_coefficients(coeffs);
    const int m = f.m();
    std::vector<std::vector<Snapshot<LineFunction<Scalar>>>> per_edge(m);
    parallel_for(m, [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            per_edge[i] = solve_line_dirichlet(line, reflect_extend(f, i), cfg, times);
        }
    });
    std::vector<Snapshot<StarFunction<Scalar>>> out;
    const std::size_t count = per_edge.front().size();
    for (std::size_t s = 0; s < count; ++s) {
        std::vector<LineFunction<Scalar>> lines;
        Scalar sup = Scalar(1);
        for (int i = 0; i < m; ++i) {
            lines.push_back(per_edge[i][s].value);
            sup = std::max(sup, lines.back().values.cwiseAbs().maxCoeff());
        }
        const FoldTolerance tol{1e-9 * static_cast<double>(sup), static_cast<double>(cfg.h * sup)};
        out.push_back({per_edge.front()[s].time, fold_to_star(lines, tol, static_cast<double>(cfg.n))});
    }
    return out;
}

template <typename Scalar>
std::vector<Snapshot<StarFunction<Scalar>>> solve_star(const CoefficientTriple<Scalar>& coeffs,
                                                       const EdgeFunction<Scalar>& f, int m,
                                                       const OracleConfig<Scalar>& cfg,
                                                       std::span<const Scalar> times = {}) {
    cfg.validate();
    const StarFunction<Scalar> sampled =
        StarFunction<Scalar>::sample(StarGraph(m, static_cast<double>(cfg.n)), cfg.star_grid(), f);
    return solve_star(coeffs, sampled, cfg, times);
}

template <typename Scalar>
struct TruncationRow {
    Scalar n;
    Scalar t;
    Scalar sup_defect;
};

/// Sup distance between the t_final solutions for successive truncations,
/// measured on [0, n_list.front()]. One row per successive pair, tagged with
/// the larger n.
template <typename Scalar>
std::vector<TruncationRow<Scalar>> truncation_study(const CoefficientTriple<Scalar>& coeffs,
                                                    const EdgeFunction<Scalar>& f, int m, OracleConfig<Scalar> cfg,
                                                    std::span<const Scalar> n_list) {
    if (n_list.empty()) {
        throw PreconditionError("truncation_study: empty n list");
    }
    for (std::size_t j = 1; j < n_list.size(); ++j) {
        if (n_list[j] < n_list[j - 1]) {
            throw PreconditionError("truncation_study: n list must be ascending");
        }
    }
    const int window = static_cast<int>(std::lround(n_list.front() / cfg.h));
    std::vector<Matrix<Scalar>> finals;
    for (const Scalar n : n_list) {
        cfg.n = n;
        auto snaps = solve_star(coeffs, f, m, cfg);
        finals.push_back(snaps.back().value.values().topRows(window + 1));
    }
    std::vector<TruncationRow<Scalar>> rows;
    for (std::size_t j = 1; j < finals.size(); ++j) {
        rows.push_back({n_list[j], cfg.t_final, (finals[j] - finals[j - 1]).cwiseAbs().maxCoeff()});
    }
    return rows;
}

template <typename Scalar>
std::vector<TruncationRow<Scalar>> truncation_study(const CoefficientTriple<Scalar>& coeffs,
                                                    const EdgeFunction<Scalar>& f, int m,
                                                    const OracleConfig<Scalar>& cfg,
                                                    const std::vector<Scalar>& n_list) {
    return truncation_study(coeffs, f, m, cfg, std::span<const Scalar>(n_list));
}

/// Line kernel of the discrete propagator, k(t, x_k, y_l) = U_t(k, l) / h,
/// tabulated at `times` by stepping every unit impulse at once.
template <typename Scalar>
TabulatedKernel<Scalar> tabulate_line_kernel(const LineCoefficients<Scalar>& coeffs, const OracleConfig<Scalar>& cfg,
                                             const std::vector<Scalar>& times) {
    cfg.validate();
    const std::vector<int> out_steps = detail::output_steps(cfg, std::span<const Scalar>(times));
    const LineGrid<Scalar> grid = cfg.line_grid();
    const detail::ThetaStepper<Scalar> stepper(coeffs, grid, cfg.dt, cfg.theta);
    const int interior = stepper.size();
    Matrix<Scalar> u = Matrix<Scalar>::Identity(interior, interior);
    TabulatedKernel<Scalar> table{times, grid, {}};
    std::size_t next = 0;
    for (int s = 1; next < out_steps.size(); ++s) {
        stepper.step(u);
        if (s == out_steps[next]) {
            Matrix<Scalar> k = Matrix<Scalar>::Zero(grid.size(), grid.size());
            k.block(1, 1, interior, interior) = u / grid.spacing();
            table.tables.push_back(std::move(k));
            ++next;
        }
    }
    return table;
}

}  // namespace stargraph
