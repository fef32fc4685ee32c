#pragma once

#include "opticbm/core.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace opticbm {

/// Relative value iteration hit its iteration cap.
class NoConvergence : public Error {
public:
    NoConvergence(std::size_t iterations, double residual);

    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

/// The USO replace region of a converged grid is not a suffix interval.
class NonThresholdStructure : public Error {
public:
    explicit NonThresholdStructure(const std::string& message)
        : Error("NonThresholdStructure", message) {}
};

struct BellmanOptions {
    std::size_t n = 2048;
    /// Stopping tolerance on the span of successive value changes; defaults
    /// to 1e-9 * c_c when absent.
    std::optional<double> tol;
    std::size_t max_iter = 100000;
};

/// Converged relative value function on a uniform residual-time grid
/// t_k = k h, h = tau / (n - 1), anchored at V(2, SO, 0) = 0.
///
/// `f1`, `f2` hold the continuation values F_1(t_k), F_2(t_k); every V
/// entry is derived from them:
///   V(1,SC,t) = c_c + F_2(t),   V(2,SC,t) = F_1(t),
///   V(i,USO,t) = min{F_i(t), c_p_uso + F_2(t)},
///   V(i,SO,0) = min{F_i(tau), c_p_so + F_2(tau)}.
class ValueGrid {
public:
    ValueGrid(ModelParams params, std::vector<double> f1, std::vector<double> f2, double g,
              double tol, std::size_t iterations, double residual);

    const ModelParams& params() const noexcept { return params_; }
    std::size_t n() const noexcept { return f1_.size(); }
    double h() const noexcept { return params_.tau() / static_cast<double>(n() - 1); }
    double t(std::size_t k) const noexcept { return static_cast<double>(k) * h(); }
    double g() const noexcept { return g_; }
    double tol() const noexcept { return tol_; }
    std::size_t iterations() const noexcept { return iterations_; }
    /// Span of the value change in the last sweep.
    double residual() const noexcept { return residual_; }

    const std::vector<double>& f1() const noexcept { return f1_; }
    const std::vector<double>& f2() const noexcept { return f2_; }

    /// V(i, j, t_k); for j = SO the node index is ignored (t = 0).
    double value(ComponentState i, EpochKind j, std::size_t k) const;

    /// F_1(t_k) - F_2(t_k).
    double difference(std::size_t k) const noexcept { return f1_[k] - f2_[k]; }

private:
    ModelParams params_;
    std::vector<double> f1_;
    std::vector<double> f2_;
    double g_;
    double tol_;
    std::size_t iterations_;
    double residual_;
};

/// Solves the average-cost optimality equations by relative value
/// iteration. Each sweep integrates F_1, F_2 forward in residual time with
/// the composite trapezoid rule (exponential weights exact at nodes),
/// resolving the USO minimum implicitly at each node; g is then corrected
/// so that the anchor V(2, SO, 0) stays 0. Throws NoConvergence if
/// `max_iter` sweeps do not bring the span of value changes below `tol`,
/// and DomainError if n < 64.
ValueGrid solve_bellman(const ModelParams& params, const BellmanOptions& options = {});

/// Largest change in any V entry when the right-hand side of the
/// optimality equations is re-evaluated once at the grid's values and g.
double bellman_residual(const ValueGrid& grid);

struct ExtractedPolicy {
    ThresholdPolicy policy;
    /// Smallest grid node where USO replacement begins; absent if none.
    std::optional<double> empirical_threshold;
    bool replace_at_so;
    /// USO action per grid node.
    std::vector<bool> uso_replace;
};

/// Greedy actions of a converged grid. A USO at node t_k replaces iff
/// F_1 - F_2 exceeds c_p_uso (ties within 10 tol count as replace, since a
/// policy replacing at SOs has F_1(0) - F_2(0) = c_p_so exactly); an SO
/// replaces iff F_1(tau) - F_2(tau) > c_p_so. Throws NonThresholdStructure
/// unless the USO replace nodes form a suffix of the grid.
ExtractedPolicy extract_policy(const ValueGrid& grid);

/// F_1 - F_2 on a uniform grid for a fixed threshold policy.
struct FDifference {
    std::vector<double> t;
    std::vector<double> d;
    /// First residual time where D reaches c_p_uso, from the exact solution.
    std::optional<double> uso_crossing;
    /// First residual time where D reaches c_p_so.
    std::optional<double> so_crossing;
    /// D increasing over the whole grid (see increasing_after).
    bool increasing;

    /// D increasing on the grid nodes with t > from. Strict in exact
    /// arithmetic; nodes where D has converged to its limit may compare
    /// equal in double precision, so only a decrease is rejected.
    bool increasing_after(double from) const;
};

/// Closed-form D(t) = F_1(t) - F_2(t) under a fixed policy. On each
/// interval of constant USO action D solves
///   D' = -(mu1 + mu2 + lambda) D + lambda c_p_uso + mu1 c_c   (USO replaces)
///   D' = -(mu1 + mu2) D + mu1 c_c                              (USO idle)
/// with continuity at the threshold; g cancels from the difference. The
/// boundary value D(0) defaults to c_p_so when the policy replaces at SOs,
/// otherwise to the periodic solution D(0) = D(tau).
FDifference f_difference(const ModelParams& params, const ThresholdPolicy& policy,
                         std::size_t n, std::optional<double> d0 = std::nullopt);

}  // namespace opticbm
