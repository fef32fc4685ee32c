#pragma once

#include "opticbm/core.hpp"

namespace opticbm {

/// Raised by average_cost() for policies outside the replace-at-SO family.
class UnsupportedPolicy : public Error {
public:
    explicit UnsupportedPolicy(const std::string& message)
        : Error("UnsupportedPolicy", message) {}
};

/// Probability that the component is satisfactory when the residual time
/// until the next SO is `t`, under a policy that replaces at every SO and at
/// USOs with residual time >= `t_tilde`. Throws DomainError unless
/// 0 <= t < tau and 0 <= t_tilde <= tau.
double p1_closed_form(const ModelParams& params, double t_tilde, double t);

/// Closed-form long-run average cost of a replace-at-SO threshold policy.
/// An absent USO threshold is the t_tilde = tau limit. Throws
/// UnsupportedPolicy if the policy does not replace at SOs and DomainError
/// if the threshold lies outside [0, tau].
CostBreakdown average_cost(const ModelParams& params, const ThresholdPolicy& policy);

/// average_cost() for the policy (replace at SO, USO threshold t_tilde).
CostBreakdown average_cost_at(const ModelParams& params, double t_tilde);

/// Scheduled opportunities only (t_tilde -> tau, equivalently lambda -> 0).
CostBreakdown so_only_cost(const ModelParams& params);

/// Unscheduled opportunities only (tau -> infinity) under the optimal
/// USO-only policy: replace at USOs if (mu1+mu2) c_p_uso < mu1 c_c,
/// otherwise corrective replacements only.
CostBreakdown uso_only_cost(const ModelParams& params);

/// Corrective replacements only: c_c mu1 mu2 / (mu1 + mu2).
CostBreakdown corrective_only_cost(const ModelParams& params);

/// The corrective-only rate on bare numbers, for callers without a validated
/// parameter set.
double corrective_only_rate(double mu1, double mu2, double c_c) noexcept;

/// Long-run average cost of any ThresholdPolicy in closed form.
///
/// Replace-at-SO policies go through average_cost(). Other policies are
/// evaluated from the periodic stationary solution of the state-1
/// probability in forward time: without SO replacement the state carried
/// over an SO is the fixed point of the one-period map.
CostBreakdown policy_cost(const ModelParams& params, const ThresholdPolicy& policy);

}  // namespace opticbm
