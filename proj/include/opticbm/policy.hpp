#pragma once

#include "opticbm/core.hpp"

#include <optional>

namespace opticbm {

/// Which case of the optimal-policy characterization applied.
enum class Regime {
    NeverReplace,   ///< (mu1+mu2) c_p_so > mu1 c_c
    ReplaceAlways,  ///< replace state 1 at every SO and USO
    ReplaceSOOnly,  ///< replace state 1 at SOs, never at USOs
    TimeDependent,  ///< replace at SOs and at USOs with residual time >= t_star
    Indifferent,    ///< (mu1+mu2) c_p_so == mu1 c_c, resolved to do nothing
};

const char* to_string(Regime r) noexcept;

struct OptimalPolicyResult {
    ThresholdPolicy policy;
    Regime regime;
    /// Raw threshold from the log formula, before clamping at 0. Present
    /// whenever the formula was evaluated (case (d)).
    std::optional<double> t_raw;
    /// max(0, t_raw); present whenever the formula was evaluated.
    std::optional<double> t_star;
};

/// Optimal long-run average-cost policy in closed form.
///
/// Regimes are resolved in order using exact products (no epsilon band):
///   a) (mu1+mu2) c_p_so >  mu1 c_c          -> NeverReplace
///   b) (mu1+mu2) c_p_so == mu1 c_c          -> Indifferent (do nothing)
///   c) (mu1+mu2) c_p_uso >= mu1 c_c         -> ReplaceSOOnly
///   d) t* = max(0, ln[((mu1+mu2)c_p_so - mu1 c_c) / ((mu1+mu2)c_p_uso - mu1 c_c)] / (mu1+mu2))
///      t* >= tau -> ReplaceSOOnly, t* == 0 -> ReplaceAlways, else TimeDependent.
OptimalPolicyResult optimal_policy(const ModelParams& params);

}  // namespace opticbm
