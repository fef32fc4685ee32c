#include "opticbm/policy.hpp"

#include <algorithm>
#include <cmath>

namespace opticbm {

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::NeverReplace: return "NeverReplace";
        case Regime::ReplaceAlways: return "ReplaceAlways";
        case Regime::ReplaceSOOnly: return "ReplaceSOOnly";
        case Regime::TimeDependent: return "TimeDependent";
        case Regime::Indifferent: return "Indifferent";
    }
    return "?";
}

OptimalPolicyResult optimal_policy(const ModelParams& params) {
    const double rate = params.mu1() + params.mu2();
    const double failure_cost = params.mu1() * params.c_c();
    const double so_margin = rate * params.c_p_so() - failure_cost;
    const double uso_margin = rate * params.c_p_uso() - failure_cost;

    if (so_margin > 0.0) return {ThresholdPolicy::do_nothing(), Regime::NeverReplace, {}, {}};
    if (so_margin == 0.0) return {ThresholdPolicy::do_nothing(), Regime::Indifferent, {}, {}};
    if (uso_margin >= 0.0) return {ThresholdPolicy::so_only(), Regime::ReplaceSOOnly, {}, {}};

    // Both margins are negative here, so the ratio is >= 1 when c_p_so <= c_p_uso.
    const double t_raw = std::log(so_margin / uso_margin) / rate;
    const double t_star = std::max(0.0, t_raw);

    if (t_star >= params.tau())
        return {ThresholdPolicy::so_only(), Regime::ReplaceSOOnly, t_raw, t_star};
    if (t_star == 0.0)
        return {ThresholdPolicy::always(), Regime::ReplaceAlways, t_raw, t_star};
    return {ThresholdPolicy(true, t_star), Regime::TimeDependent, t_raw, t_star};
}

}  // namespace opticbm
