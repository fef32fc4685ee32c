#pragma once

#include "opticbm/core.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace opticbm {

/// A probe residual time outside [0, tau).
class ProbeOutOfRange : public Error {
public:
    explicit ProbeOutOfRange(const std::string& message) : Error("ProbeOutOfRange", message) {}
};

struct SimConfig {
    std::uint64_t cycles = 100000;
    std::uint64_t seed = 1;
    /// Leading cycles excluded from the statistics.
    std::uint64_t warmup_cycles = 0;
    /// Worker threads; 0 uses the hardware concurrency.
    unsigned threads = 0;
    /// Keep per-cycle costs in the report.
    bool keep_series = false;
};

/// Throws ValidationError unless cycles >= 1 and warmup_cycles < cycles.
void validate_config(const SimConfig& cfg);

struct EventCounts {
    std::uint64_t failures = 0;
    std::uint64_t uso_replacements = 0;
    std::uint64_t so_replacements = 0;

    bool operator==(const EventCounts&) const = default;
};

struct SimReport {
    double mean_cost_rate = 0.0;
    /// 95% confidence half-width of mean_cost_rate.
    double ci_halfwidth = 0.0;
    /// Cycles entering the statistics (cycles - warmup_cycles).
    std::uint64_t counted_cycles = 0;
    /// c_c failures + c_p_uso uso_replacements + c_p_so so_replacements.
    double total_cost = 0.0;
    EventCounts events;
    /// Per-cycle costs of the counted cycles, when requested.
    std::vector<double> per_cycle_costs;

    bool operator==(const SimReport&) const = default;
};

/// Discrete-event simulation of SO-to-SO cycles under a threshold policy.
///
/// Within a cycle the component degrades 2 -> 1 at rate mu2 and fails at
/// rate mu1 (cost c_c, instant renewal); USOs arrive at rate lambda. A
/// satisfactory component is replaced at a USO when the residual time to
/// the SO is at least the threshold, and at the SO when the policy says so.
/// Simultaneous events resolve state change, then USO, then SO.
///
/// Replace-at-SO policies regenerate at every SO: cycles run in parallel
/// and the CI uses iid per-cycle costs. Otherwise cycles run in order with
/// the state carried over, and the CI uses 100 batch means.
SimReport simulate(const ModelParams& params, const ThresholdPolicy& policy,
                   const SimConfig& cfg);

struct ProbeEstimate {
    double t;
    double p1;
    double std_error;
};

/// Fraction of cycles in which the component is satisfactory when the
/// residual time to the next SO equals each probe time. Requires a
/// replace-at-SO policy (UnsupportedPolicy otherwise); throws
/// ProbeOutOfRange for probes outside [0, tau).
std::vector<ProbeEstimate> estimate_p1(const ModelParams& params, const ThresholdPolicy& policy,
                                       const SimConfig& cfg, std::span<const double> probe_times);

/// Lag-1 sample autocorrelation of a series (0 for fewer than 3 points).
double lag1_autocorrelation(std::span<const double> series);

}  // namespace opticbm
