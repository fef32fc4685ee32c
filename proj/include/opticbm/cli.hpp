#pragma once

#include "opticbm/core.hpp"
#include "opticbm/policy.hpp"
#include "opticbm/sim.hpp"

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace opticbm {

/// Malformed scenario input. `field()` is empty for syntax errors; `line()`
/// is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(std::string field, std::size_t line, const std::string& message)
        : Error("ParseError", message), field_(std::move(field)), line_(line) {}

    const std::string& field() const noexcept { return field_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string field_;
    std::size_t line_;
};

/// Policy requested by a scenario.
struct PolicySpec {
    enum class Kind { Optimal, Never, Explicit };
    Kind kind = Kind::Optimal;
    /// Set when kind == Explicit.
    std::optional<ThresholdPolicy> policy;
};

struct Scenario {
    ModelParams params;
    PolicySpec policy;
    SimConfig sim;

    /// The single (params, policy) pair this scenario stands for.
    ThresholdPolicy resolved_policy() const;
};

/// Parses and validates a scenario document:
///   { "mu1", "mu2", "lambda", "tau", "c_c", "c_p_so", "c_p_uso": number,
///     "policy"?: "optimal" | "never" |
///                { "replace_at_so": bool, "uso_threshold": number | "never" },
///     "sim"?: { "cycles", "seed", "warmup_cycles": integer } }
/// Throws ParseError for syntax and schema problems, ValidationError for
/// parameter ranges.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

struct OptimizeReport {
    Regime regime;
    std::optional<double> t_star;
    ThresholdPolicy policy;
    CostBreakdown cost;

    bool operator==(const OptimizeReport&) const = default;
};

struct EvaluateReport {
    ThresholdPolicy policy;
    CostBreakdown cost;

    bool operator==(const EvaluateReport&) const = default;
};

struct SimulateReport {
    ThresholdPolicy policy;
    std::uint64_t seed;
    SimReport sim;
    /// Closed-form cost of the simulated policy.
    double closed_form;

    bool operator==(const SimulateReport&) const = default;
};

struct TableEntry {
    double c_p_so;
    double tau;
    double lambda;
    double a_opt;
    double a_so;
    double a_alw;
    /// a_opt coincides with a_so because t* >= tau.
    bool opt_is_so;

    bool operator==(const TableEntry&) const = default;
};

struct TableReport {
    /// t* per c_p_so block, in block order.
    std::vector<std::pair<double, double>> t_star;
    std::vector<TableEntry> entries;
    /// Set when the published values were compared.
    std::optional<double> max_deviation;

    bool operator==(const TableReport&) const = default;
};

/// Published long-run average costs, keyed like TableEntry (a_opt, a_so, a_alw).
const std::vector<TableEntry>& published_table();

/// Optimal policy with its closed-form cost.
OptimizeReport run_optimize(const Scenario& scenario);
/// Cost of the scenario policy, or of (replace at SO, threshold) when given.
EvaluateReport run_evaluate(const Scenario& scenario, std::optional<double> threshold);
SimulateReport run_simulate(const Scenario& scenario);
/// Rows (t, average_cost(t), D(t)) over an n-point uniform grid of [0, tau];
/// D is taken under the scenario policy. Throws ValidationError if n < 2.
std::string run_sweep(const Scenario& scenario, std::size_t n);
TableReport run_table(bool check);

void to_json(nlohmann::json& j, const CostBreakdown& c);
void from_json(const nlohmann::json& j, CostBreakdown& c);
void to_json(nlohmann::json& j, const ThresholdPolicy& p);
ThresholdPolicy policy_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const SimReport& r);
void from_json(const nlohmann::json& j, SimReport& r);
void to_json(nlohmann::json& j, const OptimizeReport& r);
OptimizeReport optimize_report_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const EvaluateReport& r);
EvaluateReport evaluate_report_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const SimulateReport& r);
SimulateReport simulate_report_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const TableReport& r);
void from_json(const nlohmann::json& j, TableReport& r);

/// Text rendering of a table report with 2-decimal costs.
std::string format_table(const TableReport& report);
std::string table_csv(const TableReport& report);

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInvalidInput = 2, kNumericalFailure = 3 };

/// Entry point of the `opticbm` tool. `env_threads` caps simulator workers
/// (OPTICBM_THREADS).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            std::optional<unsigned> env_threads = std::nullopt);

}  // namespace opticbm
