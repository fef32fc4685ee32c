#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace opticbm {

/// Base for every error raised by the library. `code()` is a stable
/// machine-readable name (e.g. "CostOrderingViolated").
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Parameter validation failure. `field()` names the offending field.
class ValidationError : public Error {
public:
    ValidationError(std::string code, std::string field, const std::string& message)
        : Error(std::move(code), message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Argument outside the domain of a function (e.g. residual time not in [0, tau)).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& message) : Error("DomainError", message) {}
};

/// Unvalidated model parameters, as read from a scenario or built by hand.
struct RawParams {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double lambda = 0.0;
    double tau = 0.0;
    double c_c = 0.0;
    double c_p_so = 0.0;
    double c_p_uso = 0.0;

    bool operator==(const RawParams&) const = default;
};

/// Validated model parameters.
///
/// Rates: mu2 (perfect -> satisfactory), mu1 (satisfactory -> failure),
/// lambda (Poisson rate of unscheduled opportunities). tau is the period of
/// the scheduled opportunities. Costs satisfy 0 < c_p_so <= c_p_uso < c_c.
/// Instances can only be obtained through validate_params().
class ModelParams {
public:
    double mu1() const noexcept { return raw_.mu1; }
    double mu2() const noexcept { return raw_.mu2; }
    double lambda() const noexcept { return raw_.lambda; }
    double tau() const noexcept { return raw_.tau; }
    double c_c() const noexcept { return raw_.c_c; }
    double c_p_so() const noexcept { return raw_.c_p_so; }
    double c_p_uso() const noexcept { return raw_.c_p_uso; }

    const RawParams& raw() const noexcept { return raw_; }

    bool operator==(const ModelParams&) const = default;

private:
    explicit ModelParams(const RawParams& raw) : raw_(raw) {}
    friend ModelParams validate_params(const RawParams& raw);

    RawParams raw_;
};

/// Checks rates, period and cost ordering.
/// Throws ValidationError with code NonPositiveRate, NonPositivePeriod or
/// CostOrderingViolated; `field()` names the first offending field.
ModelParams validate_params(const RawParams& raw);

/// Condition of the component between events. Failure is instantaneous and
/// never persisted.
enum class ComponentState : int { Satisfactory = 1, Perfect = 2 };

/// Kind of epoch in the decision process: state change, scheduled
/// opportunity, unscheduled opportunity.
enum class EpochKind { SC, SO, USO };

const char* to_string(ComponentState s) noexcept;
const char* to_string(EpochKind k) noexcept;

/// Control-limit replacement policy. A perfect component is never replaced.
/// A satisfactory component is replaced at an SO iff `replace_at_so`, and at
/// a USO iff the residual time until the next SO is >= the USO threshold.
/// An absent threshold means USOs are never used.
class ThresholdPolicy {
public:
    ThresholdPolicy(bool replace_at_so, std::optional<double> uso_threshold)
        : replace_at_so_(replace_at_so), uso_threshold_(uso_threshold) {}

    static ThresholdPolicy do_nothing() { return {false, std::nullopt}; }
    static ThresholdPolicy so_only() { return {true, std::nullopt}; }
    static ThresholdPolicy always() { return {true, 0.0}; }

    bool replace_at_so() const noexcept { return replace_at_so_; }
    const std::optional<double>& uso_threshold() const noexcept { return uso_threshold_; }
    bool uses_uso() const noexcept { return uso_threshold_.has_value(); }

    /// True when a satisfactory component is replaced at a USO arriving with
    /// `residual` time left until the next SO.
    bool replaces_at_uso(double residual) const noexcept {
        return uso_threshold_ && residual >= *uso_threshold_;
    }

    /// Effective USO threshold inside [0, tau]: tau when USOs are never used.
    double effective_threshold(double tau) const noexcept {
        return uso_threshold_ ? *uso_threshold_ : tau;
    }

    bool operator==(const ThresholdPolicy&) const = default;

private:
    bool replace_at_so_;
    std::optional<double> uso_threshold_;
};

/// Throws DomainError unless the threshold is absent or lies in [0, tau].
void check_policy(const ModelParams& params, const ThresholdPolicy& policy);

/// Long-run average cost per unit time, split by the kind of replacement
/// that incurs it.
struct CostBreakdown {
    double total = 0.0;
    double corrective = 0.0;
    double preventive_uso = 0.0;
    double preventive_so = 0.0;

    static CostBreakdown from_parts(double corrective, double preventive_uso,
                                    double preventive_so) {
        return {corrective + preventive_uso + preventive_so, corrective, preventive_uso,
                preventive_so};
    }

    bool operator==(const CostBreakdown&) const = default;
};

}  // namespace opticbm
