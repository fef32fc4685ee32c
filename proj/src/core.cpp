#include "opticbm/core.hpp"

#include <cmath>
#include <sstream>

namespace opticbm {

namespace {

void require_positive(double value, const char* field, const char* code) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream os;
        os << field << " must be positive and finite, got " << value;
        throw ValidationError(code, field, os.str());
    }
}

}  // namespace

ModelParams validate_params(const RawParams& raw) {
    require_positive(raw.mu1, "mu1", "NonPositiveRate");
    require_positive(raw.mu2, "mu2", "NonPositiveRate");
    if (!(raw.lambda >= 0.0) || !std::isfinite(raw.lambda)) {
        std::ostringstream os;
        os << "lambda must be non-negative and finite, got " << raw.lambda;
        throw ValidationError("NonPositiveRate", "lambda", os.str());
    }
    require_positive(raw.tau, "tau", "NonPositivePeriod");

    auto ordering = [](const char* field, const std::string& what) {
        throw ValidationError("CostOrderingViolated", field,
                              "cost ordering 0 < c_p_so <= c_p_uso < c_c violated: " + what);
    };
    if (!std::isfinite(raw.c_c) || !std::isfinite(raw.c_p_so) || !std::isfinite(raw.c_p_uso))
        ordering("c_c", "costs must be finite");
    if (!(raw.c_p_so > 0.0)) ordering("c_p_so", "c_p_so must be positive");
    if (!(raw.c_p_so <= raw.c_p_uso)) ordering("c_p_so", "c_p_so exceeds c_p_uso");
    if (!(raw.c_p_uso < raw.c_c)) ordering("c_p_uso", "c_p_uso must be below c_c");

    return ModelParams(raw);
}

const char* to_string(ComponentState s) noexcept {
    switch (s) {
        case ComponentState::Satisfactory: return "satisfactory";
        case ComponentState::Perfect: return "perfect";
    }
    return "?";
}

const char* to_string(EpochKind k) noexcept {
    switch (k) {
        case EpochKind::SC: return "SC";
        case EpochKind::SO: return "SO";
        case EpochKind::USO: return "USO";
    }
    return "?";
}

void check_policy(const ModelParams& params, const ThresholdPolicy& policy) {
    if (const auto& t = policy.uso_threshold()) {
        if (!(*t >= 0.0 && *t <= params.tau())) {
            std::ostringstream os;
            os << "uso_threshold " << *t << " outside [0, tau=" << params.tau() << "]";
            throw DomainError(os.str());
        }
    }
}

}  // namespace opticbm
