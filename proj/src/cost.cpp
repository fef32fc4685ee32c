#include "opticbm/cost.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace opticbm {

namespace {

// exp() of an argument that must be non-positive by construction.
double decay(double exponent) {
    if (exponent > 0.0) {
        std::ostringstream os;
        os << "positive decay exponent " << exponent;
        throw std::logic_error(os.str());
    }
    return std::exp(exponent);
}

// (1 - e^{-k L}) / k, finite as k -> 0.
double integrated_decay(double k, double length) {
    if (k * length < 1e-8) return length * (1.0 - 0.5 * k * length);
    return -std::expm1(-k * length) / k;
}

void check_threshold(const ModelParams& params, double t_tilde) {
    if (!(t_tilde >= 0.0 && t_tilde <= params.tau())) {
        std::ostringstream os;
        os << "t_tilde " << t_tilde << " outside [0, tau=" << params.tau() << "]";
        throw DomainError(os.str());
    }
}

}  // namespace

double p1_closed_form(const ModelParams& params, double t_tilde, double t) {
    check_threshold(params, t_tilde);
    if (!(t >= 0.0 && t < params.tau())) {
        std::ostringstream os;
        os << "residual time " << t << " outside [0, tau=" << params.tau() << ")";
        throw DomainError(os.str());
    }
    const double tau = params.tau();
    const double base = params.mu1() + params.mu2();
    const double full = params.lambda() + base;
    const double a = params.mu2() / base;
    const double b = params.mu2() / full;

    if (t >= t_tilde) return b * (1.0 - decay(full * (t - tau)));
    return a + (b - a - b * decay(full * (t_tilde - tau))) * decay(base * (t - t_tilde));
}

CostBreakdown average_cost(const ModelParams& params, const ThresholdPolicy& policy) {
    if (!policy.replace_at_so())
        throw UnsupportedPolicy(
            "closed-form cost needs a policy that replaces at scheduled opportunities; "
            "use policy_cost(), the Bellman verifier or the simulator");
    check_policy(params, policy);
    return average_cost_at(params, policy.effective_threshold(params.tau()));
}

CostBreakdown average_cost_at(const ModelParams& params, double t_tilde) {
    check_threshold(params, t_tilde);
    const double tau = params.tau();
    const double lambda = params.lambda();
    const double base = params.mu1() + params.mu2();
    const double full = lambda + base;
    const double a = params.mu2() / base;
    const double b = params.mu2() / full;

    // p1(t) = a + gap * e^{base (t - t_tilde)} on [0, t_tilde).
    const double tail = decay(full * (t_tilde - tau));
    const double gap = b - a - b * tail;
    const double head = decay(-base * t_tilde);

    const double int_head = t_tilde * a + gap * (1.0 - head) / base;  // over [0, t_tilde)
    const double int_tail = b * (tau - t_tilde - (1.0 - tail) / full);  // over [t_tilde, tau)
    const double p1_at_so = a + gap * head;

    return CostBreakdown::from_parts(params.c_c() * params.mu1() * (int_head + int_tail) / tau,
                                     params.c_p_uso() * lambda * int_tail / tau,
                                     params.c_p_so() * p1_at_so / tau);
}

CostBreakdown so_only_cost(const ModelParams& params) {
    const double base = params.mu1() + params.mu2();
    const double tau = params.tau();
    const double a = params.mu2() / base;
    // Long-run fraction of time in state 1 is a * (1 - prefactor); SO
    // replacements happen with probability a * (1 - e^{-base tau}) per cycle.
    const double prefactor = -std::expm1(-base * tau) / (base * tau);
    const double preventive = params.c_p_so() * params.mu2() * prefactor;
    const double corrective = params.c_c() * params.mu1() * a * (1.0 - prefactor);
    // Same value as prefactor * mu2 * (c_p_so - c_c a) + c_c mu1 a, split by cost.
    return CostBreakdown::from_parts(corrective, 0.0, preventive);
}

CostBreakdown uso_only_cost(const ModelParams& params) {
    const double base = params.mu1() + params.mu2();
    if (!(base * params.c_p_uso() < params.mu1() * params.c_c()))
        return corrective_only_cost(params);
    const double full = params.lambda() + base;
    return CostBreakdown::from_parts(params.c_c() * params.mu1() * params.mu2() / full,
                                     params.c_p_uso() * params.lambda() * params.mu2() / full,
                                     0.0);
}

double corrective_only_rate(double mu1, double mu2, double c_c) noexcept {
    return c_c * mu1 * mu2 / (mu1 + mu2);
}

CostBreakdown corrective_only_cost(const ModelParams& params) {
    return CostBreakdown::from_parts(
        corrective_only_rate(params.mu1(), params.mu2(), params.c_c()), 0.0, 0.0);
}

CostBreakdown policy_cost(const ModelParams& params, const ThresholdPolicy& policy) {
    check_policy(params, policy);
    if (policy.replace_at_so()) return average_cost(params, policy);
    if (!policy.uses_uso()) return corrective_only_cost(params);

    const double tau = params.tau();
    const double base = params.mu1() + params.mu2();
    const double full = params.lambda() + base;

    // Forward time s in [0, tau): USOs are used while s <= tau - t_tilde.
    const double active = tau - policy.effective_threshold(tau);
    const double idle = tau - active;

    // q' = mu2 - k q on each segment, q -> mu2 / k.
    auto propagate = [&](double k, double length, double q0) {
        const double eq = params.mu2() / k;
        return eq + (q0 - eq) * std::exp(-k * length);
    };
    auto integrate = [&](double k, double length, double q0) {
        const double eq = params.mu2() / k;
        return eq * length + (q0 - eq) * integrated_decay(k, length);
    };

    // One-period map q(tau) = slope * q(0) + offset; the stationary start is its fixed point.
    const double offset = propagate(base, idle, propagate(full, active, 0.0));
    const double slope = std::exp(-full * active - base * idle);
    const double q0 = offset / (1.0 - slope);

    const double q_mid = propagate(full, active, q0);
    const double int_active = integrate(full, active, q0);
    const double int_idle = integrate(base, idle, q_mid);

    return CostBreakdown::from_parts(params.c_c() * params.mu1() * (int_active + int_idle) / tau,
                                     params.c_p_uso() * params.lambda() * int_active / tau, 0.0);
}

}  // namespace opticbm
