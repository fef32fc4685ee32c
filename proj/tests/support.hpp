#pragma once

// Test-only oracles and parameter generators. Nothing here calls into the
// closed-form cost code except where a caller passes it in explicitly.

#include "opticbm/core.hpp"
#include "opticbm/policy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace opticbm::testing {

inline ModelParams table_params(double c_p_so = 4000.0, double tau = 2.0, double lambda = 0.5) {
    return validate_params({.mu1 = 1.0,
                            .mu2 = 0.4,
                            .lambda = lambda,
                            .tau = tau,
                            .c_c = 15000.0,
                            .c_p_so = c_p_so,
                            .c_p_uso = 10000.0});
}

/// Random parameter sets satisfying the model invariants.
class ParamGenerator {
public:
    explicit ParamGenerator(std::uint64_t seed) : rng_(seed) {}

    ModelParams any() {
        RawParams r;
        r.mu1 = uniform(0.2, 3.0);
        r.mu2 = uniform(0.2, 3.0);
        r.lambda = uniform(0.0, 3.0);
        r.tau = uniform(0.2, 5.0);
        r.c_c = uniform(1000.0, 20000.0);
        r.c_p_uso = r.c_c * uniform(0.05, 0.95);
        r.c_p_so = r.c_p_uso * uniform(0.05, 1.0);
        return validate_params(r);
    }

    /// Rejection-samples until the optimal policy falls in `regime`.
    ModelParams in_regime(Regime regime) {
        for (;;) {
            auto p = any();
            if (optimal_policy(p).regime == regime) return p;
        }
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// State-1 probability by integrating the residual-time ODE backward from
/// t = tau (p1 = 0) with classical RK4:
///   p1' = (Lambda(t) + mu1) p1 - mu2 (1 - p1),  Lambda = lambda on [t_tilde, tau), 0 below.
/// The breakpoint t_tilde is hit exactly by splitting the step count.
inline double p1_rk4(const ModelParams& p, double t_tilde, double t, double step = 1e-5) {
    auto rhs = [&](double time, double p1) {
        const double lam = time >= t_tilde ? p.lambda() : 0.0;
        return (lam + p.mu1()) * p1 - p.mu2() * (1.0 - p1);
    };
    auto integrate = [&](double from, double to, double p1) {
        if (to >= from) return p1;
        const auto steps = static_cast<long>(std::ceil((from - to) / step));
        const double h = (to - from) / static_cast<double>(steps);  // negative
        double time = from;
        for (long i = 0; i < steps; ++i) {
            // Evaluate the regime at the midpoint of the step so that a step
            // ending on t_tilde stays in the upper regime.
            const double mid = time + 0.5 * h;
            auto f = [&](double, double y) { return rhs(mid, y); };
            const double k1 = f(time, p1);
            const double k2 = f(time + 0.5 * h, p1 + 0.5 * h * k1);
            const double k3 = f(time + 0.5 * h, p1 + 0.5 * h * k2);
            const double k4 = f(time + h, p1 + h * k3);
            p1 += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            time += h;
        }
        return p1;
    };
    double p1 = 0.0;
    if (t < t_tilde) {
        p1 = integrate(p.tau(), t_tilde, p1);
        return integrate(t_tilde, t, p1);
    }
    return integrate(p.tau(), t, p1);
}

/// Composite trapezoid rule with `panels` panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, long panels) {
    if (b <= a) return 0.0;
    const double h = (b - a) / static_cast<double>(panels);
    double sum = 0.5 * (f(a) + f(b));
    for (long i = 1; i < panels; ++i) sum += f(a + h * static_cast<double>(i));
    return sum * h;
}

/// Cycle-cost decomposition integrated numerically over a supplied p1(t):
///   [c_p_so p1(0) + (c_p_uso lambda + c_c mu1) int_{t~}^{tau} p1 + c_c mu1 int_0^{t~} p1] / tau.
/// `p1` must accept t in [0, tau); the value at tau is its limit 0.
inline double cycle_cost_quadrature(const ModelParams& p, double t_tilde,
                                    const std::function<double(double)>& p1, long panels) {
    const double tau = p.tau();
    auto p1_closed_end = [&](double t) { return t >= tau ? 0.0 : p1(t); };
    const long head_panels = std::max(1L, static_cast<long>(panels * (t_tilde / tau)));
    const long tail_panels = std::max(1L, panels - head_panels);
    // Left limit at t_tilde equals the right value by continuity.
    const double head = trapezoid(p1_closed_end, 0.0, t_tilde, head_panels);
    const double tail = trapezoid(p1_closed_end, t_tilde, tau, tail_panels);
    return (p.c_p_so() * p1(0.0) + (p.c_p_uso() * p.lambda() + p.c_c() * p.mu1()) * tail +
            p.c_c() * p.mu1() * head) /
           tau;
}

/// Cycle cost with p1 taken from RK4 marched backward from tau on the
/// quadrature grid itself, so no closed-form expression is involved.
inline double cycle_cost_ode(const ModelParams& p, double t_tilde, long panels) {
    const double tau = p.tau();
    const long tail_panels = std::max(1L, static_cast<long>(panels * ((tau - t_tilde) / tau)));
    const long head_panels = std::max(1L, panels - tail_panels);
    auto march = [&](double from, double to, long steps, double lam, double p1, double& integral) {
        const double k = lam + p.mu1() + p.mu2();
        auto f = [&](double y) { return k * y - p.mu2(); };
        const double h = (to - from) / static_cast<double>(steps);  // negative
        for (long i = 0; i < steps; ++i) {
            const double k1 = f(p1);
            const double k2 = f(p1 + 0.5 * h * k1);
            const double k3 = f(p1 + 0.5 * h * k2);
            const double k4 = f(p1 + h * k3);
            const double next = p1 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            integral += -0.5 * h * (p1 + next);
            p1 = next;
        }
        return p1;
    };
    double tail = 0.0;
    double head = 0.0;
    double p1 = t_tilde < tau ? march(tau, t_tilde, tail_panels, p.lambda(), 0.0, tail) : 0.0;
    if (t_tilde > 0.0) p1 = march(t_tilde, 0.0, head_panels, 0.0, p1, head);
    return (p.c_p_so() * p1 + (p.c_p_uso() * p.lambda() + p.c_c() * p.mu1()) * tail +
            p.c_c() * p.mu1() * head) /
           tau;
}

inline bool rel_close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace opticbm::testing
