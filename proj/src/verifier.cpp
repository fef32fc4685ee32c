#include "opticbm/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace opticbm {

NoConvergence::NoConvergence(std::size_t iterations, double residual)
    : Error("NoConvergence", [&] {
          std::ostringstream os;
          os << "relative value iteration did not converge after " << iterations
             << " sweeps (residual " << residual << ")";
          return os.str();
      }()),
      iterations_(iterations),
      residual_(residual) {}

ValueGrid::ValueGrid(ModelParams params, std::vector<double> f1, std::vector<double> f2, double g,
                     double tol, std::size_t iterations, double residual)
    : params_(params),
      f1_(std::move(f1)),
      f2_(std::move(f2)),
      g_(g),
      tol_(tol),
      iterations_(iterations),
      residual_(residual) {}

double ValueGrid::value(ComponentState i, EpochKind j, std::size_t k) const {
    const bool one = i == ComponentState::Satisfactory;
    switch (j) {
        case EpochKind::SC:
            return one ? params_.c_c() + f2_.at(k) : f1_.at(k);
        case EpochKind::USO:
            return std::min(one ? f1_.at(k) : f2_.at(k), params_.c_p_uso() + f2_.at(k));
        case EpochKind::SO: {
            const double keep = one ? f1_.back() : f2_.back();
            return std::min(keep, params_.c_p_so() + f2_.back());
        }
    }
    return 0.0;
}

namespace {

// One forward pass over the grid. F1(0) = x, F2(0) = 0 (the anchor); g1, g2
// carry dF/dg along the active branches so g can be corrected exactly.
struct Sweep {
    std::vector<double> f1, f2, g1, g2;
};

class SweepEngine {
public:
    SweepEngine(const ModelParams& p, std::size_t n)
        : p_(p), n_(n), h_(p.tau() / static_cast<double>(n - 1)) {
        const double lam = p.lambda();
        e1_ = std::exp(-(p.mu1() + lam) * h_);
        e2_ = std::exp(-(p.mu2() + lam) * h_);
        const double hh = 0.5 * h_;
        // Implicit trapezoid matrices for the two USO branches of state 1.
        keep_ = {1.0 - hh * lam, -hh * p.mu1(), -hh * p.mu2(), 1.0 - hh * lam};
        repl_ = {1.0, -hh * (p.mu1() + lam), -hh * p.mu2(), 1.0 - hh * lam};
    }

    void run(double x, double g, Sweep& s) const {
        s.f1.resize(n_);
        s.f2.resize(n_);
        s.g1.resize(n_);
        s.g2.resize(n_);
        s.f1[0] = x;
        s.f2[0] = 0.0;
        s.g1[0] = 0.0;
        s.g2[0] = 0.0;

        const double lam = p_.lambda();
        const double cu = p_.c_p_uso();
        const double hh = 0.5 * h_;
        bool replace = s.f1[0] - s.f2[0] > cu;

        for (std::size_t k = 0; k + 1 < n_; ++k) {
            const double F1 = s.f1[k], F2 = s.f2[k], G1 = s.g1[k], G2 = s.g2[k];
            const double v1 = replace ? cu + F2 : F1;
            const double w1 = replace ? G2 : G1;
            const double rate1 = p_.mu1() * (p_.c_c() + F2) + lam * v1 - g;
            const double rate2 = p_.mu2() * F1 + lam * F2 - g;
            const double drate1 = p_.mu1() * G2 + lam * w1 - 1.0;
            const double drate2 = p_.mu2() * G1 + lam * G2 - 1.0;

            const double r1 = e1_ * (F1 + hh * rate1) - hh * g;
            const double r2 = e2_ * (F2 + hh * rate2) - hh * g;
            const double dr1 = e1_ * (G1 + hh * drate1) - hh;
            const double dr2 = e2_ * (G2 + hh * drate2) - hh;

            double a1, a2;
            solve(keep_, r1 + hh * p_.mu1() * p_.c_c(), r2, a1, a2);
            bool next_replace = false;
            if (a1 - a2 > cu) {
                double b1, b2;
                solve(repl_, r1 + hh * (p_.mu1() * p_.c_c() + lam * cu), r2, b1, b2);
                // The two branches agree at D = c_p_uso, so one of them is
                // consistent; prefer the one with the smaller violation.
                if (b1 - b2 >= cu || (b1 - b2 - cu) > -(a1 - a2 - cu)) {
                    a1 = b1;
                    a2 = b2;
                    next_replace = true;
                }
            }
            const auto& m = next_replace ? repl_ : keep_;
            double d1, d2;
            solve(m, dr1, dr2, d1, d2);

            s.f1[k + 1] = a1;
            s.f2[k + 1] = a2;
            s.g1[k + 1] = d1;
            s.g2[k + 1] = d2;
            replace = next_replace;
        }
    }

    double h() const noexcept { return h_; }

private:
    struct Mat {
        double a, b, c, d;
    };

    static void solve(const Mat& m, double r1, double r2, double& x1, double& x2) {
        const double det = m.a * m.d - m.b * m.c;
        x1 = (r1 * m.d - m.b * r2) / det;
        x2 = (m.a * r2 - m.c * r1) / det;
    }

    const ModelParams& p_;
    std::size_t n_;
    double h_;
    double e1_, e2_;
    Mat keep_, repl_;
};

double span_of_change(const std::vector<double>& a1, const std::vector<double>& a2,
                      const std::vector<double>& b1, const std::vector<double>& b2) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k < a1.size(); ++k) {
        for (double d : {b1[k] - a1[k], b2[k] - a2[k]}) {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
    return hi - lo;
}

}  // namespace

ValueGrid solve_bellman(const ModelParams& params, const BellmanOptions& options) {
    if (options.n < 64) throw DomainError("Bellman grid needs n >= 64");
    const double tol = options.tol.value_or(1e-9 * params.c_c());
    const std::size_t n = options.n;
    SweepEngine engine(params, n);

    // Start from the do-nothing value difference and the corrective-only rate.
    double x = params.mu1() * params.c_c() / (params.mu1() + params.mu2());
    double g = params.c_c() * params.mu1() * params.mu2() / (params.mu1() + params.mu2());

    Sweep cur, prev;
    bool have_prev = false;
    double residual = 0.0;
    for (std::size_t it = 1; it <= options.max_iter; ++it) {
        engine.run(x, g, cur);
        // Correct g so that V(2, SO, 0) = F_2(tau) = 0, then shift every F
        // along its g-sensitivity (exact while the branches do not change).
        const double delta = -cur.f2.back() / cur.g2.back();
        g += delta;
        for (std::size_t k = 0; k < n; ++k) {
            cur.f1[k] += cur.g1[k] * delta;
            cur.f2[k] += cur.g2[k] * delta;
        }

        residual = have_prev ? span_of_change(prev.f1, prev.f2, cur.f1, cur.f2)
                             : std::numeric_limits<double>::infinity();
        // V(1, SO, 0) relative to the anchor.
        x = std::min(cur.f1.back(), params.c_p_so() + cur.f2.back()) - cur.f2.back();

        if (residual < tol)
            return ValueGrid(params, std::move(cur.f1), std::move(cur.f2), g, tol, it, residual);
        std::swap(cur, prev);
        have_prev = true;
    }
    throw NoConvergence(options.max_iter, residual);
}

double bellman_residual(const ValueGrid& grid) {
    const auto& p = grid.params();
    SweepEngine engine(p, grid.n());
    Sweep s;
    const double x = grid.value(ComponentState::Satisfactory, EpochKind::SO, 0) -
                     grid.value(ComponentState::Perfect, EpochKind::SO, 0);
    engine.run(x, grid.g(), s);
    // No re-anchoring: a drift of V(2, SO, 0) away from 0 counts as residual.
    const double anchor = 0.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.n(); ++k) {
        const double f1 = s.f1[k] - anchor, f2 = s.f2[k] - anchor;
        const double sc1 = p.c_c() + f2, sc2 = f1;
        const double u1 = std::min(f1, p.c_p_uso() + f2), u2 = std::min(f2, p.c_p_uso() + f2);
        using CS = ComponentState;
        worst = std::max({worst, std::abs(sc1 - grid.value(CS::Satisfactory, EpochKind::SC, k)),
                          std::abs(sc2 - grid.value(CS::Perfect, EpochKind::SC, k)),
                          std::abs(u1 - grid.value(CS::Satisfactory, EpochKind::USO, k)),
                          std::abs(u2 - grid.value(CS::Perfect, EpochKind::USO, k))});
    }
    const double so1 = std::min(s.f1.back(), p.c_p_so() + s.f2.back()) - anchor;
    const double so2 = std::min(s.f2.back(), p.c_p_so() + s.f2.back()) - anchor;
    worst = std::max({worst,
                      std::abs(so1 - grid.value(ComponentState::Satisfactory, EpochKind::SO, 0)),
                      std::abs(so2 - grid.value(ComponentState::Perfect, EpochKind::SO, 0))});
    return worst;
}

ExtractedPolicy extract_policy(const ValueGrid& grid) {
    const auto& p = grid.params();
    const std::size_t n = grid.n();
    const double band = 10.0 * grid.tol();

    ExtractedPolicy out{ThresholdPolicy::do_nothing(), std::nullopt, false,
                        std::vector<bool>(n, false)};
    std::optional<std::size_t> first;
    for (std::size_t k = 0; k < n; ++k) {
        out.uso_replace[k] = grid.difference(k) > p.c_p_uso() - band;
        if (out.uso_replace[k] && !first) first = k;
    }
    if (first) {
        for (std::size_t k = *first; k < n; ++k) {
            if (!out.uso_replace[k]) {
                std::ostringstream os;
                os << "USO replace set is not a suffix interval: replace at t=" << grid.t(*first)
                   << " but keep at t=" << grid.t(k);
                throw NonThresholdStructure(os.str());
            }
        }
        out.empirical_threshold = grid.t(*first);
    }
    out.replace_at_so = grid.difference(n - 1) > p.c_p_so();
    out.policy = ThresholdPolicy(out.replace_at_so, out.empirical_threshold);
    return out;
}

bool FDifference::increasing_after(double from) const {
    std::optional<double> last;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (!(t[k] > from)) continue;
        // Once D has converged to its limit neighbouring nodes can round to
        // the same double; only a drop counts against monotonicity.
        if (last && d[k] < *last) return false;
        last = d[k];
    }
    return true;
}

namespace {

// D on one interval of constant action: D(t) = eq + (start - eq) e^{-k (t - t0)}.
struct Piece {
    double t0, t1, k, eq, start;

    double at(double t) const {
        if (t == t0) return start;
        return eq + (start - eq) * std::exp(-k * (t - t0));
    }

    std::optional<double> crossing(double level) const {
        if (start == level) return t0;
        const double ratio = (level - eq) / (start - eq);
        if (!(ratio > 0.0 && ratio < 1.0)) return std::nullopt;
        const double t = t0 + std::log(1.0 / ratio) / k;
        // A crossing at the threshold itself may land a rounding error past t1.
        if (t <= t1 + 1e-12 * std::max(1.0, t1)) return std::min(t, t1);
        return std::nullopt;
    }
};

}  // namespace

FDifference f_difference(const ModelParams& params, const ThresholdPolicy& policy, std::size_t n,
                         std::optional<double> d0) {
    check_policy(params, policy);
    if (n < 2) throw DomainError("f_difference needs n >= 2");
    const double tau = params.tau();
    const double lam = params.lambda();
    const double k_idle = params.mu1() + params.mu2();
    const double k_repl = k_idle + lam;
    const double eq_idle = params.mu1() * params.c_c() / k_idle;
    const double eq_repl = (lam * params.c_p_uso() + params.mu1() * params.c_c()) / k_repl;
    const double split = policy.effective_threshold(tau);

    auto build = [&](double start) {
        Piece idle{0.0, split, k_idle, eq_idle, start};
        Piece repl{split, tau, k_repl, eq_repl, idle.at(split)};
        return std::pair{idle, repl};
    };

    double start;
    if (d0) {
        start = *d0;
    } else if (policy.replace_at_so()) {
        start = params.c_p_so();
    } else {
        // D(tau) is affine in D(0) with slope e^{-k_idle split - k_repl (tau - split)}.
        const auto [i0, r0] = build(0.0);
        const double offset = r0.at(tau);
        const double slope = std::exp(-k_idle * split - k_repl * (tau - split));
        start = offset / (1.0 - slope);
    }
    const auto [idle, repl] = build(start);

    FDifference out;
    out.t.resize(n);
    out.d.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = k + 1 == n ? tau : tau * static_cast<double>(k) / static_cast<double>(n - 1);
        out.t[k] = t;
        out.d[k] = t < split ? idle.at(t) : repl.at(t);
    }
    auto first_crossing = [&](double level) -> std::optional<double> {
        if (split > 0.0)
            if (auto c = idle.crossing(level)) return c;
        if (split < tau) return repl.crossing(level);
        return std::nullopt;
    };
    out.uso_crossing = first_crossing(params.c_p_uso());
    out.so_crossing = first_crossing(params.c_p_so());
    out.increasing = out.increasing_after(-1.0);
    return out;
}

}  // namespace opticbm
