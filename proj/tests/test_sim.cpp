#include "opticbm/cost.hpp"
#include "opticbm/policy.hpp"
#include "opticbm/rng.hpp"
#include "opticbm/sim.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace opticbm;
using opticbm::testing::ParamGenerator;
using opticbm::testing::table_params;

namespace {

SimConfig config(std::uint64_t cycles, std::uint64_t seed) {
    SimConfig c;
    c.cycles = cycles;
    c.seed = seed;
    return c;
}

void expect_covers(const SimReport& r, double value) {
    EXPECT_LE(std::abs(r.mean_cost_rate - value), r.ci_halfwidth)
        << r.mean_cost_rate << " +- " << r.ci_halfwidth << " vs " << value;
}

}  // namespace

TEST(Rng, SubstreamsAreDistinctAndRepeatable) {
    auto a = SplitMix64::substream(5, 0);
    auto b = SplitMix64::substream(5, 1);
    auto a2 = SplitMix64::substream(5, 0);
    const auto x = a();
    EXPECT_NE(x, b());
    EXPECT_EQ(x, a2());
}

TEST(Rng, UniformInUnitInterval) {
    SplitMix64 r(9);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
    EXPECT_TRUE(std::isinf(r.exponential(0.0)));
}

TEST(Simulate, OptimalPolicyMatchesTableValue) {
    const auto p = table_params();
    const auto r = simulate(p, optimal_policy(p).policy, config(1000000, 2024));
    expect_covers(r, 3384.09);
    EXPECT_EQ(r.counted_cycles, 1000000u);
}

// The per-cycle cost spread of this parameter set needs about 3e6 cycles for
// a half-width below 5.
TEST(Simulate, HalfWidthShrinksBelowFive) {
    const auto p = table_params();
    const auto r = simulate(p, optimal_policy(p).policy, config(3000000, 5));
    EXPECT_LT(r.ci_halfwidth, 5.0);
    expect_covers(r, policy_cost(p, optimal_policy(p).policy).total);
}

TEST(Simulate, DoNothingIsCorrectiveOnly) {
    const auto p = table_params();
    expect_covers(simulate(p, ThresholdPolicy::do_nothing(), config(200000, 100)), 4285.714285714286);

    // Random sets: each 95% interval may miss, so count the hits.
    ParamGenerator gen(51);
    int covered = 0;
    for (int i = 0; i < 40; ++i) {
        const auto q = gen.any();
        const auto r = simulate(q, ThresholdPolicy::do_nothing(), config(50000, 200 + i));
        if (std::abs(r.mean_cost_rate - q.c_c() * q.mu1() * q.mu2() / (q.mu1() + q.mu2())) <= r.ci_halfwidth)
            ++covered;
        EXPECT_EQ(r.events.uso_replacements, 0u);
        EXPECT_EQ(r.events.so_replacements, 0u);
    }
    EXPECT_GE(covered, 33);
}

TEST(Simulate, UsoOnlyOverLongPeriods) {
    auto raw = table_params().raw();
    raw.tau = 1e3 / (raw.mu1 + raw.mu2);
    const auto p = validate_params(raw);
    const auto r = simulate(p, ThresholdPolicy(false, 0.0), config(1000, 8));
    expect_covers(r, uso_only_cost(p).total);
}

TEST(Simulate, ExactAccounting) {
    const auto p = table_params(6500.0, 1.0, 2.0);
    const auto r = simulate(p, ThresholdPolicy(true, 0.4), config(50000, 3));
    const double expected = p.c_c() * static_cast<double>(r.events.failures) +
                            p.c_p_uso() * static_cast<double>(r.events.uso_replacements) +
                            p.c_p_so() * static_cast<double>(r.events.so_replacements);
    EXPECT_EQ(r.total_cost, expected);
    EXPECT_GE(r.mean_cost_rate, 0.0);
}

TEST(Simulate, Deterministic) {
    const auto p = table_params();
    auto cfg = config(100000, 77);
    cfg.keep_series = true;
    const auto a = simulate(p, optimal_policy(p).policy, cfg);
    cfg.threads = 1;
    const auto b = simulate(p, optimal_policy(p).policy, cfg);
    cfg.threads = 3;
    const auto c = simulate(p, optimal_policy(p).policy, cfg);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);

    auto seq = config(50000, 77);
    seq.warmup_cycles = 1000;
    EXPECT_EQ(simulate(p, ThresholdPolicy(false, 1.0), seq), simulate(p, ThresholdPolicy(false, 1.0), seq));
}

TEST(Simulate, WarmupExcludedFromStatistics) {
    auto cfg = config(10000, 4);
    cfg.warmup_cycles = 2500;
    const auto r = simulate(table_params(), ThresholdPolicy::do_nothing(), cfg);
    EXPECT_EQ(r.counted_cycles, 7500u);
}

TEST(Simulate, InvalidConfig) {
    const auto p = table_params();
    try {
        simulate(p, ThresholdPolicy::so_only(), config(0, 1));
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "cycles");
    }
    auto cfg = config(10, 1);
    cfg.warmup_cycles = 10;
    EXPECT_THROW(simulate(p, ThresholdPolicy::so_only(), cfg), ValidationError);
}

TEST(EstimateP1, MatchesClosedFormWithinThreeSigma) {
    const auto p = table_params();
    const std::vector<double> probes{0.3, 1.0, 1.8};
    const std::uint64_t n = 1000000;
    const auto est = estimate_p1(p, ThresholdPolicy(true, 1.6), config(n, 12), probes);
    ASSERT_EQ(est.size(), probes.size());
    for (const auto& e : est) {
        const double q = p1_closed_form(p, 1.6, e.t);
        const double sigma = std::sqrt(q * (1.0 - q) / static_cast<double>(n));
        EXPECT_LE(std::abs(e.p1 - q), 3.0 * sigma) << e.t;
    }
}

TEST(EstimateP1, NoUsoRate) {
    auto raw = table_params().raw();
    raw.lambda = 0.0;
    const auto p = validate_params(raw);
    const std::vector<double> probes{0.0, 0.5, 1.2, 1.9};
    const std::uint64_t n = 200000;
    const auto est = estimate_p1(p, ThresholdPolicy::so_only(), config(n, 13), probes);
    const double m = p.mu1() + p.mu2();
    for (const auto& e : est) {
        const double q = p.mu2() / m * (1.0 - std::exp(m * (e.t - p.tau())));
        EXPECT_LE(std::abs(e.p1 - q), 3.0 * std::sqrt(q * (1.0 - q) / n)) << e.t;
    }
}

TEST(EstimateP1, NearEndOfCycleIsZero) {
    const auto p = table_params();
    const std::vector<double> probes{std::nextafter(p.tau(), 0.0)};
    const auto est = estimate_p1(p, ThresholdPolicy::so_only(), config(10000, 1), probes);
    EXPECT_EQ(est[0].p1, 0.0);
}

TEST(EstimateP1, Errors) {
    const auto p = table_params();
    const std::vector<double> bad{2.0};
    EXPECT_THROW(estimate_p1(p, ThresholdPolicy::so_only(), config(10, 1), bad), ProbeOutOfRange);
    const std::vector<double> neg{-0.1};
    EXPECT_THROW(estimate_p1(p, ThresholdPolicy::so_only(), config(10, 1), neg), ProbeOutOfRange);
    const std::vector<double> ok{1.0};
    EXPECT_THROW(estimate_p1(p, ThresholdPolicy(false, 1.0), config(10, 1), ok), UnsupportedPolicy);
}

TEST(SimulateProperty, ConfidenceIntervalCoverage) {
    const auto p = table_params();
    const auto policy = optimal_policy(p).policy;
    const double exact = policy_cost(p, policy).total;
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto r = simulate(p, policy, config(100000, 1000 + seed));
        if (std::abs(r.mean_cost_rate - exact) <= r.ci_halfwidth) ++covered;
    }
    EXPECT_GE(covered, 90);
}

TEST(SimulateProperty, BatchMeansCoverage) {
    const auto p = table_params(4000.0, 1.0, 1.0);
    const ThresholdPolicy policy(false, 0.5);
    const double exact = policy_cost(p, policy).total;
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto cfg = config(20000, 5000 + seed);
        cfg.warmup_cycles = 100;
        const auto r = simulate(p, policy, cfg);
        if (std::abs(r.mean_cost_rate - exact) <= r.ci_halfwidth) ++covered;
    }
    EXPECT_GE(covered, 88);
}

TEST(SimulateProperty, CyclesIndependentWhenReplacingAtSo) {
    const auto p = table_params();
    auto cfg = config(1000000, 31);
    cfg.keep_series = true;
    const auto r = simulate(p, optimal_policy(p).policy, cfg);
    ASSERT_EQ(r.per_cycle_costs.size(), 1000000u);
    EXPECT_LT(std::abs(lag1_autocorrelation(r.per_cycle_costs)), 0.01);
}

TEST(Lag1Autocorrelation, KnownSeries) {
    const std::vector<double> alternating{1, -1, 1, -1, 1, -1, 1, -1};
    EXPECT_LT(lag1_autocorrelation(alternating), -0.8);
    const std::vector<double> tiny{1.0, 2.0};
    EXPECT_EQ(lag1_autocorrelation(tiny), 0.0);
}
