#include "opticbm/sim.hpp"

#include "opticbm/cost.hpp"
#include "opticbm/rng.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace opticbm {

void validate_config(const SimConfig& cfg) {
    if (cfg.cycles < 1) throw ValidationError("InvalidConfig", "cycles", "cycles must be >= 1");
    if (cfg.warmup_cycles >= cfg.cycles)
        throw ValidationError("InvalidConfig", "warmup_cycles",
                              "warmup_cycles must be smaller than cycles");
}

namespace {

constexpr std::size_t kBatches = 100;

struct CycleOutcome {
    std::uint32_t failures = 0;
    std::uint32_t uso = 0;
    std::uint32_t so = 0;
    ComponentState end = ComponentState::Perfect;
};

// Probe positions in forward time within the cycle, ascending.
struct Probes {
    std::span<const double> forward;
    std::span<std::uint8_t> satisfactory;  // one flag per probe
};

CycleOutcome run_cycle(const ModelParams& p, const ThresholdPolicy& policy, SplitMix64& rng,
                       ComponentState state, Probes* probes = nullptr) {
    const double tau = p.tau();
    auto sojourn = [&](ComponentState s) {
        return rng.exponential(s == ComponentState::Perfect ? p.mu2() : p.mu1());
    };

    CycleOutcome out;
    double sc = sojourn(state);
    double uso = rng.exponential(p.lambda());
    std::size_t next_probe = 0;

    auto record_until = [&](double time) {
        if (!probes) return;
        while (next_probe < probes->forward.size() && probes->forward[next_probe] < time) {
            probes->satisfactory[next_probe] = state == ComponentState::Satisfactory;
            ++next_probe;
        }
    };

    for (;;) {
        if (sc <= uso && sc <= tau) {
            record_until(sc);
            if (state == ComponentState::Perfect) {
                state = ComponentState::Satisfactory;
            } else {
                ++out.failures;
                state = ComponentState::Perfect;
            }
            sc += sojourn(state);
        } else if (uso <= tau) {
            record_until(uso);
            if (state == ComponentState::Satisfactory && policy.replaces_at_uso(tau - uso)) {
                ++out.uso;
                state = ComponentState::Perfect;
                sc = uso + sojourn(state);
            }
            uso += rng.exponential(p.lambda());
        } else {
            break;
        }
    }
    // Probes at forward time tau (residual 0) see the state just before the SO.
    record_until(std::numeric_limits<double>::infinity());
    if (policy.replace_at_so() && state == ComponentState::Satisfactory) {
        ++out.so;
        state = ComponentState::Perfect;
    }
    out.end = state;
    return out;
}

unsigned worker_count(const SimConfig& cfg, std::uint64_t work) {
    unsigned n = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::uint64_t>(n, std::max<std::uint64_t>(1, work / 4096)));
}

// Runs body(begin, end, worker) over [0, count) split into contiguous chunks.
template <typename Body>
void parallel_chunks(std::uint64_t count, unsigned workers, Body&& body) {
    if (workers <= 1) {
        body(std::uint64_t{0}, count, 0u);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t begin = count * w / workers;
        const std::uint64_t end = count * (w + 1) / workers;
        pool.emplace_back([&body, begin, end, w] { body(begin, end, w); });
    }
    for (auto& t : pool) t.join();
}

double t_quantile(std::size_t samples) {
    if (samples < 2) return std::numeric_limits<double>::infinity();
    boost::math::students_t dist(static_cast<double>(samples - 1));
    return boost::math::quantile(dist, 0.975);
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

Moments moments(std::span<const double> xs) {
    Moments m;
    if (xs.empty()) return m;
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() < 2) return m;
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.variance = ss / static_cast<double>(xs.size() - 1);
    return m;
}

}  // namespace

SimReport simulate(const ModelParams& params, const ThresholdPolicy& policy,
                   const SimConfig& cfg) {
    validate_config(cfg);
    check_policy(params, policy);

    const std::uint64_t cycles = cfg.cycles;
    std::vector<CycleOutcome> outcomes(cycles);

    if (policy.replace_at_so()) {
        parallel_chunks(cycles, worker_count(cfg, cycles),
                        [&](std::uint64_t begin, std::uint64_t end, unsigned) {
                            for (std::uint64_t i = begin; i < end; ++i) {
                                auto rng = SplitMix64::substream(cfg.seed, i);
                                outcomes[i] = run_cycle(params, policy, rng, ComponentState::Perfect);
                            }
                        });
    } else {
        ComponentState state = ComponentState::Perfect;
        for (std::uint64_t i = 0; i < cycles; ++i) {
            auto rng = SplitMix64::substream(cfg.seed, i);
            outcomes[i] = run_cycle(params, policy, rng, state);
            state = outcomes[i].end;
        }
    }

    SimReport report;
    report.counted_cycles = cycles - cfg.warmup_cycles;
    std::vector<double> costs;
    costs.reserve(report.counted_cycles);
    for (std::uint64_t i = cfg.warmup_cycles; i < cycles; ++i) {
        const auto& o = outcomes[i];
        report.events.failures += o.failures;
        report.events.uso_replacements += o.uso;
        report.events.so_replacements += o.so;
        costs.push_back(params.c_c() * o.failures + params.c_p_uso() * o.uso +
                        params.c_p_so() * o.so);
    }
    // Weighted counts, multiplied once.
    report.total_cost = params.c_c() * static_cast<double>(report.events.failures) +
                        params.c_p_uso() * static_cast<double>(report.events.uso_replacements) +
                        params.c_p_so() * static_cast<double>(report.events.so_replacements);
    const double horizon = static_cast<double>(report.counted_cycles) * params.tau();
    report.mean_cost_rate = report.total_cost / horizon;

    if (policy.replace_at_so()) {
        const auto m = moments(costs);
        report.ci_halfwidth = t_quantile(costs.size()) * std::sqrt(m.variance / costs.size()) /
                              params.tau();
    } else {
        const std::size_t batches = std::min<std::size_t>(kBatches, costs.size());
        std::vector<double> means;
        means.reserve(batches);
        for (std::size_t b = 0; b < batches; ++b) {
            const std::size_t lo = costs.size() * b / batches;
            const std::size_t hi = costs.size() * (b + 1) / batches;
            double sum = 0.0;
            for (std::size_t i = lo; i < hi; ++i) sum += costs[i];
            means.push_back(sum / (static_cast<double>(hi - lo) * params.tau()));
        }
        const auto m = moments(means);
        report.ci_halfwidth = t_quantile(means.size()) * std::sqrt(m.variance / means.size());
    }

    if (cfg.keep_series) report.per_cycle_costs = std::move(costs);
    return report;
}

std::vector<ProbeEstimate> estimate_p1(const ModelParams& params, const ThresholdPolicy& policy,
                                       const SimConfig& cfg, std::span<const double> probe_times) {
    validate_config(cfg);
    check_policy(params, policy);
    if (!policy.replace_at_so())
        throw UnsupportedPolicy("p1 estimation needs a policy that replaces at scheduled opportunities");
    const double tau = params.tau();
    for (double t : probe_times) {
        if (!(t >= 0.0 && t < tau)) {
            std::ostringstream os;
            os << "probe time " << t << " outside [0, tau=" << tau << ")";
            throw ProbeOutOfRange(os.str());
        }
    }

    // Sort probes by forward time tau - t; remember where each came from.
    const std::size_t m = probe_times.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return probe_times[a] > probe_times[b]; });
    std::vector<double> forward(m);
    for (std::size_t j = 0; j < m; ++j) forward[j] = tau - probe_times[order[j]];

    const unsigned workers = worker_count(cfg, cfg.cycles);
    std::vector<std::vector<std::uint64_t>> hits(workers, std::vector<std::uint64_t>(m, 0));
    parallel_chunks(cfg.cycles, workers, [&](std::uint64_t begin, std::uint64_t end, unsigned w) {
        std::vector<std::uint8_t> flags(m, 0);
        Probes probes{forward, flags};
        for (std::uint64_t i = begin; i < end; ++i) {
            auto rng = SplitMix64::substream(cfg.seed, i);
            run_cycle(params, policy, rng, ComponentState::Perfect, &probes);
            for (std::size_t j = 0; j < m; ++j) hits[w][j] += flags[j];
        }
    });

    const double n = static_cast<double>(cfg.cycles);
    std::vector<ProbeEstimate> out(m);
    for (std::size_t j = 0; j < m; ++j) {
        std::uint64_t total = 0;
        for (const auto& h : hits) total += h[j];
        const double p = static_cast<double>(total) / n;
        out[order[j]] = {probe_times[order[j]], p, std::sqrt(p * (1.0 - p) / n)};
    }
    return out;
}

double lag1_autocorrelation(std::span<const double> series) {
    if (series.size() < 3) return 0.0;
    const auto m = moments(series);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double d = series[i] - m.mean;
        den += d * d;
        if (i + 1 < series.size()) num += d * (series[i + 1] - m.mean);
    }
    return den > 0.0 ? num / den : 0.0;
}

}  // namespace opticbm
