#include "opticbm/cli.hpp"

#include "opticbm/cost.hpp"
#include "opticbm/verifier.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace opticbm {

using nlohmann::json;

namespace {

// Shortest representation that parses back to the same double.
std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::size_t line_at(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
    const auto pos = text.find('"' + key + '"');
    return pos == std::string::npos ? 0 : line_at(text, pos);
}

class SchemaReader {
public:
    explicit SchemaReader(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& field, const std::string& what) const {
        const std::size_t line = line_of_key(text_, leaf(field));
        std::ostringstream os;
        os << "field '" << field << "'";
        if (line) os << " (line " << line << ")";
        os << ": " << what;
        throw ParseError(field, line, os.str());
    }

    double number(const json& obj, const std::string& key, const std::string& path) const {
        if (!obj.contains(key)) fail(path, "missing required field");
        const auto& v = obj.at(key);
        if (!v.is_number()) fail(path, "expected a number");
        return v.get<double>();
    }

    std::uint64_t count(const json& obj, const std::string& key, const std::string& path) const {
        const auto& v = obj.at(key);
        if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }

    void only(const json& obj, std::initializer_list<const char*> keys, const std::string& prefix) const {
        for (const auto& [k, v] : obj.items()) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; }))
                fail(prefix + k, "unknown field");
        }
    }

private:
    static std::string leaf(const std::string& path) {
        const auto dot = path.rfind('.');
        return dot == std::string::npos ? path : path.substr(dot + 1);
    }

    const std::string& text_;
};

double table_tau(double c_p_so, std::size_t column) {
    // The c_p_so = 9000 block is reproduced by periods {0.5, 1, 2}.
    static constexpr double regular[] = {1.0, 2.0, 4.0};
    static constexpr double shifted[] = {0.5, 1.0, 2.0};
    return c_p_so == 9000.0 ? shifted[column] : regular[column];
}

constexpr double kTableCheckTolerance = 0.5;

ModelParams table_params(double c_p_so, double tau, double lambda) {
    return validate_params({.mu1 = 1.0,
                            .mu2 = 0.4,
                            .lambda = lambda,
                            .tau = tau,
                            .c_c = 15000.0,
                            .c_p_so = c_p_so,
                            .c_p_uso = 10000.0});
}

std::string describe(const ThresholdPolicy& p) {
    std::ostringstream os;
    os << "replace_at_so=" << (p.replace_at_so() ? "true" : "false") << ", uso_threshold=";
    if (p.uso_threshold()) os << fixed(*p.uso_threshold(), 6);
    else os << "never";
    return os.str();
}

void print_cost(std::ostream& out, const CostBreakdown& c) {
    out << "cost.total:          " << fixed(c.total, 2) << '\n'
        << "cost.corrective:     " << fixed(c.corrective, 2) << '\n'
        << "cost.preventive_uso: " << fixed(c.preventive_uso, 2) << '\n'
        << "cost.preventive_so:  " << fixed(c.preventive_so, 2) << '\n';
}

}  // namespace

ThresholdPolicy Scenario::resolved_policy() const {
    switch (policy.kind) {
        case PolicySpec::Kind::Optimal: return optimal_policy(params).policy;
        case PolicySpec::Kind::Never: return ThresholdPolicy::do_nothing();
        case PolicySpec::Kind::Explicit: return *policy.policy;
    }
    return ThresholdPolicy::do_nothing();
}

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t line = line_at(text, e.byte ? e.byte - 1 : 0);
        throw ParseError("", line, "malformed JSON at line " + std::to_string(line) + ": " + e.what());
    }
    SchemaReader reader(text);
    if (!doc.is_object()) throw ParseError("", 1, "scenario must be a JSON object");
    reader.only(doc, {"mu1", "mu2", "lambda", "tau", "c_c", "c_p_so", "c_p_uso", "policy", "sim"}, "");

    RawParams raw;
    raw.mu1 = reader.number(doc, "mu1", "mu1");
    raw.mu2 = reader.number(doc, "mu2", "mu2");
    raw.lambda = reader.number(doc, "lambda", "lambda");
    raw.tau = reader.number(doc, "tau", "tau");
    raw.c_c = reader.number(doc, "c_c", "c_c");
    raw.c_p_so = reader.number(doc, "c_p_so", "c_p_so");
    raw.c_p_uso = reader.number(doc, "c_p_uso", "c_p_uso");
    Scenario scenario{validate_params(raw), {}, {}};

    if (doc.contains("policy")) {
        const auto& p = doc.at("policy");
        if (p.is_string()) {
            const auto s = p.get<std::string>();
            if (s == "optimal") scenario.policy.kind = PolicySpec::Kind::Optimal;
            else if (s == "never") scenario.policy.kind = PolicySpec::Kind::Never;
            else reader.fail("policy", "expected \"optimal\", \"never\" or an object");
        } else if (p.is_object()) {
            reader.only(p, {"replace_at_so", "uso_threshold"}, "policy.");
            if (!p.contains("replace_at_so") || !p.at("replace_at_so").is_boolean())
                reader.fail("policy.replace_at_so", "expected a boolean");
            std::optional<double> threshold;
            if (p.contains("uso_threshold")) {
                const auto& t = p.at("uso_threshold");
                if (t.is_number()) threshold = t.get<double>();
                else if (!(t.is_null() || (t.is_string() && t.get<std::string>() == "never")))
                    reader.fail("policy.uso_threshold", "expected a number or \"never\"");
            }
            scenario.policy.kind = PolicySpec::Kind::Explicit;
            scenario.policy.policy = ThresholdPolicy(p.at("replace_at_so").get<bool>(), threshold);
            check_policy(scenario.params, *scenario.policy.policy);
        } else {
            reader.fail("policy", "expected \"optimal\", \"never\" or an object");
        }
    }

    if (doc.contains("sim")) {
        const auto& s = doc.at("sim");
        if (!s.is_object()) reader.fail("sim", "expected an object");
        reader.only(s, {"cycles", "seed", "warmup_cycles"}, "sim.");
        if (s.contains("cycles")) scenario.sim.cycles = reader.count(s, "cycles", "sim.cycles");
        if (s.contains("seed")) scenario.sim.seed = reader.count(s, "seed", "sim.seed");
        if (s.contains("warmup_cycles"))
            scenario.sim.warmup_cycles = reader.count(s, "warmup_cycles", "sim.warmup_cycles");
        validate_config(scenario.sim);
    }
    return scenario;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("", 0, "cannot read scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// Commands

OptimizeReport run_optimize(const Scenario& scenario) {
    const auto result = optimal_policy(scenario.params);
    return {result.regime, result.t_star, result.policy, policy_cost(scenario.params, result.policy)};
}

EvaluateReport run_evaluate(const Scenario& scenario, std::optional<double> threshold) {
    const ThresholdPolicy policy =
        threshold ? ThresholdPolicy(true, *threshold) : scenario.resolved_policy();
    check_policy(scenario.params, policy);
    return {policy, policy_cost(scenario.params, policy)};
}

SimulateReport run_simulate(const Scenario& scenario) {
    const auto policy = scenario.resolved_policy();
    auto sim = simulate(scenario.params, policy, scenario.sim);
    return {policy, scenario.sim.seed, std::move(sim), policy_cost(scenario.params, policy).total};
}

std::string run_sweep(const Scenario& scenario, std::size_t n) {
    if (n < 2) throw ValidationError("InvalidGrid", "grid", "sweep grid needs at least 2 points");
    const auto& p = scenario.params;
    const auto diff = f_difference(p, scenario.resolved_policy(), n);
    std::string out = "t,average_cost,d\n";
    for (std::size_t k = 0; k < n; ++k) {
        const double t = diff.t[k];
        out += num(t) + ',' + num(average_cost_at(p, t).total) + ',' + num(diff.d[k]) + '\n';
    }
    return out;
}

const std::vector<TableEntry>& published_table() {
    // (c_p_so, tau, lambda, a_opt, a_so, a_alw, opt_is_so)
    static const std::vector<TableEntry> table = {
        {4000, 1, 0.1, 2840.41, 2840.41, 2885.56, true},
        {4000, 1, 0.5, 2840.41, 2840.41, 3042.07, true},
        {4000, 1, 1.0, 2840.41, 2840.41, 3194.24, true},
        {4000, 1, 2.0, 2840.41, 2840.41, 3401.88, true},
        {4000, 2, 0.1, 3384.70, 3384.86, 3422.03, false},
        {4000, 2, 0.5, 3384.09, 3384.86, 3538.91, false},
        {4000, 2, 1.0, 3383.38, 3384.86, 3636.35, false},
        {4000, 2, 2.0, 3382.15, 3384.86, 3747.82, false},
        {4000, 4, 0.1, 3802.49, 3807.90, 3823.32, false},
        {4000, 4, 0.5, 3784.63, 3807.90, 3867.21, false},
        {4000, 4, 1.0, 3768.42, 3807.90, 3899.32, false},
        {4000, 4, 2.0, 3747.68, 3807.90, 3932.53, false},
        {6500, 1, 0.1, 3378.56, 3378.56, 3403.48, true},
        {6500, 1, 0.5, 3378.56, 3378.56, 3489.66, true},
        {6500, 1, 1.0, 3378.56, 3378.56, 3573.11, true},
        {6500, 1, 2.0, 3378.56, 3378.56, 3686.18, true},
        {6500, 2, 0.1, 3719.49, 3720.28, 3738.77, false},
        {6500, 2, 0.5, 3716.57, 3720.28, 3796.18, false},
        {6500, 2, 1.0, 3713.40, 3720.28, 3842.96, false},
        {6500, 2, 2.0, 3708.32, 3720.28, 3894.71, false},
        {6500, 4, 0.1, 3979.00, 3985.81, 3989.58, false},
        {6500, 4, 0.5, 3956.81, 3985.81, 3998.72, false},
        {6500, 4, 1.0, 3937.06, 3985.81, 4003.48, false},
        {6500, 4, 2.0, 3912.27, 3985.81, 4006.06, false},
        {9000, 0.5, 0.1, 3792.57, 3792.57, 3797.66, true},
        {9000, 0.5, 0.5, 3792.57, 3792.57, 3816.41, true},
        {9000, 0.5, 1.0, 3792.57, 3792.57, 3836.68, true},
        {9000, 0.5, 2.0, 3792.57, 3792.57, 3868.78, true},
        {9000, 1, 0.1, 3916.43, 3916.70, 3921.39, false},
        {9000, 1, 0.5, 3915.40, 3916.70, 3937.26, false},
        {9000, 1, 1.0, 3914.21, 3916.70, 3951.98, false},
        {9000, 1, 2.0, 3912.11, 3916.70, 3970.48, false},
        {9000, 2, 0.1, 4052.18, 4055.71, 4055.51, false},
        {9000, 2, 0.5, 4039.84, 4055.71, 4053.46, false},
        {9000, 2, 1.0, 4027.59, 4055.71, 4049.58, false},
        {9000, 2, 2.0, 4010.20, 4055.71, 4041.61, false},
    };
    return table;
}

TableReport run_table(bool check) {
    static constexpr double kBlocks[] = {4000.0, 6500.0, 9000.0};
    static constexpr double kLambdas[] = {0.1, 0.5, 1.0, 2.0};

    TableReport report;
    for (double c_p_so : kBlocks) {
        bool first = true;
        for (std::size_t column = 0; column < 3; ++column) {
            const double tau = table_tau(c_p_so, column);
            for (double lambda : kLambdas) {
                const auto params = table_params(c_p_so, tau, lambda);
                const auto opt = optimal_policy(params);
                if (first) {
                    // t* does not depend on tau or lambda.
                    report.t_star.emplace_back(c_p_so, opt.t_star.value_or(0.0));
                    first = false;
                }
                report.entries.push_back({c_p_so, tau, lambda, policy_cost(params, opt.policy).total,
                                          so_only_cost(params).total,
                                          average_cost_at(params, 0.0).total,
                                          opt.regime == Regime::ReplaceSOOnly});
            }
        }
    }
    if (check) {
        double worst = 0.0;
        const auto& published = published_table();
        for (std::size_t i = 0; i < report.entries.size(); ++i) {
            const auto& a = report.entries[i];
            const auto& b = published.at(i);
            worst = std::max({worst, std::abs(a.a_opt - b.a_opt), std::abs(a.a_so - b.a_so),
                              std::abs(a.a_alw - b.a_alw)});
        }
        report.max_deviation = worst;
    }
    return report;
}

std::string format_table(const TableReport& report) {
    std::ostringstream os;
    bool footnote = false;
    for (const auto& [c_p_so, t_star] : report.t_star) {
        os << "c_p_so = " << fixed(c_p_so, 0) << ", t* = " << fixed(t_star, 4) << '\n';
        std::vector<const TableEntry*> rows;
        for (const auto& e : report.entries)
            if (e.c_p_so == c_p_so) rows.push_back(&e);
        std::vector<double> taus;
        for (const auto* e : rows)
            if (std::find(taus.begin(), taus.end(), e->tau) == taus.end()) taus.push_back(e->tau);

        os << std::setw(8) << "lambda";
        for (double tau : taus) {
            os << " | tau=" << std::left << std::setw(4) << num(tau) << std::right
               << std::setw(10) << "a_opt" << std::setw(10) << "a_so" << std::setw(10) << "a_alw";
        }
        os << '\n';
        std::vector<double> lambdas;
        for (const auto* e : rows)
            if (std::find(lambdas.begin(), lambdas.end(), e->lambda) == lambdas.end())
                lambdas.push_back(e->lambda);
        for (double lambda : lambdas) {
            os << std::setw(8) << num(lambda);
            for (double tau : taus) {
                for (const auto* e : rows) {
                    if (e->tau != tau || e->lambda != lambda) continue;
                    const std::string opt = fixed(e->a_opt, 2) + (e->opt_is_so ? "*" : " ");
                    footnote = footnote || e->opt_is_so;
                    os << " | " << std::setw(8) << "" << std::setw(10) << opt << std::setw(10)
                       << fixed(e->a_so, 2) << std::setw(10) << fixed(e->a_alw, 2);
                }
            }
            os << '\n';
        }
        os << '\n';
    }
    if (footnote) os << "* t* >= tau: a_opt = a_so\n";
    if (report.max_deviation) {
        os << "max |deviation| from published values: " << fixed(*report.max_deviation, 4)
           << (*report.max_deviation <= kTableCheckTolerance ? " (within " : " (EXCEEDS ")
           << fixed(kTableCheckTolerance, 2) << ")\n";
    }
    return os.str();
}

std::string table_csv(const TableReport& report) {
    std::string out = "c_p_so,tau,lambda,a_opt,a_so,a_alw,opt_is_so\n";
    for (const auto& e : report.entries) {
        out += num(e.c_p_so) + ',' + num(e.tau) + ',' + num(e.lambda) + ',' + num(e.a_opt) + ',' +
               num(e.a_so) + ',' + num(e.a_alw) + ',' + (e.opt_is_so ? "true" : "false") + '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(json& j, const CostBreakdown& c) {
    j = json{{"total", c.total},
             {"corrective", c.corrective},
             {"preventive_uso", c.preventive_uso},
             {"preventive_so", c.preventive_so}};
}

void from_json(const json& j, CostBreakdown& c) {
    c.total = j.at("total").get<double>();
    c.corrective = j.at("corrective").get<double>();
    c.preventive_uso = j.at("preventive_uso").get<double>();
    c.preventive_so = j.at("preventive_so").get<double>();
}

void to_json(json& j, const ThresholdPolicy& p) {
    j = json{{"replace_at_so", p.replace_at_so()},
             {"uso_threshold", p.uso_threshold() ? json(*p.uso_threshold()) : json(nullptr)}};
}

ThresholdPolicy policy_from_json(const json& j) {
    const auto& t = j.at("uso_threshold");
    return {j.at("replace_at_so").get<bool>(),
            t.is_null() ? std::nullopt : std::optional<double>(t.get<double>())};
}

void to_json(json& j, const SimReport& r) {
    j = json{{"mean_cost_rate", r.mean_cost_rate},
             {"ci_halfwidth", r.ci_halfwidth},
             {"counted_cycles", r.counted_cycles},
             {"total_cost", r.total_cost},
             {"events",
              {{"failures", r.events.failures},
               {"uso_replacements", r.events.uso_replacements},
               {"so_replacements", r.events.so_replacements}}}};
    if (!r.per_cycle_costs.empty()) j["per_cycle_costs"] = r.per_cycle_costs;
}

void from_json(const json& j, SimReport& r) {
    r.mean_cost_rate = j.at("mean_cost_rate").get<double>();
    r.ci_halfwidth = j.at("ci_halfwidth").get<double>();
    r.counted_cycles = j.at("counted_cycles").get<std::uint64_t>();
    r.total_cost = j.at("total_cost").get<double>();
    const auto& e = j.at("events");
    r.events.failures = e.at("failures").get<std::uint64_t>();
    r.events.uso_replacements = e.at("uso_replacements").get<std::uint64_t>();
    r.events.so_replacements = e.at("so_replacements").get<std::uint64_t>();
    r.per_cycle_costs = j.value("per_cycle_costs", std::vector<double>{});
}

void to_json(json& j, const OptimizeReport& r) {
    j = json{{"regime", to_string(r.regime)},
             {"t_star", r.t_star ? json(*r.t_star) : json(nullptr)},
             {"policy", r.policy},
             {"cost", r.cost}};
}

OptimizeReport optimize_report_from_json(const json& j) {
    static constexpr Regime kRegimes[] = {Regime::NeverReplace, Regime::ReplaceAlways,
                                          Regime::ReplaceSOOnly, Regime::TimeDependent,
                                          Regime::Indifferent};
    const auto name = j.at("regime").get<std::string>();
    const auto it = std::find_if(std::begin(kRegimes), std::end(kRegimes),
                                 [&](Regime r) { return name == to_string(r); });
    if (it == std::end(kRegimes)) throw ParseError("regime", 0, "unknown regime '" + name + "'");
    const auto& t = j.at("t_star");
    return {*it, t.is_null() ? std::nullopt : std::optional<double>(t.get<double>()),
            policy_from_json(j.at("policy")), j.at("cost").get<CostBreakdown>()};
}

void to_json(json& j, const EvaluateReport& r) {
    j = json{{"policy", r.policy}, {"cost", r.cost}};
}

EvaluateReport evaluate_report_from_json(const json& j) {
    return {policy_from_json(j.at("policy")), j.at("cost").get<CostBreakdown>()};
}

void to_json(json& j, const SimulateReport& r) {
    j = json{{"policy", r.policy}, {"seed", r.seed}, {"sim", r.sim}, {"closed_form", r.closed_form}};
}

SimulateReport simulate_report_from_json(const json& j) {
    return {policy_from_json(j.at("policy")), j.at("seed").get<std::uint64_t>(),
            j.at("sim").get<SimReport>(), j.at("closed_form").get<double>()};
}

void to_json(json& j, const TableReport& r) {
    json blocks = json::array();
    for (const auto& [c, t] : r.t_star) blocks.push_back({{"c_p_so", c}, {"t_star", t}});
    json entries = json::array();
    for (const auto& e : r.entries) {
        entries.push_back({{"c_p_so", e.c_p_so},
                           {"tau", e.tau},
                           {"lambda", e.lambda},
                           {"a_opt", e.a_opt},
                           {"a_so", e.a_so},
                           {"a_alw", e.a_alw},
                           {"opt_is_so", e.opt_is_so}});
    }
    j = json{{"blocks", blocks}, {"entries", entries}};
    j["max_deviation"] = r.max_deviation ? json(*r.max_deviation) : json(nullptr);
}

void from_json(const json& j, TableReport& r) {
    r.t_star.clear();
    for (const auto& b : j.at("blocks"))
        r.t_star.emplace_back(b.at("c_p_so").get<double>(), b.at("t_star").get<double>());
    r.entries.clear();
    for (const auto& e : j.at("entries")) {
        r.entries.push_back({e.at("c_p_so").get<double>(), e.at("tau").get<double>(),
                             e.at("lambda").get<double>(), e.at("a_opt").get<double>(),
                             e.at("a_so").get<double>(), e.at("a_alw").get<double>(),
                             e.at("opt_is_so").get<bool>()});
    }
    const auto& d = j.at("max_deviation");
    r.max_deviation = d.is_null() ? std::nullopt : std::optional<double>(d.get<double>());
}

// ---------------------------------------------------------------------------
// Command line

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            std::optional<unsigned> env_threads) {
    CLI::App app{"Optimal condition-based maintenance with scheduled and unscheduled opportunities",
                 "opticbm"};
    app.require_subcommand(1);

    bool as_json = false;
    bool check = false;
    bool as_csv = false;
    std::string path;
    std::optional<double> threshold;
    std::optional<std::uint64_t> cycles;
    std::optional<std::uint64_t> seed;
    std::size_t grid = 101;

    auto scenario_cmd = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("scenario", path, "Scenario JSON file")->required();
        sub->add_flag("--json", as_json, "Emit JSON");
        return sub;
    };
    auto* optimize = scenario_cmd("optimize", "Optimal policy and its long-run average cost");
    auto* evaluate = scenario_cmd("evaluate", "Long-run average cost of a threshold policy");
    evaluate->add_option("--threshold", threshold, "USO threshold in [0, tau]; replaces at SOs");
    auto* simulate_cmd = scenario_cmd("simulate", "Monte Carlo estimate of the long-run average cost");
    simulate_cmd->add_option("--cycles", cycles, "Number of SO-to-SO cycles");
    simulate_cmd->add_option("--seed", seed, "Root seed");
    auto* sweep = app.add_subcommand("sweep", "CSV of (t, average_cost(t), D(t)) over [0, tau]");
    sweep->add_option("scenario", path, "Scenario JSON file")->required();
    sweep->add_option("--grid", grid, "Number of grid points (>= 2)");
    auto* table = app.add_subcommand("table", "Reproduce the published cost table");
    table->add_flag("--check", check, "Compare against the published values");
    table->add_flag("--json", as_json, "Emit JSON");
    table->add_flag("--csv", as_csv, "Emit CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (*table) {
            const auto report = run_table(check);
            if (as_json) out << json(report).dump(2) << '\n';
            else if (as_csv) out << table_csv(report);
            else out << format_table(report);
            if (report.max_deviation && *report.max_deviation > kTableCheckTolerance)
                return kCheckFailed;
            return kOk;
        }

        auto scenario = load_scenario(path);
        if (*optimize) {
            const auto r = run_optimize(scenario);
            if (as_json) {
                out << json(r).dump(2) << '\n';
            } else {
                out << "regime:              " << to_string(r.regime) << '\n';
                out << "t_star:              " << (r.t_star ? fixed(*r.t_star, 6) : "-") << '\n';
                out << "policy:              " << describe(r.policy) << '\n';
                print_cost(out, r.cost);
            }
        } else if (*evaluate) {
            const auto r = run_evaluate(scenario, threshold);
            if (as_json) {
                out << json(r).dump(2) << '\n';
            } else {
                out << "policy:              " << describe(r.policy) << '\n';
                print_cost(out, r.cost);
            }
        } else if (*simulate_cmd) {
            if (cycles) scenario.sim.cycles = *cycles;
            if (seed) scenario.sim.seed = *seed;
            if (env_threads) scenario.sim.threads = *env_threads;
            validate_config(scenario.sim);
            const auto r = run_simulate(scenario);
            if (as_json) {
                out << json(r).dump(2) << '\n';
            } else {
                out << "policy:              " << describe(r.policy) << '\n'
                    << "cycles:              " << scenario.sim.cycles << " (counted "
                    << r.sim.counted_cycles << "), seed " << r.seed << '\n'
                    << "mean_cost_rate:      " << fixed(r.sim.mean_cost_rate, 2) << " +/- "
                    << fixed(r.sim.ci_halfwidth, 2) << " (95% CI)\n"
                    << "closed_form:         " << fixed(r.closed_form, 2) << '\n'
                    << "events:              failures=" << r.sim.events.failures
                    << ", uso_replacements=" << r.sim.events.uso_replacements
                    << ", so_replacements=" << r.sim.events.so_replacements << '\n';
            }
        } else if (*sweep) {
            out << run_sweep(scenario, grid);
        }
        return kOk;
    } catch (const NoConvergence& e) {
        err << "error: " << e.code() << ": " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const Error& e) {
        err << "error: " << e.code() << ": " << e.what() << '\n';
        return kInvalidInput;
    }
}

}  // namespace opticbm
