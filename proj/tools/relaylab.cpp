#include "relaylab/errors.hpp"
#include "relaylab/report.hpp"
#include "relaylab/strategies.hpp"
#include "relaylab/validation.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

using namespace relaylab;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("RELAYLAB_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError("RELAYLAB_SEED must be an unsigned integer");
    }
    return kDefaultSeed;
}

int fail(const char* kind, const std::string& message, int code) {
    std::cerr << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump() << '\n';
    return code;
}

struct Common {
    std::optional<double> pr_rel_db;
    std::optional<double> pr_db;
    std::string coop = "narrow_band";
    std::string units = "nats";
    std::uint64_t samples = 200000;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    int sessions = 8;
    std::string schedule = "uniform";

    void add_to(CLI::App* cmd) {
        auto* rel = cmd->add_option("--pr-rel-db", pr_rel_db, "Relay power relative to Ps in dB (default 0)");
        cmd->add_option("--pr-db", pr_db, "Absolute relay power in dB")->excludes(rel);
        cmd->add_option("--coop", coop, "Cooperation link: narrow_band|nb|wide_band|wb");
        cmd->add_option("--units", units, "Rate units: nats|bits");
        cmd->add_option("--samples", samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", seed, "Master seed (default: RELAYLAB_SEED or built-in)");
        cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
        cmd->add_option("--sessions", sessions, "Session count for cf:multisession")->check(CLI::PositiveNumber);
        cmd->add_option("--schedule", schedule, "Session schedule: uniform|geometric")
            ->check(CLI::IsMember({"uniform", "geometric"}));
    }

    EvalOptions eval_options() const {
        EvalOptions o;
        o.sampling.n_samples = samples;
        o.sampling.master_seed = seed ? *seed : default_seed();
        o.sampling.threads = threads;
        o.sessions = sessions;
        o.geometric_schedule = schedule == "geometric";
        return o;
    }

    double pr_db_at(double ps_db) const {
        if (pr_db) return *pr_db;
        return ps_db + pr_rel_db.value_or(0.0);
    }
};

json to_json(const RatePoint& p, Units units) {
    json j{{"strategy", p.strategy},
           {"alloc", p.alloc},
           {"ps", p.ps},
           {"pr", p.pr},
           {"ps_db", linear_to_db(p.ps)},
           {"pr_db", linear_to_db(p.pr)},
           {"coop_mode", to_string(p.mode)},
           {"rate", convert_rate(p.rate, units)},
           {"units", to_string(units)},
           {"warnings", p.warnings}};
    if (p.threshold) j["threshold"] = *p.threshold;
    if (p.std_error) j["stderr"] = convert_rate(*p.std_error, units);
    if (p.n_samples) j["n_samples"] = *p.n_samples;
    if (p.seed) j["seed"] = *p.seed;
    json extras = json::object();
    for (const auto& [k, v] : p.extras) extras[k] = v;
    if (!extras.empty()) j["extras"] = extras;
    return j;
}

json to_json(const ValidationReport& r) {
    json checks = json::array();
    for (const CheckResult& c : r.checks)
        checks.push_back({{"suite", c.suite},
                          {"name", c.name},
                          {"passed", c.passed},
                          {"value", c.value},
                          {"limit", c.limit},
                          {"detail", c.detail}});
    json adj = json::array();
    for (const Adjudication& a : r.adjudications) {
        json cands = json::array();
        for (std::size_t i = 0; i < a.candidates.size(); ++i)
            cands.push_back({{"form", a.candidates[i]}, {"passed", bool(a.passed[i])}, {"evidence", a.evidence[i]}});
        adj.push_back({{"subject", a.subject}, {"passed_form", a.verdict()}, {"candidates", cands}});
    }
    return {{"passed", r.passed()}, {"checks", checks}, {"adjudications", adj}};
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const std::string& item : items) {
        std::size_t start = 0;
        while (start <= item.size()) {
            const std::size_t end = std::min(item.find(',', start), item.size());
            if (end > start) out.push_back(item.substr(start, end - start));
            start = end + 1;
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Broadcast-approach rates for two cooperating receivers"};
    app.require_subcommand(1);

    Common eval_common;
    std::string eval_strategy;
    std::string eval_alloc;
    double eval_ps_db = 0.0;
    auto* eval = app.add_subcommand("eval", "Evaluate one strategy at one operating point (JSON)");
    eval->add_option("--strategy", eval_strategy, "Strategy name, e.g. af:naive or cf:separate+rte")->required();
    eval->add_option("--ps-db", eval_ps_db, "Source SNR in dB")->required();
    eval->add_option("--alloc", eval_alloc, "Power allocation: su|joint|sel|naf|nwz|opt");
    eval_common.add_to(eval);

    Common sweep_common;
    std::vector<std::string> sweep_strategies;
    std::vector<std::string> sweep_allocs;
    std::string axis = "ps_db";
    double start = 0.0, stop = 40.0, step = 2.0;
    std::optional<double> sweep_ps_db;
    std::string out_path;
    auto* sweep = app.add_subcommand("sweep", "Evaluate strategies over a dB grid (CSV)");
    sweep->add_option("--strategies", sweep_strategies, "Comma-separated strategies ('bounds' expands)")->required();
    sweep->add_option("--alloc", sweep_allocs, "Comma-separated allocations (default: each strategy's own)");
    sweep->add_option("--axis", axis, "Swept parameter: ps_db|pr_rel_db")->check(CLI::IsMember({"ps_db", "pr_rel_db"}));
    sweep->add_option("--start", start, "Grid start (dB)");
    sweep->add_option("--stop", stop, "Grid stop (dB)");
    sweep->add_option("--step", step, "Grid step (dB)");
    sweep->add_option("--ps-db", sweep_ps_db, "Fixed Ps in dB when sweeping pr_rel_db");
    sweep->add_option("--out", out_path, "Output CSV path (default stdout)");
    sweep_common.add_to(sweep);

    std::string level = "fast";
    bool as_json = false;
    std::uint64_t validate_seed_value = 0;
    unsigned validate_threads = 0;
    auto* validate = app.add_subcommand("validate", "Run the oracle validation suite");
    validate->add_option("--level", level, "fast|full")->check(CLI::IsMember({"fast", "full"}));
    validate->add_flag("--json", as_json, "Print the report as JSON");
    auto* vseed = validate->add_option("--seed", validate_seed_value, "Master seed");
    validate->add_option("--threads", validate_threads, "Worker threads (0 = all cores)");

    auto* list = app.add_subcommand("list", "List registered strategies");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("config", e.what(), kExitConfig);
    }

    try {
        if (*list) {
            for (const std::string& n : registered_strategies()) {
                const StrategySpec s = parse_strategy(n);
                std::cout << n << (supports_rte(s.kind) && !s.outage ? "  [+rte]" : "") << '\n';
            }
            return 0;
        }

        if (*eval) {
            const Units units = parse_units(eval_common.units);
            const PowerConfig cfg = PowerConfig::from_db(eval_ps_db, eval_common.pr_db_at(eval_ps_db),
                                                         parse_coop_mode(eval_common.coop));
            EvalOptions opts = eval_common.eval_options();
            opts.alloc = eval_alloc;
            const RatePoint p = evaluate(parse_strategy(eval_strategy), cfg, opts);
            std::cout << to_json(p, units).dump(2) << '\n';
            return 0;
        }

        if (*sweep) {
            const Units units = parse_units(sweep_common.units);
            const CoopMode mode = parse_coop_mode(sweep_common.coop);
            const std::vector<StrategySpec> specs = expand_strategies(split_list(sweep_strategies));
            const std::vector<std::string> allocs = split_list(sweep_allocs);
            const std::vector<double> grid = db_grid(start, stop, step);
            if (axis == "ps_db" && sweep_ps_db) throw ConfigError("--ps-db is fixed by the ps_db axis");
            if (axis == "pr_rel_db" && sweep_common.pr_db) throw ConfigError("--pr-db conflicts with the pr_rel_db axis");
            EvalOptions base = sweep_common.eval_options();

            std::ofstream file;
            if (!out_path.empty()) {
                file.open(out_path);
                if (!file) throw ConfigError("cannot open '" + out_path + "' for writing");
            }
            std::ostream& os = out_path.empty() ? std::cout : file;
            os << kCsvHeader << '\n';
            for (const StrategySpec& spec : specs) {
                std::vector<std::string> spec_allocs{""};
                if (!allocs.empty() && !spec.fixed_alloc()) spec_allocs = allocs;
                for (const std::string& alloc : spec_allocs) {
                    EvalOptions opts = base;
                    opts.alloc = alloc;
                    for (double x : grid) {
                        const double ps_db = axis == "ps_db" ? x : sweep_ps_db.value_or(0.0);
                        const double pr_db = axis == "ps_db" ? sweep_common.pr_db_at(ps_db) : ps_db + x;
                        const PowerConfig cfg = PowerConfig::from_db(ps_db, pr_db, mode);
                        RatePoint p;
                        try {
                            p = evaluate(spec, cfg, opts);
                        } catch (const std::exception& e) {
                            p.strategy = spec.name;
                            p.alloc = alloc.empty() ? spec.default_alloc() : alloc;
                            p.ps = cfg.ps;
                            p.pr = cfg.pr;
                            p.mode = cfg.mode;
                            p.rate = std::numeric_limits<double>::quiet_NaN();
                            p.warnings.push_back(std::string("error: ") + e.what());
                        }
                        os << csv_row(p, units) << '\n';
                    }
                }
            }
            return 0;
        }

        if (*validate) {
            ValidationOptions vo;
            vo.level = level == "full" ? ValidationLevel::full : ValidationLevel::fast;
            vo.seed = *vseed ? validate_seed_value : default_seed();
            vo.threads = validate_threads;
            const ValidationReport report = run_validation(vo);
            if (as_json)
                std::cout << to_json(report).dump(2) << '\n';
            else
                std::cout << report.text();
            return report.passed() ? 0 : kExitValidation;
        }
    } catch (const ConfigError& e) {
        return fail("config", e.what(), kExitConfig);
    } catch (const std::invalid_argument& e) {
        return fail("config", e.what(), kExitConfig);
    } catch (const NumericalError& e) {
        return fail("numerical", e.what(), kExitNumerical);
    } catch (const std::exception& e) {
        return fail("numerical", e.what(), kExitNumerical);
    }
    return 0;
}
