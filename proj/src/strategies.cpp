#include "relaylab/strategies.hpp"

#include "relaylab/af.hpp"
#include "relaylab/bounds.hpp"
#include "relaylab/cf.hpp"
#include "relaylab/df.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/rate_engine.hpp"

#include <algorithm>
#include <array>

namespace relaylab {

std::string_view to_string(Family family) {
    switch (family) {
        case Family::bound: return "bound";
        case Family::af: return "af";
        case Family::cf: return "cf";
        case Family::df: return "df";
    }
    return "?";
}

namespace {

struct Entry {
    std::string_view name;
    Family family;
    StrategyKind kind;
    bool has_outage;
};

constexpr std::array<Entry, 17> kRegistry{{
    {"bound:outage_lb", Family::bound, StrategyKind::outage_lb, false},
    {"bound:broadcast_lb", Family::bound, StrategyKind::broadcast_lb, false},
    {"bound:outage_ub", Family::bound, StrategyKind::outage_ub, false},
    {"bound:broadcast_ub", Family::bound, StrategyKind::broadcast_ub, false},
    {"bound:ergodic_1", Family::bound, StrategyKind::ergodic_1, false},
    {"bound:ergodic_2", Family::bound, StrategyKind::ergodic_2, false},
    {"bound:cutset", Family::bound, StrategyKind::cutset, false},
    {"bound:df_ub", Family::bound, StrategyKind::df_ub, false},
    {"af:naive", Family::af, StrategyKind::af_naive, true},
    {"af:separate", Family::af, StrategyKind::af_separate, false},
    {"af:separate_iterative", Family::af, StrategyKind::af_separate_iterative, false},
    {"af:multisession", Family::af, StrategyKind::af_multisession, false},
    {"cf:naive_nb", Family::cf, StrategyKind::cf_naive_nb, true},
    {"cf:naive_wb", Family::cf, StrategyKind::cf_naive_wb, true},
    {"cf:separate", Family::cf, StrategyKind::cf_separate, false},
    {"cf:multisession", Family::cf, StrategyKind::cf_multisession, false},
    {"df", Family::df, StrategyKind::df, false},
}};

constexpr std::string_view kRteSuffix = "+rte";
constexpr std::string_view kOutageSuffix = ":outage";

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

bool supports_rte(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::af_naive:
        case StrategyKind::af_separate:
        case StrategyKind::af_separate_iterative:
        case StrategyKind::af_multisession:
        case StrategyKind::cf_naive_nb:
        case StrategyKind::cf_naive_wb:
        case StrategyKind::cf_separate:
        case StrategyKind::cf_multisession: return true;
        default: return false;
    }
}

std::string StrategySpec::default_alloc() const {
    if (outage) return "none";
    switch (kind) {
        case StrategyKind::broadcast_lb: return "su";
        case StrategyKind::broadcast_ub: return "joint";
        case StrategyKind::df_ub:
        case StrategyKind::df: return "sel";
        case StrategyKind::af_naive:
        case StrategyKind::af_separate: return "naf";
        case StrategyKind::af_separate_iterative: return "sep_iter";
        case StrategyKind::cf_naive_nb:
        case StrategyKind::cf_naive_wb: return "nwz";
        case StrategyKind::af_multisession:
        case StrategyKind::cf_separate:
        case StrategyKind::cf_multisession: return "joint";
        default: return "none";
    }
}

bool StrategySpec::fixed_alloc() const {
    return family == Family::bound || outage || kind == StrategyKind::af_separate_iterative;
}

StrategySpec parse_strategy(std::string_view text) {
    StrategySpec spec;
    std::string_view base = text;
    if (ends_with(base, kRteSuffix)) {
        spec.rte = true;
        base.remove_suffix(kRteSuffix.size());
    }
    if (ends_with(base, kOutageSuffix)) {
        spec.outage = true;
        base.remove_suffix(kOutageSuffix.size());
    }
    const auto it = std::find_if(kRegistry.begin(), kRegistry.end(), [&](const Entry& e) { return e.name == base; });
    if (it == kRegistry.end()) throw ConfigError("unknown strategy '" + std::string(text) + "'");
    if (spec.outage && !it->has_outage)
        throw ConfigError("strategy '" + std::string(base) + "' has no outage variant");
    if (spec.rte && (spec.outage || !supports_rte(it->kind)))
        throw ConfigError("strategy '" + std::string(text) + "' has no RTE variant");
    spec.family = it->family;
    spec.kind = it->kind;
    spec.name = std::string(base) + (spec.outage ? std::string(kOutageSuffix) : "") +
                (spec.rte ? std::string(kRteSuffix) : "");
    return spec;
}

std::vector<std::string> registered_strategies() {
    std::vector<std::string> out;
    for (const Entry& e : kRegistry) {
        out.emplace_back(e.name);
        if (e.has_outage) out.push_back(std::string(e.name) + std::string(kOutageSuffix));
    }
    return out;
}

std::vector<StrategySpec> expand_strategies(const std::vector<std::string>& names) {
    std::vector<StrategySpec> out;
    for (const std::string& n : names) {
        if (n == "bounds") {
            for (const char* b : {"bound:outage_lb", "bound:broadcast_lb", "bound:outage_ub", "bound:broadcast_ub"})
                out.push_back(parse_strategy(b));
        } else {
            out.push_back(parse_strategy(n));
        }
    }
    return out;
}

PowerAllocation make_allocation(std::string_view name, const PowerConfig& cfg) {
    cfg.validate();
    if (name == "su") return alloc_single_user_opt(cfg.ps).renamed("su");
    if (name == "joint") return alloc_joint_opt(cfg.ps).renamed("joint");
    if (name == "sel") return alloc_selection_opt(cfg.ps).renamed("sel");
    if (name == "naf") return af::naive_rates(cfg).alloc.renamed("naf");
    if (name == "nwz") return cf::naive_rates(cfg).alloc.renamed("nwz");
    throw ConfigError("unknown allocation '" + std::string(name) + "' (expected su, joint, sel, naf or nwz)");
}

double rte_gain(const GainMap& base, const FadingPair& pair) {
    return std::min(base(pair), base(FadingPair{pair.s2, pair.s1}));
}

namespace {

void attach(RatePoint& out, const MeanEstimate& m, const SampleConfig& sc) {
    out.rate = m.mean;
    out.std_error = m.std_error;
    out.n_samples = m.n;
    out.seed = sc.master_seed;
}

MeanEstimate rte_rate(const GainMap& base, const PowerAllocation& alloc, const SampleConfig& sc) {
    return empirical_avg_rate([&](const FadingPair& p) { return rte_gain(base, p); }, alloc, sc);
}

SessionSchedule cf_schedule(const EvalOptions& opts, double pr) {
    if (opts.sessions < 1) throw ConfigError("session count must be positive");
    return opts.geometric_schedule ? SessionSchedule::geometric(opts.sessions, pr, opts.geometric_ratio)
                                   : SessionSchedule::uniform(opts.sessions, pr);
}

// Closed-form law strategies: outage, optimal layering, or a named allocation on the law.
void law_rate(RatePoint& out, const StrategySpec& spec, const DistributionModel& dist, const PowerConfig& cfg,
              const GainMap& gain, const std::string& alloc_name, const EvalOptions& opts) {
    if (spec.outage) {
        const OutageResult r = outage_rate(dist, cfg.ps);
        out.rate = r.rate;
        out.threshold = r.threshold;
        if (r.multimodal) out.warnings.emplace_back("outage objective is multimodal");
        return;
    }
    const PowerAllocation alloc = make_allocation(alloc_name, cfg);
    if (spec.rte) {
        attach(out, rte_rate(gain, alloc, opts.sampling), opts.sampling);
    } else if (alloc_name == spec.default_alloc()) {
        out.rate = broadcast_rate_closed(dist, alloc);
    } else {
        out.rate = broadcast_rate(dist, alloc);
    }
}

}  // namespace

RatePoint evaluate(const StrategySpec& spec, const PowerConfig& cfg_in, const EvalOptions& opts) {
    cfg_in.validate();
    PowerConfig cfg = cfg_in;
    RatePoint out;
    out.strategy = spec.name;

    std::string alloc_name = opts.alloc.empty() || spec.fixed_alloc() ? spec.default_alloc() : opts.alloc;
    if (alloc_name == "opt") {
        if (spec.kind == StrategyKind::af_naive) alloc_name = "naf";
        else if (spec.kind == StrategyKind::cf_naive_nb || spec.kind == StrategyKind::cf_naive_wb) alloc_name = "nwz";
        else throw ConfigError("strategy '" + spec.name + "' has no law-optimal allocation");
    }
    if (!opts.alloc.empty() && spec.fixed_alloc() && opts.alloc != alloc_name)
        out.warnings.push_back("allocation fixed by the strategy; '" + opts.alloc + "' ignored");

    auto force_mode = [&](CoopMode mode, bool warn) {
        if (cfg.mode != mode && warn)
            out.warnings.push_back("multi-session cooperation evaluated in wide_band mode");
        cfg.mode = mode;
    };
    switch (spec.kind) {
        case StrategyKind::af_multisession:
        case StrategyKind::cf_multisession: force_mode(CoopMode::wide_band, true); break;
        case StrategyKind::cf_naive_nb: force_mode(CoopMode::narrow_band, false); break;
        case StrategyKind::cf_naive_wb: force_mode(CoopMode::wide_band, false); break;
        default: break;
    }
    out.ps = cfg.ps;
    out.pr = cfg.pr;
    out.mode = cfg.mode;
    out.alloc = alloc_name;

    const SampleConfig& sc = opts.sampling;
    switch (spec.kind) {
        case StrategyKind::outage_lb:
            out.rate = outage_lb(cfg.ps);
            out.threshold = outage_lb_threshold(cfg.ps);
            break;
        case StrategyKind::broadcast_lb: out.rate = broadcast_lb(cfg.ps); break;
        case StrategyKind::outage_ub: {
            const OutageResult r = outage_rate(joint_ub_distribution(), cfg.ps);
            out.rate = r.rate;
            out.threshold = r.threshold;
            break;
        }
        case StrategyKind::broadcast_ub: out.rate = broadcast_ub(cfg.ps); break;
        case StrategyKind::ergodic_1: out.rate = ergodic_capacity(1, cfg.ps); break;
        case StrategyKind::ergodic_2: out.rate = ergodic_capacity(2, cfg.ps); break;
        case StrategyKind::cutset: out.rate = cut_set(cfg); break;
        case StrategyKind::df_ub: out.rate = df_upper_bound(cfg.ps); break;

        case StrategyKind::af_naive:
            law_rate(out, spec, af::naive_distribution(cfg), cfg,
                     [&](const FadingPair& p) { return af::naive_gain(p, cfg); }, alloc_name, opts);
            break;
        case StrategyKind::cf_naive_nb:
        case StrategyKind::cf_naive_wb:
            law_rate(out, spec, cf::naive_distribution(cfg), cfg,
                     [&](const FadingPair& p) { return cf::naive_gain(p, cfg); }, alloc_name, opts);
            break;

        case StrategyKind::af_separate:
        case StrategyKind::af_separate_iterative: {
            PowerAllocation alloc;
            if (spec.kind == StrategyKind::af_separate_iterative || alloc_name == "naf") {
                const af::SepRateResult r = af::sep_rate(
                    cfg, spec.kind == StrategyKind::af_separate ? af::SepStrategy::one_step : af::SepStrategy::iterative);
                out.rate = r.rate;
                alloc = r.alloc;
                out.extras.emplace_back("relaxed_rate", r.relaxed_rate);
                out.extras.emplace_back("iterations", r.iterations);
                out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
            } else {
                alloc = make_allocation(alloc_name, cfg);
                out.rate = broadcast_rate(af::sep_distribution(alloc, cfg), alloc);
            }
            if (spec.rte)
                attach(out, rte_rate([&](const FadingPair& p) { return af::sep_gain(p, alloc, cfg); }, alloc, sc), sc);
            break;
        }
        case StrategyKind::af_multisession: {
            const PowerAllocation alloc = make_allocation(alloc_name, cfg);
            if (spec.rte) {
                attach(out,
                       empirical_avg_rate([&](const FadingPair& p) { return af::multisession_gain(p, alloc, cfg).s_b; },
                                          alloc, sc),
                       sc);
            } else {
                attach(out, af::multisession_rate(alloc, cfg, sc), sc);
            }
            break;
        }
        case StrategyKind::cf_separate: {
            const PowerAllocation alloc = make_allocation(alloc_name, cfg);
            if (spec.rte) {
                const double c = cf::link_snr(cfg);
                attach(out, empirical_avg_rate(
                                [&](const FadingPair& p) {
                                    const auto s = cf::multisession_step(cf::CompressionState::initial(p), p, alloc, c, c);
                                    return std::min(s.gain_1, s.gain_2);
                                },
                                alloc, sc),
                       sc);
            } else {
                attach(out, cf::sep_rate(alloc, cfg, sc), sc);
            }
            break;
        }
        case StrategyKind::cf_multisession: {
            const PowerAllocation alloc = make_allocation(alloc_name, cfg);
            const SessionSchedule schedule = cf_schedule(opts, cfg.pr);
            out.extras.emplace_back("sessions", static_cast<double>(schedule.size()));
            if (spec.rte) {
                attach(out, empirical_avg_rate(
                                [&](const FadingPair& p) {
                                    return cf::multisession_run(p, alloc, schedule, cfg).back().s_b;
                                },
                                alloc, sc),
                       sc);
            } else {
                attach(out, cf::multisession_avg_rate(alloc, schedule, cfg, sc), sc);
            }
            break;
        }
        case StrategyKind::df:
            out.rate = df::df_avg_rate(make_allocation(alloc_name, cfg), cfg);
            break;
    }
    return out;
}

}  // namespace relaylab
