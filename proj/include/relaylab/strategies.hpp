#pragma once

#include "relaylab/fading.hpp"
#include "relaylab/oracle.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relaylab {

enum class Family { bound, af, cf, df };
std::string_view to_string(Family family);

/// Every concrete rate computation the registry can dispatch to.
enum class StrategyKind {
    outage_lb,
    broadcast_lb,
    outage_ub,
    broadcast_ub,
    ergodic_1,
    ergodic_2,
    cutset,
    df_ub,
    af_naive,
    af_separate,
    af_separate_iterative,
    af_multisession,
    cf_naive_nb,
    cf_naive_wb,
    cf_separate,
    cf_multisession,
    df,
};

/// Parsed strategy name such as "af:naive", "cf:naive_nb:outage" or "af:multisession+rte".
struct StrategySpec {
    std::string name;  ///< canonical spelling
    Family family = Family::bound;
    StrategyKind kind = StrategyKind::broadcast_lb;
    bool outage = false;  ///< single-level coding instead of layering
    bool rte = false;     ///< rate set by the smaller of the two role-swapped gains

    /// Allocation used when the caller does not pick one.
    std::string default_alloc() const;
    /// Whether the allocation is fixed by the strategy (bounds, outage, iterative search).
    bool fixed_alloc() const;
};

/// Throws ConfigError for unknown names or unsupported suffixes.
StrategySpec parse_strategy(std::string_view text);
/// Base names of every registered strategy (without "+rte").
std::vector<std::string> registered_strategies();
/// Strategies that accept the "+rte" suffix.
bool supports_rte(StrategyKind kind);
/// Parses a list, expanding the group alias "bounds" to the four outage/broadcast bounds.
std::vector<StrategySpec> expand_strategies(const std::vector<std::string>& names);

/// Named allocations: su, joint, sel, naf (naive-AF optimal), nwz (naive-CF optimal for cfg's mode).
PowerAllocation make_allocation(std::string_view name, const PowerConfig& cfg);

/// min(base(s1, s2), base(s2, s1)).
double rte_gain(const GainMap& base, const FadingPair& pair);

struct EvalOptions {
    SampleConfig sampling;
    std::string alloc;  ///< empty: the strategy's default
    int sessions = 8;   ///< finite-session compress-and-forward schedule length
    bool geometric_schedule = false;
    double geometric_ratio = 0.5;
};

struct RatePoint {
    std::string strategy;
    std::string alloc;
    double ps = 0.0;
    double pr = 0.0;
    CoopMode mode = CoopMode::narrow_band;
    double rate = 0.0;  ///< nats per channel use
    std::optional<double> threshold;
    std::optional<double> std_error;
    std::optional<std::uint64_t> n_samples;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, double>> extras;  ///< strategy-specific diagnostics
};

/// Dispatches to the owning module. Throws ConfigError / NumericalError.
RatePoint evaluate(const StrategySpec& spec, const PowerConfig& cfg, const EvalOptions& opts = {});

}  // namespace relaylab
