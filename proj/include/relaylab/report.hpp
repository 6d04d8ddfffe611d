#pragma once

#include "relaylab/strategies.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace relaylab {

enum class Units { nats, bits };
std::string_view to_string(Units units);
/// "nats" or "bits"; throws ConfigError otherwise.
Units parse_units(std::string_view text);
/// Converts a rate in nats to the requested units.
double convert_rate(double nats, Units units);

/// Byte-exact sweep CSV header.
inline constexpr std::string_view kCsvHeader =
    "strategy,alloc,ps_db,pr_db,coop_mode,rate,units,stderr,n_samples,seed,warnings";

/// One CSV line (no trailing newline). Reals use 9 significant digits; absent optional
/// fields are empty; warnings are joined by ';' and quoted when needed.
std::string csv_row(const RatePoint& p, Units units);

/// %.9g formatting used throughout the CSV.
std::string format_real(double v);

/// start, start + step, ... up to stop (inclusive within a small tolerance).
std::vector<double> db_grid(double start, double stop, double step);

}  // namespace relaylab
