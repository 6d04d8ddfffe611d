#include "relaylab/report.hpp"

#include "relaylab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace relaylab {

std::string_view to_string(Units units) { return units == Units::bits ? "bits" : "nats"; }

Units parse_units(std::string_view text) {
    if (text == "nats") return Units::nats;
    if (text == "bits") return Units::bits;
    throw ConfigError("unknown units '" + std::string(text) + "' (expected nats or bits)");
}

double convert_rate(double nats, Units units) { return units == Units::bits ? nats / std::numbers::ln2 : nats; }

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string csv_row(const RatePoint& p, Units units) {
    std::string warnings;
    for (const std::string& w : p.warnings) {
        if (!warnings.empty()) warnings += ';';
        warnings += w;
    }
    std::string row;
    row += csv_field(p.strategy) + ',';
    row += csv_field(p.alloc) + ',';
    row += format_real(10.0 * std::log10(p.ps)) + ',';
    row += format_real(10.0 * std::log10(p.pr)) + ',';
    row += std::string(to_string(p.mode)) + ',';
    row += format_real(convert_rate(p.rate, units)) + ',';
    row += std::string(to_string(units)) + ',';
    row += (p.std_error ? format_real(convert_rate(*p.std_error, units)) : "") + ',';
    row += (p.n_samples ? std::to_string(*p.n_samples) : "") + ',';
    row += (p.seed ? std::to_string(*p.seed) : "") + ',';
    row += csv_field(warnings);
    return row;
}

std::vector<double> db_grid(double start, double stop, double step) {
    if (!(step > 0.0)) throw ConfigError("grid step must be positive");
    if (!(start <= stop)) throw ConfigError("grid start must not exceed stop");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

}  // namespace relaylab
