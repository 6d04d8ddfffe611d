#pragma once

#include "relaylab/oracle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace relaylab {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    double value = 0.0;  ///< measured discrepancy or statistic
    double limit = 0.0;  ///< acceptance bound for `value`
    std::string detail;
};

/// Outcome of testing competing forms of one formula against the oracle.
struct Adjudication {
    std::string subject;
    std::vector<std::string> candidates;
    std::vector<bool> passed;
    std::vector<std::string> evidence;  ///< one line per candidate

    bool decided() const;
    /// Names of the passing candidates joined by ", " (or "none").
    std::string verdict() const;
};

// Individual check groups. Each returns one entry per elementary comparison.

/// Single-user broadcasting rate: closed form vs the layered-rate engine at Ps = 1.
std::vector<CheckResult> check_closed_form_consistency();
/// Numerical maximization of the outage objective vs the Lambert-W threshold.
std::vector<CheckResult> check_outage_threshold();
/// Two-receiver ergodic capacity at Ps = 1 and its quadrature.
std::vector<CheckResult> check_ergodic_identity();
/// KS distance between every closed-form law and its gain map at (10, 10) and (10, 2.5).
std::vector<CheckResult> check_distributions(const SampleConfig& sc);
/// Finite-session AF recursion vs the continuum limit, plus the I = 0 closed form.
std::vector<CheckResult> check_af_continuum(int sessions, int pairs, std::uint64_t seed);
/// First CF refinement step vs the single-session compression noise over random draws.
std::vector<CheckResult> check_cf_reduction(int draws, std::uint64_t seed);
/// Rate ordering across strategies on a (Ps dB) x (Pr/Ps dB) grid.
std::vector<CheckResult> check_ordering(const std::vector<double>& ps_db, const std::vector<double>& ratio_db,
                                        const SampleConfig& sc);
/// Analytic limits (Pr -> 0, Pr -> infinity) of the cooperative strategies.
std::vector<CheckResult> check_limits(const SampleConfig& sc);

/// Which separate-preprocessing AF CDF form matches the oracle (KS < 0.01 at n samples).
Adjudication adjudicate_separate_cdf(const SampleConfig& sc);
/// Which continuum Z kernel passes the I = 0 identity and the finite-session oracle.
Adjudication adjudicate_z_kernel(int sessions, int pairs, std::uint64_t seed);

enum class ValidationLevel { fast, full };

struct ValidationOptions {
    ValidationLevel level = ValidationLevel::fast;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::vector<Adjudication> adjudications;

    bool passed() const;
    std::string text() const;
};

/// fast: 10^4-sample KS checks, ordering at Ps = 10 dB, 20 oracle pairs.
/// full: 10^5 samples, the whole ordering grid and 100 oracle pairs.
ValidationReport run_validation(const ValidationOptions& opts);

}  // namespace relaylab
