#pragma once

#include "relaylab/fading.hpp"
#include "relaylab/oracle.hpp"
#include "relaylab/rate_engine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace relaylab {

/// Per-session cooperation powers delta_1..delta_K.
struct SessionSchedule {
    std::vector<double> deltas;

    /// K sessions of total/K each.
    static SessionSchedule uniform(int sessions, double total);
    /// delta_k proportional to q^(k-1), normalized to the total.
    static SessionSchedule geometric(int sessions, double total, double q = 0.5);

    double total() const;
    std::size_t size() const noexcept { return deltas.size(); }
};

}  // namespace relaylab

namespace relaylab::af {

/// s1 + Pr s2/(1 + Ps s2 + Pr): the helper amplifies its raw observation.
double naive_gain(const FadingPair& pair, const PowerConfig& cfg);

/// Law of naive_gain under Rayleigh fading (one inner quadrature per point, analytic
/// density). Branch point at Pr/Ps. Pr = 0 gives the single-user law.
DistributionModel naive_distribution(const PowerConfig& cfg);

struct NaiveRates {
    OutageResult outage;
    double broadcast = 0.0;
    PowerAllocation alloc;  ///< optimal layering for the naive law
};
NaiveRates naive_rates(const PowerConfig& cfg);

/// s1 + Pr s2/(1 + s2 max(I(s1), I(s2)) + Pr): commonly decoded layers are removed
/// before forwarding.
double sep_gain(const FadingPair& pair, const PowerAllocation& alloc, const PowerConfig& cfg);

/// Which integrand the separate-preprocessing CDF uses.
enum class SeparateCdfForm {
    /// 2e^{-2u} - e^{-u-x+psi(u)} - e^{-u-phi4(u)}: both orderings of (s1, s2) integrated.
    two_sided,
    /// e^{-2u} - e^{-u-phi2(u)} - e^{-u-phi3(u)}: a single e^{-2u} term.
    single_term,
};
std::string_view to_string(SeparateCdfForm form);

DistributionModel sep_distribution(const PowerAllocation& alloc, const PowerConfig& cfg,
                                   SeparateCdfForm form = SeparateCdfForm::two_sided);

enum class SepStrategy { one_step, iterative };

struct SepRateResult {
    double rate = 0.0;          ///< achieved by `alloc` on the law it induces
    PowerAllocation alloc;      ///< transmit allocation used
    double relaxed_rate = 0.0;  ///< optimal layering for the last induced law (ignores that changing I changes the law)
    int iterations = 0;
    bool converged = true;
    std::vector<std::string> warnings;
};

/// one_step: transmit with the naive-AF optimal allocation, preprocess with it too.
/// iterative: re-optimize I on the induced law until the rate moves by < 1e-5.
SepRateResult sep_rate(const PowerConfig& cfg, SepStrategy strategy);

/// Kernel used for Z(s) in the continuum multi-session limit.
enum class ZKernel {
    /// s_max (1 + s_max I)/((1 + s_min I)(S - sigma)^2): accumulated forwarding gain.
    squared,
    /// (1 + s_max I)/((1 + s_min I)(S - sigma)).
    linear,
};
std::string_view to_string(ZKernel kernel);

struct MultisessionGain {
    double s_a = 0.0;          ///< stronger user's gain after all sessions
    double s_b = 0.0;          ///< commonly decodable gain
    double destination = 0.0;  ///< s_a if user 1 is the stronger (ties included), else s_b
    bool saturated = false;    ///< unlimited budget: both reach s1 + s2
};

/// Infinitely many vanishing-power sessions with total budget Pr (wide band only).
MultisessionGain multisession_gain(const FadingPair& pair, const PowerAllocation& alloc, const PowerConfig& cfg,
                                   ZKernel kernel = ZKernel::squared);

struct SessionGains {
    double s_a = 0.0;
    double s_b = 0.0;
};

/// Exact finite-session recursion. The implicit dependence of each session's common
/// layer on itself is solved by monotone fixed-point iteration (bracketed fallback).
/// `trace`, when given, receives the gains after every session.
SessionGains discrete_sessions(const FadingPair& pair, const PowerAllocation& alloc, const SessionSchedule& schedule,
                               std::vector<SessionGains>* trace = nullptr);

/// E[R(multisession gain)] by Monte Carlo over Rayleigh pairs.
MeanEstimate multisession_rate(const PowerAllocation& alloc, const PowerConfig& cfg, const SampleConfig& sc);
/// The same expectation by nested quadrature (slow; for spot checks).
double multisession_rate_quadrature(const PowerAllocation& alloc, const PowerConfig& cfg, double tol = 1e-6);

}  // namespace relaylab::af
