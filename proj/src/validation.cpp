#include "relaylab/validation.hpp"

#include "relaylab/af.hpp"
#include "relaylab/bounds.hpp"
#include "relaylab/cf.hpp"
#include "relaylab/df.hpp"
#include "relaylab/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

namespace relaylab {

namespace {

// Frozen high-precision value of the single-user broadcasting rate at Ps = 1.
constexpr double kBroadcastLbAt1 = 0.266652609325656;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

CheckResult make(std::string suite, std::string name, double value, double limit, std::string detail = {}) {
    CheckResult c;
    c.suite = std::move(suite);
    c.name = std::move(name);
    c.value = value;
    c.limit = limit;
    c.passed = std::isfinite(value) && value <= limit;
    c.detail = std::move(detail);
    return c;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// 0.01 at 10^5 samples, scaled like the KS critical value for smaller samples.
double ks_limit(std::uint64_t n) { return n >= 100000 ? 0.01 : 0.01 * std::sqrt(1e5 / static_cast<double>(n)); }

std::string point_label(const PowerConfig& cfg) {
    return "(Ps=" + fmt("%g", cfg.ps) + ", Pr=" + fmt("%g", cfg.pr) + ")";
}

}  // namespace

bool Adjudication::decided() const { return std::find(passed.begin(), passed.end(), true) != passed.end(); }

std::string Adjudication::verdict() const {
    std::string out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!passed[i]) continue;
        if (!out.empty()) out += ", ";
        out += candidates[i];
    }
    return out.empty() ? "none" : out;
}

std::vector<CheckResult> check_closed_form_consistency() {
    const double closed = broadcast_lb(1.0);
    const double engine = broadcast_rate(rayleigh_distribution(), alloc_single_user_opt(1.0));
    return {make("closed_form", "broadcast_lb(1) reference value", std::abs(closed - kBroadcastLbAt1), 1e-9,
                 "rate " + fmt("%.9f", closed) + " nats"),
            make("closed_form", "broadcast_lb(1) closed form vs layered-rate engine", std::abs(closed - engine), 1e-6,
                 "engine " + fmt("%.9f", engine))};
}

std::vector<CheckResult> check_outage_threshold() {
    std::vector<CheckResult> out;
    for (double ps : {0.5, 1.0, 10.0, 100.0}) {
        const auto obj = [ps](double u) { return std::exp(-u) * std::log1p(u * ps); };
        const numerics::Maximum m = numerics::maximize_1d(obj, {1e-8, 50.0}, 1e-12);
        const double w = numerics::lambert_w0(ps);
        const double closed = (ps - w) / (w * ps);
        out.push_back(make("closed_form", "outage threshold Ps=" + fmt("%g", ps), rel_err(m.argmax, closed), 1e-6,
                           "argmax " + fmt("%.10f", m.argmax)));
    }
    return out;
}

std::vector<CheckResult> check_ergodic_identity() {
    const double c = ergodic_capacity(2, 1.0);
    CheckResult exact = make("closed_form", "ergodic_capacity(2, 1) == 1", std::abs(c - 1.0), 0.0, fmt("%.17g", c));
    return {exact, make("closed_form", "ergodic_capacity(2, 1) vs quadrature",
                        std::abs(c - ergodic_capacity_integral(2, 1.0)), 1e-6)};
}

std::vector<CheckResult> check_distributions(const SampleConfig& sc) {
    std::vector<CheckResult> out;
    const double limit = ks_limit(sc.n_samples);
    auto ks = [&](const std::string& name, const DistributionModel& law, const GainMap& gain) {
        const double d = empirical_distribution(gain, sc).ks_distance(law, sc.threads);
        out.push_back(make("ks", name, d, limit, "n=" + std::to_string(sc.n_samples)));
    };
    ks("rayleigh identity", rayleigh_distribution(), [](const FadingPair& p) { return p.s1; });
    for (double pr : {10.0, 2.5}) {
        const PowerConfig nb{10.0, pr, CoopMode::narrow_band};
        const PowerConfig wb{10.0, pr, CoopMode::wide_band};
        const PowerAllocation joint = alloc_joint_opt(10.0);
        ks("naive AF " + point_label(nb), af::naive_distribution(nb),
           [&](const FadingPair& p) { return af::naive_gain(p, nb); });
        ks("separate AF, joint alloc " + point_label(nb), af::sep_distribution(joint, nb),
           [&](const FadingPair& p) { return af::sep_gain(p, joint, nb); });
        ks("naive CF narrow band " + point_label(nb), cf::naive_distribution(nb),
           [&](const FadingPair& p) { return cf::naive_gain(p, nb); });
        ks("naive CF wide band " + point_label(wb), cf::naive_distribution(wb),
           [&](const FadingPair& p) { return cf::naive_gain(p, wb); });
    }
    return out;
}

std::vector<CheckResult> check_af_continuum(int sessions, int pairs, std::uint64_t seed) {
    const PowerConfig cfg{10.0, 10.0, CoopMode::wide_band};
    const PowerAllocation joint = alloc_joint_opt(cfg.ps);
    const SessionSchedule schedule = SessionSchedule::uniform(sessions, cfg.pr);
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const FadingPair p = sample_pair(seed, static_cast<std::uint64_t>(i));
        const af::MultisessionGain limit = af::multisession_gain(p, joint, cfg);
        const af::SessionGains finite = af::discrete_sessions(p, joint, schedule);
        worst = std::max({worst, rel_err(finite.s_a, limit.s_a), rel_err(finite.s_b, limit.s_b)});
    }

    double worst_zero = 0.0;
    const PowerAllocation zero = PowerAllocation::zero(cfg.ps);
    for (int i = 0; i < std::max(pairs, 10); ++i) {
        const FadingPair p = sample_pair(seed + 1, static_cast<std::uint64_t>(i));
        for (double pr : {0.5, 1.0, 10.0}) {
            const PowerConfig c{cfg.ps, pr, CoopMode::wide_band};
            const af::MultisessionGain g = af::multisession_gain(p, zero, c);
            const double hi = std::max(p.s1, p.s2), lo = std::min(p.s1, p.s2);
            worst_zero = std::max({worst_zero, rel_err(g.s_b, hi + lo - hi / (1.0 + pr)),
                                   rel_err(g.s_a, hi + lo * pr / (1.0 + pr))});
        }
    }
    return {make("af_multisession",
                 std::to_string(sessions) + "-session recursion vs continuum limit (" + std::to_string(pairs) + " pairs)",
                 worst, 0.01, "max relative gap"),
            make("af_multisession", "I=0 continuum limit vs closed form", worst_zero, 1e-8, "max relative gap")};
}

std::vector<CheckResult> check_cf_reduction(int draws, std::uint64_t seed) {
    const double ps = 10.0;
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> ex(1.0);
    std::uniform_real_distribution<double> level(0.0, ps);
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
        const FadingPair p = sample_pair(seed, static_cast<std::uint64_t>(i));
        const double pr = 0.01 + 10.0 * ex(rng);
        const double ilevel = level(rng);
        const PowerAllocation flat("flat", ps, 0.0, numerics::kInfinity,
                                   [ilevel](double) { return LayerProfile{ilevel, 0.0}; });
        cf::CompressionState s = cf::CompressionState::initial(p);
        s.sigma2_1 = s.sigma2_2 = 1e12;
        const cf::CompressionState k1 = cf::multisession_step(s, p, flat, pr, pr);
        const double hi = std::max(p.s1, p.s2), lo = std::min(p.s1, p.s2);
        const double single = (1.0 + lo * ilevel + hi * ilevel) / (pr * (1.0 + hi * ilevel));
        // The weaker user's description, heard by the stronger one.
        const double got = p.s1 >= p.s2 ? k1.sigma2_2 : k1.sigma2_1;
        worst = std::max(worst, rel_err(got, single));
    }
    return {make("cf_multisession", "first refinement step vs single-session noise (" + std::to_string(draws) + " draws)",
                 worst, 1e-6, "max relative gap")};
}

std::vector<CheckResult> check_ordering(const std::vector<double>& ps_db, const std::vector<double>& ratio_db,
                                        const SampleConfig& sc) {
    std::vector<CheckResult> out;
    EvalOptions opts;
    opts.sampling = sc;
    const char* coop[] = {"af:naive",    "af:separate", "af:multisession", "cf:naive_nb",
                          "cf:naive_wb", "cf:separate", "cf:multisession", "df"};
    for (double pdb : ps_db) {
        for (double rdb : ratio_db) {
            const PowerConfig cfg = PowerConfig::from_db(pdb, pdb + rdb, CoopMode::narrow_band);
            const std::string at = " @ Ps=" + fmt("%g", pdb) + "dB, Pr/Ps=" + fmt("%g", rdb) + "dB";
            auto le = [&](const std::string& name, double a, double b, double slack) {
                // value = how far a exceeds b beyond the statistical slack
                // plus a relative floor so analytic ties do not fail on round-off
                slack += 1e-12 * std::abs(b);
                out.push_back(make("ordering", name + at, a - b - slack, 0.0,
                                   fmt("%.6g", a) + " vs " + fmt("%.6g", b)));
            };
            const double olb = outage_lb(cfg.ps), blb = broadcast_lb(cfg.ps);
            const double bub = broadcast_ub(cfg.ps), erg = ergodic_capacity(2, cfg.ps);
            le("outage_lb <= broadcast_lb", olb, blb, 0.0);
            le("broadcast_ub <= ergodic_2", bub, erg, 0.0);
            std::map<std::string, RatePoint> r;
            for (const char* name : coop) {
                RatePoint p;
                try {
                    p = evaluate(parse_strategy(name), cfg, opts);
                } catch (const std::exception& e) {
                    CheckResult c = make("ordering", std::string(name) + " evaluates" + at, 1.0, 0.0, e.what());
                    out.push_back(c);
                    continue;
                }
                const double slack = 3.0 * p.std_error.value_or(0.0);
                le("broadcast_lb <= " + std::string(name), blb, p.rate, slack);
                le(std::string(name) + " <= broadcast_ub", p.rate, bub, slack);
                r[name] = p;
            }
            if (r.count("af:naive") && r.count("af:separate"))
                le("af:naive <= af:separate", r["af:naive"].rate, r["af:separate"].rate, 0.0);
            if (r.count("af:naive") && r.count("cf:naive_nb"))
                le("af:naive <= cf:naive_nb", r["af:naive"].rate, r["cf:naive_nb"].rate, 0.0);
            if (pdb >= 40.0 && rdb == 0.0) {
                const PowerConfig wb{cfg.ps, cfg.pr, CoopMode::wide_band};
                const double d = df::df_avg_rate(alloc_selection_opt(cfg.ps), wb);
                const double ub = df_upper_bound(cfg.ps);
                out.push_back(make("ordering", "df wide band, sel alloc within 5% of df_ub" + at, 1.0 - d / ub, 0.05,
                                   fmt("%.6g", d) + " vs " + fmt("%.6g", ub)));
            }
        }
    }
    return out;
}

std::vector<CheckResult> check_limits(const SampleConfig& sc) {
    std::vector<CheckResult> out;
    const double ps = 10.0, tiny = 1e-5;
    const double blb = broadcast_lb(ps);
    const PowerConfig nb0{ps, tiny, CoopMode::narrow_band};
    const PowerConfig wb0{ps, tiny, CoopMode::wide_band};
    out.push_back(make("limits", "naive AF, Pr -> 0", std::abs(af::naive_rates(nb0).broadcast - blb), 1e-3));
    out.push_back(make("limits", "naive CF, Pr -> 0", std::abs(cf::naive_rates(nb0).broadcast - blb), 1e-3));
    out.push_back(make("limits", "separate AF one_step, Pr -> 0",
                       std::abs(af::sep_rate(nb0, af::SepStrategy::one_step).rate - blb), 1e-3));
    const PowerAllocation su = alloc_single_user_opt(ps);
    auto mc_limit = [&](const std::string& name, const MeanEstimate& m) {
        out.push_back(make("limits", name, std::abs(m.mean - blb) - 3.0 * m.std_error, 1e-6,
                           fmt("%.6g", m.mean) + " +- " + fmt("%.2g", m.std_error)));
    };
    mc_limit("multi-session AF, Pr -> 0 (su alloc)", af::multisession_rate(su, wb0, sc));
    mc_limit("separate CF, Pr -> 0 (su alloc)", cf::sep_rate(su, nb0, sc));
    mc_limit("multi-session CF, Pr -> 0 (su alloc)",
             cf::multisession_avg_rate(su, SessionSchedule::uniform(8, tiny), wb0, sc));
    out.push_back(make("limits", "DF, Pr = 0", std::abs(df::df_avg_rate(su, 0.0) - blb), 1e-6));

    const double bub = broadcast_ub(ps);
    out.push_back(make("limits", "naive CF wide band, Pr -> infinity",
                       std::abs(cf::naive_rates(PowerConfig{ps, 40.0, CoopMode::wide_band}).broadcast - bub), 1e-4));
    out.push_back(make("limits", "DF, infinite cooperation with sel alloc",
                       std::abs(df::df_avg_rate(alloc_selection_opt(ps), numerics::kInfinity) - df_upper_bound(ps)),
                       1e-6));
    return out;
}

Adjudication adjudicate_separate_cdf(const SampleConfig& sc) {
    Adjudication a;
    a.subject = "separate-preprocessing AF CDF integrand";
    const PowerConfig cfg{10.0, 10.0, CoopMode::narrow_band};
    const PowerAllocation joint = alloc_joint_opt(cfg.ps);
    const EmpiricalDistribution emp =
        empirical_distribution([&](const FadingPair& p) { return af::sep_gain(p, joint, cfg); }, sc);
    const double limit = ks_limit(sc.n_samples);
    for (af::SeparateCdfForm form : {af::SeparateCdfForm::two_sided, af::SeparateCdfForm::single_term}) {
        const double d = emp.ks_distance(af::sep_distribution(joint, cfg, form), sc.threads);
        a.candidates.emplace_back(af::to_string(form));
        a.passed.push_back(d < limit);
        a.evidence.push_back("KS " + fmt("%.4g", d) + " (limit " + fmt("%.3g", limit) + ", n=" +
                             std::to_string(sc.n_samples) + ")");
    }
    return a;
}

Adjudication adjudicate_z_kernel(int sessions, int pairs, std::uint64_t seed) {
    Adjudication a;
    a.subject = "multi-session AF Z integrand";
    const PowerConfig cfg{10.0, 10.0, CoopMode::wide_band};
    const PowerAllocation joint = alloc_joint_opt(cfg.ps);
    const PowerAllocation zero = PowerAllocation::zero(cfg.ps);
    const SessionSchedule schedule = SessionSchedule::uniform(sessions, cfg.pr);
    std::vector<af::SessionGains> finite;
    for (int i = 0; i < pairs; ++i)
        finite.push_back(af::discrete_sessions(sample_pair(seed, static_cast<std::uint64_t>(i)), joint, schedule));
    for (af::ZKernel kernel : {af::ZKernel::squared, af::ZKernel::linear}) {
        double zero_gap = 0.0, oracle_gap = 0.0;
        for (int i = 0; i < pairs; ++i) {
            const FadingPair p = sample_pair(seed, static_cast<std::uint64_t>(i));
            const af::MultisessionGain z = af::multisession_gain(p, zero, cfg, kernel);
            const double hi = std::max(p.s1, p.s2), lo = std::min(p.s1, p.s2);
            zero_gap = std::max(zero_gap, rel_err(z.s_a, hi + lo * cfg.pr / (1.0 + cfg.pr)));
            oracle_gap = std::max(oracle_gap, rel_err(af::multisession_gain(p, joint, cfg, kernel).s_a, finite[i].s_a));
        }
        a.candidates.emplace_back(af::to_string(kernel));
        a.passed.push_back(zero_gap <= 1e-8 && oracle_gap <= 0.01);
        a.evidence.push_back("I=0 identity gap " + fmt("%.3g", zero_gap) + " (limit 1e-8), " +
                             std::to_string(sessions) + "-session oracle gap " + fmt("%.3g", oracle_gap) +
                             " (limit 0.01)");
    }
    return a;
}

bool ValidationReport::passed() const {
    for (const CheckResult& c : checks)
        if (!c.passed) return false;
    for (const Adjudication& a : adjudications)
        if (!a.decided()) return false;
    return true;
}

std::string ValidationReport::text() const {
    std::ostringstream os;
    std::size_t failed = 0;
    for (const CheckResult& c : checks) {
        if (!c.passed) ++failed;
        os << (c.passed ? "[PASS] " : "[FAIL] ") << c.suite << ": " << c.name << "  value=" << fmt("%.4g", c.value)
           << " limit=" << fmt("%.4g", c.limit);
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << '\n';
    }
    for (const Adjudication& a : adjudications) {
        os << "Adjudication: " << a.subject << ": passed form = " << a.verdict() << '\n';
        for (std::size_t i = 0; i < a.candidates.size(); ++i)
            os << "  " << a.candidates[i] << ": " << (a.passed[i] ? "pass" : "fail") << ", " << a.evidence[i] << '\n';
    }
    os << (passed() ? "VALIDATION PASSED" : "VALIDATION FAILED") << " (" << checks.size() - failed << "/"
       << checks.size() << " checks)\n";
    return os.str();
}

ValidationReport run_validation(const ValidationOptions& opts) {
    const bool full = opts.level == ValidationLevel::full;
    SampleConfig sc;
    sc.n_samples = full ? 100000 : 10000;
    sc.master_seed = opts.seed;
    sc.threads = opts.threads;

    ValidationReport r;
    auto add = [&](std::vector<CheckResult> v) { r.checks.insert(r.checks.end(), v.begin(), v.end()); };
    add(check_closed_form_consistency());
    add(check_outage_threshold());
    add(check_ergodic_identity());
    add(check_distributions(sc));
    add(check_limits(sc));
    add(check_af_continuum(1000, full ? 100 : 20, opts.seed));
    add(check_cf_reduction(1000, opts.seed));
    add(check_ordering(full ? std::vector<double>{10.0, 20.0, 40.0} : std::vector<double>{10.0}, {-6.0, 0.0}, sc));
    r.adjudications.push_back(adjudicate_separate_cdf(sc));
    r.adjudications.push_back(adjudicate_z_kernel(1000, full ? 100 : 20, opts.seed));
    return r;
}

}  // namespace relaylab
