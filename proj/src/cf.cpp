#include "relaylab/cf.hpp"

#include "relaylab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace relaylab::cf {

double link_snr(const PowerConfig& cfg) {
    return cfg.mode == CoopMode::wide_band ? std::expm1(cfg.pr) : cfg.pr;
}

double naive_sigma2(double s_helper, double s_dest, const PowerConfig& cfg) {
    return (1.0 + (s_helper + s_dest) * cfg.ps) / (link_snr(cfg) * (1.0 + s_dest * cfg.ps));
}

double naive_sigma2(const FadingPair& pair, const PowerConfig& cfg) { return naive_sigma2(pair.s2, pair.s1, cfg); }

double naive_gain(const FadingPair& pair, const PowerConfig& cfg) {
    const double c = link_snr(cfg);
    if (std::isinf(c)) return pair.s1 + pair.s2;
    const double a = 1.0 + pair.s1 * cfg.ps;
    // s2/(1 + sigma^2) rewritten without the sigma^2 division (finite at c = 0).
    return pair.s1 + pair.s2 * c * a / ((1.0 + c) * a + pair.s2 * cfg.ps);
}

namespace {

// With the destination gain v integrated out, the conditional exponent -v - h(v) is a
// ratio of linear functions of v. Substituting w = (c - uP) + vP(1 + c) leaves
// ∫ e^{-K/w} dw, which integrates to E1 terms; u-derivatives follow by Leibniz' rule.
struct NaiveLaw {
    double p;  // Ps
    double c;  // link SNR

    DensityPoint at(double u) const {
        if (u <= 0.0) return {0.0, 1.0, 0.0, 0.0};
        if (std::isinf(u)) return {1.0, 0.0, 0.0, 0.0};
        using numerics::scaled_exp_integral_e1;
        const double q = p * (1.0 + c);
        const double g = 1.0 + u * p;
        const double k = c * g * g / q;
        const double kp = 2.0 * c * g / (1.0 + c);
        const double kpp = 2.0 * c * p / (1.0 + c);
        const double ap = c / (1.0 + c);
        const double wh = c * g;
        const double whp = c * p;
        const double alpha = g / q;
        const double ea = std::exp(-u);  // e^{-a - alpha}

        // Lower limit: w = c - uP while positive, else 0 (where every term vanishes).
        double eb = 0.0, wl = 1.0, wlp = 0.0, beta = numerics::kInfinity;
        if (c - u * p > 0.0) {
            wl = c - u * p;
            wlp = -p;
            beta = k / wl;
            eb = std::exp(-u * (1.0 + c) / wl);  // e^{-a - beta}
        }
        const double sa = scaled_exp_integral_e1(alpha);
        const double sb = eb > 0.0 ? scaled_exp_integral_e1(beta) : 0.0;

        // Everything below carries the common factor e^{-a}, a = (c u P - 1)/q.
        const double m = k * (ea * (1.0 / alpha - sa) - (eb > 0.0 ? eb * (1.0 / beta - sb) : 0.0));
        const double n = ea * sa - eb * sb;
        const double r = (ea - eb) / k;
        const double mp = ea * whp - eb * wlp - kp * n;
        const double np = ea * whp / wh - eb * wlp / wl - kp * r;
        const double mpp = ea * whp * (-kp / wh + k * whp / (wh * wh)) -
                           eb * wlp * (-kp / wl + k * wlp / (wl * wl)) - kpp * n - kp * np;

        const double e0 = m / q;
        const double e1 = (mp - ap * m) / q;
        const double e2 = (mpp - 2.0 * ap * mp + ap * ap * m) / q;
        DensityPoint d;
        d.cdf = -std::expm1(-u) - e0;
        d.survival = ea + e0;
        d.pdf = ea - e1;
        d.pdf_derivative = -ea - e2;
        return d;
    }
};

}  // namespace

DistributionModel naive_distribution(const PowerConfig& cfg) {
    cfg.validate();
    const double c = link_snr(cfg);
    if (c == 0.0) return rayleigh_distribution();
    if (std::isinf(c)) return joint_ub_distribution();
    const NaiveLaw law{cfg.ps, c};
    DistributionModel::Functions fns;
    fns.cdf = [law](double u) { return law.at(u).cdf; };
    fns.survival = [law](double u) { return law.at(u).survival; };
    fns.pdf = [law](double u) { return law.at(u).pdf; };
    fns.pdf_derivative = [law](double u) { return law.at(u).pdf_derivative; };
    fns.point = [law](double u) { return law.at(u); };
    return DistributionModel(cfg.mode == CoopMode::wide_band ? "naive_cf_wb" : "naive_cf_nb", std::move(fns),
                             {c / cfg.ps});
}

double naive_cdf_quadrature(double u, const PowerConfig& cfg) {
    if (u <= 0.0) return 0.0;
    const double c = link_snr(cfg);
    const double p = cfg.ps;
    const double lo = std::max(0.0, (u * p - c) / (p * (1.0 + c)));
    numerics::QuadratureOptions q;
    q.abs_tol = 1e-13;
    const double tail = numerics::integrate(
        [&](double v) {
            const double den = c * (1.0 + v * p) - (u - v) * p;
            if (!(den > 0.0)) return 0.0;
            const double h = (u - v) * (1.0 + c) * (1.0 + v * p) / den;
            return std::exp(-v - h);
        },
        lo, u, q);
    return -std::expm1(-u) - tail;
}

NaiveRates naive_rates(const PowerConfig& cfg) {
    const DistributionModel dist = naive_distribution(cfg);
    NaiveRates out;
    out.outage = outage_rate(dist, cfg.ps);
    out.alloc = optimal_allocation(dist, cfg.ps, link_snr(cfg) == 0.0 ? "su" : "nwz");
    out.broadcast = broadcast_rate_closed(dist, out.alloc);
    return out;
}

double sep_gain(const FadingPair& pair, const PowerAllocation& alloc, const PowerConfig& cfg) {
    const double c = link_snr(cfg);
    if (std::isinf(c)) return pair.s1 + pair.s2;
    const double hi = std::max(pair.s1, pair.s2), lo = std::min(pair.s1, pair.s2);
    const double i = alloc.interference(lo);
    const double a = 1.0 + hi * i;
    return hi + lo * c * a / ((1.0 + c) * a + lo * i);
}

// ---------------------------------------------------------------------------

CompressionState CompressionState::initial(const FadingPair& pair) {
    CompressionState s;
    s.common = std::min(pair.s1, pair.s2);
    s.gain_1 = pair.s1;
    s.gain_2 = pair.s2;
    return s;
}

namespace {

// Successive refinement of one description: the new noise keeps the ratio of the
// conditional information terms equal to 1 + delta.
double refine(double sigma2, double s_own, double s_other, double i, double delta) {
    if (std::isinf(delta)) return 0.0;
    const double num = 1.0 + (s_own + s_other) * i;
    if (std::isinf(sigma2)) return delta > 0.0 ? num / (delta * (1.0 + s_other * i)) : sigma2;
    const double den = (1.0 + s_other * i) * (1.0 + delta * (1.0 + sigma2)) + s_own * i * (1.0 + delta);
    return sigma2 * num / den;
}

}  // namespace

CompressionState multisession_step(const CompressionState& state, const FadingPair& pair,
                                   const PowerAllocation& alloc, double delta1, double delta2) {
    if (!(delta1 >= 0.0) || !(delta2 >= 0.0)) throw ConfigError("session powers must be nonnegative");
    const double i = alloc.interference(state.common);
    CompressionState next = state;
    next.sigma2_1 = refine(state.sigma2_1, pair.s1, pair.s2, i, delta1);
    next.sigma2_2 = refine(state.sigma2_2, pair.s2, pair.s1, i, delta2);
    next.session = state.session + 1;
    next.gain_1 = pair.s1 + pair.s2 / (1.0 + next.sigma2_2);
    next.gain_2 = pair.s2 + pair.s1 / (1.0 + next.sigma2_1);
    next.common = std::min(next.gain_1, next.gain_2);
    return next;
}

namespace {

double session_snr(double power, CoopMode mode) {
    return mode == CoopMode::wide_band ? std::expm1(power) : power;
}

}  // namespace

std::vector<SessionRecord> multisession_run(const FadingPair& pair, const PowerAllocation& alloc,
                                            const SessionSchedule& schedule, const PowerConfig& cfg) {
    std::vector<SessionRecord> out;
    out.reserve(schedule.size());
    CompressionState state = CompressionState::initial(pair);
    const bool first_stronger = pair.s1 >= pair.s2;
    for (double power : schedule.deltas) {
        const double delta = session_snr(power, cfg.mode);
        state = multisession_step(state, pair, alloc, delta, delta);
        SessionRecord r;
        r.s_a = first_stronger ? state.gain_1 : state.gain_2;
        r.s_b = first_stronger ? state.gain_2 : state.gain_1;
        r.rate_a = std::log1p(r.s_a * cfg.ps);
        r.rate_b = std::log1p(r.s_b * cfg.ps);
        out.push_back(r);
    }
    return out;
}

double multisession_gain(const FadingPair& pair, const PowerAllocation& alloc, const SessionSchedule& schedule,
                         const PowerConfig& cfg) {
    CompressionState state = CompressionState::initial(pair);
    for (double power : schedule.deltas) {
        const double delta = session_snr(power, cfg.mode);
        state = multisession_step(state, pair, alloc, delta, delta);
    }
    return state.gain_1;
}

MeanEstimate sep_rate(const PowerAllocation& alloc, const PowerConfig& cfg, const SampleConfig& sc) {
    cfg.validate();
    const LayeredRateTable rate(alloc);
    const double c = link_snr(cfg);
    return mc_expectation(sc, [&](const FadingPair& p) {
        return rate(multisession_step(CompressionState::initial(p), p, alloc, c, c).gain_1);
    });
}

MeanEstimate multisession_avg_rate(const PowerAllocation& alloc, const SessionSchedule& schedule,
                                   const PowerConfig& cfg, const SampleConfig& sc) {
    cfg.validate();
    if (cfg.mode != CoopMode::wide_band)
        throw ConfigError("multi-session cooperation needs the wide-band link model");
    const LayeredRateTable rate(alloc);
    return mc_expectation(sc, [&](const FadingPair& p) { return rate(multisession_gain(p, alloc, schedule, cfg)); });
}

}  // namespace relaylab::cf
