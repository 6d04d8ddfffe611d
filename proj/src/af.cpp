#include "relaylab/af.hpp"

#include "relaylab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace relaylab {

SessionSchedule SessionSchedule::uniform(int sessions, double total) {
    if (sessions < 1) throw ConfigError("session count must be positive");
    if (!(total >= 0.0)) throw ConfigError("session budget must be nonnegative");
    return {std::vector<double>(static_cast<std::size_t>(sessions), total / sessions)};
}

SessionSchedule SessionSchedule::geometric(int sessions, double total, double q) {
    if (sessions < 1) throw ConfigError("session count must be positive");
    if (!(total >= 0.0)) throw ConfigError("session budget must be nonnegative");
    if (!(q > 0.0)) throw ConfigError("geometric ratio must be positive");
    std::vector<double> d(static_cast<std::size_t>(sessions));
    double w = 1.0, sum = 0.0;
    for (double& x : d) {
        x = w;
        sum += w;
        w *= q;
    }
    for (double& x : d) x *= total / sum;
    return {std::move(d)};
}

double SessionSchedule::total() const {
    double t = 0.0;
    for (double d : deltas) t += d;
    return t;
}

}  // namespace relaylab

namespace relaylab::af {

namespace {

constexpr double kInf = numerics::kInfinity;

numerics::QuadratureOptions law_quadrature() {
    numerics::QuadratureOptions q;
    q.abs_tol = 1e-13;
    q.rel_tol = 1e-11;
    return q;
}

void require_pr(const PowerConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(cfg.pr)) throw ConfigError("relay power must be finite for this law");
}

// ---------------------------------------------------------------------------
// Naive AF: s1 + beta(s2), beta(v) = Pr v/(1 + Ps v + Pr).

struct NaiveLaw {
    double ps, pr;

    double beta(double v) const { return pr * v / (1.0 + ps * v + pr); }

    // Largest s2 that keeps the gain below x (infinite beyond the branch point Pr/Ps).
    double v_max(double x) const {
        const double den = pr - ps * x;
        return den > 0.0 ? (1.0 + pr) * x / den : kInf;
    }

    // J(x) = ∫_0^{v_max} e^{-v - x + beta(v)} dv; the integrand never exceeds e^{-v}.
    double j(double x, double vmax) const {
        if (vmax == 0.0) return 0.0;
        std::vector<double> pts{0.0};
        for (double b = 0.5; b < std::min(vmax, 64.0); b *= 2.0) pts.push_back(b);
        pts.push_back(vmax);
        return numerics::integrate([&](double v) { return std::exp(-v - x + beta(v)); }, pts, law_quadrature());
    }

    DensityPoint at(double x) const {
        if (x <= 0.0) return {0.0, 1.0, 0.0, (1.0 + pr) / pr};
        const double vmax = v_max(x);
        const double jx = j(x, vmax);
        const double ev = std::exp(-vmax);
        DensityPoint d;
        d.cdf = -std::expm1(-vmax) - jx;
        d.survival = ev + jx;
        d.pdf = jx;
        const double den = pr - ps * x;
        d.pdf_derivative = (ev > 0.0 ? ev * (1.0 + pr) * pr / (den * den) : 0.0) - jx;
        return d;
    }
};

}  // namespace

double naive_gain(const FadingPair& pair, const PowerConfig& cfg) {
    return pair.s1 + cfg.pr * pair.s2 / (1.0 + cfg.ps * pair.s2 + cfg.pr);
}

DistributionModel naive_distribution(const PowerConfig& cfg) {
    require_pr(cfg);
    if (cfg.pr == 0.0) return rayleigh_distribution();
    const NaiveLaw law{cfg.ps, cfg.pr};
    DistributionModel::Functions fns;
    fns.cdf = [law](double x) {
        const double vmax = law.v_max(x);
        return -std::expm1(-vmax) - law.j(x, vmax);
    };
    fns.survival = [law](double x) {
        const double vmax = law.v_max(x);
        return std::exp(-vmax) + law.j(x, vmax);
    };
    fns.pdf = [law](double x) { return x <= 0.0 ? 0.0 : law.j(x, law.v_max(x)); };
    fns.pdf_derivative = [law](double x) { return law.at(x).pdf_derivative; };
    fns.point = [law](double x) { return law.at(x); };
    return DistributionModel("naive_af", std::move(fns), {cfg.pr / cfg.ps});
}

NaiveRates naive_rates(const PowerConfig& cfg) {
    const DistributionModel dist = naive_distribution(cfg);
    NaiveRates out;
    out.outage = outage_rate(dist, cfg.ps);
    out.alloc = optimal_allocation(dist, cfg.ps, cfg.pr == 0.0 ? "su" : "naf");
    out.broadcast = broadcast_rate_closed(dist, out.alloc);
    return out;
}

// ---------------------------------------------------------------------------
// Separate preprocessing.

double sep_gain(const FadingPair& pair, const PowerAllocation& alloc, const PowerConfig& cfg) {
    const double i = std::max(alloc.interference(pair.s1), alloc.interference(pair.s2));
    return pair.s1 + cfg.pr * pair.s2 / (1.0 + pair.s2 * i + cfg.pr);
}

std::string_view to_string(SeparateCdfForm form) {
    return form == SeparateCdfForm::two_sided ? "two_sided" : "single_term";
}

namespace {

// Conditioning on u = min(s1, s2): when s2 = u is the weaker, the gain is s1 + psi(u);
// when s1 = u is the weaker, s2 must stay below phi4(u). Both need u <= U = phi1^{-1}(x).
struct SeparateLaw {
    PowerAllocation alloc;
    double pr;
    std::vector<double> breaks;

    double psi(double u, double i) const { return u * pr / (1.0 + u * i + pr); }
    double phi1(double u) const { return u + psi(u, alloc.interference(u)); }

    double upper(double x) const {
        if (x <= 0.0) return 0.0;
        const double lo = x * (1.0 + pr) / (1.0 + 2.0 * pr);
        if (!(lo < x)) return x;
        // Above x1 nothing is left to subtract and phi1 is linear, so lo is already the root.
        if (phi1(lo) >= x) return lo;
        return numerics::find_root([&](double u) { return phi1(u) - x; }, {lo, x}, 1e-15 * x);
    }

    std::vector<double> splits(double top, double /*x*/) const {
        std::vector<double> pts{0.0};
        for (double p : {alloc.x0(), alloc.x1()})
            if (p > 0.0 && p < top) pts.push_back(p);
        pts.push_back(top);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    }

    struct Terms {
        double e1 = 0.0;  // e^{-u - x + psi}
        double e4 = 0.0;  // e^{-u - phi4}
        double d = 0.0;   // d phi4/dx
        double dd = 0.0;  // d^2 phi4/dx^2
    };

    Terms terms(double u, double x) const {
        const double i = alloc.interference(u);
        Terms t;
        t.e1 = std::exp(-u - x + psi(u, i));
        const double gap = x - u;
        const double den = pr - i * gap;
        if (den > 0.0) {
            const double phi4 = (1.0 + pr) * gap / den;
            t.e4 = std::exp(-u - phi4);
            if (t.e4 > 0.0) {
                t.d = (1.0 + pr) * pr / (den * den);
                t.dd = 2.0 * t.d * i / den;
            }
        }
        return t;
    }

    // ∫_0^U (e1 + e4): the mass of {u <= U} that still exceeds x.
    double tail(double x, double top) const {
        if (top <= 0.0) return 0.0;
        return numerics::integrate(
            [&](double u) {
                const Terms t = terms(u, x);
                return t.e1 + t.e4;
            },
            splits(top, x), law_quadrature());
    }

    double density(double x) const {
        if (x <= 0.0) return 0.0;
        const double top = upper(x);
        return numerics::integrate(
            [&](double u) {
                const Terms t = terms(u, x);
                return t.e1 + t.e4 * t.d;
            },
            splits(top, x), law_quadrature());
    }

    DensityPoint at(double x) const {
        if (x <= 0.0) return {0.0, 1.0, 0.0, 0.0};
        const double top = upper(x);
        const auto pts = splits(top, x);
        const double k = tail(x, top);
        const double pdf = numerics::integrate(
            [&](double u) {
                const Terms t = terms(u, x);
                return t.e1 + t.e4 * t.d;
            },
            pts, law_quadrature());
        DensityPoint d;
        d.cdf = -std::expm1(-2.0 * top) - k;
        d.survival = std::exp(-2.0 * top) + k;
        d.pdf = pdf;
        try {
            const double inner = numerics::integrate(
                [&](double u) {
                    const Terms t = terms(u, x);
                    return -t.e1 + t.e4 * (t.dd - t.d * t.d);
                },
                pts, law_quadrature());
            const LayerProfile p = alloc.profile(top);
            const double q = 1.0 + top * p.interference + pr;
            const double edge = std::exp(-2.0 * top) * (1.0 + q * q / (pr * (1.0 + pr)));
            const double dtop = 1.0 / (1.0 + pr * (1.0 + pr + top * top * p.density) / (q * q));
            d.pdf_derivative = edge * dtop + inner;
        } catch (const IntegrationError&) {
            // For tiny Pr the e4 (d' - d^2) peak cancels below roundoff; difference the density instead.
            d.pdf_derivative = numeric_derivative([this](double t) { return density(t); }, x, breaks);
        }
        return d;
    }
};

}  // namespace

DistributionModel sep_distribution(const PowerAllocation& alloc, const PowerConfig& cfg, SeparateCdfForm form) {
    require_pr(cfg);
    if (cfg.pr == 0.0) return rayleigh_distribution();
    SeparateLaw law{alloc, cfg.pr, {}};
    std::vector<double> breaks;
    for (double p : {alloc.x0(), alloc.x1()})
        if (p > 0.0 && std::isfinite(p)) breaks.push_back(law.phi1(p));
    breaks.push_back(cfg.pr / cfg.ps);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    law.breaks = breaks;

    DistributionModel::Functions fns;
    if (form == SeparateCdfForm::single_term) {
        // Only the cdf exists in this form; the rest is differenced numerically.
        fns.cdf = [law](double x) {
            const double top = law.upper(x);
            return -0.5 * std::expm1(-2.0 * top) - law.tail(x, top);
        };
        return DistributionModel("sep_af_single_term", std::move(fns), std::move(breaks));
    }
    fns.cdf = [law](double x) {
        const double top = law.upper(x);
        return -std::expm1(-2.0 * top) - law.tail(x, top);
    };
    fns.survival = [law](double x) {
        const double top = law.upper(x);
        return std::exp(-2.0 * top) + law.tail(x, top);
    };
    fns.pdf = [law](double x) { return law.at(x).pdf; };
    fns.pdf_derivative = [law](double x) { return law.at(x).pdf_derivative; };
    fns.point = [law](double x) { return law.at(x); };
    return DistributionModel("sep_af", std::move(fns), std::move(breaks));
}

SepRateResult sep_rate(const PowerConfig& cfg, SepStrategy strategy) {
    require_pr(cfg);
    SepRateResult out;
    if (cfg.pr == 0.0) {
        out.alloc = alloc_single_user_opt(cfg.ps);
        out.rate = broadcast_rate(rayleigh_distribution(), out.alloc);
        out.relaxed_rate = out.rate;
        return out;
    }

    out.alloc = naive_rates(cfg).alloc;
    DistributionModel law = sep_distribution(out.alloc, cfg);
    out.rate = broadcast_rate(law, out.alloc);
    out.iterations = 1;

    if (strategy == SepStrategy::one_step) {
        try {
            out.relaxed_rate = broadcast_rate_closed(law, optimal_allocation(law, cfg.ps, "sep"));
        } catch (const NumericalError& e) {
            out.relaxed_rate = std::nan("");
            out.warnings.push_back(std::string("relaxed rate unavailable: ") + e.what());
        }
        return out;
    }

    constexpr int kMaxIterations = 20;
    constexpr double kRateTol = 1e-5;
    double previous = out.rate;
    out.converged = false;
    for (int k = 2; k <= kMaxIterations; ++k) {
        PowerAllocation next;
        double rate = 0.0;
        try {
            next = optimal_allocation(law, cfg.ps, "sep_iter");
            out.relaxed_rate = broadcast_rate_closed(law, next);
            law = sep_distribution(next, cfg);
            rate = broadcast_rate(law, next);
        } catch (const NumericalError& e) {
            out.warnings.push_back(std::string("iteration stopped: ") + e.what());
            break;
        }
        out.iterations = k;
        if (rate > out.rate) {
            out.rate = rate;
            out.alloc = next;
        }
        if (std::abs(rate - previous) < kRateTol) {
            out.converged = true;
            break;
        }
        previous = rate;
    }
    if (!out.converged)
        out.warnings.push_back("iterative allocation did not settle; returning the best iterate");
    return out;
}

// ---------------------------------------------------------------------------
// Multi-session AF.

std::string_view to_string(ZKernel kernel) { return kernel == ZKernel::squared ? "squared" : "linear"; }

MultisessionGain multisession_gain(const FadingPair& pair, const PowerAllocation& alloc, const PowerConfig& cfg,
                                   ZKernel kernel) {
    cfg.validate();
    if (cfg.mode != CoopMode::wide_band)
        throw ConfigError("multi-session cooperation needs the wide-band link model");
    const double s_max = std::max(pair.s1, pair.s2);
    const double s_min = std::min(pair.s1, pair.s2);
    const double total = s_max + s_min;
    MultisessionGain out;
    if (std::isinf(cfg.pr)) {
        out.s_a = out.s_b = out.destination = total;
        out.saturated = true;
        return out;
    }
    if (s_max == 0.0) return out;

    // With w = 1/(S - sigma) the budget equation reads F(W) = ∫_{1/s_max}^W (1 + s_max I) dw = Pr/s_max.
    // F is increasing and concave, so Newton started from the left approaches W monotonically.
    auto interference = [&](double w) { return alloc.interference(total - 1.0 / w); };
    auto slope = [&](double w) { return 1.0 + s_max * interference(w); };
    auto z_element = [&](double w) {
        const double i = interference(w);
        const double ratio = (1.0 + s_max * i) / (1.0 + s_min * i);
        return kernel == ZKernel::squared ? s_max * ratio : ratio / w;
    };
    std::vector<double> kinks;
    for (double x : {alloc.x0(), alloc.x1()})
        if (x > s_min && x < total) kinks.push_back(1.0 / (total - x));
    auto piece = [&](auto&& g, double a, double b) {
        std::vector<double> pts{a};
        for (double k : kinks)
            if (k > a && k < b) pts.push_back(k);
        pts.push_back(b);
        numerics::QuadratureOptions q;
        q.abs_tol = 1e-14;
        q.rel_tol = 1e-12;
        try {
            return numerics::integrate(g, pts, q);
        } catch (const IntegrationError&) {
            // Steep interference edges at high SNR can stall the tight tolerance.
            q.abs_tol = 1e-11;
            q.rel_tol = 1e-9;
            q.max_intervals = 20000;
            return numerics::integrate(g, pts, q);
        }
    };

    const double target = cfg.pr / s_max;
    double w = 1.0 / s_max;
    double f = 0.0, z = 0.0;
    for (int iter = 0; iter < 200 && target - f > 1e-12 * target; ++iter) {
        const double step = (target - f) / slope(w);
        const double next = w + step;
        f += piece(slope, w, next);
        z += piece(z_element, w, next);
        w = next;
    }
    if (target - f > 1e-9 * target)
        throw NumericalError("multisession_gain: budget equation did not converge");

    out.s_b = total - 1.0 / w;
    out.s_a = s_max + s_min * z / (1.0 + z);
    out.destination = pair.s1 >= pair.s2 ? out.s_a : out.s_b;
    return out;
}

SessionGains discrete_sessions(const FadingPair& pair, const PowerAllocation& alloc, const SessionSchedule& schedule,
                               std::vector<SessionGains>* trace) {
    const double s_max = std::max(pair.s1, pair.s2);
    const double s_min = std::min(pair.s1, pair.s2);
    const double total = s_max + s_min;
    double a = 0.0, b = 0.0;  // running sums of delta/(1 + I s_max) and delta/(1 + I s_min)
    SessionGains g{s_max, s_min};
    if (trace) trace->clear();
    for (double delta : schedule.deltas) {
        if (delta < 0.0) throw ConfigError("session powers must be nonnegative");
        // s_b of this session depends on the layer it decodes through I(s_b); the map is
        // nondecreasing in t, so iterating from the previous s_b climbs to the fixed point.
        auto image = [&](double t) {
            const double aa = a + delta / (1.0 + alloc.interference(t) * s_max);
            return s_min + s_max * aa / (1.0 + aa);
        };
        double t = g.s_b;
        bool settled = false;
        for (int it = 0; it < 100; ++it) {
            const double next = image(t);
            if (std::abs(next - t) <= 1e-10 * std::max(1.0, t)) {
                t = next;
                settled = true;
                break;
            }
            t = next;
        }
        if (!settled) {
            try {
                t = numerics::find_root([&](double x) { return image(x) - x; }, {g.s_b, total}, 1e-13 * total);
            } catch (const BracketError&) {
                throw NumericalError("discrete_sessions: per-session fixed point not found");
            }
        }
        const double i = alloc.interference(t);
        a += delta / (1.0 + i * s_max);
        b += delta / (1.0 + i * s_min);
        g.s_b = s_min + s_max * a / (1.0 + a);
        g.s_a = s_max + s_min * b / (1.0 + b);
        if (trace) trace->push_back(g);
    }
    return g;
}

MeanEstimate multisession_rate(const PowerAllocation& alloc, const PowerConfig& cfg, const SampleConfig& sc) {
    if (cfg.mode != CoopMode::wide_band)
        throw ConfigError("multi-session cooperation needs the wide-band link model");
    const LayeredRateTable rate(alloc);
    return mc_expectation(sc, [&](const FadingPair& p) { return rate(multisession_gain(p, alloc, cfg).destination); });
}

double multisession_rate_quadrature(const PowerAllocation& alloc, const PowerConfig& cfg, double tol) {
    if (cfg.mode != CoopMode::wide_band)
        throw ConfigError("multi-session cooperation needs the wide-band link model");
    const LayeredRateTable rate(alloc);
    numerics::QuadratureOptions inner;
    inner.abs_tol = 0.1 * tol;
    numerics::QuadratureOptions outer;
    outer.abs_tol = tol;
    return numerics::integrate(
        [&](double s1) {
            const double pts[] = {0.0, s1, kInf};
            const double v = numerics::integrate(
                [&](double s2) { return std::exp(-s2) * rate(multisession_gain({s1, s2}, alloc, cfg).destination); },
                s1 > 0.0 ? std::span<const double>(pts) : std::span<const double>(pts + 1, 2), inner);
            return std::exp(-s1) * v;
        },
        0.0, kInf, outer);
}

}  // namespace relaylab::af
