#include "relaylab/fading.hpp"

#include "relaylab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace relaylab {

std::string_view to_string(CoopMode mode) {
    return mode == CoopMode::narrow_band ? "narrow_band" : "wide_band";
}

CoopMode parse_coop_mode(std::string_view text) {
    if (text == "narrow_band" || text == "nb") return CoopMode::narrow_band;
    if (text == "wide_band" || text == "wb") return CoopMode::wide_band;
    throw ConfigError("unknown coop mode '" + std::string(text) + "' (expected narrow_band or wide_band)");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

PowerConfig PowerConfig::from_db(double ps_db, double pr_db, CoopMode mode) {
    PowerConfig cfg{db_to_linear(ps_db), db_to_linear(pr_db), mode};
    cfg.validate();
    return cfg;
}

double PowerConfig::coop_capacity() const {
    return mode == CoopMode::narrow_band ? std::log1p(pr) : pr;
}

void PowerConfig::validate() const {
    if (!(ps > 0.0) || !std::isfinite(ps)) throw ConfigError("Ps must be positive and finite");
    if (!(pr >= 0.0)) throw ConfigError("Pr must be nonnegative");
}

// ---------------------------------------------------------------------------

double numeric_derivative(const RealFunction& g, double x, const std::vector<double>& breakpoints) {
    auto crosses = [&](double a, double b) {
        return std::any_of(breakpoints.begin(), breakpoints.end(), [&](double p) { return p > a && p < b; });
    };
    double h = std::max(1e-4, 1e-3 * x);
    for (int attempt = 0; attempt < 30; ++attempt, h *= 0.5) {
        if (x - h >= 0.0 && !crosses(x - h, x + h))
            return (g(x + h) - g(x - h)) / (2.0 * h);
        if (!crosses(x, x + 2.0 * h))
            return (-3.0 * g(x) + 4.0 * g(x + h) - g(x + 2.0 * h)) / (2.0 * h);
        if (x - 2.0 * h >= 0.0 && !crosses(x - 2.0 * h, x))
            return (3.0 * g(x) - 4.0 * g(x - h) + g(x - 2.0 * h)) / (2.0 * h);
    }
    return (g(x + h) - g(x)) / h;
}

DistributionModel::DistributionModel(std::string name, Functions fns, std::vector<double> breakpoints)
    : name_(std::move(name)) {
    if (!fns.cdf) throw std::invalid_argument("DistributionModel: cdf is required");
    std::sort(breakpoints.begin(), breakpoints.end());
    auto breaks = std::make_shared<const std::vector<double>>(std::move(breakpoints));
    if (!fns.survival) {
        fns.survival = [cdf = fns.cdf](double x) { return 1.0 - cdf(x); };
    }
    if (!fns.pdf) {
        fns.pdf = [cdf = fns.cdf, breaks](double x) { return numeric_derivative(cdf, x, *breaks); };
    }
    if (!fns.pdf_derivative) {
        fns.pdf_derivative = [pdf = fns.pdf, breaks](double x) { return numeric_derivative(pdf, x, *breaks); };
    }
    if (!fns.point) {
        fns.point = [cdf = fns.cdf, sf = fns.survival, pdf = fns.pdf, dpdf = fns.pdf_derivative](double x) {
            return DensityPoint{cdf(x), sf(x), pdf(x), dpdf(x)};
        };
    }
    fns_ = std::make_shared<const Functions>(std::move(fns));
    breaks_ = std::move(breaks);
}

double DistributionModel::cdf(double x) const { return x <= 0.0 ? 0.0 : fns_->cdf(x); }
double DistributionModel::survival(double x) const { return x <= 0.0 ? 1.0 : fns_->survival(x); }
double DistributionModel::pdf(double x) const { return x < 0.0 ? 0.0 : fns_->pdf(x); }
double DistributionModel::pdf_derivative(double x) const { return x < 0.0 ? 0.0 : fns_->pdf_derivative(x); }
DensityPoint DistributionModel::at(double x) const {
    if (x < 0.0) return {};
    return fns_->point(x);
}

// ---------------------------------------------------------------------------

namespace {

void require_gain(double u) {
    if (!(u >= 0.0)) throw std::domain_error("fading gain must be nonnegative");
}

}  // namespace

double rayleigh_cdf(double u) {
    require_gain(u);
    return -std::expm1(-u);
}

double joint_ub_cdf(double u) {
    require_gain(u);
    if (std::isinf(u)) return 1.0;
    return -std::expm1(-u) - u * std::exp(-u);
}

double strongest_cdf(double u) {
    const double f = rayleigh_cdf(u);
    return f * f;
}

DistributionModel rayleigh_distribution() {
    DistributionModel::Functions fns;
    fns.cdf = [](double u) { return -std::expm1(-u); };
    fns.survival = [](double u) { return std::exp(-u); };
    fns.pdf = [](double u) { return std::exp(-u); };
    fns.pdf_derivative = [](double u) { return -std::exp(-u); };
    fns.point = [](double u) {
        const double e = std::exp(-u);
        return DensityPoint{-std::expm1(-u), e, e, -e};
    };
    return DistributionModel("rayleigh", std::move(fns));
}

DistributionModel joint_ub_distribution() {
    DistributionModel::Functions fns;
    fns.cdf = [](double u) { return joint_ub_cdf(u); };
    fns.survival = [](double u) { return std::isinf(u) ? 0.0 : (1.0 + u) * std::exp(-u); };
    fns.pdf = [](double u) { return std::isinf(u) ? 0.0 : u * std::exp(-u); };
    fns.pdf_derivative = [](double u) { return std::isinf(u) ? 0.0 : (1.0 - u) * std::exp(-u); };
    fns.point = [](double u) {
        if (std::isinf(u)) return DensityPoint{1.0, 0.0, 0.0, 0.0};
        const double e = std::exp(-u);
        return DensityPoint{-std::expm1(-u) - u * e, (1.0 + u) * e, u * e, (1.0 - u) * e};
    };
    return DistributionModel("joint_ub", std::move(fns));
}

DistributionModel strongest_distribution() {
    DistributionModel::Functions fns;
    fns.cdf = [](double u) { return strongest_cdf(u); };
    fns.survival = [](double u) {
        const double e = std::exp(-u);
        return e * (2.0 - e);
    };
    fns.pdf = [](double u) { return -2.0 * std::expm1(-u) * std::exp(-u); };
    fns.pdf_derivative = [](double u) {
        const double e = std::exp(-u);
        return 2.0 * e * (2.0 * e - 1.0);
    };
    fns.point = [](double u) {
        const double e = std::exp(-u);
        const double f = -std::expm1(-u);
        return DensityPoint{f * f, e * (2.0 - e), 2.0 * f * e, 2.0 * e * (2.0 * e - 1.0)};
    };
    return DistributionModel("strongest", std::move(fns));
}

// ---------------------------------------------------------------------------

PowerAllocation::PowerAllocation(std::string name, double ps, double x0, double x1, Profile interior)
    : name_(std::move(name)), ps_(ps), x0_(x0), x1_(x1),
      interior_(std::make_shared<const Profile>(std::move(interior))) {
    if (!(ps > 0.0)) throw ConfigError("allocation power must be positive");
    if (!(x0 <= x1)) throw std::invalid_argument("PowerAllocation: x0 must not exceed x1");
}

PowerAllocation PowerAllocation::full_interference(double ps) {
    return PowerAllocation("full", ps, numerics::kInfinity, numerics::kInfinity,
                           [ps](double) { return LayerProfile{ps, 0.0}; });
}

PowerAllocation PowerAllocation::zero(double ps) {
    return PowerAllocation("zero", ps, 0.0, 0.0, [](double) { return LayerProfile{0.0, 0.0}; });
}

LayerProfile PowerAllocation::profile(double s) const {
    if (s >= x1_) return {0.0, 0.0};
    if (s <= x0_) return {ps_, 0.0};
    LayerProfile p = (*interior_)(s);
    p.interference = std::clamp(p.interference, 0.0, ps_);
    return p;
}

PowerAllocation PowerAllocation::renamed(std::string name) const {
    PowerAllocation copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

PowerAllocation PowerAllocation::tabulated(const std::vector<double>& breakpoints, double tol) const {
    if (degenerate() || !(x0_ > 0.0) || std::isinf(x1_)) return *this;
    using Table = numerics::ChebyshevTable<2>;
    Table::Options opts;
    opts.tol = tol;
    opts.log_scale = true;
    const Profile& inner = *interior_;
    auto table = std::make_shared<const Table>(Table::fit(
        [&](double s) {
            const LayerProfile p = inner(s);
            return std::array<double, 2>{p.interference, p.density};
        },
        x0_, x1_, breakpoints, opts));
    return PowerAllocation(name_, ps_, x0_, x1_, [table](double s) {
        const auto v = (*table)(s);
        return LayerProfile{v[0], v[1]};
    });
}

PowerAllocation alloc_single_user_opt(double ps) {
    if (!(ps > 0.0)) throw ConfigError("Ps must be positive");
    const double s0 = 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * ps));
    return PowerAllocation("su", ps, s0, 1.0, [](double s) {
        return LayerProfile{(1.0 - s) / (s * s), (2.0 - s) / (s * s * s)};
    });
}

PowerAllocation alloc_joint_opt(double ps) {
    if (!(ps > 0.0)) throw ConfigError("Ps must be positive");
    const double golden = 0.5 * (1.0 + std::sqrt(5.0));
    // (1 + s - s^2)/s^3 = Ps, cleared of the denominator.
    const double x0 = numerics::find_root([ps](double s) { return 1.0 + s - s * s - ps * s * s * s; },
                                          {0.0, golden}, 0.0);
    return PowerAllocation("joint", ps, x0, golden, [](double s) {
        const double s2 = s * s;
        return LayerProfile{(1.0 + s - s2) / (s2 * s), (3.0 + 2.0 * s - s2) / (s2 * s2)};
    });
}

}  // namespace relaylab
