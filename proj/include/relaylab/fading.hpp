#pragma once

#include "relaylab/numerics.hpp"

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace relaylab {

using numerics::RealFunction;

enum class CoopMode { narrow_band, wide_band };

std::string_view to_string(CoopMode mode);
/// Accepts "narrow_band"/"nb" and "wide_band"/"wb". Throws ConfigError otherwise.
CoopMode parse_coop_mode(std::string_view text);

double db_to_linear(double db);
double linear_to_db(double linear);

/// Source SNR, relay power and cooperation-link model. Powers are linear.
struct PowerConfig {
    double ps = 1.0;
    double pr = 0.0;
    CoopMode mode = CoopMode::narrow_band;

    static PowerConfig from_db(double ps_db, double pr_db, CoopMode mode);

    /// ln(1 + Pr) for narrow band, Pr for wide band (nats).
    double coop_capacity() const;

    /// Throws ConfigError for Ps <= 0, Pr < 0 or non-finite Ps.
    void validate() const;
};

/// Squared channel magnitudes seen by the two receive agents; user 1 is the destination.
struct FadingPair {
    double s1 = 0.0;
    double s2 = 0.0;
};

struct DensityPoint {
    double cdf = 0.0;
    double survival = 1.0;
    double pdf = 0.0;
    double pdf_derivative = 0.0;
};

/// Law of a nonnegative equivalent gain. Missing pieces are filled in at
/// construction: survival = 1 - cdf, pdf and pdf' by finite differences.
class DistributionModel {
public:
    struct Functions {
        RealFunction cdf;                          ///< required
        RealFunction survival;                     ///< optional
        RealFunction pdf;                          ///< optional
        RealFunction pdf_derivative;               ///< optional
        std::function<DensityPoint(double)> point; ///< optional, all four at once
    };

    DistributionModel(std::string name, Functions fns, std::vector<double> breakpoints = {});

    const std::string& name() const noexcept { return name_; }
    /// Points where the law changes analytic form (quadrature splits there).
    const std::vector<double>& breakpoints() const noexcept { return *breaks_; }

    double cdf(double x) const;
    double survival(double x) const;
    double pdf(double x) const;
    double pdf_derivative(double x) const;
    DensityPoint at(double x) const;

private:
    std::string name_;
    std::shared_ptr<const Functions> fns_;
    std::shared_ptr<const std::vector<double>> breaks_;
};

/// Central difference with step max(1e-4, 1e-3 x); one-sided (second order) near
/// zero and next to a breakpoint.
double numeric_derivative(const RealFunction& g, double x, const std::vector<double>& breakpoints);

double rayleigh_cdf(double u);
double joint_ub_cdf(double u);
double strongest_cdf(double u);

/// Unit-mean exponential gain of a single user.
DistributionModel rayleigh_distribution();
/// s1 + s2 for two i.i.d. unit exponentials (full cooperation).
DistributionModel joint_ub_distribution();
/// max(s1, s2) for two i.i.d. unit exponentials.
DistributionModel strongest_distribution();

struct LayerProfile {
    double interference = 0.0;  ///< I(s)
    double density = 0.0;       ///< rho(s) = -I'(s)
};

/// Continuum layering power profile: I = Ps below x0, 0 above x1.
class PowerAllocation {
public:
    using Profile = std::function<LayerProfile(double)>;

    /// Empty allocation (no power, nothing layered).
    PowerAllocation() = default;
    PowerAllocation(std::string name, double ps, double x0, double x1, Profile interior);

    /// All power stays undecodable (I = Ps everywhere).
    static PowerAllocation full_interference(double ps);
    /// No layering residue (I = 0 everywhere).
    static PowerAllocation zero(double ps);

    const std::string& name() const noexcept { return name_; }
    double ps() const noexcept { return ps_; }
    double x0() const noexcept { return x0_; }
    double x1() const noexcept { return x1_; }
    bool degenerate() const noexcept { return !(x0_ < x1_); }

    LayerProfile profile(double s) const;
    double interference(double s) const { return profile(s).interference; }
    double density(double s) const { return profile(s).density; }

    PowerAllocation renamed(std::string name) const;

    /// Replaces the interior profile by a piecewise Chebyshev table (log scale).
    PowerAllocation tabulated(const std::vector<double>& breakpoints = {}, double tol = 1e-10) const;

private:
    std::string name_ = "none";
    double ps_ = 0.0;
    double x0_ = 0.0;
    double x1_ = 0.0;
    std::shared_ptr<const Profile> interior_;
};

/// I(s) = (1 - s)/s^2 on [s0, 1], s0 = 2/(1 + sqrt(1 + 4 Ps)).
PowerAllocation alloc_single_user_opt(double ps);
/// I(s) = (1 + s - s^2)/s^3 on [x0, golden ratio].
PowerAllocation alloc_joint_opt(double ps);
/// Optimal layering for the strongest-user law.
PowerAllocation alloc_selection_opt(double ps);

}  // namespace relaylab
