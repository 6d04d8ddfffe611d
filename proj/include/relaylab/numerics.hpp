#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace relaylab::numerics {

/// Owning scalar function, used where a function is stored in a value type.
using RealFunction = std::function<double(double)>;

/// Non-owning reference to a callable. Cheap to copy; the callable must outlive it.
template <class Signature>
class FunctionRef;

template <class R, class... Args>
class FunctionRef<R(Args...)> {
public:
    template <class F,
              class = std::enable_if_t<!std::is_same_v<std::decay_t<F>, FunctionRef> &&
                                       std::is_invocable_r_v<R, F&, Args...>>>
    FunctionRef(F&& f) noexcept  // NOLINT(google-explicit-constructor)
        : object_(const_cast<void*>(static_cast<const void*>(std::addressof(f)))),
          call_([](void* obj, Args... args) -> R {
              return (*static_cast<std::add_pointer_t<std::remove_reference_t<F>>>(obj))(
                  std::forward<Args>(args)...);
          }) {}

    R operator()(Args... args) const { return call_(object_, std::forward<Args>(args)...); }

private:
    void* object_;
    R (*call_)(void*, Args...);
};

using RealFunctionRef = FunctionRef<double(double)>;

struct Bracket {
    double lo;
    double hi;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Default absolute tolerance for inner (1-D) integrals.
inline constexpr double kInnerTol = 1e-9;
/// Default absolute tolerance for outer (nested / 2-D) expectations.
inline constexpr double kOuterTol = 1e-7;

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// Principal branch of the Lambert W function, w·e^w = x, for x >= -1/e.
/// Throws std::domain_error below the branch point.
double lambert_w0(double x);

/// Exponential integral E1(x) = ∫_x^∞ e^{-t}/t dt for x > 0 (equals Ei(1, x)).
/// Throws std::domain_error for x <= 0.
double exp_integral_e1(double x);

/// e^x · E1(x), finite for all x > 0 (no overflow for large x).
double scaled_exp_integral_e1(double x);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadratureOptions {
    double abs_tol = kInnerTol;
    double rel_tol = 0.0;
    int max_intervals = 2000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature over the pieces delimited by
/// `points` (sorted ascending, at least two entries). The last point may be +inf;
/// the semi-infinite piece is mapped by t = a + u/(1-u), u in [0,1).
/// Throws IntegrationError carrying the partial estimate when the budget runs out.
QuadratureResult integrate_detailed(RealFunctionRef f, std::span<const double> points,
                                    const QuadratureOptions& options = {});

inline double integrate(RealFunctionRef f, std::span<const double> points,
                        const QuadratureOptions& options = {}) {
    return integrate_detailed(f, points, options).value;
}

/// ∫_a^b f, b may be +inf. Reversed limits flip the sign.
double integrate(RealFunctionRef f, double a, double b, double abs_tol = kInnerTol);

/// Same as above with full options.
double integrate(RealFunctionRef f, double a, double b, const QuadratureOptions& options);

// ---------------------------------------------------------------------------
// Root finding and maximization
// ---------------------------------------------------------------------------

/// Brent's method with bisection safeguard. The returned x lies within `tol` of a
/// sign change of f. Throws BracketError if f(lo) and f(hi) share a strict sign.
double find_root(RealFunctionRef f, Bracket bracket, double tol);

struct Maximum {
    double argmax = 0.0;
    double max = 0.0;
    bool multimodal = false;  ///< coarse scan saw more than one local maximum
    bool plateau = false;     ///< f constant on the scan grid
};

/// Maximize f on the bracket: 512-point scan (log-spaced when lo > 0 and the range
/// spans more than a decade), golden-section refinement around the best grid point,
/// then a derivative-root polish that pins the argmax to roughly `tol`.
Maximum maximize_1d(RealFunctionRef f, Bracket bracket, double tol);

// ---------------------------------------------------------------------------
// Piecewise Chebyshev tables
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr int kChebOrder = 32;

inline const std::array<double, kChebOrder + 1>& lobatto_nodes() {
    static const auto nodes = [] {
        std::array<double, kChebOrder + 1> x{};
        for (int k = 0; k <= kChebOrder; ++k) x[k] = std::cos(std::numbers::pi * k / kChebOrder);
        return x;
    }();
    return nodes;
}

/// Barycentric interpolation through Chebyshev-Lobatto nodes of order n
/// (stride selects the nested lower-order subset of the order-32 grid).
inline double barycentric(std::span<const double> values, double t, int stride) {
    const auto& x = lobatto_nodes();
    const int n = kChebOrder / stride;
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j <= n; ++j) {
        const int k = j * stride;
        const double diff = t - x[k];
        if (diff == 0.0) return values[k];
        double w = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == n) w *= 0.5;
        const double c = w / diff;
        num += c * values[k];
        den += c;
    }
    return num / den;
}

}  // namespace detail

/// Piecewise Chebyshev interpolant of a vector-valued function on [a, b], fitted
/// adaptively so each channel's panel error stays below tol relative to the
/// panel's magnitude. Optionally works in log coordinates (requires a > 0).
template <std::size_t Dim>
class ChebyshevTable {
public:
    using Sample = std::array<double, Dim>;
    using Sampler = FunctionRef<Sample(double)>;

    struct Options {
        double tol = 1e-10;
        bool log_scale = true;
        int max_panels = 512;
        int initial_panels = 4;
    };

    ChebyshevTable() = default;

    static ChebyshevTable fit(Sampler f, double a, double b, std::span<const double> breaks,
                              const Options& options) {
        if (!(a < b)) throw std::invalid_argument("ChebyshevTable: empty interval");
        if (options.log_scale && !(a > 0.0))
            throw std::invalid_argument("ChebyshevTable: log scale needs a > 0");
        ChebyshevTable table;
        table.log_ = options.log_scale;
        table.lo_ = a;
        table.hi_ = b;
        auto map = [&](double x) { return options.log_scale ? std::log(x) : x; };

        std::vector<double> cuts{map(a)};
        for (double p : breaks)
            if (p > a && p < b) cuts.push_back(map(p));
        cuts.push_back(map(b));
        std::vector<std::pair<double, double>> pending;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double w = (cuts[i + 1] - cuts[i]) / options.initial_panels;
            for (int j = 0; j < options.initial_panels; ++j)
                pending.emplace_back(cuts[i] + j * w,
                                     j + 1 == options.initial_panels ? cuts[i + 1]
                                                                     : cuts[i] + (j + 1) * w);
        }
        // Depth-first refinement keeps panels in ascending order.
        std::vector<std::pair<double, double>> stack(pending.rbegin(), pending.rend());
        while (!stack.empty()) {
            auto [l, r] = stack.back();
            stack.pop_back();
            Panel panel = table.sample_panel(f, l, r);
            const bool budget_left =
                static_cast<int>(table.panels_.size() + stack.size()) < options.max_panels;
            if (budget_left && panel_error(panel) > options.tol && (r - l) > 1e-12 * (1 + std::abs(l))) {
                const double m = 0.5 * (l + r);
                stack.emplace_back(m, r);
                stack.emplace_back(l, m);
                continue;
            }
            table.panels_.push_back(std::move(panel));
        }
        return table;
    }

    bool empty() const noexcept { return panels_.empty(); }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    std::size_t panel_count() const noexcept { return panels_.size(); }

    /// Interpolated sample; x is clamped into [lo, hi].
    Sample operator()(double x) const {
        x = std::clamp(x, lo_, hi_);
        const double t = log_ ? std::log(x) : x;
        std::size_t lo = 0, hi = panels_.size();
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (panels_[mid].left <= t) lo = mid;
            else hi = mid;
        }
        const Panel& p = panels_[lo];
        const double u = std::clamp((2.0 * t - p.left - p.right) / (p.right - p.left), -1.0, 1.0);
        Sample out{};
        for (std::size_t d = 0; d < Dim; ++d) out[d] = detail::barycentric(p.values[d], u, 1);
        return out;
    }

private:
    struct Panel {
        double left = 0.0;
        double right = 0.0;
        std::array<std::array<double, detail::kChebOrder + 1>, Dim> values{};
    };

    Panel sample_panel(Sampler f, double l, double r) const {
        Panel p;
        p.left = l;
        p.right = r;
        const auto& x = detail::lobatto_nodes();
        for (int k = 0; k <= detail::kChebOrder; ++k) {
            const double t = 0.5 * (l + r) + 0.5 * (l - r) * x[k];  // ascending in k
            const double arg = log_ ? std::exp(t) : t;
            const Sample s = f(std::clamp(arg, lo_, hi_));
            for (std::size_t d = 0; d < Dim; ++d) p.values[d][k] = s[d];
        }
        // Nodes were generated at -x[k]; store so that values[k] sits at +x[k].
        for (std::size_t d = 0; d < Dim; ++d)
            std::reverse(p.values[d].begin(), p.values[d].end());
        return p;
    }

    static double panel_error(const Panel& p) {
        const auto& x = detail::lobatto_nodes();
        double worst = 0.0;
        for (std::size_t d = 0; d < Dim; ++d) {
            double scale = 0.0;
            for (double v : p.values[d]) scale = std::max(scale, std::abs(v));
            if (!std::isfinite(scale)) return std::numeric_limits<double>::infinity();
            if (scale == 0.0) continue;
            for (int k = 1; k < detail::kChebOrder; k += 2) {
                const double coarse = detail::barycentric(p.values[d], x[k], 2);
                worst = std::max(worst, std::abs(coarse - p.values[d][k]) / scale);
            }
        }
        return worst;
    }

    std::vector<Panel> panels_;
    double lo_ = 0.0;
    double hi_ = 0.0;
    bool log_ = false;
};

}  // namespace relaylab::numerics
