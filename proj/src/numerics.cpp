#include "relaylab/numerics.hpp"

#include "relaylab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace relaylab::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

double lambert_w0(double x) {
    constexpr double kBranch = -0.36787944117144233;  // -1/e
    if (std::isnan(x)) return x;
    if (x < kBranch) {
        // Accept values that sit on the branch point up to rounding.
        if (x < kBranch * (1.0 + 4.0 * kEps))
            throw std::domain_error("lambert_w0: argument below -1/e");
        return -1.0;
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x;

    const double p2 = 2.0 * (std::exp(1.0) * x + 1.0);
    const double p = std::sqrt(std::max(p2, 0.0));
    double w;
    if (p < 1e-3) {
        return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 +
                                                                            p * 769.0 / 17280.0))));
    }
    if (x < 0.0) {
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0));
    } else {
        w = std::log1p(x);
        if (x > 3.0) w -= std::log(w);
    }
    for (int it = 0; it < 64; ++it) {
        const double ew = std::exp(w);
        const double r = w * ew - x;
        const double wp1 = w + 1.0;
        const double step = r / (ew * wp1 - (w + 2.0) * r / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 4.0 * kEps * std::max(1.0, std::abs(w))) break;
    }
    return w;
}

namespace {

// e^x E1(x) by the modified Lentz continued fraction, x >= 1.
double e1_continued_fraction_scaled(double x) {
    constexpr double kTiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) <= kEps) break;
    }
    return h;
}

double e1_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x / k;
        const double add = term / k;
        sum += add;
        if (std::abs(add) <= kEps * std::abs(sum)) break;
    }
    return -kEulerGamma - std::log(x) - sum;
}

}  // namespace

double exp_integral_e1(double x) {
    if (std::isnan(x)) return x;
    if (!(x > 0.0)) throw std::domain_error("exp_integral_e1: argument must be positive");
    if (std::isinf(x)) return 0.0;
    if (x < 1.0) return e1_series(x);
    return std::exp(-x) * e1_continued_fraction_scaled(x);
}

double scaled_exp_integral_e1(double x) {
    if (std::isnan(x)) return x;
    if (!(x > 0.0)) throw std::domain_error("scaled_exp_integral_e1: argument must be positive");
    if (std::isinf(x)) return 0.0;
    if (x < 1.0) return std::exp(x) * e1_series(x);
    return e1_continued_fraction_scaled(x);
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7/15
// ---------------------------------------------------------------------------

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    double roundoff;  // error floor set by cancellation in double precision
    bool mapped;  // integrand expressed in u for a semi-infinite tail

    bool operator<(const Segment& other) const { return error < other.error; }
};

class Integrand {
public:
    Integrand(RealFunctionRef f, double origin) : f_(f), origin_(origin) {}

    double operator()(double x, bool mapped) {
        ++evaluations;
        double v;
        if (!mapped) {
            v = f_(x);
        } else {
            const double om = 1.0 - x;
            if (om <= 0.0) return 0.0;
            const double t = origin_ + x / om;
            if (std::isinf(t)) return 0.0;
            v = f_(t) / (om * om);
        }
        if (!std::isfinite(v))
            throw IntegrationError("integrate: integrand not finite at x = " + std::to_string(x), 0.0,
                                   kInfinity);
        return v;
    }

    int evaluations = 0;

private:
    RealFunctionRef f_;
    double origin_;
};

Segment gk15(Integrand& g, double a, double b, bool mapped) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = g(center, mapped);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = g(center - dx, mapped);
        fv2[j] = g(center + dx, mapped);
        const double sum = fv1[j] + fv2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));

    const double ah = std::abs(half);
    const double value = resk * half;
    resabs *= ah;
    resasc *= ah;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double roundoff = 50.0 * kEps * resabs;
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(roundoff, err);
    return {a, b, value, err, roundoff, mapped};
}

}  // namespace

QuadratureResult integrate_detailed(RealFunctionRef f, std::span<const double> points,
                                    const QuadratureOptions& options) {
    if (points.size() < 2) throw std::invalid_argument("integrate: need at least two points");
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (std::isnan(points[i]) || !(points[i] <= points[i + 1]))
            throw std::invalid_argument("integrate: points must be sorted ascending");
        if (std::isinf(points[i])) throw std::invalid_argument("integrate: only the last point may be infinite");
    }

    const double tail_origin = points[points.size() - 2];
    Integrand g(f, tail_origin);
    std::priority_queue<Segment> heap;
    double total = 0.0;
    double total_err = 0.0;
    double total_roundoff = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double a = points[i];
        const double b = points[i + 1];
        if (a == b) continue;
        const bool mapped = std::isinf(b);
        Segment s = mapped ? gk15(g, 0.0, 1.0, true) : gk15(g, a, b, false);
        total += s.value;
        total_err += s.error;
        total_roundoff += s.roundoff;
        heap.push(s);
    }

    std::vector<Segment> settled;
    int intervals = static_cast<int>(heap.size());
    auto tolerance = [&] {
        return std::max({options.abs_tol, options.rel_tol * std::abs(total), 2.0 * total_roundoff});
    };
    while (total_err > tolerance() && !heap.empty()) {
        if (intervals >= options.max_intervals) {
            throw IntegrationError("integrate: subdivision budget exhausted (error estimate " +
                                       std::to_string(total_err) + ")",
                                   total, total_err);
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const double scale = std::max(std::abs(worst.a), std::abs(worst.b));
        if (mid <= worst.a || mid >= worst.b || (worst.b - worst.a) <= 1e3 * kEps * scale) {
            settled.push_back(worst);  // cannot be resolved further in double precision
            continue;
        }
        const Segment left = gk15(g, worst.a, mid, worst.mapped);
        const Segment right = gk15(g, mid, worst.b, worst.mapped);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_roundoff += left.roundoff + right.roundoff - worst.roundoff;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }

    // Re-sum from the pieces to shed accumulated update round-off.
    double value = 0.0;
    double err = 0.0;
    double floor = 0.0;
    for (const Segment& s : settled) {
        value += s.value;
        err += s.error;
        floor += s.roundoff;
    }
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().error;
        floor += heap.top().roundoff;
        heap.pop();
    }
    if (err > std::max({options.abs_tol, options.rel_tol * std::abs(value), 2.0 * floor})) {
        throw IntegrationError("integrate: integrand not resolvable to tolerance (error estimate " +
                                   std::to_string(err) + ")",
                               value, err);
    }
    return {value, err, g.evaluations};
}

double integrate(RealFunctionRef f, double a, double b, const QuadratureOptions& options) {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, options);
    const double pts[2] = {a, b};
    return integrate_detailed(f, pts, options).value;
}

double integrate(RealFunctionRef f, double a, double b, double abs_tol) {
    QuadratureOptions options;
    options.abs_tol = abs_tol;
    return integrate(f, a, b, options);
}

// ---------------------------------------------------------------------------
// Brent root finder
// ---------------------------------------------------------------------------

double find_root(RealFunctionRef f, Bracket bracket, double tol) {
    double a = bracket.lo;
    double b = bracket.hi;
    if (!(a <= b)) throw std::invalid_argument("find_root: bracket lo must not exceed hi");
    double fa = f(a);
    double fb = f(b);
    if (std::isnan(fa) || std::isnan(fb)) throw NumericalError("find_root: function is NaN at bracket end");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw BracketError("find_root: no sign change on [" + std::to_string(a) + ", " + std::to_string(b) +
                           "]");

    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int it = 0; it < 500; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (m > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if (std::isnan(fb)) throw NumericalError("find_root: function is NaN inside bracket");
    }
    return b;
}

// ---------------------------------------------------------------------------
// Maximization
// ---------------------------------------------------------------------------

Maximum maximize_1d(RealFunctionRef f, Bracket bracket, double tol) {
    if (!(bracket.lo < bracket.hi)) throw std::invalid_argument("maximize_1d: empty bracket");
    constexpr int kGrid = 512;
    const bool log_grid = bracket.lo > 0.0 && bracket.hi / bracket.lo > 10.0;
    const double clo = log_grid ? std::log(bracket.lo) : bracket.lo;
    const double chi = log_grid ? std::log(bracket.hi) : bracket.hi;
    auto to_x = [&](double c) {
        return std::clamp(log_grid ? std::exp(c) : c, bracket.lo, bracket.hi);
    };
    auto safe = [&](double x) {
        const double v = f(x);
        return std::isnan(v) ? -kInfinity : v;
    };

    std::vector<double> cs(kGrid);
    std::vector<double> vs(kGrid);
    for (int i = 0; i < kGrid; ++i) {
        cs[i] = (i == kGrid - 1) ? chi : clo + (chi - clo) * i / (kGrid - 1);
        vs[i] = safe(to_x(cs[i]));
    }
    const auto [mn, mx] = std::minmax_element(vs.begin(), vs.end());
    const int best = static_cast<int>(mx - vs.begin());
    const double fmax = *mx;
    const double fmin = *mn;

    Maximum out;
    if (fmax - fmin <= 1e-12 * std::max(1.0, std::abs(fmax))) {
        out.plateau = true;
        out.argmax = to_x(0.5 * (clo + chi));
        out.max = safe(out.argmax);
        return out;
    }

    // Count peaks on the grid, ignoring wiggles below a relative noise floor.
    const double noise = 1e-10 * std::max(std::abs(fmax), std::abs(fmin));
    int peaks = 0;
    int trend = 0;  // +1 rising, -1 falling
    double anchor = vs[0];
    for (int i = 1; i < kGrid; ++i) {
        if (vs[i] > anchor + noise) {
            trend = 1;
            anchor = vs[i];
        } else if (vs[i] < anchor - noise) {
            if (trend >= 0) ++peaks;  // first fall after a rise (or from the left end)
            trend = -1;
            anchor = vs[i];
        } else if (trend == 1 ? vs[i] > anchor : vs[i] < anchor) {
            anchor = vs[i];
        }
    }
    if (trend == 1) ++peaks;  // still rising at the right end
    out.multimodal = peaks > 1;

    // Golden section on the grid cell pair around the best sample.
    double a = cs[std::max(best - 1, 0)];
    double b = cs[std::min(best + 1, kGrid - 1)];
    constexpr double kInvPhi = 0.61803398874989484820;
    double c1 = b - kInvPhi * (b - a);
    double c2 = a + kInvPhi * (b - a);
    double f1 = safe(to_x(c1));
    double f2 = safe(to_x(c2));
    const double coarse = log_grid ? 1e-7 : 1e-7 * std::max(std::abs(chi - clo), std::abs(cs[best]));
    for (int it = 0; it < 200 && (b - a) > coarse; ++it) {
        if (f1 >= f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - kInvPhi * (b - a);
            f1 = safe(to_x(c1));
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + kInvPhi * (b - a);
            f2 = safe(to_x(c2));
        }
    }
    double x_best = f1 >= f2 ? to_x(c1) : to_x(c2);
    double f_best = std::max(f1, f2);
    if (vs[best] > f_best) {
        x_best = to_x(cs[best]);
        f_best = vs[best];
    }

    // Polish: the derivative changes sign at an interior maximum. Finite
    // differences resolve the argmax well below the sqrt(eps) limit of comparisons.
    const double width = b - a;
    const double xa = to_x(std::max(clo, a - width));
    const double xb = to_x(std::min(chi, b + width));
    const double h = 1e-5 * std::max(std::abs(x_best), 1e-6 * (bracket.hi - bracket.lo));
    auto slope = [&](double x) {
        const double lo = std::max(bracket.lo, x - h);
        const double hi = std::min(bracket.hi, x + h);
        return (safe(hi) - safe(lo)) / (hi - lo);
    };
    const double da = slope(xa);
    const double db = slope(xb);
    if (std::isfinite(da) && std::isfinite(db) && da > 0.0 && db < 0.0) {
        try {
            const double xr = find_root(slope, {xa, xb}, tol);
            const double fr = safe(xr);
            if (fr >= f_best - 1e-13 * std::abs(f_best)) {
                x_best = xr;
                f_best = fr;
            }
        } catch (const NumericalError&) {
            // keep the golden-section estimate
        }
    }
    out.argmax = x_best;
    out.max = f_best;
    return out;
}

}  // namespace relaylab::numerics
