#include "sphuni/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphuni {

namespace {

constexpr double kGammaEps = 1e-15;
constexpr int kGammaMaxIter = 500;

// Regularized lower incomplete gamma P(a, x): series for x < a + 1,
// continued fraction (Lentz) for the complement otherwise.
double reg_lower_gamma(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double log_prefix = a * std::log(x) - x - std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n <= kGammaMaxIter; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * kGammaEps) break;
        }
        return std::exp(log_prefix) * sum;
    }
    // modified Lentz for the continued fraction of Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kGammaMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kGammaEps) break;
    }
    return 1.0 - std::exp(log_prefix) * h;
}

// Acklam's rational approximation of the standard normal quantile; only used
// to seed Newton iterations, so ~1e-9 accuracy is plenty.
double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double plow = 0.02425;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double chi2_log_pdf(double x, int dof) {
    const double half = dof / 2.0;
    return (half - 1.0) * std::log(x) - x / 2.0 - half * std::numbers::ln2 - std::lgamma(half);
}

}  // namespace

double chi2_cdf(double x, int dof) {
    if (dof < 1) throw std::invalid_argument("chi2_cdf: dof must be >= 1");
    if (x <= 0.0) return 0.0;
    return reg_lower_gamma(dof / 2.0, x / 2.0);
}

double chi2_quantile(double p, int dof) {
    if (dof < 1) throw std::invalid_argument("chi2_quantile: dof must be >= 1");
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("chi2_quantile: p must lie in (0, 1), got " + std::to_string(p));

    // Wilson-Hilferty start
    const double z = normal_quantile(p);
    const double f = 2.0 / (9.0 * dof);
    double x = dof * std::pow(1.0 - f + z * std::sqrt(f), 3.0);
    if (!(x > 0.0)) x = dof * 0.1;

    // expand a bracket around the start
    double lo = x, hi = x;
    while (chi2_cdf(lo, dof) > p && lo > 1e-300) lo /= 2.0;
    while (chi2_cdf(hi, dof) < p) hi *= 2.0;

    for (int it = 0; it < 200; ++it) {
        const double cdf = chi2_cdf(x, dof);
        if (cdf > p)
            hi = x;
        else
            lo = x;
        const double step = (cdf - p) / std::exp(chi2_log_pdf(x, dof));
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // Newton left the bracket
        if (std::abs(next - x) <= 1e-12 * std::max(1.0, std::abs(x))) return next;
        x = next;
    }
    return x;
}

double noncentral_chi2_cdf(double x, int dof, double xi) {
    if (dof < 1) throw std::invalid_argument("noncentral_chi2_cdf: dof must be >= 1");
    if (xi < 0.0) throw std::invalid_argument("noncentral_chi2_cdf: xi must be >= 0");
    if (x <= 0.0) return 0.0;
    if (xi == 0.0) return chi2_cdf(x, dof);

    constexpr int kMaxTerms = 10000;
    constexpr double kTailTol = 1e-12;
    const double half_xi = xi / 2.0;
    double sum = 0.0;
    double mass = 0.0;  // Poisson mass consumed so far
    for (int j = 0; j < kMaxTerms; ++j) {
        const double log_w = -half_xi + j * std::log(half_xi) - std::lgamma(j + 1.0);
        const double w = std::exp(log_w);
        sum += w * chi2_cdf(x, dof + 2 * j);
        mass += w;
        // remaining terms are bounded by the remaining Poisson mass
        if (j >= half_xi && (1.0 - mass < kTailTol || w < 1e-18)) break;
    }
    return std::min(sum, 1.0);
}

namespace {

// Imhof (1961) inversion for sum_r w_r * chi2_{h_r}(xi_r).
double imhof_tail_probability(double x, const ChiSquareMixture& law) {
    const auto& comps = law.components;

    auto theta = [&](double u) {
        double s = 0.0;
        for (const auto& c : comps) {
            const double lu = c.weight * u;
            s += c.dof * std::atan(lu) + c.noncentrality * lu / (1.0 + lu * lu);
        }
        return 0.5 * s - 0.5 * x * u;
    };
    auto rho = [&](double u) {
        double log_r = 0.0;
        for (const auto& c : comps) {
            const double lu2 = c.weight * u * c.weight * u;
            log_r += 0.25 * c.dof * std::log1p(lu2) + 0.5 * c.noncentrality * lu2 / (1.0 + lu2);
        }
        return std::exp(log_r);
    };
    auto integrand = [&](double u) {
        if (u <= 0.0) {
            // limit u -> 0 of sin(theta)/(u rho) is theta'(0)
            double s = 0.0;
            for (const auto& c : comps) s += c.weight * (c.dof + c.noncentrality);
            return 0.5 * s - 0.5 * x;
        }
        return std::sin(theta(u)) / (u * rho(u));
    };

    // Truncation point from Imhof's error bound (noncentral factor only
    // accelerates the decay, so dropping it is conservative).
    double total_dof = 0.0;
    double log_weight_prod = 0.0;
    for (const auto& c : comps) {
        total_dof += c.dof;
        log_weight_prod += 0.5 * c.dof * std::log(std::abs(c.weight));
    }
    constexpr double kTruncTol = 1e-9;
    double upper = 1.0;
    const double half_dof = 0.5 * total_dof;
    for (int it = 0; it < 200; ++it) {
        const double log_tail =
            -std::log(std::numbers::pi * half_dof) - half_dof * std::log(upper) - log_weight_prod;
        if (log_tail < std::log(kTruncTol)) break;
        upper *= 1.5;
    }

    // adaptive Simpson
    struct Seg {
        double a, b, fa, fm, fb, whole;
    };
    auto simpson = [&](double a, double b, double fa, double fm, double fb) {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    };
    double integral = 0.0;
    std::vector<Seg> stack;
    const int kInitial = 64;  // oscillatory integrand: seed with a fine grid
    for (int i = 0; i < kInitial; ++i) {
        const double a = upper * i / kInitial;
        const double b = upper * (i + 1) / kInitial;
        const double m = 0.5 * (a + b);
        const double fa = integrand(a), fm = integrand(m), fb = integrand(b);
        stack.push_back({a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)});
    }
    constexpr double kSimpsonTol = 1e-10;
    int evals = 0;
    while (!stack.empty()) {
        const Seg s = stack.back();
        stack.pop_back();
        const double m = 0.5 * (s.a + s.b);
        const double lm = 0.5 * (s.a + m), rm = 0.5 * (m + s.b);
        const double flm = integrand(lm), frm = integrand(rm);
        const double left = simpson(s.a, m, s.fa, flm, s.fm);
        const double right = simpson(m, s.b, s.fm, frm, s.fb);
        evals += 2;
        const double local_tol = 15.0 * kSimpsonTol * std::max((s.b - s.a) / upper, 1e-6);
        if (std::abs(left + right - s.whole) < local_tol || (s.b - s.a) < 1e-12 * upper || evals > 2'000'000) {
            integral += left + right + (left + right - s.whole) / 15.0;
        } else {
            stack.push_back({s.a, m, s.fa, flm, s.fm, left});
            stack.push_back({m, s.b, s.fm, frm, s.fb, right});
        }
    }

    return 0.5 + integral / std::numbers::pi;  // P(Q > x)
}

}  // namespace

double mixture_cdf(double x, const ChiSquareMixture& law) {
    if (law.components.empty()) throw std::invalid_argument("mixture_cdf: empty component list");
    for (const auto& c : law.components) {
        if (c.dof < 1) throw std::invalid_argument("mixture_cdf: all dof must be >= 1");
        if (c.noncentrality < 0.0) throw std::invalid_argument("mixture_cdf: noncentralities must be >= 0");
        if (!(c.weight > 0.0)) throw std::invalid_argument("mixture_cdf: weights must be > 0");
    }
    bool unit_weights = true;
    for (const auto& c : law.components) unit_weights = unit_weights && c.weight == 1.0;
    if (unit_weights) {
        int dof = 0;
        double xi = 0.0;
        for (const auto& c : law.components) {
            dof += c.dof;
            xi += c.noncentrality;
        }
        return noncentral_chi2_cdf(x, dof, xi);
    }
    if (x <= 0.0) return 0.0;
    const double p = 1.0 - imhof_tail_probability(x, law);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace sphuni
