#include "sphuni/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphuni {

namespace {

void check_degree_dim(int degree, int dim) {
    if (degree < 1) throw std::invalid_argument("kernel degree must be >= 1, got " + std::to_string(degree));
    if (dim < 2) throw std::invalid_argument("sphere dimension d must be >= 2, got " + std::to_string(dim));
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("harmonic_dimension: 64-bit overflow");
    return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("harmonic_dimension: 64-bit overflow");
    return r;
}

// C(n, r) with overflow detection, multiplying one factor at a time and
// dividing eagerly so intermediate values stay exact.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
    if (r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        const std::uint64_t num = n - r + i;
        const std::uint64_t g = std::gcd(result, i);
        // result/g * num is still divisible by i/g because C(n,r) is integral
        std::uint64_t part = result / g;
        const std::uint64_t den = i / g;
        part = checked_mul(part, num);
        result = part / den;
    }
    return result;
}

}  // namespace

void KernelSpec::validate() const {
    if (dim_d < 2) throw std::invalid_argument("KernelSpec: dim_d must be >= 2");
    if (max_degree < 1) throw std::invalid_argument("KernelSpec: max_degree must be >= 1");
    if (max_degree > kDefaultDegreeCap)
        throw std::invalid_argument("KernelSpec: max_degree " + std::to_string(max_degree) +
                                    " exceeds the degree cap " + std::to_string(kDefaultDegreeCap));
}

std::uint64_t harmonic_dimension(int degree, int dim) {
    check_degree_dim(degree, dim);
    const auto k = static_cast<std::uint64_t>(degree);
    const auto d = static_cast<std::uint64_t>(dim);
    return checked_add(binomial(d + k - 3, d - 2), binomial(d + k - 2, d - 2));
}

double gegenbauer_coefficient(int degree, int index, double lambda) {
    check_degree_dim(degree, 2);
    if (!(lambda > 0.0)) throw std::invalid_argument("gegenbauer_coefficient: lambda must be > 0");
    if (index < 0 || 2 * index > degree)
        throw std::invalid_argument("gegenbauer_coefficient: index " + std::to_string(index) +
                                    " outside [0, floor(k/2)] for degree " + std::to_string(degree));
    const int k = degree, j = index;
    const double log_c = (k - 2 * j) * std::numbers::ln2 + std::lgamma(k - j + lambda) -
                         std::lgamma(lambda) - std::lgamma(j + 1.0) - std::lgamma(k - 2 * j + 1.0);
    return std::exp(log_c);
}

double kernel_coefficient(int degree, int index, int dim) {
    check_degree_dim(degree, dim);
    const int k = degree, j = index;
    if (index < 0 || 2 * index > degree)
        throw std::invalid_argument("kernel_coefficient: index outside [0, floor(k/2)]");
    if (dim == 2) {
        // coefficient of t^(k-2j) in 2*T_k(t): k * 2^(k-2j) * (k-j-1)! / (j! (k-2j)!)
        const double log_c = (k - 2 * j) * std::numbers::ln2 + std::lgamma(static_cast<double>(k - j)) -
                             std::lgamma(j + 1.0) - std::lgamma(k - 2 * j + 1.0);
        return k * std::exp(log_c);
    }
    const double lambda = (dim - 2) / 2.0;
    return (1.0 + 2.0 * k / (dim - 2)) * gegenbauer_coefficient(k, j, lambda);
}

double kernel_h(int degree, double t, int dim) {
    check_degree_dim(degree, dim);
    t = std::clamp(t, -1.0, 1.0);
    if (dim == 2) return 2.0 * std::cos(degree * std::acos(t));

    // The alternating sum cancels heavily near |t| = 1 (terms grow like 2^k
    // Gamma(k + lambda) while the value stays at d_k, a loss of ~8 digits at
    // k = 30), so the coefficients are built from their exact rational ratios
    // and summed in extended precision.
#ifdef __SIZEOF_FLOAT128__
    using wide = __float128;
#else
    using wide = long double;
#endif
    const int k = degree;
    const int jmax = k / 2;
    const wide lambda = (dim - 2) / static_cast<wide>(2);
    std::vector<wide> coeff(static_cast<std::size_t>(jmax) + 1);
    wide c = 1;  // c_{k,0} = prod_i 2 (i - 1 + lambda) / i
    for (int i = 1; i <= k; ++i) c *= 2 * (i - 1 + lambda) / i;
    coeff[0] = c;
    for (int j = 0; j < jmax; ++j)
        coeff[static_cast<std::size_t>(j) + 1] = coeff[static_cast<std::size_t>(j)] *
                                                 static_cast<wide>(k - 2 * j) * (k - 2 * j - 1) /
                                                 (static_cast<wide>(4) * (j + 1) * (k - j - 1 + lambda));

    const wide u = static_cast<wide>(t) * t;
    wide acc = 0;
    wide tpow = (k % 2 == 0) ? static_cast<wide>(1) : static_cast<wide>(t);  // t^(k - 2 jmax)
    for (int j = jmax; j >= 0; --j) {
        acc += ((j % 2 == 0) ? coeff[static_cast<std::size_t>(j)] : -coeff[static_cast<std::size_t>(j)]) * tpow;
        tpow *= u;
    }
    return static_cast<double>((1 + static_cast<wide>(2) * k / (dim - 2)) * acc);
}

void kernel_h_all(int max_degree, double t, int dim, std::span<double> out) {
    check_degree_dim(max_degree, dim);
    if (out.size() < static_cast<std::size_t>(max_degree))
        throw std::invalid_argument("kernel_h_all: output span too small");
    t = std::clamp(t, -1.0, 1.0);

    if (dim == 2) {
        // cos(k theta) by angle addition: c_k = 2t c_{k-1} - c_{k-2}
        double prev = 1.0, cur = t;
        out[0] = 2.0 * cur;
        for (int k = 2; k <= max_degree; ++k) {
            const double next = 2.0 * t * cur - prev;
            prev = cur;
            cur = next;
            out[k - 1] = 2.0 * cur;
        }
        return;
    }

    const double lambda = (dim - 2) / 2.0;
    double prev = 1.0;                 // C_0
    double cur = (dim - 2) * t;        // C_1 = 2*lambda*t
    out[0] = (1.0 + 2.0 / (dim - 2)) * cur;
    for (int k = 2; k <= max_degree; ++k) {
        const double next = (2.0 * t * (k + lambda - 1.0) * cur - (k + 2.0 * lambda - 2.0) * prev) / k;
        prev = cur;
        cur = next;
        out[k - 1] = (1.0 + 2.0 * k / (dim - 2)) * cur;
    }
}

std::vector<double> kernel_h_all(int max_degree, double t, int dim) {
    std::vector<double> out(static_cast<std::size_t>(std::max(max_degree, 1)));
    kernel_h_all(max_degree, t, dim, out);
    return out;
}

double moment_a(int order, int dim) {
    if (order < 0) throw std::invalid_argument("moment_a: order must be >= 0");
    if (dim < 2) throw std::invalid_argument("moment_a: d must be >= 2");
    if (order % 2 != 0) return 0.0;
    double prod = 1.0;
    for (int r = 0; r < order / 2; ++r) prod *= (1.0 + 2.0 * r) / (dim + 2.0 * r);
    return prod;
}

double weight_w(int degree, int dim) {
    check_degree_dim(degree, dim);
    if (dim == 2) return std::numbers::sqrt2;
    return (1.0 + 2.0 * degree / (dim - 2.0)) / std::sqrt(static_cast<double>(harmonic_dimension(degree, dim)));
}

}  // namespace sphuni
