#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sphuni {

/// Hard cap on kernel degrees. Coefficient magnitudes and the recurrence are
/// validated up to here; raise only with care, gamma ratios grow fast.
inline constexpr int kDefaultDegreeCap = 50;

/// Bounds for a family of zonal kernels h_1..h_K on S^(d-1).
struct KernelSpec {
    int dim_d = 3;
    int max_degree = kDefaultDegreeCap;

    void validate() const;
};

/// Dimension d_k of the space of degree-k spherical harmonics on S^(d-1),
/// computed in exact integer arithmetic. Throws std::overflow_error if the
/// value does not fit in 64 bits.
std::uint64_t harmonic_dimension(int degree, int dim);

/// Gegenbauer expansion coefficient c_{k,j}^lambda, evaluated in log space.
/// Requires 0 <= j <= floor(k/2) and lambda > 0.
double gegenbauer_coefficient(int degree, int index, double lambda);

/// Coefficient of t^(k-2j) in h_k for dimension d >= 2 (kernel scale
/// included). For d > 2 this is (1 + 2k/(d-2)) * c_{k,j}^((d-2)/2); for d = 2
/// it is the matching coefficient of 2*cos(k*arccos t) as a polynomial in t.
double kernel_coefficient(int degree, int index, int dim);

/// Zonal kernel h_k(t) by the explicit coefficient sum (d > 2) or the cosine
/// closed form (d = 2). Slower than kernel_h_all; kept as the reference path.
double kernel_h(int degree, double t, int dim);

/// h_1(t)..h_K(t) in one sweep of the three-term recurrence. out must have
/// room for max_degree values.
void kernel_h_all(int max_degree, double t, int dim, std::span<double> out);
std::vector<double> kernel_h_all(int max_degree, double t, int dim);

/// m-th moment of mu'X under the uniform law: 0 for odd m, the telescoping
/// product prod_{r<m/2} (1+2r)/(d+2r) for even m, 1 for m = 0.
double moment_a(int order, int dim);

/// Noncentrality weight w_k: sqrt(2) for d = 2, (1 + 2k/(d-2))/sqrt(d_k)
/// for d >= 3.
double weight_w(int degree, int dim);

}  // namespace sphuni
