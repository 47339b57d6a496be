#pragma once

#include <vector>

namespace sphuni {

/// Central chi-square CDF, via the regularized lower incomplete gamma
/// P(dof/2, x/2). Absolute error below 1e-10 over the working range.
double chi2_cdf(double x, int dof);

/// Inverse of chi2_cdf in x: bracketed Newton iteration started from the
/// Wilson-Hilferty approximation. Requires 0 < p < 1.
double chi2_quantile(double p, int dof);

/// Noncentral chi-square CDF with noncentrality xi >= 0, by the Poisson
/// mixture series. Terms are added until the unaccounted Poisson tail drops
/// below 1e-12 (hard cap 10^4 terms).
double noncentral_chi2_cdf(double x, int dof, double xi);

/// One summand of an independent chi-square sum: weight * chi2_dof(xi).
struct ChiSquareComponent {
    int dof = 1;
    double noncentrality = 0.0;
    double weight = 1.0;
};

/// Law of sum_r weight_r * chi2_{dof_r}(xi_r) with independent components.
struct ChiSquareMixture {
    std::vector<ChiSquareComponent> components;
};

/// CDF of the mixture at x. Unit-weight mixtures collapse exactly to a single
/// (non)central chi-square with summed dof and noncentralities; anything else
/// goes through Imhof's numerical inversion of the characteristic function.
double mixture_cdf(double x, const ChiSquareMixture& law);

}  // namespace sphuni
