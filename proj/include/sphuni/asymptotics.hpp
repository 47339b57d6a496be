#pragma once

#include "sphuni/distributions.hpp"
#include "sphuni/models.hpp"
#include "sphuni/statistics.hpp"

namespace sphuni {

/// Noncentrality xi_{k,k*}(tau) of the degree-k chi-square component under a
/// contiguous alternative with smallest non-vanishing derivative order k*.
/// Exactly zero when k and k* differ in parity. Throws for models without
/// derivative data (directional Cauchy).
double noncentrality_xi(int degree, const AngularModel& model, double tau, int dim);

/// Asymptotic power at level alpha of a test against the contiguous sequence
/// kappa_n = n^(-1/ell) tau, where ell must equal the critical rate 2 k*.
/// Limit laws: rayleigh chi2_{d1}(xi_1), bingham chi2_{d2}(xi_2), jupp
/// chi2_{d1}(xi_1), adapted chi2_{d1}(xi_1) + chi2_{d2}(xi_2), each xi gated
/// by the parity indicator.
double theoretical_power(const TestMethod& method, const ContiguousSpec& spec, double alpha, int dim);

/// Empirical (1 - alpha) quantile of a test statistic under simulated
/// uniformity: a finite-sample alternative to the asymptotic critical value.
/// Requires reps >= 100. Replications run on `threads` workers with
/// per-replication seed streams, so results do not depend on thread count.
double calibrate_critical_value(const TestMethod& method, std::size_t n, int dim, double alpha,
                                std::size_t reps, const SeedSpec& seed,
                                const SelectionConfig& config = {}, int threads = 0);

}  // namespace sphuni
