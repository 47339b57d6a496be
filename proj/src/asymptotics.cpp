#include "sphuni/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sphuni/kernels.hpp"
#include "sphuni/parallel.hpp"

namespace sphuni {

double noncentrality_xi(int degree, const AngularModel& model, double tau, int dim) {
    if (degree < 1) throw std::invalid_argument("noncentrality_xi: degree must be >= 1");
    if (!(tau >= 0.0)) throw std::invalid_argument("noncentrality_xi: tau must be >= 0");
    if (!model.has_derivative_data())
        throw std::domain_error("noncentrality_xi: " + family_name(model.family()) +
                                " carries no derivative data at zero");

    const int k_star = model.k_star();
    if ((degree + k_star) % 2 != 0) return 0.0;  // opposite parity

    // sum_j (-1)^j c_{k,j} a_{k+k*-2j}, with the kernel-scale prefactor and
    // the 1/sqrt(d_k) of w_k folded together so the d = 2 Chebyshev limit is
    // covered by the same expression
    const int k = degree;
    double inner = 0.0;
    for (int j = 0; j <= k / 2; ++j) {
        const double coeff = kernel_coefficient(k, j, dim);
        const double moment = moment_a(k + k_star - 2 * j, dim);
        inner += ((j % 2 == 0) ? coeff : -coeff) * moment;
    }
    inner /= std::sqrt(static_cast<double>(harmonic_dimension(k, dim)));

    double k_star_factorial = 1.0;
    for (int i = 2; i <= k_star; ++i) k_star_factorial *= i;
    const double deriv = model.g_derivs_at_zero()[static_cast<std::size_t>(k_star)];
    const double base = deriv / k_star_factorial * std::pow(tau, k_star) * inner;
    return base * base;
}

double theoretical_power(const TestMethod& method, const ContiguousSpec& spec, double alpha, int dim) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("theoretical_power: alpha in (0,1)");
    if (!spec.model.has_derivative_data())
        throw std::domain_error("theoretical_power: model outside the noncentrality framework");
    const int k_star = spec.model.k_star();
    if (spec.ell != 2.0 * k_star)
        throw std::invalid_argument("theoretical_power: ell = " + std::to_string(spec.ell) +
                                    " is not the contiguous rate 2 k* = " + std::to_string(2 * k_star));

    const double xi1 = noncentrality_xi(1, spec.model, spec.tau, dim);
    const double xi2 = noncentrality_xi(2, spec.model, spec.tau, dim);
    const int d1 = static_cast<int>(harmonic_dimension(1, dim));
    const int d2 = static_cast<int>(harmonic_dimension(2, dim));

    ChiSquareMixture law;
    switch (method.kind) {
        case TestMethod::Kind::rayleigh:
        case TestMethod::Kind::jupp: law.components = {{d1, xi1, 1.0}}; break;
        case TestMethod::Kind::bingham: law.components = {{d2, xi2, 1.0}}; break;
        case TestMethod::Kind::adapted: law.components = {{d1, xi1, 1.0}, {d2, xi2, 1.0}}; break;
        case TestMethod::Kind::score:
            throw std::invalid_argument("theoretical_power: score:K is not a supported method here");
    }
    const double critical = chi2_quantile(1.0 - alpha, method.null_dof(dim));
    return 1.0 - mixture_cdf(critical, law);
}

double calibrate_critical_value(const TestMethod& method, std::size_t n, int dim, double alpha,
                                std::size_t reps, const SeedSpec& seed, const SelectionConfig& config,
                                int threads) {
    if (reps < 100) throw std::invalid_argument("calibrate_critical_value: reps must be >= 100");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha in (0,1)");
    config.validate();

    std::vector<double> stats(reps);
    const unsigned workers = resolve_thread_count(threads);
    parallel_for(reps, workers, [&](std::size_t r) {
        const UnitSample sample =
            sample_uniform_sphere(n, dim, SeedSpec{seed.master_seed, seed.stream_index + r});
        switch (method.kind) {
            case TestMethod::Kind::rayleigh: stats[r] = rayleigh_statistic(sample); break;
            case TestMethod::Kind::bingham: stats[r] = bingham_statistic(sample); break;
            case TestMethod::Kind::score: stats[r] = score_statistic(sample, method.score_degree); break;
            case TestMethod::Kind::jupp: {
                const DegreeProfile p(sample, config.cap_m, config);
                stats[r] = p.score(p.select(config.cap_m));
                break;
            }
            case TestMethod::Kind::adapted: {
                const DegreeProfile p(sample, config.cap_m, config);
                stats[r] = p.score(std::max(p.select(config.cap_m), 2));
                break;
            }
        }
    });

    std::sort(stats.begin(), stats.end());
    // linear-interpolation sample quantile
    const double pos = (1.0 - alpha) * (static_cast<double>(reps) - 1.0);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, reps - 1);
    const double frac = pos - static_cast<double>(lo);
    return stats[lo] * (1.0 - frac) + stats[hi] * frac;
}

}  // namespace sphuni
