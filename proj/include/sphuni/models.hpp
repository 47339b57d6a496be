#pragma once

#include <string>
#include <vector>

#include "sphuni/sphere.hpp"

namespace sphuni {

enum class AngularFamily { von_mises_fisher, watson, exp_power, directional_cauchy };

std::string family_name(AngularFamily family);
AngularFamily parse_family(const std::string& text);

/// A rotationally symmetric alternative with density proportional to
/// g(kappa mu'x) — except the directional Cauchy, whose angular function is
/// evaluated at kappa (1 - mu'x). The normalizing constant is never needed:
/// sampling is by rejection and the test statistics ignore it.
class AngularModel {
public:
    static AngularModel von_mises_fisher(double kappa, Vector mu);
    static AngularModel watson(double kappa, Vector mu);
    static AngularModel exp_power(int b, double kappa, Vector mu);
    static AngularModel directional_cauchy(double kappa, Vector mu);

    /// Same family and location, different concentration.
    AngularModel with_kappa(double kappa) const;

    AngularFamily family() const { return family_; }
    double kappa() const { return kappa_; }
    const Vector& mu() const { return mu_; }
    int dim() const { return static_cast<int>(mu_.size()); }
    int exp_power_degree() const { return b_; }

    /// True for the families with derivative data at zero (all but Cauchy).
    bool has_derivative_data() const { return family_ != AngularFamily::directional_cauchy; }
    /// Smallest k with g^(k)(0) != 0: 1 for vMF, 2 for Watson, b for ExpPower.
    int k_star() const;
    /// g(0), g'(0), ..., g^(k*)(0).
    std::vector<double> g_derivs_at_zero() const;

    /// log g at cosine t (the family's own argument convention applied).
    double log_g(double t) const;
    /// sup over t in [-1,1] of log g; the rejection envelope.
    double log_g_max() const;

private:
    AngularModel(AngularFamily family, double kappa, Vector mu, int b);

    AngularFamily family_;
    double kappa_;
    Vector mu_;
    int b_;  // ExpPower exponent, 0 otherwise
};

/// A local alternative kappa_n = n^(-1/ell) tau around a fixed family/location.
struct ContiguousSpec {
    AngularModel model;  ///< kappa field ignored; family, mu, b used
    double tau = 0.0;
    double ell = 2.0;

    ContiguousSpec(AngularModel base, double tau, double ell);
};

/// Concentration resolved at sample size n.
AngularModel resolve_contiguous(const ContiguousSpec& spec, std::size_t n);

/// n iid draws from the model by rejection against the uniform law with
/// envelope sup g; kappa = 0 short-circuits to the uniform sampler.
UnitSample sample_model(std::size_t n, const AngularModel& model, const SeedSpec& seed);

}  // namespace sphuni
