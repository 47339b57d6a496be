#include "sphuni/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sphuni {

std::string family_name(AngularFamily family) {
    switch (family) {
        case AngularFamily::von_mises_fisher: return "vmf";
        case AngularFamily::watson: return "watson";
        case AngularFamily::exp_power: return "exp_power";
        case AngularFamily::directional_cauchy: return "cauchy";
    }
    return "?";
}

AngularFamily parse_family(const std::string& text) {
    if (text == "vmf" || text == "von_mises_fisher" || text == "vonMisesFisher")
        return AngularFamily::von_mises_fisher;
    if (text == "watson" || text == "Watson") return AngularFamily::watson;
    if (text == "exp_power" || text == "ExpPower") return AngularFamily::exp_power;
    if (text == "cauchy" || text == "directional_cauchy" || text == "DirectionalCauchy")
        return AngularFamily::directional_cauchy;
    throw std::invalid_argument("unknown angular family '" + text + "'");
}

AngularModel::AngularModel(AngularFamily family, double kappa, Vector mu, int b)
    : family_(family), kappa_(kappa), mu_(std::move(mu)), b_(b) {
    if (!(kappa_ >= 0.0) || !std::isfinite(kappa_))
        throw std::invalid_argument("AngularModel: kappa must be finite and >= 0");
    if (mu_.size() < 2) throw std::invalid_argument("AngularModel: mu must live in R^d, d >= 2");
    if (std::abs(mu_.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("AngularModel: mu must be a unit vector (|mu| within 1e-10 of 1)");
    if (family_ == AngularFamily::exp_power && b_ < 1)
        throw std::invalid_argument("AngularModel: exp_power exponent b must be a positive integer");
    if (!std::isfinite(log_g_max())) throw std::domain_error("AngularModel: g is not finite on [-1, 1]");
}

AngularModel AngularModel::von_mises_fisher(double kappa, Vector mu) {
    return AngularModel(AngularFamily::von_mises_fisher, kappa, std::move(mu), 0);
}
AngularModel AngularModel::watson(double kappa, Vector mu) {
    return AngularModel(AngularFamily::watson, kappa, std::move(mu), 0);
}
AngularModel AngularModel::exp_power(int b, double kappa, Vector mu) {
    return AngularModel(AngularFamily::exp_power, kappa, std::move(mu), b);
}
AngularModel AngularModel::directional_cauchy(double kappa, Vector mu) {
    return AngularModel(AngularFamily::directional_cauchy, kappa, std::move(mu), 0);
}

AngularModel AngularModel::with_kappa(double kappa) const {
    return AngularModel(family_, kappa, mu_, b_);
}

int AngularModel::k_star() const {
    switch (family_) {
        case AngularFamily::von_mises_fisher: return 1;
        case AngularFamily::watson: return 2;
        case AngularFamily::exp_power: return b_;
        case AngularFamily::directional_cauchy:
            throw std::domain_error("directional Cauchy has no derivative data at zero");
    }
    throw std::domain_error("bad family");
}

std::vector<double> AngularModel::g_derivs_at_zero() const {
    const int ks = k_star();  // throws for Cauchy
    std::vector<double> derivs(static_cast<std::size_t>(ks) + 1, 0.0);
    derivs[0] = 1.0;  // g(0) = exp(0) = 1 for every exponential-type family
    double k_star_deriv = 1.0;
    for (int i = 2; i <= ks; ++i) k_star_deriv *= i;  // g^(b)(0) = b! for g = exp(s^b)
    derivs[static_cast<std::size_t>(ks)] = k_star_deriv;
    return derivs;
}

double AngularModel::log_g(double t) const {
    switch (family_) {
        case AngularFamily::von_mises_fisher: return kappa_ * t;
        case AngularFamily::watson: {
            const double s = kappa_ * t;
            return s * s;
        }
        case AngularFamily::exp_power: return std::pow(kappa_ * t, b_);
        case AngularFamily::directional_cauchy: return -std::log1p(2.0 * kappa_ * (1.0 - t));
    }
    throw std::domain_error("bad family");
}

double AngularModel::log_g_max() const {
    // every family attains its sup at t = 1 (Watson and even-b ExpPower also
    // at t = -1, same value)
    return log_g(1.0);
}

ContiguousSpec::ContiguousSpec(AngularModel base, double tau, double ell)
    : model(std::move(base)), tau(tau), ell(ell) {
    if (!(tau >= 0.0)) throw std::invalid_argument("ContiguousSpec: tau must be >= 0");
    if (!(ell > 0.0)) throw std::invalid_argument("ContiguousSpec: ell must be > 0");
}

AngularModel resolve_contiguous(const ContiguousSpec& spec, std::size_t n) {
    if (n < 1) throw std::invalid_argument("resolve_contiguous: n must be >= 1");
    const double kappa = std::pow(static_cast<double>(n), -1.0 / spec.ell) * spec.tau;
    return spec.model.with_kappa(kappa);
}

UnitSample sample_model(std::size_t n, const AngularModel& model, const SeedSpec& seed) {
    if (n < 1) throw std::invalid_argument("sample_model: n must be >= 1");
    if (model.kappa() == 0.0) return sample_uniform_sphere(n, model.dim(), seed);

    const int d = model.dim();
    const double log_envelope = model.log_g_max();
    Rng rng(seed);
    Matrix pts(static_cast<Eigen::Index>(n), d);
    Eigen::RowVectorXd z(d);
    const Eigen::RowVectorXd mu = model.mu().transpose();

    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        for (;;) {
            // uniform proposal; acceptance depends on the cosine alone, which
            // leaves the direction orthogonal to mu untouched (uniform)
            double norm2;
            do {
                for (int c = 0; c < d; ++c) z(c) = rng.normal();
                norm2 = z.squaredNorm();
            } while (norm2 <= 0.0);
            z /= std::sqrt(norm2);
            const double t = std::clamp(mu.dot(z), -1.0, 1.0);
            const double u = rng.uniform();
            if (u == 0.0 || std::log(u) < model.log_g(t) - log_envelope) break;
        }
        pts.row(i) = z;
    }
    return UnitSample(std::move(pts), UnitSample::Normalize::renormalize);
}

}  // namespace sphuni
