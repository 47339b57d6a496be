#include "sphuni/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sphuni/distributions.hpp"
#include "sphuni/kernels.hpp"

namespace sphuni {

namespace {

// Recurrence constants: C_1 = first_scale * t and
// C_k = step_a[k] * t * C_{k-1} - step_b[k] * C_{k-2}. Chebyshev for d = 2,
// Gegenbauer with lambda = (d - 2)/2 otherwise.
struct RecurrenceCoeffs {
    double first_scale;
    std::vector<double> step_a, step_b;  // indexed by degree

    RecurrenceCoeffs(int max_degree, int dim)
        : first_scale(dim == 2 ? 1.0 : dim - 2.0),
          step_a(static_cast<std::size_t>(max_degree) + 1, 0.0),
          step_b(static_cast<std::size_t>(max_degree) + 1, 0.0) {
        const double lambda = (dim - 2) / 2.0;
        for (int k = 2; k <= max_degree; ++k) {
            if (dim == 2) {
                step_a[static_cast<std::size_t>(k)] = 2.0;
                step_b[static_cast<std::size_t>(k)] = 1.0;
            } else {
                step_a[static_cast<std::size_t>(k)] = 2.0 * (k + lambda - 1.0) / k;
                step_b[static_cast<std::size_t>(k)] = (k + 2.0 * lambda - 2.0) / k;
            }
        }
    }
};

// Adds sum_i C_k(t[i]) (raw Gegenbauer / Chebyshev values, no kernel scale)
// into acc[k-1] for k = 1..K. Pairs are walked in blocks of independent
// lanes with one partial sum per (degree, lane), so every lane loop is free
// of cross-lane dependencies and vectorizes; this is the O(n^2 K) hot loop.
// Lane partials are reduced in a fixed order to keep results deterministic.
void accumulate_recurrence(const double* t, std::size_t m, int max_degree, const RecurrenceCoeffs& rc,
                           double* acc, double* lane_partials) {
    constexpr std::size_t kLanes = 32;
    const auto K = static_cast<std::size_t>(max_degree);
    std::fill(lane_partials, lane_partials + K * kLanes, 0.0);

    std::size_t base = 0;
    for (; base + kLanes <= m; base += kLanes) {
        double ts[kLanes], cp[kLanes], cc[kLanes];
        for (std::size_t l = 0; l < kLanes; ++l) {
            ts[l] = t[base + l];
            cp[l] = 1.0;
            cc[l] = rc.first_scale * ts[l];
            lane_partials[l] += cc[l];
        }
        for (int k = 2; k <= max_degree; ++k) {
            const double a = rc.step_a[static_cast<std::size_t>(k)];
            const double b = rc.step_b[static_cast<std::size_t>(k)];
            double* part = lane_partials + static_cast<std::size_t>(k - 1) * kLanes;
            for (std::size_t l = 0; l < kLanes; ++l) {
                const double next = a * ts[l] * cc[l] - b * cp[l];
                cp[l] = cc[l];
                cc[l] = next;
                part[l] += next;
            }
        }
    }
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t l = 0; l < kLanes; ++l) acc[k] += lane_partials[k * kLanes + l];

    for (; base < m; ++base) {  // scalar tail
        const double ti = t[base];
        double prev = 1.0, cur = rc.first_scale * ti;
        acc[0] += cur;
        for (int k = 2; k <= max_degree; ++k) {
            const double next =
                rc.step_a[static_cast<std::size_t>(k)] * ti * cur - rc.step_b[static_cast<std::size_t>(k)] * prev;
            prev = cur;
            cur = next;
            acc[k - 1] += next;
        }
    }
}

// kernel scale: h_k = scale_k * C_k (scale 2 for d = 2)
double kernel_scale(int degree, int dim) {
    return dim == 2 ? 2.0 : 1.0 + 2.0 * degree / (dim - 2.0);
}

double chi2_upper_p(double statistic, int dof) { return 1.0 - chi2_cdf(statistic, dof); }

TestOutcome make_outcome(double statistic, std::optional<int> selected, int dof, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    TestOutcome out;
    out.statistic = statistic;
    out.selected_k = selected;
    out.dof = dof;
    out.alpha = alpha;
    out.critical_value = chi2_quantile(1.0 - alpha, dof);
    out.reject = statistic > out.critical_value;
    out.p_value = chi2_upper_p(statistic, dof);
    return out;
}

}  // namespace

WeightSequence WeightSequence::score(int max_degree) {
    if (max_degree < 1) throw std::invalid_argument("score weights need max_degree >= 1");
    WeightSequence w;
    w.weights.assign(static_cast<std::size_t>(max_degree), 1.0);
    return w;
}

int WeightSequence::max_degree() const {
    for (std::size_t k = weights.size(); k > 0; --k)
        if (weights[k - 1] != 0.0) return static_cast<int>(k);
    throw std::invalid_argument("WeightSequence: all weights are zero");
}

void SelectionConfig::validate() const {
    if (cap_m < 2) throw std::invalid_argument("SelectionConfig: cap_m must be >= 2");
    if (penalty_rule != "dof")
        throw std::invalid_argument("SelectionConfig: unknown penalty rule '" + penalty_rule + "'");
}

DegreeProfile::DegreeProfile(const UnitSample& sample, int max_degree, const SelectionConfig& config)
    : n_(sample.size_n()), dim_(sample.dim_d()) {
    if (max_degree < 1) throw std::invalid_argument("DegreeProfile: max_degree must be >= 1");
    KernelSpec{dim_, max_degree}.validate();
    if (config.penalty_rule != "dof")
        throw std::invalid_argument("DegreeProfile: unknown penalty rule '" + config.penalty_rule + "'");

    const std::size_t K = static_cast<std::size_t>(max_degree);
    std::vector<double> acc(K, 0.0);

    const Matrix& x = sample.points();
    const auto n = static_cast<Eigen::Index>(n_);
    const RecurrenceCoeffs rc(max_degree, dim_);
    std::vector<double> row(n_);
    std::vector<double> lane_partials(K * 32);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const Eigen::Index m = n - i - 1;
        Eigen::Map<Eigen::VectorXd> row_map(row.data(), m);
        row_map.noalias() = x.bottomRows(m) * x.row(i).transpose();
        row_map = row_map.cwiseMax(-1.0).cwiseMin(1.0);
        accumulate_recurrence(row.data(), static_cast<std::size_t>(m), max_degree, rc, acc.data(),
                              lane_partials.data());
    }

    terms_.resize(K);
    penalties_.resize(K);
    double pk = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double dk = static_cast<double>(harmonic_dimension(static_cast<int>(k), dim_));
        // diagonal pairs contribute h_k(1) = d_k each; off-diagonal sums doubled
        terms_[k - 1] = dk + 2.0 / static_cast<double>(n_) * kernel_scale(static_cast<int>(k), dim_) * acc[k - 1];
        pk += dk;
        penalties_[k - 1] = pk;
    }
}

double DegreeProfile::score(int max_degree) const {
    if (max_degree < 1 || max_degree > this->max_degree())
        throw std::invalid_argument("DegreeProfile::score: degree outside computed range");
    double s = 0.0;
    for (int k = 0; k < max_degree; ++k) s += terms_[static_cast<std::size_t>(k)];
    return s;
}

double DegreeProfile::penalized(int max_degree) const {
    if (n_ < 2) throw std::invalid_argument("penalized score needs n >= 2");
    return score(max_degree) - penalties_[static_cast<std::size_t>(max_degree - 1)] * std::log(static_cast<double>(n_));
}

int DegreeProfile::select(int cap) const {
    if (cap < 1 || cap > max_degree()) throw std::invalid_argument("DegreeProfile::select: cap outside computed range");
    if (n_ < 2) throw std::invalid_argument("select needs n >= 2");
    int best_k = 1;
    double best = penalized(1);
    for (int k = 2; k <= cap; ++k) {
        const double b = penalized(k);
        if (b > best) {  // strict: exact ties resolve to the smallest K
            best = b;
            best_k = k;
        }
    }
    return best_k;
}

double sobolev_statistic(const UnitSample& sample, const WeightSequence& weights) {
    const int K = weights.max_degree();
    const DegreeProfile profile(sample, K);
    double s = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double v = weights.weights[static_cast<std::size_t>(k - 1)];
        if (v != 0.0) s += v * v * profile.terms()[static_cast<std::size_t>(k - 1)];
    }
    return s;
}

double rayleigh_statistic(const UnitSample& sample) {
    const Matrix& x = sample.points();
    const Eigen::RowVectorXd mean = x.colwise().mean();
    return sample.dim_d() * static_cast<double>(sample.size_n()) * mean.squaredNorm();
}

double bingham_statistic(const UnitSample& sample) {
    const Matrix& x = sample.points();
    const double n = static_cast<double>(sample.size_n());
    const int d = sample.dim_d();
    const Eigen::MatrixXd second_moment = x.transpose() * x;  // d x d, = sum_i x_i x_i'
    const double pair_sum = second_moment.squaredNorm();      // sum_{i,j} (x_i' x_j)^2
    return n * (d * (d + 2.0) / 2.0) * (pair_sum / (n * n) - 1.0 / d);
}

double score_statistic(const UnitSample& sample, int max_degree) {
    return DegreeProfile(sample, max_degree).score(max_degree);
}

double penalized_score(const UnitSample& sample, int max_degree, const SelectionConfig& config) {
    if (sample.size_n() < 2) throw std::invalid_argument("penalized_score: n must be >= 2");
    return DegreeProfile(sample, max_degree, config).penalized(max_degree);
}

int select_k(const UnitSample& sample, const SelectionConfig& config) {
    config.validate();
    if (sample.size_n() < 2) throw std::invalid_argument("select_k: n must be >= 2");
    return DegreeProfile(sample, config.cap_m, config).select(config.cap_m);
}

TestOutcome data_driven_test(const UnitSample& sample, const SelectionConfig& config, double alpha) {
    config.validate();
    if (sample.size_n() < 2) throw std::invalid_argument("data_driven_test: n must be >= 2");
    const DegreeProfile profile(sample, config.cap_m, config);
    const int k_hat = profile.select(config.cap_m);
    const int dof = static_cast<int>(harmonic_dimension(1, sample.dim_d()));
    return make_outcome(profile.score(k_hat), k_hat, dof, alpha);
}

TestOutcome adapted_test(const UnitSample& sample, const SelectionConfig& config, double alpha) {
    config.validate();
    if (sample.size_n() < 2) throw std::invalid_argument("adapted_test: n must be >= 2");
    const DegreeProfile profile(sample, config.cap_m, config);
    const int k_star = std::max(profile.select(config.cap_m), 2);
    const int dof = static_cast<int>(harmonic_dimension(1, sample.dim_d()) + harmonic_dimension(2, sample.dim_d()));
    return make_outcome(profile.score(k_star), k_star, dof, alpha);
}

TestMethod TestMethod::parse(const std::string& text) {
    if (text == "rayleigh") return {Kind::rayleigh, 1};
    if (text == "bingham") return {Kind::bingham, 2};
    if (text == "jupp") return {Kind::jupp, 1};
    if (text == "adapted") return {Kind::adapted, 2};
    if (text.rfind("score:", 0) == 0) {
        const int k = std::stoi(text.substr(6));
        if (k < 1) throw std::invalid_argument("score:K needs K >= 1");
        return {Kind::score, k};
    }
    throw std::invalid_argument("unknown test method '" + text +
                                "' (expected rayleigh|bingham|score:K|jupp|adapted)");
}

std::string TestMethod::name() const {
    switch (kind) {
        case Kind::rayleigh: return "rayleigh";
        case Kind::bingham: return "bingham";
        case Kind::score: return "score:" + std::to_string(score_degree);
        case Kind::jupp: return "jupp";
        case Kind::adapted: return "adapted";
    }
    return "?";
}

int TestMethod::null_dof(int dim) const {
    switch (kind) {
        case Kind::rayleigh: return static_cast<int>(harmonic_dimension(1, dim));
        case Kind::bingham: return static_cast<int>(harmonic_dimension(2, dim));
        case Kind::score: {
            std::uint64_t dof = 0;
            for (int k = 1; k <= score_degree; ++k) dof += harmonic_dimension(k, dim);
            return static_cast<int>(dof);
        }
        case Kind::jupp: return static_cast<int>(harmonic_dimension(1, dim));
        case Kind::adapted:
            return static_cast<int>(harmonic_dimension(1, dim) + harmonic_dimension(2, dim));
    }
    return 0;
}

TestOutcome run_test(const UnitSample& sample, const TestMethod& method, double alpha,
                     const SelectionConfig& config) {
    switch (method.kind) {
        case TestMethod::Kind::rayleigh:
            return make_outcome(rayleigh_statistic(sample), std::nullopt, method.null_dof(sample.dim_d()), alpha);
        case TestMethod::Kind::bingham:
            return make_outcome(bingham_statistic(sample), std::nullopt, method.null_dof(sample.dim_d()), alpha);
        case TestMethod::Kind::score:
            return make_outcome(score_statistic(sample, method.score_degree), std::nullopt,
                                method.null_dof(sample.dim_d()), alpha);
        case TestMethod::Kind::jupp: return data_driven_test(sample, config, alpha);
        case TestMethod::Kind::adapted: return adapted_test(sample, config, alpha);
    }
    throw std::invalid_argument("run_test: bad method");
}

}  // namespace sphuni
