#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sphuni/sphere.hpp"

namespace sphuni {

/// Finite-support Sobolev weights v_1..v_K. Trailing zeros are allowed and
/// ignored; at least one weight must be nonzero.
struct WeightSequence {
    std::vector<double> weights;  // weights[k-1] = v_k

    static WeightSequence rayleigh() { return {{1.0}}; }
    static WeightSequence bingham() { return {{0.0, 1.0}}; }
    static WeightSequence score(int max_degree);

    /// Largest k with v_k != 0. Throws if all weights vanish.
    int max_degree() const;
};

/// Knobs for the data-driven order selection.
struct SelectionConfig {
    int cap_m = 10;                    ///< upper limit M on the candidate order
    std::string penalty_rule = "dof";  ///< p_K rule; "dof" means p_K = sum_{k<=K} d_k

    void validate() const;
};

/// Result of a uniformity test decision.
struct TestOutcome {
    double statistic = 0.0;
    std::optional<int> selected_k;  ///< present for the data-driven tests
    int dof = 0;                    ///< dof of the asymptotic null chi-square
    double critical_value = 0.0;
    double alpha = 0.0;
    bool reject = false;
    double p_value = 1.0;
};

/// Per-degree kernel sums T_k = (1/n) sum_{i,j} h_k(x_i' x_j), k = 1..K,
/// from a single O(n^2 K) sweep over the sample. Every statistic and both
/// selectors below are cheap functions of this profile, so one profile per
/// sample serves all tests at once.
class DegreeProfile {
public:
    DegreeProfile(const UnitSample& sample, int max_degree, const SelectionConfig& config = {});

    std::size_t size_n() const { return n_; }
    int dim_d() const { return dim_; }
    int max_degree() const { return static_cast<int>(terms_.size()); }
    const std::vector<double>& terms() const { return terms_; }

    /// S_K = sum_{k<=K} T_k.
    double score(int max_degree) const;
    /// B_S(K) = S_K - p_K log n. Requires n >= 2.
    double penalized(int max_degree) const;
    /// Smallest K in 1..cap attaining the maximum of B_S. Requires n >= 2.
    int select(int cap) const;

private:
    std::size_t n_;
    int dim_;
    std::vector<double> terms_;      // T_1..T_K
    std::vector<double> penalties_;  // p_1..p_K
};

/// S_{v_k} = (1/n) sum_{i,j} sum_k v_k^2 h_k(x_i' x_j), diagonal included.
double sobolev_statistic(const UnitSample& sample, const WeightSequence& weights);

/// d n |mean|^2; identical to the Sobolev statistic with weight on k = 1.
double rayleigh_statistic(const UnitSample& sample);

/// n d(d+2)/2 [ (1/n^2) sum (x_i'x_j)^2 - 1/d ]; the k = 2 Sobolev statistic.
double bingham_statistic(const UnitSample& sample);

/// Quadratic score S_K (unit weights up to K).
double score_statistic(const UnitSample& sample, int max_degree);

/// Penalized score B_S(K) = S_K - p_K log n.
double penalized_score(const UnitSample& sample, int max_degree, const SelectionConfig& config = {});

/// Data-driven order k-hat of the penalized score over 1..cap_m.
int select_k(const UnitSample& sample, const SelectionConfig& config = {});

/// Jupp's data-driven Sobolev test: S at k-hat against the chi2_{d_1} null.
TestOutcome data_driven_test(const UnitSample& sample, const SelectionConfig& config, double alpha);

/// Parity-robust variant: order floored at 2, null law chi2_{d_1 + d_2}.
TestOutcome adapted_test(const UnitSample& sample, const SelectionConfig& config, double alpha);

/// Uniformity test selector shared by the CLI, the simulation harness, and
/// the critical-value calibrator.
struct TestMethod {
    enum class Kind { rayleigh, bingham, score, jupp, adapted };
    Kind kind = Kind::adapted;
    int score_degree = 1;  ///< K for Kind::score

    /// Parses "rayleigh" | "bingham" | "score:K" | "jupp" | "adapted".
    static TestMethod parse(const std::string& text);
    std::string name() const;
    /// dof of the asymptotic null law in dimension d.
    int null_dof(int dim) const;
};

/// Runs one named test at level alpha against its asymptotic critical value.
TestOutcome run_test(const UnitSample& sample, const TestMethod& method, double alpha,
                     const SelectionConfig& config = {});

}  // namespace sphuni
