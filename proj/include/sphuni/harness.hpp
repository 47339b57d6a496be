#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sphuni/models.hpp"
#include "sphuni/statistics.hpp"

namespace sphuni {

/// Full simulation grid: every (family, n, ell, tau) cell is sampled `reps`
/// times and each requested test is applied to the same replications.
struct ExperimentGrid {
    int d = 3;
    std::vector<std::size_t> n_values = {200, 500, 1500};
    std::vector<double> ell_values = {2, 4, 6};
    std::vector<double> tau_values = {0, 1, 2, 3, 4, 5, 6};
    std::vector<AngularFamily> families = {AngularFamily::von_mises_fisher, AngularFamily::watson};
    std::vector<TestMethod> tests = {TestMethod{TestMethod::Kind::jupp},
                                     TestMethod{TestMethod::Kind::adapted}};
    std::size_t reps = 1000;
    double alpha = 0.05;
    int cap_m = 10;
    std::uint64_t master_seed = 20250810;
    Vector mu;  ///< model location; empty means e_1 (every statistic is rotation invariant)

    void validate() const;
    Vector resolved_mu() const;
};

/// reps = 1000, coarse tau grid; a full pass fits on a laptop.
ExperimentGrid desk_profile();
/// The full-scale protocol: reps = 5000, tau step 0.5.
ExperimentGrid paper_profile();

/// Merges a JSON config document over profile defaults and validates.
/// Recognized keys: d, n_values, ell_values, tau_values, families, tests,
/// reps, alpha, cap_m, master_seed.
ExperimentGrid load_grid(const std::filesystem::path& config_path, const ExperimentGrid& defaults);

struct RejectionRow {
    std::string family;
    std::string test;
    int d = 3;
    std::size_t n = 0;
    double ell = 0.0;
    double tau = 0.0;
    std::size_t reps = 0;
    std::size_t reject_count = 0;
    double reject_freq = 0.0;
    double mc_stderr = 0.0;

    bool operator==(const RejectionRow&) const = default;
};

struct RejectionTable {
    std::vector<RejectionRow> rows;

    bool operator==(const RejectionTable&) const = default;
};

/// Runs the whole grid. Replications are distributed over `threads` workers;
/// each (cell, replication) pair owns a fixed seed stream and a fixed result
/// slot, so the output is byte-identical for any worker count. Per-cell
/// progress and tau = 0 size warnings go to `log` when given.
RejectionTable run_experiment(const ExperimentGrid& grid, int threads = 0, std::ostream* log = nullptr);

enum class ResultFormat { csv, json };

/// CSV with the fixed header family,test,d,n,ell,tau,reps,reject_count,
/// reject_freq,mc_stderr — or a JSON array of row objects. Numeric fields
/// round-trip exactly.
void emit_results(const RejectionTable& table, const std::filesystem::path& path, ResultFormat format);

RejectionTable read_results_csv(const std::filesystem::path& path);
RejectionTable read_results_json(const std::filesystem::path& path);

/// Writes a self-contained matplotlib script: one panel per (family, test),
/// one curve per (n, ell), rejection frequency against tau, plus the gray
/// asymptotic Bingham power curve on Watson panels.
void emit_plot_script(const RejectionTable& table, const std::filesystem::path& path);

}  // namespace sphuni
