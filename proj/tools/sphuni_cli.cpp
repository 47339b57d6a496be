// sphuni: Sobolev uniformity tests on the hypersphere.
//
// Subcommands:
//   test      run a uniformity test on a data file, JSON result on stdout
//   kernel    evaluate the zonal kernel h_k(t) and the harmonic dimension d_k
//   power     asymptotic local power curves over a tau grid (CSV on stdout)
//   calibrate Monte Carlo critical value under simulated uniformity
//   simulate  rejection-frequency study over a (family, n, ell, tau) grid
//
// Exit codes: 0 success, 1 configuration/argument error, 2 runtime error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>

#include "sphuni/asymptotics.hpp"
#include "sphuni/harness.hpp"
#include "sphuni/kernels.hpp"

namespace {

using nlohmann::json;
using namespace sphuni;

json outcome_to_json(const TestOutcome& outcome, const std::string& method) {
    json j{{"method", method},
           {"statistic", outcome.statistic},
           {"dof", outcome.dof},
           {"critical_value", outcome.critical_value},
           {"alpha", outcome.alpha},
           {"reject", outcome.reject},
           {"p_value", outcome.p_value}};
    if (outcome.selected_k)
        j["selected_k"] = *outcome.selected_k;
    else
        j["selected_k"] = nullptr;
    return j;
}

struct TauGrid {
    double start = 0.0, stop = 6.0, step = 0.5;
};

TauGrid parse_tau_grid(const std::string& text) {
    TauGrid g;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &g.start, &g.stop, &g.step) != 3 || g.step <= 0.0 ||
        g.stop < g.start)
        throw CLI::ValidationError("--tau-grid", "expected START:STOP:STEP with STEP > 0, got '" + text + "'");
    return g;
}

int run(int argc, char** argv) {
    CLI::App app{"Sobolev uniformity tests on the hypersphere"};
    app.require_subcommand(1);

    // --- test ---
    auto* test_cmd = app.add_subcommand("test", "test a sample file for uniformity");
    std::string input, method_name = "adapted";
    double alpha = 0.05;
    int cap_m = 10;
    bool renormalize = false;
    test_cmd->add_option("--input", input, "sample file, one observation per line")->required();
    test_cmd->add_option("--method", method_name, "rayleigh|bingham|score:K|jupp|adapted")
        ->capture_default_str();
    test_cmd->add_option("--alpha", alpha, "test level")->capture_default_str();
    test_cmd->add_option("--cap-m", cap_m, "selection cap M for jupp/adapted")->capture_default_str();
    test_cmd->add_flag("--renormalize", renormalize, "rescale rows instead of requiring unit norms");

    // --- kernel ---
    auto* kernel_cmd = app.add_subcommand("kernel", "print h_k(t) and d_k");
    int kernel_k = 1, kernel_d = 3;
    double kernel_t = 0.0;
    kernel_cmd->add_option("--k", kernel_k, "degree")->required();
    kernel_cmd->add_option("--d", kernel_d, "sphere dimension d (ambient)")->required();
    kernel_cmd->add_option("--t", kernel_t, "cosine argument in [-1, 1]")->required();

    // --- power ---
    auto* power_cmd = app.add_subcommand("power", "asymptotic power against contiguous alternatives");
    std::string power_model = "watson", power_test = "adapted", tau_grid_text = "0:6:0.5";
    int power_d = 3;
    double power_alpha = 0.05;
    power_cmd->add_option("--model", power_model, "vmf|watson")->capture_default_str();
    power_cmd->add_option("--test", power_test, "rayleigh|bingham|jupp|adapted")->capture_default_str();
    power_cmd->add_option("--d", power_d, "sphere dimension")->capture_default_str();
    power_cmd->add_option("--alpha", power_alpha, "test level")->capture_default_str();
    power_cmd->add_option("--tau-grid", tau_grid_text, "START:STOP:STEP")->capture_default_str();

    // --- calibrate ---
    auto* cal_cmd = app.add_subcommand("calibrate", "Monte Carlo critical value under uniformity");
    std::string cal_test = "adapted";
    std::size_t cal_n = 500, cal_reps = 2000;
    int cal_d = 3, cal_threads = 0, cal_cap = 10;
    double cal_alpha = 0.05;
    std::uint64_t cal_seed = 20250810;
    cal_cmd->add_option("--test", cal_test, "rayleigh|bingham|score:K|jupp|adapted")->capture_default_str();
    cal_cmd->add_option("--n", cal_n, "sample size")->capture_default_str();
    cal_cmd->add_option("--d", cal_d, "sphere dimension")->capture_default_str();
    cal_cmd->add_option("--alpha", cal_alpha, "test level")->capture_default_str();
    cal_cmd->add_option("--reps", cal_reps, "replications (>= 100)")->capture_default_str();
    cal_cmd->add_option("--seed", cal_seed, "master seed")->capture_default_str();
    cal_cmd->add_option("--cap-m", cal_cap, "selection cap M")->capture_default_str();
    cal_cmd->add_option("--threads", cal_threads, "worker threads (0 = auto)")->capture_default_str();

    // --- simulate ---
    auto* sim_cmd = app.add_subcommand("simulate", "rejection-frequency experiment grid");
    std::string config_path, out_dir = ".", format = "csv", profile = "desk";
    int sim_threads = 0;
    sim_cmd->add_option("--config", config_path, "JSON config overriding the profile defaults");
    sim_cmd->add_option("--out", out_dir, "output directory")->capture_default_str();
    sim_cmd->add_option("--format", format, "csv|json")->capture_default_str();
    sim_cmd->add_option("--threads", sim_threads, "worker threads (0 = auto)")->capture_default_str();
    sim_cmd->add_option("--profile", profile, "desk|paper baseline grid")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints usage or help
        return code == 0 ? 0 : 1;
    }

    if (test_cmd->parsed()) {
        const auto method = TestMethod::parse(method_name);
        const auto mode = renormalize ? UnitSample::Normalize::renormalize : UnitSample::Normalize::strict;
        const UnitSample sample = load_unit_sample(input, mode);
        const TestOutcome outcome = run_test(sample, method, alpha, SelectionConfig{cap_m, "dof"});
        std::cout << outcome_to_json(outcome, method.name()).dump(2) << '\n';
        return 0;
    }

    if (kernel_cmd->parsed()) {
        if (kernel_t < -1.0 || kernel_t > 1.0)
            throw std::invalid_argument("kernel: t must lie in [-1, 1]");
        std::printf("h_%d(%.*g) = %.12g\n", kernel_k, 12, kernel_t, kernel_h(kernel_k, kernel_t, kernel_d));
        std::printf("d_%d = %llu\n", kernel_k,
                    static_cast<unsigned long long>(harmonic_dimension(kernel_k, kernel_d)));
        return 0;
    }

    if (power_cmd->parsed()) {
        const AngularFamily family = parse_family(power_model);
        Vector mu = Vector::Zero(power_d);
        mu(0) = 1.0;
        const AngularModel model = family == AngularFamily::von_mises_fisher
                                       ? AngularModel::von_mises_fisher(0.0, mu)
                                       : AngularModel::watson(0.0, mu);
        const TestMethod method = TestMethod::parse(power_test);
        const TauGrid grid = parse_tau_grid(tau_grid_text);
        const double ell = 2.0 * model.k_star();
        std::printf("tau,xi_1,xi_2,power\n");
        for (double tau = grid.start; tau <= grid.stop + 1e-12; tau += grid.step) {
            const ContiguousSpec spec(model, tau, ell);
            std::printf("%.12g,%.12g,%.12g,%.12g\n", tau, noncentrality_xi(1, model, tau, power_d),
                        noncentrality_xi(2, model, tau, power_d),
                        theoretical_power(method, spec, power_alpha, power_d));
        }
        return 0;
    }

    if (cal_cmd->parsed()) {
        const double value =
            calibrate_critical_value(TestMethod::parse(cal_test), cal_n, cal_d, cal_alpha, cal_reps,
                                     SeedSpec{cal_seed, 0}, SelectionConfig{cal_cap, "dof"}, cal_threads);
        std::printf("%.12g\n", value);
        return 0;
    }

    if (sim_cmd->parsed()) {
        ExperimentGrid defaults;
        if (profile == "desk")
            defaults = desk_profile();
        else if (profile == "paper")
            defaults = paper_profile();
        else
            throw std::invalid_argument("simulate: --profile must be desk or paper");
        const ExperimentGrid grid =
            config_path.empty() ? (defaults.validate(), defaults) : load_grid(config_path, defaults);

        ResultFormat fmt;
        if (format == "csv")
            fmt = ResultFormat::csv;
        else if (format == "json")
            fmt = ResultFormat::json;
        else
            throw std::invalid_argument("simulate: --format must be csv or json");

        const std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        const RejectionTable table = run_experiment(grid, sim_threads, &std::cerr);
        const auto results = dir / (format == "csv" ? "rejections.csv" : "rejections.json");
        emit_results(table, results, fmt);
        emit_plot_script(table, dir / "plot_rejections.py");
        std::cerr << "wrote " << results.string() << " and " << (dir / "plot_rejections.py").string() << '\n';
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
