#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sphuni/asymptotics.hpp"
#include "sphuni/harness.hpp"
#include "sphuni/kernels.hpp"

namespace py = pybind11;
using namespace sphuni;

namespace {

SeedSpec make_seed(std::uint64_t master, std::uint64_t stream) { return SeedSpec{master, stream}; }

UnitSample sample_from_array(const Matrix& points, bool renormalize) {
    return UnitSample(points, renormalize ? UnitSample::Normalize::renormalize : UnitSample::Normalize::strict);
}

py::dict outcome_dict(const TestOutcome& o) {
    py::dict d;
    d["statistic"] = o.statistic;
    d["selected_k"] = o.selected_k ? py::cast(*o.selected_k) : py::none();
    d["dof"] = o.dof;
    d["critical_value"] = o.critical_value;
    d["alpha"] = o.alpha;
    d["reject"] = o.reject;
    d["p_value"] = o.p_value;
    return d;
}

AngularModel make_model(const std::string& family, double kappa, const Vector& mu, int b) {
    switch (parse_family(family)) {
        case AngularFamily::von_mises_fisher: return AngularModel::von_mises_fisher(kappa, mu);
        case AngularFamily::watson: return AngularModel::watson(kappa, mu);
        case AngularFamily::exp_power: return AngularModel::exp_power(b, kappa, mu);
        case AngularFamily::directional_cauchy: return AngularModel::directional_cauchy(kappa, mu);
    }
    throw std::invalid_argument("bad family");
}

py::dict row_dict(const RejectionRow& r) {
    py::dict d;
    d["family"] = r.family;
    d["test"] = r.test;
    d["d"] = r.d;
    d["n"] = r.n;
    d["ell"] = r.ell;
    d["tau"] = r.tau;
    d["reps"] = r.reps;
    d["reject_count"] = r.reject_count;
    d["reject_freq"] = r.reject_freq;
    d["mc_stderr"] = r.mc_stderr;
    return d;
}

}  // namespace

PYBIND11_MODULE(sphuni, m) {
    m.doc() = "Sobolev uniformity tests on the hypersphere";

    py::class_<AngularModel>(m, "AngularModel")
        .def(py::init(&make_model), py::arg("family"), py::arg("kappa"), py::arg("mu"), py::arg("b") = 0)
        .def_property_readonly("kappa", &AngularModel::kappa)
        .def_property_readonly("mu", &AngularModel::mu)
        .def_property_readonly("dim", &AngularModel::dim)
        .def_property_readonly("family", [](const AngularModel& mdl) { return family_name(mdl.family()); })
        .def("k_star", &AngularModel::k_star)
        .def("with_kappa", &AngularModel::with_kappa);

    // sampling
    m.def(
        "sample_uniform_sphere",
        [](std::size_t n, int d, std::uint64_t seed, std::uint64_t stream) {
            return sample_uniform_sphere(n, d, make_seed(seed, stream)).points();
        },
        py::arg("n"), py::arg("d"), py::arg("seed") = 0, py::arg("stream") = 0);
    m.def(
        "sample_model",
        [](std::size_t n, const AngularModel& model, std::uint64_t seed, std::uint64_t stream) {
            return sample_model(n, model, make_seed(seed, stream)).points();
        },
        py::arg("n"), py::arg("model"), py::arg("seed") = 0, py::arg("stream") = 0);
    m.def(
        "load_unit_sample",
        [](const std::filesystem::path& path, bool renormalize) {
            return load_unit_sample(path, renormalize ? UnitSample::Normalize::renormalize
                                                      : UnitSample::Normalize::strict)
                .points();
        },
        py::arg("path"), py::arg("renormalize") = false);
    m.def(
        "gram_cosines",
        [](const Matrix& pts, bool renormalize) { return gram_cosines(sample_from_array(pts, renormalize)); },
        py::arg("points"), py::arg("renormalize") = false);

    // kernels
    m.def("harmonic_dimension", &harmonic_dimension, py::arg("k"), py::arg("d"));
    m.def("gegenbauer_coefficient", &gegenbauer_coefficient, py::arg("k"), py::arg("j"), py::arg("lam"));
    m.def("kernel_h", &kernel_h, py::arg("k"), py::arg("t"), py::arg("d"));
    m.def(
        "kernel_h_all", [](int K, double t, int d) { return kernel_h_all(K, t, d); }, py::arg("max_degree"),
        py::arg("t"), py::arg("d"));
    m.def("moment_a", &moment_a, py::arg("m"), py::arg("d"));
    m.def("weight_w", &weight_w, py::arg("k"), py::arg("d"));

    // statistics and tests
    m.def(
        "sobolev_statistic",
        [](const Matrix& pts, const std::vector<double>& weights, bool renormalize) {
            return sobolev_statistic(sample_from_array(pts, renormalize), WeightSequence{weights});
        },
        py::arg("points"), py::arg("weights"), py::arg("renormalize") = false);
    m.def(
        "rayleigh_statistic",
        [](const Matrix& pts, bool renorm) { return rayleigh_statistic(sample_from_array(pts, renorm)); },
        py::arg("points"), py::arg("renormalize") = false);
    m.def(
        "bingham_statistic",
        [](const Matrix& pts, bool renorm) { return bingham_statistic(sample_from_array(pts, renorm)); },
        py::arg("points"), py::arg("renormalize") = false);
    m.def(
        "score_statistic",
        [](const Matrix& pts, int K, bool renorm) { return score_statistic(sample_from_array(pts, renorm), K); },
        py::arg("points"), py::arg("max_degree"), py::arg("renormalize") = false);
    m.def(
        "select_k",
        [](const Matrix& pts, int cap_m, bool renorm) {
            return select_k(sample_from_array(pts, renorm), SelectionConfig{cap_m, "dof"});
        },
        py::arg("points"), py::arg("cap_m") = 10, py::arg("renormalize") = false);
    m.def(
        "run_test",
        [](const Matrix& pts, const std::string& method, double alpha, int cap_m, bool renorm) {
            return outcome_dict(run_test(sample_from_array(pts, renorm), TestMethod::parse(method), alpha,
                                         SelectionConfig{cap_m, "dof"}));
        },
        py::arg("points"), py::arg("method") = "adapted", py::arg("alpha") = 0.05, py::arg("cap_m") = 10,
        py::arg("renormalize") = false);

    // asymptotics
    m.def("chi2_cdf", &chi2_cdf, py::arg("x"), py::arg("dof"));
    m.def("chi2_quantile", &chi2_quantile, py::arg("p"), py::arg("dof"));
    m.def("noncentral_chi2_cdf", &noncentral_chi2_cdf, py::arg("x"), py::arg("dof"), py::arg("xi"));
    m.def(
        "noncentrality_xi",
        [](int k, const AngularModel& model, double tau, int d) { return noncentrality_xi(k, model, tau, d); },
        py::arg("k"), py::arg("model"), py::arg("tau"), py::arg("d"));
    m.def(
        "theoretical_power",
        [](const std::string& test, const AngularModel& model, double tau, double alpha, int d) {
            const ContiguousSpec spec(model, tau, 2.0 * model.k_star());
            return theoretical_power(TestMethod::parse(test), spec, alpha, d);
        },
        py::arg("test"), py::arg("model"), py::arg("tau"), py::arg("alpha") = 0.05, py::arg("d") = 3);
    m.def(
        "calibrate_critical_value",
        [](const std::string& test, std::size_t n, int d, double alpha, std::size_t reps, std::uint64_t seed,
           int cap_m, int threads) {
            return calibrate_critical_value(TestMethod::parse(test), n, d, alpha, reps, SeedSpec{seed, 0},
                                            SelectionConfig{cap_m, "dof"}, threads);
        },
        py::arg("test"), py::arg("n"), py::arg("d") = 3, py::arg("alpha") = 0.05, py::arg("reps") = 2000,
        py::arg("seed") = 0, py::arg("cap_m") = 10, py::arg("threads") = 0);

    // simulation harness
    m.def(
        "run_experiment",
        [](int d, const std::vector<std::size_t>& n_values, const std::vector<double>& ell_values,
           const std::vector<double>& tau_values, const std::vector<std::string>& families,
           const std::vector<std::string>& tests, std::size_t reps, double alpha, int cap_m,
           std::uint64_t master_seed, int threads) {
            ExperimentGrid grid;
            grid.d = d;
            grid.n_values = n_values;
            grid.ell_values = ell_values;
            grid.tau_values = tau_values;
            grid.families.clear();
            for (const auto& f : families) grid.families.push_back(parse_family(f));
            grid.tests.clear();
            for (const auto& t : tests) grid.tests.push_back(TestMethod::parse(t));
            grid.reps = reps;
            grid.alpha = alpha;
            grid.cap_m = cap_m;
            grid.master_seed = master_seed;
            const RejectionTable table = run_experiment(grid, threads, nullptr);
            py::list rows;
            for (const auto& r : table.rows) rows.append(row_dict(r));
            return rows;
        },
        py::arg("d") = 3, py::arg("n_values") = std::vector<std::size_t>{200},
        py::arg("ell_values") = std::vector<double>{2.0}, py::arg("tau_values") = std::vector<double>{0.0},
        py::arg("families") = std::vector<std::string>{"vmf"},
        py::arg("tests") = std::vector<std::string>{"jupp", "adapted"}, py::arg("reps") = 200,
        py::arg("alpha") = 0.05, py::arg("cap_m") = 10, py::arg("master_seed") = 20250810,
        py::arg("threads") = 0);
}
