#include "sphuni/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sphuni/asymptotics.hpp"
#include "sphuni/distributions.hpp"
#include "sphuni/parallel.hpp"

namespace sphuni {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Vector first_basis_vector(int d) {
    Vector mu = Vector::Zero(d);
    mu(0) = 1.0;
    return mu;
}

AngularModel base_model(AngularFamily family, const Vector& mu) {
    switch (family) {
        case AngularFamily::von_mises_fisher: return AngularModel::von_mises_fisher(0.0, mu);
        case AngularFamily::watson: return AngularModel::watson(0.0, mu);
        default: throw std::invalid_argument("experiment grids support vmf and watson families only");
    }
}

}  // namespace

void ExperimentGrid::validate() const {
    if (d < 2) throw std::invalid_argument("grid: d must be >= 2");
    if (reps < 1) throw std::invalid_argument("grid: reps must be >= 1");
    if (n_values.empty() || ell_values.empty() || tau_values.empty() || families.empty() || tests.empty())
        throw std::invalid_argument("grid: n_values, ell_values, tau_values, families and tests must be nonempty");
    for (const auto n : n_values)
        if (n < 2) throw std::invalid_argument("grid: every n must be >= 2");
    for (const double ell : ell_values)
        if (!(ell > 0.0)) throw std::invalid_argument("grid: every ell must be > 0");
    for (const double tau : tau_values)
        if (!(tau >= 0.0)) throw std::invalid_argument("grid: every tau must be >= 0");
    for (const auto family : families)
        if (family != AngularFamily::von_mises_fisher && family != AngularFamily::watson)
            throw std::invalid_argument("grid: families limited to vmf and watson");
    for (const auto& test : tests)
        if (test.kind == TestMethod::Kind::score)
            throw std::invalid_argument("grid: tests limited to jupp, adapted, rayleigh, bingham");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("grid: alpha must lie in (0, 1)");
    if (cap_m < 2) throw std::invalid_argument("grid: cap_m must be >= 2");
    if (mu.size() != 0) {
        if (mu.size() != d) throw std::invalid_argument("grid: mu must have d coordinates");
        if (std::abs(mu.norm() - 1.0) > 1e-10) throw std::invalid_argument("grid: mu must be a unit vector");
    }
}

Vector ExperimentGrid::resolved_mu() const { return mu.size() != 0 ? mu : first_basis_vector(d); }

ExperimentGrid desk_profile() { return ExperimentGrid{}; }

ExperimentGrid paper_profile() {
    ExperimentGrid grid;
    grid.reps = 5000;
    grid.tau_values.clear();
    for (int i = 0; i <= 12; ++i) grid.tau_values.push_back(i * 0.5);
    return grid;
}

ExperimentGrid load_grid(const std::filesystem::path& config_path, const ExperimentGrid& defaults) {
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config file: " + config_path.string());
    json doc;
    try {
        doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(config_path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument(config_path.string() + ": expected a JSON object");

    ExperimentGrid grid = defaults;
    static const char* known[] = {"d",     "n_values", "ell_values", "tau_values", "families",   "tests",
                                  "reps",  "alpha",    "cap_m",      "master_seed", "mu"};
    for (const auto& [key, value] : doc.items()) {
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            throw std::invalid_argument(config_path.string() + ": unknown key '" + key + "'");
        (void)value;
    }
    try {
        if (doc.contains("d")) grid.d = doc["d"].get<int>();
        if (doc.contains("n_values")) grid.n_values = doc["n_values"].get<std::vector<std::size_t>>();
        if (doc.contains("ell_values")) grid.ell_values = doc["ell_values"].get<std::vector<double>>();
        if (doc.contains("tau_values")) grid.tau_values = doc["tau_values"].get<std::vector<double>>();
        if (doc.contains("families")) {
            grid.families.clear();
            for (const auto& name : doc["families"]) grid.families.push_back(parse_family(name.get<std::string>()));
        }
        if (doc.contains("tests")) {
            grid.tests.clear();
            for (const auto& name : doc["tests"]) grid.tests.push_back(TestMethod::parse(name.get<std::string>()));
        }
        if (doc.contains("reps")) grid.reps = doc["reps"].get<std::size_t>();
        if (doc.contains("alpha")) grid.alpha = doc["alpha"].get<double>();
        if (doc.contains("cap_m")) grid.cap_m = doc["cap_m"].get<int>();
        if (doc.contains("master_seed")) grid.master_seed = doc["master_seed"].get<std::uint64_t>();
        if (doc.contains("mu")) {
            const auto coords = doc["mu"].get<std::vector<double>>();
            grid.mu = Eigen::Map<const Vector>(coords.data(), static_cast<Eigen::Index>(coords.size()));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(config_path.string() + ": " + e.what());
    }
    grid.validate();
    return grid;
}

RejectionTable run_experiment(const ExperimentGrid& grid, int threads, std::ostream* log) {
    grid.validate();

    struct Cell {
        AngularFamily family;
        std::size_t n;
        double ell;
        double tau;
    };
    std::vector<Cell> cells;
    for (const auto family : grid.families)
        for (const auto n : grid.n_values)
            for (const double ell : grid.ell_values)
                for (const double tau : grid.tau_values) cells.push_back({family, n, ell, tau});

    const std::size_t n_tests = grid.tests.size();
    bool needs_profile = false;
    std::vector<double> critical(n_tests);
    for (std::size_t t = 0; t < n_tests; ++t) {
        critical[t] = chi2_quantile(1.0 - grid.alpha, grid.tests[t].null_dof(grid.d));
        const auto kind = grid.tests[t].kind;
        needs_profile = needs_profile || kind == TestMethod::Kind::jupp || kind == TestMethod::Kind::adapted;
    }
    const SelectionConfig config{grid.cap_m, "dof"};
    const unsigned workers = resolve_thread_count(threads);

    if (log)
        *log << "running " << cells.size() << " cells x " << grid.reps << " replications on " << workers
             << (workers == 1 ? " thread\n" : " threads\n");

    RejectionTable table;
    std::vector<std::vector<std::size_t>> counts(cells.size(), std::vector<std::size_t>(n_tests, 0));
    std::vector<std::uint8_t> rejects(grid.reps);

    const Vector mu = grid.resolved_mu();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const Cell& cell = cells[c];
        const ContiguousSpec spec(base_model(cell.family, mu), cell.tau, cell.ell);
        const AngularModel model = resolve_contiguous(spec, cell.n);

        parallel_for(grid.reps, workers, [&](std::size_t r) {
            const SeedSpec seed{grid.master_seed, c * grid.reps + r};
            const UnitSample sample = sample_model(cell.n, model, seed);

            double jupp_stat = 0.0, adapted_stat = 0.0;
            if (needs_profile) {
                const DegreeProfile profile(sample, grid.cap_m, config);
                const int k_hat = profile.select(grid.cap_m);
                jupp_stat = profile.score(k_hat);
                adapted_stat = profile.score(std::max(k_hat, 2));
            }
            std::uint8_t mask = 0;
            for (std::size_t t = 0; t < n_tests; ++t) {
                double stat = 0.0;
                switch (grid.tests[t].kind) {
                    case TestMethod::Kind::rayleigh: stat = rayleigh_statistic(sample); break;
                    case TestMethod::Kind::bingham: stat = bingham_statistic(sample); break;
                    case TestMethod::Kind::jupp: stat = jupp_stat; break;
                    case TestMethod::Kind::adapted: stat = adapted_stat; break;
                    case TestMethod::Kind::score: break;  // excluded by validate()
                }
                if (stat > critical[t]) mask |= static_cast<std::uint8_t>(1u << t);
            }
            rejects[r] = mask;
        });

        // deterministic reduction in replication order
        for (std::size_t r = 0; r < grid.reps; ++r)
            for (std::size_t t = 0; t < n_tests; ++t)
                if (rejects[r] & (1u << t)) ++counts[c][t];

        if (log) {
            *log << "cell " << family_name(cell.family) << " n=" << cell.n << " ell=" << fmt_double(cell.ell)
                 << " tau=" << fmt_double(cell.tau);
            for (std::size_t t = 0; t < n_tests; ++t)
                *log << ' ' << grid.tests[t].name() << '='
                     << fmt_double(static_cast<double>(counts[c][t]) / static_cast<double>(grid.reps));
            *log << '\n';
        }
    }

    for (std::size_t t = 0; t < n_tests; ++t) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const Cell& cell = cells[c];
            RejectionRow row;
            row.family = family_name(cell.family);
            row.test = grid.tests[t].name();
            row.d = grid.d;
            row.n = cell.n;
            row.ell = cell.ell;
            row.tau = cell.tau;
            row.reps = grid.reps;
            row.reject_count = counts[c][t];
            row.reject_freq = static_cast<double>(row.reject_count) / static_cast<double>(row.reps);
            row.mc_stderr = std::sqrt(row.reject_freq * (1.0 - row.reject_freq) / static_cast<double>(row.reps));
            table.rows.push_back(std::move(row));

            if (log && cell.tau == 0.0) {
                const double band = 3.0 * std::sqrt(grid.alpha * (1.0 - grid.alpha) / static_cast<double>(grid.reps));
                const double freq = table.rows.back().reject_freq;
                if (std::abs(freq - grid.alpha) > band)
                    *log << "warning: null cell " << family_name(cell.family) << " n=" << cell.n
                         << " ell=" << fmt_double(cell.ell) << " test=" << grid.tests[t].name()
                         << " rejected at " << fmt_double(freq) << ", outside " << fmt_double(grid.alpha)
                         << " +- " << fmt_double(band) << '\n';
            }
        }
    }
    return table;
}

namespace {

constexpr const char* kCsvHeader = "family,test,d,n,ell,tau,reps,reject_count,reject_freq,mc_stderr";

void write_csv(const RejectionTable& table, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : table.rows) {
        out << r.family << ',' << r.test << ',' << r.d << ',' << r.n << ',' << fmt_double(r.ell) << ','
            << fmt_double(r.tau) << ',' << r.reps << ',' << r.reject_count << ',' << fmt_double(r.reject_freq)
            << ',' << fmt_double(r.mc_stderr) << '\n';
    }
}

json row_to_json(const RejectionRow& r) {
    return json{{"family", r.family}, {"test", r.test},
                {"d", r.d},           {"n", r.n},
                {"ell", r.ell},       {"tau", r.tau},
                {"reps", r.reps},     {"reject_count", r.reject_count},
                {"reject_freq", r.reject_freq}, {"mc_stderr", r.mc_stderr}};
}

RejectionRow row_from_json(const json& j) {
    RejectionRow r;
    r.family = j.at("family").get<std::string>();
    r.test = j.at("test").get<std::string>();
    r.d = j.at("d").get<int>();
    r.n = j.at("n").get<std::size_t>();
    r.ell = j.at("ell").get<double>();
    r.tau = j.at("tau").get<double>();
    r.reps = j.at("reps").get<std::size_t>();
    r.reject_count = j.at("reject_count").get<std::size_t>();
    r.reject_freq = j.at("reject_freq").get<double>();
    r.mc_stderr = j.at("mc_stderr").get<double>();
    return r;
}

}  // namespace

void emit_results(const RejectionTable& table, const std::filesystem::path& path, ResultFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write results to " + path.string());
    if (format == ResultFormat::csv) {
        write_csv(table, out);
    } else {
        json doc = json::array();
        for (const auto& r : table.rows) doc.push_back(row_to_json(r));
        out << doc.dump(2) << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

RejectionTable read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::runtime_error(path.string() + ": missing or mismatched CSV header");
    RejectionTable table;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string item;
        std::vector<std::string> parts;
        while (std::getline(fields, item, ',')) parts.push_back(item);
        if (parts.size() != 10) throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
        RejectionRow r;
        r.family = parts[0];
        r.test = parts[1];
        r.d = std::stoi(parts[2]);
        r.n = std::stoull(parts[3]);
        r.ell = std::stod(parts[4]);
        r.tau = std::stod(parts[5]);
        r.reps = std::stoull(parts[6]);
        r.reject_count = std::stoull(parts[7]);
        r.reject_freq = std::stod(parts[8]);
        r.mc_stderr = std::stod(parts[9]);
        table.rows.push_back(std::move(r));
    }
    return table;
}

RejectionTable read_results_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results file: " + path.string());
    json doc = json::parse(in);
    RejectionTable table;
    for (const auto& j : doc) table.rows.push_back(row_from_json(j));
    return table;
}

void emit_plot_script(const RejectionTable& table, const std::filesystem::path& path) {
    if (table.rows.empty()) throw std::invalid_argument("emit_plot_script: empty table");

    // panel layout follows first appearance order: families as rows, tests as
    // columns
    std::vector<std::string> families, tests;
    int d = table.rows.front().d;
    double max_tau = 0.0;
    for (const auto& r : table.rows) {
        if (std::find(families.begin(), families.end(), r.family) == families.end())
            families.push_back(r.family);
        if (std::find(tests.begin(), tests.end(), r.test) == tests.end()) tests.push_back(r.test);
        max_tau = std::max(max_tau, r.tau);
    }

    std::ostringstream data_csv;
    write_csv(table, data_csv);

    // asymptotic Bingham power against the contiguous Watson alternative,
    // drawn in gray on Watson panels
    std::ostringstream bingham_curve;
    const bool has_watson =
        std::find(families.begin(), families.end(), family_name(AngularFamily::watson)) != families.end();
    if (has_watson) {
        const AngularModel watson = AngularModel::watson(0.0, first_basis_vector(d));
        const TestMethod bingham{TestMethod::Kind::bingham, 2};
        bingham_curve << "tau,power\n";
        const int steps = 120;
        for (int i = 0; i <= steps; ++i) {
            const double tau = max_tau * i / steps;
            const ContiguousSpec spec(watson, tau, 4.0);
            bingham_curve << fmt_double(tau) << ',' << fmt_double(theoretical_power(bingham, spec, 0.05, d))
                          << '\n';
        }
    }

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot script to " + path.string());
    out << "#!/usr/bin/env python3\n"
        << "\"\"\"Rejection-frequency curves; run with matplotlib installed.\"\"\"\n"
        << "import matplotlib.pyplot as plt\n\n"
        << "DATA = \"\"\"\\\n"
        << data_csv.str() << "\"\"\"\n\n"
        << "BINGHAM_ASYMPTOTIC = \"\"\"\\\n"
        << (has_watson ? bingham_curve.str() : std::string("tau,power\n")) << "\"\"\"\n\n"
        << "def read_csv(text):\n"
        << "    lines = text.strip().splitlines()\n"
        << "    header = lines[0].split(',')\n"
        << "    return [dict(zip(header, line.split(','))) for line in lines[1:]]\n\n"
        << "rows = read_csv(DATA)\n"
        << "families = [";
    for (const auto& f : families) out << '"' << f << "\", ";
    out << "]\n"
        << "tests = [";
    for (const auto& t : tests) out << '"' << t << "\", ";
    out << "]\n"
        << "fig, axes = plt.subplots(len(families), len(tests), figsize=(6 * len(tests), 4.5 * len(families)),\n"
        << "                         squeeze=False, sharex=True, sharey=True)\n"
        << "for fi, family in enumerate(families):\n"
        << "    for ti, test in enumerate(tests):\n"
        << "        ax = axes[fi][ti]\n"
        << "        panel = [r for r in rows if r['family'] == family and r['test'] == test]\n"
        << "        curves = sorted({(int(r['n']), float(r['ell'])) for r in panel})\n"
        << "        for n, ell in curves:\n"
        << "            pts = sorted((float(r['tau']), float(r['reject_freq'])) for r in panel\n"
        << "                         if int(r['n']) == n and float(r['ell']) == ell)\n"
        << "            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker='o', markersize=3,\n"
        << "                    label=f'n={n}, ell={ell:g}')\n"
        << "        if family == 'watson':\n"
        << "            ref = read_csv(BINGHAM_ASYMPTOTIC)\n"
        << "            if len(ref) > 1:\n"
        << "                ax.plot([float(r['tau']) for r in ref], [float(r['power']) for r in ref],\n"
        << "                        color='gray', linewidth=2, alpha=0.8, label='Bingham asymptotic')\n"
        << "        ax.axhline(0.05, color='black', linewidth=0.6, linestyle=':')\n"
        << "        ax.set_title(f'{family} / {test}')\n"
        << "        ax.set_xlabel('tau')\n"
        << "        ax.set_ylabel('rejection frequency')\n"
        << "        ax.set_ylim(-0.02, 1.02)\n"
        << "        ax.legend(fontsize=7)\n"
        << "fig.tight_layout()\n"
        << "fig.savefig('rejection_curves.png', dpi=150)\n"
        << "print('wrote rejection_curves.png')\n";
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace sphuni
