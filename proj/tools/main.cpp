// Command-line front end: solve one problem, run a batch campaign, or check
// a solution against the optimality-side diagnostics.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "shoot/batch.hpp"
#include "shoot/benchmarks.hpp"
#include "shoot/config_io.hpp"
#include "shoot/diagnostics.hpp"
#include "shoot/shooting.hpp"
#include "shoot/solver.hpp"
#include "shoot/trajectory_io.hpp"

using namespace shoot;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitChecksFailed = 3;

BenchmarkCase load_case(const std::string& spec) {
    for (const auto& name : benchmark_names())
        if (spec == name) return make_benchmark(name);
    // not a registered name: treat as a config path
    return instantiate(read_problem_config(spec));
}

Vec parse_vector(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        vals.push_back(std::stod(item, &pos));
    }
    return Eigen::Map<const Vec>(vals.data(), static_cast<int>(vals.size()));
}

GridSpec parse_grid(const std::string& text, const std::vector<std::string>& labels,
                    const GridSpec& defaults) {
    if (text.empty()) return defaults;
    GridSpec grid;
    grid.axes.resize(labels.size());
    std::vector<bool> seen(labels.size(), false);
    for (const auto& item : [&] {
             std::vector<std::string> parts;
             std::stringstream ss(text);
             std::string p;
             while (std::getline(ss, p, ',')) parts.push_back(p);
             return parts;
         }()) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigurationError("grid: expected label=lo:hi:count");
        const std::string label = item.substr(0, eq);
        std::size_t idx = labels.size();
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) idx = i;
        if (idx == labels.size()) throw ConfigurationError("grid: unknown unknown '" + label + "'");
        const auto spec = item.substr(eq + 1);
        std::stringstream ss(spec);
        std::string lo, hi, count;
        if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, count))
            throw ConfigurationError("grid: expected lo:hi:count in '" + item + "'");
        grid.axes[idx] = {label, std::stod(lo), std::stod(hi), std::stoi(count)};
        seen[idx] = true;
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!seen[i]) {
            if (defaults.axes.size() != labels.size())
                throw ConfigurationError("grid: axis '" + labels[i] + "' missing");
            grid.axes[i] = defaults.axes[i];
        }
    }
    return grid;
}

void print_solution(const ShootingSystem& sys, const SolveReport& rep) {
    std::printf("status: %s after %d iterations, |S| = %.6e\n", to_string(rep.status).c_str(),
                rep.iterations, rep.final_residual_norm);
    const auto& labels = sys.codec().labels();
    for (int i = 0; i < rep.solution.size(); ++i)
        std::printf("  %-5s = %.15g\n", labels[static_cast<std::size_t>(i)].c_str(), rep.solution[i]);
    try {
        std::printf("objective = %.12g\n", sys.objective(rep.solution));
    } catch (const std::exception&) {
        std::printf("objective = (trajectory not evaluable)\n");
    }
}

int cmd_solve(const std::string& problem, const std::string& formulation, const std::string& nu0_text,
              double tol, int max_iter, int steps, bool emit_svd, const std::string& out_dir) {
    const BenchmarkCase bench = load_case(problem);
    const Formulation form = formulation_from_string(formulation);
    IntegrationOptions iopts;
    iopts.total_steps = steps;
    ShootingSystem sys(bench.problem, bench.structure, form, iopts);

    Vec nu0 = bench.default_start.size() == sys.codec().dim() ? bench.default_start
                                                              : bench.published_solution;
    if (!nu0_text.empty()) nu0 = parse_vector(nu0_text);
    if (nu0.size() != sys.codec().dim())
        throw ConfigurationError("starting vector has dimension " + std::to_string(nu0.size()) +
                                 ", expected " + std::to_string(sys.codec().dim()));

    SolveSettings settings;
    settings.tol = tol;
    settings.max_iter = max_iter;
    const SolveReport rep = form == Formulation::Classical ? newton(sys, nu0, settings)
                                                           : gauss_newton(sys, nu0, settings);
    print_solution(sys, rep);
    if (emit_svd && rep.singular_values.size() > 0) {
        std::printf("singular values:");
        for (int i = 0; i < rep.singular_values.size(); ++i)
            std::printf(" %.6g", rep.singular_values[i]);
        std::printf("\ncondition number = %.6g\n", rep.condition_number);
    }

    const std::string base = out_dir + "/" + bench.name + "_" + formulation;
    {
        std::ofstream os(base + "_report.txt");
        os << rep.to_text();
    }
    if (rep.status == SolveStatus::Converged || rep.status == SolveStatus::MaxIterations) {
        write_trajectory_csv(base + "_trajectory.csv", sys.trajectory(rep.solution));
        write_plot_script(base + "_plot.py", bench.name + "_" + formulation + "_trajectory.csv",
                          bench.problem.n, bench.problem.m);
        std::printf("wrote %s_trajectory.csv, %s_report.txt, %s_plot.py\n", base.c_str(), base.c_str(),
                    base.c_str());
    }
    return rep.converged ? kExitOk : kExitNotConverged;
}

int cmd_batch(const std::string& problem, const std::string& formulation, const std::string& grid_text,
              int workers, double tol, int max_iter, double match_tol, const std::string& out_dir) {
    const BenchmarkCase bench = load_case(problem);
    std::vector<Formulation> forms;
    if (formulation == "both")
        forms = {Formulation::Classical, Formulation::Extended};
    else
        forms = {formulation_from_string(formulation)};

    for (const Formulation form : forms) {
        ShootingSystem sys(bench.problem, bench.structure, form);
        const GridSpec grid = parse_grid(grid_text, sys.codec().labels(), bench.default_grid);
        BatchOptions opts;
        opts.workers = workers;
        opts.match_tol = match_tol;
        opts.solve.tol = tol;
        opts.solve.max_iter = max_iter;
        const BatchReport rep = run_grid(sys, grid, bench.published_solution, opts);
        const std::string tag = bench.name + " " + to_string(form);
        std::printf("%s\n", rep.summary_line(tag).c_str());
        const std::string path = out_dir + "/" + bench.name + "_" + to_string(form) + "_batch.csv";
        std::ofstream os(path);
        rep.write_csv(os);
        std::printf("wrote %s (%zu points, %d workers)\n", path.c_str(), rep.points.size(),
                    rep.workers_used);
    }
    return kExitOk;
}

int cmd_check(const std::string& problem, const std::string& trajectory_path,
              const std::string& formulation, double perturb, const std::string& out_dir) {
    const BenchmarkCase bench = load_case(problem);
    const Formulation form = formulation_from_string(formulation);

    TrajectoryRecord rec;
    if (!trajectory_path.empty()) {
        rec = read_trajectory_csv(trajectory_path);
    } else {
        ShootingSystem sys(bench.problem, bench.structure, form);
        SolveSettings settings;
        settings.tol = bench.name == "goddard" ? 1e-9 : 1e-12;
        const SolveReport rep = form == Formulation::Classical
                                    ? newton(sys, bench.default_start, settings)
                                    : gauss_newton(sys, bench.default_start, settings);
        if (!rep.converged) {
            std::fprintf(stderr, "solve did not converge (%s); cannot check\n",
                         to_string(rep.status).c_str());
            return kExitNotConverged;
        }
        rec = sys.trajectory(rep.solution);
    }

    const DiagnosticsReport diag = check_solution(bench.problem, bench.structure, rec);
    std::printf("%s", diag.to_table().c_str());
    {
        std::ofstream os(out_dir + "/" + bench.name + "_check.txt");
        os << diag.to_kv();
    }

    bool perturb_ok = true;
    if (perturb > 0.0) {
        // re-solve with the running cost scaled by (1 + mu), starting from the
        // unperturbed solution; the drift bound is calibrated at mu = 1e-4
        ShootingSystem sys(bench.problem, bench.structure, form);
        SolveSettings settings;
        settings.tol = bench.name == "goddard" ? 1e-9 : 1e-12;
        const SolveReport base = form == Formulation::Classical
                                     ? newton(sys, bench.default_start, settings)
                                     : gauss_newton(sys, bench.default_start, settings);
        auto drift_at = [&](double mu) {
            auto params = bench.params;
            params.at("cost_scale") *= (1.0 + mu);
            const BenchmarkCase pert = make_benchmark(bench.family, params);
            ShootingSystem psys(pert.problem, pert.structure, form);
            const SolveReport rep = form == Formulation::Classical
                                        ? newton(psys, base.solution, settings)
                                        : gauss_newton(psys, base.solution, settings);
            if (!rep.converged) throw ConfigurationError("perturbed solve did not converge");
            return (rep.solution - base.solution).cwiseAbs().maxCoeff();
        };
        const double K = 2.0 * drift_at(1e-4) / 1e-4;
        const double drift = drift_at(perturb);
        perturb_ok = drift <= K * perturb;
        std::printf("perturbation mu=%.1e: drift %.4e, bound K*mu = %.4e  %s\n", perturb, drift,
                    K * perturb, perturb_ok ? "ok" : "FAIL");
    }

    return diag.all_pass() && perturb_ok ? kExitOk : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shooting solver for control-affine problems with singular arcs"};
    app.require_subcommand(1);

    std::string problem, formulation = "extended", nu0, grid, trajectory, out_dir = ".";
    double tol = 1e-12, match_tol = -1.0, perturb = 0.0;
    int max_iter = 1000, steps = 500, workers = 0;
    bool emit_svd = false;

    auto* solve = app.add_subcommand("solve", "solve one problem by shooting");
    solve->add_option("problem", problem, "benchmark name or config path")->required();
    solve->add_option("--formulation", formulation, "classical|extended|full");
    solve->add_option("--nu0", nu0, "starting vector, comma separated");
    solve->add_option("--tol", tol, "stopping tolerance on |S|");
    solve->add_option("--max-iter", max_iter, "iteration cap");
    solve->add_option("--steps", steps, "total integration steps");
    solve->add_flag("--emit-svd", emit_svd, "print the Jacobian spectrum at the solution");
    solve->add_option("--out", out_dir, "output directory");

    auto* batch = app.add_subcommand("batch", "grid campaign of shooting solves");
    batch->add_option("problem", problem, "benchmark name or config path")->required();
    batch->add_option("--formulation", formulation, "classical|extended|both");
    batch->add_option("--grid", grid, "per-unknown axes, e.g. p1=-10:10:21,t1=0:5:21");
    batch->add_option("--workers", workers, "worker threads (default SHOOT_WORKERS or cores)");
    batch->add_option("--tol", tol, "stopping tolerance on |S|");
    batch->add_option("--max-iter", max_iter, "iteration cap");
    batch->add_option("--match-tol", match_tol, "success distance to the reference");
    batch->add_option("--out", out_dir, "output directory");

    auto* check = app.add_subcommand("check", "optimality-side diagnostics of a solution");
    check->add_option("problem", problem, "benchmark name or config path")->required();
    check->add_option("--trajectory", trajectory, "check a previously written trajectory csv");
    check->add_option("--formulation", formulation, "classical|extended");
    check->add_option("--perturb", perturb, "also run the cost-perturbation drift check at this mu");
    check->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitConfig : kExitOk;
    }

    try {
        if (solve->parsed())
            return cmd_solve(problem, formulation, nu0, tol, max_iter, steps, emit_svd, out_dir);
        if (batch->parsed())
            return cmd_batch(problem, formulation, grid, workers, tol, max_iter, match_tol, out_dir);
        if (check->parsed()) return cmd_check(problem, trajectory, formulation, perturb, out_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
