// Command line front end: solve a problem file, analyze its contraction
// bounds, emit an eigenvalue locus, or run the lasso benchmark end to end.

#include <admmrate/bounds.hpp>
#include <admmrate/engine.hpp>
#include <admmrate/errors.hpp>
#include <admmrate/json_io.hpp>
#include <admmrate/lasso.hpp>
#include <admmrate/locus.hpp>
#include <admmrate/problem.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDivergence = 3;

using admmrate::json;

json read_json(const std::string& path) {
    if (path.empty() || path == "-") {
        return json::parse(std::cin);
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

std::string run_csv(const admmrate::RunResult& res) {
    std::ostringstream os;
    os << "iteration,state_delta,constraint_residual,objective\n";
    os.precision(17);
    for (const auto& r : res.history) {
        os << r.iteration << ',' << r.state_delta << ','
           << r.constraint_residual << ',' << r.objective << '\n';
    }
    return os.str();
}

std::string flat_csv(const json& j) {
    std::ostringstream os;
    os << "key,value\n";
    os.precision(17);
    for (const auto& [key, value] : j.items()) {
        if (value.is_structured()) continue;
        os << key << ',' << value.dump() << '\n';
    }
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relaxed ADMM solver and convergence-rate analyzer"};
    app.require_subcommand(1);

    std::string in_path, out_path, format = "json";
    double q = 0.0;
    int max_iters = 1000;
    double tol_state = 1e-10, tol_primal = 0.0;
    bool history = false;
    int rows = 300, cols = 200, nnz = 10, demo_iters = 20000;
    double eps = 1.0;
    std::uint64_t seed = 1;

    const auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--in", in_path, "input JSON file ('-' for stdin)");
        cmd->add_option("--out", out_path, "output file ('-' for stdout)");
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* solve = app.add_subcommand("solve", "run the iteration on a problem file");
    add_io(solve);
    solve->add_option("--q", q, "relaxation parameter (default 1)");
    solve->add_option("--max-iters", max_iters, "iteration cap");
    solve->add_option("--tol-state", tol_state, "stop when ||z+ - z|| drops below");
    solve->add_option("--tol-primal", tol_primal, "stop when the constraint residual drops below");
    solve->add_flag("--history", history, "record per-iteration history");

    CLI::App* analyze = app.add_subcommand("analyze", "contraction bounds and tuning for a problem file");
    add_io(analyze);
    analyze->add_option("--q", q, "evaluate factors at this q (default: the tuned q*)");

    CLI::App* locus = app.add_subcommand("locus", "eigenvalue locus from a slope-box file");
    add_io(locus);
    locus->add_option("--q", q, "also emit the locus mapped through (1-q)+q*z");

    CLI::App* demo = app.add_subcommand("lasso-demo", "generate and analyze a lasso instance");
    demo->add_option("--rows", rows, "rows of the data matrix");
    demo->add_option("--cols", cols, "columns of the data matrix");
    demo->add_option("--nnz", nnz, "active entries per row");
    demo->add_option("--eps", eps, "augmentation factor");
    demo->add_option("--q", q, "relaxation parameter (default: tuned q*)");
    demo->add_option("--seed", seed, "random seed");
    demo->add_option("--max-iters", demo_iters, "iteration cap");
    demo->add_option("--out", out_path, "output file ('-' for stdout)");
    demo->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (solve->parsed()) {
            const admmrate::SplitProblem p =
                admmrate::problem_from_json(read_json(in_path));
            const admmrate::ValidationReport rep = admmrate::validate_problem(p);
            if (!rep.valid()) {
                for (const std::string& v : rep.violations) {
                    std::cerr << "invalid problem: " << v << '\n';
                }
                return kExitValidation;
            }
            admmrate::AdmmConfig cfg;
            cfg.q = q != 0.0 ? q : 1.0;
            cfg.max_iters = max_iters;
            cfg.tol_state = tol_state;
            cfg.tol_primal = tol_primal;
            cfg.record_history = history || format == "csv";
            const admmrate::RunResult res =
                admmrate::run(p, cfg, admmrate::Vector::Zero(p.m()));
            if (format == "csv") {
                write_text(out_path, run_csv(res));
            } else {
                write_text(out_path,
                           admmrate::to_json(res, cfg.record_history).dump(2) + "\n");
            }
            if (res.reason == admmrate::TerminationReason::NonFinite) {
                std::cerr << "iteration diverged (non-finite state)\n";
                return kExitDivergence;
            }
            return kExitOk;
        }

        if (analyze->parsed()) {
            const admmrate::SplitProblem p =
                admmrate::problem_from_json(read_json(in_path));
            const admmrate::ValidationReport rep = admmrate::validate_problem(p);
            if (!rep.valid()) {
                for (const std::string& v : rep.violations) {
                    std::cerr << "invalid problem: " << v << '\n';
                }
                return kExitValidation;
            }
            const admmrate::SpectralModel sm = admmrate::build_spectral_model(p);
            const admmrate::BoundSpectrum bs = admmrate::bound_spectrum(sm);
            const admmrate::AlphaBox box = admmrate::alpha_box_from_spectrum(bs);
            const admmrate::LocusParams lp = admmrate::locus_params(box);
            const admmrate::QTuning qt = admmrate::optimal_q(lp);
            const double q_eval = q != 0.0 ? q : qt.q;
            json out = {
                {"alpha_box", admmrate::to_json(box)},
                {"spectrum", admmrate::to_json(bs)},
                {"locus", admmrate::to_json(lp)},
                {"q", q_eval},
                {"q_star", qt.q},
                {"rho_star", qt.rho},
                {"non_convergent", qt.non_convergent},
                {"rho_at_q", admmrate::rho_max(lp, q_eval)},
                {"mu_1", admmrate::mu_single(bs, 1)},
                {"mu_2", admmrate::mu_single(bs, 2)},
                {"mu_separable", admmrate::mu_separable(bs, q_eval)},
                {"mu_joint", admmrate::to_json(admmrate::mu_joint(bs, q_eval))},
            };
            write_text(out_path, format == "csv" ? flat_csv(out)
                                                 : out.dump(2) + "\n");
            return kExitOk;
        }

        if (locus->parsed()) {
            const admmrate::AlphaBox box =
                admmrate::alpha_box_from_json(read_json(in_path));
            const admmrate::LocusParams lp = admmrate::locus_params(box);
            json out = admmrate::to_json(lp);
            if (q != 0.0) {
                const admmrate::RLocus rl = admmrate::map_to_R(lp, q);
                out["mapped"] = {
                    {"real_intervals",
                     json::array({json::array({rl.neg_interval.first,
                                               rl.neg_interval.second}),
                                  json::array({rl.pos_interval.first,
                                               rl.pos_interval.second})})},
                    {"circle", {{"center", rl.center},
                                {"inner", rl.inner},
                                {"outer", rl.outer}}}};
            }
            write_text(out_path,
                       format == "csv" ? flat_csv(out) : out.dump(2) + "\n");
            return kExitOk;
        }

        const admmrate::RateReport rep = admmrate::lasso_demo(
            rows, cols, nnz, eps, q, seed, demo_iters);
        const json out = admmrate::to_json(rep);
        write_text(out_path, format == "csv" ? flat_csv(out) : out.dump(2) + "\n");
        if (!rep.converged && !std::isfinite(rep.empirical_rate)) {
            std::cerr << "iteration diverged\n";
            return kExitDivergence;
        }
        return kExitOk;
    } catch (const admmrate::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}
