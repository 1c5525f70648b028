// Copyright 2026 The cvqpinn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cvqpinn: command-line front end.
//
//   cvqpinn solve <poisson1d|heat1d> [--config FILE] [--set key=value]... [--epochs N] [--seed S] [--out DIR] [--plots]
//   cvqpinn validate-gates [--cutoff C]
//   cvqpinn gradcheck <poisson1d|heat1d> [--seed S] [--cutoff C]
//   cvqpinn plot <run-dir>
//   cvqpinn print-config <poisson1d|heat1d>
//
// Exit codes: 0 ok, 1 check failed, 2 usage or configuration error, 3 numerical abort.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "cvqpinn/config.hpp"
#include "cvqpinn/gate_validation.hpp"
#include "cvqpinn/gradcheck.hpp"
#include "cvqpinn/io.hpp"
#include "cvqpinn/parallel.hpp"
#include "cvqpinn/solve.hpp"

using namespace cvqpinn;

namespace {

int cmd_solve(const std::string &problem, const std::string &config_file, const std::vector<std::string> &sets, long epochs,
              const std::string &seed, const std::string &out, bool plots, int threads, bool quiet) {
    RunConfig cfg = config_file.empty() ? default_run_config(problem) : parse_run_config(read_file(config_file));
    if (cfg.problem != problem) throw ConfigError("config file is for '" + cfg.problem + "', not '" + problem + "'");
    for (const auto &s : sets) {
        const auto [k, v] = split_config_entry(s);
        apply_config_entry(cfg, k, v);
    }
    if (epochs >= 0) cfg.train.epochs = epochs;
    if (!seed.empty()) apply_config_entry(cfg, "train.seed", seed);
    if (!out.empty()) cfg.output_directory = out;
    if (plots) cfg.emit_plots = true;
    cfg.validate();

    DerivativeCounters counters;
    SolveOptions opt;
    opt.threads = threads;
    opt.counters = &counters;
    if (!quiet) {
        opt.on_epoch = [](const EpochRecord &e) {
            if (e.epoch % 50 == 0 || e.incident) {
                std::fprintf(stderr, "epoch %5ld  loss %.4e  pde %.3e  bc %.3e  ic %.3e  cons %.3e  trace %.3e  lr %.3g%s\n", e.epoch, e.loss.total,
                             e.loss.pde, e.loss.bc, e.loss.ic, e.loss.consistency, e.loss.trace, e.lr, e.incident ? "  [incident]" : "");
            }
        };
    }
    const SolveResult res = solve(cfg, opt);
    std::printf("%s nmse=%.6e best_epoch=%ld best_validation_loss=%.6e epochs=%zu incidents=%zu nested_derivatives=%llu\n", cfg.problem.c_str(),
                res.nmse, res.record.best_epoch, res.record.best_validation, res.record.epochs.size(), res.record.incidents.size(),
                static_cast<unsigned long long>(counters.nested_evaluations.load()));
    return 0;
}

int cmd_validate_gates(int cutoff, const std::string &fault) {
    GateValidationOptions opt;
    opt.cutoff = cutoff;
    if (fault == "kerr") {
        opt.kerr = faulty_kerr_matrix;
    } else if (!fault.empty()) {
        throw UsageError("unknown fault '" + fault + "'");
    }
    bool ok = true;
    for (const auto &c : validate_gates(opt)) {
        std::printf("%-36s max_error=%.3e tol=%.1e %s\n", c.name.c_str(), c.max_error, c.tolerance, c.passed() ? "PASS" : "FAIL");
        ok = ok && c.passed();
    }
    if (!ok) std::printf("gate validation FAILED\n");
    return ok ? 0 : 1;
}

int cmd_gradcheck(const std::string &problem, std::uint64_t seed, int cutoff, int threads) {
    const auto spec = make_problem(problem);
    NetworkConfig net;
    net.cutoff = cutoff;
    GradcheckOptions opt;
    opt.threads = threads;
    const auto rep = gradcheck(*spec, net, seed, opt);
    std::printf("%s seed=%llu points=%zu directions=%zu jacobian_rel_err=%.3e gradient_rel_err=%.3e %s\n", problem.c_str(),
                static_cast<unsigned long long>(seed), rep.points, rep.directions, rep.jacobian_error, rep.gradient_error,
                rep.passed() ? "PASS" : "FAIL");
    return rep.passed() ? 0 : 1;
}

int cmd_plot(const std::string &dir) {
    for (const auto &p : write_plots(dir)) std::printf("wrote %s\n", p.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Continuous-variable quantum PINN solver"};
    app.require_subcommand(1);
    int threads = default_thread_count();
    app.add_option("--threads", threads, "Worker threads (default: CVQPINN_THREADS or hardware concurrency)")->check(CLI::PositiveNumber);

    std::string problem, config_file, seed, out, run_dir, fault;
    std::vector<std::string> sets;
    long epochs = -1;
    bool plots = false, quiet = false;
    int cutoff = 20;
    std::uint64_t gc_seed = 0;

    auto *solve_cmd = app.add_subcommand("solve", "Train on a benchmark problem and write run artifacts");
    solve_cmd->add_option("problem", problem, "poisson1d or heat1d")->required();
    solve_cmd->add_option("--config", config_file, "Configuration file (key = value)");
    solve_cmd->add_option("--set", sets, "Override one configuration key, e.g. train.learning_rate=0.01");
    solve_cmd->add_option("--epochs", epochs, "Training epochs");
    solve_cmd->add_option("--seed", seed, "Seed for initialization and sampling");
    solve_cmd->add_option("--out", out, "Output directory");
    solve_cmd->add_flag("--plots", plots, "Also write SVG plots");
    solve_cmd->add_flag("--quiet", quiet, "No per-epoch progress on stderr");

    auto *gates_cmd = app.add_subcommand("validate-gates", "Run the gate property suite");
    gates_cmd->add_option("--cutoff", cutoff, "Fock cutoff")->check(CLI::Range(4, 60));
    gates_cmd->add_option("--inject-fault", fault, "Test hook")->group("");

    auto *grad_cmd = app.add_subcommand("gradcheck", "Compare exact derivatives with finite differences");
    grad_cmd->add_option("problem", problem, "poisson1d or heat1d")->required();
    grad_cmd->add_option("--seed", gc_seed, "Initialization seed");
    grad_cmd->add_option("--cutoff", cutoff, "Fock cutoff")->check(CLI::Range(4, 60));

    auto *plot_cmd = app.add_subcommand("plot", "Write SVG plots for a finished run");
    plot_cmd->add_option("run_dir", run_dir, "Run directory")->required();

    auto *print_cmd = app.add_subcommand("print-config", "Print the default configuration of a problem");
    print_cmd->add_option("problem", problem, "poisson1d or heat1d")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve_cmd) return cmd_solve(problem, config_file, sets, epochs, seed, out, plots, threads, quiet);
        if (*gates_cmd) return cmd_validate_gates(cutoff, fault);
        if (*grad_cmd) return cmd_gradcheck(problem, gc_seed, cutoff, threads);
        if (*plot_cmd) return cmd_plot(run_dir);
        if (*print_cmd) {
            std::cout << serialize_run_config(default_run_config(problem));
            return 0;
        }
    } catch (const NumericalError &e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
