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

#pragma once

/**
 * @file solve.hpp
 * @brief End-to-end benchmark runs and their on-disk artifacts.
 *
 * A run directory holds config.txt, training_log.csv, checkpoint.json,
 * solution.csv, reference.csv and summary.txt; incidents.log appears when
 * any epoch was rolled back. Plots are derived from those files only.
 */

#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cvqpinn/config.hpp"
#include "cvqpinn/io.hpp"
#include "cvqpinn/optimize.hpp"
#include "cvqpinn/plot.hpp"
#include "cvqpinn/problems.hpp"

namespace cvqpinn {

struct SolveOptions {
    int threads = 1;
    DerivativeCounters *counters = nullptr;
    std::function<void(const EpochRecord &)> on_epoch;
    bool write_artifacts = true;
};

struct SolveResult {
    TrainingRecord record;
    NetworkParams initial_params;
    std::vector<SolutionRow> rows;
    double nmse = 0.0;
    /// Largest prediction on the t = 0 row (heat only).
    double max_initial_prediction = 0.0;
};

inline std::vector<SolutionRow> predict_on_grid(const ProblemSpec &problem, const NetworkConfig &net, const NetworkParams &params) {
    const Circuit circuit(net, params);
    std::vector<SolutionRow> rows;
    for (const auto &p : problem.evaluation_grid()) {
        rows.push_back({p, forward(circuit, problem.network_inputs(p)).outputs.at(0), problem.reference(p)});
    }
    return rows;
}

inline double rows_nmse(const std::vector<SolutionRow> &rows) {
    std::vector<double> pred, truth;
    for (const auto &r : rows) {
        pred.push_back(r.predicted);
        truth.push_back(r.reference);
    }
    return nmse(pred, truth);
}

inline std::string summary_text(const RunConfig &cfg, const SolveResult &r, const DerivativeCounters *counters) {
    using detail::format_double;
    std::ostringstream os;
    os << "problem = " << cfg.problem << "\n";
    os << "nmse = " << format_double(r.nmse) << "\n";
    os << "epochs_run = " << r.record.epochs.size() << "\n";
    os << "best_epoch = " << r.record.best_epoch << "\n";
    os << "best_validation_loss = " << format_double(r.record.best_validation) << "\n";
    os << "incidents = " << r.record.incidents.size() << "\n";
    if (cfg.problem == "heat1d") os << "max_initial_prediction = " << format_double(r.max_initial_prediction) << "\n";
    if (counters) os << "nested_derivative_evaluations = " << counters->nested_evaluations.load() << "\n";
    return os.str();
}

/// Solution-vs-reference (Poisson) or heatmap (heat), plus loss curves, from a run directory.
inline std::vector<std::filesystem::path> write_plots(const std::filesystem::path &dir) {
    namespace fs = std::filesystem;
    for (const char *name : {"config.txt", "training_log.csv", "solution.csv"}) {
        if (!fs::exists(dir / name)) throw ConfigError("run directory lacks " + std::string(name) + ": " + dir.string());
    }
    const RunConfig cfg = parse_run_config(read_file(dir / "config.txt"));
    std::vector<fs::path> written;

    const auto log = read_csv_rows(dir / "training_log.csv", training_log_header);
    std::vector<double> epoch;
    std::array<std::vector<double>, 6> cols;
    for (const auto &row : log) {
        if (row.size() != 8) throw ConfigError("training log row has the wrong column count");
        epoch.push_back(row[0]);
        for (std::size_t k = 0; k < 6; ++k) cols[k].push_back(row[k + 1]);
    }
    const std::array<const char *, 6> names{"PDE", "BC", "IC", "trace", "consistency", "total"};
    const std::array<const char *, 6> colors{"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#000000"};
    std::vector<plot::Series> loss_series;
    for (std::size_t k = 0; k < 6; ++k) {
        if (k == 2 && cfg.problem != "heat1d") continue;
        loss_series.push_back({names[k], epoch, cols[k], colors[k], k == 5});
    }
    if (!epoch.empty()) {
        atomic_write(dir / "losses.svg", plot::line_plot("Loss components", "epoch", "log10 loss", loss_series, true));
    } else {
        atomic_write(dir / "losses.svg", plot::line_plot("Loss components (no training epochs)", "epoch", "loss",
                                                         {{"none", {0.0, 1.0}, {0.0, 0.0}, "#999999", true}}));
    }
    written.push_back(dir / "losses.svg");

    const auto sol = read_csv_rows(dir / "solution.csv", solution_header);
    if (cfg.problem == "poisson1d") {
        plot::Series pred{"QPINN", {}, {}, "#d62728", false}, ref{"exact", {}, {}, "#1f77b4", true};
        for (const auto &row : sol) {
            pred.x.push_back(row.at(0));
            pred.y.push_back(row.at(1));
            ref.x.push_back(row.at(0));
            ref.y.push_back(row.at(2));
        }
        atomic_write(dir / "solution.svg", plot::line_plot("Poisson solution", "x", "u(x)", {ref, pred}));
        written.push_back(dir / "solution.svg");
    } else {
        std::map<double, std::map<double, double>> grid; // t -> x -> T
        for (const auto &row : sol) grid[row.at(1)][row.at(0)] = row.at(2);
        std::vector<double> ts, xs;
        std::vector<std::vector<double>> v;
        for (const auto &[t, line] : grid) {
            ts.push_back(t);
            std::vector<double> r;
            if (xs.empty()) {
                for (const auto &[x, _] : line) xs.push_back(x);
            }
            for (const auto &[x, val] : line) r.push_back(val);
            v.push_back(std::move(r));
        }
        atomic_write(dir / "heatmap.svg", plot::heatmap("T(x, t)", "x", "t", xs, ts, v, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}));
        written.push_back(dir / "heatmap.svg");
    }
    return written;
}

inline SolveResult solve(const RunConfig &cfg, const SolveOptions &opt = {}) {
    namespace fs = std::filesystem;
    cfg.validate();
    const auto problem = make_problem(cfg.problem);
    const fs::path dir = cfg.output_directory;
    if (opt.write_artifacts) {
        fs::create_directories(dir);
        atomic_write(dir / "config.txt", serialize_run_config(cfg));
    }
    SolveResult res;
    TrainingHooks hooks{opt.counters, opt.threads, opt.on_epoch};
    NetworkParams params = init_params(cfg.network, cfg.train.seed);
    res.initial_params = params;
    try {
        if (const auto *heat = dynamic_cast<const Heat1D *>(problem.get()); heat && cfg.train.pretrain_epochs > 0) {
            params = pretrain_ic(*heat, cfg.network, params, cfg.train, hooks);
        }
        res.record = train(*problem, cfg.network, params, cfg.train, hooks);
    } catch (const NumericalError &e) {
        if (opt.write_artifacts) atomic_write(dir / "incidents.log", std::string("aborted: ") + e.what() + "\n");
        throw;
    }
    res.rows = predict_on_grid(*problem, cfg.network, res.record.best_params);
    res.nmse = rows_nmse(res.rows);
    res.max_initial_prediction = -std::numeric_limits<double>::infinity();
    for (const auto &r : res.rows) {
        if (r.point.size() > 1 && r.point[1] == 0.0) res.max_initial_prediction = std::max(res.max_initial_prediction, r.predicted);
    }
    if (opt.write_artifacts) {
        atomic_write(dir / "training_log.csv", training_log_csv(res.record));
        atomic_write(dir / "checkpoint.json", serialize_checkpoint(cfg.network, res.record.best_params));
        const bool two_d = cfg.problem == "heat1d";
        atomic_write(dir / "solution.csv", solution_csv(res.rows, two_d));
        std::vector<std::vector<double>> pts;
        std::vector<double> vals;
        for (const auto &r : res.rows) {
            pts.push_back(r.point);
            vals.push_back(r.reference);
        }
        atomic_write(dir / "reference.csv", reference_csv(pts, vals, two_d));
        if (!res.record.incidents.empty()) {
            std::string text;
            for (const auto &s : res.record.incidents) text += s + "\n";
            atomic_write(dir / "incidents.log", text);
        }
        atomic_write(dir / "summary.txt", summary_text(cfg, res, opt.counters));
        if (cfg.emit_plots) write_plots(dir);
    }
    return res;
}

} // namespace cvqpinn
