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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cvqpinn/config.hpp"
#include "cvqpinn/gate_validation.hpp"
#include "cvqpinn/gradcheck.hpp"
#include "cvqpinn/io.hpp"
#include "cvqpinn/plot.hpp"
#include "cvqpinn/solve.hpp"

using namespace cvqpinn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const fs::path p = fs::temp_directory_path() / ("cvqpinn_test_" + name);
    fs::remove_all(p);
    return p;
}

RunConfig tiny_run(const std::string &problem, const fs::path &dir) {
    RunConfig c = default_run_config(problem);
    c.network.cutoff = 6;
    c.train.epochs = 3;
    c.train.pretrain_epochs = 2;
    c.train.k_collocation = 2;
    c.output_directory = dir.string();
    return c;
}

} // namespace

TEST(RunConfig, DefaultsRoundTrip) {
    for (const char *p : {"poisson1d", "heat1d"}) {
        const RunConfig c = default_run_config(p);
        EXPECT_EQ(parse_run_config(serialize_run_config(c)), c) << p;
    }
}

TEST(RunConfig, NonDefaultRoundTrip) {
    RunConfig c = default_run_config("heat1d");
    c.train.learning_rate = 0.0123456789012345;
    c.train.weights.extra = 1.0 / 3.0;
    c.train.schedule.lr_min = 1e-7;
    c.network.multi_layers = 4;
    c.network.single_layers = 0;
    c.emit_plots = true;
    EXPECT_EQ(parse_run_config(serialize_run_config(c)), c);
}

TEST(RunConfig, OverridesApplyOnPresetDefaults) {
    const RunConfig c = parse_run_config("# comment\ntrain.epochs = 7\n\nproblem = heat1d\n");
    EXPECT_EQ(c.problem, "heat1d");
    EXPECT_EQ(c.train.epochs, 7);
    EXPECT_DOUBLE_EQ(c.train.learning_rate, 0.01);
    EXPECT_EQ(c.train.pretrain_epochs, 300);
}

TEST(RunConfig, Errors) {
    EXPECT_THROW(parse_run_config("train.bogus = 1\n"), ConfigError);
    EXPECT_THROW(parse_run_config("train.epochs = many\n"), ConfigError);
    EXPECT_THROW(parse_run_config("train.epochs = 5\ntrain.epochs = 6\n"), ConfigError);
    EXPECT_THROW(parse_run_config("no equals sign\n"), ConfigError);
    EXPECT_THROW(parse_run_config("problem = wave\n"), ConfigError);
    EXPECT_THROW(parse_run_config("weights.bc = -1\n"), ConfigError);
    EXPECT_THROW(parse_run_config("output.plots = maybe\n"), ConfigError);
    EXPECT_THROW(parse_run_config("network.num_modes = 1\n"), ConfigError);
}

TEST(Io, AtomicWriteReplacesContent) {
    const fs::path dir = scratch("atomic");
    fs::create_directories(dir);
    atomic_write(dir / "f.txt", "one");
    atomic_write(dir / "f.txt", "two");
    EXPECT_EQ(read_file(dir / "f.txt"), "two");
    EXPECT_FALSE(fs::exists(dir / "f.txt.tmp"));
    fs::remove_all(dir);
}

TEST(Io, TrainingLogSchema) {
    TrainingRecord rec;
    EpochRecord e;
    e.epoch = 0;
    e.loss = {.pde = 0.1, .bc = 0.2, .ic = 0.0, .trace = 0.4, .consistency = 0.5, .extra = 0.0, .total = 1.2};
    e.lr = 0.1;
    rec.epochs.push_back(e);
    const std::string csv = training_log_csv(rec);
    EXPECT_EQ(csv, "# cvqpinn-training-log v1\nepoch,loss_pde,loss_bc,loss_ic,loss_trace,loss_consistency,loss_total,lr\n0,0.1,0.2,0,0.4,0.5,1.2,0.1\n");
}

TEST(Plot, ContourOfLinearField) {
    const std::vector<double> xs{0.0, 1.0, 2.0}, ys{0.0, 1.0};
    const std::vector<std::vector<double>> v{{0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}};
    const auto segs = plot::contour_segments(xs, ys, v, 1.5);
    ASSERT_EQ(segs.size(), 1u);
    EXPECT_DOUBLE_EQ(segs[0][0], 1.5);
    EXPECT_DOUBLE_EQ(segs[0][2], 1.5);
}

TEST(Plot, SvgIsWellFormed) {
    const auto svg = plot::line_plot("t<1>", "x", "y", {{"a", {0.0, 1.0}, {1.0, 2.0}}}, true);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("t&lt;1&gt;"), std::string::npos);
}

TEST(GateValidation, AllChecksPass) {
    for (const auto &c : validate_gates()) EXPECT_TRUE(c.passed()) << c.name << " " << c.max_error;
}

TEST(GateValidation, InjectedKerrFaultIsNamed) {
    GateValidationOptions opt;
    opt.kerr = faulty_kerr_matrix;
    std::vector<std::string> failed;
    for (const auto &c : validate_gates(opt)) {
        if (!c.passed()) failed.push_back(c.name);
    }
    ASSERT_EQ(failed.size(), 1u);
    EXPECT_EQ(failed[0], "kerr_diagonal_unitary");
}

TEST(Gradcheck, RelativeErrorFloor) {
    EXPECT_DOUBLE_EQ(worst_relative_error({1.0, 0.0}, {1.0, 0.0}), 0.0);
    EXPECT_NEAR(worst_relative_error({1.01, 0.0}, {1.0, 0.0}), 0.01, 1e-12);
    // A tiny component is judged against 1e-3 of the largest.
    EXPECT_NEAR(worst_relative_error({1.0, 1e-6}, {1.0, 0.0}), 1e-3, 1e-12);
}

TEST(Gradcheck, DeterministicPerSeed) {
    NetworkConfig net;
    net.cutoff = 8;
    const Poisson1D p;
    const auto a = gradcheck(p, net, 3), b = gradcheck(p, net, 3);
    EXPECT_EQ(a.gradient_error, b.gradient_error);
    EXPECT_EQ(a.jacobian_error, b.jacobian_error);
    EXPECT_TRUE(a.passed());
}

TEST(Solve, WritesArtifactsAndPlots) {
    for (const char *problem : {"poisson1d", "heat1d"}) {
        const fs::path dir = scratch(problem);
        RunConfig cfg = tiny_run(problem, dir);
        DerivativeCounters counters;
        SolveOptions opt;
        opt.counters = &counters;
        const auto res = solve(cfg, opt);
        for (const char *f : {"config.txt", "training_log.csv", "checkpoint.json", "solution.csv", "reference.csv", "summary.txt"}) {
            EXPECT_TRUE(fs::exists(dir / f)) << problem << " " << f;
        }
        EXPECT_EQ(counters.nested_evaluations.load(), 0u);
        const Checkpoint ck = parse_checkpoint(read_file(dir / "checkpoint.json"));
        EXPECT_EQ(ck.params, res.record.best_params);
        EXPECT_EQ(parse_run_config(read_file(dir / "config.txt")), cfg);

        const auto files = write_plots(dir);
        EXPECT_EQ(files.size(), 2u);
        const std::string first = read_file(files[1]);
        write_plots(dir);
        EXPECT_EQ(read_file(files[1]), first);
        fs::remove_all(dir);
    }
}

TEST(Solve, ZeroEpochBaseline) {
    const fs::path dir = scratch("baseline");
    RunConfig cfg = tiny_run("heat1d", dir);
    cfg.train.epochs = 0;
    cfg.train.pretrain_epochs = 0;
    const auto res = solve(cfg);
    EXPECT_TRUE(res.record.epochs.empty());
    EXPECT_EQ(res.record.best_params, res.initial_params);
    EXPECT_GT(res.nmse, 0.1);
    EXPECT_EQ(write_plots(dir).size(), 2u);
    fs::remove_all(dir);
}

TEST(Solve, MissingArtifactsRejected) {
    const fs::path dir = scratch("missing");
    fs::create_directories(dir);
    EXPECT_THROW(write_plots(dir), ConfigError);
    fs::remove_all(dir);
}
