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

#include <algorithm>
#include <cmath>
#include <random>

#include "cvqpinn/gradients.hpp"
#include "cvqpinn/pinn.hpp"
#include "cvqpinn/problems.hpp"

using namespace cvqpinn;

namespace {

// Independent central-difference oracle.
double central(const std::function<double(double)> &f, double x, double h) { return (f(x + h) - f(x - h)) / (2.0 * h); }

double rel_err(double a, double b, double floor) { return std::abs(a - b) / std::max(std::abs(b), floor); }

NetworkConfig small_config(int cutoff) {
    NetworkConfig c;
    c.cutoff = cutoff;
    return c;
}

} // namespace

TEST(InputJacobian, IdentityNetwork) {
    const NetworkConfig c;
    const Circuit circ(c, NetworkParams(c.param_count(), 0.0));
    const auto j = input_jacobian(circ, {0.3, 0.1});
    EXPECT_NEAR(j.jacobian[0][0], 2.0, 1e-12);
    EXPECT_NEAR(j.jacobian[0][1], 0.0, 1e-12);
    EXPECT_NEAR(j.jacobian[1][0], 0.0, 1e-12);
    EXPECT_NEAR(j.jacobian[1][1], 2.0, 1e-12);
}

TEST(InputJacobian, MatchesFiniteDifferences) {
    const NetworkConfig c = small_config(12);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Circuit circ(c, init_params(c, seed, 10.0));
        const std::vector<double> x{0.37, 0.21};
        const auto j = input_jacobian(circ, x);
        for (std::size_t out = 0; out < 2; ++out) {
            for (std::size_t in = 0; in < 2; ++in) {
                const double fd = central(
                    [&](double v) {
                        auto y = x;
                        y[in] = v;
                        return forward(circ, y).outputs[out];
                    },
                    x[in], 1e-4);
                EXPECT_LT(rel_err(j.jacobian[out][in], fd, 1e-3), 1e-5) << seed << " " << out << " " << in;
            }
        }
    }
}

TEST(InputJacobian, CountsRequests) {
    const NetworkConfig c = small_config(6);
    DerivativeCounters counters;
    input_jacobian(c, NetworkParams(c.param_count(), 0.0), {0.1, 0.2}, &counters);
    EXPECT_EQ(counters.jacobian_evaluations.load(), 1u);
    EXPECT_EQ(counters.nested_evaluations.load(), 0u);
}

TEST(PointEvaluator, AgreesWithDualForward) {
    const NetworkConfig c = small_config(12);
    const Circuit circ(c, init_params(c, 5, 10.0));
    const PointEvaluator ev(circ);
    const std::vector<double> x{-0.3, 0.25};
    const auto j = input_jacobian(circ, x);
    const auto o = ev.evaluate(x, {0, 1});
    for (std::size_t out = 0; out < 2; ++out) {
        EXPECT_NEAR(o.u[out], j.outputs[out], 1e-12);
        for (std::size_t in = 0; in < 2; ++in) EXPECT_NEAR(o.du[out][in], j.jacobian[out][in], 1e-10);
    }
    EXPECT_NEAR(o.norm_sq, j.norm_sq, 1e-12);
    const auto single = ev.evaluate(x, {1});
    EXPECT_NEAR(single.du[0][0], j.jacobian[0][1], 1e-10);
}

TEST(FiniteDifference, StepAndClip) {
    EXPECT_DOUBLE_EQ(fd_step(0.1, 1e-5), 1e-5);
    EXPECT_DOUBLE_EQ(fd_step(-4.0, 1e-5), 4e-5);
    GradientVector g{20.0, -30.0, 1.0};
    clip_gradient(g, 10.0);
    EXPECT_EQ(g, (GradientVector{10.0, -10.0, 1.0}));
    clip_gradient(g, 0.0);
    EXPECT_EQ(g, (GradientVector{10.0, -10.0, 1.0}));
    const auto fd = finite_difference_gradient([](const NetworkParams &p) { return p[0] * p[0] + 3.0 * p[1]; }, {2.0, 1.0});
    EXPECT_NEAR(fd[0], 4.0, 1e-8);
    EXPECT_NEAR(fd[1], 3.0, 1e-8);
}

class AdjointVsFd : public ::testing::TestWithParam<std::string> {};

TEST_P(AdjointVsFd, LossGradient) {
    const auto problem = make_problem(GetParam());
    const NetworkConfig c = small_config(10);
    const NetworkParams p = init_params(c, 2, 8.0);
    CollocationSet set = problem->sample(2, 9);
    if (set.initial_points.size() > 3) set.initial_points.resize(3);
    if (set.interior_points.size() > 6) set.interior_points.resize(6);
    const LossWeights w = problem->default_weights();

    const auto exact = evaluate_loss(*problem, Circuit(c, p, true), set, w, true).gradient;
    const auto loss = [&](const NetworkParams &q) { return evaluate_loss(*problem, Circuit(c, q), set, w, false).breakdown.total; };
    double scale = 0.0;
    std::vector<double> fd(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double h = 1e-5;
        auto q = p;
        q[k] = p[k] + h;
        const double up = loss(q);
        q[k] = p[k] - h;
        fd[k] = (up - loss(q)) / (2.0 * h);
        scale = std::max(scale, std::abs(fd[k]));
    }
    for (std::size_t k = 0; k < p.size(); ++k) EXPECT_LT(rel_err(exact[k], fd[k], 1e-3 * scale), 1e-5) << "param " << k;
}

INSTANTIATE_TEST_SUITE_P(Problems, AdjointVsFd, ::testing::Values("poisson1d", "heat1d"));

TEST(Assembly, ThreadCountDoesNotChangeResult) {
    const Poisson1D problem;
    const NetworkConfig c = small_config(8);
    const Circuit circ(c, init_params(c, 1, 5.0), true);
    const auto set = problem.sample(4, 3);
    const auto a = evaluate_loss(problem, circ, set, problem.default_weights(), true, nullptr, 1);
    const auto b = evaluate_loss(problem, circ, set, problem.default_weights(), true, nullptr, 3);
    EXPECT_EQ(a.breakdown.total, b.breakdown.total);
    EXPECT_EQ(a.gradient, b.gradient);
}

TEST(Assembly, ValueOnlyMatchesGradientPass) {
    const Heat1D problem;
    const NetworkConfig c = small_config(8);
    const Circuit circ(c, init_params(c, 1, 5.0), true);
    const auto set = problem.sample(2, 3);
    const auto a = evaluate_loss(problem, circ, set, problem.default_weights(), true);
    const auto b = evaluate_loss(problem, circ, set, problem.default_weights(), false);
    EXPECT_EQ(a.breakdown.total, b.breakdown.total);
    EXPECT_TRUE(b.gradient.empty());
}
