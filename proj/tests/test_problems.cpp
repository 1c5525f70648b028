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
#include <numbers>
#include <random>

#include "cvqpinn/problems.hpp"

using namespace cvqpinn;

namespace {

constexpr double pi = std::numbers::pi;

// Sine-series solution on [-pi/2, pi/2] with zero Dirichlet data; the
// coefficients come from Simpson quadrature of the initial profile.
struct SineSeries {
    std::vector<double> b;
    explicit SineSeries(int modes) : b(static_cast<std::size_t>(modes) + 1, 0.0) {
        const int n = 20000;
        const double h = pi / n;
        for (int k = 1; k <= modes; ++k) {
            double acc = 0.0;
            for (int i = 0; i <= n; ++i) {
                const double y = h * i;
                const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
                acc += w * heat_initial_condition(y - pi / 2.0) * std::sin(k * y);
            }
            b[static_cast<std::size_t>(k)] = 2.0 / pi * acc * h / 3.0;
        }
    }
    double operator()(double x, double t) const {
        double u = 0.0;
        for (std::size_t k = 1; k < b.size(); ++k) {
            const double kk = static_cast<double>(k);
            u += b[k] * std::sin(kk * (x + pi / 2.0)) * std::exp(-heat_diffusivity * kk * kk * t);
        }
        return u;
    }
};

} // namespace

TEST(Poisson, ExactSolution) {
    EXPECT_EQ(poisson_exact(0.0), 0.0);
    EXPECT_NEAR(poisson_exact(pi / 2.0), 0.0, 1e-16);
    EXPECT_NEAR(poisson_exact(pi / 8.0), 0.0625, 1e-15);
}

TEST(Poisson, ExactSolutionSatisfiesEquation) {
    // Sixth-order central stencil for u''.
    const double h = 1e-2;
    const std::array<double, 7> c{1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
    for (int i = 1; i <= 50; ++i) {
        const double x = pi / 2.0 * i / 51.0;
        double d2 = 0.0;
        for (int k = 0; k < 7; ++k) d2 += c[static_cast<std::size_t>(k)] * poisson_exact(x + (k - 3) * h);
        d2 /= h * h;
        EXPECT_NEAR(d2 + std::sin(4.0 * x), 0.0, 1e-10) << x;
    }
}

TEST(Nmse, Definition) {
    const std::vector<double> y{1.0, -2.0, 3.0};
    EXPECT_EQ(nmse(y, y), 0.0);
    EXPECT_DOUBLE_EQ(nmse({0.0, 0.0, 0.0}, y), 1.0);
    const std::vector<double> yhat{1.1, -2.0, 2.5};
    std::vector<double> sy, syhat;
    for (std::size_t i = 0; i < y.size(); ++i) {
        sy.push_back(-7.0 * y[i]);
        syhat.push_back(-7.0 * yhat[i]);
    }
    EXPECT_NEAR(nmse(syhat, sy), nmse(yhat, y), 1e-14);
    EXPECT_THROW(nmse({1.0}, {0.0}), NumericalError);
    EXPECT_THROW(nmse({1.0}, {1.0, 2.0}), UsageError);
    EXPECT_THROW(nmse({}, {}), UsageError);
}

TEST(HeatReference, ReproducesInitialCondition) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-pi / 2.0 + 1e-3, pi / 2.0 - 1e-3);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        EXPECT_NEAR(heat_reference(x, 0.0), heat_initial_condition(x), 1e-6) << x;
    }
}

TEST(HeatReference, BoundaryValues) {
    for (double t : {0.001, 0.1, 0.25, 0.5}) {
        EXPECT_EQ(heat_reference(-pi / 2.0, t), 0.0);
        EXPECT_EQ(heat_reference(pi / 2.0, t), 0.0);
    }
    EXPECT_THROW(heat_reference(2.0, 0.1), UsageError);
    EXPECT_THROW(heat_reference(0.0, 0.6), UsageError);
    EXPECT_THROW(heat_reference(0.0, -0.1), UsageError);
}

TEST(HeatReference, MaximumPrinciple) {
    const auto &ref = heat_reference_grid();
    double prev = 2.0;
    for (std::size_t n = 0; n < ref.nt(); ++n) {
        double m = 0.0;
        for (std::size_t i = 0; i < ref.nx(); ++i) m = std::max(m, ref.node(i, n));
        EXPECT_LE(m, prev + 1e-15) << n;
        prev = m;
    }
}

TEST(HeatReference, SatisfiesPde) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-pi / 2.0 + 0.05, pi / 2.0 - 0.05);
    std::uniform_real_distribution<double> ut(0.02, 0.48);
    const double hx = 5e-3, ht = 5e-3;
    for (int i = 0; i < 100; ++i) {
        const double x = ux(rng), t = ut(rng);
        const double tt = (heat_reference(x, t + ht) - heat_reference(x, t - ht)) / (2 * ht);
        const double xx = (heat_reference(x + hx, t) - 2 * heat_reference(x, t) + heat_reference(x - hx, t)) / (hx * hx);
        EXPECT_LT(std::abs(tt - heat_diffusivity * xx), 1e-3) << x << " " << t;
    }
}

TEST(HeatReference, AgreesWithSineSeries) {
    const SineSeries series(200);
    double worst = 0.0;
    for (double t : {0.05, 0.1, 0.25, 0.5}) {
        for (int i = 0; i <= 40; ++i) {
            const double x = -pi / 2.0 + pi * i / 40.0;
            worst = std::max(worst, std::abs(heat_reference(x, t) - series(x, t)));
        }
    }
    EXPECT_LT(worst, 1e-5);
}

TEST(HeatReference, SecondOrderSelfConvergence) {
    const HeatReference coarse(201, 251), mid(401, 501), fine(801, 1001);
    double e1 = 0.0, e2 = 0.0;
    for (int n = 1; n <= 20; ++n) {
        const double t = 0.5 * n / 20.0;
        for (int i = 0; i <= 40; ++i) {
            const double x = -pi / 2.0 + pi * i / 40.0;
            e1 = std::max(e1, std::abs(coarse(x, t) - mid(x, t)));
            e2 = std::max(e2, std::abs(mid(x, t) - fine(x, t)));
        }
    }
    const double ratio = e1 / e2;
    EXPECT_GT(ratio, 2.0);
    EXPECT_LT(ratio, 8.0);
    EXPECT_LT(e2, 1e-5);
}

TEST(Presets, ByName) {
    EXPECT_EQ(make_problem("poisson1d")->name(), "poisson1d");
    EXPECT_EQ(make_problem("heat1d")->name(), "heat1d");
    EXPECT_THROW(make_problem("wave"), ConfigError);
}

TEST(Presets, HeatCollocationShape) {
    const Heat1D heat;
    const auto s = heat.sample(4, 7);
    EXPECT_EQ(s.interior_points.size(), 16u * 10u);
    EXPECT_EQ(s.boundary_points.size(), 2u * 10u);
    EXPECT_EQ(s.initial_points.size(), 32u);
    for (const auto &b : s.boundary_points) EXPECT_EQ(b.target, 0.0);
    for (const auto &q : s.initial_points) EXPECT_EQ(q.target, heat_initial_condition(q.point[0]));
    EXPECT_EQ(heat.initial_set(8).initial_points.size(), 258u);
    EXPECT_EQ(heat.evaluation_grid().size(), 41u * 21u);
    EXPECT_EQ(Poisson1D{}.evaluation_grid().size(), 101u);
}

TEST(Presets, PoissonReferenceSatisfiesResidualStructure) {
    const Poisson1D p;
    for (double x : {0.2, 0.9, 1.4}) {
        PointOutputs o;
        o.u = {poisson_exact(x), std::cos(4.0 * x) / 4.0};
        o.du = {{std::cos(4.0 * x) / 4.0}, {-std::sin(4.0 * x)}};
        o.norm_sq = 1.0;
        EXPECT_NEAR(p.pde_residual({x}).evaluate(o), 0.0, 1e-15);
        EXPECT_NEAR(p.consistency_residual({x}).evaluate(o), 0.0, 1e-15);
    }
}
