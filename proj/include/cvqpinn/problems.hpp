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
 * @file problems.hpp
 * @brief Benchmark problems: 1D Poisson and 1D heat, with reference solutions.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "cvqpinn/errors.hpp"
#include "cvqpinn/pinn.hpp"

namespace cvqpinn {

/// Normalized mean squared error sum (y - yhat)^2 / sum y^2.
inline double nmse(const std::vector<double> &predicted, const std::vector<double> &truth) {
    if (predicted.size() != truth.size() || truth.empty()) throw UsageError("nmse needs equal nonzero lengths");
    std::vector<double> num(truth.size()), den(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        num[i] = (truth[i] - predicted[i]) * (truth[i] - predicted[i]);
        den[i] = truth[i] * truth[i];
    }
    const double energy = pairwise_sum(den);
    if (!(energy > 0.0)) throw NumericalError("nmse is undefined for a zero-energy reference");
    return pairwise_sum(num) / energy;
}

/// u'' + sin 4x = 0 on [0, pi/2] with zero Dirichlet data.
inline double poisson_exact(double x) { return std::sin(4.0 * x) / 16.0; }

/**
 * @brief Crank-Nicolson solution of T_t = alpha T_xx on [-pi/2, pi/2] x [0, t_end].
 *
 * The first Crank-Nicolson step is replaced by two backward-Euler half steps
 * (Rannacher start-up) to damp the corner mismatch between the initial
 * Gaussian and the zero boundary values. Queries use cubic Lagrange
 * interpolation in x and linear interpolation in t. The t = 0 row holds the
 * initial condition at every node; later rows hold 0 at the boundary nodes.
 */
class HeatReference {
  public:
    static constexpr double x_lo = -std::numbers::pi / 2.0;
    static constexpr double x_hi = std::numbers::pi / 2.0;
    static constexpr double t_end = 0.5;

    explicit HeatReference(std::size_t nx = 401, std::size_t nt = 501, double alpha = heat_diffusivity) : nx_(nx), nt_(nt) {
        if (nx < 5 || nt < 3) throw ConfigError("heat reference grid too small");
        dx_ = (x_hi - x_lo) / static_cast<double>(nx - 1);
        dt_ = t_end / static_cast<double>(nt - 1);
        values_.assign(nx * nt, 0.0);
        std::vector<double> u(nx);
        for (std::size_t i = 0; i < nx; ++i) u[i] = heat_initial_condition(x_lo + static_cast<double>(i) * dx_);
        std::copy(u.begin(), u.end(), values_.begin());
        u.front() = u.back() = 0.0;

        const double half = alpha / (dx_ * dx_);
        step(u, 0.5 * dt_ * half, 0.0);
        step(u, 0.5 * dt_ * half, 0.0);
        store(1, u);
        for (std::size_t n = 2; n < nt; ++n) {
            step(u, 0.5 * dt_ * half, 0.5 * dt_ * half);
            store(n, u);
        }
    }

    std::size_t nx() const { return nx_; }
    std::size_t nt() const { return nt_; }
    double node(std::size_t i, std::size_t n) const { return values_[n * nx_ + i]; }

    double operator()(double x, double t) const {
        if (!(x >= x_lo - 1e-12 && x <= x_hi + 1e-12 && t >= -1e-12 && t <= t_end + 1e-12)) {
            throw UsageError("heat reference queried outside [-pi/2, pi/2] x [0, 0.5]");
        }
        const double s = std::clamp((t - 0.0) / dt_, 0.0, static_cast<double>(nt_ - 1));
        const auto n0 = std::min(static_cast<std::size_t>(s), nt_ - 2);
        const double w = s - static_cast<double>(n0);
        const double a = in_space(x, n0);
        return w == 0.0 ? a : (1.0 - w) * a + w * in_space(x, n0 + 1);
    }

  private:
    // Solves (I - impl L) u_new = (I + expl L) u_old with zero boundary values.
    void step(std::vector<double> &u, double impl, double expl) const {
        const std::size_t m = nx_ - 2;
        std::vector<double> rhs(m), cp(m), dp(m);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t j = i + 1;
            rhs[i] = u[j] + expl * (u[j - 1] - 2.0 * u[j] + u[j + 1]);
        }
        const double diag = 1.0 + 2.0 * impl;
        const double off = -impl;
        cp[0] = off / diag;
        dp[0] = rhs[0] / diag;
        for (std::size_t i = 1; i < m; ++i) {
            const double den = diag - off * cp[i - 1];
            cp[i] = off / den;
            dp[i] = (rhs[i] - off * dp[i - 1]) / den;
        }
        u[m] = dp[m - 1];
        for (std::size_t i = m - 1; i-- > 0;) u[i + 1] = dp[i] - cp[i] * u[i + 2];
        u.front() = u.back() = 0.0;
    }

    void store(std::size_t n, const std::vector<double> &u) { std::copy(u.begin(), u.end(), values_.begin() + static_cast<std::ptrdiff_t>(n * nx_)); }

    double in_space(double x, std::size_t n) const {
        const double s = std::clamp((x - x_lo) / dx_, 0.0, static_cast<double>(nx_ - 1));
        const double nearest = std::round(s);
        if (std::abs(s - nearest) < 1e-9) return node(static_cast<std::size_t>(nearest), n);
        auto i0 = static_cast<std::ptrdiff_t>(std::floor(s)) - 1;
        i0 = std::clamp<std::ptrdiff_t>(i0, 0, static_cast<std::ptrdiff_t>(nx_) - 4);
        double acc = 0.0;
        for (std::ptrdiff_t a = 0; a < 4; ++a) {
            double basis = 1.0;
            for (std::ptrdiff_t b = 0; b < 4; ++b) {
                if (a != b) basis *= (s - static_cast<double>(i0 + b)) / static_cast<double>(a - b);
            }
            acc += basis * node(static_cast<std::size_t>(i0 + a), n);
        }
        return acc;
    }

    std::size_t nx_, nt_;
    double dx_ = 0.0, dt_ = 0.0;
    std::vector<double> values_;
};

/// Shared default-resolution reference, built on first use.
inline const HeatReference &heat_reference_grid() {
    static const HeatReference ref;
    return ref;
}

inline double heat_reference(double x, double t) { return heat_reference_grid()(x, t); }

/**
 * @brief A benchmark PDE: residual structure, sampling, validation grid and reference.
 */
class ProblemSpec : public ResidualModel {
  public:
    virtual std::string name() const = 0;
    virtual std::vector<Interval> domain() const = 0;
    virtual bool has_initial_condition() const = 0;
    virtual LossWeights default_weights() const = 0;
    /// Training collocation set; scrambled from `seed` when given.
    virtual CollocationSet sample(int k, std::optional<std::uint64_t> seed) const = 0;
    /// Fixed held-out set used to pick the best parameters.
    virtual CollocationSet validation_set() const = 0;
    /// Uniform grid for the NMSE report.
    virtual std::vector<std::vector<double>> evaluation_grid() const = 0;
    virtual double reference(const std::vector<double> &point) const = 0;
};

namespace detail {

inline std::vector<double> uniform_nodes(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

/// n interior nodes of the uniform (n + 2)-node grid.
inline std::vector<double> interior_nodes(double lo, double hi, std::size_t n) {
    auto v = uniform_nodes(lo, hi, n + 2);
    return {v.begin() + 1, v.end() - 1};
}

} // namespace detail

/// u'' = -sin 4x on [0, pi/2]; outputs (u, u_x), inputs (x, 0).
class Poisson1D final : public ProblemSpec {
  public:
    static constexpr double x_lo = 0.0;
    static constexpr double x_hi = std::numbers::pi / 2.0;

    std::string name() const override { return "poisson1d"; }
    std::vector<Interval> domain() const override { return {{x_lo, x_hi}}; }
    bool has_initial_condition() const override { return false; }
    LossWeights default_weights() const override { return LossWeights::poisson_preset(); }

    std::vector<double> network_inputs(const std::vector<double> &p) const override { return {p.at(0), 0.0}; }
    std::vector<std::size_t> derivative_directions() const override { return {0}; }
    LinearResidual pde_residual(const std::vector<double> &p) const override {
        return {std::sin(4.0 * p.at(0)), {derivative_term(1, 0)}};
    }
    LinearResidual consistency_residual(const std::vector<double> &) const override {
        return {0.0, {derivative_term(0, 0), output_term(1, -1.0)}};
    }

    CollocationSet sample(int k, std::optional<std::uint64_t> seed) const override { return sobol_points(k, domain(), seed); }

    CollocationSet validation_set() const override {
        CollocationSet set;
        for (double x : detail::interior_nodes(x_lo, x_hi, 64)) set.interior_points.push_back({x});
        set.boundary_points = {{{x_lo}, 0.0}, {{x_hi}, 0.0}};
        return set;
    }

    std::vector<std::vector<double>> evaluation_grid() const override {
        std::vector<std::vector<double>> g;
        for (double x : detail::uniform_nodes(x_lo, x_hi, 101)) g.push_back({x});
        return g;
    }

    double reference(const std::vector<double> &p) const override { return poisson_exact(p.at(0)); }
};

/**
 * @brief T_t = alpha T_xx on [-pi/2, pi/2] x [0, 0.5]; outputs (T, T_x), inputs (x, t).
 *
 * Training points: a tensor grid of 2^k Sobol x plus both ends by 2^(k-1)
 * Sobol t plus {0, 0.5}. Boundary targets sit at x = +-pi/2 on the same time
 * nodes; initial targets at 2^k Sobol x plus 2^k uniform x.
 */
class Heat1D final : public ProblemSpec {
  public:
    static constexpr double x_lo = HeatReference::x_lo;
    static constexpr double x_hi = HeatReference::x_hi;
    static constexpr double t_end = HeatReference::t_end;

    explicit Heat1D(double alpha = heat_diffusivity) : alpha_(alpha) {}

    std::string name() const override { return "heat1d"; }
    std::vector<Interval> domain() const override { return {{x_lo, x_hi}, {0.0, t_end}}; }
    bool has_initial_condition() const override { return true; }
    LossWeights default_weights() const override { return LossWeights::heat_preset(); }
    double alpha() const { return alpha_; }

    std::vector<double> network_inputs(const std::vector<double> &p) const override { return {p.at(0), p.at(1)}; }
    std::vector<std::size_t> derivative_directions() const override { return {0, 1}; }
    LinearResidual pde_residual(const std::vector<double> &) const override {
        return {0.0, {derivative_term(0, 1), derivative_term(1, 0, -alpha_)}};
    }
    LinearResidual consistency_residual(const std::vector<double> &) const override {
        return {0.0, {derivative_term(0, 0), output_term(1, -1.0)}};
    }

    CollocationSet sample(int k, std::optional<std::uint64_t> seed) const override {
        if (k < 2) throw ConfigError("heat collocation needs k >= 2");
        const CollocationSet xs = sobol_points(k, {domain()[0]}, seed);
        const CollocationSet ts = sobol_points(k - 1, {domain()[1]}, seed ? std::optional<std::uint64_t>(*seed ^ 0x9e3779b97f4a7c15ULL) : seed);
        std::vector<double> times{0.0, t_end};
        for (const auto &t : ts.interior_points) times.push_back(t[0]);
        return assemble(xs, times, detail::interior_nodes(x_lo, x_hi, std::size_t{1} << k));
    }

    CollocationSet validation_set() const override {
        CollocationSet xs;
        for (double x : detail::interior_nodes(x_lo, x_hi, 32)) xs.interior_points.push_back({x});
        return assemble(xs, detail::uniform_nodes(0.0, t_end, 16), {});
    }

    std::vector<std::vector<double>> evaluation_grid() const override {
        std::vector<std::vector<double>> g;
        for (double t : detail::uniform_nodes(0.0, t_end, 21)) {
            for (double x : detail::uniform_nodes(x_lo, x_hi, 41)) g.push_back({x, t});
        }
        return g;
    }

    double reference(const std::vector<double> &p) const override { return heat_reference(p.at(0), p.at(1)); }

    /// Initial-condition-only set of n Sobol x at t = 0 plus both ends.
    CollocationSet initial_set(int k) const {
        const CollocationSet xs = sobol_points(k, {domain()[0]});
        CollocationSet set;
        for (const auto &x : xs.interior_points) set.initial_points.push_back({{x[0], 0.0}, heat_initial_condition(x[0])});
        for (const auto &b : xs.boundary_points) set.initial_points.push_back({{b.point[0], 0.0}, heat_initial_condition(b.point[0])});
        return set;
    }

  private:
    static CollocationSet assemble(const CollocationSet &xs, const std::vector<double> &times, const std::vector<double> &extra_ic_x) {
        CollocationSet set;
        for (double t : times) {
            for (const auto &x : xs.interior_points) set.interior_points.push_back({x[0], t});
            set.boundary_points.push_back({{x_lo, t}, 0.0});
            set.boundary_points.push_back({{x_hi, t}, 0.0});
        }
        for (const auto &x : xs.interior_points) set.initial_points.push_back({{x[0], 0.0}, heat_initial_condition(x[0])});
        for (double x : extra_ic_x) set.initial_points.push_back({{x, 0.0}, heat_initial_condition(x)});
        return set;
    }

    double alpha_;
};

inline std::unique_ptr<ProblemSpec> make_problem(const std::string &name) {
    if (name == "poisson1d") return std::make_unique<Poisson1D>();
    if (name == "heat1d") return std::make_unique<Heat1D>();
    throw ConfigError("unknown problem '" + name + "' (expected poisson1d or heat1d)");
}

} // namespace cvqpinn
