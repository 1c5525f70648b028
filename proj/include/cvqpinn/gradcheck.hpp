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
 * @file gradcheck.hpp
 * @brief Compares the exact input Jacobian and loss gradient with central differences.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cvqpinn/gradients.hpp"
#include "cvqpinn/pinn.hpp"
#include "cvqpinn/problems.hpp"

namespace cvqpinn {

/// |a - b| / max(|b|, 1e-3 max_k |b_k|), worst over components.
inline double worst_relative_error(const std::vector<double> &approx, const std::vector<double> &reference) {
    if (approx.size() != reference.size()) throw UsageError("relative error needs equal lengths");
    double scale = 0.0;
    for (double b : reference) scale = std::max(scale, std::abs(b));
    const double floor = std::max(1e-3 * scale, std::numeric_limits<double>::min());
    double worst = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i) worst = std::max(worst, std::abs(approx[i] - reference[i]) / std::max(std::abs(reference[i]), floor));
    return worst;
}

struct GradcheckReport {
    double jacobian_error = 0.0;
    double gradient_error = 0.0;
    std::size_t points = 0;
    std::size_t directions = 0;
    bool passed(double tol = 1e-3) const { return jacobian_error <= tol && gradient_error <= tol; }
};

struct GradcheckOptions {
    double init_scale = 10.0;
    int threads = 1;
};

/**
 * @brief Gradient check at the initialization drawn from `seed`.
 *
 * The Jacobian is compared at every interior point of a small collocation
 * set, in every input direction the problem differentiates; the parameter
 * gradient of the weighted total loss over that set is compared with central
 * differences (step 1e-5 max(1, |theta|)).
 */
inline GradcheckReport gradcheck(const ProblemSpec &problem, const NetworkConfig &net, std::uint64_t seed, const GradcheckOptions &opt = {}) {
    const NetworkParams params = init_params(net, seed, opt.init_scale);
    CollocationSet set = problem.sample(2, seed);
    // Keep the check small: a few points of each kind.
    if (set.interior_points.size() > 6) set.interior_points.resize(6);
    if (set.boundary_points.size() > 2) set.boundary_points.resize(2);
    if (set.initial_points.size() > 3) set.initial_points.resize(3);

    GradcheckReport rep;
    rep.points = set.size();
    const Circuit circuit(net, params, true);
    const auto dirs = problem.derivative_directions();
    rep.directions = dirs.size();
    std::vector<double> exact_j, fd_j;
    for (const auto &pt : set.interior_points) {
        const auto inputs = problem.network_inputs(pt);
        const auto jac = input_jacobian(circuit, inputs);
        for (std::size_t d : dirs) {
            const double h = 1e-4;
            auto up = inputs, down = inputs;
            up[d] += h;
            down[d] -= h;
            const auto fu = forward(circuit, up).outputs, fdn = forward(circuit, down).outputs;
            for (std::size_t o = 0; o < fu.size(); ++o) {
                exact_j.push_back(jac.jacobian[o][d]);
                fd_j.push_back((fu[o] - fdn[o]) / (2.0 * h));
            }
        }
    }
    rep.jacobian_error = worst_relative_error(exact_j, fd_j);

    const LossWeights w = problem.default_weights();
    const auto exact = evaluate_loss(problem, circuit, set, w, true, nullptr, opt.threads).gradient;
    const auto fd = finite_difference_gradient(
        [&](const NetworkParams &q) { return evaluate_loss(problem, Circuit(net, q), set, w, false, nullptr, opt.threads).breakdown.total; },
        params);
    rep.gradient_error = worst_relative_error(exact, fd);
    return rep;
}

} // namespace cvqpinn
