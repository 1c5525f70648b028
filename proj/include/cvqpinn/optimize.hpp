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
 * @file optimize.hpp
 * @brief Adam, cosine warm restarts, initial-condition pretraining and the epoch loop.
 */

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cvqpinn/errors.hpp"
#include "cvqpinn/gradients.hpp"
#include "cvqpinn/pinn.hpp"
#include "cvqpinn/problems.hpp"
#include "cvqpinn/qnn.hpp"

namespace cvqpinn {

struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    long step_count = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    explicit AdamState(std::size_t n = 0) : first_moment(n, 0.0), second_moment(n, 0.0) {}

    void reset() {
        std::fill(first_moment.begin(), first_moment.end(), 0.0);
        std::fill(second_moment.begin(), second_moment.end(), 0.0);
        step_count = 0;
    }
};

/// One bias-corrected Adam update, in place.
inline void adam_step(AdamState &state, NetworkParams &params, const GradientVector &grad, double lr) {
    if (grad.size() != params.size() || state.first_moment.size() != params.size() || state.second_moment.size() != params.size()) {
        throw UsageError("adam_step dimension mismatch");
    }
    for (double g : grad) {
        if (!std::isfinite(g)) throw NumericalError("non-finite gradient passed to Adam");
    }
    ++state.step_count;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.first_moment[i] = state.beta1 * state.first_moment[i] + (1.0 - state.beta1) * grad[i];
        state.second_moment[i] = state.beta2 * state.second_moment[i] + (1.0 - state.beta2) * grad[i] * grad[i];
        const double m = state.first_moment[i] / c1;
        const double v = state.second_moment[i] / c2;
        params[i] -= lr * m / (std::sqrt(v) + state.epsilon);
    }
}

struct LrSchedule {
    enum class Kind { Constant, CosineWarmRestarts };
    Kind kind = Kind::Constant;
    long period = 100;
    double mult = 2.0;
    /// Absolute floor; negative means lr_max / 100.
    double lr_min = -1.0;

    bool operator==(const LrSchedule &) const = default;
};

/// Learning rate for `epoch` under SGDR-style cosine annealing with restarts.
inline double cosine_lr(long epoch, double lr_max, const LrSchedule &s) {
    if (epoch < 0) throw UsageError("epoch must be nonnegative");
    if (s.kind == LrSchedule::Kind::Constant) return lr_max;
    if (s.period < 1 || s.mult < 1.0) throw ConfigError("cosine schedule needs period >= 1 and mult >= 1");
    const double lr_min = s.lr_min < 0.0 ? lr_max / 100.0 : s.lr_min;
    double t = static_cast<double>(epoch);
    double period = static_cast<double>(s.period);
    while (t >= period) {
        t -= period;
        period *= s.mult;
    }
    return lr_min + 0.5 * (lr_max - lr_min) * (1.0 + std::cos(std::numbers::pi * t / period));
}

struct TrainingConfig {
    long epochs = 5000;
    double learning_rate = 0.1;
    LrSchedule schedule{};
    long pretrain_epochs = 0;
    int k_collocation = 8;
    LossWeights weights = LossWeights::poisson_preset();
    std::uint64_t seed = 0;
    /// Per-component gradient cap; <= 0 disables clipping.
    double clip = 10.0;
    /// Stop after this many epochs without a validation improvement; 0 disables.
    long early_stop_patience = 0;
    /// Validation cadence in epochs.
    long validate_every = 1;

    void validate() const {
        if (epochs < 0) throw ConfigError("epochs must be >= 0");
        if (pretrain_epochs < 0) throw ConfigError("pretrain_epochs must be >= 0");
        if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be positive");
        if (k_collocation < 1 || k_collocation > 20) throw ConfigError("k_collocation must be in 1..20");
        if (early_stop_patience < 0) throw ConfigError("early_stop_patience must be >= 0");
        if (validate_every < 1) throw ConfigError("validate_every must be >= 1");
        if (!std::isfinite(clip)) throw ConfigError("clip must be finite");
        weights.validate();
    }

    static TrainingConfig poisson_defaults() { return {}; }

    static TrainingConfig heat_defaults() {
        TrainingConfig c;
        c.epochs = 1000;
        c.learning_rate = 0.01;
        c.schedule = {LrSchedule::Kind::CosineWarmRestarts, 100, 2.0, -1.0};
        c.pretrain_epochs = 300;
        c.k_collocation = 4;
        c.weights = LossWeights::heat_preset();
        return c;
    }

    bool operator==(const TrainingConfig &) const = default;
};

struct EpochRecord {
    long epoch = 0;
    LossBreakdown loss;
    double lr = 0.0;
    /// NaN on epochs without validation.
    double validation_total = std::numeric_limits<double>::quiet_NaN();
    double seconds = 0.0;
    bool incident = false;
};

struct TrainingRecord {
    std::vector<EpochRecord> epochs;
    long best_epoch = -1;
    double best_validation = std::numeric_limits<double>::infinity();
    NetworkParams best_params;
    NetworkParams final_params;
    std::vector<std::string> incidents;
};

/// Scramble seed for one epoch's collocation draw.
inline std::uint64_t epoch_seed(std::uint64_t seed, long epoch) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(epoch + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct TrainingHooks {
    DerivativeCounters *counters = nullptr;
    int threads = 1;
    std::function<void(const EpochRecord &)> on_epoch;
};

/**
 * @brief Fits the first output to the initial condition only (no input
 * derivatives) on 2^8 + 2 fixed points along t = 0.
 */
inline NetworkParams pretrain_ic(const Heat1D &problem, const NetworkConfig &net, NetworkParams params, const TrainingConfig &cfg,
                                 const TrainingHooks &hooks = {}, int k = 8) {
    cfg.validate();
    const CollocationSet set = problem.initial_set(k);
    LossWeights w{};
    w.ic = 1.0;
    AdamState adam(params.size());
    for (long e = 0; e < cfg.pretrain_epochs; ++e) {
        const Circuit circuit(net, params, true);
        LossEvaluation ev = evaluate_loss(problem, circuit, set, w, true, hooks.counters, hooks.threads);
        clip_gradient(ev.gradient, cfg.clip);
        adam_step(adam, params, ev.gradient, cfg.learning_rate);
    }
    return params;
}

/**
 * @brief The training loop. Collocation points are redrawn every epoch; the
 * best parameters are chosen on the problem's fixed validation set. A
 * non-finite loss or gradient restores the best parameters and resets Adam.
 */
inline TrainingRecord train(const ProblemSpec &problem, const NetworkConfig &net, NetworkParams params, const TrainingConfig &cfg,
                            const TrainingHooks &hooks = {}) {
    cfg.validate();
    net.validate();
    if (params.size() != net.param_count()) throw ConfigError("parameter count does not match the network");
    TrainingRecord rec;
    AdamState adam(params.size());
    const CollocationSet validation = problem.validation_set();
    rec.best_params = params;
    long since_best = 0;
    for (long epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        EpochRecord er;
        er.epoch = epoch;
        er.lr = cosine_lr(epoch, cfg.learning_rate, cfg.schedule);
        const CollocationSet set = problem.sample(cfg.k_collocation, epoch_seed(cfg.seed, epoch));
        try {
            const Circuit circuit(net, params, true);
            LossEvaluation ev = evaluate_loss(problem, circuit, set, cfg.weights, true, hooks.counters, hooks.threads);
            er.loss = ev.breakdown;
            if (epoch % cfg.validate_every == 0 || epoch + 1 == cfg.epochs) {
                er.validation_total = evaluate_loss(problem, circuit, validation, cfg.weights, false, hooks.counters, hooks.threads).breakdown.total;
                if (er.validation_total < rec.best_validation) {
                    rec.best_validation = er.validation_total;
                    rec.best_epoch = epoch;
                    rec.best_params = params;
                    since_best = 0;
                }
            }
            clip_gradient(ev.gradient, cfg.clip);
            adam_step(adam, params, ev.gradient, er.lr);
        } catch (const NumericalError &e) {
            er.incident = true;
            er.loss.total = std::numeric_limits<double>::quiet_NaN();
            rec.incidents.push_back("epoch " + std::to_string(epoch) + ": " + e.what());
            params = rec.best_params;
            adam.reset();
        }
        ++since_best;
        er.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rec.epochs.push_back(er);
        if (hooks.on_epoch) hooks.on_epoch(er);
        if (cfg.early_stop_patience > 0 && since_best > cfg.early_stop_patience) break;
    }
    rec.final_params = params;
    return rec;
}

} // namespace cvqpinn
