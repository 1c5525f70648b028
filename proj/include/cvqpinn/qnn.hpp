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
 * @file qnn.hpp
 * @brief Layered continuous-variable neural network: displacement encoding,
 * two-mode and single-mode layers, and homodyne readout.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvqpinn/fock.hpp"

namespace cvqpinn {

using NetworkParams = std::vector<double>;

struct NetworkConfig {
    int num_modes = 2;
    int cutoff = 20;
    int multi_layers = 2;
    int single_layers = 2;
    std::vector<int> output_modes{0, 1};

    std::size_t param_count() const {
        return 12 * static_cast<std::size_t>(multi_layers) +
               5 * static_cast<std::size_t>(single_layers) * static_cast<std::size_t>(num_modes);
    }

    void validate() const {
        if (num_modes < 1 || num_modes > 2) throw ConfigError("num_modes must be 1 or 2");
        detail::check_cutoff(cutoff);
        if (multi_layers < 0 || single_layers < 0) throw ConfigError("layer counts must be nonnegative");
        if (multi_layers + single_layers < 1) throw ConfigError("network needs at least one layer");
        if (multi_layers > 0 && num_modes != 2) throw ConfigError("two-mode layers need num_modes = 2");
        if (output_modes.empty()) throw ConfigError("at least one output mode is required");
        for (int m : output_modes) {
            if (m < 0 || m >= num_modes) throw ConfigError("output mode " + std::to_string(m) + " out of range");
        }
    }

    bool operator==(const NetworkConfig &) const = default;
};

/// Twelve parameters of one two-mode layer, in flat-vector order.
struct TwoModeLayerParams {
    static constexpr std::size_t size = 12;

    double u1_bs_theta = 0.0;
    double u1_bs_phi = 0.0;
    double u1_r_phi = 0.0;
    std::array<double, 2> squeeze_r{};
    double u2_bs_theta = 0.0;
    double u2_bs_phi = 0.0;
    double u2_r_phi = 0.0;
    std::array<double, 2> displacement{};
    std::array<double, 2> kerr_kappa{};

    static TwoModeLayerParams from_flat(std::span<const double> p) {
        if (p.size() != size) throw UsageError("two-mode layer takes exactly 12 parameters");
        return {p[0], p[1], p[2], {p[3], p[4]}, p[5], p[6], p[7], {p[8], p[9]}, {p[10], p[11]}};
    }

    std::array<double, size> flat() const {
        return {u1_bs_theta, u1_bs_phi, u1_r_phi, squeeze_r[0], squeeze_r[1], u2_bs_theta,
                u2_bs_phi,   u2_r_phi,  displacement[0], displacement[1], kerr_kappa[0], kerr_kappa[1]};
    }
};

/// Five parameters of one single-mode layer, in flat-vector order.
struct SingleModeLayerParams {
    static constexpr std::size_t size = 5;

    double r1_phi = 0.0;
    double squeeze_r = 0.0;
    double r2_phi = 0.0;
    double displacement = 0.0;
    double kerr_kappa = 0.0;

    static SingleModeLayerParams from_flat(std::span<const double> p) {
        if (p.size() != size) throw UsageError("single-mode layer takes exactly 5 parameters");
        return {p[0], p[1], p[2], p[3], p[4]};
    }

    std::array<double, size> flat() const { return {r1_phi, squeeze_r, r2_phi, displacement, kerr_kappa}; }
};

/// One gate of the circuit with the flat indices of its trainable parameters.
struct GateOp {
    GateKind kind;
    std::vector<int> modes;
    std::vector<std::size_t> params; // BS: theta, phi; S: r (phi = 0); D: real alpha; R: phi; K: kappa
};

/// Gate chain of one two-mode layer whose parameters start at `offset`.
inline std::vector<GateOp> two_mode_layer_ops(std::size_t offset) {
    const std::size_t o = offset;
    return {
        {GateKind::Beamsplitter, {0, 1}, {o + 0, o + 1}},
        {GateKind::Rotation, {0}, {o + 2}},
        {GateKind::Squeezing, {0}, {o + 3}},
        {GateKind::Squeezing, {1}, {o + 4}},
        {GateKind::Beamsplitter, {0, 1}, {o + 5, o + 6}},
        {GateKind::Rotation, {0}, {o + 7}},
        {GateKind::Displacement, {0}, {o + 8}},
        {GateKind::Displacement, {1}, {o + 9}},
        {GateKind::Kerr, {0}, {o + 10}},
        {GateKind::Kerr, {1}, {o + 11}},
    };
}

/// Gate chain of one single-mode layer on `mode` whose parameters start at `offset`.
inline std::vector<GateOp> single_mode_layer_ops(std::size_t offset, int mode) {
    const std::size_t o = offset;
    return {
        {GateKind::Rotation, {mode}, {o + 0}},
        {GateKind::Squeezing, {mode}, {o + 1}},
        {GateKind::Rotation, {mode}, {o + 2}},
        {GateKind::Displacement, {mode}, {o + 3}},
        {GateKind::Kerr, {mode}, {o + 4}},
    };
}

/// Full gate sequence: every two-mode layer, then each single-mode layer on every mode.
inline std::vector<GateOp> network_ops(const NetworkConfig &config) {
    std::vector<GateOp> ops;
    std::size_t offset = 0;
    for (int l = 0; l < config.multi_layers; ++l) {
        for (auto &op : two_mode_layer_ops(offset)) ops.push_back(std::move(op));
        offset += TwoModeLayerParams::size;
    }
    for (int l = 0; l < config.single_layers; ++l) {
        for (int m = 0; m < config.num_modes; ++m) {
            for (auto &op : single_mode_layer_ops(offset, m)) ops.push_back(std::move(op));
            offset += SingleModeLayerParams::size;
        }
    }
    return ops;
}

/// Matrix of `op` with its parameters read from `params` (any scalar type usable by the builders).
template <typename P> GateMatrix<entry_t<P>> build_gate(const GateOp &op, const std::vector<P> &params, int cutoff) {
    const auto at = [&](std::size_t k) { return params[op.params[k]]; };
    switch (op.kind) {
    case GateKind::Beamsplitter: return beamsplitter_matrix(at(0), at(1), cutoff);
    case GateKind::Rotation: return rotation_matrix(at(0), cutoff);
    case GateKind::Squeezing: return squeezing_matrix(at(0), P(0.0), cutoff);
    case GateKind::Displacement: return displacement_matrix(at(0), cutoff);
    case GateKind::Kerr: return kerr_matrix(at(0), cutoff);
    case GateKind::Generic: break;
    }
    throw UsageError("generic gates carry no parameters");
}

/**
 * @brief Gates of a network evaluated at one parameter vector.
 *
 * Built once per parameter set and shared read-only across collocation
 * points. With derivatives enabled every gate also carries dG/dp for each of
 * its parameters, in the order of GateOp::params.
 */
struct PreparedGate {
    GateOp op;
    GateMatrix<Complex> matrix;
    std::vector<GateMatrix<Complex>> derivatives;
};

class Circuit {
  public:
    Circuit(NetworkConfig config, const NetworkParams &params, bool with_derivatives = false)
        : config_(std::move(config)) {
        config_.validate();
        if (params.size() != config_.param_count()) {
            throw UsageError("parameter vector has length " + std::to_string(params.size()) + ", network expects " +
                             std::to_string(config_.param_count()));
        }
        for (const auto &p : params) {
            if (!std::isfinite(p)) throw NumericalError("non-finite network parameter");
        }
        for (auto &op : network_ops(config_)) gates_.push_back(prepare(std::move(op), params, with_derivatives));
    }

    const NetworkConfig &config() const { return config_; }
    const std::vector<PreparedGate> &gates() const { return gates_; }

    template <typename S> FockState<S> run(FockState<S> state) const {
        for (const auto &g : gates_) state = apply_gate(g.matrix, state, g.op.modes);
        return state;
    }

  private:
    PreparedGate prepare(GateOp op, const NetworkParams &params, bool with_derivatives) const {
        const int c = config_.cutoff;
        if (!with_derivatives) {
            auto m = build_gate(op, params, c);
            return {std::move(op), std::move(m), {}};
        }
        if (op.params.size() == 1) {
            std::vector<Dual<1>> seeded(params.begin(), params.end());
            seeded[op.params[0]] = Dual<1>::variable(params[op.params[0]], 0);
            const auto g = build_gate(op, seeded, c);
            return {std::move(op), value_gate(g), {tangent_gate(g, 0)}};
        }
        std::vector<Dual<2>> seeded(params.begin(), params.end());
        seeded[op.params[0]] = Dual<2>::variable(params[op.params[0]], 0);
        seeded[op.params[1]] = Dual<2>::variable(params[op.params[1]], 1);
        const auto g = build_gate(op, seeded, c);
        return {std::move(op), value_gate(g), {tangent_gate(g, 0), tangent_gate(g, 1)}};
    }

    NetworkConfig config_;
    std::vector<PreparedGate> gates_;
};

// ---------------------------------------------------------------------------
// Encoding and layers

/// D(input_i) on mode i of the vacuum. Dual inputs give a state carrying input derivatives.
template <typename P> FockState<entry_t<P>> encode_inputs(const std::vector<P> &inputs, const NetworkConfig &config) {
    using S = entry_t<P>;
    if (static_cast<int>(inputs.size()) != config.num_modes) {
        throw UsageError("expected " + std::to_string(config.num_modes) + " inputs, got " + std::to_string(inputs.size()));
    }
    FockState<S> state(config.num_modes, config.cutoff);
    state[0] = S(1.0);
    for (int m = 0; m < config.num_modes; ++m) {
        state = apply_gate(displacement_matrix(inputs[static_cast<std::size_t>(m)], config.cutoff), state, m);
    }
    return state;
}

inline FockState<Complex> apply_two_mode_layer(const TwoModeLayerParams &params, const FockState<Complex> &state) {
    if (state.num_modes() != 2) throw UsageError("two-mode layer needs a two-mode state");
    const auto flat = params.flat();
    const NetworkParams p(flat.begin(), flat.end());
    FockState<Complex> out = state;
    for (const auto &op : two_mode_layer_ops(0)) out = apply_gate(build_gate(op, p, state.cutoff()), out, op.modes);
    return out;
}

inline FockState<Complex> apply_single_mode_layer(const SingleModeLayerParams &params, const FockState<Complex> &state, int mode) {
    if (mode < 0 || mode >= state.num_modes()) throw UsageError("mode index " + std::to_string(mode) + " out of range");
    const auto flat = params.flat();
    const NetworkParams p(flat.begin(), flat.end());
    FockState<Complex> out = state;
    for (const auto &op : single_mode_layer_ops(0, mode)) out = apply_gate(build_gate(op, p, state.cutoff()), out, op.modes);
    return out;
}

// ---------------------------------------------------------------------------
// Forward pass

struct ForwardResult {
    std::vector<double> outputs;
    double norm_sq = 0.0;
};

inline ForwardResult forward(const Circuit &circuit, const std::vector<double> &inputs) {
    const auto &cfg = circuit.config();
    const FockState<Complex> out = circuit.run(encode_inputs(inputs, cfg));
    ForwardResult r;
    r.norm_sq = norm_squared(out);
    for (int m : cfg.output_modes) r.outputs.push_back(expectation_x(out, m));
    return r;
}

inline ForwardResult forward(const NetworkConfig &config, const NetworkParams &params, const std::vector<double> &inputs) {
    return forward(Circuit(config, params), inputs);
}

template <std::size_t N> struct DualForwardResult {
    std::vector<Dual<N>> outputs;
    Dual<N> norm_sq;
};

/// Forward pass on dual inputs; the tangents of every output are its input derivatives.
template <std::size_t N> DualForwardResult<N> forward_dual(const Circuit &circuit, const std::vector<Dual<N>> &inputs) {
    const auto &cfg = circuit.config();
    const FockState<Dual<N>> out = circuit.run(encode_inputs(inputs, cfg));
    DualForwardResult<N> r;
    r.norm_sq = norm_squared(out);
    for (int m : cfg.output_modes) r.outputs.push_back(expectation_x(out, m));
    return r;
}

// ---------------------------------------------------------------------------
// Initialization and checkpoints

/**
 * @brief Near-identity initialization.
 *
 * Interferometer angles and Kerr strengths are uniform in [-0.05, 0.05],
 * squeezing and displacement normal with standard deviation 0.01, all
 * multiplied by `scale`. Deterministic in `seed`.
 */
inline NetworkParams init_params(const NetworkConfig &config, std::uint64_t seed, double scale = 1.0) {
    config.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(-0.05, 0.05);
    std::normal_distribution<double> small(0.0, 0.01);
    NetworkParams p(config.param_count());
    for (const auto &op : network_ops(config)) {
        for (std::size_t idx : op.params) {
            const bool gaussian_amp = op.kind == GateKind::Squeezing || op.kind == GateKind::Displacement;
            p[idx] = scale * (gaussian_amp ? small(rng) : angle(rng));
        }
    }
    return p;
}

inline constexpr int checkpoint_version = 1;

/// Versioned JSON checkpoint; parameters printed with 17 significant digits.
inline std::string serialize_checkpoint(const NetworkConfig &config, const NetworkParams &params) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "{\n  \"version\": " << checkpoint_version << ",\n  \"config\": {\n"
       << "    \"num_modes\": " << config.num_modes << ",\n"
       << "    \"cutoff\": " << config.cutoff << ",\n"
       << "    \"multi_layers\": " << config.multi_layers << ",\n"
       << "    \"single_layers\": " << config.single_layers << ",\n"
       << "    \"output_modes\": [";
    for (std::size_t i = 0; i < config.output_modes.size(); ++i) os << (i ? ", " : "") << config.output_modes[i];
    os << "]\n  },\n  \"params\": [";
    for (std::size_t i = 0; i < params.size(); ++i) os << (i ? ",\n    " : "\n    ") << params[i];
    os << "\n  ]\n}\n";
    return os.str();
}

struct Checkpoint {
    NetworkConfig config;
    NetworkParams params;
};

inline Checkpoint parse_checkpoint(const std::string &text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed checkpoint: ") + e.what());
    }
    try {
        if (doc.at("version").get<int>() != checkpoint_version) throw ConfigError("unsupported checkpoint version");
        Checkpoint ck;
        const auto &c = doc.at("config");
        ck.config.num_modes = c.at("num_modes").get<int>();
        ck.config.cutoff = c.at("cutoff").get<int>();
        ck.config.multi_layers = c.at("multi_layers").get<int>();
        ck.config.single_layers = c.at("single_layers").get<int>();
        ck.config.output_modes = c.at("output_modes").get<std::vector<int>>();
        ck.params = doc.at("params").get<NetworkParams>();
        ck.config.validate();
        if (ck.params.size() != ck.config.param_count()) throw ConfigError("checkpoint parameter count does not match its config");
        return ck;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed checkpoint: ") + e.what());
    }
}

} // namespace cvqpinn
