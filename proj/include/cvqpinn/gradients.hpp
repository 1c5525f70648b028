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
 * @file gradients.hpp
 * @brief First-order input Jacobians and trainable-parameter gradients.
 *
 * Input derivatives come from forward-mode dual numbers seeded through the
 * displacement encoding. Nothing in this header differentiates a derivative:
 * a residual may read network outputs and entries of one first-order
 * Jacobian, and that is all it can express.
 *
 * Parameter gradients come either from central finite differences or from a
 * reverse (adjoint) sweep through the stored gate sequence; both obey the
 * same contract and are cross-checked in the tests.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cvqpinn/fock.hpp"
#include "cvqpinn/qnn.hpp"

namespace cvqpinn {

using GradientVector = std::vector<double>;

/// Instrumentation for derivative requests. Owned by the caller; never global.
struct DerivativeCounters {
    std::atomic<std::uint64_t> forward_evaluations{0};
    std::atomic<std::uint64_t> jacobian_evaluations{0};
    std::atomic<std::uint64_t> nested_evaluations{0};
};

struct JacobianResult {
    std::vector<double> outputs;
    /// jacobian[i][j] = d output_i / d input_j
    std::vector<std::vector<double>> jacobian;
    double norm_sq = 0.0;
};

namespace detail {

template <std::size_t N> JacobianResult jacobian_from_duals(const DualForwardResult<N> &r) {
    JacobianResult out;
    out.norm_sq = r.norm_sq.value.real();
    for (const auto &o : r.outputs) {
        out.outputs.push_back(o.value.real());
        std::vector<double> row(N);
        for (std::size_t j = 0; j < N; ++j) row[j] = o.tangents[j].real();
        out.jacobian.push_back(std::move(row));
    }
    return out;
}

} // namespace detail

/// Outputs and d(output)/d(input) by seeding one dual tangent per input.
inline JacobianResult input_jacobian(const Circuit &circuit, const std::vector<double> &inputs,
                                     DerivativeCounters *counters = nullptr) {
    if (counters) counters->jacobian_evaluations.fetch_add(1, std::memory_order_relaxed);
    JacobianResult res;
    switch (inputs.size()) {
    case 1: {
        const std::vector<Dual<1>> x{Dual<1>::variable(inputs[0], 0)};
        res = detail::jacobian_from_duals(forward_dual(circuit, x));
        break;
    }
    case 2: {
        const std::vector<Dual<2>> x{Dual<2>::variable(inputs[0], 0), Dual<2>::variable(inputs[1], 1)};
        res = detail::jacobian_from_duals(forward_dual(circuit, x));
        break;
    }
    default: throw UsageError("input_jacobian supports one or two inputs");
    }
    for (const auto &row : res.jacobian) {
        for (double v : row) {
            if (!std::isfinite(v)) throw NumericalError("non-finite input derivative");
        }
    }
    return res;
}

inline JacobianResult input_jacobian(const NetworkConfig &config, const NetworkParams &params, const std::vector<double> &inputs,
                                     DerivativeCounters *counters = nullptr) {
    return input_jacobian(Circuit(config, params), inputs, counters);
}

/// Step used for parameter k: h = rel_step * max(1, |theta_k|).
inline double fd_step(double theta, double rel_step) { return rel_step * std::max(1.0, std::abs(theta)); }

/// Central finite-difference gradient of a scalar loss (2P evaluations).
inline GradientVector finite_difference_gradient(const std::function<double(const NetworkParams &)> &loss,
                                                 const NetworkParams &params, double rel_step = 1e-5) {
    GradientVector g(params.size());
    NetworkParams probe = params;
    for (std::size_t k = 0; k < params.size(); ++k) {
        const double h = fd_step(params[k], rel_step);
        probe[k] = params[k] + h;
        const double up = loss(probe);
        probe[k] = params[k] - h;
        const double down = loss(probe);
        probe[k] = params[k];
        if (!std::isfinite(up) || !std::isfinite(down)) throw NumericalError("non-finite loss while differencing parameter " + std::to_string(k));
        g[k] = (up - down) / (2.0 * h);
    }
    return g;
}

/// Clamp every component to [-cap, cap]; a nonpositive cap disables clipping.
inline void clip_gradient(GradientVector &g, double cap) {
    if (!(cap > 0.0)) return;
    for (auto &v : g) v = std::clamp(v, -cap, cap);
}

// ---------------------------------------------------------------------------
// Adjoint engine

/**
 * @brief Network quantities at one point, restricted to first order.
 *
 * `du[j][k]` is the derivative of output j along active input direction k.
 */
struct PointOutputs {
    std::vector<double> u;
    std::vector<std::vector<double>> du;
    double norm_sq = 0.0;
};

/// dLoss / d(quantity) for every entry of PointOutputs.
struct PointSensitivity {
    std::vector<double> d_u;
    std::vector<std::vector<double>> d_du;
    double d_norm = 0.0;
};

namespace detail {

/// (a + a^dagger) v on `mode`.
inline FockState<Complex> apply_quadrature(const FockState<Complex> &v, int mode) {
    FockState<Complex> out(v.num_modes(), v.cutoff());
    const auto c = static_cast<std::size_t>(v.cutoff());
    const std::size_t st = v.stride(mode);
    for (std::size_t idx = 0; idx < v.size(); ++idx) {
        const std::size_t n = (idx / st) % c;
        Complex acc{};
        if (n >= 1) acc += std::sqrt(static_cast<double>(n)) * v[idx - st];
        if (n + 1 < c) acc += std::sqrt(static_cast<double>(n + 1)) * v[idx + st];
        out[idx] = acc;
    }
    return out;
}

inline double re_inner(const FockState<Complex> &a, const FockState<Complex> &b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return acc;
}

inline void axpy(double alpha, const FockState<Complex> &x, FockState<Complex> &y) {
    if (alpha == 0.0) return;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

} // namespace detail

/**
 * @brief Evaluates the network at one point and, optionally, back-propagates
 * a loss sensitivity into the trainable parameters.
 *
 * The encoded state and its input tangents (one per active direction) are
 * pushed through the prepared gates as independent complex vectors; the
 * gates do not depend on the inputs, so tangents propagate linearly. The
 * state entering every gate is kept for the reverse sweep.
 */
class PointEvaluator {
  public:
    explicit PointEvaluator(const Circuit &circuit) : circuit_(circuit) {}

    /// `directions` lists the input indices to differentiate (at most two).
    template <typename Sensitivity>
    PointOutputs evaluate(const std::vector<double> &inputs, const std::vector<std::size_t> &directions, Sensitivity &&sensitivity,
                          GradientVector *grad, DerivativeCounters *counters = nullptr) const {
        const auto &cfg = circuit_.config();
        if (directions.size() > 2) throw UsageError("at most two input directions are supported");
        if (counters) {
            counters->forward_evaluations.fetch_add(1, std::memory_order_relaxed);
            if (!directions.empty()) counters->jacobian_evaluations.fetch_add(1, std::memory_order_relaxed);
        }
        const std::size_t ns = directions.size() + 1;

        std::vector<Dual<2>> seeded;
        for (double x : inputs) seeded.emplace_back(x);
        for (std::size_t k = 0; k < directions.size(); ++k) {
            if (directions[k] >= inputs.size()) throw UsageError("derivative direction out of range");
            seeded[directions[k]].tangents[k] = 1.0;
        }
        const FockState<Dual<2>> encoded = encode_inputs(seeded, cfg);

        std::vector<FockState<Complex>> states;
        for (std::size_t s = 0; s < ns; ++s) {
            FockState<Complex> st(cfg.num_modes, cfg.cutoff);
            for (std::size_t i = 0; i < st.size(); ++i) st[i] = s == 0 ? encoded[i].value : encoded[i].tangents[s - 1];
            states.push_back(std::move(st));
        }

        const auto &gates = circuit_.gates();
        const bool keep = grad != nullptr;
        std::vector<std::vector<FockState<Complex>>> tape;
        if (keep) tape.reserve(gates.size());
        for (const auto &g : gates) {
            if (keep) tape.push_back(states);
            for (auto &st : states) st = apply_gate(g.matrix, st, g.op.modes);
        }

        const FockState<Complex> &psi = states[0];
        const std::size_t nout = cfg.output_modes.size();
        const std::size_t nd = directions.size();
        const double n = norm_squared(psi);
        if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("zero or non-finite state norm");

        std::vector<FockState<Complex>> x_psi;
        std::vector<double> a(nout);
        std::vector<std::vector<double>> b(nout, std::vector<double>(nd));
        std::vector<double> c(nd);
        for (std::size_t k = 0; k < nd; ++k) c[k] = detail::re_inner(psi, states[k + 1]);
        for (std::size_t j = 0; j < nout; ++j) {
            x_psi.push_back(detail::apply_quadrature(psi, cfg.output_modes[j]));
            a[j] = detail::re_inner(psi, x_psi[j]);
            for (std::size_t k = 0; k < nd; ++k) b[j][k] = detail::re_inner(x_psi[j], states[k + 1]);
        }

        PointOutputs out;
        out.norm_sq = n;
        out.u.resize(nout);
        out.du.assign(nout, std::vector<double>(nd));
        for (std::size_t j = 0; j < nout; ++j) {
            out.u[j] = a[j] / n;
            for (std::size_t k = 0; k < nd; ++k) out.du[j][k] = 2.0 * b[j][k] / n - 2.0 * a[j] * c[k] / (n * n);
        }
        for (std::size_t j = 0; j < nout; ++j) {
            if (!std::isfinite(out.u[j])) throw NumericalError("non-finite network output");
        }
        if (!keep) return out;

        const PointSensitivity sens = sensitivity(out);

        // Chain rule onto the bilinear forms A_j = <psi|X_j|psi>, B_jk = Re<psi|X_j|psi'_k>,
        // C_k = Re<psi|psi'_k> and n = <psi|psi>.
        std::vector<double> g_a(nout, 0.0);
        std::vector<std::vector<double>> g_b(nout, std::vector<double>(nd, 0.0));
        std::vector<double> g_c(nd, 0.0);
        double g_n = sens.d_norm;
        for (std::size_t j = 0; j < nout; ++j) {
            const double gu = sens.d_u.empty() ? 0.0 : sens.d_u[j];
            g_a[j] += gu / n;
            g_n -= gu * a[j] / (n * n);
            for (std::size_t k = 0; k < nd; ++k) {
                const double gd = sens.d_du.empty() ? 0.0 : sens.d_du[j][k];
                if (gd == 0.0) continue;
                g_b[j][k] += 2.0 * gd / n;
                g_a[j] -= 2.0 * gd * c[k] / (n * n);
                g_c[k] -= 2.0 * gd * a[j] / (n * n);
                g_n += gd * (-2.0 * b[j][k] / (n * n) + 4.0 * a[j] * c[k] / (n * n * n));
            }
        }

        // Adjoint vectors: dL = Re <adj_s | d state_s>.
        std::vector<FockState<Complex>> adj;
        for (std::size_t s = 0; s < ns; ++s) adj.emplace_back(cfg.num_modes, cfg.cutoff);
        detail::axpy(2.0 * g_n, psi, adj[0]);
        for (std::size_t j = 0; j < nout; ++j) {
            detail::axpy(2.0 * g_a[j], x_psi[j], adj[0]);
            for (std::size_t k = 0; k < nd; ++k) {
                if (g_b[j][k] == 0.0) continue;
                detail::axpy(g_b[j][k], detail::apply_quadrature(states[k + 1], cfg.output_modes[j]), adj[0]);
                detail::axpy(g_b[j][k], x_psi[j], adj[k + 1]);
            }
        }
        for (std::size_t k = 0; k < nd; ++k) {
            detail::axpy(g_c[k], states[k + 1], adj[0]);
            detail::axpy(g_c[k], psi, adj[k + 1]);
        }

        for (std::size_t gi = gates.size(); gi-- > 0;) {
            const auto &g = gates[gi];
            for (std::size_t p = 0; p < g.derivatives.size(); ++p) {
                double acc = 0.0;
                for (std::size_t s = 0; s < ns; ++s) {
                    acc += detail::re_inner(adj[s], apply_gate(g.derivatives[p], tape[gi][s], g.op.modes));
                }
                (*grad)[g.op.params[p]] += acc;
            }
            if (gi == 0) break;
            for (auto &v : adj) v = apply_gate_adjoint(g.matrix, v, g.op.modes);
        }
        return out;
    }

    PointOutputs evaluate(const std::vector<double> &inputs, const std::vector<std::size_t> &directions,
                          DerivativeCounters *counters = nullptr) const {
        return evaluate(inputs, directions, [](const PointOutputs &) { return PointSensitivity{}; }, nullptr, counters);
    }

  private:
    const Circuit &circuit_;
};

} // namespace cvqpinn
