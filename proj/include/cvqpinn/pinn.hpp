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
 * @file pinn.hpp
 * @brief Loss components, collocation sampling and loss assembly.
 *
 * Every residual is an affine function of network outputs and entries of a
 * single first-order input Jacobian (LinearResidual). Second derivatives are
 * never formed: a second-order term such as u'' is read as the input
 * derivative of the second network output, which the consistency loss ties
 * to du/dx.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvqpinn/gradients.hpp"
#include "cvqpinn/parallel.hpp"
#include "cvqpinn/sobol.hpp"

namespace cvqpinn {

/// Percent-style weights of the loss components.
struct LossWeights {
    double pde = 0.0;
    double bc = 0.0;
    double ic = 0.0;
    double trace = 0.0;
    double consistency = 0.0;
    double extra = 0.0;

    void validate() const {
        for (double w : {pde, bc, ic, trace, consistency, extra}) {
            if (!std::isfinite(w) || w < 0.0) throw ConfigError("loss weights must be finite and nonnegative");
        }
    }

    double sum() const { return pde + bc + ic + trace + consistency + extra; }

    static LossWeights poisson_preset() { return {.pde = 25, .bc = 25, .ic = 0, .trace = 25, .consistency = 25, .extra = 0}; }
    static LossWeights heat_preset() { return {.pde = 10, .bc = 10, .ic = 60, .trace = 10, .consistency = 10, .extra = 0}; }

    bool operator==(const LossWeights &) const = default;
};

struct LossBreakdown {
    double pde = 0.0;
    double bc = 0.0;
    double ic = 0.0;
    double trace = 0.0;
    double consistency = 0.0;
    double extra = 0.0;
    double total = 0.0;
};

// ---------------------------------------------------------------------------
// Pointwise loss components

inline double loss_pde_poisson(double du_x_dx, double x) {
    const double r = du_x_dx + std::sin(4.0 * x);
    return r * r;
}

inline double loss_pde_heat(double dT_dt, double dTx_dx, double alpha_d) {
    const double r = dT_dt - alpha_d * dTx_dx;
    return r * r;
}

/// Sum of squared boundary mismatches over (predicted, target) pairs.
inline double loss_bc(const std::vector<std::pair<double, double>> &values_at_boundary) {
    double acc = 0.0;
    for (const auto &[pred, target] : values_at_boundary) acc += (pred - target) * (pred - target);
    return acc;
}

inline constexpr double heat_sigma = 0.2;
inline constexpr double heat_diffusivity = 0.30;

/// exp(-(x + pi/8)^2 / (2 sigma)), sigma = 0.2.
inline double heat_initial_condition(double x) {
    const double s = x + std::numbers::pi / 8.0;
    return std::exp(-s * s / (2.0 * heat_sigma));
}

inline double loss_ic(double predicted, double x) {
    const double r = predicted - heat_initial_condition(x);
    return r * r;
}

inline double loss_consistency(double du_dx, double u_x) { return (du_dx - u_x) * (du_dx - u_x); }

inline double loss_trace(double norm_sq) {
    if (norm_sq < 0.0) throw UsageError("squared norm cannot be negative");
    return (norm_sq - 1.0) * (norm_sq - 1.0);
}

/// Weighted sum of already-averaged components.
inline LossBreakdown total_loss(LossBreakdown components, const LossWeights &w) {
    w.validate();
    components.total = w.pde * components.pde + w.bc * components.bc + w.ic * components.ic + w.trace * components.trace +
                       w.consistency * components.consistency + w.extra * components.extra;
    return components;
}

// ---------------------------------------------------------------------------
// Residual structure

/// One term of an affine residual: an output value or a first-order input derivative.
struct ResidualTerm {
    enum class Kind { Output, Derivative };
    Kind kind;
    std::size_t output;
    std::size_t direction; // index into the active derivative directions
    double coeff;
};

struct LinearResidual {
    double constant = 0.0;
    std::vector<ResidualTerm> terms;

    double evaluate(const PointOutputs &o) const {
        double r = constant;
        for (const auto &t : terms) r += t.coeff * (t.kind == ResidualTerm::Kind::Output ? o.u.at(t.output) : o.du.at(t.output).at(t.direction));
        return r;
    }

    /// Accumulate d(scale * r^2)/d(quantity), given r.
    void add_sensitivity(double scale, double r, PointSensitivity &s) const {
        for (const auto &t : terms) {
            const double g = 2.0 * scale * r * t.coeff;
            if (t.kind == ResidualTerm::Kind::Output) s.d_u.at(t.output) += g;
            else s.d_du.at(t.output).at(t.direction) += g;
        }
    }
};

inline ResidualTerm output_term(std::size_t output, double coeff = 1.0) { return {ResidualTerm::Kind::Output, output, 0, coeff}; }
inline ResidualTerm derivative_term(std::size_t output, std::size_t direction, double coeff = 1.0) {
    return {ResidualTerm::Kind::Derivative, output, direction, coeff};
}

/// How a problem maps collocation points onto network inputs and residuals.
class ResidualModel {
  public:
    virtual ~ResidualModel() = default;
    virtual std::vector<double> network_inputs(const std::vector<double> &point) const = 0;
    /// Network input indices differentiated at interior points.
    virtual std::vector<std::size_t> derivative_directions() const = 0;
    virtual LinearResidual pde_residual(const std::vector<double> &point) const = 0;
    virtual LinearResidual consistency_residual(const std::vector<double> &point) const = 0;
};

// ---------------------------------------------------------------------------
// Collocation

struct TargetPoint {
    std::vector<double> point;
    double target = 0.0;
};

struct CollocationSet {
    std::vector<std::vector<double>> interior_points;
    std::vector<TargetPoint> boundary_points;
    std::vector<TargetPoint> initial_points;

    std::size_t size() const { return interior_points.size() + boundary_points.size() + initial_points.size(); }
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/**
 * @brief 2^k Sobol interior points scaled to `domain`.
 *
 * The all-zeros first element is skipped. For a one-dimensional domain the
 * two endpoints are added as boundary points with target 0, giving 2^k + 2
 * points; for higher dimensions the caller supplies boundary sets.
 */
inline CollocationSet sobol_points(int k, const std::vector<Interval> &domain, std::optional<std::uint64_t> scramble_seed = std::nullopt) {
    if (k < 1) throw ConfigError("collocation exponent k must be >= 1");
    if (k > 20) throw ConfigError("collocation exponent k exceeds the memory budget (k <= 20)");
    if (domain.empty()) throw ConfigError("collocation domain is empty");
    for (const auto &iv : domain) {
        if (!(iv.hi > iv.lo)) throw ConfigError("collocation interval must have hi > lo");
    }
    SobolSequence seq(domain.size(), scramble_seed);
    seq.next();
    CollocationSet set;
    const std::size_t n = std::size_t{1} << k;
    set.interior_points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = seq.next();
        for (std::size_t d = 0; d < domain.size(); ++d) p[d] = domain[d].lo + (domain[d].hi - domain[d].lo) * p[d];
        set.interior_points.push_back(std::move(p));
    }
    if (domain.size() == 1) {
        set.boundary_points.push_back({{domain[0].lo}, 0.0});
        set.boundary_points.push_back({{domain[0].hi}, 0.0});
    }
    return set;
}

// ---------------------------------------------------------------------------
// Assembly

struct LossEvaluation {
    LossBreakdown breakdown;
    GradientVector gradient; // empty unless requested
};

/**
 * @brief Mean-per-component losses over a collocation set, optionally with
 * the exact parameter gradient of the weighted total (adjoint sweep).
 *
 * Interior points contribute PDE and consistency residuals, boundary and
 * initial points their target mismatch on the first output, and every point
 * the trace penalty. Per-point results land in fixed slots and are reduced by
 * pairwise summation, so the outcome is independent of the thread count.
 */
inline LossEvaluation evaluate_loss(const ResidualModel &model, const Circuit &circuit, const CollocationSet &set,
                                    const LossWeights &weights, bool with_gradient, DerivativeCounters *counters = nullptr,
                                    int threads = 1) {
    weights.validate();
    const PointEvaluator evaluator(circuit);
    const std::size_t n_int = set.interior_points.size();
    const std::size_t n_bc = set.boundary_points.size();
    const std::size_t n_ic = set.initial_points.size();
    const std::size_t n_all = n_int + n_bc + n_ic;
    if (n_all == 0) throw ConfigError("collocation set is empty");
    const std::size_t nparams = circuit.config().param_count();
    const std::size_t nout = circuit.config().output_modes.size();
    const auto directions = model.derivative_directions();

    enum Slot { Pde, Cons, Bc, Ic, Trace, NumSlots };
    std::vector<std::array<double, NumSlots>> per_point(n_all);
    std::vector<GradientVector> grads(with_gradient ? n_all : 0);

    const double w_trace = n_all ? weights.trace / static_cast<double>(n_all) : 0.0;

    parallel_for(n_all, threads, [&](std::size_t i) {
        auto &slot = per_point[i];
        slot.fill(0.0);
        GradientVector *g = nullptr;
        if (with_gradient) {
            grads[i].assign(nparams, 0.0);
            g = &grads[i];
        }
        const auto blank = [&](std::size_t nd) {
            PointSensitivity s;
            s.d_u.assign(nout, 0.0);
            s.d_du.assign(nout, std::vector<double>(nd, 0.0));
            return s;
        };
        if (i < n_int) {
            const auto &pt = set.interior_points[i];
            const LinearResidual pde = model.pde_residual(pt);
            const LinearResidual cons = model.consistency_residual(pt);
            const double w_pde = weights.pde / static_cast<double>(n_int);
            const double w_cons = weights.consistency / static_cast<double>(n_int);
            const PointOutputs o = evaluator.evaluate(
                model.network_inputs(pt), directions,
                [&](const PointOutputs &v) {
                    PointSensitivity s = blank(directions.size());
                    pde.add_sensitivity(w_pde, pde.evaluate(v), s);
                    cons.add_sensitivity(w_cons, cons.evaluate(v), s);
                    s.d_norm = 2.0 * w_trace * (v.norm_sq - 1.0);
                    return s;
                },
                g, counters);
            const double rp = pde.evaluate(o);
            const double rc = cons.evaluate(o);
            slot[Pde] = rp * rp;
            slot[Cons] = rc * rc;
            slot[Trace] = loss_trace(o.norm_sq);
            return;
        }
        const bool boundary = i < n_int + n_bc;
        const TargetPoint &tp = boundary ? set.boundary_points[i - n_int] : set.initial_points[i - n_int - n_bc];
        const double w = boundary ? weights.bc / static_cast<double>(n_bc) : weights.ic / static_cast<double>(n_ic);
        const PointOutputs o = evaluator.evaluate(
            model.network_inputs(tp.point), {},
            [&](const PointOutputs &v) {
                PointSensitivity s = blank(0);
                s.d_u[0] = 2.0 * w * (v.u[0] - tp.target);
                s.d_norm = 2.0 * w_trace * (v.norm_sq - 1.0);
                return s;
            },
            g, counters);
        const double r = o.u[0] - tp.target;
        slot[boundary ? Bc : Ic] = r * r;
        slot[Trace] = loss_trace(o.norm_sq);
    });

    const auto column_mean = [&](Slot s, std::size_t lo, std::size_t count) {
        if (count == 0) return 0.0;
        std::vector<double> v(count);
        for (std::size_t i = 0; i < count; ++i) v[i] = per_point[lo + i][s];
        return pairwise_sum(v) / static_cast<double>(count);
    };
    LossBreakdown b;
    b.pde = column_mean(Pde, 0, n_int);
    b.consistency = column_mean(Cons, 0, n_int);
    b.bc = column_mean(Bc, n_int, n_bc);
    b.ic = column_mean(Ic, n_int + n_bc, n_ic);
    b.trace = column_mean(Trace, 0, n_all);
    LossEvaluation out{total_loss(b, weights), {}};
    if (!std::isfinite(out.breakdown.total)) throw NumericalError("non-finite total loss");

    if (with_gradient) {
        out.gradient.assign(nparams, 0.0);
        std::vector<double> col(n_all);
        for (std::size_t k = 0; k < nparams; ++k) {
            for (std::size_t i = 0; i < n_all; ++i) col[i] = grads[i][k];
            out.gradient[k] = pairwise_sum(col);
            if (!std::isfinite(out.gradient[k])) throw NumericalError("non-finite gradient component " + std::to_string(k));
        }
    }
    return out;
}

} // namespace cvqpinn
