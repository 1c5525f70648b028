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
 * @file fock.hpp
 * @brief Truncated Fock-space states and the continuous-variable gate set.
 *
 * Quadrature convention used throughout the library: x = a + a^dagger, so
 * the vacuum has Var(x) = 1 and a coherent state |alpha> has <x> = 2 Re alpha.
 *
 * States are row-major tensors with mode 0 varying slowest. Gate builders are
 * templated on their parameter type so that a Dual<N> parameter produces a
 * gate whose tangents are the exact parameter derivatives of every entry.
 */

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "cvqpinn/dual.hpp"
#include "cvqpinn/errors.hpp"
#include "cvqpinn/linalg.hpp"

namespace cvqpinn {

enum class GateKind { Displacement, Squeezing, Rotation, Beamsplitter, Kerr, Generic };

inline const char *gate_label(GateKind kind) {
    switch (kind) {
    case GateKind::Displacement: return "D";
    case GateKind::Squeezing: return "S";
    case GateKind::Rotation: return "R";
    case GateKind::Beamsplitter: return "BS";
    case GateKind::Kerr: return "K";
    case GateKind::Generic: break;
    }
    return "G";
}

namespace detail {

inline std::size_t checked_pow(int base, int exponent) {
    std::size_t r = 1;
    for (int i = 0; i < exponent; ++i) {
        r *= static_cast<std::size_t>(base);
        if (r > (std::size_t{1} << 26)) throw ConfigError("Fock space too large: cutoff^modes exceeds 2^26");
    }
    return r;
}

inline void check_cutoff(int cutoff) {
    if (cutoff < 2) throw ConfigError("cutoff must be >= 2, got " + std::to_string(cutoff));
}

template <typename P> struct entry_type { using type = P; };
template <> struct entry_type<double> { using type = Complex; };

} // namespace detail

/// Entry type of a gate built from a parameter of type P.
template <typename P> using entry_t = typename detail::entry_type<P>::type;

template <typename A, typename B> using product_t = decltype(std::declval<A>() * std::declval<B>());

/// Amplitude tensor over num_modes truncated modes of dimension cutoff each.
template <typename S = Complex> class FockState {
  public:
    FockState(int num_modes, int cutoff) : num_modes_(num_modes), cutoff_(cutoff) {
        if (num_modes < 1) throw ConfigError("num_modes must be >= 1, got " + std::to_string(num_modes));
        detail::check_cutoff(cutoff);
        amplitudes_.assign(detail::checked_pow(cutoff, num_modes), S{});
    }

    FockState(int num_modes, int cutoff, std::vector<S> amplitudes) : FockState(num_modes, cutoff) {
        if (amplitudes.size() != amplitudes_.size()) throw UsageError("amplitude count does not match cutoff^num_modes");
        amplitudes_ = std::move(amplitudes);
    }

    int num_modes() const { return num_modes_; }
    int cutoff() const { return cutoff_; }
    std::size_t size() const { return amplitudes_.size(); }

    const std::vector<S> &amplitudes() const { return amplitudes_; }
    std::vector<S> &amplitudes() { return amplitudes_; }

    S &operator[](std::size_t i) { return amplitudes_[i]; }
    const S &operator[](std::size_t i) const { return amplitudes_[i]; }

    /// Distance in the flat array between consecutive photon numbers of `mode`.
    std::size_t stride(int mode) const {
        std::size_t s = 1;
        for (int m = num_modes_ - 1; m > mode; --m) s *= static_cast<std::size_t>(cutoff_);
        return s;
    }

    std::size_t flat_index(const std::vector<int> &levels) const {
        if (static_cast<int>(levels.size()) != num_modes_) throw UsageError("level count does not match num_modes");
        std::size_t idx = 0;
        for (int level : levels) {
            if (level < 0 || level >= cutoff_) throw UsageError("photon number outside truncation");
            idx = idx * static_cast<std::size_t>(cutoff_) + static_cast<std::size_t>(level);
        }
        return idx;
    }

    const S &at(const std::vector<int> &levels) const { return amplitudes_[flat_index(levels)]; }

  private:
    int num_modes_;
    int cutoff_;
    std::vector<S> amplitudes_;
};

/**
 * @brief Dense gate matrix in the truncated number basis.
 *
 * Nonzero entries are additionally indexed row-wise (CSR) at construction so
 * that block-sparse gates such as the beamsplitter apply in time proportional
 * to their nonzero count.
 */
template <typename S = Complex> class GateMatrix {
  public:
    GateMatrix(GateKind kind, int arity, int cutoff, std::vector<S> entries)
        : kind_(kind), arity_(arity), cutoff_(cutoff), entries_(std::move(entries)) {
        if (arity != 1 && arity != 2) throw ConfigError("gate arity must be 1 or 2");
        detail::check_cutoff(cutoff);
        dim_ = detail::checked_pow(cutoff, arity);
        if (entries_.size() != dim_ * dim_) throw ConfigError("gate entry count does not match cutoff^arity squared");
        diagonal_ = true;
        row_ptr_.reserve(dim_ + 1);
        row_ptr_.push_back(0);
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                if (is_zero(entries_[r * dim_ + c])) continue;
                if (r != c) diagonal_ = false;
                cols_.push_back(static_cast<std::uint32_t>(c));
                values_.push_back(entries_[r * dim_ + c]);
            }
            row_ptr_.push_back(cols_.size());
        }
    }

    GateKind kind() const { return kind_; }
    const char *label() const { return gate_label(kind_); }
    int arity() const { return arity_; }
    int cutoff() const { return cutoff_; }
    std::size_t dim() const { return dim_; }
    bool is_diagonal() const { return diagonal_; }

    const S &operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }
    const std::vector<S> &entries() const { return entries_; }

    const std::vector<std::size_t> &row_ptr() const { return row_ptr_; }
    const std::vector<std::uint32_t> &cols() const { return cols_; }
    /// Nonzero entries in CSR order.
    const std::vector<S> &values() const { return values_; }

  private:
    GateKind kind_;
    int arity_;
    int cutoff_;
    std::size_t dim_ = 0;
    bool diagonal_ = false;
    std::vector<S> entries_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::uint32_t> cols_;
    std::vector<S> values_;
};

/// Value part of a gate built with dual parameters.
template <std::size_t N> GateMatrix<Complex> value_gate(const GateMatrix<Dual<N>> &g) {
    std::vector<Complex> e(g.entries().size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = g.entries()[i].value;
    return {g.kind(), g.arity(), g.cutoff(), std::move(e)};
}

/// Derivative of every gate entry along tangent direction `slot`.
template <std::size_t N> GateMatrix<Complex> tangent_gate(const GateMatrix<Dual<N>> &g, std::size_t slot) {
    std::vector<Complex> e(g.entries().size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = g.entries()[i].tangents[slot];
    return {g.kind(), g.arity(), g.cutoff(), std::move(e)};
}

// ---------------------------------------------------------------------------
// States

inline FockState<Complex> make_vacuum(int num_modes, int cutoff) {
    FockState<Complex> s(num_modes, cutoff);
    s[0] = 1.0;
    return s;
}

/// Squared norm <psi|psi>; Dual states carry its input derivatives.
template <typename S> S norm_squared(const FockState<S> &state) {
    S acc{};
    for (const auto &a : state.amplitudes()) acc += conj(a) * a;
    return acc;
}

inline double norm_squared(const FockState<Complex> &state) {
    double acc = 0.0;
    for (const auto &a : state.amplitudes()) acc += std::norm(a);
    return acc;
}

// ---------------------------------------------------------------------------
// Gates

inline GateMatrix<Complex> ladder_matrix(int cutoff) {
    detail::check_cutoff(cutoff);
    const auto c = static_cast<std::size_t>(cutoff);
    std::vector<Complex> e(c * c);
    for (std::size_t n = 1; n < c; ++n) e[(n - 1) * c + n] = std::sqrt(static_cast<double>(n));
    return {GateKind::Generic, 1, cutoff, std::move(e)};
}

/**
 * @brief D(alpha) from the closed-form Laguerre expression.
 *
 * For m >= n: <m|D|n> = sqrt(n!/m!) alpha^(m-n) exp(-|alpha|^2/2) L_n^(m-n)(|alpha|^2);
 * entries above the diagonal follow from D(alpha)^dagger = D(-alpha). The
 * result is the exact restriction of the infinite-dimensional operator.
 */
template <typename P = Complex> GateMatrix<entry_t<P>> displacement_matrix(P alpha_in, int cutoff) {
    using S = entry_t<P>;
    detail::check_cutoff(cutoff);
    if (!is_finite(S(alpha_in))) throw ConfigError("displacement must be finite");
    const auto c = static_cast<std::size_t>(cutoff);
    const S alpha(alpha_in);
    const S x = alpha * conj(alpha);
    const S pref = exp(x * Complex(-0.5));
    const S beta = -conj(alpha);

    std::vector<double> log_fact(c);
    for (std::size_t n = 0; n < c; ++n) log_fact[n] = std::lgamma(static_cast<double>(n) + 1.0);

    std::vector<S> e(c * c);
    std::vector<S> lag(c);
    S alpha_pow(1.0);
    S beta_pow(1.0);
    for (std::size_t k = 0; k < c; ++k) {
        // lag[j] = L_j^(k)(x), j = 0 .. c-1-k
        const std::size_t jmax = c - 1 - k;
        const double kd = static_cast<double>(k);
        lag[0] = S(1.0);
        if (jmax >= 1) lag[1] = S(1.0 + kd) - x;
        for (std::size_t j = 1; j + 1 <= jmax; ++j) {
            const double jd = static_cast<double>(j);
            lag[j + 1] = ((S(2.0 * jd + 1.0 + kd) - x) * lag[j] - S(jd + kd) * lag[j - 1]) / (jd + 1.0);
        }
        for (std::size_t j = 0; j <= jmax; ++j) {
            const double ratio = std::exp(0.5 * (log_fact[j] - log_fact[j + k]));
            const S common = pref * lag[j] * ratio;
            e[(j + k) * c + j] = common * alpha_pow;
            if (k > 0) e[j * c + (j + k)] = common * beta_pow;
        }
        alpha_pow *= alpha;
        beta_pow *= beta;
    }
    return {GateKind::Displacement, 1, cutoff, std::move(e)};
}

/// S(z) = exp(1/2 (z* a^2 - z a^dagger^2)), z = r e^{i phi}, on the truncated space.
template <typename P = double> GateMatrix<entry_t<P>> squeezing_matrix(P r_in, P phi_in, int cutoff) {
    using S = entry_t<P>;
    detail::check_cutoff(cutoff);
    const S r(r_in);
    const S phi(phi_in);
    if (!is_finite(r) || !is_finite(phi)) throw ConfigError("squeezing parameters must be finite");
    const auto c = static_cast<std::size_t>(cutoff);
    const S z = r * exp(phi * Complex(0.0, 1.0));
    const S zc = conj(z);
    std::vector<S> gen(c * c);
    for (std::size_t n = 2; n < c; ++n) {
        const double amp = std::sqrt(static_cast<double>(n * (n - 1)));
        gen[(n - 2) * c + n] = zc * (0.5 * amp);  // a^2
        gen[n * c + (n - 2)] = z * (-0.5 * amp);  // a^dagger^2
    }
    return {GateKind::Squeezing, 1, cutoff, linalg::expm(std::move(gen), c)};
}

/// R(phi) = exp(i phi n).
template <typename P = double> GateMatrix<entry_t<P>> rotation_matrix(P phi_in, int cutoff) {
    using S = entry_t<P>;
    detail::check_cutoff(cutoff);
    const S phi(phi_in);
    if (!is_finite(phi)) throw ConfigError("rotation angle must be finite");
    const auto c = static_cast<std::size_t>(cutoff);
    std::vector<S> e(c * c);
    for (std::size_t n = 0; n < c; ++n) e[n * c + n] = exp(phi * Complex(0.0, static_cast<double>(n)));
    return {GateKind::Rotation, 1, cutoff, std::move(e)};
}

/// K(kappa) = exp(i kappa n^2).
template <typename P = double> GateMatrix<entry_t<P>> kerr_matrix(P kappa_in, int cutoff) {
    using S = entry_t<P>;
    detail::check_cutoff(cutoff);
    const S kappa(kappa_in);
    if (!is_finite(kappa)) throw ConfigError("Kerr strength must be finite");
    const auto c = static_cast<std::size_t>(cutoff);
    std::vector<S> e(c * c);
    for (std::size_t n = 0; n < c; ++n) e[n * c + n] = exp(kappa * Complex(0.0, static_cast<double>(n * n)));
    return {GateKind::Kerr, 1, cutoff, std::move(e)};
}

/**
 * @brief BS(theta, phi) = exp(theta (e^{i phi} a^dagger b - e^{-i phi} a b^dagger)).
 *
 * `a` acts on the first mode of the pair. The truncated generator is block
 * diagonal in total photon number, so each block is exponentiated on its own.
 */
template <typename P = double> GateMatrix<entry_t<P>> beamsplitter_matrix(P theta_in, P phi_in, int cutoff) {
    using S = entry_t<P>;
    detail::check_cutoff(cutoff);
    const S theta(theta_in);
    const S phi(phi_in);
    if (!is_finite(theta) || !is_finite(phi)) throw ConfigError("beamsplitter angles must be finite");
    const auto c = static_cast<std::size_t>(cutoff);
    const std::size_t dim = c * c;
    const S fwd = theta * exp(phi * Complex(0.0, 1.0));     // coefficient of a^dagger b
    const S bwd = -(theta * exp(phi * Complex(0.0, -1.0))); // coefficient of a b^dagger

    std::vector<S> e(dim * dim);
    for (std::size_t total = 0; total <= 2 * (c - 1); ++total) {
        const std::size_t lo = total >= c ? total - (c - 1) : 0;
        const std::size_t hi = std::min(total, c - 1);
        const std::size_t bdim = hi - lo + 1;
        // Block basis: index i <-> |lo + i, total - lo - i>.
        std::vector<S> gen(bdim * bdim);
        for (std::size_t i = 0; i < bdim; ++i) {
            const std::size_t na = lo + i;
            const std::size_t nb = total - na;
            if (i + 1 < bdim && nb >= 1) {
                // a^dagger b |na, nb> = sqrt(na+1) sqrt(nb) |na+1, nb-1>
                gen[(i + 1) * bdim + i] = fwd * std::sqrt(static_cast<double>((na + 1) * nb));
            }
            if (i >= 1 && na >= 1) {
                // a b^dagger |na, nb> = sqrt(na) sqrt(nb+1) |na-1, nb+1>
                gen[(i - 1) * bdim + i] = bwd * std::sqrt(static_cast<double>(na * (nb + 1)));
            }
        }
        const std::vector<S> blk = linalg::expm(std::move(gen), bdim);
        for (std::size_t i = 0; i < bdim; ++i) {
            const std::size_t row = (lo + i) * c + (total - lo - i);
            for (std::size_t j = 0; j < bdim; ++j) {
                const std::size_t col = (lo + j) * c + (total - lo - j);
                e[row * dim + col] = blk[i * bdim + j];
            }
        }
    }
    return {GateKind::Beamsplitter, 2, cutoff, std::move(e)};
}

// ---------------------------------------------------------------------------
// Application

namespace detail {

/// Local-basis offsets of a gate and the base index of every fibre it acts on.
struct Addressing {
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> bases;
    /// Single-mode gates: fibres come in runs of `run` consecutive bases.
    std::size_t run = 1;
};

template <typename S> Addressing address(const FockState<S> &state, const std::vector<int> &modes, int arity) {
    if (static_cast<int>(modes.size()) != arity) throw UsageError("gate arity does not match the number of mode indices");
    for (int m : modes) {
        if (m < 0 || m >= state.num_modes()) throw UsageError("mode index " + std::to_string(m) + " out of range");
    }
    if (arity == 2 && modes[0] == modes[1]) throw UsageError("two-mode gate requires distinct modes");
    const auto c = static_cast<std::size_t>(state.cutoff());
    Addressing a;
    if (arity == 1) {
        const std::size_t st = state.stride(modes[0]);
        for (std::size_t i = 0; i < c; ++i) a.offsets.push_back(i * st);
        const std::size_t outer = state.size() / (c * st);
        for (std::size_t o = 0; o < outer; ++o) a.bases.push_back(o * c * st);
        a.run = st;
        return a;
    }
    const std::size_t s0 = state.stride(modes[0]);
    const std::size_t s1 = state.stride(modes[1]);
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) a.offsets.push_back(i * s0 + j * s1);
    for (std::size_t idx = 0; idx < state.size(); ++idx) {
        if ((idx / s0) % c == 0 && (idx / s1) % c == 0) a.bases.push_back(idx);
    }
    return a;
}

} // namespace detail

/// Contract `gate` against the state tensor along `modes`; other axes untouched.
template <typename G, typename S>
FockState<product_t<G, S>> apply_gate(const GateMatrix<G> &gate, const FockState<S> &state, const std::vector<int> &modes) {
    using R = product_t<G, S>;
    if (gate.cutoff() != state.cutoff()) throw UsageError("gate and state cutoffs differ");
    const detail::Addressing ad = detail::address(state, modes, gate.arity());
    FockState<R> out(state.num_modes(), state.cutoff());
    const auto &rp = gate.row_ptr();
    const auto &cols = gate.cols();
    const auto &vals = gate.values();
    const std::size_t dim = gate.dim();
    const std::size_t run = ad.run;
    const S *in = state.amplitudes().data();
    R *dst = out.amplitudes().data();
    for (std::size_t base : ad.bases) {
        for (std::size_t r = 0; r < dim; ++r) {
            R *o = dst + base + ad.offsets[r];
            for (std::size_t p = rp[r]; p < rp[r + 1]; ++p) {
                const G &v = vals[p];
                const S *x = in + base + ad.offsets[cols[p]];
                for (std::size_t t = 0; t < run; ++t) o[t] += v * x[t];
            }
        }
    }
    return out;
}

template <typename G, typename S> FockState<product_t<G, S>> apply_gate(const GateMatrix<G> &gate, const FockState<S> &state, int mode) {
    return apply_gate(gate, state, std::vector<int>{mode});
}

template <typename G, typename S>
FockState<product_t<G, S>> apply_gate(const GateMatrix<G> &gate, const FockState<S> &state, int first, int second) {
    return apply_gate(gate, state, std::vector<int>{first, second});
}

/// Apply the conjugate transpose of `gate` along `modes`.
inline FockState<Complex> apply_gate_adjoint(const GateMatrix<Complex> &gate, const FockState<Complex> &state,
                                             const std::vector<int> &modes) {
    if (gate.cutoff() != state.cutoff()) throw UsageError("gate and state cutoffs differ");
    const detail::Addressing ad = detail::address(state, modes, gate.arity());
    FockState<Complex> out(state.num_modes(), state.cutoff());
    const auto &rp = gate.row_ptr();
    const auto &cols = gate.cols();
    const auto &vals = gate.values();
    const std::size_t run = ad.run;
    const Complex *in = state.amplitudes().data();
    Complex *dst = out.amplitudes().data();
    for (std::size_t base : ad.bases) {
        for (std::size_t r = 0; r < gate.dim(); ++r) {
            const Complex *x = in + base + ad.offsets[r];
            for (std::size_t p = rp[r]; p < rp[r + 1]; ++p) {
                const Complex v = std::conj(vals[p]);
                Complex *o = dst + base + ad.offsets[cols[p]];
                for (std::size_t t = 0; t < run; ++t) o[t] += v * x[t];
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Readout

/// <psi|a|psi> on `mode`, unnormalized.
template <typename S> S lowering_expectation(const FockState<S> &state, int mode) {
    if (mode < 0 || mode >= state.num_modes()) throw UsageError("mode index " + std::to_string(mode) + " out of range");
    const auto c = static_cast<std::size_t>(state.cutoff());
    const std::size_t st = state.stride(mode);
    S acc{};
    for (std::size_t idx = 0; idx < state.size(); ++idx) {
        const std::size_t n = (idx / st) % c;
        if (n + 1 >= c) continue;
        acc += conj(state[idx]) * state[idx + st] * std::sqrt(static_cast<double>(n + 1));
    }
    return acc;
}

/// Normalized <x> = <psi|(a + a^dagger)|psi> / <psi|psi>; Dual states carry input derivatives.
template <typename S> S expectation_x(const FockState<S> &state, int mode) {
    const S low = lowering_expectation(state, mode);
    const S nrm = norm_squared(state);
    if (!(std::abs(value_of(nrm)) > 0.0)) throw NumericalError("expectation of a zero-norm state");
    const S out = (low + conj(low)) / nrm;
    if (!is_finite(out)) throw NumericalError("non-finite quadrature expectation");
    return out;
}

inline double expectation_x(const FockState<Complex> &state, int mode) {
    const Complex low = lowering_expectation(state, mode);
    const double nrm = norm_squared(state);
    if (!(nrm > 0.0)) throw NumericalError("expectation of a zero-norm state");
    const double out = 2.0 * low.real() / nrm;
    if (!std::isfinite(out)) throw NumericalError("non-finite quadrature expectation");
    return out;
}

} // namespace cvqpinn
