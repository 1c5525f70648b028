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
 * @file gate_validation.hpp
 * @brief Self-checks of the Fock-space gates, reported per property.
 */

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "cvqpinn/fock.hpp"
#include "cvqpinn/linalg.hpp"

namespace cvqpinn {

struct GateCheck {
    std::string name;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool passed() const { return max_error <= tolerance; }
};

struct GateValidationOptions {
    int cutoff = 20;
    int statistics_cutoff = 30;
    /// Replaces the Kerr builder; a test hook for negative checks.
    std::function<GateMatrix<Complex>(double, int)> kerr = [](double k, int c) { return kerr_matrix(k, c); };
};

namespace detail {

inline FockState<Complex> basis_state(int modes, int cutoff, std::initializer_list<int> levels) {
    FockState<Complex> s(modes, cutoff);
    s[s.flat_index(std::vector<int>(levels))] = 1.0;
    return s;
}

inline double max_abs_diff(const std::vector<Complex> &a, const std::vector<Complex> &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// exp(G) of the truncated generator alpha a^dagger - conj(alpha) a, at `cutoff`.
inline std::vector<Complex> displacement_by_expm(Complex alpha, int cutoff) {
    const auto a = ladder_matrix(cutoff);
    const std::size_t d = a.dim();
    std::vector<Complex> g(d * d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) g[r * d + c] = alpha * std::conj(a(c, r)) - std::conj(alpha) * a(r, c);
    }
    return linalg::expm(g, d);
}

} // namespace detail

/**
 * @brief Runs the gate property suite: coherent-state statistics, diagonal
 * unitarity of R and K (K checked against exp(i kappa N^2) built from the
 * ladder operator), Laguerre displacement versus the matrix exponential,
 * norm retention for low-photon inputs, displacement composition and
 * beamsplitter photon conservation.
 */
inline std::vector<GateCheck> validate_gates(const GateValidationOptions &opt = {}) {
    std::vector<GateCheck> out;
    const int c = opt.cutoff;

    {
        GateCheck chk{"coherent_poisson_statistics", 0.0, 1e-8};
        for (double mag : {0.3, 0.8, 1.2, 1.5}) {
            for (double phase : {0.0, 0.9, -2.1}) {
                const Complex alpha = std::polar(mag, phase);
                const auto s = apply_gate(displacement_matrix(alpha, opt.statistics_cutoff), make_vacuum(1, opt.statistics_cutoff), 0);
                double log_p = -mag * mag;
                for (int n = 0; n < opt.statistics_cutoff; ++n) {
                    if (n > 0) log_p += std::log(mag * mag) - std::log(static_cast<double>(n));
                    chk.max_error = std::max(chk.max_error, std::abs(std::norm(s[static_cast<std::size_t>(n)]) - std::exp(log_p)));
                }
            }
        }
        out.push_back(chk);
    }

    {
        GateCheck chk{"rotation_diagonal_unitary", 0.0, 1e-12};
        for (double phi : {0.3, -1.7, 2.9}) {
            const auto r = rotation_matrix(phi, c);
            for (std::size_t i = 0; i < r.dim(); ++i) {
                for (std::size_t j = 0; j < r.dim(); ++j) {
                    const double target = i == j ? 1.0 : 0.0;
                    chk.max_error = std::max(chk.max_error, std::abs(std::abs(r(i, j)) - target));
                }
                chk.max_error = std::max(chk.max_error, std::abs(r(i, i) - std::polar(1.0, phi * static_cast<double>(i))));
            }
        }
        out.push_back(chk);
    }

    {
        GateCheck chk{"kerr_diagonal_unitary", 0.0, 1e-12};
        const auto a = ladder_matrix(c);
        const std::size_t d = a.dim();
        for (double kappa : {0.05, -0.4, 1.3}) {
            const auto k = opt.kerr(kappa, c);
            for (std::size_t i = 0; i < d; ++i) {
                // N = a^dagger a from the ladder operator.
                double n = 0.0;
                for (std::size_t m = 0; m < d; ++m) n += std::norm(a(m, i));
                for (std::size_t j = 0; j < d; ++j) {
                    const Complex expected = i == j ? std::polar(1.0, kappa * n * n) : Complex{};
                    chk.max_error = std::max(chk.max_error, std::abs(k(i, j) - expected));
                }
            }
        }
        out.push_back(chk);
    }

    {
        GateCheck chk{"displacement_laguerre_vs_expm", 0.0, 1e-8};
        const int big = c + 40;
        for (Complex alpha : {Complex{0.4, 0.0}, Complex{-0.7, 0.5}, Complex{1.0, -1.1}}) {
            const auto closed = displacement_matrix(alpha, c);
            const auto reference = detail::displacement_by_expm(alpha, big);
            for (int i = 0; i < c; ++i) {
                for (int j = 0; j < c; ++j) {
                    const auto ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
                    chk.max_error = std::max(chk.max_error, std::abs(closed(ii, jj) - reference[ii * static_cast<std::size_t>(big) + jj]));
                }
            }
        }
        out.push_back(chk);
    }

    {
        GateCheck chk{"norm_retention_low_photon", 0.0, 1e-6};
        for (int n0 = 0; n0 <= 3; ++n0) {
            for (int n1 = 0; n1 <= 3 - n0; ++n1) {
                const auto s = detail::basis_state(2, c, {n0, n1});
                const auto check = [&](const FockState<Complex> &t) { chk.max_error = std::max(chk.max_error, std::max(0.0, 1.0 - norm_squared(t))); };
                check(apply_gate(displacement_matrix(Complex{0.6, -0.3}, c), s, 0));
                check(apply_gate(squeezing_matrix(0.3, 0.0, c), s, 1));
                check(apply_gate(beamsplitter_matrix(0.7, 0.4, c), s, 0, 1));
                check(apply_gate(rotation_matrix(1.1, c), s, 0));
                check(apply_gate(opt.kerr(0.2, c), s, 1));
            }
        }
        out.push_back(chk);
    }

    {
        GateCheck chk{"displacement_composition", 0.0, 1e-8};
        const int big = opt.statistics_cutoff;
        const Complex a{0.5, 0.2}, b{-0.3, 0.6};
        const auto da = displacement_matrix(a, big), db = displacement_matrix(b, big), dab = displacement_matrix(a + b, big);
        const auto prod = linalg::matmul(da.entries(), db.entries(), da.dim());
        const Complex phase = std::exp(Complex{0.0, (a * std::conj(b)).imag()});
        const std::size_t block = static_cast<std::size_t>(big) / 2;
        for (std::size_t i = 0; i < block; ++i) {
            for (std::size_t j = 0; j < block; ++j) chk.max_error = std::max(chk.max_error, std::abs(prod[i * da.dim() + j] - phase * dab(i, j)));
        }
        out.push_back(chk);
    }

    {
        GateCheck chk{"beamsplitter_photon_conservation", 0.0, 1e-12};
        const auto bs = beamsplitter_matrix(0.9, -0.6, c);
        const auto cc = static_cast<std::size_t>(c);
        for (std::size_t r = 0; r < bs.dim(); ++r) {
            for (std::size_t col = 0; col < bs.dim(); ++col) {
                if (r / cc + r % cc != col / cc + col % cc) chk.max_error = std::max(chk.max_error, std::abs(bs(r, col)));
            }
        }
        for (int n0 = 0; n0 <= 4; ++n0) {
            for (int n1 = 0; n1 <= 4; ++n1) {
                const auto s = apply_gate(bs, detail::basis_state(2, c, {n0, n1}), 0, 1);
                double total = 0.0, norm = 0.0;
                for (std::size_t idx = 0; idx < s.size(); ++idx) {
                    const double p = std::norm(s[idx]);
                    total += p * static_cast<double>(idx / cc + idx % cc);
                    norm += p;
                }
                chk.max_error = std::max(chk.max_error, std::abs(total / norm - (n0 + n1)));
            }
        }
        out.push_back(chk);
    }
    return out;
}

/// Kerr with an off-by-one exponent, exp(i kappa N^3); used to exercise failure reporting.
inline GateMatrix<Complex> faulty_kerr_matrix(double kappa, int cutoff) {
    const auto c = static_cast<std::size_t>(cutoff);
    std::vector<Complex> e(c * c);
    for (std::size_t n = 0; n < c; ++n) {
        const double nn = static_cast<double>(n);
        e[n * c + n] = std::polar(1.0, kappa * nn * nn * nn);
    }
    return {GateKind::Kerr, 1, cutoff, std::move(e)};
}

} // namespace cvqpinn
