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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>

namespace cvqpinn {

using Complex = std::complex<double>;

/**
 * @brief Forward-mode dual number over the complex field.
 *
 * Carries a complex value and one complex tangent per active real input
 * direction. All parameters we differentiate with respect to are real, so
 * conjugation acts componentwise on value and tangents.
 */
template <std::size_t N> struct Dual {
    static constexpr std::size_t num_tangents = N;

    Complex value{};
    std::array<Complex, N> tangents{};

    constexpr Dual() = default;
    constexpr Dual(Complex v) : value(v) {}
    constexpr Dual(double v) : value(v) {}
    constexpr Dual(Complex v, const std::array<Complex, N> &t) : value(v), tangents(t) {}

    /// A real variable seeded along direction `slot`.
    static Dual variable(double v, std::size_t slot) {
        Dual d(v);
        d.tangents[slot] = 1.0;
        return d;
    }

    Dual &operator+=(const Dual &o) {
        value += o.value;
        for (std::size_t k = 0; k < N; ++k) tangents[k] += o.tangents[k];
        return *this;
    }
    Dual &operator-=(const Dual &o) {
        value -= o.value;
        for (std::size_t k = 0; k < N; ++k) tangents[k] -= o.tangents[k];
        return *this;
    }
    Dual &operator*=(const Dual &o) {
        for (std::size_t k = 0; k < N; ++k) tangents[k] = value * o.tangents[k] + tangents[k] * o.value;
        value *= o.value;
        return *this;
    }
    Dual &operator*=(Complex s) {
        value *= s;
        for (auto &t : tangents) t *= s;
        return *this;
    }
    Dual &operator*=(double s) {
        value *= s;
        for (auto &t : tangents) t *= s;
        return *this;
    }
    Dual &operator/=(const Dual &o) {
        const Complex inv = 1.0 / o.value;
        const Complex q = value * inv;
        for (std::size_t k = 0; k < N; ++k) tangents[k] = (tangents[k] - q * o.tangents[k]) * inv;
        value = q;
        return *this;
    }
    Dual &operator/=(double s) { return *this *= (1.0 / s); }

    Dual operator-() const {
        Dual r = *this;
        r *= -1.0;
        return r;
    }
};

template <std::size_t N> Dual<N> operator+(Dual<N> a, const Dual<N> &b) { return a += b; }
template <std::size_t N> Dual<N> operator-(Dual<N> a, const Dual<N> &b) { return a -= b; }
template <std::size_t N> Dual<N> operator*(Dual<N> a, const Dual<N> &b) { return a *= b; }
template <std::size_t N> Dual<N> operator/(Dual<N> a, const Dual<N> &b) { return a /= b; }

template <std::size_t N> Dual<N> operator+(Dual<N> a, Complex b) { a.value += b; return a; }
template <std::size_t N> Dual<N> operator+(Complex b, Dual<N> a) { a.value += b; return a; }
template <std::size_t N> Dual<N> operator-(Dual<N> a, Complex b) { a.value -= b; return a; }
template <std::size_t N> Dual<N> operator-(Complex b, const Dual<N> &a) { return Dual<N>(b) - a; }
template <std::size_t N> Dual<N> operator*(Dual<N> a, Complex s) { return a *= s; }
template <std::size_t N> Dual<N> operator*(Complex s, Dual<N> a) { return a *= s; }
template <std::size_t N> Dual<N> operator*(Dual<N> a, double s) { return a *= s; }
template <std::size_t N> Dual<N> operator*(double s, Dual<N> a) { return a *= s; }
template <std::size_t N> Dual<N> operator/(Dual<N> a, double s) { return a /= s; }
template <std::size_t N> Dual<N> operator/(Complex s, const Dual<N> &a) { return Dual<N>(s) / a; }

template <std::size_t N> Dual<N> conj(const Dual<N> &a) {
    Dual<N> r;
    r.value = std::conj(a.value);
    for (std::size_t k = 0; k < N; ++k) r.tangents[k] = std::conj(a.tangents[k]);
    return r;
}

template <std::size_t N> Dual<N> exp(const Dual<N> &a) {
    const Complex e = std::exp(a.value);
    Dual<N> r(e);
    for (std::size_t k = 0; k < N; ++k) r.tangents[k] = e * a.tangents[k];
    return r;
}

template <std::size_t N> Dual<N> sin(const Dual<N> &a) {
    Dual<N> r(std::sin(a.value));
    const Complex c = std::cos(a.value);
    for (std::size_t k = 0; k < N; ++k) r.tangents[k] = c * a.tangents[k];
    return r;
}

template <std::size_t N> Dual<N> cos(const Dual<N> &a) {
    Dual<N> r(std::cos(a.value));
    const Complex s = -std::sin(a.value);
    for (std::size_t k = 0; k < N; ++k) r.tangents[k] = s * a.tangents[k];
    return r;
}

// Uniform accessors so that gate builders can be written once for
// Complex and Dual<N> entries.

inline Complex value_of(Complex z) { return z; }
template <std::size_t N> Complex value_of(const Dual<N> &d) { return d.value; }

inline Complex tangent_of(Complex, std::size_t) { return 0.0; }
template <std::size_t N> Complex tangent_of(const Dual<N> &d, std::size_t k) { return d.tangents[k]; }

/// Largest modulus over value and tangents.
inline double magnitude(Complex z) { return std::abs(z); }
template <std::size_t N> double magnitude(const Dual<N> &d) {
    double m = std::abs(d.value);
    for (const auto &t : d.tangents) m = std::max(m, std::abs(t));
    return m;
}

/// Cheap upper bound on magnitude (|re| + |im|), for norms and thresholds.
inline double abs_bound(Complex z) { return std::fabs(z.real()) + std::fabs(z.imag()); }
template <std::size_t N> double abs_bound(const Dual<N> &d) {
    double m = abs_bound(d.value);
    for (const auto &t : d.tangents) m = std::max(m, abs_bound(t));
    return m;
}

inline bool is_zero(Complex z) { return z.real() == 0.0 && z.imag() == 0.0; }
template <std::size_t N> bool is_zero(const Dual<N> &d) {
    if (!is_zero(d.value)) return false;
    return std::all_of(d.tangents.begin(), d.tangents.end(), [](Complex t) { return is_zero(t); });
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
template <std::size_t N> bool is_finite(const Dual<N> &d) {
    if (!is_finite(d.value)) return false;
    return std::all_of(d.tangents.begin(), d.tangents.end(), [](Complex t) { return is_finite(t); });
}

template <typename T> struct tangent_count : std::integral_constant<std::size_t, 0> {};
template <std::size_t N> struct tangent_count<Dual<N>> : std::integral_constant<std::size_t, N> {};

} // namespace cvqpinn
