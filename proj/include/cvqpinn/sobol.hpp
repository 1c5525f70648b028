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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cvqpinn/errors.hpp"

namespace cvqpinn {

/**
 * @brief Sobol low-discrepancy generator (Gray-code order, 32-bit).
 *
 * Direction numbers follow the Joe-Kuo table; dimension 0 is the van der
 * Corput sequence. An optional random digital shift (seeded) scrambles the
 * sequence while preserving its net structure.
 */
class SobolSequence {
  public:
    static constexpr std::size_t max_dimensions = 5;

    explicit SobolSequence(std::size_t dimensions, std::optional<std::uint64_t> scramble_seed = std::nullopt)
        : dims_(dimensions), state_(dimensions, 0u), shift_(dimensions, 0u) {
        if (dimensions == 0 || dimensions > max_dimensions) throw ConfigError("Sobol dimension must be in 1..5");
        for (std::size_t d = 0; d < dimensions; ++d) directions_.push_back(direction_numbers(d));
        if (scramble_seed) {
            std::mt19937_64 rng(*scramble_seed);
            for (auto &s : shift_) s = static_cast<std::uint32_t>(rng() >> 32);
            scrambled_ = true;
        }
    }

    std::size_t dimensions() const { return dims_; }

    /// Next point in [0, 1)^d. The first call returns the all-zeros element (shifted, if scrambled).
    std::vector<double> next() {
        std::vector<double> p(dims_);
        for (std::size_t d = 0; d < dims_; ++d) {
            const std::uint32_t bits = state_[d] ^ shift_[d];
            // Scrambled points sit at cell centres so they never touch the boundary.
            p[d] = (static_cast<double>(bits) + (scrambled_ ? 0.5 : 0.0)) * 0x1p-32;
        }
        // Gray-code update: flip the direction number at the lowest zero bit of the index.
        std::uint32_t c = 0;
        for (std::uint64_t i = index_; i & 1u; i >>= 1) ++c;
        if (c >= 32) throw ConfigError("Sobol sequence exhausted");
        for (std::size_t d = 0; d < dims_; ++d) state_[d] ^= directions_[d][c];
        ++index_;
        return p;
    }

  private:
    static std::array<std::uint32_t, 32> direction_numbers(std::size_t dim) {
        struct Poly {
            unsigned degree;
            unsigned coeffs;
            std::array<std::uint32_t, 3> m;
        };
        // Joe-Kuo parameters for dimensions 2..5.
        static constexpr std::array<Poly, 4> table{{{1, 0, {1, 0, 0}}, {2, 1, {1, 3, 0}}, {3, 1, {1, 3, 1}}, {3, 2, {1, 1, 1}}}};
        std::array<std::uint32_t, 32> v{};
        if (dim == 0) {
            for (unsigned i = 0; i < 32; ++i) v[i] = 1u << (31 - i);
            return v;
        }
        const Poly &p = table[dim - 1];
        for (unsigned i = 0; i < p.degree; ++i) v[i] = p.m[i] << (31 - i);
        for (unsigned i = p.degree; i < 32; ++i) {
            v[i] = v[i - p.degree] ^ (v[i - p.degree] >> p.degree);
            for (unsigned k = 1; k < p.degree; ++k) {
                if ((p.coeffs >> (p.degree - 1 - k)) & 1u) v[i] ^= v[i - k];
            }
        }
        return v;
    }

    std::size_t dims_;
    std::vector<std::uint32_t> state_;
    std::vector<std::uint32_t> shift_;
    std::vector<std::array<std::uint32_t, 32>> directions_;
    std::uint64_t index_ = 0;
    bool scrambled_ = false;
};

} // namespace cvqpinn
