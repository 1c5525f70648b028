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

#include <cmath>
#include <cstddef>
#include <vector>

#include "cvqpinn/dual.hpp"

namespace cvqpinn::linalg {

/// Row-major square product C = A B.
template <typename S>
std::vector<S> matmul(const std::vector<S> &a, const std::vector<S> &b, std::size_t dim) {
    std::vector<S> c(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            const S &aik = a[i * dim + k];
            if (is_zero(aik)) continue;
            for (std::size_t j = 0; j < dim; ++j) c[i * dim + j] += aik * b[k * dim + j];
        }
    }
    return c;
}

template <typename S> std::vector<S> identity(std::size_t dim) {
    std::vector<S> m(dim * dim);
    for (std::size_t i = 0; i < dim; ++i) m[i * dim + i] = S(1.0);
    return m;
}

/// Max column sum of |re| + |im| over value and tangent parts (bounds the 1-norm from above).
template <typename S> double norm1(const std::vector<S> &a, std::size_t dim) {
    double best = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < dim; ++i) col += abs_bound(a[i * dim + j]);
        best = std::max(best, col);
    }
    return best;
}

/**
 * @brief Matrix exponential by scaling and squaring with a Taylor kernel.
 *
 * The argument is scaled until its 1-norm is at most 1/2; the Taylor series
 * is summed until the next term falls below machine epsilon relative to the
 * partial sum. Written generically so that Dual<N> entries yield the exact
 * derivative of the computed exponential.
 */
template <typename S> std::vector<S> expm(std::vector<S> a, std::size_t dim) {
    if (dim == 0) return a;
    const double nrm = norm1(a, dim);
    int squarings = 0;
    if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    const double scale = std::ldexp(1.0, -squarings);
    for (auto &x : a) x *= scale;

    std::vector<S> sum = identity<S>(dim);
    std::vector<S> term = identity<S>(dim);
    constexpr double eps = 1e-17;
    for (int k = 1; k < 64; ++k) {
        term = matmul(term, a, dim);
        for (auto &x : term) x /= static_cast<double>(k);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
        if (norm1(term, dim) <= eps * std::max(1.0, norm1(sum, dim))) break;
    }
    for (int s = 0; s < squarings; ++s) sum = matmul(sum, sum, dim);
    return sum;
}

} // namespace cvqpinn::linalg
