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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cvqpinn/dual.hpp"

using cvqpinn::Complex;
using D2 = cvqpinn::Dual<2>;

namespace {

// Random rational expression in two complex-valued functions of (x, y),
// evaluated generically so that the same code runs on Complex and Dual.
template <typename T> T expression(const T &x, const T &y, int variant) {
    switch (variant % 5) {
    case 0: return (x * y + Complex(1.0, 0.5)) / (x * x + Complex(2.0));
    case 1: return exp(x * Complex(0.0, 1.0)) * y - conj(x) / (y + Complex(3.0));
    case 2: return x * x * x - Complex(0.3, -0.2) * y * y / (Complex(1.5) + x * y);
    case 3: return sin(x) * cos(y) + exp(conj(y) * x * Complex(0.1));
    default: return (x - y) * (x + y) / (Complex(4.0) + conj(x) * x);
    }
}

} // namespace

TEST(Dual, ProductRule) {
    const D2 a = D2::variable(1.5, 0);
    const D2 b = D2::variable(-0.5, 1);
    const D2 p = a * b;
    EXPECT_EQ(p.value, Complex(-0.75));
    EXPECT_EQ(p.tangents[0], Complex(-0.5));
    EXPECT_EQ(p.tangents[1], Complex(1.5));
}

TEST(Dual, RationalExpressionsMatchCentralDifferences) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
        const double x = u(rng), y = u(rng);
        const D2 r = expression(D2::variable(x, 0), D2::variable(y, 1), trial);
        const Complex dx = (expression(Complex(x + h), Complex(y), trial) - expression(Complex(x - h), Complex(y), trial)) / (2 * h);
        const Complex dy = (expression(Complex(x), Complex(y + h), trial) - expression(Complex(x), Complex(y - h), trial)) / (2 * h);
        EXPECT_NEAR(std::abs(r.value - expression(Complex(x), Complex(y), trial)), 0.0, 1e-14);
        EXPECT_LE(std::abs(r.tangents[0] - dx), 1e-6 * std::max(1.0, std::abs(dx))) << trial;
        EXPECT_LE(std::abs(r.tangents[1] - dy), 1e-6 * std::max(1.0, std::abs(dy))) << trial;
    }
}

TEST(Dual, ConjugationIsComponentwise) {
    cvqpinn::Dual<1> z(Complex(1.0, 2.0), {Complex(0.5, -0.5)});
    const auto c = conj(z);
    EXPECT_EQ(c.value, Complex(1.0, -2.0));
    EXPECT_EQ(c.tangents[0], Complex(0.5, 0.5));
}
