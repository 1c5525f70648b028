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

// Independent reference computations used only by the test suites. Nothing
// here calls into the library's gate builders or exponential.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat lowering(int cutoff) {
    Mat a = Mat::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

/// exp(alpha a^dagger - alpha* a) on the truncated space (Eigen's Pade exponential).
inline Mat displacement_expm(Complex alpha, int cutoff) {
    const Mat a = lowering(cutoff);
    const Mat gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return gen.exp();
}

inline Mat squeezing_expm(double r, double phi, int cutoff) {
    const Mat a = lowering(cutoff);
    const Complex z = std::polar(r, phi);
    const Mat gen = 0.5 * (std::conj(z) * a * a - z * a.adjoint() * a.adjoint());
    return gen.exp();
}

/// Dense two-mode beamsplitter from Kronecker-product ladder operators.
inline Mat beamsplitter_expm(double theta, double phi, int cutoff) {
    const Mat a1 = lowering(cutoff);
    const Mat id = Mat::Identity(cutoff, cutoff);
    const int d = cutoff * cutoff;
    Mat a = Mat::Zero(d, d), b = Mat::Zero(d, d);
    for (int i = 0; i < cutoff; ++i)
        for (int j = 0; j < cutoff; ++j)
            for (int k = 0; k < cutoff; ++k)
                for (int l = 0; l < cutoff; ++l) {
                    a(i * cutoff + k, j * cutoff + l) = a1(i, j) * id(k, l);
                    b(i * cutoff + k, j * cutoff + l) = id(i, j) * a1(k, l);
                }
    const Mat gen = theta * (std::polar(1.0, phi) * a.adjoint() * b - std::polar(1.0, -phi) * a * b.adjoint());
    return gen.exp();
}

/// Coherent-state photon number probability e^{-|a|^2} |a|^{2n} / n!.
inline double poisson_probability(double abs_alpha, int n) {
    const double m = abs_alpha * abs_alpha;
    return std::exp(-m + n * std::log(m) - std::lgamma(n + 1.0));
}

/// Variance of x = a + a^dagger for a single-mode state vector, by explicit matrices.
inline double variance_x(const Eigen::VectorXcd &psi) {
    const Mat a = lowering(static_cast<int>(psi.size()));
    const Mat x = a + a.adjoint();
    const double nrm = psi.squaredNorm();
    const double m1 = (psi.adjoint() * x * psi)(0, 0).real() / nrm;
    const double m2 = (psi.adjoint() * x * x * psi)(0, 0).real() / nrm;
    return m2 - m1 * m1;
}

} // namespace oracle
