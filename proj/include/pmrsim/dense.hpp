// Copyright 2026 The pmrsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>

#include "pmrsim/errors.hpp"

namespace pmrsim {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultDenseLimit = 12;

inline void require_dense(std::size_t n_qubits, std::size_t limit, const char *what) {
    require(n_qubits <= limit, ErrorKind::Dimension,
            std::string(what) + ": " + std::to_string(n_qubits) + " qubits exceeds the dense limit " +
                std::to_string(limit) + " (raise --dense-limit to at least " + std::to_string(n_qubits) + ")");
}

inline double max_abs(const Matrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

using Gate2 = Eigen::Matrix2cd;

inline Gate2 ry_gate(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Gate2 g;
    g << c, -s, s, c;
    return g;
}

inline Gate2 hadamard_gate() {
    const double h = 1.0 / std::sqrt(2.0);
    Gate2 g;
    g << h, h, h, -h;
    return g;
}

inline Gate2 pauli_x_gate() {
    Gate2 g;
    g << 0, 1, 1, 0;
    return g;
}

/// Left-multiplies m by g on qubit `target`, restricted to rows whose
/// `controls` bits are all set. Rows index basis states, bit b = qubit b.
inline void apply_controlled_1q(Matrix &m, unsigned target, const Gate2 &g, std::uint64_t controls = 0) {
    const std::uint64_t tbit = std::uint64_t{1} << target;
    const auto rows = static_cast<std::uint64_t>(m.rows());
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        for (std::uint64_t i = 0; i < rows; ++i) {
            if ((i & tbit) || (i & controls) != controls) continue;
            const std::uint64_t j = i | tbit;
            const std::complex<double> a = m(static_cast<Eigen::Index>(i), c), b = m(static_cast<Eigen::Index>(j), c);
            m(static_cast<Eigen::Index>(i), c) = g(0, 0) * a + g(0, 1) * b;
            m(static_cast<Eigen::Index>(j), c) = g(1, 0) * a + g(1, 1) * b;
        }
    }
}

/// ||U^dagger U - 1||_max
inline double unitarity_error(const Matrix &u) {
    return max_abs(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols()));
}

/// ||H - H^dagger||_max
inline double hermiticity_error(const Matrix &h) { return max_abs(h - h.adjoint()); }

/// e^{-i H t} for Hermitian H via eigendecomposition.
inline Matrix hermitian_evolution(const Matrix &h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    require(es.info() == Eigen::Success, ErrorKind::Convergence, "eigendecomposition failed");
    Vector phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k) phases(k) = std::exp(std::complex<double>(0.0, -es.eigenvalues()(k) * t));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Largest singular value of a - b. Dense SVD up to dimension 1024, power
/// iteration on (a-b)^dagger (a-b) above.
inline double spectral_distance(const Matrix &a, const Matrix &b, double tol = 1e-10, int max_iter = 10000) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::Contract, "spectral_distance: dimension mismatch");
    const Matrix d = a - b;
    if (d.size() == 0) return 0.0;
    if (d.rows() <= 1024 && d.cols() <= 1024) {
        Eigen::JacobiSVD<Matrix> svd(d);
        return svd.singularValues()(0);
    }
    Vector v = Vector::Ones(d.cols()).normalized();
    double sigma = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vector w = d.adjoint() * (d * v);
        const double norm = w.norm();
        if (norm == 0.0) return 0.0;
        const double next = std::sqrt(norm);
        v = w / norm;
        if (std::abs(next - sigma) <= tol * std::max(1.0, next)) return next;
        sigma = next;
    }
    const Vector r = d.adjoint() * (d * v) - sigma * sigma * v;
    fail(ErrorKind::Convergence,
         "spectral_distance: power iteration did not converge, residual " + std::to_string(r.norm()));
}

}  // namespace pmrsim
