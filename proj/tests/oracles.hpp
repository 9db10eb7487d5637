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

// Reference computations that share no code with the library under test.

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>
#include <utility>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using mp = boost::multiprecision::cpp_bin_float_100;

inline Matrix pauli_1q(char p) {
    Matrix m(2, 2);
    switch (p) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case 'Z': m << 1, 0, 0, -1; break;
        default: throw std::invalid_argument(std::string("bad Pauli letter ") + p);
    }
    return m;
}

/// Kronecker product of the label letters, leftmost letter = most significant qubit.
inline Matrix pauli_string(const std::string &label) {
    Matrix m = Matrix::Identity(1, 1);
    for (char c : label) {
        const Matrix p = pauli_1q(c);
        Matrix next(m.rows() * 2, m.cols() * 2);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = m(i, j) * p;
        m = next;
    }
    return m;
}

inline Matrix pauli_sum(int n, const std::vector<std::pair<std::string, cplx>> &terms) {
    const Eigen::Index d = Eigen::Index{1} << n;
    Matrix h = Matrix::Zero(d, d);
    for (const auto &[label, c] : terms) h += c * pauli_string(label);
    return h;
}

/// e^{-i H t} by Pade scaling and squaring (Eigen unsupported MatrixFunctions).
inline Matrix evolution(const Matrix &h, double t) {
    const Matrix a = cplx(0.0, -t) * h;
    return a.exp();
}

/// Largest singular value of a - b.
inline double spectral_norm(const Matrix &a) {
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

/// Divided difference of e^{-i tau x} by the defining recursion in 100-digit
/// arithmetic; inputs must be pairwise distinct.
inline cplx dd_recursive(const std::vector<double> &x, double tau) {
    const std::size_t n = x.size();
    std::vector<mp> re(n), im(n);
    for (std::size_t j = 0; j < n; ++j) {
        const mp arg = mp(tau) * mp(x[j]);
        re[j] = boost::multiprecision::cos(arg);
        im[j] = -boost::multiprecision::sin(arg);
    }
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t j = 0; j + level < n; ++j) {
            const mp den = mp(x[j + level]) - mp(x[j]);
            re[j] = (re[j + 1] - re[j]) / den;
            im[j] = (im[j + 1] - im[j]) / den;
        }
    return {static_cast<double>(re[0]), static_cast<double>(im[0])};
}

/// Mean-phase product over the K blocks of a tuple: Prod_l e^{-i delta xbar_l},
/// xbar_l the mean of the inputs x_{Sigma_{l-1}}..x_{Sigma_l}.
inline cplx block_phase_product(const std::vector<int> &k, int K, const std::vector<double> &x, double delta) {
    std::vector<int> count(static_cast<std::size_t>(K), 0);
    for (int v : k) ++count[static_cast<std::size_t>(v - 1)];
    cplx prod = 1.0;
    int start = 0;
    for (int l = 0; l < K; ++l) {
        double mean = 0.0;
        for (int s = start; s <= start + count[l]; ++s) mean += x[static_cast<std::size_t>(s)];
        mean /= count[l] + 1;
        prod *= std::exp(cplx(0.0, -delta * mean));
        start += count[l];
    }
    return prod;
}

/// Haar-ish random normalized state.
inline Vector random_state(int dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cplx(g(rng), g(rng));
    return v.normalized();
}

/// Sum_{q > Q} x^q / q! as e^x minus the partial sum, in 100-digit arithmetic.
inline double exp_tail(double x, int Q) {
    mp term = 1, partial = 1;
    for (int q = 1; q <= Q; ++q) {
        term *= mp(x) / q;
        partial += term;
    }
    return static_cast<double>(boost::multiprecision::exp(mp(x)) - partial);
}

/// Sum_{q <= Q} x^q / q! in 100-digit arithmetic.
inline double exp_partial(double x, int Q) {
    mp term = 1, partial = 1;
    for (int q = 1; q <= Q; ++q) {
        term *= mp(x) / q;
        partial += term;
    }
    return static_cast<double>(partial);
}

using Terms = std::vector<std::pair<std::string, cplx>>;

/// Random real-weighted Pauli sum on n qubits: `hops` strings containing at
/// least one X or Y with |weight| in [0.4, 1], and `diags` Z strings with
/// |weight| <= 0.25. Real weights keep every string Hermitian.
inline Terms random_pauli_terms(int n, int hops, int diags, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> letter(0, 3), zbit(0, 1);
    std::uniform_real_distribution<double> big(0.4, 1.0), small(-0.25, 0.25), sign(-1.0, 1.0);
    Terms t;
    while (static_cast<int>(t.size()) < hops) {
        std::string s(static_cast<std::size_t>(n), 'I');
        bool off = false;
        for (auto &c : s) {
            c = "IXYZ"[letter(rng)];
            off = off || c == 'X' || c == 'Y';
        }
        if (!off) continue;
        t.emplace_back(s, (sign(rng) < 0 ? -1.0 : 1.0) * big(rng));
    }
    for (int d = 0; d < diags;) {
        std::string s(static_cast<std::size_t>(n), 'I');
        bool any = false;
        for (auto &c : s)
            if (zbit(rng)) {
                c = 'Z';
                any = true;
            }
        if (!any) continue;
        t.emplace_back(s, small(rng));
        ++d;
    }
    return t;
}

}  // namespace oracle
