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

#include <algorithm>
#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pmrsim/errors.hpp"
#include "pmrsim/mask.hpp"

namespace pmrsim {

using cplx = std::complex<double>;

/// coeff * X^x_mask * Z^z_mask (X factors to the left). A Y on qubit j is
/// stored as i * X_j Z_j, so every term is a single bit-pair plus a phase.
struct PauliTerm {
    cplx coeff{};
    BitMask x_mask;
    BitMask z_mask;

    /// Parses a label such as "XIZY" (qubit n-1 first) with a complex weight.
    static PauliTerm from_label(std::string_view label, cplx weight) {
        PauliTerm t;
        t.coeff = weight;
        const std::size_t n = label.size();
        require(n <= BitMask::kMaxQubits, ErrorKind::Parse, "Pauli label longer than supported qubit count");
        for (std::size_t p = 0; p < n; ++p) {
            const std::size_t q = n - 1 - p;
            switch (label[p]) {
                case 'I': break;
                case 'X': t.x_mask.set(q); break;
                case 'Z': t.z_mask.set(q); break;
                case 'Y':
                    t.x_mask.set(q);
                    t.z_mask.set(q);
                    t.coeff *= cplx(0.0, 1.0);
                    break;
                default:
                    fail(ErrorKind::Parse, "invalid Pauli character '" + std::string(1, label[p]) + "' in \"" +
                                               std::string(label) + "\"");
            }
        }
        return t;
    }

    /// Inverse of from_label: XZ on a qubit is reported as Y with the -i folded back.
    std::pair<std::string, cplx> to_label(std::size_t n) const {
        std::string s(n, 'I');
        cplx w = coeff;
        for (std::size_t q = 0; q < n; ++q) {
            const bool x = x_mask.test(q), z = z_mask.test(q);
            char c = 'I';
            if (x && z) {
                c = 'Y';
                w *= cplx(0.0, -1.0);
            } else if (x) {
                c = 'X';
            } else if (z) {
                c = 'Z';
            }
            s[n - 1 - q] = c;
        }
        return {s, w};
    }

    bool is_identity() const { return x_mask.none() && z_mask.none(); }
};

/// (a.coeff X^xa Z^za)(b.coeff X^xb Z^zb) = a.coeff b.coeff (-1)^{|za & xb|} X^{xa^xb} Z^{za^zb}.
inline PauliTerm operator*(const PauliTerm &a, const PauliTerm &b) {
    PauliTerm r;
    r.coeff = a.coeff * b.coeff * static_cast<double>(parity_sign(a.z_mask, b.x_mask));
    r.x_mask = a.x_mask ^ b.x_mask;
    r.z_mask = a.z_mask ^ b.z_mask;
    return r;
}

/// Weighted Pauli sum over n qubits.
class PauliHamiltonian {
   public:
    PauliHamiltonian() = default;
    explicit PauliHamiltonian(std::size_t n) : n_(n) {
        require(n >= 1 && n <= BitMask::kMaxQubits, ErrorKind::Contract,
                "qubit count must be in [1, " + std::to_string(BitMask::kMaxQubits) + "]");
    }

    std::size_t n_qubits() const { return n_; }
    const std::vector<PauliTerm> &terms() const { return terms_; }

    void add(const PauliTerm &t) {
        require(t.x_mask.fits(n_) && t.z_mask.fits(n_), ErrorKind::Contract, "Pauli term acts outside the register");
        terms_.push_back(t);
        canonical_ = false;
    }
    void add(std::string_view label, cplx weight) {
        require(label.size() == n_, ErrorKind::Parse,
                "Pauli label \"" + std::string(label) + "\" has length " + std::to_string(label.size()) +
                    ", expected " + std::to_string(n_));
        add(PauliTerm::from_label(label, weight));
    }

    /// Merges equal (x, z) pairs, drops |coeff| < tol and sorts by (x, z).
    PauliHamiltonian &canonicalize(double tol = 1e-14) {
        std::map<std::pair<BitMask, BitMask>, cplx> acc;
        for (const auto &t : terms_) acc[{t.x_mask, t.z_mask}] += t.coeff;
        terms_.clear();
        for (const auto &[k, c] : acc) {
            if (std::abs(c) >= tol) terms_.push_back({c, k.first, k.second});
        }
        canonical_ = true;
        return *this;
    }

    PauliHamiltonian canonical(double tol = 1e-14) const {
        PauliHamiltonian h = *this;
        h.canonicalize(tol);
        return h;
    }

    bool is_canonical() const { return canonical_; }

    PauliHamiltonian &operator+=(const PauliHamiltonian &o) {
        require(o.n_ == n_, ErrorKind::Contract, "qubit count mismatch in Pauli sum");
        terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
        canonical_ = false;
        return *this;
    }

    PauliHamiltonian &operator*=(cplx w) {
        for (auto &t : terms_) t.coeff *= w;
        return *this;
    }

    friend PauliHamiltonian operator*(const PauliHamiltonian &a, const PauliHamiltonian &b) {
        require(a.n_ == b.n_, ErrorKind::Contract, "qubit count mismatch in Pauli product");
        PauliHamiltonian r(a.n_);
        for (const auto &x : a.terms_)
            for (const auto &y : b.terms_) r.terms_.push_back(x * y);
        r.canonicalize(0.0);
        return r;
    }

    /// Identity-term coefficient (zero if absent). Requires canonical form.
    cplx identity_coeff() const {
        for (const auto &t : terms_)
            if (t.is_identity()) return t.coeff;
        return {};
    }

   private:
    std::size_t n_ = 0;
    std::vector<PauliTerm> terms_;
    bool canonical_ = true;
};

/// Hermiticity of a single canonical term: c == conj(c) (-1)^{|x & z|}.
inline bool term_is_hermitian(const PauliTerm &t, double tol = 1e-12) {
    const cplx mirrored = std::conj(t.coeff) * static_cast<double>(parity_sign(t.x_mask, t.z_mask));
    return std::abs(t.coeff - mirrored) <= tol;
}

}  // namespace pmrsim
