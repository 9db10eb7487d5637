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
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pmrsim/dense.hpp"
#include "pmrsim/errors.hpp"
#include "pmrsim/mask.hpp"
#include "pmrsim/pauli.hpp"

namespace pmrsim {

inline constexpr std::size_t kDefaultEnumerationLimit = 20;

struct DiagTerm {
    BitMask z_mask;
    cplx coeff{};
};

/// Sum_k coeff_k Z^{z_mask_k}; value at basis state z is
/// Sum_k coeff_k (-1)^{|z_mask_k & z|}.
class DiagonalOperator {
   public:
    DiagonalOperator() = default;
    explicit DiagonalOperator(std::size_t n) : n_(n) {}
    DiagonalOperator(std::size_t n, std::vector<DiagTerm> terms) : n_(n), terms_(std::move(terms)) {}

    static DiagonalOperator constant(std::size_t n, cplx c) { return DiagonalOperator(n, {{BitMask{}, c}}); }

    std::size_t n_qubits() const { return n_; }
    const std::vector<DiagTerm> &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add(const BitMask &z_mask, cplx c) { terms_.push_back({z_mask, c}); }

    cplx evaluate(std::uint64_t z) const {
        cplx v{};
        for (const auto &t : terms_) v += t.coeff * static_cast<double>(parity_sign(t.z_mask.low(), z));
        return v;
    }
    cplx evaluate(const BitMask &z) const {
        cplx v{};
        for (const auto &t : terms_) v += t.coeff * static_cast<double>(parity_sign(t.z_mask, z));
        return v;
    }

    /// Sum of |coeff|; an upper bound on max_z |value|.
    double coeff_l1() const {
        double s = 0.0;
        for (const auto &t : terms_) s += std::abs(t.coeff);
        return s;
    }

    /// True when every non-identity coefficient is below tol.
    bool is_constant(double tol = 1e-12) const {
        return std::all_of(terms_.begin(), terms_.end(),
                           [tol](const DiagTerm &t) { return t.z_mask.none() || std::abs(t.coeff) <= tol; });
    }

    BitMask support() const {
        BitMask s;
        for (const auto &t : terms_) s |= t.z_mask;
        return s;
    }

   private:
    std::size_t n_ = 0;
    std::vector<DiagTerm> terms_;
};

/// One off-diagonal PMR term D_i P_i.
struct PmrTerm {
    BitMask x_mask;
    DiagonalOperator diag;
    double gamma = 0.0;
};

/// H = D_0 + Sum_i D_i P_i with P_i = X^{x_mask_i}.
struct PmrHamiltonian {
    std::size_t n = 0;
    DiagonalOperator d0;
    std::vector<PmrTerm> terms;
    double gamma_total = 0.0;
    double delta_e = 0.0;
    bool gamma_exact = true;
    bool delta_e_exact = true;

    std::size_t num_terms() const { return terms.size(); }

    bool z_dependent(double tol = 1e-12) const {
        return std::any_of(terms.begin(), terms.end(), [tol](const PmrTerm &t) { return !t.diag.is_constant(tol); });
    }
};

struct DecomposeOptions {
    std::size_t dense_limit = kDefaultDenseLimit;
    std::size_t enumeration_limit = kDefaultEnumerationLimit;
    double prune_tol = 1e-14;
    double hermitian_tol = 1e-12;
};

struct GammaNorms {
    std::vector<double> gammas;
    double total = 0.0;
    bool exact = true;  ///< false: gammas are coefficient-sum upper bounds
};

struct DeltaE {
    double value = 0.0;
    bool exact = true;  ///< false: analytic upper bound
};

/// E_z = <z|D_0|z>. D_0 is real by construction, so the imaginary part is dropped.
inline double diag_energy(const DiagonalOperator &d0, std::uint64_t z) { return d0.evaluate(z).real(); }
inline double diag_energy(const DiagonalOperator &d0, const BitMask &z) { return d0.evaluate(z).real(); }

namespace detail {

inline double exact_max_modulus(const DiagonalOperator &d, std::size_t n) {
    double g = 0.0;
    const std::uint64_t dim = std::uint64_t{1} << n;
    for (std::uint64_t z = 0; z < dim; ++z) g = std::max(g, std::abs(d.evaluate(z)));
    return g;
}

}  // namespace detail

/// Gamma_i = max_z |d_i(z)|, exact by enumeration for n <= limit, else the
/// coefficient l1 bound (flagged).
inline GammaNorms gamma_norms(const PmrHamiltonian &h, std::size_t enumeration_limit = kDefaultEnumerationLimit) {
    GammaNorms out;
    out.exact = h.n <= enumeration_limit;
    for (const auto &t : h.terms) {
        double g;
        if (t.diag.is_constant(0.0)) {
            g = std::abs(t.diag.evaluate(std::uint64_t{0}));
        } else {
            g = out.exact ? detail::exact_max_modulus(t.diag, h.n) : t.diag.coeff_l1();
        }
        out.gammas.push_back(g);
    }
    for (double g : out.gammas) out.total += g;
    return out;
}

/// Analytic bound max_i 2 Sum_{k : |z_k & x_i| odd} |J_k|.
inline double delta_e_bound(const PmrHamiltonian &h) {
    double best = 0.0;
    for (const auto &t : h.terms) {
        double s = 0.0;
        for (const auto &dt : h.d0.terms())
            if ((dt.z_mask & t.x_mask).parity()) s += 2.0 * std::abs(dt.coeff.real());
        best = std::max(best, s);
    }
    return best;
}

/// Delta E = max over z and i of |E(z ^ x_i) - E(z)|.
inline DeltaE compute_delta_e(const PmrHamiltonian &h, std::size_t enumeration_limit = kDefaultEnumerationLimit) {
    if (h.d0.empty() || h.terms.empty()) return {0.0, true};
    if (h.n > enumeration_limit) return {delta_e_bound(h), false};
    const std::uint64_t dim = std::uint64_t{1} << h.n;
    std::vector<double> energy(dim);
    for (std::uint64_t z = 0; z < dim; ++z) energy[z] = diag_energy(h.d0, z);
    double best = 0.0;
    for (const auto &t : h.terms) {
        const std::uint64_t x = t.x_mask.low();
        for (std::uint64_t z = 0; z < dim; ++z) best = std::max(best, std::abs(energy[z ^ x] - energy[z]));
    }
    return {best, true};
}

/// (theta, phi) with d(z)/gamma = (e^{i(theta+phi)} + e^{i(theta-phi)}) / 2.
inline std::pair<double, double> hop_phases(const PmrTerm &term, std::uint64_t z) {
    require(term.gamma > 0.0, ErrorKind::Contract, "hop_phases: term with gamma = 0 must be pruned");
    const cplx ratio = term.diag.evaluate(z) / term.gamma;
    const double mod = std::abs(ratio);
    require(mod <= 1.0 + 1e-12, ErrorKind::Contract, "hop_phases: |d(z)| exceeds gamma");
    const double theta = mod == 0.0 ? 0.0 : std::arg(ratio);
    return {theta, std::acos(std::min(1.0, mod))};
}

namespace detail {

inline std::string describe(const PauliTerm &t, std::size_t n) {
    auto [label, w] = t.to_label(n);
    std::ostringstream os;
    os << label << " (" << w.real() << (w.imag() < 0 ? "-" : "+") << std::abs(w.imag()) << "i)";
    return os.str();
}

/// Entry-level check over all z that the group sum_k c_k X^x Z^k is Hermitian:
/// d(z ^ x) == conj(d(z)) where d is the diagonal on the left of X^x.
inline void validate_hermitian_dense(const std::vector<PauliTerm> &group, const DiagonalOperator &d, const BitMask &x,
                                     std::size_t n, double tol) {
    const std::uint64_t dim = std::uint64_t{1} << n;
    for (std::uint64_t z = 0; z < dim; ++z) {
        const cplx a = d.evaluate(z), b = d.evaluate(z ^ x.low());
        if (std::abs(a - std::conj(b)) > tol) {
            // Locate a witness term whose partner is missing or mismatched.
            for (const auto &t : group) {
                if (!term_is_hermitian(t, tol)) {
                    PauliTerm partner = t;
                    partner.coeff = std::conj(t.coeff) * static_cast<double>(parity_sign(t.x_mask, t.z_mask));
                    fail(ErrorKind::NonHermitian, "non-Hermitian input: term " + describe(t, n) +
                                                      " requires partner " + describe(partner, n));
                }
            }
            fail(ErrorKind::NonHermitian, "non-Hermitian input at basis state " + std::to_string(z));
        }
    }
}

}  // namespace detail

/// Groups Pauli terms by X-mask into D_0 + Sum_i D_i X^{x_i}.
inline PmrHamiltonian pmr_decompose(const PauliHamiltonian &input, const DecomposeOptions &opt = {}) {
    const PauliHamiltonian h = input.canonical(opt.prune_tol);
    const std::size_t n = h.n_qubits();

    std::map<BitMask, std::vector<PauliTerm>> groups;
    for (const auto &t : h.terms()) groups[t.x_mask].push_back(t);

    PmrHamiltonian out;
    out.n = n;
    out.d0 = DiagonalOperator(n);
    for (auto &[x, group] : groups) {
        // coeff X^x Z^k acting on |z> lands on |z^x> with weight
        // coeff (-1)^{|k & z|} = coeff (-1)^{|k & x|} (-1)^{|k & (z^x)|}.
        DiagonalOperator d(n);
        for (const auto &t : group) d.add(t.z_mask, t.coeff * static_cast<double>(parity_sign(t.z_mask, x)));

        if (n <= opt.dense_limit) {
            detail::validate_hermitian_dense(group, d, x, n, opt.hermitian_tol);
        } else {
            for (const auto &t : group) {
                if (!term_is_hermitian(t, opt.hermitian_tol)) {
                    PauliTerm partner = t;
                    partner.coeff = std::conj(t.coeff) * static_cast<double>(parity_sign(t.x_mask, t.z_mask));
                    fail(ErrorKind::NonHermitian, "non-Hermitian input: term " + detail::describe(t, n) +
                                                      " requires partner " + detail::describe(partner, n));
                }
            }
        }

        if (x.none()) {
            for (const auto &dt : d.terms()) {
                require(std::abs(dt.coeff.imag()) <= opt.hermitian_tol, ErrorKind::NonHermitian,
                        "diagonal part has a complex coefficient on Z-mask " + dt.z_mask.to_binary(n));
                out.d0.add(dt.z_mask, cplx(dt.coeff.real(), 0.0));
            }
        } else {
            out.terms.push_back({x, std::move(d), 0.0});
        }
    }

    const GammaNorms g = gamma_norms(out, opt.enumeration_limit);
    for (std::size_t i = 0; i < out.terms.size(); ++i) out.terms[i].gamma = g.gammas[i];
    out.gamma_total = g.total;
    out.gamma_exact = g.exact;
    const DeltaE de = compute_delta_e(out, opt.enumeration_limit);
    out.delta_e = de.value;
    out.delta_e_exact = de.exact;
    return out;
}

/// Recomputes Gamma_i, Gamma and Delta E in place (for hand-assembled PMR forms).
inline void refresh_norms(PmrHamiltonian &h, std::size_t enumeration_limit = kDefaultEnumerationLimit) {
    const GammaNorms g = gamma_norms(h, enumeration_limit);
    for (std::size_t i = 0; i < h.terms.size(); ++i) h.terms[i].gamma = g.gammas[i];
    h.gamma_total = g.total;
    h.gamma_exact = g.exact;
    const DeltaE de = compute_delta_e(h, enumeration_limit);
    h.delta_e = de.value;
    h.delta_e_exact = de.exact;
}

/// Dense D_0 + Sum_i D_i P_i, with P_i |z> = |z ^ x_i>.
inline Matrix pmr_reconstruct(const PmrHamiltonian &h, std::size_t dense_limit = kDefaultDenseLimit) {
    require_dense(h.n, dense_limit, "pmr_reconstruct");
    const std::uint64_t dim = std::uint64_t{1} << h.n;
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t z = 0; z < dim; ++z) m(z, z) += h.d0.evaluate(z);
    for (const auto &t : h.terms) {
        const std::uint64_t x = t.x_mask.low();
        for (std::uint64_t z = 0; z < dim; ++z) m(z ^ x, z) += t.diag.evaluate(z ^ x);
    }
    return m;
}

}  // namespace pmrsim
