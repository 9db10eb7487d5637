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
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "pmrsim/alpha.hpp"
#include "pmrsim/circuit.hpp"
#include "pmrsim/errors.hpp"
#include "pmrsim/lcu.hpp"
#include "pmrsim/pauli.hpp"
#include "pmrsim/pmr.hpp"

namespace pmrsim {

/// How the select circuit obtains alpha_s.
///   Lookup        one multi-controlled flag per (q, k_1..k_q); exponential, dense-test scale only
///   BinarySearch  Sigma counters and two monotone bitwise searches for l_min, l_max
///   Membership    all K block-membership bits b_{s,l} and occupations j_l
enum class AlphaMode { Lookup, BinarySearch, Membership };

/// How 1/(w+1) reaches the rotation angles.
///   Exact   one flag per possible value of w
///   Binary  w -> round(2^B / (w+1)) written into a B+1 bit register, one rotation per bit
enum class ReciprocalMode { Exact, Binary };

struct CompileOptions {
    AlphaMode alpha = AlphaMode::BinarySearch;
    ReciprocalMode reciprocal = ReciprocalMode::Exact;
    int reciprocal_bits = 0;  ///< B; 0 selects kappa + 4
};

inline int register_width(int max_value) { return max_value <= 0 ? 1 : static_cast<int>(std::bit_width(static_cast<unsigned>(max_value))); }

/// Qubit assignment for compiled LCU circuits. The first core.total() qubits
/// coincide with LcuLayout; workspace follows.
struct CircuitLayout {
    LcuLayout core;
    int K = 1;
    int width = 1;  ///< bits of a Sigma / count register, holds 0..Q
    int recip_bits = 0;
    CompileOptions options;
    Circuit skeleton;  ///< registers and qubit count, no gates

    std::vector<int> counter;
    int parity = -1;
    int flag = -1;
    int cmpflag = -1;
    int e1 = -1, e2 = -1;
    std::vector<int> sreg;

    // BinarySearch
    std::vector<int> xreg, yreg, sig, w1, w2, rec1, rec2, dec1, dec2, gx, gy;
    int g = -1, gu = -1;

    // Membership
    std::vector<int> lreg;
    std::vector<std::vector<int>> msig, mj, mdec;
    std::vector<int> mf1, mf2, mb;

    std::vector<int> kreg(int s) const {
        std::vector<int> r;
        for (int b = 0; b < core.kappa; ++b) r.push_back(core.kbit(s, b));
        return r;
    }
    int num_qubits() const { return skeleton.num_qubits; }
};

inline CircuitLayout make_layout(const PmrHamiltonian &h, const SimParams &p, const CompileOptions &opt = {}) {
    CircuitLayout L;
    L.core = lcu_layout(h, p);
    L.K = p.K;
    L.options = opt;
    L.width = register_width(p.Q);
    L.recip_bits = opt.reciprocal_bits > 0 ? opt.reciprocal_bits : p.kappa + 4;
    Circuit &c = L.skeleton;
    const int Q = p.Q, M = L.core.M, kappa = p.kappa;
    c.allocate("system", L.core.n);
    c.allocate("u", Q);
    for (int s = 1; s <= Q; ++s) c.allocate("i" + std::to_string(s), M);
    for (int s = 1; s <= Q; ++s) c.allocate("k" + std::to_string(s), kappa);
    if (L.core.branch) c.allocate("branch", Q);
    L.counter = c.allocate("counter", Q);
    L.parity = c.allocate("parity", 1)[0];
    switch (opt.alpha) {
        case AlphaMode::Lookup: L.flag = c.allocate("flag", 1)[0]; break;
        case AlphaMode::BinarySearch: {
            L.sreg = c.allocate("s", L.width);
            L.xreg = c.allocate("lmax_m1", kappa);
            L.yreg = c.allocate("lmin", kappa);
            L.sig = c.allocate("sigma", L.width);
            L.w1 = c.allocate("w_first", L.width);
            L.w2 = c.allocate("w_last", L.width);
            L.cmpflag = c.allocate("cmp", 1)[0];
            L.e1 = c.allocate("eq_a", 1)[0];
            L.e2 = c.allocate("eq_b", 1)[0];
            L.g = c.allocate("gt", 1)[0];
            L.gu = c.allocate("gt_active", 1)[0];
            if (opt.reciprocal == ReciprocalMode::Exact) {
                L.dec1 = c.allocate("dec_first", Q + 1);
                L.dec2 = c.allocate("dec_last", Q + 1);
            } else {
                L.rec1 = c.allocate("rec_first", L.recip_bits + 1);
                L.rec2 = c.allocate("rec_last", L.recip_bits + 1);
            }
            L.gx = c.allocate("gt_lmax", kappa);
            L.gy = c.allocate("gt_lmin", kappa);
            break;
        }
        case AlphaMode::Membership: {
            L.sreg = c.allocate("s", L.width);
            L.lreg = c.allocate("l", kappa);
            L.cmpflag = c.allocate("cmp", 1)[0];
            L.e1 = c.allocate("eq", 1)[0];
            for (int l = 0; l <= p.K; ++l) L.msig.push_back(c.allocate("sigma" + std::to_string(l), L.width));
            L.mf1 = c.allocate("lower", p.K);
            L.mf2 = c.allocate("upper", p.K);
            L.mb = c.allocate("member", p.K);
            for (int l = 1; l <= p.K; ++l) L.mj.push_back(c.allocate("occ" + std::to_string(l), L.width));
            for (int l = 1; l <= p.K; ++l) L.mdec.push_back(c.allocate("dec" + std::to_string(l), Q + 1));
            break;
        }
    }
    return L;
}

namespace detail {

using GateList = std::vector<Gate>;

/// X, CNOT or MCX by control count.
inline Gate controlled_x(std::vector<int> cs, int t) {
    if (cs.empty()) return gates::x(t);
    if (cs.size() == 1) return gates::cnot(cs[0], t);
    return gates::mcx(std::move(cs), t);
}

inline void load_constant(GateList &out, const std::vector<int> &reg, std::uint64_t v) {
    for (std::size_t b = 0; b < reg.size(); ++b)
        if ((v >> b) & 1) out.push_back(gates::x(reg[b]));
}

/// target ^= [reg == v] AND extra.
inline void match_into(GateList &out, const std::vector<int> &reg, std::uint64_t v, const std::vector<int> &extra,
                       int target) {
    GateList neg;
    for (std::size_t b = 0; b < reg.size(); ++b)
        if (!((v >> b) & 1)) neg.push_back(gates::x(reg[b]));
    std::vector<int> cs = reg;
    cs.insert(cs.end(), extra.begin(), extra.end());
    out.insert(out.end(), neg.begin(), neg.end());
    out.push_back(controlled_x(std::move(cs), target));
    out.insert(out.end(), neg.begin(), neg.end());
}

/// reg += 1 (mod 2^w) when every control is set; MCX cascade from the top bit.
inline void increment(GateList &out, const std::vector<int> &reg, const std::vector<int> &ctrls) {
    for (int b = static_cast<int>(reg.size()) - 1; b >= 0; --b) {
        std::vector<int> cs = ctrls;
        for (int j = 0; j < b; ++j) cs.push_back(reg[j]);
        out.push_back(controlled_x(std::move(cs), reg[b]));
    }
}

inline void append(GateList &out, const GateList &more) { out.insert(out.end(), more.begin(), more.end()); }

/// sig += #{m <= Q : u_m set and k_m - 1 <= l}, one comparator-increment pass
/// per register; strict counts k_m - 1 < l, so that l = x yields Sigma_x.
inline GateList sigma_passes(const CircuitLayout &L, const std::vector<int> &l, const std::vector<int> &sig,
                             bool strict = false) {
    GateList out;
    for (int m = 1; m <= L.core.Q; ++m) {
        GateList test;
        if (strict) {
            test.push_back(gates::cmp(l, L.kreg(m), L.cmpflag));
            test.push_back(gates::x(L.cmpflag));
        } else {
            test.push_back(gates::cmp(L.kreg(m), l, L.cmpflag));
        }
        append(out, test);
        increment(out, sig, {L.core.u(m), L.cmpflag});
        append(out, inverse(test));
    }
    return out;
}

/// Bitwise search, most significant bit first: result = largest x in [0, K-1]
/// with Sigma_x <= T. Requires Sigma_0 = 0 <= T.
inline void bitwise_search(GateList &out, const CircuitLayout &L, int T, const std::vector<int> &result) {
    load_constant(out, L.sreg, static_cast<std::uint64_t>(T));
    for (int j = static_cast<int>(result.size()) - 1; j >= 0; --j) {
        out.push_back(gates::x(result[j]));
        const GateList eval = sigma_passes(L, result, L.sig, true);
        append(out, eval);
        out.push_back(gates::cmp(L.sig, L.sreg, L.g));
        append(out, inverse(eval));
        out.push_back(gates::cnot(L.g, result[j]));
        out.push_back(gates::x(result[j]));
        out.push_back(gates::cnot(result[j], L.g));
    }
    load_constant(out, L.sreg, static_cast<std::uint64_t>(T));
}

/// count += #{m : u_m set and k_m - 1 == l}.
inline void equality_count(GateList &out, const CircuitLayout &L, const std::vector<int> &l,
                           const std::vector<int> &count) {
    for (int m = 1; m <= L.core.Q; ++m) {
        out.push_back(gates::cmp(L.kreg(m), l, L.e1));
        out.push_back(gates::cmp(l, L.kreg(m), L.e2));
        increment(out, count, {L.core.u(m), L.e1, L.e2});
        out.push_back(gates::cmp(l, L.kreg(m), L.e2));
        out.push_back(gates::cmp(L.kreg(m), l, L.e1));
    }
}

inline std::uint64_t reciprocal_code(int v, int bits) {
    return static_cast<std::uint64_t>(std::llround(std::ldexp(1.0, bits) / (v + 1)));
}

/// Reciprocal of a count register routed to rotation flags.
inline void reciprocal_flags(GateList &out, const CircuitLayout &L, const std::vector<int> &count, int ctrl,
                             const std::vector<int> &dec, const std::vector<int> &rec,
                             std::vector<std::pair<int, double>> &flags) {
    std::vector<int> extra;
    if (ctrl >= 0) extra.push_back(ctrl);
    if (L.options.reciprocal == ReciprocalMode::Exact) {
        for (int v = 0; v <= L.core.Q; ++v) {
            match_into(out, count, static_cast<std::uint64_t>(v), extra, dec[v]);
            flags.emplace_back(dec[v], 1.0 / (v + 1));
        }
        return;
    }
    const int B = L.recip_bits;
    for (int v = 0; v <= L.core.Q; ++v) {
        const std::uint64_t code = reciprocal_code(v, B);
        for (int b = 0; b <= B; ++b)
            if ((code >> b) & 1) match_into(out, count, static_cast<std::uint64_t>(v), extra, rec[b]);
    }
    for (int b = 0; b <= B; ++b) flags.emplace_back(rec[b], std::ldexp(1.0, b - B));
}

}  // namespace detail

/// Reversible computation feeding the alpha_s rotations of block s, plus the
/// (flag qubit, weight) pairs whose weighted sum is alpha_s on valid inputs.
/// Flags of blocks s >= 1 are additionally gated by u_s.
struct AlphaUnit {
    std::vector<Gate> compute;
    std::vector<std::pair<int, double>> flags;
};

inline AlphaUnit compile_alpha_unit(const CircuitLayout &L, int s) {
    require(s >= 0 && s <= L.core.Q, ErrorKind::Contract, "compile_alpha_unit: block index out of range");
    require(L.options.alpha != AlphaMode::Lookup, ErrorKind::Contract,
            "compile_alpha_unit: the lookup mode has no arithmetic unit");
    AlphaUnit a;
    auto &out = a.compute;
    const int active = s >= 1 ? L.core.u(s) : -1;
    if (L.options.alpha == AlphaMode::BinarySearch) {
        if (s >= 1) detail::bitwise_search(out, L, s - 1, L.yreg);
        detail::bitwise_search(out, L, s, L.xreg);
        detail::equality_count(out, L, L.yreg, L.w1);
        detail::equality_count(out, L, L.xreg, L.w2);
        out.push_back(gates::cmp(L.xreg, L.yreg, L.g));
        out.push_back(gates::x(L.g));
        out.push_back(active >= 0 ? gates::mcx({L.g, active}, L.gu) : gates::cnot(L.g, L.gu));
        detail::reciprocal_flags(out, L, L.w1, active, L.dec1, L.rec1, a.flags);
        detail::reciprocal_flags(out, L, L.w2, L.gu, L.dec2, L.rec2, a.flags);
        for (int b = 0; b < L.core.kappa; ++b) {
            out.push_back(gates::mcx({L.gu, L.xreg[b]}, L.gx[b]));
            out.push_back(gates::mcx({L.gu, L.yreg[b]}, L.gy[b]));
            a.flags.emplace_back(L.gx[b], std::ldexp(1.0, b));
            a.flags.emplace_back(L.gy[b], -std::ldexp(1.0, b));
        }
        a.flags.emplace_back(L.gu, -1.0);
        return a;
    }
    // Membership: b_l = [Sigma_{l-1} <= s <= Sigma_l], weight 1/(j_l + 1).
    for (int l = 1; l <= L.K; ++l) {
        detail::load_constant(out, L.lreg, static_cast<std::uint64_t>(l - 1));
        detail::append(out, detail::sigma_passes(L, L.lreg, L.msig[l]));
        detail::load_constant(out, L.lreg, static_cast<std::uint64_t>(l - 1));
    }
    detail::load_constant(out, L.sreg, static_cast<std::uint64_t>(s));
    for (int l = 1; l <= L.K; ++l) {
        out.push_back(gates::cmp(L.msig[l - 1], L.sreg, L.mf1[l - 1]));
        out.push_back(gates::cmp(L.sreg, L.msig[l], L.mf2[l - 1]));
        std::vector<int> cs{L.mf1[l - 1], L.mf2[l - 1]};
        if (active >= 0) cs.push_back(active);
        out.push_back(detail::controlled_x(cs, L.mb[l - 1]));
        for (int m = 1; m <= L.core.Q; ++m) {
            detail::match_into(out, L.kreg(m), static_cast<std::uint64_t>(l - 1), {L.core.u(m)}, L.e1);
            detail::increment(out, L.mj[l - 1], {L.e1});
            detail::match_into(out, L.kreg(m), static_cast<std::uint64_t>(l - 1), {L.core.u(m)}, L.e1);
        }
        for (int v = 0; v <= L.core.Q; ++v) {
            detail::match_into(out, L.mj[l - 1], static_cast<std::uint64_t>(v), {L.mb[l - 1]}, L.mdec[l - 1][v]);
            a.flags.emplace_back(L.mdec[l - 1][v], 1.0 / (v + 1));
        }
    }
    return a;
}

/// Circuit view of the alpha unit for block s (compute only).
inline Circuit compile_alpha_unit_circuit(const CircuitLayout &L, int s) {
    Circuit c = L.skeleton;
    c.add(gates::macro("alpha_" + std::to_string(s), compile_alpha_unit(L, s).compute));
    return c;
}

/// e^{-i angle J (-1)^{parity(z & mask)}} with m CNOTs into `ancilla`, one
/// ZPHASE on the ancilla and m uncomputing CNOTs.
inline Circuit compile_diag_phase(int n, const BitMask &z_mask, double J, double angle) {
    require(z_mask.any(), ErrorKind::Contract, "compile_diag_phase: empty Z mask");
    require(z_mask.fits(static_cast<std::size_t>(n)), ErrorKind::Contract, "compile_diag_phase: mask exceeds n qubits");
    Circuit c;
    c.allocate("system", n);
    const int anc = c.allocate("parity", 1)[0];
    std::vector<Gate> body;
    for (int q = 0; q < n; ++q)
        if (z_mask.test(static_cast<std::size_t>(q))) body.push_back(gates::cnot(q, anc));
    const std::size_t m = body.size();
    body.push_back(gates::zphase(angle * J, {anc}));
    for (std::size_t i = m; i-- > 0;) body.push_back(body[i]);
    c.add(gates::macro("diag_phase", std::move(body)));
    return c;
}

namespace detail {

/// Sum over flags f of e^{-i delta w_f J_k (-1)^{parity_k}} controlled on f, every D_0 term k.
inline GateList phase_stage(const CircuitLayout &L, const PmrHamiltonian &h, double delta,
                            const std::vector<std::pair<int, double>> &flags) {
    GateList out;
    for (const auto &term : h.d0.terms()) {
        const double J = term.coeff.real();
        if (J == 0.0) continue;
        GateList parity;
        for (int q = 0; q < L.core.n; ++q)
            if (term.z_mask.test(static_cast<std::size_t>(q))) parity.push_back(gates::cnot(q, L.parity));
        append(out, parity);
        std::vector<int> base;
        if (!parity.empty()) base.push_back(L.parity);
        double common = 0.0;
        for (const auto &[f, w] : flags) common += delta * w * J / 2.0;
        out.push_back(gates::zphase(common, base));
        for (const auto &[f, w] : flags) {
            std::vector<int> qs = base;
            qs.push_back(f);
            out.push_back(gates::zphase(-delta * w * J / 2.0, qs));
        }
        append(out, inverse(parity));
    }
    return out;
}

/// Walsh coefficients of f over the support bits: f(z) = Sum_W c_W (-1)^{|W & z|}.
inline std::vector<double> walsh(std::vector<double> f) {
    const std::size_t n = f.size();
    for (std::size_t len = 1; len < n; len <<= 1)
        for (std::size_t i = 0; i < n; i += 2 * len)
            for (std::size_t j = i; j < i + len; ++j) {
                const double a = f[j], b = f[j + len];
                f[j] = a + b;
                f[j + len] = a - b;
            }
    for (double &v : f) v /= static_cast<double>(n);
    return f;
}

/// e^{i(theta(z) +- phi(z))} of every hop term m, controlled on i-bit (s, m),
/// sign from the branch bit. d_m(z) depends on z only through the parities of
/// its T diagonal terms, so theta and phi are expanded over those T characters.
inline GateList hop_phase_stage(const CircuitLayout &L, const PmrHamiltonian &h, int s) {
    GateList out;
    for (int m = 1; m <= L.core.M; ++m) {
        const PmrTerm &term = h.terms[static_cast<std::size_t>(m - 1)];
        const int f = L.core.ibit(s, m);
        const auto &dterms = term.diag.terms();
        require(dterms.size() <= 16, ErrorKind::Budget, "hop phases: more than 16 diagonal terms in one hop");
        const std::size_t cells = std::size_t{1} << dterms.size();
        std::vector<double> theta(cells), phi(cells);
        for (std::size_t a = 0; a < cells; ++a) {
            cplx d{};
            for (std::size_t k = 0; k < dterms.size(); ++k) d += ((a >> k) & 1) ? -dterms[k].coeff : dterms[k].coeff;
            // Parity patterns that no z realizes may exceed gamma; their values are never used.
            const double mod = std::min(1.0, std::abs(d) / term.gamma);
            theta[a] = mod == 0.0 ? 0.0 : std::arg(d);
            phi[a] = std::acos(mod);
        }
        const auto ct = walsh(theta), cp = walsh(phi);
        std::map<BitMask, std::pair<double, double>> by_mask;
        for (std::size_t w = 0; w < cells; ++w) {
            BitMask mask;
            for (std::size_t k = 0; k < dterms.size(); ++k)
                if ((w >> k) & 1) mask ^= dterms[k].z_mask;
            by_mask[mask].first += ct[w];
            by_mask[mask].second += cp[w];
        }
        for (const auto &[mask, c] : by_mask) {
            std::vector<int> qs;
            for (int q = 0; q < L.core.n; ++q)
                if (mask.test(static_cast<std::size_t>(q))) qs.push_back(q);
            if (std::abs(c.first) > 1e-15) {
                out.push_back(gates::zphase(-c.first / 2.0, qs));
                std::vector<int> qf = qs;
                qf.push_back(f);
                out.push_back(gates::zphase(c.first / 2.0, qf));
            }
            if (std::abs(c.second) > 1e-15) {
                require(L.core.branch, ErrorKind::Contract, "hop phases: z-dependent modulus without branch register");
                std::vector<int> qb = qs;
                qb.push_back(L.core.bbit(s));
                out.push_back(gates::zphase(-c.second / 2.0, qb));
                qb.push_back(f);
                out.push_back(gates::zphase(c.second / 2.0, qb));
            }
        }
    }
    return out;
}

template <class Sink>
void emit_alpha_block(Sink &sink, const CircuitLayout &L, const PmrHamiltonian &h, double dt, int s) {
    const double delta = dt / L.K;
    const std::string tag = std::to_string(s);
    // Every alpha phase multiplies a D_0 coefficient, so an empty D_0 needs no block.
    if (std::none_of(h.d0.terms().begin(), h.d0.terms().end(), [](const auto &t) { return t.coeff.real() != 0.0; }))
        return;
    if (L.options.alpha != AlphaMode::Lookup) {
        const AlphaUnit unit = compile_alpha_unit(L, s);
        sink.add(gates::macro("alpha_" + tag, unit.compute));
        sink.add(gates::macro("diag_phase_" + tag, phase_stage(L, h, delta, unit.flags)));
        sink.add(gates::macro("alpha_" + tag + "_inv", inverse(unit.compute)));
        return;
    }
    GateList body;
    const int Q = L.core.Q;
    for (int q = std::max(s, 0); q <= Q; ++q) {
        if (s >= 1 && q < s) continue;
        for_each_ktuple(q, L.K, [&](const std::vector<int> &k) {
            KTuple kt{k, L.K};
            const double a = boost::rational_cast<double>(alpha_coeffs(kt).alpha[static_cast<std::size_t>(s)]);
            GateList select;
            std::vector<int> cs;
            for (int j = 1; j <= Q; ++j) {
                cs.push_back(L.core.u(j));
                if (j > q) select.push_back(gates::x(L.core.u(j)));
            }
            for (int j = 1; j <= q; ++j)
                for (int b = 0; b < L.core.kappa; ++b) {
                    cs.push_back(L.core.kbit(j, b));
                    if (!(((k[j - 1] - 1) >> b) & 1)) select.push_back(gates::x(L.core.kbit(j, b)));
                }
            GateList mark = select;
            mark.push_back(controlled_x(cs, L.flag));
            append(mark, select);
            append(body, mark);
            append(body, phase_stage(L, h, delta, {{L.flag, a}}));
            append(body, mark);
        });
    }
    sink.add(gates::macro("alpha_lookup_" + tag, std::move(body)));
}

}  // namespace detail

/// Three-stage ancilla preparation: unary RY ladder, per-order thermometer
/// ladders converted to one-hot, controlled Hadamards on k (and branch) bits.
template <class Sink>
void emit_state_prep(Sink &sink, const CircuitLayout &L, const SimParams &p, const std::vector<double> &gammas) {
    const LcuLayout &c = L.core;
    const PrepAngles a = prep_angles(p, gammas);
    std::vector<Gate> unary, onehot, uniform;
    for (int j = 1; j <= c.Q; ++j)
        unary.push_back(j == 1 ? gates::ry(a.unary[0], c.u(1)) : gates::cry(a.unary[j - 1], c.u(j - 1), c.u(j)));
    for (int s = 1; s <= c.Q; ++s) {
        onehot.push_back(gates::cnot(c.u(s), c.ibit(s, 1)));
        for (int m = 2; m <= c.M; ++m) onehot.push_back(gates::cry(a.thermo[m - 1], c.ibit(s, m - 1), c.ibit(s, m)));
        for (int m = 1; m < c.M; ++m) onehot.push_back(gates::cnot(c.ibit(s, m + 1), c.ibit(s, m)));
    }
    for (int s = 1; s <= c.Q; ++s) {
        for (int b = 0; b < c.kappa; ++b) uniform.push_back(gates::ch(c.u(s), c.kbit(s, b)));
        if (c.branch) uniform.push_back(gates::ch(c.u(s), c.bbit(s)));
    }
    sink.add(gates::macro("prep_order", std::move(unary)));
    sink.add(gates::macro("prep_terms", std::move(onehot)));
    sink.add(gates::macro("prep_subdivision", std::move(uniform)));
}

/// Select unitary: the alpha_0 prefix, then Q blocks of counter-gated CNOT
/// fan-outs, hop phases, alpha_s phases, a -i on u_s and a counter shift.
template <class Sink>
void emit_select(Sink &sink, const CircuitLayout &L, const PmrHamiltonian &h, const SimParams &p) {
    const LcuLayout &c = L.core;
    sink.add(gates::x(L.counter[0]));
    detail::emit_alpha_block(sink, L, h, p.dt, 0);
    for (int s = 1; s <= c.Q; ++s) {
        std::vector<Gate> hop;
        for (int m = 1; m <= c.M; ++m) {
            const BitMask &x = h.terms[static_cast<std::size_t>(m - 1)].x_mask;
            for (int q = 0; q < c.n; ++q)
                if (x.test(static_cast<std::size_t>(q))) hop.push_back(gates::mcx({L.counter[static_cast<std::size_t>(s - 1)], c.ibit(s, m)}, q));
        }
        detail::append(hop, detail::hop_phase_stage(L, h, s));
        sink.add(gates::macro("hop_" + std::to_string(s), std::move(hop)));
        detail::emit_alpha_block(sink, L, h, p.dt, s);
        sink.add(gates::zphase(std::numbers::pi / 4, {}));
        sink.add(gates::zphase(-std::numbers::pi / 4, {c.u(s)}));
        sink.add(gates::shiftl(L.counter));
    }
    sink.add(gates::x(L.counter[0]));
}

inline std::vector<double> term_gammas(const PmrHamiltonian &h) {
    std::vector<double> g;
    for (const auto &t : h.terms) g.push_back(t.gamma);
    return g;
}

inline Circuit compile_state_prep(const CircuitLayout &L, const SimParams &p, const std::vector<double> &gammas) {
    Circuit c = L.skeleton;
    emit_state_prep(c, L, p, gammas);
    return c;
}

inline Circuit compile_select(const CircuitLayout &L, const PmrHamiltonian &h, const SimParams &p) {
    Circuit c = L.skeleton;
    emit_select(c, L, h, p);
    return c;
}

/// One LCU execution W = B^dagger . select . B.
template <class Sink>
void emit_lcu_step(Sink &sink, const CircuitLayout &L, const PmrHamiltonian &h, const SimParams &p) {
    ListSink prep;
    emit_state_prep(prep, L, p, term_gammas(h));
    for (const Gate &g : prep.gates) sink.add(g);
    emit_select(sink, L, h, p);
    for (const Gate &g : inverse(prep.gates)) sink.add(g);
}

inline Circuit compile_lcu_step(const CircuitLayout &L, const PmrHamiltonian &h, const SimParams &p) {
    Circuit c = L.skeleton;
    emit_lcu_step(c, L, h, p);
    return c;
}

/// Gate totals of one LCU execution without materializing the circuit.
inline GateCounts count_lcu_step(const PmrHamiltonian &h, const SimParams &p, const CompileOptions &opt = {}) {
    const CircuitLayout L = make_layout(h, p, opt);
    CountingSink sink;
    emit_lcu_step(sink, L, h, p);
    return to_gate_counts(sink, L.num_qubits(), L.core.n);
}

/// SimParams with explicit (Q, kappa) at step dt, for compiling fixed shapes.
inline SimParams fixed_params(const PmrHamiltonian &h, double dt, int Q, int kappa) {
    SimParams p;
    p.gamma = h.gamma_total;
    p.delta_e = h.delta_e;
    p.M = static_cast<int>(h.num_terms());
    p.r = 1;
    p.t = dt;
    p.dt = dt;
    p.Q = Q;
    p.kappa = kappa;
    p.K = 1 << kappa;
    p.mu = p.gamma > 0 ? p.delta_e / p.gamma : 0.0;
    p.s = series_partial(p.gamma * dt, Q);
    p.tail = series_tail(p.gamma * dt, Q);
    p.z_dependent = h.z_dependent();
    return p;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Ordinary least squares y ~ slope x + intercept.
inline LinearFit fit_linear(const std::vector<double> &x, const std::vector<double> &y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::Contract, "fit_linear: need at least two paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    require(sxx > 0.0, ErrorKind::Contract, "fit_linear: x values are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
    return f;
}

/// M single-qubit X hops on M qubits with D_0 = 0.3 Z_0 + 0.2 Z_0 Z_1.
inline PmrHamiltonian gate_law_instance(int M) {
    require(M >= 2, ErrorKind::Contract, "gate_law_instance: M must be at least 2");
    PauliHamiltonian ph(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) ph.add(PauliTerm{0.5, BitMask::single(static_cast<std::size_t>(m)), BitMask{}});
    ph.add(PauliTerm{0.3, BitMask{}, BitMask::single(0)});
    ph.add(PauliTerm{0.2, BitMask{}, BitMask(0b11)});
    ph.canonicalize();
    return pmr_decompose(ph);
}

struct GateLawPoint {
    int Q = 0;
    int M = 0;
    int kappa = 0;
    double x = 0.0;  ///< Q (M + kappa)
    std::uint64_t total = 0;
};

struct GateLaw {
    std::vector<GateLawPoint> points;
    LinearFit fit;
};

/// Per-step gate totals over the (Q, M, kappa) grid, fitted against Q (M + kappa).
inline GateLaw gate_law(const std::vector<int> &Qs, const std::vector<int> &Ms, const std::vector<int> &kappas,
                        const CompileOptions &opt = {}) {
    GateLaw law;
    std::vector<double> xs, ys;
    for (int M : Ms) {
        const PmrHamiltonian h = gate_law_instance(M);
        for (int Q : Qs)
            for (int kappa : kappas) {
                const SimParams p = fixed_params(h, 0.1, Q, kappa);
                const GateCounts gc = count_lcu_step(h, p, opt);
                GateLawPoint pt{Q, M, kappa, static_cast<double>(Q) * (M + kappa), gc.total};
                law.points.push_back(pt);
                xs.push_back(pt.x);
                ys.push_back(static_cast<double>(pt.total));
            }
    }
    law.fit = fit_linear(xs, ys);
    return law;
}

}  // namespace pmrsim
