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
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pmrsim/dense.hpp"
#include "pmrsim/errors.hpp"
#include "pmrsim/mask.hpp"

namespace pmrsim {

enum class GateKind { X, CNOT, MCX, H, CH, RY, CRY, ZPHASE, SHIFTL, CMP, MACRO };

inline std::string_view to_string(GateKind k) {
    switch (k) {
        case GateKind::X: return "X";
        case GateKind::CNOT: return "CNOT";
        case GateKind::MCX: return "MCX";
        case GateKind::H: return "H";
        case GateKind::CH: return "CH";
        case GateKind::RY: return "RY";
        case GateKind::CRY: return "CRY";
        case GateKind::ZPHASE: return "ZPHASE";
        case GateKind::SHIFTL: return "SHIFTL";
        case GateKind::CMP: return "CMP";
        case GateKind::MACRO: return "MACRO";
    }
    return "?";
}

/// One IR instruction. Operand use by kind:
///   X, H, RY            targets = {t}
///   CNOT, CH, CRY       controls = {c}, targets = {t}
///   MCX                 controls = {c...}, targets = {t}
///   ZPHASE              targets = parity set; applies e^{-i angle (-1)^parity}
///   SHIFTL              targets = register, low bit first; rotates every bit one place up
///   CMP                 controls = register a, targets = register b (little endian), out ^= [a <= b]
///   MACRO               name, body
struct Gate {
    GateKind kind = GateKind::X;
    double angle = 0.0;
    std::vector<int> controls;
    std::vector<int> targets;
    int out = -1;
    std::string name;
    std::shared_ptr<const std::vector<Gate>> body;
};

namespace gates {

inline Gate make(GateKind k, double a, std::vector<int> cs, std::vector<int> ts, int out = -1) {
    Gate g;
    g.kind = k;
    g.angle = a;
    g.controls = std::move(cs);
    g.targets = std::move(ts);
    g.out = out;
    return g;
}

inline Gate x(int t) { return make(GateKind::X, 0.0, {}, {t}); }
inline Gate cnot(int c, int t) { return make(GateKind::CNOT, 0.0, {c}, {t}); }
inline Gate mcx(std::vector<int> cs, int t) { return make(GateKind::MCX, 0.0, std::move(cs), {t}); }
inline Gate h(int t) { return make(GateKind::H, 0.0, {}, {t}); }
inline Gate ch(int c, int t) { return make(GateKind::CH, 0.0, {c}, {t}); }
inline Gate ry(double a, int t) { return make(GateKind::RY, a, {}, {t}); }
inline Gate cry(double a, int c, int t) { return make(GateKind::CRY, a, {c}, {t}); }
inline Gate zphase(double a, std::vector<int> qs) { return make(GateKind::ZPHASE, a, {}, std::move(qs)); }
inline Gate shiftl(std::vector<int> reg) { return make(GateKind::SHIFTL, 0.0, {}, std::move(reg)); }
inline Gate cmp(std::vector<int> a, std::vector<int> b, int out) {
    return make(GateKind::CMP, 0.0, std::move(a), std::move(b), out);
}
inline Gate macro(std::string name, std::vector<Gate> body) {
    Gate g;
    g.kind = GateKind::MACRO;
    g.name = std::move(name);
    g.body = std::make_shared<const std::vector<Gate>>(std::move(body));
    return g;
}

}  // namespace gates

struct Register {
    std::string name;
    std::vector<int> qubits;
};

struct Circuit {
    int num_qubits = 0;
    std::vector<Register> registers;
    std::vector<Gate> gates;

    void add(Gate g) { gates.push_back(std::move(g)); }

    std::vector<int> allocate(const std::string &name, int size) {
        Register r{name, {}};
        for (int i = 0; i < size; ++i) r.qubits.push_back(num_qubits++);
        registers.push_back(r);
        return r.qubits;
    }
};

/// Sink that keeps nothing but per-kind totals, macros expanded.
struct CountingSink {
    std::map<GateKind, std::uint64_t> counts;

    void add(const Gate &g) {
        if (g.kind == GateKind::MACRO) {
            for (const Gate &sub : *g.body) add(sub);
            return;
        }
        ++counts[g.kind];
    }
};

/// Sink that collects gates into a flat list.
struct ListSink {
    std::vector<Gate> gates;
    void add(Gate g) { gates.push_back(std::move(g)); }
};

/// Inverse of a gate list. SHIFTL has no inverse in the IR.
inline std::vector<Gate> inverse(const std::vector<Gate> &seq) {
    std::vector<Gate> out;
    out.reserve(seq.size());
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
        Gate g = *it;
        switch (g.kind) {
            case GateKind::RY:
            case GateKind::CRY:
            case GateKind::ZPHASE: g.angle = -g.angle; break;
            case GateKind::MACRO: g = gates::macro(g.name + "_inv", inverse(*g.body)); break;
            case GateKind::SHIFTL: fail(ErrorKind::Contract, "inverse: SHIFTL is not invertible in the IR");
            default: break;
        }
        out.push_back(std::move(g));
    }
    return out;
}

namespace detail {

inline void check_operands(const Gate &g, int n, std::size_t pos) {
    auto where = [&] { return std::string(to_string(g.kind)) + " at position " + std::to_string(pos); };
    std::set<int> seen;
    auto take = [&](int q) {
        require(q >= 0 && q < n, ErrorKind::Contract, where() + ": qubit " + std::to_string(q) + " out of range");
        require(seen.insert(q).second, ErrorKind::Contract, where() + ": qubit " + std::to_string(q) + " used twice");
    };
    for (int q : g.controls) take(q);
    for (int q : g.targets) take(q);
    if (g.kind == GateKind::CMP) {
        take(g.out);
        require(g.controls.size() == g.targets.size(), ErrorKind::Contract, where() + ": operand widths differ");
    }
}

}  // namespace detail

/// Operand ranges and control/target disjointness, macros included.
inline void validate(const std::vector<Gate> &seq, int num_qubits) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i].kind == GateKind::MACRO) {
            validate(*seq[i].body, num_qubits);
            continue;
        }
        detail::check_operands(seq[i], num_qubits, i);
    }
}

inline void validate(const Circuit &c) { validate(c.gates, c.num_qubits); }

namespace detail {

inline std::uint64_t register_value(const BitMask &state, const std::vector<int> &reg) {
    std::uint64_t v = 0;
    for (std::size_t b = 0; b < reg.size(); ++b)
        if (state.test(static_cast<std::size_t>(reg[b]))) v |= std::uint64_t{1} << b;
    return v;
}

inline bool all_set(const BitMask &state, const std::vector<int> &qs) {
    return std::all_of(qs.begin(), qs.end(), [&](int q) { return state.test(static_cast<std::size_t>(q)); });
}

inline bool parity(const BitMask &state, const std::vector<int> &qs) {
    bool p = false;
    for (int q : qs) p ^= state.test(static_cast<std::size_t>(q));
    return p;
}

/// Basis-state action of a permutation or diagonal gate; false for the rest.
inline bool apply_basis(const Gate &g, BitMask &state, std::complex<double> &phase) {
    switch (g.kind) {
        case GateKind::X: state.flip(static_cast<std::size_t>(g.targets[0])); return true;
        case GateKind::CNOT:
        case GateKind::MCX:
            if (all_set(state, g.controls)) state.flip(static_cast<std::size_t>(g.targets[0]));
            return true;
        case GateKind::ZPHASE:
            phase *= std::exp(std::complex<double>(0.0, parity(state, g.targets) ? g.angle : -g.angle));
            return true;
        case GateKind::SHIFTL: {
            const std::size_t w = g.targets.size();
            if (w == 0) return true;
            const bool top = state.test(static_cast<std::size_t>(g.targets[w - 1]));
            for (std::size_t b = w - 1; b > 0; --b) {
                const bool v = state.test(static_cast<std::size_t>(g.targets[b - 1]));
                if (v != state.test(static_cast<std::size_t>(g.targets[b]))) state.flip(static_cast<std::size_t>(g.targets[b]));
            }
            if (top != state.test(static_cast<std::size_t>(g.targets[0]))) state.flip(static_cast<std::size_t>(g.targets[0]));
            return true;
        }
        case GateKind::CMP:
            if (register_value(state, g.controls) <= register_value(state, g.targets))
                state.flip(static_cast<std::size_t>(g.out));
            return true;
        default: return false;
    }
}

inline void run_reversible_seq(const std::vector<Gate> &seq, BitMask &state, std::complex<double> &phase,
                               std::size_t &pos) {
    for (const Gate &g : seq) {
        if (g.kind == GateKind::MACRO) {
            run_reversible_seq(*g.body, state, phase, pos);
            continue;
        }
        if (!apply_basis(g, state, phase))
            fail(ErrorKind::Contract, "run_reversible: " + std::string(to_string(g.kind)) + " at gate " +
                                          std::to_string(pos) + " does not preserve basis states");
        ++pos;
    }
}

}  // namespace detail

struct BasisResult {
    BitMask state;
    std::complex<double> phase{1.0, 0.0};
};

/// Classical evaluation on a basis state: X/CNOT/MCX/SHIFTL/CMP permute, ZPHASE
/// accumulates a phase. Any other gate is rejected.
inline BasisResult run_reversible(const std::vector<Gate> &seq, const BitMask &input) {
    BasisResult r{input, {1.0, 0.0}};
    std::size_t pos = 0;
    detail::run_reversible_seq(seq, r.state, r.phase, pos);
    return r;
}

inline BasisResult run_reversible(const Circuit &c, const BitMask &input) { return run_reversible(c.gates, input); }

inline constexpr std::size_t kDefaultCircuitDenseLimit = 14;

namespace detail {

inline std::uint64_t mask_of(const std::vector<int> &qs) {
    std::uint64_t m = 0;
    for (int q : qs) m |= std::uint64_t{1} << q;
    return m;
}

inline void apply_dense_gate(const Gate &g, Matrix &m) {
    const auto rows = static_cast<std::uint64_t>(m.rows());
    switch (g.kind) {
        case GateKind::H: apply_controlled_1q(m, static_cast<unsigned>(g.targets[0]), hadamard_gate()); return;
        case GateKind::CH:
            apply_controlled_1q(m, static_cast<unsigned>(g.targets[0]), hadamard_gate(), mask_of(g.controls));
            return;
        case GateKind::RY: apply_controlled_1q(m, static_cast<unsigned>(g.targets[0]), ry_gate(g.angle)); return;
        case GateKind::CRY:
            apply_controlled_1q(m, static_cast<unsigned>(g.targets[0]), ry_gate(g.angle), mask_of(g.controls));
            return;
        case GateKind::X:
        case GateKind::CNOT:
        case GateKind::MCX: {
            const std::uint64_t t = std::uint64_t{1} << g.targets[0], c = mask_of(g.controls);
            for (std::uint64_t i = 0; i < rows; ++i)
                if (!(i & t) && (i & c) == c) m.row(static_cast<Eigen::Index>(i)).swap(m.row(static_cast<Eigen::Index>(i | t)));
            return;
        }
        case GateKind::ZPHASE: {
            const std::uint64_t pm = mask_of(g.targets);
            const std::complex<double> even = std::exp(std::complex<double>(0.0, -g.angle)), odd = std::conj(even);
            for (std::uint64_t i = 0; i < rows; ++i)
                m.row(static_cast<Eigen::Index>(i)) *= (std::popcount(i & pm) & 1) ? odd : even;
            return;
        }
        default: {
            Matrix out(m.rows(), m.cols());
            for (std::uint64_t i = 0; i < rows; ++i) {
                BitMask s(i);
                std::complex<double> ph{1.0, 0.0};
                apply_basis(g, s, ph);
                out.row(static_cast<Eigen::Index>(s.low())) = ph * m.row(static_cast<Eigen::Index>(i));
            }
            m = std::move(out);
        }
    }
}

inline void apply_dense_seq(const std::vector<Gate> &seq, Matrix &m) {
    for (const Gate &g : seq) {
        if (g.kind == GateKind::MACRO)
            apply_dense_seq(*g.body, m);
        else
            apply_dense_gate(g, m);
    }
}

}  // namespace detail

/// Applies the circuit to the columns of `states` (each a state vector).
inline Matrix apply_dense(const Circuit &c, Matrix states, std::size_t limit = kDefaultCircuitDenseLimit) {
    require_dense(static_cast<std::size_t>(c.num_qubits), limit, "apply_dense");
    require(states.rows() == (Eigen::Index{1} << c.num_qubits), ErrorKind::Dimension,
            "apply_dense: state length does not match 2^" + std::to_string(c.num_qubits));
    detail::apply_dense_seq(c.gates, states);
    return states;
}

/// Full unitary of the circuit.
inline Matrix run_dense(const Circuit &c, std::size_t limit = kDefaultCircuitDenseLimit) {
    require_dense(static_cast<std::size_t>(c.num_qubits), limit, "run_dense");
    const Eigen::Index dim = Eigen::Index{1} << c.num_qubits;
    return apply_dense(c, Matrix::Identity(dim, dim), limit);
}

struct GateCounts {
    std::map<std::string, std::uint64_t> by_kind;
    std::uint64_t total = 0;
    int qubits = 0;
    int ancillas = 0;
};

inline GateCounts to_gate_counts(const CountingSink &sink, int qubits, int system) {
    GateCounts gc;
    for (const auto &[k, v] : sink.counts) {
        gc.by_kind[std::string(to_string(k))] = v;
        gc.total += v;
    }
    gc.qubits = qubits;
    gc.ancillas = qubits - system;
    return gc;
}

/// Per-kind counts with macros expanded.
inline GateCounts gate_count(const Circuit &c, int system_qubits = 0) {
    CountingSink sink;
    for (const Gate &g : c.gates) sink.add(g);
    return to_gate_counts(sink, c.num_qubits, system_qubits);
}

namespace detail {

inline std::string join(const std::vector<int> &qs) {
    if (qs.empty()) return "-";
    std::string s;
    for (std::size_t i = 0; i < qs.size(); ++i) s += (i ? "," : "") + std::to_string(qs[i]);
    return s;
}

inline std::string fmt_angle(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", a);
    return buf;
}

inline void write_text(const std::vector<Gate> &seq, std::ostringstream &os, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const Gate &g : seq) {
        os << pad;
        switch (g.kind) {
            case GateKind::X:
            case GateKind::H: os << to_string(g.kind) << ' ' << g.targets[0]; break;
            case GateKind::CNOT:
            case GateKind::CH:
            case GateKind::MCX: os << to_string(g.kind) << ' ' << join(g.controls) << ' ' << g.targets[0]; break;
            case GateKind::RY: os << "RY " << fmt_angle(g.angle) << ' ' << g.targets[0]; break;
            case GateKind::CRY: os << "CRY " << fmt_angle(g.angle) << ' ' << g.controls[0] << ' ' << g.targets[0]; break;
            case GateKind::ZPHASE: os << "ZPHASE " << fmt_angle(g.angle) << ' ' << join(g.targets); break;
            case GateKind::SHIFTL: os << "SHIFTL " << join(g.targets); break;
            case GateKind::CMP: os << "CMP " << join(g.controls) << ' ' << join(g.targets) << ' ' << g.out; break;
            case GateKind::MACRO:
                os << "MACRO " << g.name << " {\n";
                write_text(*g.body, os, indent + 2);
                os << pad << '}';
                break;
        }
        os << '\n';
    }
}

}  // namespace detail

/// One gate per line; registers listed first as `REG name q,q,...`.
inline std::string to_text(const Circuit &c) {
    std::ostringstream os;
    os << "QUBITS " << c.num_qubits << '\n';
    for (const auto &r : c.registers) os << "REG " << r.name << ' ' << detail::join(r.qubits) << '\n';
    detail::write_text(c.gates, os, 0);
    return os.str();
}

namespace detail {

/// out ^= [a <= b] over X/CNOT/MCX only: b is turned into a ^ b in place, the
/// mutually exclusive "a > b decided at bit i" terms are XORed into out, out is
/// negated and b restored.
inline std::vector<Gate> expand_cmp(const Gate &g) {
    const auto &a = g.controls;
    const auto &b = g.targets;
    const int w = static_cast<int>(a.size());
    std::vector<Gate> out;
    for (int i = 0; i < w; ++i) out.push_back(gates::cnot(a[i], b[i]));
    for (int i = w - 1; i >= 0; --i) {
        std::vector<Gate> negate;
        for (int j = i + 1; j < w; ++j) negate.push_back(gates::x(b[j]));
        std::vector<int> cs{a[i], b[i]};
        for (int j = i + 1; j < w; ++j) cs.push_back(b[j]);
        out.insert(out.end(), negate.begin(), negate.end());
        out.push_back(gates::mcx(cs, g.out));
        out.insert(out.end(), negate.begin(), negate.end());
    }
    out.push_back(gates::x(g.out));
    for (int i = 0; i < w; ++i) out.push_back(gates::cnot(a[i], b[i]));
    return out;
}

struct QasmWriter {
    std::ostringstream body;
    int anc_needed = 0;

    static std::string q(int i) { return "q[" + std::to_string(i) + "]"; }
    static std::string a(int i) { return "anc[" + std::to_string(i) + "]"; }

    /// MCX with c > 2 controls: AND ladder into c - 2 ancillas, Toffoli onto
    /// the target, ladder undone.
    void mcx(const std::vector<int> &cs, int t) {
        if (cs.empty()) {
            body << "x " << q(t) << ";\n";
            return;
        }
        if (cs.size() == 1) {
            body << "cx " << q(cs[0]) << ',' << q(t) << ";\n";
            return;
        }
        if (cs.size() == 2) {
            body << "ccx " << q(cs[0]) << ',' << q(cs[1]) << ',' << q(t) << ";\n";
            return;
        }
        const int k = static_cast<int>(cs.size());
        anc_needed = std::max(anc_needed, k - 2);
        std::vector<std::string> ladder;
        ladder.push_back("ccx " + q(cs[0]) + ',' + q(cs[1]) + ',' + a(0) + ";\n");
        for (int i = 2; i < k - 1; ++i) ladder.push_back("ccx " + q(cs[i]) + ',' + a(i - 2) + ',' + a(i - 1) + ";\n");
        for (const auto &l : ladder) body << l;
        body << "ccx " << q(cs[k - 1]) << ',' << a(k - 3) << ',' << q(t) << ";\n";
        for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) body << *it;
    }

    void emit(const std::vector<Gate> &seq) {
        for (const Gate &g : seq) {
            switch (g.kind) {
                case GateKind::X: body << "x " << q(g.targets[0]) << ";\n"; break;
                case GateKind::CNOT:
                case GateKind::MCX: mcx(g.controls, g.targets[0]); break;
                case GateKind::H: body << "h " << q(g.targets[0]) << ";\n"; break;
                case GateKind::CH: body << "ch " << q(g.controls[0]) << ',' << q(g.targets[0]) << ";\n"; break;
                case GateKind::RY: body << "ry(" << fmt_angle(g.angle) << ") " << q(g.targets[0]) << ";\n"; break;
                case GateKind::CRY:
                    body << "cu3(" << fmt_angle(g.angle) << ",0,0) " << q(g.controls[0]) << ',' << q(g.targets[0])
                         << ";\n";
                    break;
                case GateKind::ZPHASE: {
                    if (g.targets.empty()) {
                        body << "// global phase " << fmt_angle(-g.angle) << "\n";
                        break;
                    }
                    const int last = g.targets.back();
                    for (std::size_t i = 0; i + 1 < g.targets.size(); ++i)
                        body << "cx " << q(g.targets[i]) << ',' << q(last) << ";\n";
                    body << "rz(" << fmt_angle(2.0 * g.angle) << ") " << q(last) << ";\n";
                    for (std::size_t i = g.targets.size() - 1; i-- > 0;)
                        body << "cx " << q(g.targets[i]) << ',' << q(last) << ";\n";
                    break;
                }
                case GateKind::SHIFTL:
                    if (g.targets.empty()) break;
                    for (std::size_t j = g.targets.size() - 1; j >= 1; --j) {
                        const std::string x = q(g.targets[j]), y = q(g.targets[j - 1]);
                        body << "cx " << x << ',' << y << ";\ncx " << y << ',' << x << ";\ncx " << x << ',' << y << ";\n";
                    }
                    break;
                case GateKind::CMP: emit(expand_cmp(g)); break;
                case GateKind::MACRO: emit(*g.body); break;
            }
        }
    }
};

}  // namespace detail

/// OpenQASM 2 with macros and comparators expanded. Multi-controlled X with
/// more than two controls uses a Toffoli ladder over the `anc` register, which
/// is returned to |0>.
inline std::string to_qasm(const Circuit &c) {
    detail::QasmWriter w;
    w.emit(c.gates);
    std::ostringstream os;
    os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    os << "qreg q[" << std::max(1, c.num_qubits) << "];\n";
    if (w.anc_needed > 0) os << "qreg anc[" << w.anc_needed << "];\n";
    os << w.body.str();
    return os.str();
}

}  // namespace pmrsim
