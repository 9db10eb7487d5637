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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pmrsim/pmrsim.hpp"

using namespace pmrsim;

namespace {

Circuit blank(int n) {
    Circuit c;
    c.allocate("q", n);
    return c;
}

BitMask bits(std::uint64_t v) {
    BitMask m;
    for (int b = 0; b < 64; ++b)
        if ((v >> b) & 1) m.set(static_cast<std::size_t>(b));
    return m;
}

std::uint64_t value(const BitMask &m, int n) {
    std::uint64_t v = 0;
    for (int b = 0; b < n; ++b)
        if (m.test(static_cast<std::size_t>(b))) v |= std::uint64_t{1} << b;
    return v;
}

template <class F>
ErrorKind kind_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorKind::Io;
}

}  // namespace

TEST(RunReversible, CnotFlipsTarget) {
    const BasisResult r = run_reversible({gates::cnot(1, 0)}, bits(0b10));
    EXPECT_EQ(value(r.state, 2), 0b11u);
    EXPECT_EQ(r.phase, cplx(1.0));
}

TEST(RunReversible, ShiftLeftMovesUnaryBit) {
    const BasisResult r = run_reversible({gates::shiftl({0, 1, 2, 3})}, bits(0b0001));
    EXPECT_EQ(value(r.state, 4), 0b0010u);
    EXPECT_EQ(value(run_reversible({gates::shiftl({0, 1, 2, 3})}, bits(0b1000)).state, 4), 0b0001u);
}

TEST(RunReversible, ZPhaseOnParity) {
    const double th = 0.37;
    EXPECT_LT(std::abs(run_reversible({gates::zphase(th, {0, 1})}, bits(0b01)).phase - std::exp(cplx(0, th))), 1e-16);
    EXPECT_LT(std::abs(run_reversible({gates::zphase(th, {0, 1})}, bits(0b11)).phase - std::exp(cplx(0, -th))), 1e-16);
    EXPECT_LT(std::abs(run_reversible({gates::zphase(th, {})}, bits(0)).phase - std::exp(cplx(0, -th))), 1e-16);
}

TEST(RunReversible, ComparatorTruthTable) {
    // a on qubits 0..2, b on 3..5, out on 6.
    const Gate g = gates::cmp({0, 1, 2}, {3, 4, 5}, 6);
    for (std::uint64_t a = 0; a < 8; ++a)
        for (std::uint64_t b = 0; b < 8; ++b) {
            const BasisResult r = run_reversible({g}, bits(a | (b << 3)));
            EXPECT_EQ(r.state.test(6), a <= b) << a << " vs " << b;
            const BasisResult e = run_reversible(detail::expand_cmp(g), bits(a | (b << 3)));
            EXPECT_EQ(e.state, r.state) << a << " vs " << b;
        }
    EXPECT_TRUE(run_reversible({gates::cmp({0, 1, 2}, {3, 4, 5}, 6)}, bits(3 | (5 << 3))).state.test(6));
}

TEST(RunReversible, RejectsNonBasisGates) {
    EXPECT_EQ(kind_of([] { run_reversible({gates::h(0)}, BitMask{}); }), ErrorKind::Contract);
}

TEST(RunReversible, MacroThenInverseRestores) {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> q(0, 5), kind(0, 3);
    std::vector<Gate> seq;
    for (int i = 0; i < 40; ++i) {
        const int a = q(rng);
        int b = q(rng);
        while (b == a) b = q(rng);
        int c = q(rng);
        while (c == a || c == b) c = q(rng);
        switch (kind(rng)) {
            case 0: seq.push_back(gates::x(a)); break;
            case 1: seq.push_back(gates::cnot(a, b)); break;
            case 2: seq.push_back(gates::mcx({a, b}, c)); break;
            default: seq.push_back(gates::zphase(0.1 * i, {a, c})); break;
        }
    }
    const std::vector<Gate> round{gates::macro("m", seq), gates::macro("m_inv", inverse(seq))};
    for (std::uint64_t v = 0; v < 64; ++v) {
        const BasisResult r = run_reversible(round, bits(v));
        EXPECT_EQ(value(r.state, 6), v);
        EXPECT_LT(std::abs(r.phase - 1.0), 1e-14);
    }
}

TEST(Inverse, ShiftIsNotInvertible) {
    EXPECT_EQ(kind_of([] { inverse({gates::shiftl({0, 1})}); }), ErrorKind::Contract);
}

TEST(Validate, OperandChecks) {
    Circuit c = blank(3);
    c.add(gates::cnot(0, 3));
    EXPECT_EQ(kind_of([&] { validate(c); }), ErrorKind::Contract);
    Circuit d = blank(3);
    d.add(gates::macro("m", {gates::mcx({0, 1}, 1)}));
    EXPECT_EQ(kind_of([&] { validate(d); }), ErrorKind::Contract);
    Circuit e = blank(4);
    e.add(gates::cmp({0, 1}, {2}, 3));
    EXPECT_EQ(kind_of([&] { validate(e); }), ErrorKind::Contract);
}

TEST(RunDense, Examples) {
    EXPECT_LT(max_abs(run_dense(blank(2)) - Matrix::Identity(4, 4)), 1e-16);
    Circuit h = blank(1);
    h.add(gates::h(0));
    Matrix had(2, 2);
    had << 1, 1, 1, -1;
    EXPECT_LT(max_abs(run_dense(h) - had / std::sqrt(2.0)), 1e-15);
}

TEST(RunDense, RotationsMatchOracle) {
    Circuit c = blank(2);
    c.add(gates::ry(0.7, 0));
    c.add(gates::cry(-1.1, 0, 1));
    c.add(gates::ch(1, 0));
    // Oracle: little-endian basis, so the qubit-1 factor is the left Kronecker factor.
    auto ry = [](double a) {
        Matrix m(2, 2);
        m << std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2);
        return m;
    };
    const Matrix id = Matrix::Identity(2, 2);
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1;
    p1(1, 1) = 1;
    Matrix had(2, 2);
    had << 1, 1, 1, -1;
    had /= std::sqrt(2.0);
    auto kron = [](const Matrix &a, const Matrix &b) {
        Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return r;
    };
    const Matrix g1 = kron(id, ry(0.7));
    const Matrix g2 = kron(id, p0) + kron(ry(-1.1), p1);
    const Matrix g3 = kron(p0, id) + kron(p1, had);
    EXPECT_LT(max_abs(run_dense(c) - g3 * g2 * g1), 1e-15);
}

TEST(RunDense, AgreesWithReversibleOnPermutations) {
    Circuit c = blank(5);
    c.add(gates::x(2));
    c.add(gates::mcx({0, 2}, 4));
    c.add(gates::cmp({0, 1}, {2, 3}, 4));
    c.add(gates::zphase(0.6, {1, 4}));
    c.add(gates::shiftl({0, 1, 2}));
    const Matrix u = run_dense(c);
    for (std::uint64_t v = 0; v < 32; ++v) {
        const BasisResult r = run_reversible(c, bits(v));
        const auto out = static_cast<Eigen::Index>(value(r.state, 5));
        EXPECT_LT(std::abs(u(out, static_cast<Eigen::Index>(v)) - r.phase), 1e-15);
        EXPECT_LT(u.col(static_cast<Eigen::Index>(v)).norm() - 1.0, 1e-15);
    }
}

TEST(RunDense, DenseLimit) {
    EXPECT_EQ(kind_of([] { run_dense(blank(15)); }), ErrorKind::Dimension);
}

TEST(GateCount, ExpandsMacros) {
    EXPECT_EQ(gate_count(blank(2)).total, 0u);
    Circuit c = blank(3);
    c.add(gates::macro("m", {gates::cnot(0, 1), gates::cnot(1, 2), gates::macro("n", {gates::x(0)})}));
    c.add(gates::h(2));
    const GateCounts gc = gate_count(c, 1);
    EXPECT_EQ(gc.total, 4u);
    EXPECT_EQ(gc.by_kind.at("CNOT"), 2u);
    EXPECT_EQ(gc.by_kind.at("X"), 1u);
    EXPECT_EQ(gc.ancillas, 2);
}

TEST(TextFormat, OneGatePerLine) {
    Circuit c;
    c.allocate("sys", 2);
    c.allocate("anc", 2);
    c.add(gates::cnot(0, 2));
    c.add(gates::mcx({0, 1}, 3));
    c.add(gates::cry(0.5, 1, 2));
    c.add(gates::zphase(0.25, {0, 3}));
    c.add(gates::shiftl({2, 3}));
    c.add(gates::cmp({0}, {1}, 2));
    c.add(gates::macro("blk", {gates::h(1)}));
    const std::string want =
        "QUBITS 4\nREG sys 0,1\nREG anc 2,3\nCNOT 0 2\nMCX 0,1 3\nCRY 0.5 1 2\nZPHASE 0.25 0,3\nSHIFTL 2,3\nCMP 0 1 2\n"
        "MACRO blk {\n  H 1\n}\n";
    EXPECT_EQ(to_text(c), want);
}

TEST(Qasm, HeaderAndLadderAncillas) {
    Circuit c = blank(5);
    c.add(gates::mcx({0, 1, 2, 3}, 4));
    c.add(gates::cmp({0, 1}, {2, 3}, 4));
    const std::string q = to_qasm(c);
    EXPECT_EQ(q.rfind("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[5];\nqreg anc[2];\n", 0), 0u);
    EXPECT_EQ(q.find("MACRO"), std::string::npos);
}
