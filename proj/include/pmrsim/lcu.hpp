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
#include <numbers>
#include <string>
#include <vector>

#include "pmrsim/alpha.hpp"
#include "pmrsim/dense.hpp"
#include "pmrsim/divdiff.hpp"
#include "pmrsim/errors.hpp"
#include "pmrsim/pmr.hpp"

namespace pmrsim {

inline constexpr std::uint64_t kDefaultTermBudget = 10'000'000;
inline constexpr std::size_t kDefaultOaaLimit = 10;

/// Sum_{q > Q} x^q / q!, summed forward from q = Q + 1.
inline double series_tail(double x, int Q) {
    double term = 1.0;
    for (int q = 1; q <= Q + 1; ++q) term *= x / q;
    double sum = 0.0;
    for (int q = Q + 1; term > 0.0; ++q) {
        sum += term;
        term *= x / (q + 1);
        if (term <= sum * 1e-18) break;
    }
    return sum;
}

/// Sum_{q <= Q} x^q / q!
inline double series_partial(double x, int Q) {
    double term = 1.0, sum = 1.0;
    for (int q = 1; q <= Q; ++q) {
        term *= x / q;
        sum += term;
    }
    return sum;
}

/// Sum_{q <= Q} Gamma^q |exact - ehat| at the equally spaced worst case.
inline double dd_worst_step_error(int Q, double dt, double dE, int K, double gamma) {
    if (dE <= 0.0) return 0.0;
    double total = 0.0;
    for (int q = 0; q <= Q; ++q) {
        const WorstCase wc = worst_case_closed_forms(q, dt, dE, K);
        total += std::pow(gamma, q) * std::abs(wc.exact - wc.ehat);
    }
    return total;
}

struct SimParams {
    double eps = 0.0;
    double t = 0.0;
    double gamma = 0.0;
    double delta_e = 0.0;
    int M = 0;
    int r = 1;
    double dt = 0.0;
    int Q = 0;
    int K = 1;
    int kappa = 0;
    double mu = 0.0;               ///< Delta E / Gamma, 0 when Gamma = 0
    double s = 1.0;                ///< Sum_{q <= Q} (Gamma dt)^q / q!
    double tail = 0.0;             ///< Sum_{q > Q} (Gamma dt)^q / q!
    double step_budget = 0.0;      ///< eps / 2r
    double dd_bound = 0.0;         ///< (dt dE)^2 / (2 K^2)
    double dd_worst = 0.0;         ///< worst-case closed-form step error at the chosen K
    bool z_dependent = false;
};

/// r = ceil(t Gamma / ln 2), Q by direct tail summation, kappa from the per-step
/// divided-difference budget and then raised until the worst-case closed forms
/// also meet it.
inline SimParams choose_params(double eps, double t, const PmrHamiltonian &h) {
    require(eps > 0.0 && eps < 1.0, ErrorKind::Contract, "choose_params: eps must lie in (0, 1)");
    require(t > 0.0 && std::isfinite(t), ErrorKind::Contract, "choose_params: t must be positive and finite");
    SimParams p;
    p.eps = eps;
    p.t = t;
    p.gamma = h.gamma_total;
    p.delta_e = h.delta_e;
    p.M = static_cast<int>(h.num_terms());
    p.z_dependent = h.z_dependent();
    if (p.gamma <= 0.0) {
        p.r = 1;
        p.dt = t;
        p.step_budget = eps / 2.0;
        return p;
    }
    p.mu = p.delta_e / p.gamma;
    const double steps = t * p.gamma / std::numbers::ln2;
    require(steps < 1e9, ErrorKind::Budget,
            "choose_params: t * Gamma / ln2 = " + std::to_string(steps) + " steps; use a smaller t");
    // Absorb rounding so that an exact multiple of ln2 / Gamma is not bumped up.
    p.r = std::max(1, static_cast<int>(std::ceil(steps * (1.0 - 1e-12))));
    p.dt = t / p.r;
    p.step_budget = eps / (2.0 * p.r);
    const double x = p.gamma * p.dt;
    while (series_tail(x, p.Q) > p.step_budget) ++p.Q;
    p.tail = series_tail(x, p.Q);
    p.s = series_partial(x, p.Q);

    if (p.delta_e > 0.0) {
        const double theta = p.dt * p.delta_e;
        auto bound = [&](int K) { return theta * theta / (2.0 * K * K); };
        while (bound(1 << p.kappa) > p.step_budget) ++p.kappa;
        while (dd_worst_step_error(p.Q, p.dt, p.delta_e, 1 << p.kappa, p.gamma) > p.step_budget) ++p.kappa;
        require(p.kappa <= 30, ErrorKind::Budget, "choose_params: kappa above 30");
    }
    p.K = 1 << p.kappa;
    p.dd_bound = p.delta_e > 0.0 ? std::pow(p.dt * p.delta_e, 2) / (2.0 * p.K * p.K) : 0.0;
    p.dd_worst = dd_worst_step_error(p.Q, p.dt, p.delta_e, p.K, p.gamma);
    return p;
}

/// e^{-i H dt} from the Hermitian reconstruction.
inline Matrix exact_step_unitary(const PmrHamiltonian &h, double dt, std::size_t dense_limit = kDefaultDenseLimit) {
    return hermitian_evolution(pmr_reconstruct(h, dense_limit), dt);
}

namespace detail {

inline double path_count(int M, int Q, int factor = 1) {
    double total = 0.0, level = 1.0;
    for (int q = 0; q <= Q; ++q) {
        total += level;
        level *= static_cast<double>(M) * factor;
    }
    return total;
}

/// Dense tables E_z and d_i(z).
struct DenseTables {
    std::uint64_t dim = 1;
    std::vector<double> energy;
    std::vector<std::vector<cplx>> d;
    std::vector<std::uint64_t> x;

    explicit DenseTables(const PmrHamiltonian &h) : dim(std::uint64_t{1} << h.n), energy(dim) {
        for (std::uint64_t z = 0; z < dim; ++z) energy[z] = diag_energy(h.d0, z);
        for (const auto &t : h.terms) {
            x.push_back(t.x_mask.low());
            std::vector<cplx> row(dim);
            for (std::uint64_t z = 0; z < dim; ++z) row[z] = t.diag.evaluate(z);
            d.push_back(std::move(row));
        }
    }
};

/// Depth-first walk over i-paths of length <= Q from z; fn(z_q, energies, d-product).
template <class Fn>
void walk_paths(const DenseTables &tab, std::uint64_t z, int Q, Fn &&fn) {
    std::vector<double> energies{tab.energy[z]};
    auto rec = [&](auto &&self, std::uint64_t cur, cplx dprod) -> void {
        fn(cur, static_cast<const std::vector<double> &>(energies), dprod);
        if (static_cast<int>(energies.size()) > Q) return;
        for (std::size_t i = 0; i < tab.x.size(); ++i) {
            const std::uint64_t next = cur ^ tab.x[i];
            energies.push_back(tab.energy[next]);
            self(self, next, dprod * tab.d[i][next]);
            energies.pop_back();
        }
    };
    rec(rec, z, cplx(1.0));
}

}  // namespace detail

/// Order-Q partial sum of the off-diagonal series with exact divided differences.
inline Matrix build_U_series_exact(const PmrHamiltonian &h, double dt, int Q, std::uint64_t budget = kDefaultTermBudget,
                                   std::size_t dense_limit = kDefaultDenseLimit) {
    require_dense(h.n, dense_limit, "build_U_series_exact");
    require(Q >= 0, ErrorKind::Contract, "build_U_series_exact: Q must be nonnegative");
    const double paths = detail::path_count(static_cast<int>(h.num_terms()), Q);
    require(paths <= static_cast<double>(budget), ErrorKind::Budget,
            "build_U_series_exact: " + std::to_string(static_cast<std::uint64_t>(paths)) +
                " operator paths exceed the term budget " + std::to_string(budget));
    const detail::DenseTables tab(h);
    Matrix u = Matrix::Zero(static_cast<Eigen::Index>(tab.dim), static_cast<Eigen::Index>(tab.dim));
    for (std::uint64_t z = 0; z < tab.dim; ++z) {
        detail::walk_paths(tab, z, Q, [&](std::uint64_t zq, const std::vector<double> &e, cplx dprod) {
            u(static_cast<Eigen::Index>(zq), static_cast<Eigen::Index>(z)) += dprod * dd_exp_exact({e, dt});
        });
    }
    return u;
}

/// V = (-i)^q P_{i_q} ... P_{i_1} Sum_z e^{-i delta Sum_s alpha_s E_{z_s}} |z><z|,
/// delta = dt / K. Term indices are 0-based. With `branch` (one sign bit per
/// hop) each hop also carries e^{i(theta(z_s) +- phi(z_s))}, the two-phase split
/// of d_{i_s}(z_s) / Gamma_{i_s}.
inline Matrix build_V(const PmrHamiltonian &h, const std::vector<int> &iq, const KTuple &kt, double dt,
                      const std::vector<int> *branch = nullptr, std::size_t dense_limit = kDefaultDenseLimit) {
    require_dense(h.n, dense_limit, "build_V");
    require(iq.size() == kt.order(), ErrorKind::Contract, "build_V: i-tuple and k-tuple lengths differ");
    require(!branch || branch->size() == iq.size(), ErrorKind::Contract, "build_V: one branch bit per hop required");
    for (int i : iq)
        require(i >= 0 && static_cast<std::size_t>(i) < h.num_terms(), ErrorKind::Contract,
                "build_V: term index " + std::to_string(i) + " out of range");
    const AlphaWorkspace aw = alpha_coeffs(kt);
    const int q = static_cast<int>(iq.size());
    const double delta = dt / kt.K;
    const std::uint64_t dim = std::uint64_t{1} << h.n;
    Matrix v = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::uint64_t z = 0; z < dim; ++z) {
        std::uint64_t cur = z;
        double phase = boost::rational_cast<double>(aw.alpha[0]) * diag_energy(h.d0, cur);
        cplx hop = 1.0;
        for (int s = 1; s <= q; ++s) {
            const PmrTerm &term = h.terms[static_cast<std::size_t>(iq[s - 1])];
            cur ^= term.x_mask.low();
            phase += boost::rational_cast<double>(aw.alpha[s]) * diag_energy(h.d0, cur);
            if (branch) {
                const auto [theta, phi] = hop_phases(term, cur);
                hop *= std::exp(cplx(0.0, theta + ((*branch)[s - 1] ? -phi : phi)));
            }
        }
        v(static_cast<Eigen::Index>(cur), static_cast<Eigen::Index>(z)) =
            minus_i_pow(q) * hop * std::exp(cplx(0.0, -delta * phase));
    }
    return v;
}

namespace detail {

/// alpha_s for every k-tuple of length q, lexicographic, flattened (q + 1 per tuple).
inline std::vector<double> alpha_table(int q, int K) {
    std::vector<double> out;
    std::vector<int> occ(static_cast<std::size_t>(K));
    std::vector<double> alpha;
    for_each_ktuple(q, K, [&](const std::vector<int> &k) {
        std::fill(occ.begin(), occ.end(), 0);
        for (int v : k) ++occ[v - 1];
        alpha_values(occ, alpha);
        out.insert(out.end(), alpha.begin(), alpha.end());
    });
    return out;
}

}  // namespace detail

/// U~ = Sum_{q <= Q} Sum_{i_q, k_q} (Gamma_{i_q} dt^q) / (K^q q!) V'. The branch
/// average of V' is exact, so each hop contributes d_{i_s}(z_s) / Gamma_{i_s}.
inline Matrix build_U_tilde(const PmrHamiltonian &h, const SimParams &p, std::uint64_t budget = kDefaultTermBudget,
                            std::size_t dense_limit = kDefaultDenseLimit) {
    require_dense(h.n, dense_limit, "build_U_tilde");
    const double terms = detail::path_count(static_cast<int>(h.num_terms()), p.Q, p.K);
    require(terms <= static_cast<double>(budget), ErrorKind::Budget,
            "build_U_tilde: " + std::to_string(static_cast<std::uint64_t>(terms)) +
                " (i, k) terms exceed the term budget " + std::to_string(budget) + "; raise eps or lower t");
    const detail::DenseTables tab(h);
    std::vector<std::vector<double>> alphas;
    for (int q = 0; q <= p.Q; ++q) alphas.push_back(detail::alpha_table(q, p.K));
    const double delta = p.dt / p.K;
    std::vector<cplx> prefactor;
    for (int q = 0; q <= p.Q; ++q) prefactor.push_back(std::pow(delta, q) / factorial(q) * minus_i_pow(q));

    Matrix u = Matrix::Zero(static_cast<Eigen::Index>(tab.dim), static_cast<Eigen::Index>(tab.dim));
    for (std::uint64_t z = 0; z < tab.dim; ++z) {
        detail::walk_paths(tab, z, p.Q, [&](std::uint64_t zq, const std::vector<double> &e, cplx dprod) {
            const std::size_t width = e.size();
            const std::vector<double> &tbl = alphas[width - 1];
            cplx sum{};
            for (std::size_t row = 0; row < tbl.size(); row += width) {
                double phase = 0.0;
                for (std::size_t s = 0; s < width; ++s) phase += tbl[row + s] * e[s];
                sum += std::exp(cplx(0.0, -delta * phase));
            }
            u(static_cast<Eigen::Index>(zq), static_cast<Eigen::Index>(z)) += prefactor[width - 1] * dprod * sum;
        });
    }
    return u;
}

struct LcuEntry {
    int q = 0;
    std::vector<int> i;       ///< 0-based term indices
    std::vector<int> k;       ///< values in [1, K]
    std::vector<int> branch;  ///< empty unless z-dependent
    double amplitude = 0.0;
};

struct LcuWeights {
    std::vector<LcuEntry> entries;
    double s = 1.0;
    bool z_dependent = false;
};

/// Ancilla amplitudes sqrt(Gamma_{i_q} dt^q / (s K^q q!)), lexicographic in
/// (q, i, k, branch). Branch pairs split each weight in half.
inline LcuWeights lcu_weights(const PmrHamiltonian &h, const SimParams &p, std::uint64_t budget = kDefaultTermBudget) {
    const int M = static_cast<int>(h.num_terms());
    const int branches = p.z_dependent ? 2 : 1;
    const double count = detail::path_count(M, p.Q, p.K * branches);
    require(count <= static_cast<double>(budget), ErrorKind::Budget,
            "lcu_weights: " + std::to_string(static_cast<std::uint64_t>(count)) + " entries exceed the term budget " +
                std::to_string(budget));
    LcuWeights w;
    w.z_dependent = p.z_dependent;
    w.s = p.s;
    for (int q = 0; q <= p.Q; ++q) {
        const double base = std::pow(p.dt / p.K, q) / factorial(q) / std::pow(branches, q) / p.s;
        for_each_ktuple(q, M, [&](const std::vector<int> &i1) {
            double g = 1.0;
            std::vector<int> iq(i1.size());
            for (std::size_t j = 0; j < i1.size(); ++j) {
                iq[j] = i1[j] - 1;
                g *= h.terms[static_cast<std::size_t>(iq[j])].gamma;
            }
            const double amp = std::sqrt(base * g);
            for_each_ktuple(q, p.K, [&](const std::vector<int> &k) {
                if (!p.z_dependent) {
                    w.entries.push_back({q, iq, k, {}, amp});
                    return;
                }
                for_each_ktuple(q, 2, [&](const std::vector<int> &b1) {
                    std::vector<int> b(b1.size());
                    for (std::size_t j = 0; j < b1.size(); ++j) b[j] = b1[j] - 1;
                    w.entries.push_back({q, iq, k, b, amp});
                });
            });
        });
    }
    return w;
}

/// Qubit positions of the LCU ancilla state: system bits 0..n-1, then the
/// unary order register u, the one-hot i-registers, the binary k-registers
/// (value k - 1) and, in z-dependent mode, one branch bit per order.
struct LcuLayout {
    int n = 0;
    int Q = 0;
    int M = 0;
    int kappa = 0;
    bool branch = false;

    int u(int s) const { return n + s - 1; }
    int ibit(int s, int m) const { return n + Q + (s - 1) * M + (m - 1); }
    int kbit(int s, int b) const { return n + Q + Q * M + (s - 1) * kappa + b; }
    int bbit(int s) const { return n + Q + Q * M + Q * kappa + (s - 1); }
    int ancillas() const { return Q * (1 + M + kappa + (branch ? 1 : 0)); }
    int total() const { return n + ancillas(); }
};

inline LcuLayout lcu_layout(const PmrHamiltonian &h, const SimParams &p) {
    return {static_cast<int>(h.n), p.Q, static_cast<int>(h.num_terms()), p.kappa, p.z_dependent};
}

/// Rotation angles of the three-stage preparation. unary[j-1] rotates u_j
/// (controlled on u_{j-1} for j > 1); thermo[m-1], m >= 2, rotates r_m
/// controlled on r_{m-1} in the thermometer ladder of each i-register.
struct PrepAngles {
    std::vector<double> unary;
    std::vector<double> thermo;
};

inline PrepAngles prep_angles(const SimParams &p, const std::vector<double> &gammas) {
    PrepAngles a;
    const double x = p.gamma * p.dt;
    std::vector<double> w(static_cast<std::size_t>(p.Q) + 1);
    double term = 1.0;
    for (int q = 0; q <= p.Q; ++q) {
        w[q] = term;
        term *= x / (q + 1);
    }
    std::vector<double> suffix(w.size() + 1, 0.0);
    for (int q = p.Q; q >= 0; --q) suffix[q] = suffix[q + 1] + w[q];
    for (int j = 1; j <= p.Q; ++j) a.unary.push_back(2.0 * std::atan2(std::sqrt(suffix[j]), std::sqrt(w[j - 1])));

    const std::size_t M = gammas.size();
    double total = 0.0;
    for (double g : gammas) total += g;
    std::vector<double> tail(M + 1, 0.0);
    for (std::size_t m = M; m-- > 0;) tail[m] = tail[m + 1] + gammas[m] / total;
    a.thermo.assign(M, 0.0);
    for (std::size_t m = 1; m < M; ++m)
        a.thermo[m] = 2.0 * std::atan2(std::sqrt(tail[m]), std::sqrt(gammas[m - 1] / total));
    return a;
}

struct OaaOperators {
    LcuLayout layout;
    Matrix B;
    Matrix UC;
    Matrix W;
    Matrix R;
    Matrix A;
};

namespace detail {

inline std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

/// Dense preparation unitary on the joint register, built gate by gate.
inline Matrix prep_unitary(const LcuLayout &L, const PrepAngles &a) {
    const std::uint64_t dim = bit(L.total());
    Matrix b = Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (int j = 1; j <= L.Q; ++j)
        apply_controlled_1q(b, static_cast<unsigned>(L.u(j)), ry_gate(a.unary[j - 1]), j > 1 ? bit(L.u(j - 1)) : 0);
    for (int s = 1; s <= L.Q; ++s) {
        apply_controlled_1q(b, static_cast<unsigned>(L.ibit(s, 1)), pauli_x_gate(), bit(L.u(s)));
        for (int m = 2; m <= L.M; ++m)
            apply_controlled_1q(b, static_cast<unsigned>(L.ibit(s, m)), ry_gate(a.thermo[m - 1]), bit(L.ibit(s, m - 1)));
        for (int m = 1; m < L.M; ++m)
            apply_controlled_1q(b, static_cast<unsigned>(L.ibit(s, m)), pauli_x_gate(), bit(L.ibit(s, m + 1)));
    }
    for (int s = 1; s <= L.Q; ++s) {
        for (int c = 0; c < L.kappa; ++c)
            apply_controlled_1q(b, static_cast<unsigned>(L.kbit(s, c)), hadamard_gate(), bit(L.u(s)));
        if (L.branch) apply_controlled_1q(b, static_cast<unsigned>(L.bbit(s)), hadamard_gate(), bit(L.u(s)));
    }
    return b;
}

}  // namespace detail

/// Select action on one joint basis state. Every set i-bit of register s hops
/// the system in block s and applies its two-phase factor; every set u-bit
/// contributes -i; the alpha phases apply only when u is a unary code 1_q, with
/// alpha computed from k_1..k_q.
inline std::pair<std::uint64_t, cplx> select_action(const PmrHamiltonian &h, const LcuLayout &L, double dt, int K,
                                                    std::uint64_t index) {
    using detail::bit;
    const std::uint64_t sys_mask = bit(L.n) - 1;
    std::uint64_t z = index & sys_mask;
    int q = 0;
    while (q < L.Q && (index & bit(L.u(q + 1)))) ++q;
    bool valid = true;
    for (int s = q + 1; s <= L.Q; ++s) valid = valid && !(index & bit(L.u(s)));
    std::vector<double> alpha;
    if (valid) {
        KTuple kt;
        kt.K = K;
        for (int s = 1; s <= q; ++s) {
            int v = 0;
            for (int c = 0; c < L.kappa; ++c)
                if (index & bit(L.kbit(s, c))) v |= 1 << c;
            kt.k.push_back(v + 1);
        }
        const AlphaWorkspace aw = alpha_coeffs(kt);
        for (const auto &a : aw.alpha) alpha.push_back(boost::rational_cast<double>(a));
    }
    const double delta = dt / K;
    double phase = valid ? alpha[0] * diag_energy(h.d0, z) * -delta : 0.0;
    cplx factor = 1.0;
    for (int s = 1; s <= L.Q; ++s) {
        for (int m = 1; m <= L.M; ++m)
            if (index & bit(L.ibit(s, m))) z ^= h.terms[static_cast<std::size_t>(m - 1)].x_mask.low();
        for (int m = 1; m <= L.M; ++m) {
            if (!(index & bit(L.ibit(s, m)))) continue;
            const auto [theta, phi] = hop_phases(h.terms[static_cast<std::size_t>(m - 1)], z);
            const bool minus = L.branch && (index & bit(L.bbit(s)));
            phase += theta + (minus ? -phi : phi);
        }
        if (valid && s <= q) phase -= delta * alpha[s] * diag_energy(h.d0, z);
        if (index & bit(L.u(s))) factor *= cplx(0.0, -1.0);
    }
    return {(index & ~sys_mask) | z, factor * std::exp(cplx(0.0, phase))};
}

/// B, U_C, W = B^dagger U_C B, R = 1 - 2|0><0|_anc and A = -W R W^dagger R W.
inline OaaOperators build_oaa_operator(const PmrHamiltonian &h, const SimParams &p,
                                       std::size_t dense_limit = kDefaultOaaLimit) {
    OaaOperators o;
    o.layout = lcu_layout(h, p);
    const LcuLayout &L = o.layout;
    require(L.Q >= 1 && L.M >= 1, ErrorKind::Contract, "build_oaa_operator: needs Q >= 1 and at least one hop term");
    require_dense(static_cast<std::size_t>(L.total()), dense_limit, "build_oaa_operator");
    const std::uint64_t dim = detail::bit(L.total());
    const auto d = static_cast<Eigen::Index>(dim);
    std::vector<double> gammas;
    for (const auto &t : h.terms) gammas.push_back(t.gamma);
    o.B = detail::prep_unitary(L, prep_angles(p, gammas));
    o.UC = Matrix::Zero(d, d);
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        const auto [out, f] = select_action(h, L, p.dt, p.K, idx);
        o.UC(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(idx)) = f;
    }
    o.W = o.B.adjoint() * o.UC * o.B;
    o.R = Matrix::Identity(d, d);
    const std::uint64_t sys_dim = detail::bit(L.n);
    for (std::uint64_t z = 0; z < sys_dim; ++z) o.R(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(z)) = -1.0;
    o.A = -(o.W * o.R * o.W.adjoint() * o.R * o.W);
    return o;
}

/// (<0|_anc (x) 1) X (|0>_anc (x) 1): the leading system-sized block.
inline Matrix zero_ancilla_block(const Matrix &x, const LcuLayout &L) {
    const auto sys = static_cast<Eigen::Index>(detail::bit(L.n));
    return x.topLeftCorner(sys, sys);
}

struct SimReport {
    SimParams params;
    double step_error = 0.0;        ///< ||U~ - e^{-iH dt}||
    double step_bound = 0.0;        ///< tail(Q) + worst-case divided-difference error
    double accumulated_bound = 0.0; ///< r * step_bound
    double accumulated_error = 0.0; ///< ||psi_t - e^{-iHt} psi0||
    double norm = 1.0;              ///< ||psi_t||
    double norm_drift_bound = 0.0;  ///< r * |1 - ||U~|||
};

struct SimResult {
    Vector psi;
    SimReport report;
};

/// Applies U~ r times to psi0 (operator mode).
inline SimResult simulate(const PmrHamiltonian &h, const Vector &psi0, double eps, double t,
                          std::uint64_t budget = kDefaultTermBudget, std::size_t dense_limit = kDefaultDenseLimit) {
    require_dense(h.n, dense_limit, "simulate");
    require(psi0.size() == static_cast<Eigen::Index>(std::uint64_t{1} << h.n), ErrorKind::Dimension,
            "simulate: state length " + std::to_string(psi0.size()) + " does not match 2^" + std::to_string(h.n));
    require(t >= 0.0, ErrorKind::Contract, "simulate: t must be nonnegative");
    SimResult res;
    if (t == 0.0) {
        res.psi = psi0;
        res.report.params.eps = eps;
        res.report.norm = psi0.norm();
        return res;
    }
    SimParams p;
    try {
        p = choose_params(eps, t, h);
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::Budget) throw;
        fail(ErrorKind::Budget, std::string(e.what()) + "; try a larger eps or a smaller t");
    }
    Matrix u;
    try {
        u = build_U_tilde(h, p, budget, dense_limit);
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::Budget) throw;
        fail(ErrorKind::Budget, std::string(e.what()) + "; try a larger eps or a smaller t");
    }
    const Matrix exact = exact_step_unitary(h, p.dt, dense_limit);
    res.report.params = p;
    res.report.step_error = spectral_distance(u, exact);
    res.report.step_bound = p.tail + p.dd_worst;
    res.report.accumulated_bound = p.r * res.report.step_bound;
    const double unorm = Eigen::JacobiSVD<Matrix>(u).singularValues()(0);
    res.report.norm_drift_bound = p.r * std::abs(1.0 - unorm);
    Vector psi = psi0, ref = psi0;
    for (int step = 0; step < p.r; ++step) {
        psi = u * psi;
        ref = exact * ref;
    }
    res.report.accumulated_error = (psi - ref).norm();
    res.report.norm = psi.norm();
    res.psi = std::move(psi);
    return res;
}

}  // namespace pmrsim
