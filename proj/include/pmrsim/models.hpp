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

#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pmrsim/compile.hpp"
#include "pmrsim/errors.hpp"
#include "pmrsim/lcu.hpp"
#include "pmrsim/pauli.hpp"
#include "pmrsim/pmr.hpp"

namespace pmrsim {

using Vec3 = std::array<double, 3>;

enum class Geometry { Chain, Clustered };

inline std::string_view to_string(Geometry g) { return g == Geometry::Chain ? "chain" : "clustered"; }

inline Geometry parse_geometry(std::string_view s) {
    if (s == "chain") return Geometry::Chain;
    if (s == "clustered") return Geometry::Clustered;
    fail(ErrorKind::Parse, "unknown geometry '" + std::string(s) + "' (expected chain or clustered)");
}

struct RydbergSpec {
    std::vector<Vec3> positions;
    std::vector<double> omega;  ///< per-atom Rabi frequencies
    double delta = 0.0;
    double c6 = 0.0;

    int N() const { return static_cast<int>(positions.size()); }

    void validate() const {
        require(N() >= 2, ErrorKind::Contract, "RydbergSpec: at least two atoms required");
        require(omega.size() == positions.size(), ErrorKind::Contract,
                "RydbergSpec: " + std::to_string(omega.size()) + " Rabi frequencies for " + std::to_string(N()) +
                    " atoms");
        for (int i = 0; i < N(); ++i)
            for (int j = i + 1; j < N(); ++j)
                require(positions[i] != positions[j], ErrorKind::Contract,
                        "RydbergSpec: atoms " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    }
};

/// Chain: unit spacing `length` along x. Clustered: the first N points of a
/// k x k x k grid, k = ceil(N^(1/3)), scaled so the cube diagonal is `length`;
/// every pair then lies within that fixed diameter.
inline std::vector<Vec3> rydberg_positions(int N, Geometry g, double length = 1.0) {
    require(N >= 2, ErrorKind::Contract, "rydberg_positions: at least two atoms required");
    require(length > 0.0, ErrorKind::Contract, "rydberg_positions: length must be positive");
    std::vector<Vec3> pos;
    if (g == Geometry::Chain) {
        for (int i = 0; i < N; ++i) pos.push_back({i * length, 0.0, 0.0});
        return pos;
    }
    int k = 1;
    while (k * k * k < N) ++k;
    const double step = length / ((k - 1) * std::sqrt(3.0));
    for (int a = 0; a < k && static_cast<int>(pos.size()) < N; ++a)
        for (int b = 0; b < k && static_cast<int>(pos.size()) < N; ++b)
            for (int c = 0; c < k && static_cast<int>(pos.size()) < N; ++c) pos.push_back({a * step, b * step, c * step});
    return pos;
}

inline RydbergSpec rydberg_spec(int N, Geometry g, double omega, double delta, double c6, double length = 1.0) {
    RydbergSpec s;
    s.positions = rydberg_positions(N, g, length);
    s.omega.assign(static_cast<std::size_t>(N), omega);
    s.delta = delta;
    s.c6 = c6;
    return s;
}

struct DipolarSpec {
    int dims = 1;
    int sites = 2;
    double t_h = 1.0;
    double u = 0.0;
    double c_dd = 0.0;
    Vec3 dipole{0.0, 0.0, 1.0};
    bool periodic = false;

    /// Sites per dimension.
    int side() const {
        int L = static_cast<int>(std::lround(std::pow(static_cast<double>(sites), 1.0 / dims)));
        return L;
    }

    void validate() const {
        require(dims >= 1 && dims <= 3, ErrorKind::Contract, "DipolarSpec: dims must be 1, 2 or 3");
        require(sites >= 2, ErrorKind::Contract, "DipolarSpec: at least two sites required");
        require(2 * static_cast<std::size_t>(sites) <= BitMask::kMaxQubits, ErrorKind::Contract,
                "DipolarSpec: 2 * sites exceeds the supported qubit count");
        int p = 1;
        for (int d = 0; d < dims; ++d) p *= side();
        require(p == sites, ErrorKind::Contract,
                "DipolarSpec: " + std::to_string(sites) + " sites is not a perfect power of dims = " +
                    std::to_string(dims));
        const double norm = std::sqrt(dipole[0] * dipole[0] + dipole[1] * dipole[1] + dipole[2] * dipole[2]);
        require(norm > 0.0, ErrorKind::Contract, "DipolarSpec: dipole orientation must be nonzero");
    }
};

/// Pauli form with the identity shift removed, its PMR form and the removed constant.
struct ModelHamiltonian {
    PauliHamiltonian pauli;
    PmrHamiltonian pmr;
    double dropped_constant = 0.0;
};

namespace detail {

inline PauliHamiltonian z_op(std::size_t n, std::size_t q, double c = 1.0) {
    PauliHamiltonian h(n);
    h.add(PauliTerm{c, BitMask{}, BitMask::single(q)});
    return h;
}

inline PauliHamiltonian identity_op(std::size_t n, double c) {
    PauliHamiltonian h(n);
    h.add(PauliTerm{c, BitMask{}, BitMask{}});
    return h;
}

/// n_q = (1 + Z_q) / 2
inline PauliHamiltonian number_op(std::size_t n, std::size_t q) {
    PauliHamiltonian h = identity_op(n, 0.5);
    h += z_op(n, q, 0.5);
    return h;
}

inline ModelHamiltonian finish_model(PauliHamiltonian h) {
    h.canonicalize();
    ModelHamiltonian m;
    m.dropped_constant = h.identity_coeff().real();
    m.pauli = PauliHamiltonian(h.n_qubits());
    for (const auto &t : h.terms())
        if (!t.is_identity()) m.pauli.add(t);
    m.pauli.canonicalize();
    m.pmr = pmr_decompose(m.pauli);
    return m;
}

inline double distance(const Vec3 &a, const Vec3 &b) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

}  // namespace detail

/// (1/2) Sum_i (Omega_i X_i - delta Z_i) + Sum_{i<j} C6 / |r_i - r_j|^6 n_i n_j.
inline ModelHamiltonian rydberg_hamiltonian(const RydbergSpec &spec) {
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.N());
    PauliHamiltonian h(n);
    for (std::size_t i = 0; i < n; ++i) {
        h.add(PauliTerm{spec.omega[i] / 2.0, BitMask::single(i), BitMask{}});
        h.add(PauliTerm{-spec.delta / 2.0, BitMask{}, BitMask::single(i)});
    }
    if (spec.c6 != 0.0) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = spec.c6 / std::pow(detail::distance(spec.positions[i], spec.positions[j]), 6);
                PauliHamiltonian pair = detail::number_op(n, i) * detail::number_op(n, j);
                pair *= v;
                h += pair;
            }
    }
    return detail::finish_model(std::move(h));
}

/// Lattice coordinates of site index (first dimension fastest).
inline std::vector<int> site_coords(const DipolarSpec &spec, int site) {
    std::vector<int> c(static_cast<std::size_t>(spec.dims));
    const int L = spec.side();
    for (int d = 0; d < spec.dims; ++d) {
        c[d] = site % L;
        site /= L;
    }
    return c;
}

/// Nearest-neighbor site pairs (a < b), without duplicates.
inline std::vector<std::pair<int, int>> lattice_bonds(const DipolarSpec &spec) {
    spec.validate();
    const int L = spec.side();
    std::set<std::pair<int, int>> bonds;
    for (int site = 0; site < spec.sites; ++site) {
        const auto c = site_coords(spec, site);
        int stride = 1;
        for (int d = 0; d < spec.dims; ++d) {
            int next = c[d] + 1;
            if (next == L) next = spec.periodic ? 0 : -1;
            if (next >= 0 && next != c[d]) {
                const int other = site + (next - c[d]) * stride;
                bonds.insert({std::min(site, other), std::max(site, other)});
            }
            stride *= L;
        }
    }
    return {bonds.begin(), bonds.end()};
}

/// Qubit of orbital (site, spin); each spin species forms its own Jordan-Wigner chain.
inline std::size_t orbital_qubit(const DipolarSpec &spec, int site, int spin) {
    return static_cast<std::size_t>(spin * spec.sites + site);
}

/// Displacement between sites, minimum image when periodic.
inline Vec3 site_displacement(const DipolarSpec &spec, int a, int b) {
    const auto ca = site_coords(spec, a), cb = site_coords(spec, b);
    const int L = spec.side();
    Vec3 r{0.0, 0.0, 0.0};
    for (int d = 0; d < spec.dims; ++d) {
        int diff = cb[d] - ca[d];
        if (spec.periodic) {
            if (diff > L / 2) diff -= L;
            if (diff < -L / 2) diff += L;
        }
        r[d] = diff;
    }
    return r;
}

/// C_dd / |r|^3 (1 - 3 (d.r)^2 / |r|^2) between two sites.
inline double dipolar_coupling(const DipolarSpec &spec, int a, int b) {
    const Vec3 r = site_displacement(spec, a, b);
    const double len = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    require(len > 0.0, ErrorKind::Contract, "dipolar_coupling: sites coincide under the minimum image");
    const double dn = std::sqrt(spec.dipole[0] * spec.dipole[0] + spec.dipole[1] * spec.dipole[1] +
                                spec.dipole[2] * spec.dipole[2]);
    const double cosv = (spec.dipole[0] * r[0] + spec.dipole[1] * r[1] + spec.dipole[2] * r[2]) / (dn * len);
    return spec.c_dd / (len * len * len) * (1.0 - 3.0 * cosv * cosv);
}

/// -t_h Sum_<ij>,s (c+_is c_js + h.c.) + U Sum_i n_iu n_id + Sum_{i<j} V_ij n_i n_j,
/// mapped by c_js -> (Prod_{k<j} Z_ks) (X_js - i Y_js) / 2 on 2N qubits.
inline ModelHamiltonian dipolar_jwt_hamiltonian(const DipolarSpec &spec) {
    spec.validate();
    const auto n = static_cast<std::size_t>(2 * spec.sites);
    PauliHamiltonian h(n);
    if (spec.t_h != 0.0) {
        for (const auto &[a, b] : lattice_bonds(spec))
            for (int spin = 0; spin < 2; ++spin) {
                const std::size_t qa = orbital_qubit(spec, a, spin), qb = orbital_qubit(spec, b, spin);
                BitMask string;
                for (std::size_t k = qa + 1; k < qb; ++k) string.set(k);
                BitMask xx = BitMask::single(qa) | BitMask::single(qb);
                // c+_a c_b + h.c. = -(X_a X_b + Y_a Y_b) / 2 Prod_{a<k<b} Z_k, since c+_a Z_a = -c+_a,
                // and (X_a X_b + Y_a Y_b) / 2 = X_a X_b (1 - Z_a Z_b) / 2 with Y = iXZ.
                PauliTerm t1{spec.t_h / 2.0, xx, string};
                PauliTerm t2{-spec.t_h / 2.0, xx, string ^ xx};
                h.add(t1);
                h.add(t2);
            }
    }
    if (spec.u != 0.0) {
        for (int i = 0; i < spec.sites; ++i) {
            PauliHamiltonian onsite =
                detail::number_op(n, orbital_qubit(spec, i, 0)) * detail::number_op(n, orbital_qubit(spec, i, 1));
            onsite *= spec.u;
            h += onsite;
        }
    }
    if (spec.c_dd != 0.0) {
        auto density = [&](int i) {
            PauliHamiltonian d = detail::number_op(n, orbital_qubit(spec, i, 0));
            d += detail::number_op(n, orbital_qubit(spec, i, 1));
            return d;
        };
        for (int i = 0; i < spec.sites; ++i)
            for (int j = i + 1; j < spec.sites; ++j) {
                const double v = dipolar_coupling(spec, i, j);
                if (v == 0.0) continue;
                PauliHamiltonian pair = density(i) * density(j);
                pair *= v;
                h += pair;
            }
    }
    return detail::finish_model(std::move(h));
}

struct PauliBaseline {
    std::size_t terms = 0;  ///< M'
    double norm = 0.0;      ///< Gamma' = Sum |coeff|
};

/// Non-identity term count and coefficient l1 norm after merging.
inline PauliBaseline pauli_baseline(const PauliHamiltonian &h) {
    PauliBaseline b;
    const PauliHamiltonian merged = h.canonical();
    for (const auto &t : merged.terms()) {
        if (t.is_identity()) continue;
        ++b.terms;
        b.norm += std::abs(t.coeff);
    }
    return b;
}

enum class ModelFamily { Rydberg, Dipolar };

inline std::string_view to_string(ModelFamily f) { return f == ModelFamily::Rydberg ? "rydberg" : "dipolar"; }

inline ModelFamily parse_family(std::string_view s) {
    if (s == "rydberg") return ModelFamily::Rydberg;
    if (s == "dipolar") return ModelFamily::Dipolar;
    fail(ErrorKind::Parse, "unknown model family '" + std::string(s) + "' (expected rydberg or dipolar)");
}

/// A model family with every parameter except the size.
struct ModelSpec {
    ModelFamily family = ModelFamily::Rydberg;
    Geometry geometry = Geometry::Chain;
    double omega = 1.0;
    double delta = 1.0;
    double c6 = 1.0;
    double length = 1.0;
    DipolarSpec dipolar;  ///< sites is overridden per size
};

inline ModelHamiltonian build_model(const ModelSpec &spec, int N) {
    if (spec.family == ModelFamily::Rydberg)
        return rydberg_hamiltonian(rydberg_spec(N, spec.geometry, spec.omega, spec.delta, spec.c6, spec.length));
    DipolarSpec d = spec.dipolar;
    d.sites = N;
    return dipolar_jwt_hamiltonian(d);
}

struct ResourceReport {
    int N = 0;
    std::size_t M = 0;
    double gamma = 0.0;
    double delta_e = 0.0;
    bool gamma_exact = true;
    bool delta_e_exact = true;
    int r = 0;
    int Q = 0;
    int kappa = 0;
    bool with_gates = false;
    GateCounts step;          ///< one LCU execution
    double pmr_cost = 0.0;    ///< M Gamma t
    double gate_cost = 0.0;   ///< r x step gates
    std::size_t baseline_terms = 0;
    double baseline_norm = 0.0;
    double baseline_cost = 0.0;  ///< M' Gamma' t
    double dropped_constant = 0.0;
};

struct ResourceSummary {
    std::vector<ResourceReport> rows;
    double pmr_slope = 0.0;
    double gate_slope = 0.0;  ///< 0 unless gates were counted
    double baseline_slope = 0.0;
};

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, ErrorKind::Contract, "loglog_slope: values must be positive");
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    return fit_linear(lx, ly).slope;
}

inline ResourceReport resource_row(const ModelSpec &spec, int N, double t, double eps, bool with_gates,
                                   const CompileOptions &opt = {}) {
    const ModelHamiltonian m = build_model(spec, N);
    ResourceReport row;
    row.N = N;
    row.M = m.pmr.num_terms();
    row.gamma = m.pmr.gamma_total;
    row.delta_e = m.pmr.delta_e;
    row.gamma_exact = m.pmr.gamma_exact;
    row.delta_e_exact = m.pmr.delta_e_exact;
    row.dropped_constant = m.dropped_constant;
    row.pmr_cost = static_cast<double>(row.M) * row.gamma * t;
    const PauliBaseline b = pauli_baseline(m.pauli);
    row.baseline_terms = b.terms;
    row.baseline_norm = b.norm;
    row.baseline_cost = static_cast<double>(b.terms) * b.norm * t;
    if (row.gamma > 0.0) {
        const SimParams p = choose_params(eps, t, m.pmr);
        row.r = p.r;
        row.Q = p.Q;
        row.kappa = p.kappa;
        if (with_gates && p.Q >= 1) {
            row.with_gates = true;
            row.step = count_lcu_step(m.pmr, p, opt);
            row.gate_cost = static_cast<double>(p.r) * static_cast<double>(row.step.total);
        }
    }
    return row;
}

/// Per-size rows and log-log slopes of the cost proxies against N.
inline ResourceSummary resource_report(const ModelSpec &spec, const std::vector<int> &Ns, double t, double eps,
                                       bool with_gates = false, const CompileOptions &opt = {}) {
    require(Ns.size() >= 4, ErrorKind::Contract, "resource_report: at least four sizes required");
    require(t > 0.0, ErrorKind::Contract, "resource_report: t must be positive");
    ResourceSummary s;
    std::vector<double> n, pmr, gates, base;
    for (int N : Ns) {
        s.rows.push_back(resource_row(spec, N, t, eps, with_gates, opt));
        const auto &row = s.rows.back();
        n.push_back(N);
        pmr.push_back(row.pmr_cost);
        gates.push_back(row.gate_cost);
        base.push_back(row.baseline_cost);
    }
    s.pmr_slope = loglog_slope(n, pmr);
    s.baseline_slope = loglog_slope(n, base);
    if (with_gates) s.gate_slope = loglog_slope(n, gates);
    return s;
}

}  // namespace pmrsim
