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

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmrsim/circuit.hpp"
#include "pmrsim/divdiff.hpp"
#include "pmrsim/errors.hpp"
#include "pmrsim/lcu.hpp"
#include "pmrsim/models.hpp"
#include "pmrsim/pauli.hpp"
#include "pmrsim/pmr.hpp"

namespace pmrsim::io {

using json = nlohmann::json;

inline std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot open '" + path + "' for reading");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Writes to `path`, or to stdout when path is "-" or empty.
inline void write_text(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot open '" + path + "' for writing");
    out << text;
    require(static_cast<bool>(out), ErrorKind::Io, "write to '" + path + "' failed");
}

inline json parse_json(const std::string &text, const std::string &what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        fail(ErrorKind::Parse, what + ": " + e.what());
    }
}

inline json read_json(const std::string &path) { return parse_json(read_text(path), "'" + path + "'"); }

inline std::string dump(const json &j) { return j.dump(2) + "\n"; }

/// Typed field access; every failure is a Parse error naming the field.
template <class T>
T get(const json &j, const char *key, const std::string &where) {
    require(j.is_object() && j.contains(key), ErrorKind::Parse, where + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        fail(ErrorKind::Parse, where + ": field '" + key + "' has the wrong type (" + e.what() + ")");
    }
}

template <class T>
T get_or(const json &j, const char *key, T fallback, const std::string &where) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return get<T>(j, key, where);
}

inline json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

/// [re, im] or a bare real number.
inline cplx complex_from_json(const json &j, const std::string &where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(), ErrorKind::Parse,
            where + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

// ---- Pauli Hamiltonian ----

inline json pauli_to_json(const PauliHamiltonian &h) {
    json terms = json::array();
    for (const auto &t : h.terms()) {
        const auto [label, w] = t.to_label(h.n_qubits());
        terms.push_back({{"pauli", label}, {"coeff", complex_to_json(w)}});
    }
    return {{"n_qubits", h.n_qubits()}, {"terms", terms}};
}

inline PauliHamiltonian pauli_from_json(const json &j) {
    const std::string where = "Hamiltonian";
    const auto n = get<std::size_t>(j, "n_qubits", where);
    PauliHamiltonian h(n);
    const json terms = get<json>(j, "terms", where);
    require(terms.is_array(), ErrorKind::Parse, where + ": 'terms' must be an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string at = where + " term " + std::to_string(i);
        const auto label = get<std::string>(terms[i], "pauli", at);
        require(terms[i].contains("coeff"), ErrorKind::Parse, at + ": missing field 'coeff'");
        h.add(label, complex_from_json(terms[i]["coeff"], at));
    }
    return h;
}

// ---- PMR Hamiltonian ----

inline json diag_to_json(const DiagonalOperator &d, std::size_t n) {
    json out = json::array();
    for (const auto &t : d.terms()) out.push_back({{"z_mask", t.z_mask.to_binary(n)}, {"coeff", complex_to_json(t.coeff)}});
    return out;
}

inline DiagonalOperator diag_from_json(const json &j, std::size_t n, const std::string &where) {
    require(j.is_array(), ErrorKind::Parse, where + ": expected a term list");
    DiagonalOperator d(n);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string at = where + " entry " + std::to_string(i);
        const auto mask = get<std::string>(j[i], "z_mask", at);
        require(mask.size() == n, ErrorKind::Parse, at + ": z_mask length differs from n_qubits");
        require(j[i].contains("coeff"), ErrorKind::Parse, at + ": missing field 'coeff'");
        d.add(BitMask::from_binary(mask), complex_from_json(j[i]["coeff"], at));
    }
    return d;
}

inline json pmr_to_json(const PmrHamiltonian &h) {
    json terms = json::array();
    for (const auto &t : h.terms)
        terms.push_back({{"x_mask", t.x_mask.to_binary(h.n)}, {"gamma", t.gamma}, {"diag", diag_to_json(t.diag, h.n)}});
    return {{"n_qubits", h.n},
            {"num_terms", h.num_terms()},
            {"gamma", h.gamma_total},
            {"gamma_exact", h.gamma_exact},
            {"delta_e", h.delta_e},
            {"delta_e_exact", h.delta_e_exact},
            {"z_dependent", h.z_dependent()},
            {"d0", diag_to_json(h.d0, h.n)},
            {"terms", terms}};
}

/// Reads a PMR file; norms are recomputed, and each term must satisfy the
/// Hermiticity condition c_k = conj(c_k) (-1)^{|k & x|}.
inline PmrHamiltonian pmr_from_json(const json &j) {
    const std::string where = "PMR Hamiltonian";
    PmrHamiltonian h;
    h.n = get<std::size_t>(j, "n_qubits", where);
    require(h.n >= 1 && h.n <= BitMask::kMaxQubits, ErrorKind::Parse, where + ": n_qubits out of range");
    h.d0 = diag_from_json(get<json>(j, "d0", where), h.n, where + " d0");
    for (const auto &t : h.d0.terms())
        require(std::abs(t.coeff.imag()) <= 1e-12, ErrorKind::NonHermitian,
                where + ": d0 coefficient on " + t.z_mask.to_binary(h.n) + " is not real");
    const json terms = get<json>(j, "terms", where);
    require(terms.is_array(), ErrorKind::Parse, where + ": 'terms' must be an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string at = where + " term " + std::to_string(i);
        PmrTerm t;
        const auto x = get<std::string>(terms[i], "x_mask", at);
        require(x.size() == h.n, ErrorKind::Parse, at + ": x_mask length differs from n_qubits");
        t.x_mask = BitMask::from_binary(x);
        require(t.x_mask.any(), ErrorKind::Parse, at + ": x_mask must be nonzero");
        t.diag = diag_from_json(get<json>(terms[i], "diag", at), h.n, at + " diag");
        for (const auto &d : t.diag.terms()) {
            const cplx mirrored = std::conj(d.coeff) * static_cast<double>(parity_sign(d.z_mask, t.x_mask));
            require(std::abs(d.coeff - mirrored) <= 1e-12, ErrorKind::NonHermitian,
                    at + ": diagonal coefficient on " + d.z_mask.to_binary(h.n) + " breaks Hermiticity");
        }
        h.terms.push_back(std::move(t));
    }
    refresh_norms(h);
    return h;
}

// ---- Parameters, states, reports ----

inline json params_to_json(const SimParams &p) {
    return {{"eps", p.eps},     {"t", p.t},
            {"gamma", p.gamma}, {"delta_e", p.delta_e},
            {"M", p.M},         {"r", p.r},
            {"dt", p.dt},       {"Q", p.Q},
            {"K", p.K},         {"kappa", p.kappa},
            {"mu", p.mu},       {"s", p.s},
            {"tail", p.tail},   {"step_budget", p.step_budget},
            {"dd_bound", p.dd_bound}, {"dd_worst", p.dd_worst},
            {"z_dependent", p.z_dependent}};
}

inline SimParams params_from_json(const json &j) {
    const std::string where = "parameters";
    SimParams p;
    p.eps = get<double>(j, "eps", where);
    p.t = get<double>(j, "t", where);
    p.gamma = get<double>(j, "gamma", where);
    p.delta_e = get<double>(j, "delta_e", where);
    p.M = get<int>(j, "M", where);
    p.r = get<int>(j, "r", where);
    p.dt = get<double>(j, "dt", where);
    p.Q = get<int>(j, "Q", where);
    p.K = get<int>(j, "K", where);
    p.kappa = get<int>(j, "kappa", where);
    p.mu = get<double>(j, "mu", where);
    p.s = get<double>(j, "s", where);
    p.tail = get<double>(j, "tail", where);
    p.step_budget = get<double>(j, "step_budget", where);
    p.dd_bound = get<double>(j, "dd_bound", where);
    p.dd_worst = get<double>(j, "dd_worst", where);
    p.z_dependent = get<bool>(j, "z_dependent", where);
    require(p.K == (1 << p.kappa), ErrorKind::Parse, where + ": K must equal 2^kappa");
    require(p.Q >= 0 && p.r >= 1, ErrorKind::Parse, where + ": need Q >= 0 and r >= 1");
    return p;
}

inline json state_to_json(const Vector &psi) {
    json out = json::array();
    for (Eigen::Index i = 0; i < psi.size(); ++i) out.push_back(complex_to_json(psi(i)));
    return out;
}

inline Vector state_from_json(const json &j) {
    require(j.is_array() && !j.empty(), ErrorKind::Parse, "state: expected a non-empty list of [re, im] pairs");
    const std::size_t dim = j.size();
    require((dim & (dim - 1)) == 0, ErrorKind::Parse, "state: length " + std::to_string(dim) + " is not a power of two");
    Vector psi(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) psi(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], "state entry " + std::to_string(i));
    return psi;
}

inline json report_to_json(const SimReport &r) {
    return {{"params", params_to_json(r.params)},
            {"step_error", r.step_error},
            {"step_bound", r.step_bound},
            {"accumulated_bound", r.accumulated_bound},
            {"accumulated_error", r.accumulated_error},
            {"norm", r.norm},
            {"norm_drift_bound", r.norm_drift_bound}};
}

inline json counts_to_json(const GateCounts &c) {
    json kinds = json::object();
    for (const auto &[k, v] : c.by_kind) kinds[k] = v;
    return {{"total", c.total}, {"qubits", c.qubits}, {"ancillas", c.ancillas}, {"by_kind", kinds}};
}

// ---- Models ----

inline json model_spec_to_json(const ModelSpec &s) {
    json j = {{"family", std::string(to_string(s.family))}};
    if (s.family == ModelFamily::Rydberg) {
        j["geometry"] = std::string(to_string(s.geometry));
        j["omega"] = s.omega;
        j["delta"] = s.delta;
        j["c6"] = s.c6;
        j["length"] = s.length;
    } else {
        const DipolarSpec &d = s.dipolar;
        j["dims"] = d.dims;
        j["t_h"] = d.t_h;
        j["u"] = d.u;
        j["c_dd"] = d.c_dd;
        j["dipole"] = {d.dipole[0], d.dipole[1], d.dipole[2]};
        j["periodic"] = d.periodic;
    }
    return j;
}

inline ModelSpec model_spec_from_json(const json &j) {
    const std::string where = "model spec";
    ModelSpec s;
    s.family = parse_family(get<std::string>(j, "family", where));
    if (s.family == ModelFamily::Rydberg) {
        s.geometry = parse_geometry(get_or<std::string>(j, "geometry", "chain", where));
        s.omega = get_or<double>(j, "omega", s.omega, where);
        s.delta = get_or<double>(j, "delta", s.delta, where);
        s.c6 = get_or<double>(j, "c6", s.c6, where);
        s.length = get_or<double>(j, "length", s.length, where);
    } else {
        DipolarSpec &d = s.dipolar;
        d.dims = get_or<int>(j, "dims", d.dims, where);
        d.t_h = get_or<double>(j, "t_h", d.t_h, where);
        d.u = get_or<double>(j, "u", d.u, where);
        d.c_dd = get_or<double>(j, "c_dd", d.c_dd, where);
        if (j.contains("dipole")) {
            const auto v = get<std::vector<double>>(j, "dipole", where);
            require(v.size() == 3, ErrorKind::Parse, where + ": 'dipole' must have three components");
            d.dipole = {v[0], v[1], v[2]};
        }
        d.periodic = get_or<bool>(j, "periodic", d.periodic, where);
    }
    return s;
}

inline json resource_to_json(const ModelSpec &spec, const ResourceSummary &s, double t, double eps) {
    json rows = json::array();
    for (const auto &r : s.rows) {
        json row = {{"N", r.N},
                    {"M", r.M},
                    {"gamma", r.gamma},
                    {"gamma_exact", r.gamma_exact},
                    {"delta_e", r.delta_e},
                    {"delta_e_exact", r.delta_e_exact},
                    {"r", r.r},
                    {"Q", r.Q},
                    {"kappa", r.kappa},
                    {"pmr_cost", r.pmr_cost},
                    {"baseline_terms", r.baseline_terms},
                    {"baseline_norm", r.baseline_norm},
                    {"baseline_cost", r.baseline_cost},
                    {"dropped_constant", r.dropped_constant}};
        if (r.with_gates) {
            row["step_gates"] = counts_to_json(r.step);
            row["gate_cost"] = r.gate_cost;
        }
        rows.push_back(row);
    }
    json out = {{"model", model_spec_to_json(spec)},
                {"t", t},
                {"eps", eps},
                {"rows", rows},
                {"pmr_slope", s.pmr_slope},
                {"baseline_slope", s.baseline_slope}};
    if (!s.rows.empty() && s.rows.front().with_gates) out["gate_slope"] = s.gate_slope;
    return out;
}

/// Right-aligned columns, header first.
inline std::string table(const std::vector<std::string> &header, const std::vector<std::vector<std::string>> &rows) {
    std::vector<std::size_t> w(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) w[c] = header[c].size();
    for (const auto &r : rows)
        for (std::size_t c = 0; c < r.size() && c < w.size(); ++c) w[c] = std::max(w[c], r[c].size());
    std::ostringstream os;
    auto line = [&](const std::vector<std::string> &r) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "  " : "") << std::setw(static_cast<int>(w[c])) << r[c];
        os << "\n";
    };
    line(header);
    for (const auto &r : rows) line(r);
    return os.str();
}

inline std::string num(double v, int digits = 6) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

inline std::string resource_table(const ResourceSummary &s) {
    std::vector<std::vector<std::string>> rows;
    const bool gates = !s.rows.empty() && s.rows.front().with_gates;
    for (const auto &r : s.rows) {
        std::vector<std::string> row{std::to_string(r.N),       std::to_string(r.M),          num(r.gamma),
                                     num(r.delta_e),            std::to_string(r.r),          std::to_string(r.Q),
                                     std::to_string(r.kappa),   num(r.pmr_cost),              std::to_string(r.baseline_terms),
                                     num(r.baseline_norm),      num(r.baseline_cost)};
        if (gates) {
            row.push_back(std::to_string(r.step.total));
            row.push_back(num(r.gate_cost));
        }
        rows.push_back(row);
    }
    std::vector<std::string> header{"N", "M", "Gamma", "dE", "r", "Q", "kappa", "M*Gamma*t", "M'", "Gamma'", "M'*Gamma'*t"};
    if (gates) {
        header.push_back("step_gates");
        header.push_back("r*step_gates");
    }
    std::string out = table(header, rows);
    out += "slope log(M*Gamma*t) vs log N: " + num(s.pmr_slope, 4) + "\n";
    out += "slope log(M'*Gamma'*t) vs log N: " + num(s.baseline_slope, 4) + "\n";
    if (gates) out += "slope log(r*step_gates) vs log N: " + num(s.gate_slope, 4) + "\n";
    return out;
}

inline json sweep_to_json(const std::vector<BoundSweepRow> &rows, double dt, double dE, std::uint64_t seed) {
    json out = json::array();
    for (const auto &r : rows)
        out.push_back({{"q", r.q},
                       {"K", r.K},
                       {"samples", r.samples},
                       {"max_error", r.max_error},
                       {"bound", r.bound},
                       {"max_ratio", r.max_ratio},
                       {"worst_case", r.worst_case},
                       {"holds", r.holds}});
    return {{"dt", dt}, {"dE", dE}, {"seed", seed}, {"rows", out}};
}

inline std::string sweep_table(const std::vector<BoundSweepRow> &rows) {
    std::vector<std::vector<std::string>> out;
    for (const auto &r : rows)
        out.push_back({std::to_string(r.q), std::to_string(r.K), std::to_string(r.samples), num(r.max_error),
                       num(r.bound), num(r.max_ratio, 4), num(r.worst_case), r.holds ? "yes" : "NO"});
    return table({"q", "K", "samples", "max_error", "bound", "ratio", "worst_case", "holds"}, out);
}

inline json error_to_json(ErrorKind kind, const std::string &message) {
    return {{"error", std::string(to_string(kind))}, {"exit_code", static_cast<int>(kind)}, {"message", message}};
}

}  // namespace pmrsim::io
