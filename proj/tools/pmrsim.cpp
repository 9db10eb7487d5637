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

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "pmrsim/io.hpp"
#include "pmrsim/pmrsim.hpp"

namespace {

using namespace pmrsim;
using io::json;

struct Options {
    std::string hamiltonian;
    std::string state;
    std::string params;
    std::string model;
    std::string out = "-";
    std::string report;
    std::string qasm;
    std::string counts;
    std::string format = "table";
    std::string alpha = "binary";
    std::string reciprocal = "exact";
    std::string geometry;
    double eps = 0.01;
    double time = 1.0;
    double dt = 1.0;
    double de = 1.0;
    int qmax = 6;
    int samples = 200;
    std::vector<int> ks{1, 2, 4, 8};
    std::vector<int> sizes{8, 16, 32, 64};
    std::size_t dense_limit = kDefaultDenseLimit;
    std::uint64_t term_budget = kDefaultTermBudget;
    std::uint64_t seed = 1;
    bool gates = false;
};

/// Accepts either a Pauli file (decomposed on load) or a PMR file.
PmrHamiltonian load_pmr(const Options &o) {
    require(!o.hamiltonian.empty(), ErrorKind::Contract, "--hamiltonian is required");
    const json j = io::read_json(o.hamiltonian);
    if (j.is_object() && j.contains("d0")) return io::pmr_from_json(j);
    DecomposeOptions d;
    d.dense_limit = o.dense_limit;
    return pmr_decompose(io::pauli_from_json(j), d);
}

void check_eps_time(const Options &o, bool allow_zero_time) {
    require(o.eps > 0.0 && o.eps < 1.0, ErrorKind::Contract, "--eps must lie in (0, 1)");
    require(allow_zero_time ? o.time >= 0.0 : o.time > 0.0, ErrorKind::Contract,
            allow_zero_time ? "--time must be nonnegative" : "--time must be positive");
}

int cmd_decompose(const Options &o) {
    require(!o.hamiltonian.empty(), ErrorKind::Contract, "--hamiltonian is required");
    DecomposeOptions d;
    d.dense_limit = o.dense_limit;
    const PmrHamiltonian h = pmr_decompose(io::pauli_from_json(io::read_json(o.hamiltonian)), d);
    io::write_text(o.out, io::dump(io::pmr_to_json(h)));
    return 0;
}

int cmd_params(const Options &o) {
    check_eps_time(o, false);
    const SimParams p = choose_params(o.eps, o.time, load_pmr(o));
    io::write_text(o.out, io::dump(io::params_to_json(p)));
    return 0;
}

int cmd_simulate(const Options &o) {
    check_eps_time(o, true);
    require(!o.state.empty(), ErrorKind::Contract, "--state is required");
    const std::string raw = io::read_text(o.state);
    const Vector psi0 = io::state_from_json(io::parse_json(raw, "'" + o.state + "'"));
    const PmrHamiltonian h = load_pmr(o);
    require(psi0.size() == (Eigen::Index{1} << h.n), ErrorKind::Dimension,
            "state length " + std::to_string(psi0.size()) + " does not match 2^" + std::to_string(h.n));
    if (o.time == 0.0) {
        // The evolution is the identity: emit the input bytes unchanged.
        io::write_text(o.out, raw);
        return 0;
    }
    const SimResult res = simulate(h, psi0, o.eps, o.time, o.term_budget, o.dense_limit);
    io::write_text(o.out, io::dump(io::state_to_json(res.psi)));
    const std::string report = io::dump(io::report_to_json(res.report));
    if (!o.report.empty()) {
        io::write_text(o.report, report);
    } else if (o.out != "-") {
        std::cout << report;
    }
    return 0;
}

AlphaMode parse_alpha(const std::string &s) {
    if (s == "binary") return AlphaMode::BinarySearch;
    if (s == "membership") return AlphaMode::Membership;
    if (s == "lookup") return AlphaMode::Lookup;
    fail(ErrorKind::Parse, "--alpha must be binary, membership or lookup");
}

ReciprocalMode parse_reciprocal(const std::string &s) {
    if (s == "exact") return ReciprocalMode::Exact;
    if (s == "binary") return ReciprocalMode::Binary;
    fail(ErrorKind::Parse, "--reciprocal must be exact or binary");
}

int cmd_compile(const Options &o) {
    const PmrHamiltonian h = load_pmr(o);
    SimParams p;
    if (!o.params.empty()) {
        p = io::params_from_json(io::read_json(o.params));
    } else {
        check_eps_time(o, false);
        p = choose_params(o.eps, o.time, h);
    }
    require(p.M == static_cast<int>(h.num_terms()), ErrorKind::Contract,
            "parameters were chosen for M = " + std::to_string(p.M) + " but the Hamiltonian has " +
                std::to_string(h.num_terms()) + " terms");
    require(p.Q >= 1, ErrorKind::Contract, "compile: Q = 0, nothing to compile (the Hamiltonian has no hop terms)");
    CompileOptions opt;
    opt.alpha = parse_alpha(o.alpha);
    opt.reciprocal = parse_reciprocal(o.reciprocal);
    const CircuitLayout L = make_layout(h, p, opt);
    const Circuit c = compile_lcu_step(L, h, p);
    validate(c);
    io::write_text(o.out, to_text(c));
    if (!o.qasm.empty()) io::write_text(o.qasm, to_qasm(c));
    const std::string counts = io::dump(io::counts_to_json(gate_count(c, static_cast<int>(h.n))));
    if (!o.counts.empty()) {
        io::write_text(o.counts, counts);
    } else if (o.out != "-") {
        std::cout << counts;
    }
    return 0;
}

int cmd_verify_dd(const Options &o) {
    const auto rows = verify_dd_bound(o.qmax, o.dt, o.de, o.ks, o.samples, o.seed, o.term_budget);
    if (o.format == "json") {
        io::write_text(o.out, io::dump(io::sweep_to_json(rows, o.dt, o.de, o.seed)));
    } else {
        io::write_text(o.out, io::sweep_table(rows));
    }
    bool ok = true;
    for (const auto &r : rows) ok = ok && r.holds;
    return ok ? 0 : 1;
}

int cmd_estimate(const Options &o) {
    require(!o.model.empty(), ErrorKind::Contract, "--model is required");
    ModelSpec spec = io::model_spec_from_json(io::read_json(o.model));
    if (!o.geometry.empty()) spec.geometry = parse_geometry(o.geometry);
    check_eps_time(o, false);
    CompileOptions opt;
    opt.alpha = parse_alpha(o.alpha);
    opt.reciprocal = parse_reciprocal(o.reciprocal);
    const ResourceSummary s = resource_report(spec, o.sizes, o.time, o.eps, o.gates, opt);
    if (o.format == "json") {
        io::write_text(o.out, io::dump(io::resource_to_json(spec, s, o.time, o.eps)));
    } else {
        io::write_text(o.out, io::resource_table(s));
    }
    return 0;
}

void print_error(ErrorKind kind, const std::string &message) {
    std::cerr << io::error_to_json(kind, message).dump() << "\n";
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"PMR/LCU Hamiltonian simulation toolkit"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--out", o.out, "Output path, '-' for stdout");
        sub->add_option("--dense-limit", o.dense_limit, "Largest qubit count handled densely")->check(CLI::PositiveNumber);
        sub->add_option("--term-budget", o.term_budget, "Largest term count summed")->check(CLI::PositiveNumber);
    };

    auto *dec = app.add_subcommand("decompose", "Pauli Hamiltonian file -> PMR file");
    dec->add_option("--hamiltonian", o.hamiltonian, "Pauli Hamiltonian JSON")->required();
    common(dec);

    auto *par = app.add_subcommand("params", "Simulation parameters for (eps, t)");
    par->add_option("--hamiltonian", o.hamiltonian, "Pauli or PMR Hamiltonian JSON")->required();
    par->add_option("--eps", o.eps, "Target precision");
    par->add_option("--time", o.time, "Evolution time");
    common(par);

    auto *sim = app.add_subcommand("simulate", "Evolve a state with the approximate step operator");
    sim->add_option("--hamiltonian", o.hamiltonian, "Pauli or PMR Hamiltonian JSON")->required();
    sim->add_option("--state", o.state, "Initial state JSON")->required();
    sim->add_option("--eps", o.eps, "Target precision");
    sim->add_option("--time", o.time, "Evolution time");
    sim->add_option("--report", o.report, "Report path");
    common(sim);

    auto *cmp = app.add_subcommand("compile", "Compile one LCU execution to circuit text");
    cmp->add_option("--hamiltonian", o.hamiltonian, "Pauli or PMR Hamiltonian JSON")->required();
    cmp->add_option("--params", o.params, "Parameter JSON (otherwise chosen from --eps/--time)");
    cmp->add_option("--eps", o.eps, "Target precision");
    cmp->add_option("--time", o.time, "Evolution time");
    cmp->add_option("--qasm", o.qasm, "Also write OpenQASM 2 to this path");
    cmp->add_option("--counts", o.counts, "Gate count JSON path");
    cmp->add_option("--alpha", o.alpha, "alpha unit: binary, membership or lookup");
    cmp->add_option("--reciprocal", o.reciprocal, "reciprocal encoding: exact or binary");
    common(cmp);

    auto *vdd = app.add_subcommand("verify-dd", "Random-input check of the divided-difference bound");
    vdd->add_option("--qmax", o.qmax, "Largest order")->check(CLI::NonNegativeNumber);
    vdd->add_option("--dt", o.dt, "Time step")->check(CLI::PositiveNumber);
    vdd->add_option("--de", o.de, "Largest consecutive input gap")->check(CLI::PositiveNumber);
    vdd->add_option("--K", o.ks, "Subdivision constants")->delimiter(',');
    vdd->add_option("--samples", o.samples, "Random instances per (q, K)")->check(CLI::PositiveNumber);
    vdd->add_option("--seed", o.seed, "Random seed");
    vdd->add_option("--format", o.format, "table or json")->check(CLI::IsMember({"table", "json"}));
    common(vdd);

    auto *est = app.add_subcommand("estimate", "Resource scaling of a model family");
    est->add_option("--model", o.model, "Model spec JSON")->required();
    est->add_option("--N", o.sizes, "System sizes")->delimiter(',');
    est->add_option("--eps", o.eps, "Target precision");
    est->add_option("--time", o.time, "Evolution time");
    est->add_option("--geometry", o.geometry, "Rydberg geometry override")->check(CLI::IsMember({"chain", "clustered"}));
    est->add_option("--alpha", o.alpha, "alpha unit for gate counts");
    est->add_option("--reciprocal", o.reciprocal, "reciprocal encoding for gate counts");
    est->add_flag("--gates", o.gates, "Also count compiled gates per step");
    est->add_option("--format", o.format, "table or json")->check(CLI::IsMember({"table", "json"}));
    common(est);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        print_error(ErrorKind::Parse, e.what());
        return static_cast<int>(ErrorKind::Parse);
    }

    try {
        if (*dec) return cmd_decompose(o);
        if (*par) return cmd_params(o);
        if (*sim) return cmd_simulate(o);
        if (*cmp) return cmd_compile(o);
        if (*vdd) return cmd_verify_dd(o);
        if (*est) return cmd_estimate(o);
    } catch (const Error &e) {
        print_error(e.kind(), e.what());
        return e.exit_code();
    } catch (const std::bad_alloc &) {
        print_error(ErrorKind::Budget, "out of memory; lower --dense-limit or --term-budget");
        return static_cast<int>(ErrorKind::Budget);
    }
    return 0;
}
