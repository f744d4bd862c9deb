// Copyright 2026 The qconsensus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qconsensus/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qconsensus/classical_gossip.hpp"
#include "qconsensus/csv.hpp"
#include "qconsensus/errors.hpp"
#include "qconsensus/scenario.hpp"

namespace qcons {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

json check_json(const ConsensusCheck& c) { return {{"holds", c.holds}, {"gap", c.gap}}; }

std::string edge_label(const InteractionGraph& graph, const EdgeChoice& choice, std::size_t t) {
    if (t == 0) return "none";
    if (!choice) return "all";
    const auto& e = graph.edges().at(*choice);
    return std::to_string(e.a + 1) + "-" + std::to_string(e.b + 1);
}

std::vector<std::string> site_columns(std::string_view stem, std::size_t m) {
    std::vector<std::string> out;
    for (std::size_t l = 1; l <= m; ++l) out.push_back(std::string(stem) + "_" + std::to_string(l));
    return out;
}

void write_json_file(const fs::path& path, const json& doc) {
    require_finite(doc);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError(path.string() + ": cannot create output file");
    out << doc.dump(2) << '\n';
}

void print_json(std::ostream& out, const json& doc) {
    require_finite(doc);
    out << doc.dump(2) << '\n';
}

// Output location and manifest bookkeeping shared by scenario commands.
class RunContext {
   public:
    RunContext(const Scenario& scenario, std::string command, const std::string& dir_flag)
        : scenario_(scenario), command_(std::move(command)), start_(Clock::now()) {
        if (!dir_flag.empty()) {
            dir_ = dir_flag;
        } else if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
            dir_ = env;
        } else {
            dir_ = scenario.outputs.dir;
        }
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw ValidationError("outputs.dir: cannot create '" + dir_.string() + "': " + ec.message());
    }

    std::string file_name(std::string_view stem) const { return scenario_.outputs.prefix + std::string(stem); }
    fs::path path(std::string_view stem) const { return dir_ / file_name(stem); }
    std::string manifest_name() const { return file_name(command_ + ".manifest.json"); }
    std::string csv_comment() const {
        return "manifest=" + manifest_name() + " scenario_hash=" + hex64(scenario_.hash);
    }

    void add_output(std::string_view stem) { outputs_.push_back(file_name(stem)); }

    json header() const {
        return {{"command", command_},
                {"scenario", scenario_.name},
                {"scenario_hash", hex64(scenario_.hash)},
                {"manifest", manifest_name()}};
    }

    void write_manifest(const std::string& termination, const std::vector<std::uint64_t>& seeds) const {
        const double wall = std::chrono::duration<double>(Clock::now() - start_).count();
        json seed_list = json::array();
        for (auto s : seeds) seed_list.push_back(s);
        write_json_file(dir_ / manifest_name(), {{"schema", kManifestSchema},
                                                 {"tool_version", kToolVersion},
                                                 {"command", command_},
                                                 {"scenario", scenario_.name},
                                                 {"scenario_hash", hex64(scenario_.hash)},
                                                 {"seeds", seed_list},
                                                 {"wall_time_seconds", wall},
                                                 {"termination", termination},
                                                 {"outputs", outputs_}});
    }

   private:
    const Scenario& scenario_;
    std::string command_;
    Clock::time_point start_;
    fs::path dir_;
    std::vector<std::string> outputs_;
};

std::vector<std::uint64_t> scenario_seeds(const Scenario& s) {
    if (s.gossip.strategy == Strategy::kRandom) return {s.gossip.seed};
    return {};
}

// --- classify -------------------------------------------------------------

struct ClassifyOptions {
    std::string state;
    std::string sigma = "z";
    std::string suite;
    std::size_t m = 0;
    std::size_t n = 2;
    double tol = kDefaultConsensusTol;
};

NamedObservable sigma_from_flag(const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        json doc;
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ValidationError("--sigma: invalid JSON at byte " + std::to_string(e.byte));
        }
        return parse_observable(doc, "--sigma");
    }
    return parse_observable(json(text), "--sigma");
}

json classify_one(const std::string& state, const NamedObservable& sigma, std::optional<NetworkShape> shape,
                  double tol, std::string_view field) {
    DensityOperator rho = [&] {
        try {
            return parse_state_spec(state, shape);
        } catch (const ValidationError& e) {
            throw ValidationError(std::string(field) + ": " + e.what());
        }
    }();
    if (sigma.matrix.dim() != rho.shape().local_dim()) {
        throw ValidationError("sigma: dimension does not match the local dimension of '" + state + "'");
    }
    json out = to_json(classify(rho, Observable(sigma.matrix), tol));
    out["state"] = state;
    out["sigma"] = sigma.name;
    out["m"] = rho.shape().sites();
    out["n"] = rho.shape().local_dim();
    return out;
}

int cmd_classify(const ClassifyOptions& opt, std::ostream& out) {
    std::optional<NetworkShape> shape;
    if (opt.m > 0) shape = NetworkShape(opt.m, opt.n);
    if (!(opt.tol > 0.0)) throw ValidationError("--tol: must be positive");

    if (opt.suite.empty()) {
        if (opt.state.empty()) throw ValidationError("--state: required unless --suite is given");
        print_json(out, classify_one(opt.state, sigma_from_flag(opt.sigma), shape, opt.tol, "--state"));
        return kExitOk;
    }

    std::ifstream in(opt.suite, std::ios::binary);
    if (!in) throw ValidationError(opt.suite + ": cannot open suite file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw ValidationError(opt.suite + ": invalid JSON at byte " + std::to_string(e.byte));
    }
    if (!doc.is_object() || doc.value("schema", "") != "qconsensus.suite/1") {
        throw ValidationError("schema: expected qconsensus.suite/1");
    }
    if (!doc.contains("cases") || !doc["cases"].is_array()) throw ValidationError("cases: must be an array");
    const double tol = doc.contains("tolerance") ? doc["tolerance"].get<double>() : opt.tol;

    json results = json::array();
    std::vector<std::string> mismatches;
    for (std::size_t i = 0; i < doc["cases"].size(); ++i) {
        const auto& c = doc["cases"][i];
        const std::string field = "cases[" + std::to_string(i) + "]";
        if (!c.is_object() || !c.contains("state") || !c["state"].is_string()) {
            throw ValidationError(field + ".state: required string");
        }
        const auto sigma = c.contains("sigma") ? parse_observable(c["sigma"], field + ".sigma")
                                               : NamedObservable{"z", pauli_z()};
        json r = classify_one(c["state"].get<std::string>(), sigma, shape, tol, field + ".state");
        if (c.contains("expect")) {
            bool ok = true;
            for (const auto& [key, want] : c["expect"].items()) {
                if (!r.contains(key)) throw ValidationError(field + ".expect." + key + ": unknown class");
                if (r[key]["holds"] != want) {
                    ok = false;
                    mismatches.push_back(field + "." + key);
                }
            }
            r["matches_expectation"] = ok;
        }
        results.push_back(std::move(r));
    }
    json report = {{"suite", doc.value("name", opt.suite)}, {"tolerance", tol}, {"results", results}};
    report["mismatches"] = mismatches;
    print_json(out, report);
    return mismatches.empty() ? kExitOk : kExitCertificate;
}

// --- evolve ---------------------------------------------------------------

int cmd_evolve(const std::string& file, const std::string& dir_flag, std::ostream& out) {
    const auto scenario = load_scenario(file);
    RunContext ctx(scenario, "evolve", dir_flag);
    const auto result = evolve(scenario.rho0, scenario.graph, scenario.gossip, Observable(scenario.sigma.matrix));
    const auto m = scenario.shape.sites();

    std::vector<std::string> header{"t", "edge"};
    for (auto& c : site_columns("z", m)) header.push_back(c);
    for (const char* c : {"S_expect", "ssc_gap", "smc_defect"}) header.emplace_back(c);
    {
        CsvWriter csv(ctx.path("trajectory.csv"), ctx.csv_comment(), header);
        for (const auto& row : result.record.rows) {
            csv.cell(row.t).cell(edge_label(scenario.graph, row.edge, row.t));
            for (double z : row.z) csv.cell(z);
            csv.cell(row.s_expectation).cell(row.ssc_gap).cell(row.smc_defect);
            csv.end_row();
        }
    }
    ctx.add_output("trajectory.csv");

    const auto& first = result.record.rows.front();
    const auto& last = result.record.rows.back();
    double drift = 0.0;
    for (const auto& row : result.record.rows) drift = std::max(drift, std::abs(row.s_expectation - first.s_expectation));

    json tracked = json::object();
    for (const auto& obs : scenario.tracked) {
        std::vector<double> z;
        for (std::size_t l = 0; l < m; ++l) {
            z.push_back(trace_product(lift_local(obs.matrix, l, scenario.shape), result.final_state).real());
        }
        tracked[obs.name] = z;
    }

    json summary = ctx.header();
    summary["strategy"] = std::string(to_string(scenario.gossip.strategy));
    summary["alpha"] = scenario.gossip.alpha;
    summary["steps_requested"] = scenario.gossip.steps;
    summary["steps_run"] = last.t;
    summary["termination"] = result.termination;
    summary["converged"] = result.converged;
    summary["final_distance_to_symmetrized"] = last.ssc_gap;
    summary["final_smc_defect"] = last.smc_defect;
    summary["initial_z"] = first.z;
    summary["final_z"] = last.z;
    summary["S_expect_initial"] = first.s_expectation;
    summary["S_expect_max_drift"] = drift;
    summary["tracked_final"] = tracked;
    summary["warnings"] = result.warnings;
    summary["outputs"] = {ctx.file_name("trajectory.csv"), ctx.file_name("evolve.json")};
    write_json_file(ctx.path("evolve.json"), summary);
    ctx.add_output("evolve.json");
    ctx.write_manifest(result.termination, scenario_seeds(scenario));
    print_json(out, summary);
    return kExitOk;
}

// --- spectrum -------------------------------------------------------------

int cmd_spectrum(const std::string& file, const std::string& map, const std::string& dir_flag, std::ostream& out) {
    const auto scenario = load_scenario(file);
    if (scenario.shape.total_dim() > kMaxSuperoperatorTotalDim) {
        throw ResourceError("spectrum: total dimension " + std::to_string(scenario.shape.total_dim()) +
                            " exceeds the superoperator cap of " + std::to_string(kMaxSuperoperatorTotalDim));
    }
    RunContext ctx(scenario, "spectrum", dir_flag);
    const double alpha = scenario.gossip.alpha;

    Superoperator sop{scenario.shape, {}, map};
    double q0 = 1.0 - alpha;
    if (map == "synchronous") {
        sop = build_superoperator(synchronous_channel(scenario.graph, alpha), "synchronous");
    } else {
        auto order = scenario.gossip.cycle_order;
        if (order.empty()) {
            for (std::size_t e = 0; e < scenario.graph.edges().size(); ++e) order.push_back(e);
        }
        sop = cycle_superoperator(scenario.graph, order, alpha);
        q0 = std::pow(1.0 - alpha, static_cast<double>(order.size()));
    }
    const auto cert = spectral_certificate(sop, q0);
    const auto fixed = fixed_point_space(scenario.graph, alpha);

    json report = ctx.header();
    report["map"] = map;
    report["alpha"] = alpha;
    report["connected"] = scenario.graph.connected();
    report["certificate"] = to_json(cert);
    report["fixed_point_dimension"] = fixed.dimension;
    report["commutant_dimension"] = fixed.commutant_dimension;
    report["unit_eigenspace_matches_fixed_space"] = cert.unit_eigen_count == fixed.dimension;
    report["verdict"] = cert.pass && cert.unit_eigen_count == fixed.dimension ? "PASS" : "FAIL";
    report["outputs"] = {ctx.file_name("spectrum.json")};
    write_json_file(ctx.path("spectrum.json"), report);
    ctx.add_output("spectrum.json");
    ctx.write_manifest(report["verdict"].get<std::string>() == "PASS" ? "certified" : "certificate_failed", {});
    print_json(out, report);
    return report["verdict"] == "PASS" ? kExitOk : kExitCertificate;
}

// --- correspond -----------------------------------------------------------

int cmd_correspond(const std::string& file, const std::string& dir_flag, std::ostream& out) {
    const auto scenario = load_scenario(file);
    RunContext ctx(scenario, "correspond", dir_flag);
    const auto report = correspondence_run(scenario.rho0, Observable(scenario.sigma.matrix), scenario.graph,
                                           scenario.gossip);
    const auto m = scenario.shape.sites();
    {
        std::vector<std::string> header{"t", "edge"};
        for (auto& c : site_columns("z", m)) header.push_back(c);
        CsvWriter csv(ctx.path("quantum.csv"), ctx.csv_comment(), header);
        for (const auto& row : report.quantum.record.rows) {
            csv.cell(row.t).cell(edge_label(scenario.graph, row.edge, row.t));
            for (double z : row.z) csv.cell(z);
            csv.end_row();
        }
    }
    ctx.add_output("quantum.csv");
    {
        std::vector<std::string> header{"t"};
        for (auto& c : site_columns("x", m)) header.push_back(c);
        header.emplace_back("W");
        CsvWriter csv(ctx.path("classical.csv"), ctx.csv_comment(), header);
        for (std::size_t t = 0; t < report.classical.states.size(); ++t) {
            csv.cell(t);
            for (const auto& x : report.classical.states[t].values()) csv.cell(x[0]);
            csv.cell(report.classical.lyapunov[t]);
            csv.end_row();
        }
    }
    ctx.add_output("classical.csv");

    const auto& final_state = report.classical.states.back();
    double limit_error = 0.0;
    for (const auto& x : final_state.values()) limit_error = std::max(limit_error, std::abs(x[0] - report.predicted_limit));

    json doc = ctx.header();
    doc["steps"] = report.edges.size();
    doc["max_deviation"] = report.max_deviation;
    doc["predicted_limit"] = report.predicted_limit;
    doc["final_limit_error"] = limit_error;
    doc["lyapunov_monotone"] = report.classical.monotone;
    doc["outputs"] = {ctx.file_name("quantum.csv"), ctx.file_name("classical.csv"), ctx.file_name("correspond.json")};
    write_json_file(ctx.path("correspond.json"), doc);
    ctx.add_output("correspond.json");
    ctx.write_manifest("steps_exhausted", scenario_seeds(scenario));
    print_json(out, doc);
    return kExitOk;
}

// --- nogo -----------------------------------------------------------------

int cmd_nogo(const std::vector<std::size_t>& ns, std::ostream& out) {
    json results = json::array();
    for (auto n : ns) results.push_back(to_json(nogo_check(n)));
    print_json(out, {{"command", "nogo"}, {"results", results}});
    return kExitOk;
}

// --- ensemble -------------------------------------------------------------

int cmd_ensemble(const std::string& file, const std::string& dir_flag, std::ostream& out) {
    const auto scenario = load_scenario(file);
    RunContext ctx(scenario, "ensemble", dir_flag);
    const auto& spec = scenario.ensemble;
    const auto report = probability_one_convergence_experiment(scenario.graph, scenario.gossip.alpha, scenario.rho0,
                                                               spec.eps, spec.trials, spec.horizon,
                                                               scenario.gossip.seed);
    std::vector<std::uint64_t> seeds;
    {
        CsvWriter csv(ctx.path("ensemble.csv"), ctx.csv_comment(),
                      {"trial", "seed", "final_squared_distance", "success"});
        for (std::size_t i = 0; i < report.final_squared_distances.size(); ++i) {
            const auto seed = derive_stream_seed(scenario.gossip.seed, i);
            seeds.push_back(seed);
            const double d = report.final_squared_distances[i];
            csv.cell(i).cell(std::to_string(seed)).cell(d).cell(d <= spec.eps ? "1" : "0");
            csv.end_row();
        }
    }
    ctx.add_output("ensemble.csv");

    json doc = ctx.header();
    doc["trials"] = report.trials;
    doc["horizon"] = spec.horizon;
    doc["eps"] = spec.eps;
    doc["base_seed"] = scenario.gossip.seed;
    doc["successes"] = report.successes;
    doc["probability"] = report.probability;
    doc["max_distance_increase"] = report.max_distance_increase;
    doc["outputs"] = {ctx.file_name("ensemble.csv"), ctx.file_name("ensemble.json")};
    write_json_file(ctx.path("ensemble.json"), doc);
    ctx.add_output("ensemble.json");
    ctx.write_manifest("horizon_reached", seeds);
    print_json(out, doc);
    return kExitOk;
}

}  // namespace

json to_json(const ConsensusReport& r) {
    return {{"tolerance", r.tolerance},
            {"sigma_ec", check_json(r.sigma_ec)},
            {"rsc", check_json(r.rsc)},
            {"ssc", check_json(r.ssc)},
            {"smc", check_json(r.smc)},
            {"smc_pairwise_gap", r.smc_pairwise_gap},
            {"sigma_nondegenerate", r.sigma_nondegenerate}};
}

json to_json(const SpectralCertificate& c) {
    json eig = json::array();
    for (const auto& l : c.eigenvalues) eig.push_back({l.real(), l.imag()});
    return {{"identity_weight", c.identity_weight},
            {"eigenvalues", eig},
            {"disk_ok", c.disk_ok},
            {"max_disk_excess", c.max_disk_excess},
            {"all_real", c.all_real},
            {"in_unit_interval", c.in_unit_interval},
            {"unit_eigen_count", c.unit_eigen_count},
            {"peripheral_count", c.peripheral_count},
            {"spectral_gap", c.spectral_gap},
            {"pass", c.pass}};
}

json to_json(const NogoReport& r) {
    json out = {{"n", r.n}, {"lambda_max", r.lambda_max}, {"feasible", r.feasible}};
    if (r.pauli_joint_dim) {
        out["pauli_joint_dim"] = *r.pauli_joint_dim;
        out["pauli_feasible"] = *r.pauli_feasible;
    }
    return out;
}

void require_finite(const json& doc) {
    if (doc.is_number_float() && !std::isfinite(doc.get<double>())) {
        throw CertificateError("refusing to emit a non-finite number");
    }
    if (doc.is_structured()) {
        for (const auto& v : doc) require_finite(v);
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Consensus analysis and gossip simulation for networks of quantum subsystems"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    ClassifyOptions copt;
    auto* classify_cmd = app.add_subcommand("classify", "Classify a state against the four consensus notions");
    classify_cmd->add_option("--state", copt.state, "State spec: rhoA..rhoF, rhoG[:p[:m]], digits, random:<seed>");
    classify_cmd->add_option("--sigma", copt.sigma, "x, y, z, identity, or a JSON {real, imag} matrix")
        ->capture_default_str();
    classify_cmd->add_option("--suite", copt.suite, "Suite file (schema qconsensus.suite/1)");
    classify_cmd->add_option("--m", copt.m, "Number of sites for digit and random specs");
    classify_cmd->add_option("--n", copt.n, "Local dimension for digit and random specs")->capture_default_str();
    classify_cmd->add_option("--tol", copt.tol, "Consensus tolerance")->capture_default_str();

    std::string scenario_file;
    std::string dir_flag;
    auto add_scenario = [&](CLI::App* sub) {
        sub->add_option("scenario", scenario_file, "Scenario JSON file")->required();
        sub->add_option("--output-dir", dir_flag, std::string("Output directory (overrides ") + kOutputDirEnv + ")");
    };
    auto* evolve_cmd = app.add_subcommand("evolve", "Run gossip and write the trajectory CSV");
    add_scenario(evolve_cmd);
    std::string map = "synchronous";
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Spectral and fixed-point certificate of a gossip map");
    add_scenario(spectrum_cmd);
    spectrum_cmd->add_option("--map", map, "synchronous or cycle")
        ->check(CLI::IsMember({"synchronous", "cycle"}))
        ->capture_default_str();
    auto* correspond_cmd = app.add_subcommand("correspond", "Compare quantum expectations with classical gossip");
    add_scenario(correspond_cmd);
    std::vector<std::size_t> ns;
    auto* nogo_cmd = app.add_subcommand("nogo", "Check that no state is SMC for a Fourier pair of observables");
    nogo_cmd->add_option("--n", ns, "Local dimensions in 2..8 (default: all)");
    auto* ensemble_cmd = app.add_subcommand("ensemble", "Monte-Carlo convergence experiment over random trajectories");
    add_scenario(ensemble_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*classify_cmd) return cmd_classify(copt, out);
        if (*evolve_cmd) return cmd_evolve(scenario_file, dir_flag, out);
        if (*spectrum_cmd) return cmd_spectrum(scenario_file, map, dir_flag, out);
        if (*correspond_cmd) return cmd_correspond(scenario_file, dir_flag, out);
        if (*nogo_cmd) {
            if (ns.empty()) ns = {2, 3, 4, 5, 6, 7, 8};
            return cmd_nogo(ns, out);
        }
        if (*ensemble_cmd) return cmd_ensemble(scenario_file, dir_flag, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << '\n';
        return kExitResource;
    } catch (const CertificateError& e) {
        err << "certificate failure: " << e.what() << '\n';
        return kExitCertificate;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitCertificate;
    }
    return kExitValidation;
}

}  // namespace qcons
