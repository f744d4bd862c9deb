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

#include "qconsensus/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qconsensus/errors.hpp"

namespace qcons {

using nlohmann::json;

namespace {

[[noreturn]] void fail(std::string_view field, std::string_view problem) {
    throw ValidationError(std::string(field) + ": " + std::string(problem));
}

std::string join(std::string_view parent, std::string_view child) {
    return std::string(parent) + "." + std::string(child);
}

std::string index(std::string_view parent, std::size_t i) {
    return std::string(parent) + "[" + std::to_string(i) + "]";
}

const json* find(const json& obj, std::string_view key) {
    const auto it = obj.find(std::string(key));
    return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, std::string_view key, std::string_view path) {
    if (const auto* v = find(obj, key)) return *v;
    fail(path, "required field is missing");
}

void require_object(const json& v, std::string_view path) {
    if (!v.is_object()) fail(path, "must be an object");
}

std::uint64_t as_uint(const json& v, std::string_view path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        if (v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
        fail(path, "must be non-negative");
    }
    fail(path, "must be a non-negative integer");
}

double as_double(const json& v, std::string_view path) {
    if (!v.is_number()) fail(path, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "must be finite");
    return d;
}

std::string as_string(const json& v, std::string_view path) {
    if (!v.is_string()) fail(path, "must be a string");
    return v.get<std::string>();
}

// Runs `fn`, prefixing library validation messages with the field path.
template <class Fn>
auto at_field(std::string_view path, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        if (msg.rfind(std::string(path), 0) == 0) throw;
        fail(path, msg);
    }
}

std::vector<std::vector<double>> real_rows(const json& v, std::string_view path) {
    if (!v.is_array() || v.empty()) fail(path, "must be a non-empty array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto row_path = index(path, i);
        if (!v[i].is_array() || v[i].size() != v.size()) fail(row_path, "must be a row of " + std::to_string(v.size()) + " numbers");
        std::vector<double> row;
        for (std::size_t j = 0; j < v[i].size(); ++j) {
            row.push_back(as_double(v[i][j], index(row_path, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

NetworkShape parse_shape(const json& doc) {
    const auto& v = require(doc, "shape", "shape");
    require_object(v, "shape");
    const auto m = as_uint(require(v, "m", "shape.m"), "shape.m");
    const auto n = find(v, "n") ? as_uint(*find(v, "n"), "shape.n") : 2;
    if (m < 1) fail("shape.m", "must be at least 1");
    if (n < 2) fail("shape.n", "must be at least 2");
    if (m > 64 || n > 4096) fail("shape", "exceeds the supported dimension");
    try {
        return NetworkShape(m, n);
    } catch (const ResourceError& e) {
        throw ResourceError(std::string("shape: ") + e.what());
    }
}

InteractionGraph parse_graph(const json& doc, const NetworkShape& shape) {
    const auto* v = find(doc, "graph");
    if (v == nullptr) return InteractionGraph::path(shape);
    if (v->is_string()) {
        const auto kind = v->get<std::string>();
        if (kind == "path") return InteractionGraph::path(shape);
        if (kind == "complete") return InteractionGraph::complete(shape);
        fail("graph", "unknown graph name '" + kind + "' (expected path or complete)");
    }
    require_object(*v, "graph");
    const auto& edges_json = require(*v, "edges", "graph.edges");
    if (!edges_json.is_array()) fail("graph.edges", "must be an array of [j, k] pairs");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < edges_json.size(); ++i) {
        const auto path = index("graph.edges", i);
        const auto& e = edges_json[i];
        if (!e.is_array() || e.size() != 2) fail(path, "must be a pair [j, k] of 1-based sites");
        const auto a = as_uint(e[0], index(path, 0));
        const auto b = as_uint(e[1], index(path, 1));
        if (a < 1 || a > shape.sites()) fail(index(path, 0), "site must be in 1.." + std::to_string(shape.sites()));
        if (b < 1 || b > shape.sites()) fail(index(path, 1), "site must be in 1.." + std::to_string(shape.sites()));
        edges.push_back({a - 1, b - 1});
    }
    std::vector<double> weights;
    if (const auto* w = find(*v, "weights")) {
        if (!w->is_array()) fail("graph.weights", "must be an array of numbers");
        for (std::size_t i = 0; i < w->size(); ++i) {
            weights.push_back(as_double((*w)[i], index("graph.weights", i)));
        }
    }
    return at_field("graph", [&] { return InteractionGraph(shape, std::move(edges), std::move(weights)); });
}

GossipConfig parse_gossip(const json& doc, const InteractionGraph& graph) {
    const auto& v = require(doc, "gossip", "gossip");
    require_object(v, "gossip");
    GossipConfig cfg;
    cfg.alpha = as_double(require(v, "alpha", "gossip.alpha"), "gossip.alpha");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) fail("gossip.alpha", "must lie in the open interval (0, 1)");
    if (const auto* s = find(v, "strategy")) {
        const auto name = as_string(*s, "gossip.strategy");
        const auto parsed = parse_strategy(name);
        if (!parsed) fail("gossip.strategy", "unknown strategy '" + name + "' (expected cyclic, random, synchronous or expected)");
        cfg.strategy = *parsed;
    }
    if (const auto* s = find(v, "steps")) cfg.steps = as_uint(*s, "gossip.steps");
    if (const auto* s = find(v, "seed")) {
        cfg.seed = as_uint(*s, "gossip.seed");
    } else if (cfg.strategy == Strategy::kRandom) {
        fail("gossip.seed", "required for the random strategy");
    }
    if (const auto* s = find(v, "cycle_order")) {
        if (!s->is_array()) fail("gossip.cycle_order", "must be an array of 1-based edge indices");
        for (std::size_t i = 0; i < s->size(); ++i) {
            const auto path = index("gossip.cycle_order", i);
            const auto e = as_uint((*s)[i], path);
            if (e < 1 || e > graph.edges().size()) fail(path, "edge index must be in 1.." + std::to_string(graph.edges().size()));
            cfg.cycle_order.push_back(e - 1);
        }
    }
    if (const auto* s = find(v, "stop_when_converged")) {
        if (!s->is_boolean()) fail("gossip.stop_when_converged", "must be a boolean");
        cfg.stop_when_converged = s->get<bool>();
    }
    at_field("gossip", [&] { cfg.validate(graph); });
    return cfg;
}

}  // namespace

NamedObservable parse_observable(const json& value, std::string_view field) {
    if (value.is_string()) {
        const auto name = value.get<std::string>();
        if (auto m = named_pauli(name)) return {name, *m};
        fail(field, "unknown observable '" + name + "' (expected x, y, z, identity or a matrix)");
    }
    if (!value.is_object()) fail(field, "must be a name or an object with real/imag rows");
    const auto re = real_rows(require(value, "real", join(field, "real")), join(field, "real"));
    std::vector<std::vector<double>> im;
    if (const auto* v = find(value, "imag")) {
        im = real_rows(*v, join(field, "imag"));
        if (im.size() != re.size()) fail(join(field, "imag"), "must have the same size as real");
    }
    ComplexMatrix m(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        for (std::size_t j = 0; j < re.size(); ++j) {
            m(i, j) = Complex{re[i][j], im.empty() ? 0.0 : im[i][j]};
        }
    }
    if (!m.is_hermitian()) fail(field, "matrix is not Hermitian");
    std::string name = "matrix";
    if (const auto* v = find(value, "name")) name = as_string(*v, join(field, "name"));
    return {name, m};
}

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) fail("$", "scenario must be a JSON object");
    const auto schema = as_string(require(doc, "schema", "schema"), "schema");
    if (schema != kScenarioSchema) fail("schema", "unsupported schema '" + schema + "', expected " + std::string(kScenarioSchema));

    std::string name = "scenario";
    if (const auto* v = find(doc, "name")) name = as_string(*v, "name");

    const auto shape = parse_shape(doc);
    auto graph = parse_graph(doc, shape);
    auto gossip = parse_gossip(doc, graph);

    const auto spec = as_string(require(doc, "initial_state", "initial_state"), "initial_state");
    auto rho0 = at_field("initial_state", [&] { return parse_state_spec(spec, shape); });
    if (!(rho0.shape() == shape)) {
        fail("initial_state", "'" + spec + "' describes " + std::to_string(rho0.shape().sites()) + " sites of dimension " +
                                  std::to_string(rho0.shape().local_dim()) + ", but shape is m=" +
                                  std::to_string(shape.sites()) + ", n=" + std::to_string(shape.local_dim()));
    }

    NamedObservable sigma{"z", pauli_z()};
    if (const auto* v = find(doc, "sigma")) sigma = parse_observable(*v, "sigma");
    if (sigma.matrix.dim() != shape.local_dim()) {
        fail("sigma", "dimension " + std::to_string(sigma.matrix.dim()) + " does not match shape.n = " + std::to_string(shape.local_dim()));
    }

    std::vector<NamedObservable> tracked;
    if (const auto* v = find(doc, "observables_to_track")) {
        if (!v->is_array()) fail("observables_to_track", "must be an array");
        for (std::size_t i = 0; i < v->size(); ++i) {
            const auto path = index("observables_to_track", i);
            auto obs = parse_observable((*v)[i], path);
            if (obs.matrix.dim() != shape.local_dim()) fail(path, "dimension does not match shape.n");
            tracked.push_back(std::move(obs));
        }
    }

    EnsembleSpec ensemble;
    if (const auto* v = find(doc, "ensemble")) {
        require_object(*v, "ensemble");
        if (const auto* t = find(*v, "trials")) ensemble.trials = as_uint(*t, "ensemble.trials");
        if (const auto* t = find(*v, "horizon")) ensemble.horizon = as_uint(*t, "ensemble.horizon");
        if (const auto* t = find(*v, "eps")) ensemble.eps = as_double(*t, "ensemble.eps");
        if (!(ensemble.eps > 0.0)) fail("ensemble.eps", "must be positive");
    }

    OutputSpec outputs;
    if (const auto* v = find(doc, "outputs")) {
        require_object(*v, "outputs");
        if (const auto* d = find(*v, "dir")) outputs.dir = as_string(*d, "outputs.dir");
        if (const auto* p = find(*v, "prefix")) {
            outputs.prefix = as_string(*p, "outputs.prefix");
            if (outputs.prefix.find('/') != std::string::npos) fail("outputs.prefix", "must not contain '/'");
        }
    }

    return Scenario{std::move(name), shape,           std::move(graph),    std::move(gossip),
                    spec,            std::move(rho0), std::move(sigma),    std::move(tracked),
                    ensemble,        std::move(outputs), fnv1a64(doc.dump())};
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError(path.string() + ": cannot open scenario file");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": invalid JSON at byte " + std::to_string(e.byte));
    }
    return parse_scenario(doc);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
        value >>= 4;
    }
    return out;
}

}  // namespace qcons
