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
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "gtest/gtest.h"

#include "qconsensus/csv.hpp"
#include "qconsensus/errors.hpp"

using namespace qcons;
using nlohmann::json;

namespace {

json base() {
    return json::parse(R"({
      "schema": "qconsensus.scenario/1",
      "name": "t",
      "shape": {"m": 3, "n": 2},
      "graph": {"edges": [[1, 2], [2, 3]]},
      "gossip": {"alpha": 0.5, "strategy": "cyclic", "steps": 10},
      "initial_state": "011"
    })");
}

// Message of the ValidationError thrown by parse_scenario, or "" if none.
std::string error_of(const json& doc) {
    try {
        parse_scenario(doc);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

TEST(Scenario, ParsesAndConvertsToZeroBased) {
    auto doc = base();
    doc["gossip"]["cycle_order"] = {2, 1};
    const auto sc = parse_scenario(doc);
    EXPECT_EQ(sc.shape, NetworkShape(3, 2));
    ASSERT_EQ(sc.graph.edges().size(), 2u);
    EXPECT_EQ(sc.graph.edges()[0], (Edge{0, 1}));
    EXPECT_EQ(sc.graph.edges()[1], (Edge{1, 2}));
    EXPECT_EQ(sc.gossip.cycle_order, (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(sc.gossip.strategy, Strategy::kCyclic);
    EXPECT_EQ(sc.sigma.name, "z");
    EXPECT_EQ(sc.rho0.matrix(), basis_state("011").matrix());
    EXPECT_EQ(sc.ensemble.trials, 200u);
    EXPECT_EQ(sc.outputs.dir, std::filesystem::path("."));
}

TEST(Scenario, NamedGraphsAndDefaults) {
    auto doc = base();
    doc["graph"] = "complete";
    EXPECT_EQ(parse_scenario(doc).graph.edges().size(), 3u);
    doc.erase("graph");
    EXPECT_EQ(parse_scenario(doc).graph.edges(), InteractionGraph::path(NetworkShape(3, 2)).edges());
    doc["graph"] = "ring";
    EXPECT_TRUE(starts_with(error_of(doc), "graph:"));
}

TEST(Scenario, ErrorsNameTheField) {
    const std::vector<std::pair<std::string, std::function<void(json&)>>> cases{
        {"schema:", [](json& d) { d["schema"] = "other/2"; }},
        {"shape.m:", [](json& d) { d["shape"].erase("m"); }},
        {"shape.n:", [](json& d) { d["shape"]["n"] = 1; }},
        {"graph.edges[1][1]:", [](json& d) { d["graph"]["edges"][1][1] = 4; }},
        {"graph.edges[0]:", [](json& d) { d["graph"]["edges"][0] = {1}; }},
        {"graph:", [](json& d) { d["graph"]["edges"][1] = {1, 1}; }},
        {"gossip.alpha:", [](json& d) { d["gossip"]["alpha"] = 1.0; }},
        {"gossip.alpha:", [](json& d) { d["gossip"]["alpha"] = 0.0; }},
        {"gossip.strategy:", [](json& d) { d["gossip"]["strategy"] = "greedy"; }},
        {"gossip.seed:", [](json& d) { d["gossip"]["strategy"] = "random"; }},
        {"gossip.steps:", [](json& d) { d["gossip"]["steps"] = -1; }},
        {"gossip.cycle_order[0]:", [](json& d) { d["gossip"]["cycle_order"] = {3}; }},
        {"initial_state:", [](json& d) { d["initial_state"] = "01"; }},
        {"initial_state:", [](json& d) { d["initial_state"] = "rhoQ"; }},
        {"sigma:", [](json& d) { d["sigma"] = "w"; }},
        {"sigma:", [](json& d) { d["sigma"] = json::parse(R"({"real": [[0, 1], [0, 0]]})"); }},
        {"observables_to_track[1]:", [](json& d) { d["observables_to_track"] = {"x", "q"}; }},
        {"ensemble.eps:", [](json& d) { d["ensemble"] = {{"eps", 0.0}}; }},
        {"outputs.prefix:", [](json& d) { d["outputs"] = {{"prefix", "a/b"}}; }},
    };
    for (const auto& [prefix, mutate] : cases) {
        auto doc = base();
        mutate(doc);
        const auto msg = error_of(doc);
        EXPECT_TRUE(starts_with(msg, prefix)) << "expected '" << prefix << "', got '" << msg << "'";
    }
}

TEST(Scenario, OversizedShapeIsAResourceError) {
    auto doc = base();
    doc["shape"] = {{"m", 20}, {"n", 2}};
    doc["initial_state"] = "rhoC";
    EXPECT_THROW(parse_scenario(doc), ResourceError);
}

TEST(Scenario, MatrixObservable) {
    const auto obs = parse_observable(json::parse(R"({"name": "h", "real": [[1, 0.5], [0.5, -1]], "imag": [[0, 0.25], [-0.25, 0]]})"),
                                      "sigma");
    EXPECT_EQ(obs.name, "h");
    EXPECT_EQ(obs.matrix(0, 1), Complex(0.5, 0.25));
    EXPECT_EQ(obs.matrix(1, 0), Complex(0.5, -0.25));
    EXPECT_EQ(parse_observable("y", "sigma").matrix, pauli_y());
}

TEST(Scenario, HashIsStableAndSensitive) {
    const auto a = parse_scenario(base()).hash;
    EXPECT_EQ(a, parse_scenario(json::parse(base().dump())).hash);
    auto doc = base();
    doc["gossip"]["alpha"] = 0.25;
    EXPECT_NE(parse_scenario(doc).hash, a);
    EXPECT_EQ(hex64(a).size(), 16u);
}

TEST(Scenario, Fnv1aReferenceValues) {
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
    EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Scenario, LoadReportsUnreadableAndMalformedFiles) {
    EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), ValidationError);
    const auto path = std::filesystem::temp_directory_path() / "qconsensus_bad_scenario.json";
    std::ofstream(path) << "{ not json";
    EXPECT_THROW(load_scenario(path), ValidationError);
    std::filesystem::remove(path);
}

TEST(Csv, DoublesRoundTrip) {
    Rng rng(3);
    for (int i = 0; i < 2000; ++i) {
        const double x = rng.normal() * std::pow(10.0, static_cast<double>(static_cast<int>(rng.next() % 40) - 20));
        const auto text = format_double(x);
        EXPECT_EQ(std::strtod(text.c_str(), nullptr), x) << text;
    }
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(-1.0), "-1");
}

TEST(Csv, NonFiniteRejected) {
    EXPECT_THROW(format_double(std::numeric_limits<double>::quiet_NaN()), CertificateError);
    EXPECT_THROW(format_double(std::numeric_limits<double>::infinity()), CertificateError);
}

TEST(Csv, WriterChecksColumns) {
    const auto path = std::filesystem::temp_directory_path() / "qconsensus_writer.csv";
    {
        CsvWriter w(path, "note", {"a", "b"});
        w.cell(std::size_t{1}).cell(0.25);
        w.end_row();
        w.cell("x");
        EXPECT_ANY_THROW(w.end_row());
    }
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_TRUE(starts_with(ss.str(), "# note\na,b\n1,0.25\n"));
    std::filesystem::remove(path);
    EXPECT_THROW(CsvWriter("/nonexistent/dir/out.csv", "", {"a"}), ValidationError);
}
