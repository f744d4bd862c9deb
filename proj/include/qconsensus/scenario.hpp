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

// Scenario files (JSON, schema "qconsensus.scenario/1"):
//
//   {
//     "schema": "qconsensus.scenario/1",
//     "name": "path4",
//     "shape": {"m": 4, "n": 2},
//     "graph": {"edges": [[1,2],[2,3],[3,4]], "weights": [..]},   // 1-based
//     "gossip": {"alpha": 0.5, "strategy": "random", "steps": 300,
//                "seed": 7, "cycle_order": [1,2,3]},             // 1-based
//     "initial_state": "1010",
//     "sigma": "z"  |  {"real": [[..]], "imag": [[..]]},
//     "observables_to_track": ["x", "y"],
//     "ensemble": {"trials": 200, "horizon": 500, "eps": 1e-10},
//     "outputs": {"dir": "out", "prefix": "path4_random_"}
//   }
//
// "graph" may also be the string "path" or "complete". Only "schema",
// "shape", "initial_state" and "gossip.alpha" are required.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qconsensus/gossip.hpp"

namespace qcons {

inline constexpr std::string_view kScenarioSchema = "qconsensus.scenario/1";
inline constexpr std::string_view kManifestSchema = "qconsensus.manifest/1";
inline constexpr std::string_view kToolVersion = "0.1.0";

struct NamedObservable {
    std::string name;
    ComplexMatrix matrix;
};

struct EnsembleSpec {
    std::size_t trials = 200;
    std::size_t horizon = 500;
    double eps = 1e-10;
};

struct OutputSpec {
    std::filesystem::path dir = ".";
    std::string prefix;
};

struct Scenario {
    std::string name;
    NetworkShape shape;
    InteractionGraph graph;
    GossipConfig gossip;
    std::string initial_state_spec;
    DensityOperator rho0;
    NamedObservable sigma;
    std::vector<NamedObservable> tracked;
    EnsembleSpec ensemble;
    OutputSpec outputs;
    /// FNV-1a of the compact JSON serialization of the document.
    std::uint64_t hash = 0;
};

/// Validates a parsed document. Errors are ValidationError with a message
/// of the form "<field path>: <problem>", e.g. "gossip.alpha: must lie in
/// (0, 1)".
Scenario parse_scenario(const nlohmann::json& doc);

/// Reads and parses a scenario file; JSON syntax errors report the byte
/// offset.
Scenario load_scenario(const std::filesystem::path& path);

/// "x", "y", "z", "identity", or {"real": [[..]], "imag": [[..]]} with an
/// optional "imag". `field` prefixes error messages.
NamedObservable parse_observable(const nlohmann::json& value, std::string_view field);

std::uint64_t fnv1a64(std::string_view bytes);
/// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

}  // namespace qcons
