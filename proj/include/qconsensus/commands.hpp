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

// Command-line front end. Subcommands: classify, evolve, spectrum,
// correspond, nogo, ensemble.

#pragma once

#include <iosfwd>

#include "json.hpp"
#include "qconsensus/consensus.hpp"
#include "qconsensus/superoperator.hpp"

namespace qcons {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitCertificate = 2,
    kExitResource = 3,
};

/// Environment variable that overrides outputs.dir of every scenario; the
/// --output-dir flag takes precedence over it.
inline constexpr const char* kOutputDirEnv = "QCONSENSUS_OUTPUT_DIR";

/// Parses argv, runs one subcommand and maps exceptions to exit codes.
/// Reports go to `out` as JSON; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

nlohmann::json to_json(const ConsensusReport& report);
nlohmann::json to_json(const SpectralCertificate& cert);
nlohmann::json to_json(const NogoReport& report);

/// Throws CertificateError if the document holds a NaN or infinity.
void require_finite(const nlohmann::json& doc);

}  // namespace qcons
