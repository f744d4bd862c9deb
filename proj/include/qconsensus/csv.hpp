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

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace qcons {

/// Locale-independent %.17g form, which round-trips every double. Throws CertificateError for NaN or Inf.
std::string format_double(double value);

/// Comma-separated file with a leading "# ..." comment line and a header.
class CsvWriter {
   public:
    /// Throws ValidationError if the file cannot be created.
    CsvWriter(const std::filesystem::path& path, std::string_view comment, const std::vector<std::string>& header);

    CsvWriter& cell(std::string_view text);
    CsvWriter& cell(double value);
    CsvWriter& cell(std::size_t value);
    void end_row();

   private:
    std::ofstream out_;
    bool row_started_ = false;
    std::size_t columns_ = 0;
    std::size_t in_row_ = 0;
};

}  // namespace qcons
