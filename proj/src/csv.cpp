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

#include "qconsensus/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "qconsensus/errors.hpp"

namespace qcons {

std::string format_double(double value) {
    if (!std::isfinite(value)) {
        throw CertificateError("refusing to write a non-finite number");
    }
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    if (ec != std::errc{}) {
        throw CertificateError("number formatting failed");
    }
    return std::string(buf.data(), end);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::string_view comment,
                     const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
    if (!out_) {
        throw ValidationError(path.string() + ": cannot create output file");
    }
    out_ << "# " << comment << '\n';
    for (const auto& h : header) cell(h);
    end_row();
}

CsvWriter& CsvWriter::cell(std::string_view text) {
    if (row_started_) out_ << ',';
    out_ << text;
    row_started_ = true;
    ++in_row_;
    return *this;
}

CsvWriter& CsvWriter::cell(double value) { return cell(format_double(value)); }

CsvWriter& CsvWriter::cell(std::size_t value) { return cell(std::to_string(value)); }

void CsvWriter::end_row() {
    if (in_row_ != columns_) {
        throw CertificateError("csv row has " + std::to_string(in_row_) + " cells, expected " +
                               std::to_string(columns_));
    }
    out_ << '\n';
    row_started_ = false;
    in_row_ = 0;
}

}  // namespace qcons
