// Copyright 2026 The uavqa Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal RFC 4180-style CSV reading and writing.

#ifndef UAVQA_SRC_CSV_HPP_
#define UAVQA_SRC_CSV_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace uavqa::csv {

using Row = std::vector<std::string>;

// Parses quoted fields (with "" escapes), CRLF or LF line endings; blank
// lines are skipped.
std::vector<Row> parse(std::string_view text);
std::vector<Row> read(const std::filesystem::path& path);

std::string quote(std::string_view field);
void write(const std::filesystem::path& path, const std::vector<Row>& rows);

// %.17g: enough digits to round-trip any double exactly.
std::string format_double(double v);
// Strict parse of a whole field; blank fields yield NaN when allow_blank.
double parse_double(std::string_view field, bool allow_blank = false);

}  // namespace uavqa::csv

#endif  // UAVQA_SRC_CSV_HPP_
