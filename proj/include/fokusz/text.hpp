/* Copyright 2026 The fokusz Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef FOKUSZ_TEXT_HPP_
#define FOKUSZ_TEXT_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fokusz::text {

// Unicode NFC normalisation of UTF-8 text. Invalid UTF-8 is passed through
// with replacement characters.
std::string nfc(std::string_view utf8);

// Full Unicode case folding ("Lefesti" -> "lefesti", "Ő" -> "ő").
std::string casefold(std::string_view utf8);

bool starts_with_folded(std::string_view text, std::string_view prefix);
bool equals_folded(std::string_view a, std::string_view b);

// Upper-cases the first code point only; used for sentence-initial tokens.
std::string capitalize_first(std::string_view utf8);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

// Minimal RFC 4180 CSV: quoted fields with "" escapes, no embedded newlines.
std::vector<std::string> parse_csv_line(std::string_view line, bool* ok);
std::string csv_escape(std::string_view field);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Fixed-point formatting used by every tabular output ("0.9250").
std::string fixed(double value, int decimals = 4);

}  // namespace fokusz::text

#endif  // FOKUSZ_TEXT_HPP_
