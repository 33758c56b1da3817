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

// CoNLL-U reader and writer. Only ID, FORM, LEMMA, UPOS, FEATS, HEAD and
// DEPREL are retained; multiword-token ranges and empty nodes are skipped.

#ifndef FOKUSZ_CONLLU_HPP_
#define FOKUSZ_CONLLU_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fokusz/corpus.hpp"

namespace fokusz::conllu {

struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::string upos;
  std::map<std::string, std::string> feats;
  int head = 0;  // 0 = root
  std::string deprel;

  std::optional<std::string_view> feat(std::string_view key) const;
  bool operator==(const Token&) const = default;
};

inline constexpr std::string_view kResponseIdKey = "response_id";

struct ParsedSentence {
  std::vector<Token> tokens;
  std::map<std::string, std::string> meta;
  std::size_t first_line = 0;  // where the block starts in the source

  std::optional<std::string_view> response_id() const;
  const Token* token(int index) const;
  // First token whose DEPREL is root, if any.
  const Token* root() const;
  bool operator==(const ParsedSentence& o) const {
    return tokens == o.tokens && meta == o.meta;
  }
};

// Case-insensitive, sub-relation tolerant: "obj:lvc" and "OBJ" match "obj".
bool deprel_matches(std::string_view deprel, std::string_view relation);

struct Diagnostic {
  std::size_t line = 0;
  std::string message;
};

struct ReadResult {
  std::vector<ParsedSentence> sentences;
  std::vector<Diagnostic> errors;
  std::size_t token_lines = 0;    // accepted word lines
  std::size_t skipped_lines = 0;  // multiword ranges and empty nodes
  std::size_t error_lines = 0;
  // Sentences lacking a response_id comment; still present in `sentences`.
  std::vector<std::size_t> unkeyed;
};

// Lenient: malformed lines are reported and dropped, the rest is kept.
ReadResult read(std::string_view text);

// Strict: throws MalformedLine for the first malformed line.
std::vector<ParsedSentence> parse(std::string_view text);

std::string write(std::span<const ParsedSentence> sentences);

}  // namespace fokusz::conllu

#endif  // FOKUSZ_CONLLU_HPP_
