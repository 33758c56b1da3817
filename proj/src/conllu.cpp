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

#include "fokusz/conllu.hpp"

#include <algorithm>
#include <charconv>

#include "fokusz/text.hpp"

namespace fokusz::conllu {

std::optional<std::string_view> Token::feat(std::string_view key) const {
  auto it = feats.find(std::string(key));
  if (it == feats.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string_view> ParsedSentence::response_id() const {
  auto it = meta.find(std::string(kResponseIdKey));
  if (it == meta.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

const Token* ParsedSentence::token(int index) const {
  auto it = std::lower_bound(tokens.begin(), tokens.end(), index,
                             [](const Token& t, int i) { return t.index < i; });
  if (it == tokens.end() || it->index != index) return nullptr;
  return &*it;
}

const Token* ParsedSentence::root() const {
  for (const auto& t : tokens) {
    if (deprel_matches(t.deprel, "root")) return &t;
  }
  return nullptr;
}

bool deprel_matches(std::string_view deprel, std::string_view relation) {
  if (deprel.size() < relation.size()) return false;
  for (std::size_t i = 0; i < relation.size(); ++i) {
    char a = deprel[i];
    char b = relation[i];
    if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
    if (b >= 'A' && b <= 'Z') b = static_cast<char>(b - 'A' + 'a');
    if (a != b) return false;
  }
  return deprel.size() == relation.size() || deprel[relation.size()] == ':';
}

namespace {

bool parse_int(std::string_view s, int* out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::map<std::string, std::string> parse_feats(std::string_view s, bool* ok) {
  std::map<std::string, std::string> feats;
  *ok = true;
  if (s == "_") return feats;
  for (std::string_view kv : text::split(s, '|')) {
    auto eq = kv.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      *ok = false;
      return feats;
    }
    feats.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
  }
  return feats;
}

class BlockBuilder {
 public:
  explicit BlockBuilder(ReadResult* result) : result_(result) {}

  void add_comment(std::string_view line, std::size_t line_no) {
    start(line_no);
    std::string_view body = text::trim(line.substr(1));
    auto eq = body.find('=');
    if (eq == std::string_view::npos) return;
    current_.meta[std::string(text::trim(body.substr(0, eq)))] =
        std::string(text::trim(body.substr(eq + 1)));
  }

  void add_token(Token token, std::size_t line_no) {
    start(line_no);
    current_.tokens.push_back(std::move(token));
  }

  int last_index() const {
    return current_.tokens.empty() ? 0 : current_.tokens.back().index;
  }

  void flush() {
    if (!open_) return;
    open_ = false;
    if (current_.tokens.empty() && current_.meta.empty()) return;
    // heads are checked once the whole block is known
    int max_index = last_index();
    std::vector<Token> kept;
    for (auto& t : current_.tokens) {
      if (t.head > max_index) {
        result_->errors.push_back(
            {line_of_.at(t.index), "head " + std::to_string(t.head) + " out of range"});
        ++result_->error_lines;
        --result_->token_lines;
        continue;
      }
      kept.push_back(std::move(t));
    }
    current_.tokens = std::move(kept);
    if (!current_.response_id()) result_->unkeyed.push_back(result_->sentences.size());
    result_->sentences.push_back(std::move(current_));
    current_ = ParsedSentence{};
    line_of_.clear();
  }

  void remember_line(int index, std::size_t line_no) { line_of_[index] = line_no; }

 private:
  void start(std::size_t line_no) {
    if (!open_) {
      open_ = true;
      current_.first_line = line_no;
    }
  }

  ReadResult* result_;
  ParsedSentence current_;
  std::map<int, std::size_t> line_of_;
  bool open_ = false;
};

}  // namespace

ReadResult read(std::string_view input) {
  ReadResult result;
  BlockBuilder block(&result);
  std::size_t line_no = 0;
  auto fail = [&](std::string message) {
    result.errors.push_back({line_no, std::move(message)});
    ++result.error_lines;
  };
  for (std::string_view line : text::split(input, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty()) {
      block.flush();
      continue;
    }
    if (line.front() == '#') {
      block.add_comment(line, line_no);
      continue;
    }
    std::vector<std::string_view> cols = text::split(line, '\t');
    if (cols.size() != 10) {
      fail("expected 10 tab-separated columns, got " + std::to_string(cols.size()));
      continue;
    }
    std::string_view id = cols[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) {
      ++result.skipped_lines;
      continue;
    }
    Token t;
    if (!parse_int(id, &t.index) || t.index < 1) {
      fail("unparseable token index '" + std::string(id) + "'");
      continue;
    }
    if (t.index <= block.last_index()) {
      fail("token index " + std::to_string(t.index) + " is not increasing");
      continue;
    }
    if (!parse_int(cols[6], &t.head) || t.head < 0) {
      fail("unparseable head '" + std::string(cols[6]) + "'");
      continue;
    }
    if (t.head == t.index) {
      fail("token " + std::to_string(t.index) + " is its own head");
      continue;
    }
    bool feats_ok = true;
    t.feats = parse_feats(cols[5], &feats_ok);
    if (!feats_ok) {
      fail("malformed FEATS '" + std::string(cols[5]) + "'");
      continue;
    }
    t.form = text::nfc(cols[1]);
    t.lemma = text::nfc(cols[2]);
    t.upos = std::string(cols[3]);
    t.deprel = std::string(cols[7]);
    ++result.token_lines;
    block.remember_line(t.index, line_no);
    block.add_token(std::move(t), line_no);
  }
  block.flush();
  return result;
}

std::vector<ParsedSentence> parse(std::string_view input) {
  ReadResult r = read(input);
  if (!r.errors.empty()) {
    throw Error(ErrorKind::kMalformedLine, r.errors.front().message, r.errors.front().line);
  }
  return std::move(r.sentences);
}

std::string write(std::span<const ParsedSentence> sentences) {
  std::string out;
  for (const auto& s : sentences) {
    // response_id first, then the remaining keys in map order
    if (auto id = s.meta.find(std::string(kResponseIdKey)); id != s.meta.end()) {
      out += "# response_id = " + id->second + "\n";
    }
    for (const auto& [k, v] : s.meta) {
      if (k == kResponseIdKey) continue;
      out += "# " + k + " = " + v + "\n";
    }
    for (const auto& t : s.tokens) {
      std::string feats;
      for (const auto& [k, v] : t.feats) {
        if (!feats.empty()) feats += '|';
        feats += k + "=" + v;
      }
      if (feats.empty()) feats = "_";
      out += std::to_string(t.index) + '\t' + t.form + '\t' + t.lemma + '\t' + t.upos +
             "\t_\t" + feats + '\t' + std::to_string(t.head) + '\t' + t.deprel + "\t_\t_\n";
    }
    out += '\n';
  }
  return out;
}

}  // namespace fokusz::conllu
