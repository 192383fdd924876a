// Copyright 2026 The Retrofit Authors
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

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include "retrofit/source.hpp"

namespace retrofit {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Punctuator: return "punctuator";
    case TokenKind::Literal: return "literal";
    case TokenKind::Comment: return "comment";
    case TokenKind::Whitespace: return "whitespace";
    case TokenKind::Preprocessor: return "preprocessor-line";
    case TokenKind::Unknown: return "unknown";
  }
  return "unknown";
}

bool is_cxx_keyword(std::string_view word) {
  static const std::unordered_set<std::string_view> kKeywords = {
      "alignas",   "alignof",     "asm",          "auto",        "bool",      "break",
      "case",      "catch",       "char",         "char16_t",    "char32_t",  "class",
      "const",     "constexpr",   "const_cast",   "continue",    "decltype",  "default",
      "delete",    "do",          "double",       "dynamic_cast", "else",     "enum",
      "explicit",  "export",      "extern",       "false",       "float",     "for",
      "friend",    "goto",        "if",           "inline",      "int",       "long",
      "mutable",   "namespace",   "new",          "noexcept",    "nullptr",   "operator",
      "private",   "protected",   "public",       "register",    "reinterpret_cast",
      "return",    "short",       "signed",       "sizeof",      "static",    "static_assert",
      "static_cast", "struct",    "switch",       "template",    "this",      "thread_local",
      "throw",     "true",        "try",          "typedef",     "typeid",    "typename",
      "union",     "unsigned",    "using",        "virtual",     "void",      "volatile",
      "wchar_t",   "while",
  };
  return kKeywords.contains(word);
}

std::vector<uint32_t> line_starts(std::string_view content) {
  std::vector<uint32_t> starts{0};
  for (uint32_t i = 0; i < content.size(); ++i)
    if (content[i] == '\n') starts.push_back(i + 1);
  return starts;
}

uint32_t count_lines(std::string_view content) {
  if (content.empty()) return 0;
  auto n = static_cast<uint32_t>(std::count(content.begin(), content.end(), '\n'));
  if (content.back() != '\n') ++n;
  return n;
}

std::string_view directive_name(std::string_view text) {
  size_t i = 0;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  if (i >= text.size() || text[i] != '#') return {};
  ++i;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  size_t j = i;
  while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
  return text.substr(i, j - i);
}

std::string_view directive_argument(std::string_view text) {
  std::string_view name = directive_name(text);
  if (name.empty()) return {};
  size_t i = static_cast<size_t>(name.data() - text.data()) + name.size();
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  return text.substr(i);
}

namespace {

bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

constexpr std::array<std::string_view, 27> kPunctuators = {
    ">>=", "<<=", "->*", "...", "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&",  "||",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", ".*", "##", "[["};

class Lexer {
 public:
  Lexer(std::string_view src, uint32_t file_id) : src_(src), file_id_(file_id) {}

  LexResult run() {
    while (pos_ < src_.size()) lex_one();
    return std::move(out_);
  }

 private:
  SourceLocation here() const { return {file_id_, pos_, line_, col_}; }

  void advance_to(uint32_t end) {
    for (uint32_t i = pos_; i < end; ++i) {
      if (src_[i] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
    pos_ = end;
  }

  void emit(TokenKind kind, uint32_t end) {
    Token t;
    t.kind = kind;
    t.begin = here();
    t.text = src_.substr(pos_, end - pos_);
    advance_to(end);
    t.end = here();
    out_.tokens.push_back(t);
    if (kind != TokenKind::Whitespace && kind != TokenKind::Comment) at_line_start_ = false;
  }

  void diag(std::string code, std::string message) {
    out_.diagnostics.push_back({std::move(code), here(), std::move(message)});
  }

  char peek(uint32_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void lex_one() {
    unsigned char c = static_cast<unsigned char>(src_[pos_]);
    if (std::isspace(c)) {
      uint32_t end = pos_;
      while (end < src_.size() && std::isspace(static_cast<unsigned char>(src_[end]))) {
        if (src_[end] == '\n') at_line_start_ = true;
        ++end;
      }
      emit(TokenKind::Whitespace, end);
      return;
    }
    if (c == '/' && peek(1) == '/') {
      uint32_t end = pos_;
      while (end < src_.size() && src_[end] != '\n') ++end;
      emit(TokenKind::Comment, end);
      return;
    }
    if (c == '/' && peek(1) == '*') {
      size_t close = src_.find("*/", pos_ + 2);
      if (close == std::string_view::npos) {
        diag("unterminated-comment", "block comment is not terminated");
        emit(TokenKind::Unknown, static_cast<uint32_t>(src_.size()));
        return;
      }
      emit(TokenKind::Comment, static_cast<uint32_t>(close + 2));
      return;
    }
    if (c == '#' && at_line_start_) {
      uint32_t end = pos_;
      while (end < src_.size() && src_[end] != '\n') {
        if (src_[end] == '\\' && end + 1 < src_.size() && src_[end + 1] == '\n') {
          end += 2;
          continue;
        }
        if (src_[end] == '\\' && end + 2 < src_.size() && src_[end + 1] == '\r' && src_[end + 2] == '\n') {
          end += 3;
          continue;
        }
        ++end;
      }
      // A trailing '\r' belongs to the line break.
      while (end > pos_ && src_[end - 1] == '\r') --end;
      emit(TokenKind::Preprocessor, end);
      at_line_start_ = false;
      return;
    }
    if (is_ident_start(c)) {
      uint32_t end = pos_;
      while (end < src_.size() && is_ident_char(static_cast<unsigned char>(src_[end]))) ++end;
      std::string_view word = src_.substr(pos_, end - pos_);
      if (end < src_.size() && (src_[end] == '"' || src_[end] == '\'') &&
          (word == "L" || word == "u" || word == "U" || word == "u8" || word == "R" || word == "LR" ||
           word == "uR" || word == "UR" || word == "u8R")) {
        bool raw = word.back() == 'R';
        lex_quoted(end, raw && src_[end] == '"');
        return;
      }
      emit(is_cxx_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, end);
      return;
    }
    if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      uint32_t end = pos_ + 1;
      while (end < src_.size()) {
        unsigned char d = static_cast<unsigned char>(src_[end]);
        if ((d == '+' || d == '-') &&
            (src_[end - 1] == 'e' || src_[end - 1] == 'E' || src_[end - 1] == 'p' || src_[end - 1] == 'P')) {
          ++end;
          continue;
        }
        if (std::isalnum(d) || d == '.' || d == '_' || (d == '\'' && end + 1 < src_.size() &&
                                                        std::isalnum(static_cast<unsigned char>(src_[end + 1])))) {
          ++end;
          continue;
        }
        break;
      }
      emit(TokenKind::Literal, end);
      return;
    }
    if (c == '"' || c == '\'') {
      lex_quoted(pos_, false);
      return;
    }
    if (c == ']' && attr_depth_ > 0 && bracket_depth_ == 0 && peek(1) == ']') {
      --attr_depth_;
      bracket_depth_ = saved_brackets_.back();
      saved_brackets_.pop_back();
      emit(TokenKind::Punctuator, pos_ + 2);
      return;
    }
    for (std::string_view p : kPunctuators) {
      if (src_.substr(pos_, p.size()) == p) {
        if (p == "[[") {
          ++attr_depth_;
          saved_brackets_.push_back(bracket_depth_);
          bracket_depth_ = 0;
        }
        emit(TokenKind::Punctuator, pos_ + static_cast<uint32_t>(p.size()));
        return;
      }
    }
    if (attr_depth_ > 0) {
      if (c == '[') ++bracket_depth_;
      if (c == ']' && bracket_depth_ > 0) --bracket_depth_;
    }
    if (std::ispunct(c)) {
      emit(TokenKind::Punctuator, pos_ + 1);
      return;
    }
    emit(TokenKind::Unknown, pos_ + 1);
  }

  // `quote_at` is the index of the opening quote; the token starts at pos_
  // (which covers any encoding prefix).
  void lex_quoted(uint32_t quote_at, bool raw) {
    char q = src_[quote_at];
    uint32_t end = quote_at + 1;
    if (raw) {
      size_t paren = src_.find('(', end);
      std::string delim;
      if (paren != std::string_view::npos) delim = std::string(src_.substr(end, paren - end));
      std::string closing = ")" + delim + "\"";
      size_t close = paren == std::string_view::npos ? paren : src_.find(closing, paren + 1);
      if (close == std::string_view::npos) {
        diag("unterminated-string", "raw string literal is not terminated");
        emit(TokenKind::Unknown, static_cast<uint32_t>(src_.size()));
        return;
      }
      end = static_cast<uint32_t>(close + closing.size());
    } else {
      bool closed = false;
      while (end < src_.size()) {
        char d = src_[end];
        if (d == '\\' && end + 1 < src_.size()) {
          end += 2;
          continue;
        }
        if (d == '\n') break;
        ++end;
        if (d == q) {
          closed = true;
          break;
        }
      }
      if (!closed) {
        diag(q == '"' ? "unterminated-string" : "unterminated-char", "literal is not terminated");
        emit(TokenKind::Unknown, end);
        return;
      }
    }
    // user-defined literal suffix
    while (end < src_.size() && is_ident_char(static_cast<unsigned char>(src_[end]))) ++end;
    emit(TokenKind::Literal, end);
  }

  std::string_view src_;
  uint32_t file_id_;
  uint32_t pos_ = 0;
  uint32_t line_ = 1;
  uint32_t col_ = 1;
  bool at_line_start_ = true;
  int attr_depth_ = 0;
  int bracket_depth_ = 0;
  std::vector<int> saved_brackets_;
  LexResult out_;
};

}  // namespace

LexResult tokenize(std::string_view content, uint32_t file_id) { return Lexer(content, file_id).run(); }

}  // namespace retrofit
