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

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace retrofit {

struct SourceLocation {
  uint32_t file_id = 0;
  uint32_t offset = 0;
  uint32_t line = 1;    // 1-based
  uint32_t column = 1;  // 1-based, in bytes

  bool operator==(const SourceLocation&) const = default;
};

enum class TokenKind : uint8_t {
  Identifier,
  Keyword,
  Punctuator,
  Literal,
  Comment,
  Whitespace,
  Preprocessor,
  Unknown,
};

std::string_view to_string(TokenKind kind);

/// A lexeme. `text` views the buffer passed to tokenize(), so tokens must not
/// outlive it.
struct Token {
  TokenKind kind = TokenKind::Unknown;
  std::string_view text;
  SourceLocation begin;
  SourceLocation end;  // one past the last byte

  bool is(std::string_view s) const { return text == s; }
  bool is_trivia() const {
    return kind == TokenKind::Whitespace || kind == TokenKind::Comment ||
           kind == TokenKind::Preprocessor;
  }
  bool is_attribute_open() const { return kind == TokenKind::Punctuator && text == "[["; }
  bool is_attribute_close() const { return kind == TokenKind::Punctuator && text == "]]"; }
};

struct Diagnostic {
  std::string code;  // e.g. "unterminated-string", "attribute-remains"
  SourceLocation location;
  std::string message;
};

struct LexResult {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
};

/// Full-fidelity lexing: concatenating every token's text reproduces `content`
/// byte for byte. A `[[` is always an attribute-open token; the matching `]]`
/// becomes attribute-close, any other `]` stays a single punctuator.
LexResult tokenize(std::string_view content, uint32_t file_id = 0);

bool is_cxx_keyword(std::string_view word);

/// Byte buffer shared between a tree and the tokens that view it.
struct SourceText {
  std::string path;
  std::shared_ptr<const std::string> bytes;

  SourceText() : bytes(std::make_shared<const std::string>()) {}
  SourceText(std::string p, std::string content)
      : path(std::move(p)), bytes(std::make_shared<const std::string>(std::move(content))) {}

  std::string_view view() const { return *bytes; }
};

/// Offsets of the first byte of every line, plus the end offset when the
/// text ends in a newline.
std::vector<uint32_t> line_starts(std::string_view content);

/// Number of lines; a trailing newline does not start a new line.
uint32_t count_lines(std::string_view content);

/// Name of a preprocessor directive token ("include", "if", ...), or "".
std::string_view directive_name(std::string_view directive_text);

/// Text after the directive name, leading blanks removed.
std::string_view directive_argument(std::string_view directive_text);

}  // namespace retrofit
