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

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "retrofit/edit.hpp"
#include "retrofit/syntax_tree.hpp"
#include "retrofit/transforms.hpp"

namespace retrofit::detail {

inline uint32_t tok_begin(const SyntaxTree& t, uint32_t i) { return t.tokens[i].begin.offset; }
inline uint32_t tok_end(const SyntaxTree& t, uint32_t i) { return t.tokens[i].end.offset; }

inline Edit make_edit(uint32_t begin, uint32_t end, std::string text, Feature f, std::string note = {}) {
  Edit e;
  e.begin = begin;
  e.end = end;
  e.replacement = std::move(text);
  e.feature = f;
  e.note = std::move(note);
  return e;
}

inline Edit insert_at(uint32_t offset, std::string text, Feature f, std::string note = {}) {
  return make_edit(offset, offset, std::move(text), f, std::move(note));
}

/// Marks edits[from..] as one rewrite tracing back to original offset `anchor`.
inline void group_edits(std::vector<Edit>& edits, size_t from, uint32_t anchor) {
  for (size_t i = from; i < edits.size(); ++i) {
    edits[i].group = static_cast<uint32_t>(from + 1);
    edits[i].anchor = anchor;
  }
}

/// Replaces tokens [first, last] inclusive.
inline Edit replace_tokens(const SyntaxTree& t, uint32_t first, uint32_t last, std::string text, Feature f,
                           std::string note = {}) {
  return make_edit(tok_begin(t, first), tok_end(t, last), std::move(text), f, std::move(note));
}

/// Leading blanks of the line holding token `i`.
inline std::string indent_of(const SyntaxTree& t, uint32_t i) {
  std::string_view c = t.content();
  uint32_t off = tok_begin(t, i);
  uint32_t start = off;
  while (start > 0 && c[start - 1] != '\n') --start;
  uint32_t e = start;
  while (e < c.size() && (c[e] == ' ' || c[e] == '\t')) ++e;
  return std::string(c.substr(start, e - start));
}

/// Offset of the first byte of the line holding `offset`.
inline uint32_t line_start(std::string_view c, uint32_t offset) {
  while (offset > 0 && c[offset - 1] != '\n') --offset;
  return offset;
}

/// The significant token matching the bracket at `open`, or kNoToken.
inline uint32_t matching_close(const SyntaxTree& t, uint32_t open) {
  std::string_view o = t.tok(open);
  std::string_view c = o == "(" ? ")" : o == "[" ? "]" : o == "{" ? "}" : o == "<" ? ">" : "";
  if (c.empty()) return kNoToken;
  int depth = 0;
  for (uint32_t i = open; i != kNoToken && i < t.tokens.size(); i = t.next_significant(i)) {
    std::string_view s = t.tok(i);
    if (s == o) ++depth;
    else if (s == c) --depth;
    else if (o == "<" && s == ">>") depth -= 2;
    if (depth <= 0) return i;
  }
  return kNoToken;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  return true;
}

inline std::string strip_template_args(std::string_view q) {
  std::string s(q);
  size_t lt = s.find('<');
  if (lt != std::string::npos) s.resize(lt);
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

inline std::string last_component(std::string_view q) {
  std::string s = strip_template_args(q);
  size_t c = s.rfind("::");
  return c == std::string::npos ? s : s.substr(c + 2);
}

/// Significant-token text of a node; trivia collapsed.
inline std::string node_text(const SyntaxTree& t, NodeId id) { return t.compact_text(t.node(id).tokens); }

/// Name of the class a member function belongs to, or "".
inline std::string owning_class(const SyntaxTree& t, NodeId fn) {
  const auto* f = t.get<FunctionData>(fn);
  if (!f) return {};
  if (!f->qualifier.empty()) return last_component(f->qualifier);
  NodeId cls = t.enclosing(t.node(fn).parent, NodeKind::Class);
  if (cls == kNoNode) return {};
  return t.get<ClassData>(cls)->name;
}

inline bool is_delegating(const SyntaxTree& t, NodeId fn) {
  const auto* f = t.get<FunctionData>(fn);
  if (!f || !f->is_ctor || f->inits.size() != 1) return false;
  return f->inits[0].name == f->name;
}

struct AliasUse {
  uint32_t name = kNoToken;
  uint32_t open = kNoToken;   // `<`
  uint32_t close = kNoToken;  // `>` or `>>`
  bool first_half = false;    // closes at the first `>` of a `>>`
};

/// `N<...>` occurrences of the given alias template names.
std::vector<AliasUse> find_alias_uses(const SyntaxTree& t, const AliasTemplateSet& names);

/// Deepest node whose span holds token `tok`.
NodeId innermost_node(const SyntaxTree& t, uint32_t tok);

/// Template parameter names of all enclosing template declarations.
std::vector<std::string> template_params_around(const SyntaxTree& t, NodeId id);

}  // namespace retrofit::detail
