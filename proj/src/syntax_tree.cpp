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

#include "retrofit/syntax_tree.hpp"

namespace retrofit {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::TranslationUnit: return "translation-unit";
    case NodeKind::Namespace: return "namespace";
    case NodeKind::Class: return "class";
    case NodeKind::Function: return "function";
    case NodeKind::Variable: return "variable";
    case NodeKind::Typedef: return "typedef";
    case NodeKind::UsingAlias: return "using-alias";
    case NodeKind::Using: return "using";
    case NodeKind::AccessSpec: return "access-spec";
    case NodeKind::Enum: return "enum";
    case NodeKind::Directive: return "directive";
    case NodeKind::Opaque: return "opaque";
    case NodeKind::Compound: return "compound";
    case NodeKind::DeclStmt: return "decl-stmt";
    case NodeKind::ExprStmt: return "expr-stmt";
    case NodeKind::For: return "for";
    case NodeKind::RangeFor: return "range-for";
    case NodeKind::If: return "if";
    case NodeKind::While: return "while";
    case NodeKind::Do: return "do";
    case NodeKind::Switch: return "switch";
    case NodeKind::Label: return "label";
    case NodeKind::Jump: return "jump";
    case NodeKind::Return: return "return";
    case NodeKind::Try: return "try";
    case NodeKind::Null: return "null";
    case NodeKind::Literal: return "literal";
    case NodeKind::Identifier: return "identifier";
    case NodeKind::Call: return "call";
    case NodeKind::Member: return "member";
    case NodeKind::Subscript: return "subscript";
    case NodeKind::Unary: return "unary";
    case NodeKind::Binary: return "binary";
    case NodeKind::Conditional: return "conditional";
    case NodeKind::New: return "new";
    case NodeKind::Delete: return "delete";
    case NodeKind::Lambda: return "lambda";
    case NodeKind::Paren: return "paren";
    case NodeKind::Cast: return "cast";
    case NodeKind::Construct: return "construct";
    case NodeKind::InitList: return "init-list";
    case NodeKind::This: return "this";
    case NodeKind::SizeOf: return "sizeof";
    case NodeKind::Throw: return "throw";
  }
  return "?";
}

bool is_expression(NodeKind kind) { return kind >= NodeKind::Literal; }

bool is_statement(NodeKind kind) { return kind >= NodeKind::Compound && kind <= NodeKind::Null; }

uint32_t SyntaxTree::begin_offset(TokenSpan span) const {
  if (span.empty()) {
    if (span.valid() && span.begin < tokens.size()) return tokens[span.begin].begin.offset;
    return static_cast<uint32_t>(content().size());
  }
  return tokens[span.begin].begin.offset;
}

uint32_t SyntaxTree::end_offset(TokenSpan span) const {
  if (span.empty()) return begin_offset(span);
  return tokens[span.end - 1].end.offset;
}

std::string_view SyntaxTree::text(TokenSpan span) const {
  uint32_t b = begin_offset(span);
  uint32_t e = end_offset(span);
  return content().substr(b, e - b);
}

std::string SyntaxTree::compact_text(TokenSpan span) const {
  std::string out;
  if (span.empty()) return out;
  bool gap = false;
  for (uint32_t i = span.begin; i < span.end; ++i) {
    if (!is_significant(i)) {
      gap = !out.empty();
      continue;
    }
    if (gap) out += ' ';
    gap = false;
    out += tokens[i].text;
  }
  return out;
}

bool SyntaxTree::is_significant(uint32_t token_index) const {
  return std::binary_search(significant.begin(), significant.end(), token_index);
}

bool SyntaxTree::in_dead_region(uint32_t token_index) const {
  for (const auto& r : dead_regions)
    if (r.contains(token_index)) return true;
  return false;
}

uint32_t SyntaxTree::next_significant(uint32_t token_index) const {
  auto it = std::upper_bound(significant.begin(), significant.end(), token_index);
  return it == significant.end() ? kNoToken : *it;
}

uint32_t SyntaxTree::prev_significant(uint32_t token_index) const {
  auto it = std::lower_bound(significant.begin(), significant.end(), token_index);
  return it == significant.begin() ? kNoToken : *(it - 1);
}

NodeId SyntaxTree::enclosing(NodeId id, NodeKind kind) const {
  while (id != kNoNode && nodes[id].kind != kind) id = nodes[id].parent;
  return id;
}

NodeId SyntaxTree::enclosing_function(NodeId id) const {
  id = id == kNoNode ? id : nodes[id].parent;
  while (id != kNoNode) {
    NodeKind k = nodes[id].kind;
    if (k == NodeKind::Function || k == NodeKind::Lambda) return id;
    if (k == NodeKind::Class) return kNoNode;
    id = nodes[id].parent;
  }
  return kNoNode;
}

namespace {

bool is_substatement(const SyntaxTree& t, NodeId parent, NodeId child) {
  const Node& p = t.node(parent);
  switch (p.kind) {
    case NodeKind::Compound:
    case NodeKind::TranslationUnit:
    case NodeKind::Namespace:
    case NodeKind::Class:
    case NodeKind::Label:
    case NodeKind::Try:
      return true;
    case NodeKind::For:
    case NodeKind::While:
    case NodeKind::Switch:
      return !p.children.empty() && p.children.back() == child;
    case NodeKind::RangeFor:
      return std::get<RangeForData>(p.data).body == child;
    case NodeKind::Do:
      return !p.children.empty() && p.children.front() == child;
    case NodeKind::If:
      return !p.children.empty() && p.children.front() != child;
    default:
      return false;
  }
}

}  // namespace

NodeId SyntaxTree::enclosing_statement(NodeId id) const {
  while (id != kNoNode) {
    NodeId parent = nodes[id].parent;
    if (parent == kNoNode) return kNoNode;
    NodeKind k = nodes[id].kind;
    bool candidate = is_statement(k) || !is_expression(k);
    if (candidate && k != NodeKind::TranslationUnit && is_substatement(*this, parent, id)) return id;
    id = parent;
  }
  return kNoNode;
}

std::vector<std::string> SyntaxTree::verify() const {
  std::vector<std::string> problems;
  walk([&](NodeId id) {
    const Node& n = nodes[id];
    uint32_t prev_end = n.tokens.begin;
    for (NodeId c : n.children) {
      const Node& ch = nodes[c];
      if (ch.parent != id) problems.push_back("bad parent link at node " + std::to_string(c));
      if (ch.tokens.begin < n.tokens.begin || ch.tokens.end > n.tokens.end)
        problems.push_back(std::string(to_string(ch.kind)) + " escapes " + std::string(to_string(n.kind)) +
                           " at token " + std::to_string(ch.tokens.begin));
      if (ch.tokens.begin < prev_end)
        problems.push_back(std::string(to_string(ch.kind)) + " overlaps sibling at token " +
                           std::to_string(ch.tokens.begin));
      prev_end = std::max(prev_end, ch.tokens.end);
    }
  });
  return problems;
}

void add_declared_names(const SyntaxTree& tree, ParseContext& context) {
  if (tree.root == kNoNode) return;
  tree.walk([&](NodeId id) {
    if (const auto* c = tree.get<ClassData>(id); c && !c->name.empty()) {
      context.types.insert(c->name);
      if (c->is_template) context.templates.insert(c->name);
    } else if (const auto* a = tree.get<UsingAliasData>(id)) {
      context.types.insert(a->name);
      if (a->is_template) context.templates.insert(a->name);
    } else if (const auto* td = tree.get<TypedefData>(id)) {
      for (const auto& d : td->declarators)
        if (!d.name_text.empty()) context.types.insert(d.name_text);
    } else if (const auto* e = tree.get<EnumData>(id); e && !e->name.empty()) {
      context.types.insert(e->name);
    }
  });
}

std::string reprint(const SyntaxTree& tree) {
  std::string out;
  out.reserve(tree.content().size());
  for (const Token& t : tree.tokens) out += t.text;
  return out;
}

}  // namespace retrofit
