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
#include <map>

#include "retrofit/transforms.hpp"
#include "transform_util.hpp"

namespace retrofit {

void TransformResult::warn(const SyntaxTree& tree, uint32_t token, Feature f, std::string reason) {
  TransformWarning w;
  w.line = token < tree.tokens.size() ? tree.line_of(token) : 0;
  w.feature = f;
  w.reason = std::move(reason);
  warnings.push_back(std::move(w));
}

namespace detail {

NodeId innermost_node(const SyntaxTree& t, uint32_t tok) {
  if (t.root == kNoNode) return kNoNode;
  NodeId cur = t.root;
  for (;;) {
    NodeId next = kNoNode;
    for (NodeId c : t.node(cur).children) {
      if (t.node(c).tokens.contains(tok)) {
        next = c;
        break;
      }
    }
    if (next == kNoNode) return cur;
    cur = next;
  }
}

std::vector<std::string> template_params_around(const SyntaxTree& t, NodeId id) {
  std::vector<std::string> out;
  for (; id != kNoNode; id = t.node(id).parent) {
    const TemplateHeader* h = nullptr;
    if (const auto* c = t.get<ClassData>(id); c && c->is_template) h = &c->tmpl;
    if (const auto* f = t.get<FunctionData>(id); f && f->is_template) h = &f->tmpl;
    if (const auto* a = t.get<UsingAliasData>(id); a && a->is_template) h = &a->tmpl;
    if (h) out.insert(out.end(), h->params.begin(), h->params.end());
  }
  return out;
}

std::vector<AliasUse> find_alias_uses(const SyntaxTree& t, const AliasTemplateSet& names) {
  std::vector<AliasUse> out;
  if (names.empty()) return out;
  for (uint32_t i : t.significant) {
    const Token& tk = t.tokens[i];
    if (tk.kind != TokenKind::Identifier || !names.contains(tk.text)) continue;
    uint32_t prev = t.prev_significant(i);
    if (prev != kNoToken && (t.tok(prev) == "." || t.tok(prev) == "->" || t.tok(prev) == "using"))
      continue;
    uint32_t next = t.next_significant(i);
    if (next == kNoToken || t.tok(next) != "<") continue;
    int depth = 0;
    AliasUse use{i, next, kNoToken, false};
    for (uint32_t j = next; j != kNoToken; j = t.next_significant(j)) {
      std::string_view s = t.tok(j);
      if (s == "<" || s == "(" || s == "[" || s == "{") ++depth;
      else if (s == ")" || s == "]" || s == "}") --depth;
      else if (s == ">") --depth;
      else if (s == ">>") {
        if (depth <= 2) {
          use.close = j;
          use.first_half = depth == 1;
          break;
        }
        depth -= 2;
      } else if (s == ";" && depth > 0) {
        break;
      }
      if (depth == 0) {
        if (s == ">") use.close = j;
        break;
      }
    }
    if (use.close == kNoToken) continue;
    out.push_back(use);
  }
  return out;
}

}  // namespace detail

namespace {

using Sites = std::map<Feature, uint32_t>;

void note(Sites& s, Feature f, uint32_t tok) {
  auto it = s.find(f);
  if (it == s.end() || tok < it->second) s[f] = tok;
}

Sites feature_sites(const SyntaxTree& t, const AliasTemplateSet& external_aliases) {
  Sites s;
  for (uint32_t i = 0; i < t.tokens.size(); ++i)
    if (t.tokens[i].is_attribute_open() && !t.in_dead_region(i)) {
      note(s, Feature::Attribute, i);
      break;
    }
  if (t.root == kNoNode) return s;
  t.walk([&](NodeId id) {
    const Node& n = t.node(id);
    switch (n.kind) {
      case NodeKind::Class: {
        const auto& c = std::get<ClassData>(n.data);
        if (c.final_tok != kNoToken) note(s, Feature::FinalOverride, c.final_tok);
        break;
      }
      case NodeKind::Function: {
        const auto& f = std::get<FunctionData>(n.data);
        if (!f.virt_specifiers.empty()) note(s, Feature::FinalOverride, f.virt_specifiers.front());
        if (f.spec.auto_tok != kNoToken) note(s, Feature::Auto, f.spec.auto_tok);
        if (detail::is_delegating(t, id)) note(s, Feature::CtorDelegation, f.inits[0].name_tok);
        break;
      }
      case NodeKind::Variable: {
        const auto& v = std::get<VariableData>(n.data);
        if (v.spec.auto_tok != kNoToken) note(s, Feature::Auto, v.spec.auto_tok);
        if (v.is_member && !v.spec.is_static)
          for (const auto& d : v.declarators)
            if (d.init_kind != Declarator::Init::None) note(s, Feature::MemberInit, d.init.begin);
        break;
      }
      case NodeKind::New: {
        const auto& e = std::get<ExprData>(n.data);
        if (e.auto_tok != kNoToken) note(s, Feature::Auto, e.auto_tok);
        break;
      }
      case NodeKind::Lambda: note(s, Feature::Lambda, n.tokens.begin); break;
      case NodeKind::RangeFor: note(s, Feature::RangeFor, n.tokens.begin); break;
      case NodeKind::UsingAlias: note(s, Feature::TypeAlias, n.tokens.begin); break;
      default: break;
    }
  });
  auto uses = detail::find_alias_uses(t, external_aliases);
  if (!uses.empty()) note(s, Feature::TypeAlias, uses.front().name);
  return s;
}

}  // namespace

FeatureSet find_features(const SyntaxTree& tree, const AliasTemplateSet& external_aliases) {
  FeatureSet out;
  for (const auto& [f, tok] : feature_sites(tree, external_aliases)) out.add(f);
  return out;
}

std::vector<Diagnostic> check_syntax(const SyntaxTree& tree) {
  std::vector<Diagnostic> out = tree.diagnostics;
  auto loc = [&](uint32_t tok) {
    return tok < tree.tokens.size() ? tree.tokens[tok].begin : SourceLocation{};
  };
  bool reported = std::any_of(out.begin(), out.end(), [](const Diagnostic& d) { return d.code == "unbalanced-braces"; });
  if (tree.untransformable && !reported) out.push_back({"unbalanced-braces", SourceLocation{}, "unbalanced brackets"});
  if (tree.root != kNoNode) {
    tree.walk([&](NodeId id) {
      const auto* o = tree.get<OpaqueData>(id);
      if (tree.node(id).kind == NodeKind::Opaque && o && o->recovered)
        out.push_back({"parse-error", loc(tree.node(id).tokens.begin), "unparsed region"});
    });
  }
  for (const auto& [f, tok] : feature_sites(tree, {}))
    out.push_back({std::string(to_string(f)) + "-remains", loc(tok),
                   std::string(to_string(f)) + " construct remains"});
  return out;
}

}  // namespace retrofit
