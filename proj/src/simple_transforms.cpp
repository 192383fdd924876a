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

using detail::tok_begin;
using detail::tok_end;

TransformResult strip_attributes(const SyntaxTree& tree) {
  TransformResult r;
  const auto& toks = tree.tokens;
  for (uint32_t i = 0; i < toks.size(); ++i) {
    if (!toks[i].is_attribute_open() || tree.in_dead_region(i)) continue;
    uint32_t j = i + 1;
    int depth = 1;
    for (; j < toks.size(); ++j) {
      if (toks[j].is_attribute_open()) ++depth;
      else if (toks[j].is_attribute_close() && --depth == 0) break;
    }
    if (j == toks.size()) {
      r.warn(tree, i, Feature::Attribute, "unterminated attribute");
      continue;
    }
    uint32_t b = tok_begin(tree, i);
    uint32_t e = tok_end(tree, j);
    if (j + 1 < toks.size() && toks[j + 1].kind == TokenKind::Whitespace) {
      e = tok_end(tree, j + 1);
    } else if (i > 0 && toks[i - 1].kind == TokenKind::Whitespace &&
               (r.edits.empty() || r.edits.back().end <= tok_begin(tree, i - 1))) {
      b = tok_begin(tree, i - 1);
    }
    r.edits.push_back(detail::make_edit(b, e, "", Feature::Attribute));
    i = j;
  }
  return r;
}

namespace {

Edit delete_with_leading_space(const SyntaxTree& t, uint32_t tok, Feature f) {
  uint32_t b = tok_begin(t, tok);
  if (tok > 0 && t.tokens[tok - 1].kind == TokenKind::Whitespace) b = tok_begin(t, tok - 1);
  return detail::make_edit(b, tok_end(t, tok), "", f);
}

}  // namespace

TransformResult strip_final_override(const SyntaxTree& tree) {
  TransformResult r;
  if (tree.root == kNoNode) return r;
  tree.walk([&](NodeId id) {
    if (const auto* c = tree.get<ClassData>(id); c && c->final_tok != kNoToken)
      r.edits.push_back(delete_with_leading_space(tree, c->final_tok, Feature::FinalOverride));
    if (const auto* f = tree.get<FunctionData>(id))
      for (uint32_t tok : f->virt_specifiers)
        r.edits.push_back(delete_with_leading_space(tree, tok, Feature::FinalOverride));
  });
  std::sort(r.edits.begin(), r.edits.end(), [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
  return r;
}

// ---- type aliases -----------------------------------------------------------

namespace {

/// Offset inside an abstract declarator where a declarator-id belongs.
uint32_t name_position(const SyntaxTree& t, const UsingAliasData& a) {
  const TokenSpan& s = a.type_decl.span;
  if (!s.empty()) {
    for (uint32_t i = s.begin; i < s.end; ++i) {
      if (!t.is_significant(i)) continue;
      std::string_view x = t.tok(i);
      if (x == ")" || x == "[") return tok_begin(t, i);
      if (x == "(") {
        uint32_t n = t.next_significant(i);
        std::string_view y = t.tok(n);
        if (y != "*" && y != "&" && y != "&&" && y != "(") return tok_begin(t, i);
      }
    }
  }
  return t.end_offset(a.type);
}

std::string spaced_name(const SyntaxTree& t, uint32_t at, const std::string& name) {
  std::string_view c = t.content();
  char before = at > 0 ? c[at - 1] : ' ';
  if (std::isalnum(static_cast<unsigned char>(before)) || before == '_' || before == '>' || before == '*' ||
      before == '&')
    return " " + name;
  return name;
}

struct AliasPlan {
  std::map<std::string, NodeId, std::less<>> templates;  // convertible alias templates
  std::vector<std::pair<NodeId, std::string>> skipped;   // with reason
};

AliasPlan plan_aliases(const SyntaxTree& t) {
  AliasPlan plan;
  if (t.root == kNoNode) return plan;
  std::set<std::string, std::less<>> imported;
  t.walk([&](NodeId id) {
    if (const auto* a = t.get<UsingAliasData>(id); a && a->is_template) plan.templates[a->name] = id;
    if (const auto* u = t.get<UsingData>(id); u && !u->is_directive) imported.insert(u->last);
  });
  AliasTemplateSet names;
  for (const auto& [n, id] : plan.templates) names.insert(n);
  std::set<std::string, std::less<>> bad;
  for (const auto& n : names)
    if (imported.contains(n)) {
      bad.insert(n);
      plan.skipped.emplace_back(plan.templates[n], "alias named in a using-declaration");
    }
  for (const auto& use : detail::find_alias_uses(t, names)) {
    std::string name(t.tok(use.name));
    if (bad.contains(name)) continue;
    NodeId at = detail::innermost_node(t, use.open);
    auto params = detail::template_params_around(t, at);
    bool dependent = false;
    for (uint32_t i = use.open; i != kNoToken && i <= use.close; i = t.next_significant(i))
      if (std::find(params.begin(), params.end(), t.tok(i)) != params.end()) dependent = true;
    if (dependent) {
      bad.insert(name);
      plan.skipped.emplace_back(plan.templates[name], "dependent alias arguments need typename");
    }
  }
  for (const auto& n : bad) plan.templates.erase(plan.templates.find(n));
  return plan;
}

/// `::type` insertions after every use of the given names.
void rewrite_uses(const SyntaxTree& t, const AliasTemplateSet& names, TransformResult& r) {
  struct Suffix {
    std::string first, second;
  };
  std::map<uint32_t, Suffix> closes;
  for (const auto& use : detail::find_alias_uses(t, names)) {
    NodeId at = detail::innermost_node(t, use.open);
    auto params = detail::template_params_around(t, at);
    bool dependent = false;
    for (uint32_t i = use.open; i != kNoToken && i <= use.close; i = t.next_significant(i))
      if (std::find(params.begin(), params.end(), t.tok(i)) != params.end()) dependent = true;
    if (dependent) {
      r.warn(t, use.name, Feature::TypeAlias, "dependent use of an alias template from another file");
      continue;
    }
    auto& s = closes[use.close];
    if (t.tok(use.close) == ">" || !use.first_half) s.second += "::type";
    else s.first += "::type";
  }
  for (const auto& [tok, s] : closes) {
    std::string text;
    if (t.tok(tok) == ">") text = ">" + s.second;
    else if (s.first.empty()) text = "> >" + s.second;
    else text = ">" + s.first + " >" + s.second;
    r.edits.push_back(detail::replace_tokens(t, tok, tok, text, Feature::TypeAlias));
  }
}

}  // namespace

AliasTemplateSet convertible_alias_templates(const SyntaxTree& tree) {
  AliasTemplateSet out;
  for (const auto& [n, id] : plan_aliases(tree).templates) out.insert(n);
  return out;
}

TransformResult rewrite_type_alias(const SyntaxTree& tree, const std::vector<const SyntaxTree*>& externals) {
  TransformResult r;
  if (tree.root == kNoNode) return r;
  AliasPlan plan = plan_aliases(tree);
  for (const auto& [id, reason] : plan.skipped) r.warn(tree, tree.node(id).tokens.begin, Feature::TypeAlias, reason);
  tree.walk([&](NodeId id) {
    const auto* a = tree.get<UsingAliasData>(id);
    if (!a) return;
    if (a->is_template && !plan.templates.contains(a->name)) return;
    uint32_t at = name_position(tree, *a);
    if (!a->is_template) {
      r.edits.push_back(detail::make_edit(tok_begin(tree, a->using_tok), tree.begin_offset(a->type), "typedef ",
                                          Feature::TypeAlias));
      r.edits.push_back(detail::insert_at(at, spaced_name(tree, at, a->name), Feature::TypeAlias));
      return;
    }
    std::string ind = detail::indent_of(tree, a->using_tok);
    r.edits.push_back(detail::make_edit(tok_begin(tree, a->using_tok), tree.begin_offset(a->type),
                                        "struct " + a->name + " {\n" + ind + "  typedef ", Feature::TypeAlias));
    r.edits.push_back(detail::insert_at(at, spaced_name(tree, at, "type"), Feature::TypeAlias));
    r.edits.push_back(detail::replace_tokens(tree, a->semi_tok, a->semi_tok, ";\n" + ind + "};", Feature::TypeAlias));
  });
  AliasTemplateSet names;
  for (const auto& [n, id] : plan.templates) names.insert(n);
  for (const SyntaxTree* ext : externals) {
    auto more = convertible_alias_templates(*ext);
    names.insert(more.begin(), more.end());
  }
  rewrite_uses(tree, names, r);
  std::stable_sort(r.edits.begin(), r.edits.end(), [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
  return r;
}

}  // namespace retrofit
