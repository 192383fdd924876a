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

#include "retrofit/transforms.hpp"
#include "transform_util.hpp"

namespace retrofit {

namespace {

std::string reason(const TypeResult& r) {
  std::string s(to_string(r.error.kind));
  if (!r.error.message.empty()) s += ": " + r.error.message;
  return s;
}

bool at_namespace_scope(const SyntaxTree& t, NodeId id) {
  NodeId p = t.node(id).parent;
  return p != kNoNode && (t.node(p).kind == NodeKind::TranslationUnit || t.node(p).kind == NodeKind::Namespace);
}

/// Deletes the `const` of `const auto` next to the replaced `auto`.
Edit drop_const(const SyntaxTree& t, uint32_t const_tok, uint32_t auto_tok) {
  uint32_t b = detail::tok_begin(t, const_tok);
  uint32_t e = detail::tok_end(t, const_tok);
  if (const_tok < auto_tok) {
    if (const_tok + 1 < t.tokens.size() && t.tokens[const_tok + 1].kind == TokenKind::Whitespace)
      e = detail::tok_end(t, const_tok + 1);
  } else if (const_tok > 0 && t.tokens[const_tok - 1].kind == TokenKind::Whitespace) {
    b = detail::tok_begin(t, const_tok - 1);
  }
  return detail::make_edit(b, e, "", Feature::Auto);
}

void variable(const SyntaxTree& t, const SemanticModel& sema, NodeId id, TransformResult& r) {
  const auto& v = *t.get<VariableData>(id);
  if (sema.in_template(id)) {
    r.warn(t, v.spec.auto_tok, Feature::Auto, "auto in a template");
    return;
  }
  if (v.declarators.size() > 1 && at_namespace_scope(t, id)) {
    r.warn(t, v.spec.auto_tok, Feature::Auto, "several auto declarators at namespace scope");
    return;
  }
  std::vector<RenderedParts> parts;
  for (size_t i = 0; i < v.declarators.size(); ++i) {
    TypeResult ty = sema.declared_type(NodeRef{&t, id}, i);
    if (!ty) {
      r.warn(t, v.spec.auto_tok, Feature::Auto, reason(ty));
      return;
    }
    parts.push_back(render_parts(*ty, v.declarators[i].name_text));
  }
  for (const auto& p : parts)
    if (p.base != parts.front().base) {
      r.warn(t, v.spec.auto_tok, Feature::Auto, "declarators deduce different types");
      return;
    }
  r.edits.push_back(detail::replace_tokens(t, v.spec.auto_tok, v.spec.auto_tok, parts.front().base, Feature::Auto));
  if (v.spec.const_tok != kNoToken) r.edits.push_back(drop_const(t, v.spec.const_tok, v.spec.auto_tok));
  for (size_t i = 0; i < v.declarators.size(); ++i) {
    const Declarator& d = v.declarators[i];
    r.edits.push_back(detail::make_edit(t.begin_offset(d.span), t.end_offset(d.span), parts[i].declarator,
                                        Feature::Auto));
  }
}

void function(const SyntaxTree& t, const SemanticModel& sema, NodeId id, TransformResult& r) {
  const auto& f = *t.get<FunctionData>(id);
  if (sema.in_template(id)) {
    r.warn(t, f.spec.auto_tok, Feature::Auto, "trailing return in a template");
    return;
  }
  if (f.arrow == kNoToken) {
    r.warn(t, f.spec.auto_tok, Feature::Auto, "deduced return type without a trailing return");
    return;
  }
  TypeResult ty = sema.deduce_trailing_return(id);
  if (!ty) {
    r.warn(t, f.spec.auto_tok, Feature::Auto, reason(ty));
    return;
  }
  RenderedParts p = render_parts(*ty, "f");
  if (p.declarator != "f") {
    r.warn(t, f.spec.auto_tok, Feature::Auto, "return type needs a declarator");
    return;
  }
  r.edits.push_back(detail::replace_tokens(t, f.spec.auto_tok, f.spec.auto_tok, p.base, Feature::Auto));
  if (f.spec.const_tok != kNoToken) r.edits.push_back(drop_const(t, f.spec.const_tok, f.spec.auto_tok));
  uint32_t b = detail::tok_begin(t, f.arrow);
  if (f.arrow > 0 && t.tokens[f.arrow - 1].kind == TokenKind::Whitespace) b = detail::tok_begin(t, f.arrow - 1);
  r.edits.push_back(detail::make_edit(b, t.end_offset(f.trailing), "", Feature::Auto));
}

void new_auto(const SyntaxTree& t, const SemanticModel& sema, NodeId id, TransformResult& r) {
  const auto& e = *t.get<ExprData>(id);
  if (sema.in_template(id)) {
    r.warn(t, e.auto_tok, Feature::Auto, "auto in a template");
    return;
  }
  TypeResult ty = sema.type_of_expr(id);
  if (!ty || !ty->is_pointer()) {
    r.warn(t, e.auto_tok, Feature::Auto, ty ? "new-expression is not a pointer" : reason(ty));
    return;
  }
  r.edits.push_back(detail::replace_tokens(t, e.auto_tok, e.auto_tok, render(ty->inner()), Feature::Auto));
}

}  // namespace

TransformResult transform_auto(const SyntaxTree& tree, const SemanticModel& sema) {
  TransformResult r;
  if (tree.root == kNoNode) return r;
  std::vector<NodeId> news;
  tree.walk([&](NodeId id) {
    const Node& n = tree.node(id);
    if (const auto* v = tree.get<VariableData>(id); v && v->spec.auto_tok != kNoToken) variable(tree, sema, id, r);
    if (const auto* f = tree.get<FunctionData>(id); f && f->spec.auto_tok != kNoToken) function(tree, sema, id, r);
    if (n.kind == NodeKind::New)
      if (const auto* e = tree.get<ExprData>(id); e && e->auto_tok != kNoToken) new_auto(tree, sema, id, r);
  });
  std::stable_sort(r.edits.begin(), r.edits.end(), [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
  return r;
}

}  // namespace retrofit
