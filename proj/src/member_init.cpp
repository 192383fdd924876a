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

struct MemberInit {
  std::string member;
  std::string init;  // `a(3)`
};

struct ClassInits {
  NodeId cls = kNoNode;
  std::string name;
  std::vector<MemberInit> inits;  // declaration order
};

bool inside_template(const SyntaxTree& t, NodeId id) {
  for (; id != kNoNode; id = t.node(id).parent) {
    if (const auto* c = t.get<ClassData>(id); c && c->is_template) return true;
    if (const auto* f = t.get<FunctionData>(id); f && f->is_template) return true;
  }
  return false;
}

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

/// Initializers of one class. With `r` set, also emits the deletions and
/// skip warnings for the member declarations.
ClassInits collect(const SyntaxTree& t, NodeId cls, TransformResult* r) {
  ClassInits out;
  out.cls = cls;
  const auto& c = *t.get<ClassData>(cls);
  out.name = c.name;
  for (NodeId child : t.node(cls).children) {
    const auto* v = t.get<VariableData>(child);
    if (!v || !v->is_member || v->spec.is_static) continue;
    bool any = std::any_of(v->declarators.begin(), v->declarators.end(),
                           [](const Declarator& d) { return d.init_kind != Declarator::Init::None; });
    if (!any) continue;
    auto skip = [&](const char* why) {
      if (r) r->warn(t, t.node(child).tokens.begin, Feature::MemberInit, why);
    };
    if (v->declarators.size() != 1) {
      skip("multiple declarators in a member declaration");
      continue;
    }
    const Declarator& d = v->declarators.front();
    if (std::any_of(d.ops.begin(), d.ops.end(), [](const DeclOp& op) { return op.kind == DeclOp::Kind::Array; })) {
      skip("array member initializer");
      continue;
    }
    std::vector<NodeId> args = d.init_args;
    if (d.init_kind == Declarator::Init::Assign && args.size() == 1 && t.node(args[0]).kind == NodeKind::InitList)
      args = t.node(args[0]).children;
    else if (d.init_kind == Declarator::Init::Paren) {
      skip("parenthesized member initializer");
      continue;
    }
    if (args.size() > 1) {
      skip("list initializer with several elements");
      continue;
    }
    std::string value = args.empty() ? "" : trimmed(t.text(args[0]));
    out.inits.push_back({d.name_text, d.name_text + "(" + value + ")"});
    if (r)
      r->edits.push_back(detail::make_edit(t.end_offset(d.span), t.end_offset(d.init), "", Feature::MemberInit));
    if (c.key == ClassData::Key::Union) break;
  }
  return out;
}

/// Appends the missing initializers to one constructor definition.
void extend_ctor(const SyntaxTree& t, NodeId fn, const ClassInits& ci, TransformResult& r) {
  const auto& f = *t.get<FunctionData>(fn);
  if (f.definition == FunctionData::Definition::Delete || f.definition == FunctionData::Definition::None ||
      f.definition == FunctionData::Definition::Pure)
    return;
  if (detail::is_delegating(t, fn)) return;
  std::vector<std::string> add;
  for (const auto& mi : ci.inits) {
    bool present = std::any_of(f.inits.begin(), f.inits.end(), [&](const CtorInit& x) { return x.name == mi.member; });
    if (!present) add.push_back(mi.init);
  }
  if (add.empty()) return;
  std::string list;
  for (const auto& a : add) {
    if (!list.empty()) list += ", ";
    list += a;
  }
  if (f.definition == FunctionData::Definition::Default) {
    uint32_t semi = t.node(fn).tokens.end - 1;
    while (semi != kNoToken && !t.is_significant(semi)) --semi;
    uint32_t def = t.prev_significant(semi);
    uint32_t eq = t.prev_significant(def);
    r.edits.push_back(detail::replace_tokens(t, eq, semi, ": " + list + " {}", Feature::MemberInit));
    return;
  }
  if (!f.inits.empty()) {
    r.edits.push_back(detail::insert_at(t.end_offset(f.inits.back().span), ", " + list, Feature::MemberInit));
    return;
  }
  uint32_t lbrace = t.node(f.body).tokens.begin;
  std::string text = ": " + list + " ";
  uint32_t before = lbrace > 0 ? lbrace - 1 : lbrace;
  if (lbrace == 0 || t.tokens[before].kind != TokenKind::Whitespace) text = " " + text;
  r.edits.push_back(detail::insert_at(detail::tok_begin(t, lbrace), text, Feature::MemberInit));
}

bool is_ctor_of(const SyntaxTree& t, NodeId fn, std::string_view cls) {
  const auto* f = t.get<FunctionData>(fn);
  return f && f->is_ctor && !f->is_member && detail::last_component(f->qualifier) == cls && !f->is_template;
}

}  // namespace

TransformResult transform_member_init(const SyntaxTree& tree, const SemanticModel& sema,
                                      const std::vector<const SyntaxTree*>& externals) {
  TransformResult r;
  if (tree.root == kNoNode) return r;
  std::vector<NodeId> out_of_class;
  tree.walk([&](NodeId id) {
    const auto* f = tree.get<FunctionData>(id);
    if (f && f->is_ctor && !f->is_member) out_of_class.push_back(id);
  });

  tree.walk([&](NodeId id) {
    const auto* c = tree.get<ClassData>(id);
    if (!c || c->rbrace == kNoToken) return;
    bool templated = c->is_template || inside_template(tree, tree.node(id).parent) || sema.in_template(id);
    ClassInits ci = collect(tree, id, nullptr);
    if (ci.inits.empty()) {
      if (!templated) collect(tree, id, &r);
      return;
    }
    if (templated) {
      r.warn(tree, tree.node(id).tokens.begin, Feature::MemberInit, "template class");
      return;
    }
    if (c->name.empty()) {
      r.warn(tree, tree.node(id).tokens.begin, Feature::MemberInit, "unnamed class");
      return;
    }
    ci = collect(tree, id, &r);
    bool has_ctor = false;
    for (NodeId child : tree.node(id).children) {
      const auto* f = tree.get<FunctionData>(child);
      if (!f || !f->is_ctor) continue;
      has_ctor = true;
      extend_ctor(tree, child, ci, r);
    }
    for (NodeId fn : out_of_class)
      if (is_ctor_of(tree, fn, c->name)) extend_ctor(tree, fn, ci, r);
    if (!has_ctor) {
      std::string list;
      for (const auto& mi : ci.inits) {
        if (!list.empty()) list += ", ";
        list += mi.init;
      }
      const auto& kids = tree.node(id).children;
      uint32_t at = kids.empty() ? detail::tok_end(tree, c->lbrace) : tree.end_offset(kids.back());
      std::string text = "\npublic: " + c->name + "() : " + list + " {}";
      r.edits.push_back(detail::insert_at(at, text, Feature::MemberInit));
    }
  });

  for (const SyntaxTree* ext : externals) {
    if (ext->root == kNoNode) continue;
    ext->walk([&](NodeId id) {
      const auto* c = ext->get<ClassData>(id);
      if (!c || c->rbrace == kNoToken || c->is_template || c->name.empty() || inside_template(*ext, id)) return;
      ClassInits ci = collect(*ext, id, nullptr);
      if (ci.inits.empty()) return;
      for (NodeId fn : out_of_class)
        if (is_ctor_of(tree, fn, c->name)) extend_ctor(tree, fn, ci, r);
    });
  }
  std::stable_sort(r.edits.begin(), r.edits.end(), [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
  return r;
}

}  // namespace retrofit
