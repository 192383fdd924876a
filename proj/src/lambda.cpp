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

namespace {

constexpr std::string_view kPrefix = "LambdaFunctor__";

struct Captured {
  std::string name;
  bool by_ref = false;
  TypeRepr type;  // referent type, reference stripped
};

bool contains_lambda(const SyntaxTree& t, NodeId id) {
  bool found = false;
  for (NodeId c : t.node(id).children)
    t.walk([&](NodeId n) { found = found || t.node(n).kind == NodeKind::Lambda; }, c);
  return found;
}

/// Visits the nodes of `from`, skipping nested class definitions.
template <class F>
void walk_code(const SyntaxTree& t, NodeId from, F&& visit) {
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    if (id != from && t.node(id).kind == NodeKind::Class) continue;
    visit(id);
    const auto& ch = t.node(id).children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
}

bool declared_inside(const SyntaxTree& t, const Binding& b, NodeId lambda) {
  if (b.decl.tree != &t) return false;
  if (b.decl.id == lambda) return true;
  const TokenSpan& s = t.node(lambda).tokens;
  return s.contains(t.node(b.decl.id).tokens.begin);
}

bool is_static(const Binding& b) {
  if (!b.decl.valid()) return false;
  if (const auto* v = b.decl.tree->get<VariableData>(b.decl.id)) return v->spec.is_static;
  if (const auto* f = b.decl.tree->get<FunctionData>(b.decl.id)) return f->spec.is_static;
  return false;
}

bool needs_wrap(const SyntaxTree& t, NodeId stmt) {
  NodeId p = t.node(stmt).parent;
  if (p == kNoNode) return false;
  switch (t.node(p).kind) {
    case NodeKind::If:
    case NodeKind::For:
    case NodeKind::While:
    case NodeKind::Do:
    case NodeKind::RangeFor:
    case NodeKind::Switch:
      return true;
    default:
      return false;
  }
}

class LambdaRound {
 public:
  LambdaRound(const SyntaxTree& t, const SemanticModel& sema) : t_(t), sema_(sema) {
    for (const Token& tk : t_.tokens) {
      if (tk.kind != TokenKind::Identifier || !tk.text.starts_with(kPrefix)) continue;
      std::string_view rest = tk.text.substr(kPrefix.size());
      size_t us = rest.find('_');
      if (us == std::string_view::npos) continue;
      uint32_t line = static_cast<uint32_t>(std::atoi(std::string(rest.substr(0, us)).c_str()));
      int seq = std::atoi(std::string(rest.substr(us + 1)).c_str());
      next_seq_[line] = std::max(next_seq_[line], seq);
    }
  }

  TransformResult run() {
    if (t_.root == kNoNode) return std::move(r_);
    std::vector<NodeId> lambdas;
    t_.walk([&](NodeId id) {
      if (t_.node(id).kind == NodeKind::Lambda && !contains_lambda(t_, id)) lambdas.push_back(id);
    });
    for (NodeId id : lambdas) convert(id);
    std::stable_sort(r_.edits.begin(), r_.edits.end(), [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
    return std::move(r_);
  }

 private:
  static bool is_function_pointer(TypeRepr t) {
    t = strip_const(strip_reference(t));
    return t.is_pointer() && t.inner().is(TypeRepr::Kind::Function);
  }

  /// Whether the lambda initializes a function pointer, as a call argument or
  /// a variable initializer.
  bool to_function_pointer(NodeId id) const {
    NodeId p = t_.node(id).parent;
    while (p != kNoNode && t_.node(p).kind == NodeKind::Paren) {
      id = p;
      p = t_.node(p).parent;
    }
    if (p == kNoNode) return false;
    const Node& pn = t_.node(p);
    if (pn.kind == NodeKind::Call && !pn.children.empty() && pn.children.front() != id) {
      TypeResult callee = sema_.type_of_expr(pn.children.front());
      if (!callee) return false;
      TypeRepr f = strip_reference(*callee);
      if (f.is_pointer()) f = f.inner();
      if (!f.is(TypeRepr::Kind::Function)) return false;
      auto pos = std::find(pn.children.begin(), pn.children.end(), id) - pn.children.begin() - 1;
      return pos < static_cast<long>(f.args.size()) && is_function_pointer(f.args[pos]);
    }
    if (const auto* v = t_.get<VariableData>(p)) {
      for (size_t i = 0; i < v->declarators.size(); ++i)
        if (TypeResult d = sema_.declared_type(NodeRef{&t_, p}, i, false); d && is_function_pointer(*d)) return true;
    }
    return false;
  }

  bool skip(NodeId id, const std::string& why) {
    r_.warn(t_, t_.node(id).tokens.begin, Feature::Lambda, why);
    return false;
  }

  bool capture(NodeId lambda, const std::string& name, bool by_ref, NodeId at, std::vector<Captured>& out) {
    for (const auto& c : out)
      if (c.name == name) return true;
    const Binding* b = sema_.lookup(name, at);
    if (!b) return skip(lambda, "UnsupportedCapture: unknown variable " + name);
    TypeResult ty = sema_.type_of_binding(*b);
    if (!ty) return skip(lambda, "UnsupportedCapture: type of " + name + " unknown");
    TypeRepr referent = strip_reference(*ty);
    if (!by_ref && referent.is(TypeRepr::Kind::Array))
      return skip(lambda, "UnsupportedCapture: array captured by copy");
    out.push_back({name, by_ref, referent});
    return true;
  }

  bool collect_captures(NodeId id, const LambdaData& l, std::vector<Captured>& caps) {
    for (const auto& c : l.captures) {
      if (c.is_this) return skip(id, "UnsupportedCapture: this");
      if (c.has_init) return skip(id, "UnsupportedCapture: init-capture");
    }
    bool ok = true;
    std::vector<std::pair<std::string, NodeId>> implicit;
    walk_code(t_, l.body, [&](NodeId n) {
      if (!ok || t_.node(n).kind != NodeKind::Identifier) return;
      const auto* e = t_.get<ExprData>(n);
      if (!e || e->name.find("::") != std::string::npos) return;
      const Binding* b = sema_.lookup(e->name, n);
      if (!b) return;
      bool member = b->scope && b->scope->kind == Scope::Kind::Class &&
                    (b->kind == Binding::Kind::Member || b->kind == Binding::Kind::Function);
      if (member && !is_static(*b)) {
        ok = skip(id, "UnsupportedCapture: implicit use of member " + e->name);
        return;
      }
      if (b->kind != Binding::Kind::Variable && b->kind != Binding::Kind::Parameter) return;
      if (!b->is_local || declared_inside(t_, *b, id) || is_static(*b)) return;
      implicit.emplace_back(e->name, n);
    });
    if (!ok) return false;
    for (const auto& c : l.captures)
      if (!capture(id, c.name, c.by_ref, id, caps)) return false;
    if (l.capture_default == LambdaData::Default::None) {
      for (const auto& [name, at] : implicit) {
        bool listed = std::any_of(caps.begin(), caps.end(), [&](const Captured& c) { return c.name == name; });
        if (!listed) return skip(id, "UnsupportedCapture: " + name + " is not captured");
      }
      return true;
    }
    bool by_ref = l.capture_default == LambdaData::Default::Ref;
    for (const auto& [name, at] : implicit)
      if (!capture(id, name, by_ref, at, caps)) return false;
    return true;
  }

  std::optional<std::string> return_type(NodeId id, const LambdaData& l) {
    if (l.ret.valid() && !l.ret.empty()) return t_.compact_text(l.ret);
    std::vector<NodeId> values;
    walk_code(t_, l.body, [&](NodeId n) {
      if (t_.node(n).kind == NodeKind::Return && !t_.node(n).children.empty()) values.push_back(n);
    });
    if (values.empty()) return "void";
    if (values.size() > 1) {
      skip(id, "several return statements need an explicit return type");
      return std::nullopt;
    }
    TypeResult ty = sema_.type_of_expr(t_.node(values.front()).children.front());
    if (!ty) {
      skip(id, "return type: " + std::string(to_string(ty.error.kind)) + " " + ty.error.message);
      return std::nullopt;
    }
    TypeRepr rt = strip_const(decay(strip_reference(*ty)));
    RenderedParts p = render_parts(rt, "f");
    if (p.declarator != "f") {
      skip(id, "return type needs a declarator");
      return std::nullopt;
    }
    return p.base;
  }

  void convert(NodeId id) {
    const auto& l = *t_.get<LambdaData>(id);
    if (l.generic) {
      skip(id, "UnsupportedCapture: generic lambda");
      return;
    }
    NodeId stmt = t_.enclosing_statement(id);
    if (stmt == kNoNode || t_.node(stmt).parent == kNoNode ||
        t_.node(t_.node(stmt).parent).kind == NodeKind::Class) {
      skip(id, "UnsupportedLambdaContext: lambda outside a statement");
      return;
    }
    std::vector<Captured> caps;
    if (!collect_captures(id, l, caps)) return;
    if (caps.empty() && to_function_pointer(id)) {
      skip(id, "UnsupportedLambdaContext: conversion to a function pointer");
      return;
    }
    auto ret = return_type(id, l);
    if (!ret) return;

    uint32_t line = t_.line_of(l.lbracket);
    int seq = ++next_seq_[line];
    std::string name = std::string(kPrefix) + std::to_string(line) + "_" + std::to_string(seq);
    uint32_t first = t_.node(stmt).tokens.begin;
    std::string ind = detail::indent_of(t_, first);

    std::string cls = "class " + name + " {\n";
    for (const auto& c : caps)
      cls += ind + "  " + render(c.by_ref ? TypeRepr::lref(c.type) : c.type, c.name) + ";\n";
    cls += ind + "public:\n";
    if (!caps.empty()) {
      std::string params, inits;
      for (const auto& c : caps) {
        if (!params.empty()) params += ", ";
        if (!inits.empty()) inits += ", ";
        params += render(TypeRepr::lref(c.by_ref ? c.type : add_const(c.type)), c.name);
        inits += c.name + "(" + c.name + ")";
      }
      cls += ind + "  " + name + "(\n" + ind + "    " + params + ") : " + inits + " {}\n";
    }
    std::string params;
    if (l.lparen != kNoToken) {
      uint32_t pb = detail::tok_end(t_, l.lparen);
      params = std::string(t_.content().substr(pb, detail::tok_begin(t_, l.rparen) - pb));
    }
    cls += ind + "  " + *ret + " operator()(" + params + ")" + std::string(t_.text(l.body)) + "\n";
    cls += ind + "};\n" + ind;

    bool wrap = needs_wrap(t_, stmt);
    if (wrap) cls = "{ " + cls;
    size_t from = r_.edits.size();
    r_.edits.push_back(detail::insert_at(detail::tok_begin(t_, first), cls, Feature::Lambda, name));
    std::string args;
    for (const auto& c : caps) {
      if (!args.empty()) args += ", ";
      args += c.name;
    }
    r_.edits.push_back(detail::make_edit(t_.begin_offset(id), t_.end_offset(id), "(" + name + "(" + args + "))",
                                         Feature::Lambda, name));
    if (wrap) r_.edits.push_back(detail::insert_at(t_.end_offset(stmt), " }", Feature::Lambda));
    detail::group_edits(r_.edits, from, t_.begin_offset(id));
  }

  const SyntaxTree& t_;
  const SemanticModel& sema_;
  TransformResult r_;
  std::map<uint32_t, int> next_seq_;
};

}  // namespace

TransformResult transform_lambda(const SyntaxTree& tree, const SemanticModel& sema) {
  return LambdaRound(tree, sema).run();
}

}  // namespace retrofit
