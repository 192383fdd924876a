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

struct InitEntry {
  std::string name;
  std::string args;  // `(x)` or `{x}`
};

struct Effective {
  std::vector<InitEntry> inits;
  std::string body;  // statements, without the enclosing braces
};

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

bool is_atom(std::string_view s) {
  auto toks = tokenize(s).tokens;
  int count = 0;
  for (const auto& t : toks) {
    if (t.is_trivia()) continue;
    if (++count > 1) return false;
    if (t.kind != TokenKind::Identifier && t.kind != TokenKind::Literal && t.kind != TokenKind::Keyword) return false;
  }
  return count == 1;
}

using Substitution = std::map<std::string, std::string, std::less<>>;

/// Replaces parameter names by argument texts, token by token.
std::string substitute(std::string_view text, const Substitution& sub) {
  if (sub.empty()) return std::string(text);
  auto toks = tokenize(text).tokens;
  std::string out;
  std::string_view prev;
  for (const auto& t : toks) {
    if (t.kind == TokenKind::Identifier && prev != "." && prev != "->" && prev != "::") {
      auto it = sub.find(t.text);
      if (it != sub.end()) {
        out += is_atom(it->second) ? it->second : "(" + it->second + ")";
        prev = t.text;
        continue;
      }
    }
    out += t.text;
    if (!t.is_trivia()) prev = t.text;
  }
  return out;
}

struct Ctor {
  NodeId fn = kNoNode;
  std::string owner;
  NodeId target = kNoNode;
  bool delegating = false;
};

class Delegation {
 public:
  Delegation(const SyntaxTree& t, const SemanticModel& sema, const std::vector<const SyntaxTree*>& externals)
      : t_(t), sema_(sema), externals_(externals) {}

  TransformResult run() {
    if (t_.root == kNoNode) return std::move(r_);
    t_.walk([&](NodeId id) {
      const auto* f = t_.get<FunctionData>(id);
      if (!f || !f->is_ctor) return;
      if (f->definition != FunctionData::Definition::Body) return;
      Ctor c;
      c.fn = id;
      c.owner = detail::owning_class(t_, id);
      c.delegating = detail::is_delegating(t_, id);
      ctors_[id] = c;
    });
    std::vector<NodeId> callers;
    for (auto& [id, c] : ctors_) {
      if (!c.delegating) continue;
      if (templated(id)) {
        r_.warn(t_, t_.node(id).tokens.begin, Feature::CtorDelegation, "delegation in a template class");
        continue;
      }
      c.target = select_target(c);
      if (c.target == kNoNode) {
        r_.warn(t_, t_.node(id).tokens.begin, Feature::CtorDelegation, "no matching target constructor");
        continue;
      }
      callers.push_back(id);
    }
    for (NodeId id : callers) {
      std::vector<NodeId> seen;
      NodeId cur = id;
      while (cur != kNoNode && ctors_[cur].delegating) {
        if (std::find(seen.begin(), seen.end(), cur) != seen.end()) {
          r_.fail("delegation cycle in class " + ctors_[id].owner);
          r_.warn(t_, t_.node(id).tokens.begin, Feature::CtorDelegation, "delegation cycle");
          return std::move(r_);
        }
        seen.push_back(cur);
        cur = ctors_[cur].target;
      }
    }
    for (NodeId id : callers) {
      if (!complete(id)) continue;
      emit(id);
    }
    return std::move(r_);
  }

 private:
  bool templated(NodeId id) const {
    for (NodeId p = id; p != kNoNode; p = t_.node(p).parent) {
      if (const auto* c = t_.get<ClassData>(p); c && c->is_template) return true;
      if (const auto* f = t_.get<FunctionData>(p); f && f->is_template) return true;
    }
    return sema_.in_template(id);
  }

  bool complete(NodeId id) {
    for (NodeId cur = id; cur != kNoNode && ctors_[cur].delegating; cur = ctors_[cur].target)
      if (ctors_[cur].target == kNoNode) return false;
    return true;
  }

  NodeId select_target(const Ctor& caller) {
    const auto& f = *t_.get<FunctionData>(caller.fn);
    const CtorInit& ci = f.inits.front();
    size_t n = ci.arg_exprs.size();
    NodeId best = kNoNode;
    int best_score = -1;
    bool tie = false;
    for (const auto& [id, c] : ctors_) {
      if (c.owner != caller.owner) continue;
      const auto& g = *t_.get<FunctionData>(id);
      const auto& params = g.signature().params;
      size_t required = 0;
      for (const auto& p : params)
        if (p.default_arg.empty()) ++required;
      if (n < required || (n > params.size() && !g.signature().variadic)) continue;
      int score = 0;
      TypeResult ft = sema_.function_type(NodeRef{&t_, id});
      for (size_t i = 0; i < n && ft && i < ft->args.size(); ++i) {
        TypeResult at = sema_.type_of_expr(ci.arg_exprs[i]);
        if (!at) continue;
        TypeRepr want = strip_const(strip_reference(sema_.canonical(ft->args[i])));
        TypeRepr have = strip_const(strip_reference(sema_.canonical(*at)));
        if (want == have) score += 3;
        else if (decay(have) == want) score += 2;
        else if (want.is_arithmetic() && have.is_arithmetic()) score += 1;
        else if (want.is(TypeRepr::Kind::Named) && have.is(TypeRepr::Kind::Array)) score += 1;
      }
      if (score > best_score) {
        best = id;
        best_score = score;
        tie = false;
      } else if (score == best_score) {
        tie = true;
      }
    }
    if (tie) r_.warn(t_, t_.node(caller.fn).tokens.begin, Feature::CtorDelegation, "ambiguous target constructor");
    return best;
  }

  std::vector<std::string> member_order(const std::string& owner) const {
    std::vector<std::string> order;
    auto scan = [&](const SyntaxTree& t) {
      if (!order.empty() || t.root == kNoNode) return;
      t.walk([&](NodeId id) {
        const auto* c = t.get<ClassData>(id);
        if (!order.empty() || !c || c->name != owner || c->rbrace == kNoToken) return;
        for (const auto& b : c->bases) order.push_back(detail::strip_template_args(b.name));
        for (NodeId child : t.node(id).children) {
          const auto* v = t.get<VariableData>(child);
          if (!v || v->spec.is_static) continue;
          for (const auto& d : v->declarators) order.push_back(d.name_text);
        }
      });
    };
    scan(t_);
    for (const SyntaxTree* e : externals_) scan(*e);
    return order;
  }

  const Effective& effective(NodeId id) {
    auto it = memo_.find(id);
    if (it != memo_.end()) return it->second;
    const auto& f = *t_.get<FunctionData>(id);
    const auto& body = *t_.get<StmtData>(f.body);
    std::string_view c = t_.content();
    uint32_t bb = detail::tok_end(t_, body.lbrace);
    std::string own = trimmed(c.substr(bb, detail::tok_begin(t_, body.rbrace) - bb));
    Effective e;
    if (!ctors_[id].delegating) {
      for (const auto& ci : f.inits) e.inits.push_back({ci.name, std::string(t_.compact_text(ci.args))});
      e.body = own;
      return memo_[id] = e;
    }
    NodeId target = ctors_[id].target;
    Effective te = effective(target);
    Substitution sub = bindings(id, target);
    for (auto& ie : te.inits) e.inits.push_back({ie.name, substitute(ie.args, sub)});
    auto order = member_order(ctors_[id].owner);
    std::stable_sort(e.inits.begin(), e.inits.end(), [&](const InitEntry& a, const InitEntry& b) {
      auto pa = std::find(order.begin(), order.end(), a.name) - order.begin();
      auto pb = std::find(order.begin(), order.end(), b.name) - order.begin();
      return pa < pb;
    });
    std::string prefix = te.body.empty() ? "" : "{ " + substitute(te.body, sub) + " }";
    e.body = prefix.empty() ? own : own.empty() ? prefix : prefix + "\n" + own;
    return memo_[id] = e;
  }

  Substitution bindings(NodeId caller, NodeId target) const {
    const auto& f = *t_.get<FunctionData>(caller);
    const auto& g = *t_.get<FunctionData>(target);
    const auto& args = f.inits.front().arg_exprs;
    const auto& params = g.signature().params;
    Substitution sub;
    for (size_t i = 0; i < params.size(); ++i) {
      const auto& p = params[i];
      if (p.decl.is_abstract()) continue;
      std::string value;
      if (i < args.size()) value = trimmed(t_.text(args[i]));
      else if (!p.default_arg.empty()) value = t_.compact_text(p.default_arg);
      else continue;
      if (value != p.decl.name_text) sub[p.decl.name_text] = value;
    }
    return sub;
  }

  void emit(NodeId id) {
    const auto& f = *t_.get<FunctionData>(id);
    NodeId target = ctors_[id].target;
    const Effective& te = effective(target);
    Substitution sub = bindings(id, target);
    std::vector<InitEntry> inits;
    for (const auto& ie : te.inits) inits.push_back({ie.name, substitute(ie.args, sub)});
    auto order = member_order(ctors_[id].owner);
    std::stable_sort(inits.begin(), inits.end(), [&](const InitEntry& a, const InitEntry& b) {
      auto pa = std::find(order.begin(), order.end(), a.name) - order.begin();
      auto pb = std::find(order.begin(), order.end(), b.name) - order.begin();
      return pa < pb;
    });
    size_t from = r_.edits.size();
    const CtorInit& ci = f.inits.front();
    if (inits.empty()) {
      uint32_t colon = f.init_colon;
      uint32_t b = detail::tok_begin(t_, colon);
      if (colon > 0 && t_.tokens[colon - 1].kind == TokenKind::Whitespace) b = detail::tok_begin(t_, colon - 1);
      r_.edits.push_back(detail::make_edit(b, t_.end_offset(ci.span), "", Feature::CtorDelegation));
    } else {
      std::string list;
      for (const auto& ie : inits) {
        if (!list.empty()) list += ", ";
        list += ie.name + ie.args;
      }
      r_.edits.push_back(detail::make_edit(t_.begin_offset(ci.span), t_.end_offset(ci.span), list,
                                           Feature::CtorDelegation));
    }
    if (!te.body.empty()) {
      const auto& body = *t_.get<StmtData>(f.body);
      std::string ind = detail::indent_of(t_, t_.node(id).tokens.begin);
      r_.edits.push_back(detail::insert_at(detail::tok_end(t_, body.lbrace),
                                           "\n" + ind + "  { " + substitute(te.body, sub) + " }",
                                           Feature::CtorDelegation));
    }
    detail::group_edits(r_.edits, from, detail::tok_begin(t_, f.init_colon));
  }

  const SyntaxTree& t_;
  const SemanticModel& sema_;
  const std::vector<const SyntaxTree*>& externals_;
  TransformResult r_;
  std::map<NodeId, Ctor> ctors_;
  std::map<NodeId, Effective> memo_;
};

}  // namespace

TransformResult inline_delegation(const SyntaxTree& tree, const SemanticModel& sema,
                                  const std::vector<const SyntaxTree*>& externals) {
  TransformResult r = Delegation(tree, sema, externals).run();
  std::stable_sort(r.edits.begin(), r.edits.end(), [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
  return r;
}

}  // namespace retrofit
