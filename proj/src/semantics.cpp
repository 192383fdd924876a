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

#include "retrofit/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <set>
#include <tuple>

namespace retrofit {

std::string_view to_string(SemaError::Kind kind) {
  switch (kind) {
    case SemaError::Kind::None: return "None";
    case SemaError::Kind::UnresolvedIdentifier: return "UnresolvedIdentifier";
    case SemaError::Kind::UnsupportedExpression: return "UnsupportedExpression";
    case SemaError::Kind::DeductionMismatch: return "DeductionMismatch";
    case SemaError::Kind::UnsupportedDecltypeOperand: return "UnsupportedDecltypeOperand";
    case SemaError::Kind::NoRangeProtocol: return "NoRangeProtocol";
  }
  return "?";
}

namespace {

using Env = std::vector<std::pair<std::string, TypeRepr>>;
using TK = TypeRepr::Kind;
using BK = Binding::Kind;
using EK = SemaError::Kind;

bool is_fundamental_word(std::string_view s) {
  static const std::set<std::string_view> words = {"void",  "bool",   "char",     "wchar_t",
                                                    "short", "int",    "long",     "signed",
                                                    "unsigned", "float", "double"};
  return words.contains(s);
}

TypeRepr make_fundamental(const std::vector<std::string_view>& words) {
  int longs = 0;
  bool is_unsigned = false, is_signed = false;
  std::string_view core;
  for (std::string_view w : words) {
    if (w == "long") ++longs;
    else if (w == "unsigned") is_unsigned = true;
    else if (w == "signed") is_signed = true;
    else if (w != "int") core = w;
    else if (core.empty()) core = "";
  }
  if (core == "void" || core == "bool" || core == "float" || core == "wchar_t" || core == "auto")
    return TypeRepr::fundamental(std::string(core));
  if (core == "double") return TypeRepr::fundamental(longs ? "long double" : "double");
  if (core == "char")
    return TypeRepr::fundamental(is_unsigned ? "unsigned char" : is_signed ? "signed char" : "char");
  if (core == "short") return TypeRepr::fundamental(is_unsigned ? "unsigned short" : "short");
  if (longs >= 2) return TypeRepr::fundamental(is_unsigned ? "unsigned long long" : "long long");
  if (longs == 1) return TypeRepr::fundamental(is_unsigned ? "unsigned long" : "long");
  return TypeRepr::fundamental(is_unsigned ? "unsigned" : "int");
}

std::string strip_args(std::string_view qualified) {
  std::string out;
  int depth = 0;
  for (char c : qualified) {
    if (c == '<') ++depth;
    else if (c == '>') depth = std::max(0, depth - 1);
    else if (depth == 0 && c != ' ') out += c;
  }
  return out;
}

std::vector<std::string> split_qualified(std::string_view qualified) {
  std::string s = strip_args(qualified);
  std::vector<std::string> parts;
  size_t pos = 0;
  if (s.starts_with("::")) pos = 2;
  while (pos <= s.size()) {
    size_t next = s.find("::", pos);
    if (next == std::string::npos) {
      parts.push_back(s.substr(pos));
      break;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 2;
  }
  return parts;
}

std::string last_component(std::string_view qualified) {
  auto parts = split_qualified(qualified);
  return parts.empty() ? std::string() : parts.back();
}

std::string qualify(const Scope* s, std::string_view name) {
  if (s == nullptr || s->qualified_name.empty()) return std::string(name);
  return s->qualified_name + "::" + std::string(name);
}

bool contains_auto(const TypeRepr& t) {
  if (t.kind == TK::Fundamental) return t.name == "auto";
  if (t.kind == TK::Named) return false;
  for (const auto& s : t.sub)
    if (contains_auto(s)) return true;
  if (t.kind == TK::Function)
    for (const auto& a : t.args)
      if (contains_auto(a)) return true;
  return false;
}

TypeRepr replace_auto(const TypeRepr& t, const TypeRepr& with) {
  if (t.kind == TK::Fundamental && t.name == "auto") return with;
  TypeRepr out = t;
  for (auto& s : out.sub) s = replace_auto(s, with);
  if (out.kind == TK::Const) return add_const(out.inner());
  if (out.kind == TK::LRef && out.inner().kind == TK::LRef) return out.inner();
  if (out.kind == TK::Pointer && out.inner().kind == TK::LRef) return TypeRepr::pointer(out.inner().inner());
  return out;
}

// Placeholder unification for `auto` patterns.
bool unify_auto(const TypeRepr& p, const TypeRepr& a, std::optional<TypeRepr>& bound) {
  if (p.kind == TK::Fundamental && p.name == "auto") {
    if (bound && !(*bound == a)) return false;
    bound = a;
    return true;
  }
  if (p.kind == TK::Const) {
    if (a.kind == TK::Const) return unify_auto(p.inner(), a.inner(), bound);
    return unify_auto(p.inner(), a, bound);
  }
  if (p.kind != a.kind) return false;
  if (p.kind == TK::Pointer || p.kind == TK::LRef) return unify_auto(p.inner(), a.inner(), bound);
  return p == a;
}

int rank_of(const std::string& n) {
  static const std::vector<std::string> order = {"int", "unsigned", "long", "unsigned long", "long long",
                                                 "unsigned long long"};
  auto it = std::find(order.begin(), order.end(), n);
  return it == order.end() ? 0 : static_cast<int>(it - order.begin());
}

TypeRepr promote(const TypeRepr& t) {
  if (t.kind != TK::Fundamental) return t;
  if (t.name == "bool" || t.name == "char" || t.name == "signed char" || t.name == "unsigned char" ||
      t.name == "short" || t.name == "unsigned short" || t.name == "wchar_t" || t.name == "unsigned int")
    return TypeRepr::fundamental(t.name == "unsigned int" ? "unsigned" : "int");
  return t;
}

TypeRepr usual_arithmetic(const TypeRepr& a, const TypeRepr& b) {
  for (const char* f : {"long double", "double", "float"})
    if (a.name == f || b.name == f) return TypeRepr::fundamental(f);
  TypeRepr pa = promote(a), pb = promote(b);
  return rank_of(pa.name) >= rank_of(pb.name) ? pa : pb;
}

// Decoded character count of one string-literal token, terminator excluded.
int64_t string_literal_length(std::string_view tok) {
  size_t q = tok.find('"');
  if (q == std::string_view::npos) return 0;
  if (q > 0 && tok[q - 1] == 'R') {
    size_t open = tok.find('(', q);
    size_t close = tok.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) return 0;
    return static_cast<int64_t>(close - open - 1);
  }
  std::string_view body = tok.substr(q + 1);
  if (!body.empty() && body.back() == '"') body.remove_suffix(1);
  int64_t n = 0;
  for (size_t i = 0; i < body.size(); ++i) {
    if (body[i] == '\\' && i + 1 < body.size()) {
      char c = body[i + 1];
      if (c == 'x') {
        i += 2;
        while (i < body.size() && std::isxdigit(static_cast<unsigned char>(body[i]))) ++i;
        --i;
      } else if (c >= '0' && c <= '7') {
        size_t k = i + 1;
        while (k < body.size() && k < i + 4 && body[k] >= '0' && body[k] <= '7') ++k;
        i = k - 1;
      } else {
        ++i;
      }
    }
    ++n;
  }
  return n;
}

struct ClassInfo {
  const Scope* scope = nullptr;
  const Binding* binding = nullptr;
  NodeRef node;
  std::vector<std::string> tparams;
  bool is_template = false;
};

struct ClassRef {
  const Scope* scope = nullptr;
  Env env;
};

struct MemberHit {
  const Binding* binding = nullptr;
  Env env;
};

}  // namespace

TypeResult deduce_auto(const TypeRepr& pattern, const TypeRepr& init_type) {
  if (!contains_auto(pattern)) return TypeResult::ok(pattern);
  std::optional<TypeRepr> bound;
  if (pattern.kind == TK::LRef) {
    TypeRepr a = strip_reference(init_type);
    if (!unify_auto(pattern.inner(), a, bound))
      return TypeResult::fail(EK::DeductionMismatch, "cannot bind " + describe(init_type) + " to " + describe(pattern));
    return TypeResult::ok(replace_auto(pattern, *bound));
  }
  TypeRepr a = strip_const(decay(strip_reference(init_type)));
  TypeRepr p = strip_const(pattern);
  if (!unify_auto(p, a, bound))
    return TypeResult::fail(EK::DeductionMismatch, "cannot deduce " + describe(pattern) + " from " + describe(init_type));
  return TypeResult::ok(replace_auto(pattern, *bound));
}

struct SemanticModel::Impl {
  const SemanticModel& model;
  std::vector<const SyntaxTree*> trees;
  std::deque<Scope> scopes;
  std::map<const SyntaxTree*, std::unordered_map<NodeId, const Scope*>> node_scope;
  std::map<const SyntaxTree*, Scope*> globals;
  std::map<std::string, std::vector<Scope*>, std::less<>> namespaces;
  std::map<std::string, std::vector<const Binding*>, std::less<>> type_table;
  std::map<const Scope*, ClassInfo> class_info;
  std::map<std::pair<const SyntaxTree*, NodeId>, const Scope*> class_scope_of;

  mutable std::map<std::tuple<const SyntaxTree*, NodeId, size_t, bool>, TypeResult> decl_cache;
  mutable std::set<std::tuple<const SyntaxTree*, NodeId, size_t, bool>> decl_busy;
  mutable std::map<std::pair<const SyntaxTree*, NodeId>, TypeResult> expr_cache;
  mutable std::map<const Scope*, std::vector<TypeRepr>> base_cache;
  mutable std::set<const Scope*> base_busy;
  mutable int depth = 0;

  explicit Impl(const SemanticModel& m) : model(m) {}

  // ---- construction --------------------------------------------------
  struct Ctx {
    bool local = false;
    NodeRef lambda;
  };

  Scope* new_scope(Scope::Kind k, const Scope* parent, NodeRef owner, std::string q) {
    scopes.emplace_back();
    Scope& s = scopes.back();
    s.kind = k;
    s.parent = parent;
    s.owner = owner;
    s.qualified_name = std::move(q);
    return &s;
  }

  std::string type_key(const Binding& b) const {
    if (b.kind == BK::TemplateParam) return b.name;
    if (b.scope && (b.scope->kind == Scope::Kind::Global || b.scope->kind == Scope::Kind::Namespace))
      return qualify(b.scope, b.name);
    return b.name;
  }

  static bool is_class_definition(const Binding& b) {
    if (b.decl.node().kind != NodeKind::Class) return false;
    const auto* c = b.decl.tree->get<ClassData>(b.decl.id);
    return c && c->rbrace != kNoToken;
  }

  const Binding* bind(Scope* s, Binding b) {
    b.scope = s;
    auto it = s->bindings.emplace(b.name, std::move(b));
    const Binding* stored = &it->second;
    if (stored->kind == BK::Type && s->kind != Scope::Kind::Class) {
      auto& list = type_table[type_key(*stored)];
      list.push_back(stored);
    }
    return stored;
  }

  void build_tree(const SyntaxTree& t) {
    Scope* g = new_scope(Scope::Kind::Global, nullptr, NodeRef{&t, t.root}, "");
    globals[&t] = g;
    namespaces[""].push_back(g);
    if (t.root == kNoNode) return;
    node_scope[&t][t.root] = g;
    for (NodeId c : t.node(t.root).children) build(t, c, g, Ctx{});
  }

  void bind_template_params(Scope* s, const TemplateHeader& h, const SyntaxTree& t, NodeId id) {
    for (const auto& p : h.params) {
      Binding b;
      b.kind = BK::TemplateParam;
      b.name = p;
      b.decl = {&t, id};
      bind(s, std::move(b));
    }
  }

  void build_children(const SyntaxTree& t, NodeId id, Scope* cur, Ctx c) {
    for (NodeId ch : t.node(id).children) build(t, ch, cur, c);
  }

  void build(const SyntaxTree& t, NodeId id, Scope* cur, Ctx c) {
    const Node& n = t.node(id);
    NodeRef ref{&t, id};
    switch (n.kind) {
      case NodeKind::Namespace: {
        const auto* d = t.get<NamespaceData>(id);
        if (!d || d->name.empty()) {
          build_children(t, id, cur, c);
          return;
        }
        std::string q = qualify(cur, d->name);
        Scope* s = new_scope(Scope::Kind::Namespace, cur, ref, q);
        namespaces[q].push_back(s);
        node_scope[&t][id] = s;
        build_children(t, id, s, c);
        return;
      }
      case NodeKind::Class: {
        const auto* cd = t.get<ClassData>(id);
        if (!cd) return;
        const Binding* self = nullptr;
        if (!cd->name.empty()) {
          Binding b;
          b.kind = BK::Type;
          b.name = cd->name;
          b.decl = ref;
          b.visible_from = cd->name_tok != kNoToken ? cd->name_tok : n.tokens.begin;
          b.is_local = c.local;
          self = bind(cur, std::move(b));
        }
        if (cd->lbrace == kNoToken) return;
        std::string q = cur->kind == Scope::Kind::Block || cur->kind == Scope::Kind::Function
                            ? cd->name
                            : qualify(cur, cd->name);
        Scope* s = new_scope(Scope::Kind::Class, cur, ref, q);
        node_scope[&t][id] = s;
        class_scope_of[{&t, id}] = s;
        ClassInfo info;
        info.scope = s;
        info.binding = self;
        info.node = ref;
        info.is_template = cd->is_template;
        if (cd->is_template) {
          info.tparams = cd->tmpl.params;
          bind_template_params(s, cd->tmpl, t, id);
        }
        class_info[s] = info;
        build_children(t, id, s, c);
        return;
      }
      case NodeKind::Enum: {
        const auto* ed = t.get<EnumData>(id);
        if (!ed) return;
        if (!ed->name.empty()) {
          Binding b;
          b.kind = BK::Type;
          b.name = ed->name;
          b.decl = ref;
          b.visible_from = n.tokens.begin;
          b.is_local = c.local;
          bind(cur, std::move(b));
        }
        for (size_t i = 0; i < ed->enumerators.size(); ++i) {
          Binding b;
          b.kind = BK::Enumerator;
          b.name = ed->enumerators[i];
          b.decl = ref;
          b.index = i;
          b.visible_from = n.tokens.begin;
          b.is_local = c.local;
          bind(cur, std::move(b));
        }
        return;
      }
      case NodeKind::Function: {
        const auto* fd = t.get<FunctionData>(id);
        if (!fd) return;
        const Scope* parent = cur;
        if (fd->qualifier.empty()) {
          Binding b;
          b.kind = BK::Function;
          b.name = fd->name;
          b.decl = ref;
          b.visible_from = fd->decl.name != kNoToken ? fd->decl.name : n.tokens.begin;
          b.is_local = c.local;
          bind(cur, std::move(b));
        } else if (const Scope* cls = find_scope_path(split_qualified(fd->qualifier), cur, &t)) {
          parent = cls;
        }
        Scope* fs = new_scope(Scope::Kind::Function, parent, ref, "");
        node_scope[&t][id] = fs;
        if (fd->is_template) bind_template_params(fs, fd->tmpl, t, id);
        if (!fd->decl.ops.empty() && fd->decl.ops.front().kind == DeclOp::Kind::Function) {
          const auto& params = fd->signature().params;
          for (size_t i = 0; i < params.size(); ++i) {
            if (params[i].decl.is_abstract()) continue;
            Binding b;
            b.kind = BK::Parameter;
            b.name = std::string(t.tok(params[i].decl.name));
            b.decl = ref;
            b.index = i;
            b.visible_from = params[i].decl.name;
            b.is_local = true;
            b.lambda_owner = c.lambda;
            bind(fs, std::move(b));
          }
        }
        Ctx inner{true, c.lambda};
        build_children(t, id, fs, inner);
        return;
      }
      case NodeKind::Lambda: {
        const auto* ld = t.get<LambdaData>(id);
        Scope* fs = new_scope(Scope::Kind::Function, cur, ref, "");
        node_scope[&t][id] = fs;
        if (ld) {
          for (size_t i = 0; i < ld->params.size(); ++i) {
            if (ld->params[i].decl.is_abstract()) continue;
            Binding b;
            b.kind = BK::Parameter;
            b.name = std::string(t.tok(ld->params[i].decl.name));
            b.decl = ref;
            b.index = i;
            b.visible_from = ld->params[i].decl.name;
            b.is_local = true;
            b.lambda_owner = ref;
            bind(fs, std::move(b));
          }
        }
        build_children(t, id, fs, Ctx{true, ref});
        return;
      }
      case NodeKind::Compound:
      case NodeKind::For:
      case NodeKind::If:
      case NodeKind::While:
      case NodeKind::Switch:
      case NodeKind::Do:
      case NodeKind::Try: {
        Scope* s = new_scope(Scope::Kind::Block, cur, ref, "");
        node_scope[&t][id] = s;
        build_children(t, id, s, c);
        return;
      }
      case NodeKind::RangeFor: {
        const auto* rd = t.get<RangeForData>(id);
        Scope* s = new_scope(Scope::Kind::Block, cur, ref, "");
        node_scope[&t][id] = s;
        if (rd && rd->decl.name != kNoToken) {
          Binding b;
          b.kind = BK::Variable;
          b.name = std::string(t.tok(rd->decl.name));
          b.decl = ref;
          b.visible_from = rd->rparen;
          b.is_local = true;
          b.lambda_owner = c.lambda;
          bind(s, std::move(b));
        }
        build_children(t, id, s, c);
        return;
      }
      case NodeKind::Variable: {
        const auto* vd = t.get<VariableData>(id);
        if (!vd) return;
        build_children(t, id, cur, c);
        for (size_t i = 0; i < vd->declarators.size(); ++i) {
          const Declarator& d = vd->declarators[i];
          if (d.name == kNoToken) continue;
          Binding b;
          bool fn = !d.ops.empty() && d.ops.front().kind == DeclOp::Kind::Function;
          b.kind = fn ? BK::Function : cur->kind == Scope::Kind::Class ? BK::Member : BK::Variable;
          b.name = last_component(d.name_text);
          b.decl = ref;
          b.index = i;
          b.visible_from = d.name + 1;
          b.is_local = c.local;
          b.lambda_owner = c.lambda;
          if (!fn) bind(cur, std::move(b));
        }
        return;
      }
      case NodeKind::Typedef: {
        const auto* td = t.get<TypedefData>(id);
        if (!td) return;
        build_children(t, id, cur, c);
        for (size_t i = 0; i < td->declarators.size(); ++i) {
          const Declarator& d = td->declarators[i];
          if (d.name == kNoToken) continue;
          Binding b;
          b.kind = BK::Type;
          b.name = d.name_text;
          b.decl = ref;
          b.index = i;
          b.visible_from = d.name;
          b.is_local = c.local;
          bind(cur, std::move(b));
        }
        return;
      }
      case NodeKind::UsingAlias: {
        const auto* ua = t.get<UsingAliasData>(id);
        if (!ua) return;
        Binding b;
        b.kind = BK::Type;
        b.name = ua->name;
        b.decl = ref;
        b.visible_from = ua->name_tok;
        b.is_local = c.local;
        bind(cur, std::move(b));
        return;
      }
      case NodeKind::Using: {
        const auto* ud = t.get<UsingData>(id);
        if (!ud) return;
        std::string name = strip_args(ud->name);
        if (name.starts_with("::")) name = name.substr(2);
        if (ud->is_directive) cur->using_directives.push_back(name);
        else if (name.find("::") != std::string::npos) cur->using_declarations.push_back(name);
        return;
      }
      default:
        build_children(t, id, cur, c);
        return;
    }
  }

  // ---- lookup ---------------------------------------------------------
  const Scope* scope_at(NodeRef at) const {
    auto tit = node_scope.find(at.tree);
    if (tit == node_scope.end()) return nullptr;
    NodeId id = at.id;
    while (id != kNoNode) {
      auto it = tit->second.find(id);
      if (it != tit->second.end()) return it->second;
      id = at.tree->node(id).parent;
    }
    auto g = globals.find(at.tree);
    return g == globals.end() ? nullptr : g->second;
  }

  static bool better(const Binding* cur, const Binding& cand) {
    if (!cur) return true;
    if (cur->kind == BK::Type && cand.kind == BK::Type && is_class_definition(*cur) && !is_class_definition(cand))
      return false;
    return true;
  }

  const Binding* find_local(const Scope* s, std::string_view name, const SyntaxTree* t, uint32_t tok,
                            bool visibility) const {
    const Binding* best = nullptr;
    auto [lo, hi] = s->bindings.equal_range(name);
    for (auto it = lo; it != hi; ++it) {
      const Binding& b = it->second;
      if (visibility && s->kind != Scope::Kind::Class && b.decl.tree == t && tok != kNoToken &&
          b.visible_from > tok)
        continue;
      if (better(best, b)) best = &b;
    }
    return best;
  }

  const Binding* find_here(const Scope* s, std::string_view name, const SyntaxTree* t, uint32_t tok,
                           bool visibility) const {
    if (s->kind == Scope::Kind::Namespace || s->kind == Scope::Kind::Global) {
      const Binding* best = nullptr;
      auto it = namespaces.find(s->qualified_name);
      if (it == namespaces.end()) return find_local(s, name, t, tok, visibility);
      for (const Scope* ns : it->second) {
        if (s->kind == Scope::Kind::Global && ns != s) continue;  // other trees come last
        if (const Binding* b = find_local(ns, name, t, tok, visibility); b && better(best, *b)) best = b;
      }
      return best;
    }
    return find_local(s, name, t, tok, visibility);
  }

  const Binding* find_in_namespace(std::string_view qualified, std::string_view name) const {
    auto it = namespaces.find(qualified);
    if (it == namespaces.end()) return nullptr;
    const Binding* best = nullptr;
    for (const Scope* ns : it->second)
      if (const Binding* b = find_local(ns, name, nullptr, kNoToken, false); b && better(best, *b)) best = b;
    return best;
  }

  // Directive `using namespace N` written in scope `s`, as a qualified name.
  std::string directive_target(const Scope* s, const std::string& written) const {
    for (const Scope* sc = s; sc; sc = sc->parent) {
      if (sc->kind != Scope::Kind::Namespace && sc->kind != Scope::Kind::Global) continue;
      std::string q = qualify(sc, written);
      if (namespaces.contains(q)) return q;
    }
    return written;
  }

  const Binding* lookup_from(const Scope* s, std::string_view name, const SyntaxTree* t, uint32_t tok) const {
    if (name.find("::") != std::string_view::npos) return resolve_qualified(name, s, t, tok);
    const Scope* last = nullptr;
    for (const Scope* sc = s; sc; sc = sc->parent) {
      last = sc;
      if (const Binding* b = find_here(sc, name, t, tok, true)) return b;
      if (sc->kind == Scope::Kind::Class) {
        if (const Binding* b = find_in_bases(sc, name)) return b;
      }
      for (const auto& ud : sc->using_declarations)
        if (last_component(ud) == name)
          if (const Binding* b = resolve_qualified(ud, sc, t, tok)) return b;
      for (const auto& dir : sc->using_directives)
        if (const Binding* b = find_in_namespace(directive_target(sc, dir), name)) return b;
    }
    for (const SyntaxTree* other : trees) {
      auto g = globals.find(other);
      if (g == globals.end() || g->second == last) continue;
      if (const Binding* b = find_local(g->second, name, nullptr, kNoToken, false)) return b;
      for (const auto& dir : g->second->using_directives)
        if (const Binding* b = find_in_namespace(directive_target(g->second, dir), name)) return b;
    }
    return nullptr;
  }

  // Namespace or class scope named by a path, looked up from `from`.
  const Scope* find_scope_path(const std::vector<std::string>& comps, const Scope* from,
                               const SyntaxTree* t) const {
    if (comps.empty()) return nullptr;
    const Scope* cur = nullptr;
    std::string ns;
    bool in_ns = false;
    // first component
    const Binding* b = lookup_from(from, comps[0], t, kNoToken);
    if (b && b->kind == BK::Type) {
      cur = class_scope_for(*b);
      if (!cur) return nullptr;
    } else {
      std::string q = directive_target(from, comps[0]);
      if (!namespaces.contains(q)) return nullptr;
      ns = q;
      in_ns = true;
    }
    for (size_t i = 1; i < comps.size(); ++i) {
      if (in_ns) {
        std::string q = ns + "::" + comps[i];
        if (namespaces.contains(q)) {
          ns = q;
          continue;
        }
        const Binding* nb = find_in_namespace(ns, comps[i]);
        if (!nb || nb->kind != BK::Type) return nullptr;
        cur = class_scope_for(*nb);
        if (!cur) return nullptr;
        in_ns = false;
      } else {
        const Binding* nb = find_local(cur, comps[i], nullptr, kNoToken, false);
        if (!nb || nb->kind != BK::Type) return nullptr;
        cur = class_scope_for(*nb);
        if (!cur) return nullptr;
      }
    }
    if (in_ns) {
      auto it = namespaces.find(ns);
      return it->second.front();
    }
    return cur;
  }

  const Binding* resolve_qualified(std::string_view qname, const Scope* from, const SyntaxTree* t,
                                   uint32_t tok) const {
    auto comps = split_qualified(qname);
    if (comps.empty()) return nullptr;
    if (comps.size() == 1) {
      if (qname.starts_with("::")) {
        auto g = globals.find(t);
        if (g != globals.end())
          if (const Binding* b = find_local(g->second, comps[0], t, tok, true)) return b;
        for (const SyntaxTree* other : trees)
          if (const Binding* b = find_local(globals.at(other), comps[0], nullptr, kNoToken, false)) return b;
        return nullptr;
      }
      return lookup_from(from, comps[0], t, tok);
    }
    std::vector<std::string> path(comps.begin(), comps.end() - 1);
    const Scope* s = find_scope_path(path, from, t);
    if (!s) return nullptr;
    if (s->kind == Scope::Kind::Namespace) {
      if (const Binding* b = find_in_namespace(s->qualified_name, comps.back())) return b;
      for (const Scope* ns : namespaces.at(s->qualified_name))
        for (const auto& dir : ns->using_directives)
          if (const Binding* b = find_in_namespace(directive_target(ns, dir), comps.back())) return b;
      return nullptr;
    }
    if (const Binding* b = find_local(s, comps.back(), nullptr, kNoToken, false)) return b;
    return find_in_bases(s, comps.back());
  }

  const Scope* class_scope_for(const Binding& b) const {
    if (b.kind != BK::Type) return nullptr;
    NodeKind k = b.decl.node().kind;
    if (k == NodeKind::Class) {
      auto it = class_scope_of.find({b.decl.tree, b.decl.id});
      if (it != class_scope_of.end()) return it->second;
      // forward declaration: find the definition by key
      auto tt = type_table.find(type_key(b));
      if (tt != type_table.end())
        for (const Binding* d : tt->second)
          if (is_class_definition(*d)) return class_scope_for(*d);
      return nullptr;
    }
    if (k == NodeKind::Typedef || k == NodeKind::UsingAlias) {
      TypeResult r = declared_type(b.decl, b.index, false);
      if (!r) return nullptr;
      auto cls = resolve_class(*r);
      return cls ? cls->scope : nullptr;
    }
    return nullptr;
  }

  // ---- classes --------------------------------------------------------
  const std::vector<TypeRepr>& class_bases(const Scope* cs) const {
    static const std::vector<TypeRepr> none;
    if (auto it = base_cache.find(cs); it != base_cache.end()) return it->second;
    if (base_busy.contains(cs)) return none;
    base_busy.insert(cs);
    std::vector<TypeRepr> out;
    auto info = class_info.find(cs);
    if (info != class_info.end()) {
      const auto* cd = info->second.node.tree->get<ClassData>(info->second.node.id);
      for (const auto& base : cd->bases) {
        TypeResult r = read_type(*info->second.node.tree, base.span, cs->parent, base.span.begin);
        if (r) out.push_back(*r);
      }
    }
    base_busy.erase(cs);
    return base_cache[cs] = std::move(out);
  }

  const Binding* find_in_bases(const Scope* cs, std::string_view name) const {
    if (depth > 32) return nullptr;
    ++depth;
    const Binding* found = nullptr;
    for (const TypeRepr& base : class_bases(cs)) {
      auto ref = resolve_class(base);
      if (!ref) continue;
      found = find_local(ref->scope, name, nullptr, kNoToken, false);
      if (!found) found = find_in_bases(ref->scope, name);
      if (found) break;
    }
    --depth;
    return found;
  }

  TypeRepr self_type(const Scope* cs) const {
    auto it = class_info.find(cs);
    if (it == class_info.end()) return TypeRepr::named(cs->qualified_name);
    const ClassInfo& info = it->second;
    std::vector<TypeRepr> args;
    for (const auto& p : info.tparams) args.push_back(TypeRepr::named(p));
    std::string name = info.binding ? info.binding->name : cs->qualified_name;
    if (cs->parent && cs->parent->kind == Scope::Kind::Class) {
      TypeRepr t = TypeRepr::member_type(self_type(cs->parent), name);
      t.args = std::move(args);
      t.has_template_args = info.is_template;
      return t;
    }
    std::string key = info.binding ? type_key(*info.binding) : cs->qualified_name;
    return TypeRepr::named(key, std::move(args), info.is_template);
  }

  static Env zip_env(const std::vector<std::string>& params, const std::vector<TypeRepr>& args) {
    Env env;
    for (size_t i = 0; i < params.size() && i < args.size(); ++i) env.emplace_back(params[i], args[i]);
    return env;
  }

  const Binding* best_type_entry(std::string_view key) const {
    auto it = type_table.find(key);
    if (it == type_table.end()) return nullptr;
    const Binding* best = nullptr;
    for (const Binding* b : it->second)
      if (better(best, *b)) best = b;
    return best;
  }

  std::optional<MemberHit> find_type_member(const ClassRef& cls, std::string_view name) const {
    if (const Binding* b = find_local(cls.scope, name, nullptr, kNoToken, false); b && b->kind == BK::Type)
      return MemberHit{b, cls.env};
    for (const TypeRepr& base : class_bases(cls.scope)) {
      auto ref = resolve_class(substitute(base, cls.env));
      if (!ref) continue;
      if (auto hit = find_type_member(*ref, name)) return hit;
    }
    return std::nullopt;
  }

  std::optional<ClassRef> resolve_class(const TypeRepr& t0) const {
    TypeRepr t = strip_const(strip_reference(t0));
    if (t.kind != TK::Named || depth > 40) return std::nullopt;
    struct Guard {
      int& d;
      explicit Guard(int& x) : d(x) { ++d; }
      ~Guard() { --d; }
    } guard(depth);
    if (!t.sub.empty()) {
      auto owner = resolve_class(t.sub.front());
      if (!owner) return std::nullopt;
      auto hit = find_type_member(*owner, t.name);
      if (!hit) return std::nullopt;
      const Binding& b = *hit->binding;
      if (b.decl.node().kind == NodeKind::Class) {
        const Scope* cs = class_scope_for(b);
        if (!cs) return std::nullopt;
        Env env = hit->env;
        auto ci = class_info.find(cs);
        if (ci != class_info.end() && ci->second.is_template)
          for (auto& kv : zip_env(ci->second.tparams, t.args)) env.push_back(kv);
        return ClassRef{cs, env};
      }
      TypeResult target = declared_type(b.decl, b.index, false);
      if (!target) return std::nullopt;
      return resolve_class(substitute(*target, hit->env));
    }
    const Binding* b = best_type_entry(t.name);
    if (!b) return std::nullopt;
    NodeKind k = b->decl.node().kind;
    if (k == NodeKind::Class) {
      const Scope* cs = class_scope_for(*b);
      if (!cs) return std::nullopt;
      const ClassInfo& ci = class_info.at(cs);
      return ClassRef{cs, zip_env(ci.tparams, t.args)};
    }
    if (k == NodeKind::Typedef || k == NodeKind::UsingAlias) {
      TypeResult target = declared_type(b->decl, b->index, false);
      if (!target) return std::nullopt;
      return resolve_class(*target);
    }
    return std::nullopt;
  }

  TypeRepr canonical(const TypeRepr& t) const {
    if (depth > 40) return t;
    struct Guard {
      int& d;
      explicit Guard(int& x) : d(x) { ++d; }
      ~Guard() { --d; }
    } guard(depth);
    switch (t.kind) {
      case TK::Fundamental:
        return t;
      case TK::Named: {
        const Binding* b = nullptr;
        Env env;
        if (!t.sub.empty()) {
          auto owner = resolve_class(t.sub.front());
          if (owner)
            if (auto hit = find_type_member(*owner, t.name)) {
              b = hit->binding;
              env = hit->env;
            }
        } else {
          b = best_type_entry(t.name);
        }
        if (!b) {
          TypeRepr out = t;
          for (auto& a : out.args) a = canonical(a);
          return out;
        }
        NodeKind k = b->decl.node().kind;
        if (k == NodeKind::Enum) return TypeRepr::fundamental("int");
        if (k == NodeKind::Typedef || (k == NodeKind::UsingAlias)) {
          TypeResult target = declared_type(b->decl, b->index, false);
          if (target) return canonical(substitute(*target, env));
          return t;
        }
        TypeRepr out = t;
        for (auto& a : out.args) a = canonical(a);
        if (!out.sub.empty()) out.sub.front() = canonical(out.sub.front());
        return out;
      }
      default: {
        TypeRepr out = t;
        for (auto& s : out.sub) s = canonical(s);
        for (auto& a : out.args) a = canonical(a);
        if (out.kind == TK::Const) return add_const(out.inner());
        if (out.kind == TK::LRef && out.inner().kind == TK::LRef) return out.inner();
        return out;
      }
    }
  }

  std::vector<MemberHit> find_members(const ClassRef& cls, std::string_view name) const {
    std::vector<MemberHit> out;
    auto [lo, hi] = cls.scope->bindings.equal_range(name);
    for (auto it = lo; it != hi; ++it) out.push_back({&it->second, cls.env});
    if (!out.empty() || depth > 32) return out;
    ++depth;
    for (const TypeRepr& base : class_bases(cls.scope)) {
      auto ref = resolve_class(substitute(base, cls.env));
      if (!ref) continue;
      out = find_members(*ref, name);
      if (!out.empty()) break;
    }
    --depth;
    return out;
  }

  // ---- types from syntax ------------------------------------------------
  class Reader;

  TypeResult read_type(const SyntaxTree& t, TokenSpan span, const Scope* scope, uint32_t tok) const;
  TypeResult read_specifier(const SyntaxTree& t, TokenSpan span, const Scope* scope, uint32_t tok) const;

  TypeResult type_for_binding(const Binding& b, std::vector<TypeRepr> args, bool has_args) const {
    if (b.kind == BK::TemplateParam) return TypeResult::ok(TypeRepr::named(b.name));
    NodeKind k = b.decl.node().kind;
    if (k == NodeKind::UsingAlias) {
      const auto* ua = b.decl.tree->get<UsingAliasData>(b.decl.id);
      if (ua && ua->is_template) {
        TypeResult target = declared_type(b.decl, 0, false);
        if (!target) return target;
        return TypeResult::ok(substitute(*target, zip_env(ua->tmpl.params, args)));
      }
    }
    if (b.scope && b.scope->kind == Scope::Kind::Class) {
      TypeRepr t = TypeRepr::member_type(self_type(b.scope), b.name);
      t.args = std::move(args);
      t.has_template_args = has_args;
      return TypeResult::ok(t);
    }
    return TypeResult::ok(TypeRepr::named(type_key(b), std::move(args), has_args));
  }

  std::optional<int64_t> eval_extent(const SyntaxTree& t, TokenSpan span, const Scope* scope) const;

  TypeResult apply_ops(const SyntaxTree& t, TypeRepr base, const std::vector<DeclOp>& ops, const Scope* scope) const {
    TypeRepr cur = std::move(base);
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
      const DeclOp& op = *it;
      switch (op.kind) {
        case DeclOp::Kind::Pointer:
          if (cur.kind == TK::LRef) return TypeResult::fail(EK::UnsupportedExpression, "pointer to reference");
          cur = TypeRepr::pointer(cur);
          if (op.is_const) cur = add_const(cur);
          break;
        case DeclOp::Kind::LRef:
        case DeclOp::Kind::RRef:
          cur = TypeRepr::lref(cur);
          break;
        case DeclOp::Kind::Array: {
          int64_t extent = -1;
          if (!op.extent.empty()) {
            auto v = eval_extent(t, op.extent, scope);
            if (v) extent = *v;
          }
          cur = TypeRepr::array(cur, extent);
          break;
        }
        case DeclOp::Kind::Function: {
          std::vector<TypeRepr> params;
          for (const Param& p : op.params) {
            TypeResult pt = param_type(t, p, scope);
            if (!pt) return pt;
            params.push_back(*pt);
          }
          TypeRepr fn = TypeRepr::function(cur, std::move(params), op.variadic);
          fn.const_method = op.is_const;
          cur = std::move(fn);
          break;
        }
      }
    }
    return TypeResult::ok(cur);
  }

  TypeResult param_type(const SyntaxTree& t, const Param& p, const Scope* scope) const {
    TypeResult base = read_specifier(t, p.spec, scope, p.spec.begin);
    if (!base) return base;
    return apply_ops(t, *base, p.decl.ops, scope);
  }

  TypeResult from_syntax(const SyntaxTree& t, const DeclSpec& spec, const Declarator& decl, const Scope* scope) const {
    TypeResult base = read_specifier(t, spec.type, scope, spec.type.begin);
    if (!base) return base;
    TypeRepr b = *base;
    if (spec.is_const) b = add_const(b);
    return apply_ops(t, b, decl.ops, scope);
  }

  // ---- declared types ----------------------------------------------------
  static const Declarator* declarator_of(const SyntaxTree& t, NodeId id, size_t index) {
    if (const auto* v = t.get<VariableData>(id)) return index < v->declarators.size() ? &v->declarators[index] : nullptr;
    if (const auto* td = t.get<TypedefData>(id)) return index < td->declarators.size() ? &td->declarators[index] : nullptr;
    if (const auto* r = t.get<RangeForData>(id)) return &r->decl;
    return nullptr;
  }

  int64_t initializer_extent(const SyntaxTree& t, const Declarator& d) const {
    if (d.init_kind == Declarator::Init::Brace) return static_cast<int64_t>(d.init_args.size());
    if (d.init_kind == Declarator::Init::Assign && !d.init_args.empty()) {
      const Node& init = t.node(d.init_args.front());
      if (init.kind == NodeKind::InitList) return static_cast<int64_t>(init.children.size());
      if (init.kind == NodeKind::Literal) {
        int64_t n = 0;
        bool any = false;
        for (uint32_t i = init.tokens.begin; i < init.tokens.end; ++i) {
          if (!t.is_significant(i)) continue;
          std::string_view s = t.tok(i);
          if (s.find('"') == std::string_view::npos) return -1;
          n += string_literal_length(s);
          any = true;
        }
        if (any) return n + 1;
      }
    }
    return -1;
  }

  TypeResult declared_type(NodeRef ref, size_t index, bool deduce) const {
    auto key = std::make_tuple(ref.tree, ref.id, index, deduce);
    if (auto it = decl_cache.find(key); it != decl_cache.end()) return it->second;
    if (decl_busy.contains(key)) return TypeResult::fail(EK::UnsupportedExpression, "recursive declaration");
    decl_busy.insert(key);
    TypeResult r = compute_declared_type(ref, index, deduce);
    decl_busy.erase(key);
    decl_cache.emplace(key, r);
    return r;
  }

  TypeResult compute_declared_type(NodeRef ref, size_t index, bool deduce) const {
    const SyntaxTree& t = *ref.tree;
    const Node& n = ref.node();
    const Scope* scope = scope_at(ref);
    switch (n.kind) {
      case NodeKind::Variable: {
        const auto* v = t.get<VariableData>(ref.id);
        if (!v || index >= v->declarators.size()) break;
        const Declarator& d = v->declarators[index];
        TypeResult r = from_syntax(t, v->spec, d, scope);
        if (!r) return r;
        TypeRepr ty = *r;
        if (ty.kind == TK::Array && ty.extent < 0) {
          int64_t e = initializer_extent(t, d);
          if (e >= 0) ty.extent = e;
        }
        if (!deduce || !contains_auto(ty)) return TypeResult::ok(ty);
        NodeId init = kNoNode;
        if (d.init_kind == Declarator::Init::Assign && !d.init_args.empty()) init = d.init_args.front();
        else if (d.init_kind == Declarator::Init::Paren && d.init_args.size() == 1) init = d.init_args.front();
        else if (d.init_kind == Declarator::Init::Brace)
          return TypeResult::fail(EK::UnsupportedExpression, "braced initializer for auto", d.init.begin);
        if (init == kNoNode)
          return TypeResult::fail(EK::DeductionMismatch, "auto declaration without initializer", d.name);
        TypeResult it = expr_type(NodeRef{&t, init});
        if (!it) return it;
        return deduce_auto(ty, *it);
      }
      case NodeKind::RangeFor: {
        const auto* rd = t.get<RangeForData>(ref.id);
        if (!rd) break;
        TypeResult r = from_syntax(t, rd->spec, rd->decl, scope);
        if (!r || !deduce || !contains_auto(*r)) return r;
        RangeResult plan = range_plan(NodeRef{&t, rd->range});
        if (!plan) return TypeResult{std::nullopt, plan.error};
        return deduce_auto(*r, plan.plan->element);
      }
      case NodeKind::Typedef: {
        const auto* td = t.get<TypedefData>(ref.id);
        if (!td || index >= td->declarators.size()) break;
        return from_syntax(t, td->spec, td->declarators[index], scope);
      }
      case NodeKind::UsingAlias: {
        const auto* ua = t.get<UsingAliasData>(ref.id);
        if (!ua) break;
        return from_syntax(t, ua->type_spec, ua->type_decl, scope_at(ref));
      }
      case NodeKind::Function:
        return function_type(ref);
      default:
        break;
    }
    return TypeResult::fail(EK::UnsupportedExpression, "not a declaration");
  }

  TypeResult function_type(NodeRef ref) const {
    const SyntaxTree& t = *ref.tree;
    const auto* f = t.get<FunctionData>(ref.id);
    if (!f) return TypeResult::fail(EK::UnsupportedExpression, "not a function");
    const Scope* scope = scope_at(ref);
    if (f->is_ctor || f->is_dtor) {
      Declarator d = f->decl;
      return apply_ops(t, TypeRepr::fundamental("void"), d.ops, scope);
    }
    TypeResult base;
    if (f->arrow != kNoToken && f->trailing.valid()) {
      base = read_type(t, f->trailing, scope, f->trailing.begin);
    } else {
      base = read_specifier(t, f->spec.type, scope, f->spec.type.begin);
      if (base && f->spec.is_const) base = TypeResult::ok(add_const(*base));
    }
    if (!base) return base;
    return apply_ops(t, *base, f->decl.ops, scope);
  }

  TypeResult param_binding_type(const Binding& b) const {
    const SyntaxTree& t = *b.decl.tree;
    const Scope* scope = scope_at(b.decl);
    if (const auto* f = t.get<FunctionData>(b.decl.id)) {
      const auto& params = f->signature().params;
      if (b.index < params.size()) return param_type(t, params[b.index], scope);
    }
    if (const auto* l = t.get<LambdaData>(b.decl.id)) {
      if (l->generic) return TypeResult::fail(EK::UnsupportedExpression, "generic lambda parameter");
      if (b.index < l->params.size()) return param_type(t, l->params[b.index], scope);
    }
    return TypeResult::fail(EK::UnsupportedExpression, "parameter");
  }

  TypeResult binding_type(const Binding& b) const {
    switch (b.kind) {
      case BK::Variable:
      case BK::Member:
        return declared_type(b.decl, b.index, true);
      case BK::Parameter:
        return param_binding_type(b);
      case BK::Function:
        return function_type(b.decl);
      case BK::Enumerator: {
        const auto* ed = b.decl.tree->get<EnumData>(b.decl.id);
        if (!ed || ed->name.empty() || !b.scope) return TypeResult::ok(TypeRepr::fundamental("int"));
        if (const Binding* eb = find_local(b.scope, ed->name, nullptr, kNoToken, false))
          return type_for_binding(*eb, {}, false);
        return TypeResult::ok(TypeRepr::fundamental("int"));
      }
      case BK::Type:
      case BK::TemplateParam:
        break;
    }
    return TypeResult::fail(EK::UnsupportedExpression, "'" + b.name + "' does not name a value");
  }

  // ---- overloads -----------------------------------------------------------
  struct Candidate {
    const Binding* binding;
    Env env;
  };

  bool unify_template(const TypeRepr& p, const TypeRepr& a, const std::vector<std::string>& tparams,
                      Env& env) const {
    if (p.kind == TK::Named && p.sub.empty() && !p.has_template_args &&
        std::find(tparams.begin(), tparams.end(), p.name) != tparams.end()) {
      for (const auto& [k, v] : env)
        if (k == p.name) return true;
      env.emplace_back(p.name, a);
      return true;
    }
    if (p.kind == TK::Const) {
      if (a.kind == TK::Const) return unify_template(p.inner(), a.inner(), tparams, env);
      return unify_template(p.inner(), a, tparams, env);
    }
    if (p.kind != a.kind) return !mentions(p, tparams);
    if (p.kind == TK::Named) {
      if (strip_args(p.name) != strip_args(a.name) || p.args.size() != a.args.size()) return !mentions(p, tparams);
      for (size_t i = 0; i < p.args.size(); ++i)
        if (!unify_template(p.args[i], a.args[i], tparams, env)) return false;
      if (!p.sub.empty() && !a.sub.empty()) return unify_template(p.sub[0], a.sub[0], tparams, env);
      return true;
    }
    for (size_t i = 0; i < p.sub.size() && i < a.sub.size(); ++i)
      if (!unify_template(p.sub[i], a.sub[i], tparams, env)) return false;
    return true;
  }

  static bool mentions(const TypeRepr& t, const std::vector<std::string>& names) {
    if (t.kind == TK::Named && t.sub.empty() && !t.has_template_args &&
        std::find(names.begin(), names.end(), t.name) != names.end())
      return true;
    for (const auto& s : t.sub)
      if (mentions(s, names)) return true;
    for (const auto& a : t.args)
      if (mentions(a, names)) return true;
    return false;
  }

  int match_score(const TypeRepr& param, const std::optional<TypeRepr>& arg) const {
    if (!arg) return 0;
    TypeRepr p = canonical(strip_const(strip_reference(param)));
    TypeRepr a = canonical(strip_const(strip_reference(*arg)));
    if (p == a) return 3;
    if (p.kind == TK::Pointer && decay(a) == p) return 2;
    if (p.kind == TK::Pointer && a.kind == TK::Pointer && strip_const(p.inner()) == strip_const(a.inner())) return 2;
    if (p.is_arithmetic() && a.is_arithmetic()) return 1;
    return 0;
  }

  std::optional<TypeRepr> select(const std::vector<Candidate>& cands, const std::vector<std::optional<TypeRepr>>& args,
                                 bool object_const, const std::vector<TypeRepr>& explicit_targs = {}) const {
    std::optional<TypeRepr> best;
    int best_score = -1000;
    for (const Candidate& c : cands) {
      if (c.binding->kind != BK::Function) continue;
      const auto* f = c.binding->decl.tree->get<FunctionData>(c.binding->decl.id);
      if (!f) continue;
      TypeResult ft = function_type(c.binding->decl);
      if (!ft || ft->kind != TK::Function) continue;
      TypeRepr fn = substitute(*ft, c.env);
      const auto& params = f->signature().params;
      size_t required = 0;
      for (const auto& p : params)
        if (p.default_arg.empty()) ++required;
      if (args.size() > fn.args.size() && !fn.variadic) continue;
      if (args.size() < required) continue;
      if (f->is_template) {
        Env tenv = zip_env(f->tmpl.params, explicit_targs);
        bool ok = true;
        for (size_t i = 0; i < args.size() && i < fn.args.size(); ++i) {
          if (!args[i]) continue;
          TypeRepr p = fn.args[i];
          TypeRepr a = *args[i];
          if (p.kind == TK::LRef) {
            p = p.inner();
            a = strip_reference(a);
          } else {
            a = strip_const(decay(strip_reference(a)));
          }
          if (!unify_template(strip_const(p), strip_const(a), f->tmpl.params, tenv) &&
              !unify_template(p, a, f->tmpl.params, tenv)) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        fn = substitute(fn, tenv);
        if (mentions(fn.ret(), f->tmpl.params)) continue;
      }
      int score = 0;
      for (size_t i = 0; i < args.size() && i < fn.args.size(); ++i) score += match_score(fn.args[i], args[i]);
      if (object_const && !fn.const_method) score -= 100;
      if (!object_const && fn.const_method) score -= 1;
      if (score > best_score) {
        best_score = score;
        best = fn;
      }
    }
    return best;
  }

  std::vector<Candidate> overload_set(const Binding& b) const {
    std::vector<Candidate> out;
    auto add_from = [&](const Scope* s) {
      auto [lo, hi] = s->bindings.equal_range(b.name);
      for (auto it = lo; it != hi; ++it)
        if (it->second.kind == BK::Function) out.push_back({&it->second, {}});
    };
    if (b.scope && (b.scope->kind == Scope::Kind::Namespace || b.scope->kind == Scope::Kind::Global)) {
      auto it = namespaces.find(b.scope->qualified_name);
      if (it != namespaces.end() && b.scope->kind == Scope::Kind::Namespace) {
        for (const Scope* s : it->second) add_from(s);
        return out;
      }
    }
    if (b.scope) add_from(b.scope);
    return out;
  }

  // ---- expressions -----------------------------------------------------------
  TypeResult expr_type(NodeRef ref) const {
    auto key = std::make_pair(ref.tree, ref.id);
    if (auto it = expr_cache.find(key); it != expr_cache.end()) return it->second;
    if (depth > 200) return TypeResult::fail(EK::UnsupportedExpression, "expression too deep");
    ++depth;
    TypeResult r = compute_expr_type(ref);
    --depth;
    expr_cache.emplace(key, r);
    return r;
  }

  std::vector<std::optional<TypeRepr>> arg_types(const SyntaxTree& t, const std::vector<NodeId>& nodes,
                                                 size_t from) const {
    std::vector<std::optional<TypeRepr>> out;
    for (size_t i = from; i < nodes.size(); ++i) {
      TypeResult r = expr_type(NodeRef{&t, nodes[i]});
      out.push_back(r.type);
    }
    return out;
  }

  TypeResult literal_type(const SyntaxTree& t, const Node& n) const {
    std::string_view s = t.tok(n.tokens.begin);
    uint32_t tok = n.tokens.begin;
    if (s == "true" || s == "false") return TypeResult::ok(TypeRepr::fundamental("bool"));
    if (s == "nullptr") return TypeResult::fail(EK::UnsupportedExpression, "nullptr", tok);
    if (s.find('"') != std::string_view::npos) {
      int64_t len = 0;
      for (uint32_t i = n.tokens.begin; i < n.tokens.end; ++i)
        if (t.is_significant(i)) len += string_literal_length(t.tok(i));
      std::string elem = s.starts_with("L") ? "wchar_t" : "char";
      if (s.starts_with("u") || s.starts_with("U"))
        return TypeResult::fail(EK::UnsupportedExpression, "unicode string literal", tok);
      return TypeResult::ok(TypeRepr::array(add_const(TypeRepr::fundamental(elem)), len + 1));
    }
    if (s.find('\'') != std::string_view::npos && !std::isdigit(static_cast<unsigned char>(s[0])))
      return TypeResult::ok(TypeRepr::fundamental(s.starts_with("L") ? "wchar_t" : "char"));
    std::string lower;
    for (char c : s)
      if (c != '\'') lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    bool hex = lower.starts_with("0x");
    bool floating = !hex && (lower.find('.') != std::string::npos || lower.find('e') != std::string::npos);
    if (hex && lower.find('p') != std::string::npos) floating = true;
    if (floating) {
      if (lower.ends_with("f")) return TypeResult::ok(TypeRepr::fundamental("float"));
      if (lower.ends_with("l")) return TypeResult::ok(TypeRepr::fundamental("long double"));
      return TypeResult::ok(TypeRepr::fundamental("double"));
    }
    int longs = 0;
    bool uns = false;
    while (!lower.empty() && (lower.back() == 'u' || lower.back() == 'l')) {
      if (lower.back() == 'u') uns = true;
      else ++longs;
      lower.pop_back();
    }
    if (longs >= 2) return TypeResult::ok(TypeRepr::fundamental(uns ? "unsigned long long" : "long long"));
    if (longs == 1) return TypeResult::ok(TypeRepr::fundamental(uns ? "unsigned long" : "long"));
    return TypeResult::ok(TypeRepr::fundamental(uns ? "unsigned" : "int"));
  }

  std::vector<TypeRepr> explicit_template_args(const SyntaxTree& t, const Node& n, const Scope* scope) const {
    std::vector<TypeRepr> out;
    // find the last top-level `<` ... `>` group in the identifier
    uint32_t open = kNoToken;
    for (uint32_t i = n.tokens.begin; i < n.tokens.end; ++i)
      if (t.is_significant(i) && t.tok(i) == "<") {
        open = i;
        break;
      }
    if (open == kNoToken) return out;
    // split by top-level commas
    int depth_angle = 0;
    uint32_t arg_begin = t.next_significant(open);
    for (uint32_t i = arg_begin; i < n.tokens.end && i != kNoToken; i = t.next_significant(i)) {
      std::string_view s = t.tok(i);
      if (s == "<" || s == "(") ++depth_angle;
      if ((s == ">" || s == ">>" || s == ")") && depth_angle > 0) {
        depth_angle -= s == ">>" ? 2 : 1;
        if (depth_angle >= 0) continue;
      }
      if (depth_angle <= 0 && (s == "," || s == ">" || s == ">>")) {
        TypeResult r = read_type(t, {arg_begin, i}, scope, arg_begin);
        if (r) out.push_back(*r);
        arg_begin = t.next_significant(i);
        if (s != ",") break;
      }
    }
    return out;
  }

  bool identifier_is_function(NodeRef ref) const {
    const Node& n = ref.node();
    if (n.kind != NodeKind::Identifier) return false;
    const auto* e = ref.tree->get<ExprData>(ref.id);
    const Binding* b = lookup(std::string(strip_args(e->name)), ref);
    return b && b->kind == BK::Function;
  }

  const Binding* lookup(const std::string& name, NodeRef at) const {
    const Scope* s = scope_at(at);
    if (!s) return nullptr;
    return lookup_from(s, name, at.tree, at.node().tokens.begin);
  }

  std::optional<ClassRef> object_class(const TypeRepr& obj, bool* is_const) const {
    TypeRepr o = strip_reference(obj);
    *is_const = o.kind == TK::Const;
    return resolve_class(strip_const(o));
  }

  // Type of `*x` for an object of type `t`.
  TypeResult deref(const TypeRepr& t0, uint32_t tok) const {
    TypeRepr t = strip_reference(t0);
    TypeRepr c = canonical(t);
    TypeRepr cs = strip_const(c);
    if (cs.kind == TK::Pointer) return TypeResult::ok(TypeRepr::lref(cs.inner()));
    if (cs.kind == TK::Array) return TypeResult::ok(TypeRepr::lref(cs.inner()));
    bool oc = false;
    if (auto cls = object_class(t, &oc)) {
      auto hits = find_members(*cls, "operator*");
      std::vector<Candidate> cands;
      for (auto& h : hits) cands.push_back({h.binding, h.env});
      if (auto fn = select(cands, {}, oc)) return TypeResult::ok(fn->ret());
    }
    return TypeResult::fail(EK::UnsupportedExpression, "cannot dereference " + describe(t0), tok);
  }

  TypeResult call_on_value(const TypeRepr& callee, const std::vector<std::optional<TypeRepr>>& args, uint32_t tok) const {
    TypeRepr c = strip_const(canonical(strip_reference(callee)));
    if (c.kind == TK::Function) return TypeResult::ok(c.ret());
    if (c.kind == TK::Pointer && c.inner().kind == TK::Function) return TypeResult::ok(c.inner().ret());
    bool oc = false;
    if (auto cls = object_class(callee, &oc)) {
      auto hits = find_members(*cls, "operator()");
      std::vector<Candidate> cands;
      for (auto& h : hits) cands.push_back({h.binding, h.env});
      if (auto fn = select(cands, args, oc)) return TypeResult::ok(fn->ret());
    }
    return TypeResult::fail(EK::UnsupportedExpression, "cannot call " + describe(callee), tok);
  }

  TypeResult member_object(const SyntaxTree& t, NodeId member, TypeRepr* object) const {
    const Node& n = t.node(member);
    const auto* e = t.get<ExprData>(member);
    TypeResult o = expr_type(NodeRef{&t, n.children.front()});
    if (!o) return o;
    TypeRepr ot = *o;
    if (e->op_text == "->") {
      TypeRepr c = strip_const(canonical(strip_reference(ot)));
      if (c.kind == TK::Pointer) {
        ot = TypeRepr::lref(c.inner());
      } else {
        bool oc = false;
        auto cls = object_class(ot, &oc);
        if (!cls) return TypeResult::fail(EK::UnsupportedExpression, "'->' on " + describe(ot), e->op);
        std::vector<Candidate> cands;
        for (auto& h : find_members(*cls, "operator->")) cands.push_back({h.binding, h.env});
        auto fn = select(cands, {}, oc);
        if (!fn) return TypeResult::fail(EK::UnsupportedExpression, "'->' on " + describe(ot), e->op);
        TypeRepr p = strip_const(canonical(strip_reference(fn->ret())));
        if (p.kind != TK::Pointer) return TypeResult::fail(EK::UnsupportedExpression, "operator->", e->op);
        ot = TypeRepr::lref(p.inner());
      }
    }
    *object = ot;
    return TypeResult::ok(ot);
  }

  TypeResult compute_expr_type(NodeRef ref) const {
    const SyntaxTree& t = *ref.tree;
    const Node& n = ref.node();
    uint32_t tok = n.tokens.begin;
    const auto* e = t.get<ExprData>(ref.id);
    auto child = [&](size_t i) { return NodeRef{&t, n.children.at(i)}; };
    switch (n.kind) {
      case NodeKind::Literal:
        return literal_type(t, n);
      case NodeKind::Paren:
        if (n.children.empty()) break;
        return expr_type(child(0));
      case NodeKind::Identifier: {
        std::string name = strip_args(e->name);
        const Binding* b = lookup(name, ref);
        if (!b) return TypeResult::fail(EK::UnresolvedIdentifier, "'" + name + "' is not declared", tok);
        return binding_type(*b);
      }
      case NodeKind::This: {
        for (const Scope* s = scope_at(ref); s; s = s->parent)
          if (s->kind == Scope::Kind::Class) return TypeResult::ok(TypeRepr::pointer(self_type(s)));
        return TypeResult::fail(EK::UnsupportedExpression, "'this' outside a class", tok);
      }
      case NodeKind::Unary: {
        if (n.children.empty()) break;
        const std::string& op = e->op_text;
        TypeResult a = expr_type(child(0));
        if (op == "&" && !e->postfix) {
          if (!a) return a;
          TypeRepr inner = strip_reference(*a);
          if (inner.kind == TK::Function && child(0).node().kind == NodeKind::Identifier) {
            const auto* ce = t.get<ExprData>(n.children[0]);
            if (ce->name.find("::") != std::string::npos) {
              const Binding* b = lookup(strip_args(ce->name), child(0));
              if (b && b->scope && b->scope->kind == Scope::Kind::Class)
                return TypeResult::fail(EK::UnsupportedExpression, "pointer to member", tok);
            }
          }
          return TypeResult::ok(TypeRepr::pointer(inner));
        }
        if (!a) return a;
        if (op == "*") return deref(*a, tok);
        if (op == "!") return TypeResult::ok(TypeRepr::fundamental("bool"));
        if (op == "++" || op == "--") {
          TypeRepr base = strip_reference(*a);
          if (e->postfix) return TypeResult::ok(strip_const(base));
          return TypeResult::ok(TypeRepr::lref(base));
        }
        TypeRepr c = strip_const(canonical(strip_reference(*a)));
        if (c.is_arithmetic()) return TypeResult::ok(promote(c));
        return TypeResult::fail(EK::UnsupportedExpression, "unary " + op + " on " + describe(*a), tok);
      }
      case NodeKind::Binary: {
        const std::string& op = e->op_text;
        if (op == ",") return expr_type(child(1));
        TypeResult l = expr_type(child(0));
        if (op == "&&" || op == "||" || op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" ||
            op == ">=")
          return TypeResult::ok(TypeRepr::fundamental("bool"));
        if (!l) return l;
        if (op.size() >= 2 && op.back() == '=' && op != "==" && op != "!=" && op != "<=" && op != ">=")
          return TypeResult::ok(TypeRepr::lref(strip_reference(*l)));
        if (op == "=") return TypeResult::ok(TypeRepr::lref(strip_reference(*l)));
        TypeResult r = expr_type(child(1));
        if (!r) return r;
        TypeRepr lc = strip_const(canonical(strip_reference(*l)));
        TypeRepr rc = strip_const(canonical(strip_reference(*r)));
        if (lc.is_arithmetic() && rc.is_arithmetic()) {
          if (op == "<<" || op == ">>") return TypeResult::ok(promote(lc));
          return TypeResult::ok(usual_arithmetic(lc, rc));
        }
        TypeRepr ld = decay(lc), rd = decay(rc);
        if (ld.kind == TK::Pointer && rd.is_integral() && (op == "+" || op == "-")) return TypeResult::ok(ld);
        if (rd.kind == TK::Pointer && ld.is_integral() && op == "+") return TypeResult::ok(rd);
        if (ld.kind == TK::Pointer && rd.kind == TK::Pointer && op == "-")
          return TypeResult::ok(TypeRepr::fundamental("long"));
        // overloaded operators
        bool oc = false;
        std::vector<std::optional<TypeRepr>> margs{*r};
        if (auto cls = object_class(*l, &oc)) {
          std::vector<Candidate> cands;
          for (auto& h : find_members(*cls, "operator" + op)) cands.push_back({h.binding, h.env});
          if (auto fn = select(cands, margs, oc)) return TypeResult::ok(fn->ret());
        }
        if (const Binding* fb = lookup("operator" + op, ref)) {
          if (auto fn = select(overload_set(*fb), {*l, *r}, false)) return TypeResult::ok(fn->ret());
        }
        for (const TypeRepr* side : {&lc, &rc}) {
          auto ns = associated_namespace(*side);
          if (!ns) continue;
          if (const Binding* fb = find_in_namespace(*ns, "operator" + op))
            if (auto fn = select(overload_set(*fb), {*l, *r}, false)) return TypeResult::ok(fn->ret());
        }
        if (object_class(*l, &oc) && (op == "<<" || op == ">>"))
          return TypeResult::ok(TypeRepr::lref(strip_reference(*l)));
        return TypeResult::fail(EK::UnsupportedExpression,
                                "operator" + op + " on " + describe(*l) + " and " + describe(*r), tok);
      }
      case NodeKind::Conditional: {
        TypeResult a = expr_type(child(1));
        TypeResult b = expr_type(child(2));
        if (!a) return a;
        if (!b) return b;
        TypeRepr ac = canonical(strip_reference(*a)), bc = canonical(strip_reference(*b));
        if (ac == bc) {
          if (a->kind == TK::LRef && b->kind == TK::LRef) return a;
          return TypeResult::ok(strip_reference(*a));
        }
        TypeRepr as = strip_const(ac), bs = strip_const(bc);
        if (as.is_arithmetic() && bs.is_arithmetic()) return TypeResult::ok(usual_arithmetic(as, bs));
        if (decay(as) == decay(bs)) return TypeResult::ok(decay(as));
        return TypeResult::fail(EK::UnsupportedExpression, "mixed conditional operands", tok);
      }
      case NodeKind::Cast:
        return from_syntax(t, e->type_spec, e->type_decl, scope_at(ref));
      case NodeKind::Construct: {
        const Scope* s = scope_at(ref);
        if (e->type_spec.type.valid()) return from_syntax(t, e->type_spec, e->type_decl, s);
        return read_type(t, e->type, s, e->type.begin);
      }
      case NodeKind::New: {
        if (e->auto_tok != kNoToken) {
          if (n.children.empty()) return TypeResult::fail(EK::DeductionMismatch, "new auto without initializer", tok);
          TypeResult a = expr_type(child(0));
          if (!a) return a;
          return TypeResult::ok(TypeRepr::pointer(strip_const(decay(strip_reference(*a)))));
        }
        TypeResult ty = from_syntax(t, e->type_spec, e->type_decl, scope_at(ref));
        if (!ty) return ty;
        if (ty->kind == TK::Array) return TypeResult::ok(TypeRepr::pointer(ty->inner()));
        return TypeResult::ok(TypeRepr::pointer(*ty));
      }
      case NodeKind::SizeOf:
        if (e && (e->op_text == "sizeof" || e->op_text.empty()))
          return TypeResult::ok(TypeRepr::fundamental("unsigned long"));
        return TypeResult::fail(EK::UnsupportedExpression, e ? e->op_text : "operator", tok);
      case NodeKind::Throw:
      case NodeKind::Delete:
        return TypeResult::ok(TypeRepr::fundamental("void"));
      case NodeKind::Subscript: {
        TypeResult b = expr_type(child(0));
        if (!b) return b;
        TypeRepr c = strip_const(canonical(strip_reference(*b)));
        if (c.kind == TK::Array || c.kind == TK::Pointer) return TypeResult::ok(TypeRepr::lref(c.inner()));
        bool oc = false;
        if (auto cls = object_class(*b, &oc)) {
          std::vector<Candidate> cands;
          for (auto& h : find_members(*cls, "operator[]")) cands.push_back({h.binding, h.env});
          if (auto fn = select(cands, arg_types(t, n.children, 1), oc)) return TypeResult::ok(fn->ret());
        }
        return TypeResult::fail(EK::UnsupportedExpression, "subscript of " + describe(*b), tok);
      }
      case NodeKind::Member: {
        TypeRepr object;
        TypeResult o = member_object(t, ref.id, &object);
        if (!o) return o;
        bool oc = false;
        auto cls = object_class(object, &oc);
        std::string name = strip_args(e->name);
        if (!cls) return TypeResult::fail(EK::UnsupportedExpression, "member of " + describe(object), tok);
        auto hits = find_members(*cls, name);
        if (hits.empty()) return TypeResult::fail(EK::UnresolvedIdentifier, "no member '" + name + "'", e->name_tok);
        const Binding& b = *hits.front().binding;
        if (b.kind == BK::Function) {
          std::vector<Candidate> cands;
          for (auto& h : hits) cands.push_back({h.binding, h.env});
          if (auto fn = select(cands, {}, oc)) return TypeResult::ok(*fn);
          return TypeResult::fail(EK::UnsupportedExpression, "member function", tok);
        }
        TypeResult mt = binding_type(b);
        if (!mt) return mt;
        TypeRepr m = substitute(*mt, hits.front().env);
        if (m.kind != TK::LRef && oc) m = add_const(m);
        return TypeResult::ok(m);
      }
      case NodeKind::Call: {
        if (n.children.empty()) break;
        NodeRef callee = child(0);
        const Node& cn = callee.node();
        auto args = arg_types(t, n.children, 1);
        if (cn.kind == NodeKind::Identifier) {
          const auto* ce = t.get<ExprData>(callee.id);
          std::string name = strip_args(ce->name);
          const Binding* b = lookup(name, callee);
          if (!b) return TypeResult::fail(EK::UnresolvedIdentifier, "'" + name + "' is not declared", cn.tokens.begin);
          if (b->kind == BK::Function) {
            auto targs = explicit_template_args(t, cn, scope_at(callee));
            auto fn = select(overload_set(*b), args, false, targs);
            if (!fn) return TypeResult::fail(EK::UnsupportedExpression, "no viable overload of '" + name + "'", tok);
            return TypeResult::ok(fn->ret());
          }
          if (b->kind == BK::Type) {
            auto targs = explicit_template_args(t, cn, scope_at(callee));
            return type_for_binding(*b, targs, !targs.empty());
          }
          TypeResult v = binding_type(*b);
          if (!v) return v;
          return call_on_value(*v, args, tok);
        }
        if (cn.kind == NodeKind::Member) {
          TypeRepr object;
          TypeResult o = member_object(t, callee.id, &object);
          if (!o) return o;
          bool oc = false;
          auto cls = object_class(object, &oc);
          const auto* me = t.get<ExprData>(callee.id);
          if (!cls) return TypeResult::fail(EK::UnsupportedExpression, "call on " + describe(object), tok);
          auto hits = find_members(*cls, strip_args(me->name));
          std::vector<Candidate> cands;
          for (auto& h : hits) cands.push_back({h.binding, h.env});
          if (!hits.empty() && hits.front().binding->kind != BK::Function) {
            TypeResult mt = binding_type(*hits.front().binding);
            if (!mt) return mt;
            return call_on_value(substitute(*mt, hits.front().env), args, tok);
          }
          auto fn = select(cands, args, oc);
          if (!fn)
            return TypeResult::fail(EK::UnresolvedIdentifier, "no member function '" + me->name + "'", me->name_tok);
          return TypeResult::ok(fn->ret());
        }
        TypeResult v = expr_type(callee);
        if (!v) return v;
        return call_on_value(*v, args, tok);
      }
      case NodeKind::Lambda:
        return TypeResult::fail(EK::UnsupportedExpression, "lambda expression", tok);
      case NodeKind::InitList:
        return TypeResult::fail(EK::UnsupportedExpression, "initializer list", tok);
      default:
        break;
    }
    return TypeResult::fail(EK::UnsupportedExpression, std::string(to_string(n.kind)) + " expression", tok);
  }

  // Namespace enclosing the class of `t`, for associated-namespace lookup.
  std::optional<std::string> associated_namespace(const TypeRepr& t) const {
    bool oc = false;
    auto cls = object_class(t, &oc);
    if (!cls) return std::nullopt;
    const Scope* s = cls->scope;
    while (s && s->kind == Scope::Kind::Class) s = s->parent;
    if (!s || s->kind != Scope::Kind::Namespace) return std::nullopt;
    return s->qualified_name;
  }

  RangeResult range_plan(NodeRef range) const {
    RangeResult out;
    auto fail = [&](std::string msg) {
      out.error = {EK::NoRangeProtocol, std::move(msg), range.id == kNoNode ? kNoToken : range.node().tokens.begin};
      return out;
    };
    if (range.id == kNoNode) return fail("missing range");
    if (range.node().kind == NodeKind::InitList) return fail("braced range");
    TypeResult r = expr_type(range);
    if (!r) {
      out.error = r.error;
      return out;
    }
    TypeRepr b = strip_reference(*r);
    TypeRepr c = canonical(b);
    bool is_const = c.kind == TK::Const;
    TypeRepr cs = strip_const(c);
    if (cs.kind == TK::Array) {
      if (cs.extent < 0) return fail("array of unknown extent");
      TypeRepr elem = cs.inner();
      if (is_const) elem = add_const(elem);
      // keep the element spelling from the declared (non-canonical) type
      TypeRepr declared = strip_const(b);
      if (declared.kind == TK::Array) elem = is_const ? add_const(declared.inner()) : declared.inner();
      RangePlan p;
      p.kind = RangePlan::Kind::Array;
      p.iterator = TypeRepr::pointer(elem);
      p.element = TypeRepr::lref(elem);
      p.extent = cs.extent;
      out.plan = p;
      return out;
    }
    bool oc = false;
    if (auto cls = object_class(*r, &oc)) {
      auto begins = find_members(*cls, "begin");
      auto ends = find_members(*cls, "end");
      if (!begins.empty() && !ends.empty()) {
        std::vector<Candidate> cands;
        for (auto& h : begins) cands.push_back({h.binding, h.env});
        auto fn = select(cands, {}, oc);
        if (!fn) return fail("no usable begin()");
        TypeResult el = deref(fn->ret(), range.node().tokens.begin);
        if (!el) return fail("iterator cannot be dereferenced");
        RangePlan p;
        p.kind = RangePlan::Kind::MemberBeginEnd;
        p.iterator = strip_reference(fn->ret());
        p.element = *el;
        out.plan = p;
        return out;
      }
    }
    const Binding* fb = lookup("begin", range);
    if ((!fb || fb->kind != BK::Function) && associated_namespace(*r)) fb = find_in_namespace(*associated_namespace(*r), "begin");
    if (fb && fb->kind == BK::Function) {
      if (auto fn = select(overload_set(*fb), {*r}, false)) {
        TypeResult el = deref(fn->ret(), range.node().tokens.begin);
        if (el) {
          RangePlan p;
          p.kind = RangePlan::Kind::FreeBeginEnd;
          p.iterator = strip_reference(fn->ret());
          p.element = *el;
          out.plan = p;
          return out;
        }
      }
    }
    return fail("no begin/end for " + describe(*r));
  }
};

// ---- token-level type reader -------------------------------------------------

class SemanticModel::Impl::Reader {
 public:
  Reader(const Impl& im, const SyntaxTree& t, TokenSpan span, const Scope* scope, uint32_t tok)
      : im_(im), t_(t), scope_(scope), tok_(tok) {
    if (span.valid())
      for (uint32_t i = span.begin; i < span.end && i < t.tokens.size(); ++i)
        if (t.is_significant(i)) toks_.push_back(i);
  }

  bool done() const { return p_ >= toks_.size() && !half_; }
  SemaError error;

  std::optional<TypeRepr> type_id() {
    auto base = specifiers();
    if (!base) return std::nullopt;
    return abstract_declarator(*base);
  }

  std::optional<TypeRepr> specifiers() {
    bool is_const = false;
    std::vector<std::string_view> words;
    std::optional<TypeRepr> named;
    for (;;) {
      if (done()) break;
      std::string_view s = peek();
      if (s == "const") {
        is_const = true;
        ++p_;
      } else if (s == "volatile" || s == "static" || s == "extern" || s == "inline" || s == "register" ||
                 s == "mutable" || s == "virtual" || s == "explicit" || s == "friend" || s == "constexpr" ||
                 s == "typedef" || s == "public" || s == "private" || s == "protected") {
        ++p_;
      } else if (s == "auto" && words.empty() && !named) {
        words.push_back("auto");
        ++p_;
      } else if (is_fundamental_word(s) && !named) {
        words.push_back(s);
        ++p_;
      } else if ((s == "class" || s == "struct" || s == "union" || s == "enum") && !named && words.empty()) {
        ++p_;
        if (at("class") || at("struct")) ++p_;
        if (!at_name()) return fail(EK::UnsupportedExpression, "anonymous type");
        named = qualified_name();
        if (!named) return std::nullopt;
        skip_braces();
      } else if (s == "typename" && !named && words.empty()) {
        ++p_;
        named = qualified_name();
        if (!named) return std::nullopt;
      } else if (s == "decltype" && !named && words.empty()) {
        named = decltype_type();
        if (!named) return std::nullopt;
      } else if (at_name() && !named && words.empty()) {
        named = qualified_name();
        if (!named) return std::nullopt;
      } else {
        break;
      }
    }
    TypeRepr base;
    if (!words.empty()) base = make_fundamental(words);
    else if (named) base = *named;
    else return fail(EK::UnsupportedExpression, "expected a type");
    if (is_const) base = add_const(base);
    return base;
  }

 private:
  std::string_view peek(size_t k = 0) const {
    if (k == 0 && half_) return ">";
    size_t i = p_ + k;
    return i < toks_.size() ? t_.tok(toks_[i]) : std::string_view{};
  }
  bool at(std::string_view s, size_t k = 0) const { return peek(k) == s; }
  TokenKind kind_at(size_t k = 0) const {
    size_t i = p_ + k;
    return i < toks_.size() ? t_.token(toks_[i]).kind : TokenKind::Unknown;
  }
  bool at_name() const { return kind_at() == TokenKind::Identifier || (at("::") && kind_at(1) == TokenKind::Identifier); }
  uint32_t cur_tok() const { return p_ < toks_.size() ? toks_[p_] : tok_; }

  std::nullopt_t fail(EK k, std::string msg) {
    if (error.kind == EK::None) error = {k, std::move(msg), cur_tok()};
    return std::nullopt;
  }

  void skip_braces() {
    if (!at("{")) return;
    int depth = 0;
    while (!done()) {
      if (at("{")) ++depth;
      if (at("}")) --depth;
      ++p_;
      if (depth == 0) break;
    }
  }

  bool at_close() const { return at(">") || (!half_ && at(">>")); }
  void close_angle() {
    if (half_) {
      half_ = false;
      ++p_;
    } else if (at(">")) {
      ++p_;
    } else if (at(">>")) {
      half_ = true;
    }
  }

  // One template argument: a type-id or a constant.
  std::optional<TypeRepr> template_arg() {
    size_t start = p_;
    bool start_half = half_;
    SemaError saved = error;
    bool typeish = is_fundamental_word(peek()) || at("const") || at("volatile") || at("typename") ||
                   at("struct") || at("class") || at("auto");
    if (!typeish && at_name()) {
      // a name that resolves to a value is a non-type argument
      std::string first(peek(at("::") ? 1 : 0));
      const Binding* b = im_.lookup_from(scope_, first, &t_, tok_);
      typeish = !b || b->kind == BK::Type || b->kind == BK::TemplateParam || im_.namespaces.contains(first) ||
                im_.namespaces.contains(im_.directive_target(scope_, first));
      if (b && (b->kind == BK::Type || b->kind == BK::TemplateParam)) typeish = true;
      else if (b) typeish = false;
    }
    if (typeish) {
      auto t = type_id();
      if (t && (at(",") || at_close())) return t;
    }
    p_ = start;
    half_ = start_half;
    error = saved;
    // constant expression: collect tokens to the next top-level `,` or `>`
    std::string text;
    int depth = 0;
    while (!done()) {
      if (depth == 0 && (at(",") || at_close())) break;
      std::string_view s = peek();
      if (s == "(" || s == "[") ++depth;
      if (s == ")" || s == "]") --depth;
      if (!text.empty()) text += ' ';
      text += s;
      ++p_;
    }
    if (text.empty()) return fail(EK::UnsupportedExpression, "empty template argument");
    return TypeRepr::named(text);
  }

  std::optional<std::vector<TypeRepr>> template_args() {
    std::vector<TypeRepr> args;
    ++p_;  // `<`
    if (at_close()) {
      close_angle();
      return args;
    }
    for (;;) {
      auto a = template_arg();
      if (!a) return std::nullopt;
      args.push_back(*a);
      if (at(",")) {
        ++p_;
        continue;
      }
      if (at_close()) {
        close_angle();
        return args;
      }
      fail(EK::UnsupportedExpression, "malformed template arguments");
      return std::nullopt;
    }
  }

  std::optional<TypeRepr> qualified_name() {
    bool global = false;
    if (at("::")) {
      global = true;
      ++p_;
    }
    struct Comp {
      std::string name;
      std::vector<TypeRepr> args;
      bool has_args = false;
    };
    std::vector<Comp> comps;
    for (;;) {
      if (at("template")) ++p_;
      if (kind_at() != TokenKind::Identifier) return fail(EK::UnsupportedExpression, "expected a name");
      Comp c;
      c.name = std::string(peek());
      ++p_;
      if (at("<") && !half_) {
        auto args = template_args();
        if (!args) return std::nullopt;
        c.args = std::move(*args);
        c.has_args = true;
      }
      comps.push_back(std::move(c));
      if (!half_ && at("::") && (kind_at(1) == TokenKind::Identifier || at("template", 1))) {
        ++p_;
        continue;
      }
      break;
    }
    // resolve the leading components
    std::optional<TypeRepr> cur;
    std::string ns;
    bool in_ns = false;
    size_t i = 0;
    if (global) {
      in_ns = true;
    } else {
      const Binding* b = im_.lookup_from(scope_, comps[0].name, &t_, tok_);
      if (b && (b->kind == BK::Type || b->kind == BK::TemplateParam)) {
        TypeResult r = im_.type_for_binding(*b, comps[0].args, comps[0].has_args);
        if (!r) {
          error = r.error;
          return std::nullopt;
        }
        cur = *r;
        i = 1;
        if (is_alias_template(*b) && comps.size() > 1 && comps[1].name == "type" && !comps[1].has_args) i = 2;
      } else {
        std::string q = im_.directive_target(scope_, comps[0].name);
        if (comps.size() > 1 && im_.namespaces.contains(q)) {
          ns = q;
          in_ns = true;
          i = 1;
        }
      }
    }
    for (; i < comps.size(); ++i) {
      const Comp& c = comps[i];
      if (cur) {
        TypeRepr m = TypeRepr::member_type(*cur, c.name);
        m.args = c.args;
        m.has_template_args = c.has_args;
        cur = m;
        continue;
      }
      if (in_ns) {
        std::string q = ns.empty() ? c.name : ns + "::" + c.name;
        if (i + 1 < comps.size() && im_.namespaces.contains(q)) {
          ns = q;
          continue;
        }
        const Binding* b = im_.find_in_namespace(ns, c.name);
        if (!b) {
          auto it = im_.namespaces.find(ns);
          if (it != im_.namespaces.end())
            for (const Scope* s : it->second)
              for (const auto& dir : s->using_directives)
                if (!b) b = im_.find_in_namespace(im_.directive_target(s, dir), c.name);
        }
        if (b && b->kind == BK::Type) {
          TypeResult r = im_.type_for_binding(*b, c.args, c.has_args);
          if (!r) {
            error = r.error;
            return std::nullopt;
          }
          cur = *r;
          in_ns = false;
          if (is_alias_template(*b) && i + 1 < comps.size() && comps[i + 1].name == "type" && !comps[i + 1].has_args)
            ++i;
          continue;
        }
        // unknown name inside a known namespace: keep the spelling
        cur = TypeRepr::named(q, c.args, c.has_args);
        in_ns = false;
        continue;
      }
      // unresolved first component
      cur = TypeRepr::named((global ? "::" : "") + c.name, c.args, c.has_args);
    }
    if (!cur) return fail(EK::UnsupportedExpression, "namespace used as a type");
    return cur;
  }

  // `A<T>::type` names the alias template A itself once A has been
  // rewritten as a struct elsewhere.
  static bool is_alias_template(const Binding& b) {
    if (b.kind != BK::Type || b.decl.node().kind != NodeKind::UsingAlias) return false;
    const auto* ua = b.decl.tree->get<UsingAliasData>(b.decl.id);
    return ua && ua->is_template;
  }

  std::optional<TypeRepr> decltype_type() {
    uint32_t at_tok = cur_tok();
    ++p_;  // decltype
    if (!at("(")) return fail(EK::UnsupportedDecltypeOperand, "decltype");
    ++p_;
    std::vector<size_t> operand;
    int depth = 1;
    while (!done()) {
      if (at("(")) ++depth;
      if (at(")") && --depth == 0) break;
      operand.push_back(p_);
      ++p_;
    }
    if (!at(")")) return fail(EK::UnsupportedDecltypeOperand, "unterminated decltype");
    ++p_;
    // identifiers joined by arithmetic operators
    std::optional<TypeRepr> result;
    bool expect_name = true;
    for (size_t k : operand) {
      std::string_view s = t_.tok(toks_[k]);
      TokenKind kk = t_.token(toks_[k]).kind;
      if (expect_name) {
        if (kk != TokenKind::Identifier) {
          error = {EK::UnsupportedDecltypeOperand, "decltype operand is not an identifier", at_tok};
          return std::nullopt;
        }
        const Binding* b = im_.lookup_from(scope_, std::string(s), &t_, toks_[k]);
        if (!b) {
          error = {EK::UnresolvedIdentifier, "'" + std::string(s) + "' is not declared", toks_[k]};
          return std::nullopt;
        }
        TypeResult r = im_.binding_type(*b);
        if (!r) {
          error = r.error;
          return std::nullopt;
        }
        if (!result) {
          result = *r;
        } else {
          TypeRepr a = strip_const(im_.canonical(strip_reference(*result)));
          TypeRepr c = strip_const(im_.canonical(strip_reference(*r)));
          if (!a.is_arithmetic() || !c.is_arithmetic()) {
            error = {EK::UnsupportedDecltypeOperand, "decltype of a non-arithmetic expression", at_tok};
            return std::nullopt;
          }
          result = usual_arithmetic(a, c);
        }
        expect_name = false;
      } else {
        if (s != "+" && s != "-" && s != "*" && s != "/") {
          error = {EK::UnsupportedDecltypeOperand, "unsupported decltype operand", at_tok};
          return std::nullopt;
        }
        expect_name = true;
      }
    }
    if (!result || expect_name) {
      error = {EK::UnsupportedDecltypeOperand, "empty decltype operand", at_tok};
      return std::nullopt;
    }
    return result;
  }

  // ptr-operators, an optional parenthesized inner declarator, then suffixes.
  std::optional<TypeRepr> abstract_declarator(TypeRepr base) {
    struct Op {
      char kind = '*';  // '*', '&', '[', '('
      bool is_const = false;
      int64_t extent = -1;
      std::vector<TypeRepr> params;
      bool variadic = false;
    };
    std::function<std::optional<std::vector<Op>>()> parse_ops = [&]() -> std::optional<std::vector<Op>> {
      std::vector<Op> ptrs;
      while (!done() && (at("*") || at("&") || at("&&"))) {
        Op op;
        op.kind = at("*") ? '*' : '&';
        ++p_;
        while (at("const") || at("volatile")) {
          if (at("const")) op.is_const = true;
          ++p_;
        }
        ptrs.push_back(op);
      }
      std::vector<Op> inner;
      if (at("(") && (at("*", 1) || at("&", 1))) {
        ++p_;
        auto in = parse_ops();
        if (!in) return std::nullopt;
        if (!at(")")) return fail(EK::UnsupportedExpression, "expected ')'");
        ++p_;
        inner = std::move(*in);
      } else if (kind_at() == TokenKind::Identifier) {
        ++p_;  // a parameter or declarator name
      }
      std::vector<Op> suffixes;
      for (;;) {
        if (at("[")) {
          Op op;
          op.kind = '[';
          ++p_;
          std::string text;
          while (!done() && !at("]")) {
            text += std::string(peek());
            ++p_;
          }
          if (!at("]")) return fail(EK::UnsupportedExpression, "expected ']'");
          ++p_;
          if (!text.empty()) {
            try {
              op.extent = std::stoll(text, nullptr, 0);
            } catch (...) {
              op.extent = -1;
            }
          }
          suffixes.push_back(op);
          continue;
        }
        if (at("(")) {
          Op op;
          op.kind = '(';
          ++p_;
          if (at("void") && at(")", 1)) ++p_;
          while (!done() && !at(")")) {
            if (at("...")) {
              op.variadic = true;
              ++p_;
              continue;
            }
            auto pt = type_id();
            if (!pt) return std::nullopt;
            op.params.push_back(*pt);
            if (at("=")) {
              int depth = 0;
              while (!done() && !(depth == 0 && (at(",") || at(")")))) {
                if (at("(")) ++depth;
                if (at(")")) --depth;
                ++p_;
              }
            }
            if (at(",")) ++p_;
          }
          if (!at(")")) return fail(EK::UnsupportedExpression, "expected ')'");
          ++p_;
          while (at("const") || at("volatile")) {
            if (at("const")) op.is_const = true;
            ++p_;
          }
          suffixes.push_back(op);
          continue;
        }
        break;
      }
      std::vector<Op> ops = std::move(inner);
      for (auto& s : suffixes) ops.push_back(std::move(s));
      for (auto it = ptrs.rbegin(); it != ptrs.rend(); ++it) ops.push_back(*it);
      return ops;
    };
    auto ops = parse_ops();
    if (!ops) return std::nullopt;
    TypeRepr cur = std::move(base);
    for (auto it = ops->rbegin(); it != ops->rend(); ++it) {
      switch (it->kind) {
        case '*':
          cur = TypeRepr::pointer(cur);
          if (it->is_const) cur = add_const(cur);
          break;
        case '&':
          cur = TypeRepr::lref(cur);
          break;
        case '[':
          cur = TypeRepr::array(cur, it->extent);
          break;
        case '(': {
          TypeRepr fn = TypeRepr::function(cur, it->params, it->variadic);
          fn.const_method = it->is_const;
          cur = fn;
          break;
        }
      }
    }
    return cur;
  }

  const Impl& im_;
  const SyntaxTree& t_;
  const Scope* scope_;
  uint32_t tok_;
  std::vector<uint32_t> toks_;
  size_t p_ = 0;
  bool half_ = false;
};

TypeResult SemanticModel::Impl::read_type(const SyntaxTree& t, TokenSpan span, const Scope* scope,
                                          uint32_t tok) const {
  Reader r(*this, t, span, scope, tok);
  auto ty = r.type_id();
  if (!ty) {
    if (r.error.kind == EK::None) r.error = {EK::UnsupportedExpression, "unreadable type", tok};
    return TypeResult{std::nullopt, r.error};
  }
  return TypeResult::ok(*ty);
}

TypeResult SemanticModel::Impl::read_specifier(const SyntaxTree& t, TokenSpan span, const Scope* scope,
                                               uint32_t tok) const {
  if (span.empty()) return TypeResult::fail(EK::UnsupportedExpression, "missing type specifier", tok);
  Reader r(*this, t, span, scope, tok);
  auto ty = r.specifiers();
  if (!ty) {
    if (r.error.kind == EK::None) r.error = {EK::UnsupportedExpression, "unreadable type", tok};
    return TypeResult{std::nullopt, r.error};
  }
  return TypeResult::ok(*ty);
}

std::optional<int64_t> SemanticModel::Impl::eval_extent(const SyntaxTree& t, TokenSpan span, const Scope* scope) const {
  std::vector<uint32_t> toks;
  for (uint32_t i = span.begin; i < span.end; ++i)
    if (t.is_significant(i)) toks.push_back(i);
  size_t p = 0;
  std::function<std::optional<int64_t>()> expr;
  std::function<std::optional<int64_t>()> primary = [&]() -> std::optional<int64_t> {
    if (p >= toks.size()) return std::nullopt;
    std::string_view s = t.tok(toks[p]);
    if (s == "(") {
      ++p;
      auto v = expr();
      if (p < toks.size() && t.tok(toks[p]) == ")") ++p;
      return v;
    }
    const Token& tk = t.token(toks[p]);
    if (tk.kind == TokenKind::Literal && std::isdigit(static_cast<unsigned char>(s[0]))) {
      ++p;
      try {
        return std::stoll(std::string(s), nullptr, 0);
      } catch (...) {
        return std::nullopt;
      }
    }
    if (tk.kind == TokenKind::Identifier) {
      ++p;
      const Binding* b = lookup_from(scope, std::string(s), &t, toks[p - 1]);
      if (!b || b->kind == BK::Type) return std::nullopt;
      if (b->kind == BK::Enumerator) return static_cast<int64_t>(b->index);
      const auto* v = b->decl.tree->get<VariableData>(b->decl.id);
      if (!v || !v->spec.is_const || b->index >= v->declarators.size()) return std::nullopt;
      const Declarator& d = v->declarators[b->index];
      if (d.init_args.size() != 1) return std::nullopt;
      const Node& init = b->decl.tree->node(d.init_args.front());
      if (depth > 16) return std::nullopt;
      ++depth;
      auto val = eval_extent(*b->decl.tree, init.tokens, b->scope);
      --depth;
      return val;
    }
    return std::nullopt;
  };
  std::function<std::optional<int64_t>()> term = [&]() -> std::optional<int64_t> {
    auto v = primary();
    while (v && p < toks.size() && (t.tok(toks[p]) == "*" || t.tok(toks[p]) == "/")) {
      bool mul = t.tok(toks[p]) == "*";
      ++p;
      auto r = primary();
      if (!r || (!mul && *r == 0)) return std::nullopt;
      v = mul ? *v * *r : *v / *r;
    }
    return v;
  };
  expr = [&]() -> std::optional<int64_t> {
    auto v = term();
    while (v && p < toks.size() && (t.tok(toks[p]) == "+" || t.tok(toks[p]) == "-")) {
      bool add = t.tok(toks[p]) == "+";
      ++p;
      auto r = term();
      if (!r) return std::nullopt;
      v = add ? *v + *r : *v - *r;
    }
    return v;
  };
  auto v = expr();
  if (p != toks.size()) return std::nullopt;
  return v;
}

// ---- public interface ------------------------------------------------------------

SemanticModel::SemanticModel(const SyntaxTree& tree, std::vector<const SyntaxTree*> externals)
    : tree_(tree), impl_(std::make_unique<Impl>(*this)) {
  impl_->trees.push_back(&tree);
  for (const SyntaxTree* e : externals)
    if (e && e != &tree) impl_->trees.push_back(e);
  impl_->trees.push_back(&library_model_tree());
  // library first so unit declarations can refer to it
  for (auto it = impl_->trees.rbegin(); it != impl_->trees.rend(); ++it) impl_->build_tree(**it);
}

SemanticModel::~SemanticModel() = default;

const Scope& SemanticModel::scope_at(NodeRef at) const {
  const Scope* s = impl_->scope_at(at);
  if (!s) s = impl_->globals.at(&tree_);
  return *s;
}

const Binding* SemanticModel::lookup(std::string_view name, NodeRef at) const {
  return impl_->lookup(std::string(name), at);
}

TypeResult SemanticModel::type_of_expr(NodeId expr) const { return type_of_expr(NodeRef{&tree_, expr}); }

TypeResult SemanticModel::type_of_expr(NodeRef expr) const { return impl_->expr_type(expr); }

TypeResult SemanticModel::type_of_binding(const Binding& b) const { return impl_->binding_type(b); }

TypeResult SemanticModel::declared_type(NodeRef node, size_t index, bool deduce) const {
  return impl_->declared_type(node, index, deduce);
}

TypeResult SemanticModel::type_from_syntax(const SyntaxTree& tree, const DeclSpec& spec, const Declarator& decl,
                                           NodeId context) const {
  return impl_->from_syntax(tree, spec, decl, impl_->scope_at(NodeRef{&tree, context}));
}

TypeResult SemanticModel::type_from_tokens(const SyntaxTree& tree, TokenSpan span, NodeId context) const {
  return impl_->read_type(tree, span, impl_->scope_at(NodeRef{&tree, context}), span.begin);
}

TypeResult SemanticModel::deduce_trailing_return(NodeId function) const {
  const auto* f = tree_.get<FunctionData>(function);
  if (!f || !f->trailing.valid()) return TypeResult::fail(SemaError::Kind::UnsupportedExpression, "no trailing return");
  if (in_template(function))
    return TypeResult::fail(SemaError::Kind::UnsupportedExpression, "trailing return in a template", f->arrow);
  return impl_->read_type(tree_, f->trailing, impl_->scope_at(NodeRef{&tree_, function}), f->trailing.begin);
}

RangeResult SemanticModel::range_element_type(NodeId range_expr) const {
  return impl_->range_plan(NodeRef{&tree_, range_expr});
}

TypeResult SemanticModel::function_type(NodeRef fn) const { return impl_->function_type(fn); }

TypeRepr SemanticModel::canonical(const TypeRepr& t) const { return impl_->canonical(t); }

bool SemanticModel::in_template(NodeId id) const {
  for (NodeId cur = id; cur != kNoNode; cur = tree_.node(cur).parent) {
    if (const auto* f = tree_.get<FunctionData>(cur); f && f->is_template) return true;
    if (const auto* c = tree_.get<ClassData>(cur); c && c->is_template) return true;
    if (const auto* v = tree_.get<VariableData>(cur); v && v->is_template) return true;
    if (const auto* a = tree_.get<UsingAliasData>(cur); a && a->is_template) return true;
  }
  return false;
}

}  // namespace retrofit
