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

#include "retrofit/types.hpp"

#include <unordered_set>

namespace retrofit {

using Kind = TypeRepr::Kind;

TypeRepr TypeRepr::fundamental(std::string name) {
  TypeRepr t;
  t.kind = Kind::Fundamental;
  t.name = std::move(name);
  return t;
}

TypeRepr TypeRepr::named(std::string name, std::vector<TypeRepr> args, bool with_args) {
  TypeRepr t;
  t.kind = Kind::Named;
  t.name = std::move(name);
  t.has_template_args = with_args || !args.empty();
  t.args = std::move(args);
  return t;
}

TypeRepr TypeRepr::member_type(TypeRepr owner, std::string name) {
  TypeRepr t = named(std::move(name));
  t.sub.push_back(std::move(owner));
  return t;
}

TypeRepr TypeRepr::pointer(TypeRepr pointee) {
  TypeRepr t;
  t.kind = Kind::Pointer;
  t.sub.push_back(std::move(pointee));
  return t;
}

TypeRepr TypeRepr::lref(TypeRepr referent) {
  if (referent.kind == Kind::LRef) return referent;
  TypeRepr t;
  t.kind = Kind::LRef;
  t.sub.push_back(std::move(referent));
  return t;
}

TypeRepr TypeRepr::constant(TypeRepr inner) { return add_const(inner); }

TypeRepr TypeRepr::array(TypeRepr element, int64_t extent) {
  TypeRepr t;
  t.kind = Kind::Array;
  t.extent = extent;
  t.sub.push_back(std::move(element));
  return t;
}

TypeRepr TypeRepr::function(TypeRepr ret, std::vector<TypeRepr> params, bool variadic) {
  TypeRepr t;
  t.kind = Kind::Function;
  t.sub.push_back(std::move(ret));
  t.args = std::move(params);
  t.variadic = variadic;
  return t;
}

namespace {

const std::unordered_set<std::string> kIntegral = {
    "bool", "char", "signed char", "unsigned char", "wchar_t", "short", "unsigned short", "int",
    "unsigned", "unsigned int", "long", "unsigned long", "long long", "unsigned long long"};

}  // namespace

bool TypeRepr::is_integral() const { return kind == Kind::Fundamental && kIntegral.contains(name); }

bool TypeRepr::is_arithmetic() const {
  return is_integral() || (kind == Kind::Fundamental && (name == "float" || name == "double" || name == "long double"));
}

TypeRepr strip_reference(const TypeRepr& t) { return t.kind == Kind::LRef ? t.inner() : t; }

TypeRepr strip_const(const TypeRepr& t) { return t.kind == Kind::Const ? t.inner() : t; }

TypeRepr decay(const TypeRepr& t) {
  if (t.kind == Kind::Array) return TypeRepr::pointer(t.inner());
  if (t.kind == Kind::Function) return TypeRepr::pointer(t);
  return t;
}

TypeRepr add_const(const TypeRepr& t) {
  if (t.kind == Kind::Const || t.kind == Kind::LRef || t.kind == Kind::Function) return t;
  if (t.kind == Kind::Array) return TypeRepr::array(add_const(t.inner()), t.extent);
  TypeRepr c;
  c.kind = Kind::Const;
  c.sub.push_back(t);
  return c;
}

namespace {

std::string spell_named(const TypeRepr& t) {
  std::string out;
  if (!t.sub.empty()) out = render(t.sub.front()) + "::";
  out += t.name;
  if (t.has_template_args) {
    out += '<';
    for (size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ", ";
      out += render(t.args[i]);
    }
    if (!out.empty() && out.back() == '>') out += ' ';
    out += '>';
  }
  return out;
}

std::string join_decl(const std::string& base, const std::string& decl) {
  if (decl.empty()) return base;
  return base + " " + decl;
}

// `inner` is the declarator built so far, innermost (the name) first.
RenderedParts render_rec(const TypeRepr& t, const std::string& inner) {
  switch (t.kind) {
    case Kind::Fundamental:
      return {t.name, inner};
    case Kind::Named:
      return {spell_named(t), inner};
    case Kind::Const: {
      const TypeRepr& x = t.inner();
      if (x.kind == Kind::Pointer) return render_rec(x.inner(), "* const" + (inner.empty() ? "" : " " + inner));
      RenderedParts p = render_rec(x, inner);
      p.base = "const " + p.base;
      return p;
    }
    case Kind::Pointer:
    case Kind::LRef: {
      const TypeRepr& x = t.inner();
      std::string s = (t.kind == Kind::Pointer ? "*" : "&") + inner;
      if (x.kind == Kind::Function || x.kind == Kind::Array) s = "(" + s + ")";
      return render_rec(x, s);
    }
    case Kind::Array:
      return render_rec(t.inner(), inner + "[" + (t.extent >= 0 ? std::to_string(t.extent) : "") + "]");
    case Kind::Function: {
      std::string s = inner + "(";
      for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ", ";
        s += render(t.args[i]);
      }
      if (t.variadic) s += t.args.empty() ? "..." : ", ...";
      s += ")";
      if (t.const_method) s += " const";
      return render_rec(t.ret(), s);
    }
  }
  return {"?", inner};
}

}  // namespace

RenderedParts render_parts(const TypeRepr& t, const std::string& name) { return render_rec(t, name); }

std::string render(const TypeRepr& t, const std::string& name) {
  RenderedParts p = render_rec(t, name);
  return join_decl(p.base, p.declarator);
}

std::string describe(const TypeRepr& t) {
  switch (t.kind) {
    case Kind::Fundamental: return t.name;
    case Kind::Named: return spell_named(t);
    case Kind::Const: return "const(" + describe(t.inner()) + ")";
    case Kind::Pointer: return "pointer(" + describe(t.inner()) + ")";
    case Kind::LRef: return "lref(" + describe(t.inner()) + ")";
    case Kind::Array: return "array(" + describe(t.inner()) + ", " + std::to_string(t.extent) + ")";
    case Kind::Function: {
      std::string s = "function([";
      for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ", ";
        s += describe(t.args[i]);
      }
      return s + "], " + describe(t.ret()) + ")";
    }
  }
  return "?";
}

TypeRepr substitute(const TypeRepr& t, const std::vector<std::pair<std::string, TypeRepr>>& params) {
  if (params.empty()) return t;
  if (t.kind == Kind::Named && t.sub.empty() && !t.has_template_args) {
    for (const auto& [name, repl] : params)
      if (name == t.name) return repl;
  }
  TypeRepr out = t;
  for (auto& a : out.args) a = substitute(a, params);
  for (auto& s : out.sub) s = substitute(s, params);
  // keep the structural invariants after substitution
  if (out.kind == Kind::Const) return add_const(out.inner());
  if (out.kind == Kind::LRef && out.inner().kind == Kind::LRef) return out.inner();
  return out;
}

}  // namespace retrofit
