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

#include <cstdint>
#include <string>
#include <vector>

namespace retrofit {

/// Structural type. Child types live in `sub`:
///   Pointer/LRef/Const/Array: sub[0] is the wrapped type;
///   Function: sub[0] is the return type, `args` the parameters;
///   Named: `args` are template arguments, sub[0] (optional) the enclosing
///   type for a member type such as `std::vector<int>::iterator`.
/// Non-type template arguments are Named with their spelling as the name.
struct TypeRepr {
  enum class Kind : uint8_t { Fundamental, Named, Pointer, LRef, Function, Array, Const };

  Kind kind = Kind::Fundamental;
  std::string name;
  std::vector<TypeRepr> args;
  std::vector<TypeRepr> sub;
  int64_t extent = -1;  // Array; -1 when unknown
  bool has_template_args = false;  // Named: `X<>` vs `X`
  bool variadic = false;           // Function: trailing `...`
  bool const_method = false;       // Function: member `const`

  static TypeRepr fundamental(std::string name);
  static TypeRepr named(std::string name, std::vector<TypeRepr> args = {}, bool with_args = false);
  static TypeRepr member_type(TypeRepr owner, std::string name);
  static TypeRepr pointer(TypeRepr pointee);
  static TypeRepr lref(TypeRepr referent);
  static TypeRepr constant(TypeRepr inner);
  static TypeRepr array(TypeRepr element, int64_t extent);
  static TypeRepr function(TypeRepr ret, std::vector<TypeRepr> params, bool variadic = false);

  bool is(Kind k) const { return kind == k; }
  bool is_void() const { return kind == Kind::Fundamental && name == "void"; }
  bool is_const() const { return kind == Kind::Const; }
  bool is_reference() const { return kind == Kind::LRef; }
  bool is_pointer() const { return kind == Kind::Pointer; }
  bool is_arithmetic() const;
  bool is_integral() const;

  const TypeRepr& inner() const { return sub.front(); }
  const TypeRepr& ret() const { return sub.front(); }

  bool operator==(const TypeRepr&) const = default;
};

/// Removes one outer reference, if any.
TypeRepr strip_reference(const TypeRepr& t);
/// Removes top-level const (after an optional reference is kept intact).
TypeRepr strip_const(const TypeRepr& t);
/// Array-to-pointer and function-to-pointer conversion.
TypeRepr decay(const TypeRepr& t);
/// Adds const, collapsing duplicates; const on a reference is dropped.
TypeRepr add_const(const TypeRepr& t);

/// Declaration text for `t` with the given declarator name, e.g.
/// `int (*fp)(int)`. An empty name yields a type-id such as `int *`.
std::string render(const TypeRepr& t, const std::string& name = "");

struct RenderedParts {
  std::string base;        // `const int`, `std::vector<int>`
  std::string declarator;  // `*xp`, `(*fp)(int)`, `&y`
};

/// Splits render(t, name) into the shared specifier and the per-declarator
/// part, so one specifier can precede several declarators.
RenderedParts render_parts(const TypeRepr& t, const std::string& name);

/// Human-readable dump for diagnostics and tests, e.g. pointer(int).
std::string describe(const TypeRepr& t);

/// Replaces Named types matching a key of `params` (no enclosing type, no
/// args) by the mapped type.
TypeRepr substitute(const TypeRepr& t, const std::vector<std::pair<std::string, TypeRepr>>& params);

}  // namespace retrofit
