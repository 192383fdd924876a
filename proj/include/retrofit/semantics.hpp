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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "retrofit/syntax_tree.hpp"
#include "retrofit/types.hpp"

namespace retrofit {

struct SemaError {
  enum class Kind : uint8_t {
    None,
    UnresolvedIdentifier,
    UnsupportedExpression,
    DeductionMismatch,
    UnsupportedDecltypeOperand,
    NoRangeProtocol,
  };
  Kind kind = Kind::None;
  std::string message;
  uint32_t token = kNoToken;
};

std::string_view to_string(SemaError::Kind kind);

/// A type or the reason it could not be determined.
struct TypeResult {
  std::optional<TypeRepr> type;
  SemaError error;

  static TypeResult ok(TypeRepr t) { return {std::move(t), {}}; }
  static TypeResult fail(SemaError::Kind k, std::string msg, uint32_t tok = kNoToken) {
    return {std::nullopt, {k, std::move(msg), tok}};
  }
  explicit operator bool() const { return type.has_value(); }
  const TypeRepr& operator*() const { return *type; }
  const TypeRepr* operator->() const { return &*type; }
};

struct NodeRef {
  const SyntaxTree* tree = nullptr;
  NodeId id = kNoNode;

  bool valid() const { return tree != nullptr && id != kNoNode; }
  const Node& node() const { return tree->node(id); }
  bool operator==(const NodeRef&) const = default;
};

struct Scope;

struct Binding {
  enum class Kind : uint8_t { Variable, Parameter, Member, Function, Type, Enumerator, TemplateParam };
  Kind kind = Kind::Variable;
  std::string name;
  NodeRef decl;
  size_t index = 0;            // declarator or parameter index
  uint32_t visible_from = 0;   // first token where the name is in scope
  bool is_local = false;       // declared inside a function or lambda body
  NodeRef lambda_owner;        // innermost enclosing lambda of the declaration
  const Scope* scope = nullptr;
};

/// One lexical scope; lookup walks `parent` outwards.
struct Scope {
  enum class Kind : uint8_t { Global, Namespace, Class, Function, Block };
  Kind kind = Kind::Block;
  const Scope* parent = nullptr;
  NodeRef owner;
  std::string qualified_name;  // namespaces and classes
  std::multimap<std::string, Binding, std::less<>> bindings;
  std::vector<std::string> using_directives;    // `using namespace N;`
  std::vector<std::string> using_declarations;  // `using N::x;`
};

/// Declarator shape of an `auto` declaration, the placeholder written as
/// Fundamental "auto" inside `pattern`.
TypeResult deduce_auto(const TypeRepr& pattern, const TypeRepr& init_type);

/// Iteration strategy for a range-based for statement.
struct RangePlan {
  enum class Kind : uint8_t { Array, MemberBeginEnd, FreeBeginEnd };
  Kind kind = Kind::Array;
  TypeRepr iterator;  // pointer(element) for arrays
  TypeRepr element;   // type of `*__begin`, usually a reference
  int64_t extent = -1;
};

struct RangeResult {
  std::optional<RangePlan> plan;
  SemaError error;
  explicit operator bool() const { return plan.has_value(); }
};

/// Scopes and types for one translation unit. `externals` are trees whose
/// global declarations are visible to the unit (headers it includes); the
/// library model is always visible.
class SemanticModel {
 public:
  explicit SemanticModel(const SyntaxTree& tree, std::vector<const SyntaxTree*> externals = {});
  ~SemanticModel();
  SemanticModel(const SemanticModel&) = delete;
  SemanticModel& operator=(const SemanticModel&) = delete;

  const SyntaxTree& tree() const { return tree_; }

  /// Innermost scope enclosing `at`.
  const Scope& scope_at(NodeRef at) const;
  const Scope& scope_at(NodeId at) const { return scope_at(NodeRef{&tree_, at}); }

  /// Innermost binding of `name` visible at `at`.
  const Binding* lookup(std::string_view name, NodeRef at) const;
  const Binding* lookup(std::string_view name, NodeId at) const { return lookup(name, NodeRef{&tree_, at}); }

  TypeResult type_of_expr(NodeId expr) const;
  TypeResult type_of_expr(NodeRef expr) const;

  /// Declared type of a binding; `auto` is deduced from the initializer.
  TypeResult type_of_binding(const Binding& b) const;

  /// Type of the `index`-th declarator of a Variable/Typedef node, or of the
  /// loop variable when `node` is a RangeFor. `auto` is left as written
  /// when `deduce` is false.
  TypeResult declared_type(NodeRef node, size_t index, bool deduce = true) const;

  /// Type spelled by a specifier + declarator at `context`.
  TypeResult type_from_syntax(const SyntaxTree& tree, const DeclSpec& spec, const Declarator& decl,
                              NodeId context) const;

  /// Type spelled by the significant tokens of `span` (a type-id).
  TypeResult type_from_tokens(const SyntaxTree& tree, TokenSpan span, NodeId context) const;

  /// Return type of `auto f(...) -> T` or `-> decltype(param)`.
  TypeResult deduce_trailing_return(NodeId function) const;

  RangeResult range_element_type(NodeId range_expr) const;

  /// Function type of a Function node.
  TypeResult function_type(NodeRef fn) const;

  /// Resolves typedefs one level at a time until a non-typedef is reached.
  TypeRepr canonical(const TypeRepr& t) const;

  /// Whether the node is inside a template declaration.
  bool in_template(NodeId id) const;

  struct Impl;

 private:
  const SyntaxTree& tree_;
  std::unique_ptr<Impl> impl_;
};

/// The library declarations the model knows about, as parseable C++.
std::string_view library_model_source();

/// Cached parse of library_model_source().
const SyntaxTree& library_model_tree();

}  // namespace retrofit
