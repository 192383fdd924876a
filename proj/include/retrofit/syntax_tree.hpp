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
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "retrofit/source.hpp"

namespace retrofit {

using NodeId = uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<uint32_t>::max();
inline constexpr uint32_t kNoToken = std::numeric_limits<uint32_t>::max();

/// Half-open range of indices into SyntaxTree::tokens.
struct TokenSpan {
  uint32_t begin = kNoToken;
  uint32_t end = kNoToken;

  bool valid() const { return begin != kNoToken; }
  bool empty() const { return !valid() || begin >= end; }
  bool contains(uint32_t tok) const { return valid() && tok >= begin && tok < end; }
  bool operator==(const TokenSpan&) const = default;
};

enum class NodeKind : uint8_t {
  TranslationUnit,
  // declarations
  Namespace,
  Class,
  Function,
  Variable,
  Typedef,
  UsingAlias,
  Using,
  AccessSpec,
  Enum,
  Directive,
  Opaque,
  // statements
  Compound,
  DeclStmt,
  ExprStmt,
  For,
  RangeFor,
  If,
  While,
  Do,
  Switch,
  Label,
  Jump,
  Return,
  Try,
  Null,
  // expressions
  Literal,
  Identifier,
  Call,
  Member,
  Subscript,
  Unary,
  Binary,
  Conditional,
  New,
  Delete,
  Lambda,
  Paren,
  Cast,
  Construct,
  InitList,
  This,
  SizeOf,
  Throw,
};

std::string_view to_string(NodeKind kind);
bool is_expression(NodeKind kind);
bool is_statement(NodeKind kind);

struct Param;

struct DeclOp {
  enum class Kind : uint8_t { Pointer, LRef, RRef, Array, Function };
  Kind kind = Kind::Pointer;
  uint32_t tok = kNoToken;  // `*`, `&`, `[` or `(`
  bool is_const = false;    // `* const`; for Function: trailing `const`
  TokenSpan extent;         // Array: tokens between the brackets
  std::vector<Param> params;
  bool variadic = false;
  uint32_t close = kNoToken;  // `]` or `)`
};

struct Declarator {
  TokenSpan span;  // declarator proper, initializer excluded
  uint32_t name = kNoToken;
  std::string name_text;  // as written, e.g. "A::A", "operator()"
  std::vector<DeclOp> ops;  // from the name outward

  enum class Init : uint8_t { None, Assign, Brace, Paren };
  Init init_kind = Init::None;
  TokenSpan init;  // `= x` (with the `=`), `{...}` or `(...)`
  std::vector<NodeId> init_args;  // one for Assign, elements for the others
  TokenSpan bitfield;  // `: width`

  bool is_abstract() const { return name == kNoToken; }
};

struct Param {
  TokenSpan span;
  TokenSpan spec;
  Declarator decl;
  TokenSpan default_arg;
};

struct DeclSpec {
  TokenSpan span;
  TokenSpan type;  // type-specifier tokens only
  uint32_t auto_tok = kNoToken;
  uint32_t const_tok = kNoToken;
  bool is_const = false;
  bool is_static = false;
  bool is_extern = false;
  bool is_typedef = false;
  bool is_virtual = false;
  bool is_friend = false;
  bool is_explicit = false;
  bool is_inline = false;
  bool is_mutable = false;
  NodeId defined_class = kNoNode;  // `struct X {...} x;`
};

struct TemplateHeader {
  TokenSpan span;
  std::vector<std::string> params;
};

struct BaseSpec {
  TokenSpan span;
  std::string name;  // as written, e.g. "std::exception", "B<T>"
};

struct ClassData {
  enum class Key : uint8_t { Class, Struct, Union };
  Key key = Key::Class;
  uint32_t key_tok = kNoToken;
  uint32_t name_tok = kNoToken;
  std::string name;
  uint32_t final_tok = kNoToken;
  uint32_t base_colon = kNoToken;
  std::vector<BaseSpec> bases;
  uint32_t lbrace = kNoToken;
  uint32_t rbrace = kNoToken;  // kNoToken for a forward declaration
  bool is_template = false;
  TemplateHeader tmpl;
};

struct CtorInit {
  TokenSpan span;
  std::string name;
  uint32_t name_tok = kNoToken;
  TokenSpan args;  // including the enclosing parens or braces
  std::vector<NodeId> arg_exprs;
};

struct FunctionData {
  DeclSpec spec;
  Declarator decl;  // ops.front() is the Function op
  std::string name;        // unqualified
  std::string qualifier;   // "A" for "A::f"
  std::vector<uint32_t> virt_specifiers;  // `final` / `override` tokens
  uint32_t arrow = kNoToken;
  TokenSpan trailing;  // type after `->`
  uint32_t init_colon = kNoToken;
  std::vector<CtorInit> inits;
  NodeId body = kNoNode;

  enum class Definition : uint8_t { None, Body, Default, Delete, Pure };
  Definition definition = Definition::None;
  bool is_ctor = false;
  bool is_dtor = false;
  bool is_member = false;  // declared inside a class body
  bool is_template = false;
  TemplateHeader tmpl;

  const DeclOp& signature() const { return decl.ops.front(); }
};

struct VariableData {
  DeclSpec spec;
  std::vector<Declarator> declarators;
  bool is_member = false;
  bool is_template = false;
};

struct TypedefData {
  DeclSpec spec;
  std::vector<Declarator> declarators;
};

struct UsingAliasData {
  uint32_t using_tok = kNoToken;
  uint32_t name_tok = kNoToken;
  std::string name;
  uint32_t eq_tok = kNoToken;
  TokenSpan type;
  DeclSpec type_spec;
  Declarator type_decl;
  uint32_t semi_tok = kNoToken;
  bool is_template = false;
  TemplateHeader tmpl;
};

struct UsingData {
  bool is_directive = false;  // `using namespace N;`
  std::string name;
  std::string last;  // final name component
};

struct NamespaceData {
  std::string name;
  uint32_t lbrace = kNoToken;
  uint32_t rbrace = kNoToken;
};

struct EnumData {
  std::string name;
  std::vector<std::string> enumerators;
};

struct DirectiveData {
  std::string name;
  std::string argument;
  std::string include;  // header name for #include
  bool angled = false;
};

struct OpaqueData {
  bool recovered = false;  // produced by error recovery rather than by design
};

struct StmtData {
  uint32_t keyword = kNoToken;
  uint32_t lparen = kNoToken;
  uint32_t rparen = kNoToken;
  uint32_t semi = kNoToken;
  uint32_t lbrace = kNoToken;  // Compound
  uint32_t rbrace = kNoToken;
};

struct RangeForData {
  uint32_t for_tok = kNoToken;
  uint32_t lparen = kNoToken;
  uint32_t colon = kNoToken;
  uint32_t rparen = kNoToken;
  DeclSpec spec;
  Declarator decl;
  NodeId range = kNoNode;
  NodeId body = kNoNode;
};

struct Capture {
  uint32_t tok = kNoToken;
  std::string name;
  bool by_ref = false;
  bool is_this = false;
  bool has_init = false;
};

struct LambdaData {
  uint32_t lbracket = kNoToken;
  uint32_t rbracket = kNoToken;
  enum class Default : uint8_t { None, Copy, Ref };
  Default capture_default = Default::None;
  std::vector<Capture> captures;
  uint32_t lparen = kNoToken;
  uint32_t rparen = kNoToken;
  std::vector<Param> params;
  bool is_mutable = false;
  bool generic = false;
  uint32_t arrow = kNoToken;
  TokenSpan ret;
  NodeId body = kNoNode;
};

struct ExprData {
  uint32_t op = kNoToken;  // operator token, or `.` / `->` for Member
  std::string op_text;
  bool postfix = false;
  std::string name;           // Identifier: qualified name; Member: member name
  uint32_t name_tok = kNoToken;
  TokenSpan template_args;    // `<...>` following an identifier
  TokenSpan type;             // Cast / Construct / New / SizeOf target type
  DeclSpec type_spec;
  Declarator type_decl;
  std::string cast_kind;      // "static_cast", ..., "c-style"
  uint32_t auto_tok = kNoToken;  // `new auto(x)`
};

using NodePayload = std::variant<std::monostate, NamespaceData, ClassData, FunctionData,
                                 VariableData, TypedefData, UsingAliasData, UsingData, EnumData,
                                 DirectiveData, OpaqueData, StmtData, RangeForData, LambdaData,
                                 ExprData>;

struct Node {
  NodeKind kind = NodeKind::Opaque;
  TokenSpan tokens;
  NodeId parent = kNoNode;
  std::vector<NodeId> children;
  NodePayload data;
};

/// Names the parser should treat as types or templates in addition to the
/// ones declared in the unit itself.
struct ParseContext {
  std::set<std::string, std::less<>> types;
  std::set<std::string, std::less<>> templates;
};

class SyntaxTree {
 public:
  SourceText source;
  std::vector<Token> tokens;
  std::vector<uint32_t> significant;  // indices of tokens the grammar sees
  std::vector<Node> nodes;
  NodeId root = kNoNode;
  std::vector<Diagnostic> diagnostics;
  std::vector<TokenSpan> dead_regions;  // inactive `#if 0` style branches
  bool untransformable = false;
  std::set<std::string, std::less<>> declared_types;
  std::set<std::string, std::less<>> declared_templates;

  const Node& node(NodeId id) const { return nodes[id]; }
  template <class T>
  const T* get(NodeId id) const {
    return id == kNoNode ? nullptr : std::get_if<T>(&nodes[id].data);
  }

  std::string_view content() const { return source.view(); }
  const Token& token(uint32_t index) const { return tokens[index]; }
  std::string_view tok(uint32_t index) const {
    return index < tokens.size() ? tokens[index].text : std::string_view{};
  }

  /// Byte offsets of a token span: [first token begin, last token end).
  uint32_t begin_offset(TokenSpan span) const;
  uint32_t end_offset(TokenSpan span) const;
  uint32_t begin_offset(NodeId id) const { return begin_offset(nodes[id].tokens); }
  uint32_t end_offset(NodeId id) const { return end_offset(nodes[id].tokens); }

  /// Source bytes covered by a span, trivia included.
  std::string_view text(TokenSpan span) const;
  std::string_view text(NodeId id) const { return text(nodes[id].tokens); }

  /// Significant tokens of a span joined by single spaces where needed.
  std::string compact_text(TokenSpan span) const;

  uint32_t line_of(uint32_t token_index) const { return tokens[token_index].begin.line; }

  /// Next/previous significant token index, or kNoToken.
  uint32_t next_significant(uint32_t token_index) const;
  uint32_t prev_significant(uint32_t token_index) const;
  bool is_significant(uint32_t token_index) const;
  bool in_dead_region(uint32_t token_index) const;

  /// Pre-order traversal.
  template <class F>
  void walk(F&& visit, NodeId from = kNoNode) const {
    if (root == kNoNode) return;
    std::vector<NodeId> stack{from == kNoNode ? root : from};
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      visit(id);
      const auto& ch = nodes[id].children;
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
  }

  /// Innermost ancestor (inclusive) of the given kind.
  NodeId enclosing(NodeId id, NodeKind kind) const;
  /// Innermost enclosing Function or Lambda body owner.
  NodeId enclosing_function(NodeId id) const;
  /// Innermost ancestor that is a statement or a declaration directly inside
  /// a block, class or namespace.
  NodeId enclosing_statement(NodeId id) const;

  /// Structural self-check: child spans inside parents, siblings disjoint.
  std::vector<std::string> verify() const;
};

/// Lexes and parses. Never throws; problems become diagnostics, opaque nodes
/// or (for unbalanced brackets) the untransformable flag.
SyntaxTree parse_source(SourceText source, const ParseContext& context = {});

/// Type and class-template names a tree declares, for parsing files that
/// include it.
void add_declared_names(const SyntaxTree& tree, ParseContext& context);

/// Concatenation of all token texts.
std::string reprint(const SyntaxTree& tree);

}  // namespace retrofit
