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
#include <array>
#include <unordered_set>

#include "retrofit/syntax_tree.hpp"

namespace retrofit {
namespace {

struct ParseFail {};

enum class Scope { Namespace, Class, Block, Param };

const std::unordered_set<std::string_view> kTypeKeywords = {
    "void", "bool", "char", "wchar_t", "char16_t", "char32_t", "short",
    "int",  "long", "signed", "unsigned", "float", "double"};

const std::unordered_set<std::string_view> kSpecifierKeywords = {
    "static", "extern", "inline", "virtual", "explicit", "friend", "mutable",
    "register", "constexpr", "thread_local", "typedef", "const", "volatile"};

// Library names the parser treats as types/templates without seeing them.
const std::unordered_set<std::string_view> kStdTypes = {
    "string", "wstring", "vector", "map", "multimap", "set", "multiset", "list", "deque", "pair",
    "queue", "stack", "priority_queue", "size_t", "ptrdiff_t", "ostream", "istream", "iostream",
    "stringstream", "ostringstream", "istringstream", "exception", "runtime_error", "logic_error",
    "out_of_range", "invalid_argument", "bitset", "complex", "basic_string", "allocator", "less",
    "greater", "plus", "minus", "multiplies", "equal_to", "iterator", "const_iterator",
    "reverse_iterator", "size_type", "value_type", "reference", "const_reference", "int8_t",
    "int16_t", "int32_t", "int64_t", "uint8_t", "uint16_t", "uint32_t", "uint64_t", "FILE"};

const std::unordered_set<std::string_view> kStdTemplates = {
    "vector", "map", "multimap", "set", "multiset", "list", "deque", "pair", "queue", "stack",
    "priority_queue", "bitset", "complex", "basic_string", "allocator", "less", "greater", "plus",
    "minus", "multiplies", "equal_to", "max", "min", "swap", "make_pair", "numeric_limits"};

bool is_type_keyword(std::string_view s) { return kTypeKeywords.contains(s); }

struct QName {
  std::string text;
  std::string last;
  uint32_t last_tok = kNoToken;
  bool has_args = false;
  bool global = false;
};

class Parser {
 public:
  Parser(SyntaxTree& tree, const ParseContext& ctx) : t_(tree), ctx_(ctx), sig_(tree.significant) {}

  void run() {
    t_.nodes.clear();
    NodeId root = make(NodeKind::TranslationUnit, 0);
    t_.root = root;
    if (!check_balance()) {
      if (!sig_.empty()) {
        NodeId op = make(NodeKind::Opaque, sig_.front());
        t_.nodes[op].tokens.end = sig_.back() + 1;
        set(op, OpaqueData{true});
        add(root, op);
      }
    } else {
      while (p_ < sig_.size()) add(root, parse_declaration_or_opaque(Scope::Namespace));
    }
    t_.nodes[root].tokens = {0, static_cast<uint32_t>(t_.tokens.size())};
    attach_directives();
  }

 private:
  // ---- token access ---------------------------------------------------
  bool eof(int k = 0) const { return p_ + k >= sig_.size(); }
  uint32_t idx(int k = 0) const { return eof(k) ? kNoToken : sig_[p_ + k]; }
  std::string_view peek(int k = 0) const {
    if (eof(k)) return {};
    if (k == 0 && half_) return ">";
    return t_.tokens[sig_[p_ + k]].text;
  }
  TokenKind kind(int k = 0) const {
    return eof(k) ? TokenKind::Unknown : t_.tokens[sig_[p_ + k]].kind;
  }
  bool at(std::string_view s, int k = 0) const { return !eof(k) && peek(k) == s; }
  bool at_ident(int k = 0) const { return kind(k) == TokenKind::Identifier; }
  void advance() {
    if (eof()) throw ParseFail{};
    half_ = false;
    ++p_;
  }
  bool accept(std::string_view s) {
    if (!at(s)) return false;
    advance();
    return true;
  }
  uint32_t expect(std::string_view s) {
    if (!at(s)) throw ParseFail{};
    uint32_t i = idx();
    advance();
    return i;
  }
  uint32_t prev_tok() const { return half_ ? sig_[p_] : sig_[p_ - 1]; }
  uint32_t cur_tok() const { return eof() ? static_cast<uint32_t>(t_.tokens.size()) : idx(); }
  TokenSpan span_from(uint32_t begin) const {
    if (begin == cur_tok() && !half_) return {begin, begin};
    return {begin, prev_tok() + 1};
  }

  bool at_close_angle() const { return at(">") || (!half_ && at(">>")); }
  void consume_close_angle() {
    if (half_) {
      half_ = false;
      ++p_;
      return;
    }
    if (at(">")) {
      ++p_;
      return;
    }
    if (at(">>")) {
      half_ = true;
      return;
    }
    throw ParseFail{};
  }

  struct State {
    size_t p;
    bool half;
    size_t nodes;
    int no_gt;
    int no_comma;
  };
  State save() const { return {p_, half_, t_.nodes.size(), no_gt_, no_comma_}; }
  void restore(const State& s) {
    p_ = s.p;
    half_ = s.half;
    t_.nodes.resize(s.nodes);
    no_gt_ = s.no_gt;
    no_comma_ = s.no_comma;
  }

  // ---- nodes ----------------------------------------------------------
  NodeId make(NodeKind k, uint32_t first) {
    Node n;
    n.kind = k;
    n.tokens = {first, first};
    t_.nodes.push_back(std::move(n));
    return static_cast<NodeId>(t_.nodes.size() - 1);
  }
  void finish(NodeId id) { t_.nodes[id].tokens.end = prev_tok() + 1; }
  void add(NodeId parent, NodeId child) {
    if (child == kNoNode) return;
    t_.nodes[child].parent = parent;
    t_.nodes[parent].children.push_back(child);
  }
  template <class T>
  void set(NodeId id, T data) {
    t_.nodes[id].data = std::move(data);
  }

  // ---- names ----------------------------------------------------------
  static std::string base_name(std::string_view qualified) {
    std::string s(qualified);
    size_t lt = s.find('<');
    if (lt != std::string::npos) s.resize(lt);
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
  }
  static std::string last_component(std::string_view qualified) {
    std::string s = base_name(qualified);
    size_t c = s.rfind("::");
    return c == std::string::npos ? s : s.substr(c + 2);
  }
  bool is_std(std::string_view q) const { return q.starts_with("std::") || q.starts_with("::std::"); }

  bool known_type(std::string_view qualified) const {
    std::string base = base_name(qualified);
    std::string last = last_component(qualified);
    if (types_.contains(base) || types_.contains(last)) return true;
    if (ctx_.types.contains(base) || ctx_.types.contains(last)) return true;
    if (templates_.contains(last) || ctx_.templates.contains(last)) return true;
    if (is_std(base) && kStdTypes.contains(last)) return true;
    if (qualified.find('<') != std::string_view::npos) return true;  // a template-id names a type or function
    return false;
  }
  bool known_template(std::string_view qualified) const {
    std::string base = base_name(qualified);
    std::string last = last_component(qualified);
    if (templates_.contains(base) || templates_.contains(last)) return true;
    if (function_templates_.contains(last)) return true;
    if (ctx_.templates.contains(base) || ctx_.templates.contains(last)) return true;
    if (is_std(base) && kStdTemplates.contains(last)) return true;
    return false;
  }
  void declare_type(const std::string& name, bool is_template) {
    if (name.empty()) return;
    types_.insert(name);
    t_.declared_types.insert(name);
    if (is_template) {
      templates_.insert(name);
      t_.declared_templates.insert(name);
    }
  }

  // `<...>` after a template name. Nodes created for expression arguments are
  // discarded; only the span matters.
  bool parse_template_args(TokenSpan* out) {
    State st = save();
    uint32_t begin = idx();
    try {
      expect("<");
      ++no_gt_;
      if (!at_close_angle()) {
        for (;;) {
          parse_template_arg();
          if (accept(",")) continue;
          break;
        }
      }
      --no_gt_;
      if (!at_close_angle()) throw ParseFail{};
      consume_close_angle();
    } catch (ParseFail&) {
      restore(st);
      return false;
    }
    if (out) *out = span_from(begin);
    t_.nodes.resize(st.nodes);
    return true;
  }
  void parse_template_arg() {
    State st = save();
    try {
      DeclSpec spec = parse_decl_spec(Scope::Param, true);
      if (spec.type.empty()) throw ParseFail{};
      parse_declarator(true, Scope::Param);
      if (at(",") || at_close_angle() || at("...")) {
        accept("...");
        return;
      }
    } catch (ParseFail&) {
    }
    restore(st);
    parse_assignment();
  }

  QName parse_qualified_name(bool type_context) {
    QName q;
    uint32_t begin = idx();
    if (accept("::")) q.global = true;
    for (;;) {
      accept("template");
      if (!at_ident()) throw ParseFail{};
      q.last = std::string(peek());
      q.last_tok = idx();
      advance();
      std::string so_far = t_.compact_text(span_from(begin));
      if (at("<") && (type_context || known_template(so_far))) {
        TokenSpan args;
        if (parse_template_args(&args)) q.has_args = true;
      }
      if (at("::") && (at_ident(1) || at("template", 1) || at("~", 1))) {
        if (at("~", 1)) break;
        advance();
        continue;
      }
      break;
    }
    q.text = t_.compact_text(span_from(begin));
    return q;
  }

  // ---- balance / directives ------------------------------------------
  bool check_balance() {
    std::vector<uint32_t> stack;
    for (uint32_t i : sig_) {
      std::string_view s = t_.tokens[i].text;
      if (s == "(" || s == "[" || s == "{") {
        stack.push_back(i);
      } else if (s == ")" || s == "]" || s == "}") {
        char open = s == ")" ? '(' : s == "]" ? '[' : '{';
        if (stack.empty() || t_.tokens[stack.back()].text[0] != open) {
          t_.diagnostics.push_back({"unbalanced-braces", t_.tokens[i].begin,
                                    "unmatched '" + std::string(s) + "'"});
          t_.untransformable = true;
          return false;
        }
        stack.pop_back();
      }
    }
    if (!stack.empty()) {
      t_.diagnostics.push_back({"unbalanced-braces", t_.tokens[stack.back()].begin,
                                "unclosed '" + std::string(t_.tokens[stack.back()].text) + "'"});
      t_.untransformable = true;
      return false;
    }
    return true;
  }

  NodeId innermost_container(uint32_t tok) const {
    NodeId cur = t_.root;
    for (;;) {
      NodeId next = kNoNode;
      for (NodeId c : t_.nodes[cur].children) {
        const TokenSpan& s = t_.nodes[c].tokens;
        if (s.begin < tok && tok < s.end) {
          next = c;
          break;
        }
        if (s.begin > tok) break;
      }
      if (next == kNoNode) return cur;
      cur = next;
    }
  }

  void insert_sorted(NodeId parent, NodeId child) {
    t_.nodes[child].parent = parent;
    auto& ch = t_.nodes[parent].children;
    auto it = std::upper_bound(ch.begin(), ch.end(), child, [&](NodeId a, NodeId b) {
      return t_.nodes[a].tokens.begin < t_.nodes[b].tokens.begin;
    });
    ch.insert(it, child);
  }

  void attach_directives() {
    for (const auto& region : dead_regions_) {
      NodeId op = make(NodeKind::Opaque, region.begin);
      t_.nodes[op].tokens.end = region.end;
      insert_sorted(innermost_container(region.begin), op);
    }
    for (uint32_t i = 0; i < t_.tokens.size(); ++i) {
      const Token& tk = t_.tokens[i];
      if (tk.kind != TokenKind::Preprocessor) continue;
      bool dead = false;
      for (const auto& r : dead_regions_)
        if (r.contains(i)) dead = true;
      if (dead) continue;
      NodeId d = make(NodeKind::Directive, i);
      t_.nodes[d].tokens.end = i + 1;
      DirectiveData data;
      data.name = std::string(directive_name(tk.text));
      data.argument = std::string(directive_argument(tk.text));
      if (data.name == "include" || data.name == "include_next") {
        std::string_view a = data.argument;
        if (!a.empty() && (a[0] == '"' || a[0] == '<')) {
          char close = a[0] == '"' ? '"' : '>';
          size_t e = a.find(close, 1);
          if (e != std::string_view::npos) {
            data.include = std::string(a.substr(1, e - 1));
            data.angled = a[0] == '<';
          }
        }
      }
      set(d, std::move(data));
      insert_sorted(innermost_container(i), d);
    }
  }

 public:
  std::vector<TokenSpan> dead_regions_;

 private:
  // ---- recovery -------------------------------------------------------
  NodeId make_opaque_from(State start) {
    restore(start);
    uint32_t begin = idx();
    int depth = 0;
    bool progressed = false;
    while (!eof()) {
      std::string_view s = peek();
      if (depth == 0 && s == "}") break;
      if (s == "(" || s == "[" || s == "{") ++depth;
      if (s == ")" || s == "]" || s == "}") --depth;
      advance();
      progressed = true;
      if (depth == 0 && s == ";") break;
      if (depth == 0 && s == "}") {
        accept(";");
        break;
      }
      if (depth < 0) break;
    }
    if (!progressed && !eof()) advance();
    NodeId op = make(NodeKind::Opaque, begin);
    finish(op);
    set(op, OpaqueData{true});
    return op;
  }

  NodeId parse_declaration_or_opaque(Scope scope) {
    State st = save();
    try {
      return parse_declaration(scope);
    } catch (ParseFail&) {
      return make_opaque_from(st);
    }
  }

  // ---- declarations ----------------------------------------------------
  TemplateHeader parse_template_header() {
    TemplateHeader h;
    uint32_t begin = expect("template");
    expect("<");
    if (!at_close_angle()) {
      for (;;) {
        if (at("class") || at("typename")) {
          advance();
          accept("...");
          if (at_ident()) {
            h.params.emplace_back(peek());
            types_.insert(std::string(peek()));
            advance();
          }
          if (accept("=")) {
            DeclSpec ds = parse_decl_spec(Scope::Param, true);
            if (ds.type.empty()) throw ParseFail{};
            parse_declarator(true, Scope::Param);
          }
        } else if (at("template")) {
          parse_template_header();
          if (!accept("class") && !accept("typename")) throw ParseFail{};
          if (at_ident()) {
            h.params.emplace_back(peek());
            types_.insert(std::string(peek()));
            templates_.insert(std::string(peek()));
            advance();
          }
        } else {
          DeclSpec ds = parse_decl_spec(Scope::Param, true);
          if (ds.type.empty()) throw ParseFail{};
          Declarator d = parse_declarator(true, Scope::Param);
          if (!d.is_abstract()) h.params.push_back(d.name_text);
          if (accept("=")) {
            ++no_gt_;
            parse_conditional();
            --no_gt_;
          }
        }
        if (!accept(",")) break;
      }
    }
    if (!at_close_angle()) throw ParseFail{};
    consume_close_angle();
    h.span = span_from(begin);
    return h;
  }

  NodeId parse_declaration(Scope scope) {
    uint32_t begin = idx();
    std::string_view s = peek();

    if (s == ";") {
      NodeId n = make(NodeKind::Null, begin);
      advance();
      finish(n);
      return n;
    }
    if (s == "namespace") return parse_namespace();
    if (s == "using") return parse_using(begin, TemplateHeader{});
    if (s == "static_assert") {
      NodeId n = make(NodeKind::Opaque, begin);
      skip_balanced_to(";");
      finish(n);
      return n;
    }
    if (s == "template") {
      if (!at("<", 1)) {  // explicit instantiation
        NodeId n = make(NodeKind::Opaque, begin);
        skip_balanced_to(";");
        finish(n);
        return n;
      }
      TemplateHeader h = parse_template_header();
      if (at("using")) return parse_using(begin, h);
      return parse_simple_declaration(scope, begin, &h);
    }
    if (s == "extern" && kind(1) == TokenKind::Literal && at("{", 2)) {
      NodeId n = make(NodeKind::Namespace, begin);
      advance();
      advance();
      NamespaceData data;
      data.lbrace = expect("{");
      while (!eof() && !at("}")) add(n, parse_declaration_or_opaque(Scope::Namespace));
      data.rbrace = expect("}");
      finish(n);
      set(n, std::move(data));
      return n;
    }
    if (scope == Scope::Class && (s == "public" || s == "private" || s == "protected") && at(":", 1)) {
      NodeId n = make(NodeKind::AccessSpec, begin);
      advance();
      advance();
      finish(n);
      return n;
    }
    return parse_simple_declaration(scope, begin, nullptr);
  }

  void skip_balanced_to(std::string_view terminator) {
    int depth = 0;
    while (!eof()) {
      std::string_view s = peek();
      if (s == "(" || s == "[" || s == "{") ++depth;
      if (s == ")" || s == "]" || s == "}") --depth;
      advance();
      if (depth == 0 && s == terminator) return;
      if (depth < 0) throw ParseFail{};
    }
    throw ParseFail{};
  }

  NodeId parse_namespace() {
    uint32_t begin = expect("namespace");
    NodeId n = make(NodeKind::Namespace, begin);
    NamespaceData data;
    if (at_ident()) {
      data.name = std::string(peek());
      advance();
    }
    if (accept("=")) {
      parse_qualified_name(false);
      expect(";");
      finish(n);
      t_.nodes[n].kind = NodeKind::Using;
      UsingData u;
      u.name = data.name;
      u.last = data.name;
      set(n, std::move(u));
      return n;
    }
    data.lbrace = expect("{");
    while (!eof() && !at("}")) add(n, parse_declaration_or_opaque(Scope::Namespace));
    data.rbrace = expect("}");
    finish(n);
    set(n, std::move(data));
    return n;
  }

  NodeId parse_using(uint32_t begin, TemplateHeader tmpl) {
    uint32_t using_tok = expect("using");
    if (accept("namespace")) {
      NodeId n = make(NodeKind::Using, begin);
      QName q = parse_qualified_name(false);
      expect(";");
      finish(n);
      UsingData u;
      u.is_directive = true;
      u.name = q.text;
      u.last = q.last;
      set(n, std::move(u));
      return n;
    }
    if (at_ident() && at("=", 1)) {
      NodeId n = make(NodeKind::UsingAlias, begin);
      UsingAliasData a;
      a.using_tok = using_tok;
      a.name_tok = idx();
      a.name = std::string(peek());
      advance();
      a.eq_tok = expect("=");
      uint32_t type_begin = idx();
      a.type_spec = parse_decl_spec(Scope::Param, true);
      if (a.type_spec.type.empty()) throw ParseFail{};
      a.type_decl = parse_declarator(true, Scope::Param);
      a.type = span_from(type_begin);
      a.semi_tok = expect(";");
      a.is_template = tmpl.span.valid();
      a.tmpl = std::move(tmpl);
      declare_type(a.name, a.is_template);
      finish(n);
      set(n, std::move(a));
      return n;
    }
    NodeId n = make(NodeKind::Using, begin);
    accept("typename");
    QName q = parse_qualified_name(false);
    expect(";");
    finish(n);
    UsingData u;
    u.name = q.text;
    u.last = q.last;
    set(n, std::move(u));
    return n;
  }

  // Class head + body. Returns the Class node; `begin` includes any template
  // header.
  NodeId parse_class_specifier(uint32_t begin, const TemplateHeader* tmpl, bool* is_definition) {
    NodeId n = make(NodeKind::Class, begin);
    ClassData c;
    c.key_tok = idx();
    std::string_view key = peek();
    c.key = key == "struct" ? ClassData::Key::Struct
            : key == "union" ? ClassData::Key::Union
                             : ClassData::Key::Class;
    advance();
    if (at_ident() && !(peek() == "final" && (at(":", 1) || at("{", 1)))) {
      c.name_tok = idx();
      QName q = parse_qualified_name(true);
      c.name = q.last;
      c.name_tok = q.last_tok;
    }
    if (tmpl) {
      c.is_template = true;
      c.tmpl = *tmpl;
    }
    declare_type(c.name, c.is_template);
    if (at("final") && (at(":", 1) || at("{", 1))) {
      c.final_tok = idx();
      advance();
    }
    if (at(":")) {
      c.base_colon = idx();
      advance();
      for (;;) {
        BaseSpec b;
        uint32_t bb = idx();
        while (at("virtual") || at("public") || at("private") || at("protected")) advance();
        QName q = parse_qualified_name(true);
        b.name = q.text;
        b.span = span_from(bb);
        c.bases.push_back(std::move(b));
        if (!accept(",")) break;
      }
      if (!at("{")) throw ParseFail{};
    }
    *is_definition = at("{");
    if (*is_definition) {
      c.lbrace = expect("{");
      class_stack_.push_back(c.name);
      try {
        while (!eof() && !at("}")) add(n, parse_declaration_or_opaque(Scope::Class));
      } catch (...) {
        class_stack_.pop_back();
        throw;
      }
      class_stack_.pop_back();
      c.rbrace = expect("}");
    }
    finish(n);
    set(n, std::move(c));
    return n;
  }

  NodeId parse_enum_specifier(uint32_t begin, bool* is_definition) {
    NodeId n = make(NodeKind::Enum, begin);
    EnumData e;
    expect("enum");
    if (!accept("class")) accept("struct");
    if (at_ident()) {
      e.name = std::string(peek());
      advance();
    }
    if (accept(":")) parse_decl_spec(Scope::Param, true);
    *is_definition = at("{");
    if (accept("{")) {
      while (!at("}")) {
        if (!at_ident()) throw ParseFail{};
        e.enumerators.emplace_back(peek());
        advance();
        if (accept("=")) {
          size_t mark = t_.nodes.size();
          parse_assignment();
          t_.nodes.resize(mark);
        }
        if (!accept(",")) break;
      }
      expect("}");
    }
    declare_type(e.name, false);
    finish(n);
    set(n, std::move(e));
    return n;
  }

  bool at_ctor_name(Scope scope) const {
    if (scope == Scope::Class && !class_stack_.empty()) {
      if (at_ident() && peek() == class_stack_.back() && at("(", 1)) return true;
      if (at("~") && at_ident(1)) return true;
    }
    if (scope == Scope::Namespace || scope == Scope::Block) {
      // A::A( / A::~A( / A<T>::A(
      size_t k = 0;
      if (at("::")) ++k;
      std::string prev;
      while (!eof(k) && kind(k) == TokenKind::Identifier) {
        std::string cur(peek(k));
        size_t j = k + 1;
        if (at("<", j)) {
          int depth = 0;
          for (; !eof(j); ++j) {
            std::string_view s = peek(j);
            if (s == "<") ++depth;
            else if (s == ">") --depth;
            else if (s == ">>") depth -= 2;
            else if (s == ";" || s == "{" || s == "}") return false;
            if (depth <= 0) break;
          }
          ++j;
        }
        if (!at("::", j)) return !prev.empty() && cur == prev && at("(", j);
        if (at("~", j + 1)) return true;
        prev = cur;
        k = j + 1;
      }
    }
    return false;
  }

  DeclSpec parse_decl_spec(Scope scope, bool type_only = false, const TemplateHeader* tmpl = nullptr,
                           uint32_t decl_begin = kNoToken) {
    DeclSpec ds;
    uint32_t begin = idx();
    uint32_t type_begin = kNoToken;
    uint32_t type_end = kNoToken;
    bool have_type = false;
    bool fundamental = false;
    auto mark_type = [&](uint32_t b) {
      if (type_begin == kNoToken) type_begin = b;
      type_end = prev_tok() + 1;
    };
    for (;;) {
      if (eof()) break;
      std::string_view s = peek();
      if (s == "const" || s == "volatile") {
        if (s == "const") {
          ds.is_const = true;
          if (ds.const_tok == kNoToken) ds.const_tok = idx();
        }
        advance();
        continue;
      }
      if (!type_only && kSpecifierKeywords.contains(s)) {
        if (s == "static") ds.is_static = true;
        if (s == "extern") ds.is_extern = true;
        if (s == "typedef") ds.is_typedef = true;
        if (s == "virtual") ds.is_virtual = true;
        if (s == "friend") ds.is_friend = true;
        if (s == "explicit") ds.is_explicit = true;
        if (s == "inline") ds.is_inline = true;
        if (s == "mutable") ds.is_mutable = true;
        advance();
        continue;
      }
      if (s == "auto" && !have_type) {
        ds.auto_tok = idx();
        uint32_t b = idx();
        advance();
        mark_type(b);
        have_type = true;
        continue;
      }
      if (is_type_keyword(s) && (!have_type || fundamental)) {
        uint32_t b = idx();
        advance();
        mark_type(b);
        have_type = true;
        fundamental = true;
        continue;
      }
      if (have_type) break;
      if (s == "class" || s == "struct" || s == "union") {
        uint32_t b = idx();
        bool def = false;
        NodeId cls = parse_class_specifier(decl_begin != kNoToken && tmpl ? decl_begin : b, tmpl, &def);
        if (def) {
          ds.defined_class = cls;
        } else {
          t_.nodes.resize(cls);
        }
        mark_type(b);
        have_type = true;
        continue;
      }
      if (s == "enum") {
        uint32_t b = idx();
        bool def = false;
        NodeId en = parse_enum_specifier(b, &def);
        if (def) {
          ds.defined_class = en;
        } else {
          t_.nodes.resize(en);
        }
        mark_type(b);
        have_type = true;
        continue;
      }
      if (s == "typename") {
        uint32_t b = idx();
        advance();
        parse_qualified_name(true);
        mark_type(b);
        have_type = true;
        continue;
      }
      if (s == "decltype") {
        uint32_t b = idx();
        advance();
        expect("(");
        int depth = 1;
        while (depth > 0) {
          if (at("(")) ++depth;
          if (at(")")) --depth;
          advance();
        }
        mark_type(b);
        have_type = true;
        continue;
      }
      if (at_ident() || (s == "::" && at_ident(1))) {
        if (s == "operator") break;
        if (!type_only && at_ctor_name(scope)) break;
        uint32_t b = idx();
        parse_qualified_name(true);
        mark_type(b);
        have_type = true;
        continue;
      }
      break;
    }
    ds.span = span_from(begin);
    if (type_begin != kNoToken) ds.type = {type_begin, type_end};
    return ds;
  }

  // Whether `(` starts a parameter list rather than constructor arguments.
  bool looks_like_params(Scope scope) const {
    if (at(")", 1)) return true;
    std::string_view s = peek(1);
    if (s == "...") return true;
    if (is_type_keyword(s) || s == "const" || s == "volatile" || s == "struct" || s == "class" ||
        s == "enum" || s == "typename" || s == "unsigned" || s == "signed" || s == "auto" ||
        s == "register" || s == "union")
      return true;
    if (kind(1) == TokenKind::Identifier || s == "::") {
      // qualified name then declarator-ish
      size_t k = 1;
      if (at("::", k)) ++k;
      std::string name;
      while (kind(k) == TokenKind::Identifier) {
        name += std::string(peek(k));
        ++k;
        if (at("<", k)) {
          int depth = 0;
          for (; !eof(k); ++k) {
            std::string_view x = peek(k);
            if (x == "<") ++depth;
            else if (x == ">") --depth;
            else if (x == ">>") depth -= 2;
            else if (x == ";" || x == "{") return false;
            if (depth <= 0) break;
          }
          ++k;
          name += "<>";
        }
        if (at("::", k)) {
          name += "::";
          ++k;
          continue;
        }
        break;
      }
      bool type = known_type(name);
      if (scope != Scope::Block) {
        if (type) return true;
        std::string_view nx = peek(k);
        return kind(k) == TokenKind::Identifier || nx == "*" || nx == "&" || nx == "," || nx == ")" ||
               nx == "&&";
      }
      if (!type) return kind(k) == TokenKind::Identifier;
      std::string_view nx = peek(k);
      return kind(k) == TokenKind::Identifier || nx == "*" || nx == "&" || nx == "," || nx == ")" ||
             nx == "&&" || nx == "const";
    }
    return false;
  }

  Param parse_param() {
    Param p;
    uint32_t begin = idx();
    p.spec = parse_decl_spec(Scope::Param).span;
    if (p.spec.empty()) throw ParseFail{};
    p.decl = parse_declarator(true, Scope::Param);
    if (at("=")) {
      advance();
      uint32_t db = idx();
      size_t mark = t_.nodes.size();
      parse_initializer_clause();
      t_.nodes.resize(mark);
      p.default_arg = span_from(db);
    }
    p.span = span_from(begin);
    return p;
  }

  void parse_params(DeclOp& op) {
    op.tok = expect("(");
    if (!at(")")) {
      for (;;) {
        if (accept("...")) {
          op.variadic = true;
          break;
        }
        op.params.push_back(parse_param());
        if (at("...")) {
          advance();
          op.variadic = true;
          break;
        }
        if (!accept(",")) break;
      }
    }
    op.close = expect(")");
    // a lone `void` parameter
    if (op.params.size() == 1 && op.params[0].decl.is_abstract() && op.params[0].decl.ops.empty() &&
        t_.compact_text(op.params[0].spec) == "void")
      op.params.clear();
    for (;;) {
      if (at("const")) {
        op.is_const = true;
        advance();
      } else if (at("volatile") || at("&") || at("&&")) {
        advance();
      } else if (at("noexcept")) {
        advance();
        if (at("(")) skip_parens();
      } else if (at("throw") && at("(", 1)) {
        advance();
        skip_parens();
      } else {
        break;
      }
    }
  }

  void skip_parens() {
    expect("(");
    int depth = 1;
    while (depth > 0) {
      if (at("(")) ++depth;
      if (at(")")) --depth;
      advance();
    }
  }

  std::string parse_operator_name() {
    std::string name = "operator";
    expect("operator");
    if (at("(") && at(")", 1)) {
      advance();
      advance();
      return name + "()";
    }
    if (at("[") && at("]", 1)) {
      advance();
      advance();
      return name + "[]";
    }
    if (at("new") || at("delete")) {
      name += " " + std::string(peek());
      advance();
      if (at("[") && at("]", 1)) {
        advance();
        advance();
        name += "[]";
      }
      return name;
    }
    if (kind() == TokenKind::Punctuator && !at("(")) {
      name += std::string(peek());
      if (half_) {
        half_ = false;
        ++p_;
      } else {
        advance();
      }
      return name;
    }
    // conversion function
    DeclSpec ds = parse_decl_spec(Scope::Param, true);
    if (ds.type.empty()) throw ParseFail{};
    while (at("*") || at("&")) advance();
    return name + " " + t_.compact_text(ds.span);
  }

  Declarator parse_declarator(bool abstract_ok, Scope scope, bool allow_direct_init = false) {
    Declarator d;
    uint32_t begin = idx();
    std::vector<DeclOp> ptrs;
    for (;;) {
      if (at("*")) {
        DeclOp op;
        op.kind = DeclOp::Kind::Pointer;
        op.tok = idx();
        advance();
        while (at("const") || at("volatile")) {
          if (at("const")) op.is_const = true;
          advance();
        }
        ptrs.push_back(std::move(op));
      } else if (at("&") || at("&&")) {
        DeclOp op;
        op.kind = at("&") ? DeclOp::Kind::LRef : DeclOp::Kind::RRef;
        op.tok = idx();
        advance();
        ptrs.push_back(std::move(op));
      } else {
        break;
      }
    }
    accept("...");
    std::vector<DeclOp> inner_ops;
    bool nested = false;
    if (at("(") && (at("*", 1) || at("&", 1) || (at("(", 1) && !abstract_ok) ||
                    (!abstract_ok && at_ident(1) && !looks_like_params(scope)) ||
                    (abstract_ok && at_ident(1) && at("::", 2) && at("*", 3)))) {
      advance();
      Declarator inner = parse_declarator(abstract_ok, scope);
      expect(")");
      d.name = inner.name;
      d.name_text = inner.name_text;
      inner_ops = std::move(inner.ops);
      nested = true;
    } else if (at("operator")) {
      d.name = idx();
      d.name_text = parse_operator_name();
    } else if (at("~") && at_ident(1)) {
      advance();
      d.name = idx();
      d.name_text = "~" + std::string(peek());
      advance();
    } else if (at_ident() || (at("::") && at_ident(1))) {
      uint32_t nb = idx();
      if (at("::")) advance();
      for (;;) {
        if (!at_ident()) throw ParseFail{};
        d.name = idx();
        advance();
        if (at("<") && known_template(t_.compact_text(span_from(nb)))) parse_template_args(nullptr);
        if (at("::") && (at_ident(1) || at("~", 1) || at("operator", 1))) {
          advance();
          if (at("~")) {
            advance();
            d.name = idx();
            advance();
            break;
          }
          if (at("operator")) {
            d.name = idx();
            parse_operator_name();
            break;
          }
          continue;
        }
        break;
      }
      d.name_text = t_.compact_text(span_from(nb));
    } else if (!abstract_ok) {
      throw ParseFail{};
    }
    (void)nested;

    std::vector<DeclOp> suffixes;
    for (;;) {
      if (at("[")) {
        DeclOp op;
        op.kind = DeclOp::Kind::Array;
        op.tok = idx();
        advance();
        uint32_t eb = idx();
        if (!at("]")) {
          size_t mark = t_.nodes.size();
          parse_expression();
          t_.nodes.resize(mark);
        }
        op.extent = span_from(eb);
        if (op.extent.begin == op.extent.end) op.extent = {};
        op.close = expect("]");
        suffixes.push_back(std::move(op));
        continue;
      }
      if (at("(")) {
        if (allow_direct_init && suffixes.empty() && inner_ops.empty() && !looks_like_params(scope)) break;
        DeclOp op;
        op.kind = DeclOp::Kind::Function;
        State st = save();
        try {
          parse_params(op);
        } catch (ParseFail&) {
          if (!allow_direct_init || !suffixes.empty()) throw;
          restore(st);
          break;
        }
        suffixes.push_back(std::move(op));
        continue;
      }
      break;
    }
    for (auto& op : inner_ops) d.ops.push_back(std::move(op));
    for (auto& op : suffixes) d.ops.push_back(std::move(op));
    for (auto it = ptrs.rbegin(); it != ptrs.rend(); ++it) d.ops.push_back(std::move(*it));
    d.span = span_from(begin);
    return d;
  }

  void parse_variable_initializer(Declarator& d, Scope scope) {
    if (scope == Scope::Class && at(":")) {
      advance();
      uint32_t b = idx();
      size_t mark = t_.nodes.size();
      parse_conditional();
      t_.nodes.resize(mark);
      d.bitfield = span_from(b);
    }
    uint32_t begin = idx();
    if (at("=")) {
      advance();
      d.init_kind = Declarator::Init::Assign;
      d.init_args.push_back(parse_initializer_clause());
      d.init = span_from(begin);
    } else if (at("{")) {
      d.init_kind = Declarator::Init::Brace;
      NodeId list = parse_init_list();
      d.init_args = t_.nodes[list].children;
      // flatten: keep the element nodes, drop the list node itself
      for (NodeId c : d.init_args) t_.nodes[c].parent = kNoNode;
      t_.nodes[list].children.clear();
      brace_lists_.push_back(list);
      d.init = span_from(begin);
    } else if (at("(") && scope != Scope::Class) {
      d.init_kind = Declarator::Init::Paren;
      advance();
      if (!at(")")) {
        for (;;) {
          d.init_args.push_back(parse_initializer_clause());
          if (!accept(",")) break;
        }
      }
      expect(")");
      d.init = span_from(begin);
    }
  }

  bool is_function_declarator(const Declarator& d) const {
    return !d.ops.empty() && d.ops.front().kind == DeclOp::Kind::Function;
  }

  NodeId parse_simple_declaration(Scope scope, uint32_t begin, const TemplateHeader* tmpl) {
    size_t first_node = t_.nodes.size();
    DeclSpec spec = parse_decl_spec(scope, false, tmpl, begin);
    bool ctor_like = spec.type.empty() && (at_ident() || at("~") || at("::") || at("operator"));

    if (at(";") && spec.defined_class != kNoNode && !spec.is_typedef) {
      NodeId cls = spec.defined_class;
      advance();
      finish(cls);
      t_.nodes[cls].tokens.begin = begin;
      return cls;
    }
    if (at(";") && spec.type.valid() && !spec.is_typedef) {
      // forward declaration / elaborated type / friend class X;
      NodeId n = make(NodeKind::Opaque, begin);
      advance();
      finish(n);
      if (scope != Scope::Block || spec.is_friend) {
        t_.nodes[n].kind = NodeKind::Class;
        ClassData c;
        std::string_view key = t_.tok(spec.type.begin);
        c.key = key == "struct" ? ClassData::Key::Struct
                : key == "union" ? ClassData::Key::Union
                                 : ClassData::Key::Class;
        c.key_tok = spec.type.begin;
        c.name = last_component(t_.compact_text({spec.type.begin + 1, spec.type.end}));
        if (key != "class" && key != "struct" && key != "union") {
          t_.nodes[n].kind = NodeKind::Opaque;
        } else {
          if (tmpl) {
            c.is_template = true;
            c.tmpl = *tmpl;
          }
          set(n, std::move(c));
        }
      }
      return n;
    }
    if (spec.type.empty() && !ctor_like) throw ParseFail{};

    Declarator first = parse_declarator(false, scope, scope == Scope::Block || scope == Scope::Namespace);
    if (spec.type.empty()) {
      bool ctor = is_function_declarator(first);
      if (!ctor) throw ParseFail{};
    }

    if (spec.is_typedef) {
      NodeId n = make(NodeKind::Typedef, begin);
      if (spec.defined_class != kNoNode) add(n, spec.defined_class);
      TypedefData data;
      data.spec = spec;
      data.declarators.push_back(std::move(first));
      while (accept(",")) data.declarators.push_back(parse_declarator(false, scope));
      expect(";");
      for (const auto& d : data.declarators) declare_type(d.name_text, false);
      finish(n);
      set(n, std::move(data));
      return n;
    }

    if (is_function_declarator(first)) {
      NodeId n = make(NodeKind::Function, begin);
      if (spec.defined_class != kNoNode) add(n, spec.defined_class);
      FunctionData f;
      f.spec = spec;
      f.decl = std::move(first);
      f.is_member = scope == Scope::Class;
      if (tmpl) {
        f.is_template = true;
        f.tmpl = *tmpl;
        function_templates_.insert(last_component(f.decl.name_text));
      }
      std::string full = f.decl.name_text;
      size_t colon = full.rfind("::");
      if (colon != std::string::npos) {
        f.name = full.substr(colon + 2);
        f.qualifier = base_name(full.substr(0, colon));
        size_t c2 = f.qualifier.rfind("::");
        std::string qual_last = c2 == std::string::npos ? f.qualifier : f.qualifier.substr(c2 + 2);
        if (f.name == qual_last) f.is_ctor = true;
        if (!f.name.empty() && f.name[0] == '~') f.is_dtor = true;
      } else {
        f.name = full;
        if (scope == Scope::Class && !class_stack_.empty() && f.name == class_stack_.back() &&
            spec.type.empty())
          f.is_ctor = true;
        if (!f.name.empty() && f.name[0] == '~') f.is_dtor = true;
      }
      if (at("->")) {
        f.arrow = idx();
        advance();
        uint32_t tb = idx();
        DeclSpec ts = parse_decl_spec(Scope::Param, true);
        if (ts.type.empty()) throw ParseFail{};
        parse_declarator(true, Scope::Param);
        f.trailing = span_from(tb);
      }
      while (at("final") || at("override")) {
        f.virt_specifiers.push_back(idx());
        advance();
      }
      if (at("=")) {
        advance();
        if (at("0")) f.definition = FunctionData::Definition::Pure;
        else if (at("default")) f.definition = FunctionData::Definition::Default;
        else if (at("delete")) f.definition = FunctionData::Definition::Delete;
        else throw ParseFail{};
        advance();
        expect(";");
      } else if (at(";")) {
        advance();
      } else {
        if (at(":")) {
          f.init_colon = idx();
          advance();
          for (;;) {
            CtorInit ci;
            uint32_t ib = idx();
            QName q = parse_qualified_name(true);
            ci.name = base_name(q.text);
            ci.name_tok = q.last_tok;
            uint32_t ab = idx();
            if (at("(")) {
              advance();
              if (!at(")")) {
                for (;;) {
                  ci.arg_exprs.push_back(parse_initializer_clause());
                  if (!accept(",")) break;
                }
              }
              expect(")");
            } else if (at("{")) {
              NodeId list = parse_init_list();
              ci.arg_exprs = t_.nodes[list].children;
              for (NodeId c : ci.arg_exprs) t_.nodes[c].parent = kNoNode;
              t_.nodes[list].children.clear();
              brace_lists_.push_back(list);
            } else {
              throw ParseFail{};
            }
            accept("...");
            ci.args = span_from(ab);
            ci.span = span_from(ib);
            for (NodeId a : ci.arg_exprs) add(n, a);
            f.inits.push_back(std::move(ci));
            if (!accept(",")) break;
          }
        }
        if (!at("{")) throw ParseFail{};
        f.definition = FunctionData::Definition::Body;
        f.body = parse_compound();
        add(n, f.body);
      }
      finish(n);
      set(n, std::move(f));
      (void)first_node;
      return n;
    }

    NodeId n = make(NodeKind::Variable, begin);
    if (spec.defined_class != kNoNode) add(n, spec.defined_class);
    VariableData v;
    v.spec = spec;
    v.is_member = scope == Scope::Class;
    v.is_template = tmpl != nullptr;
    parse_variable_initializer(first, scope);
    for (NodeId a : first.init_args) add(n, a);
    v.declarators.push_back(std::move(first));
    while (accept(",")) {
      Declarator d = parse_declarator(false, scope, scope != Scope::Class);
      if (is_function_declarator(d) && scope != Scope::Class) {
        // `int a, f(int);` - keep it as a declarator without an initializer
      } else {
        parse_variable_initializer(d, scope);
      }
      for (NodeId a : d.init_args) add(n, a);
      v.declarators.push_back(std::move(d));
    }
    expect(";");
    finish(n);
    set(n, std::move(v));
    return n;
  }

  // ---- statements -------------------------------------------------------
  NodeId parse_compound() {
    uint32_t begin = expect("{");
    NodeId n = make(NodeKind::Compound, begin);
    StmtData s;
    s.lbrace = begin;
    while (!eof() && !at("}")) add(n, parse_statement_or_opaque());
    s.rbrace = expect("}");
    finish(n);
    set(n, s);
    return n;
  }

  NodeId parse_statement_or_opaque() {
    State st = save();
    try {
      return parse_statement();
    } catch (ParseFail&) {
      return make_opaque_from(st);
    }
  }

  bool looks_like_declaration() const {
    std::string_view s = peek();
    if (is_type_keyword(s) || kSpecifierKeywords.contains(s) || s == "auto" || s == "class" ||
        s == "struct" || s == "union" || s == "enum" || s == "typename" || s == "decltype" ||
        s == "using" || s == "static_assert")
      return true;
    if (kind() != TokenKind::Identifier && s != "::") return false;
    size_t k = 0;
    if (at("::")) ++k;
    std::string name;
    while (kind(k) == TokenKind::Identifier) {
      name += std::string(peek(k));
      ++k;
      if (at("<", k)) {
        int depth = 0;
        size_t j = k;
        for (; !eof(j); ++j) {
          std::string_view x = peek(j);
          if (x == "<") ++depth;
          else if (x == ">") --depth;
          else if (x == ">>") depth -= 2;
          else if (x == ";" || x == "{" || x == "}" || x == "&&" || x == "||") return false;
          if (depth <= 0) break;
        }
        if (eof(j)) return false;
        k = j + 1;
        name += "<>";
      }
      if (at("::", k) && kind(k + 1) == TokenKind::Identifier) {
        name += "::";
        ++k;
        continue;
      }
      break;
    }
    if (name.empty()) return false;
    if (kind(k) == TokenKind::Identifier) return true;
    if (at("const", k)) return true;
    if (at("*", k) || at("&", k) || at("&&", k)) {
      size_t j = k;
      while (at("*", j) || at("&", j) || at("&&", j) || at("const", j)) ++j;
      if (kind(j) != TokenKind::Identifier) return at("(", j) && at("*", j + 1);
      std::string_view after = peek(j + 1);
      if (known_type(name)) return true;
      return after == "=" || after == ";" || after == "," || after == "[" || after == ")";
    }
    if (at("(", k) && at("*", k + 1) && known_type(name)) return true;
    return false;
  }

  NodeId parse_condition() {
    if (looks_like_declaration()) {
      State st = save();
      try {
        uint32_t begin = idx();
        DeclSpec spec = parse_decl_spec(Scope::Block);
        if (spec.type.empty()) throw ParseFail{};
        Declarator d = parse_declarator(false, Scope::Block);
        if (!at("=")) throw ParseFail{};
        NodeId n = make(NodeKind::Variable, begin);
        parse_variable_initializer(d, Scope::Block);
        for (NodeId a : d.init_args) add(n, a);
        VariableData v;
        v.spec = spec;
        v.declarators.push_back(std::move(d));
        finish(n);
        set(n, std::move(v));
        return n;
      } catch (ParseFail&) {
        restore(st);
      }
    }
    return parse_expression();
  }

  bool is_range_for_header() const {
    // p_ is at `(`
    int depth = 0;
    for (size_t k = 0; !eof(k); ++k) {
      std::string_view s = peek(k);
      if (s == "(" || s == "[" || s == "{") ++depth;
      else if (s == ")" || s == "]" || s == "}") {
        --depth;
        if (depth == 0) return false;
      } else if (depth == 1 && s == ";") {
        return false;
      } else if (depth == 1 && s == ":") {
        return true;
      } else if (depth == 1 && s == "?") {
        return false;
      }
    }
    return false;
  }

  NodeId parse_statement() {
    uint32_t begin = idx();
    std::string_view s = peek();
    if (s == "{") return parse_compound();
    if (s == ";") {
      NodeId n = make(NodeKind::Null, begin);
      advance();
      finish(n);
      return n;
    }
    if (s == "if") {
      NodeId n = make(NodeKind::If, begin);
      StmtData d;
      d.keyword = begin;
      advance();
      d.lparen = expect("(");
      add(n, parse_condition());
      d.rparen = expect(")");
      add(n, parse_statement_or_opaque());
      if (accept("else")) add(n, parse_statement_or_opaque());
      finish(n);
      set(n, d);
      return n;
    }
    if (s == "while") {
      NodeId n = make(NodeKind::While, begin);
      StmtData d;
      d.keyword = begin;
      advance();
      d.lparen = expect("(");
      add(n, parse_condition());
      d.rparen = expect(")");
      add(n, parse_statement_or_opaque());
      finish(n);
      set(n, d);
      return n;
    }
    if (s == "do") {
      NodeId n = make(NodeKind::Do, begin);
      StmtData d;
      d.keyword = begin;
      advance();
      add(n, parse_statement_or_opaque());
      expect("while");
      d.lparen = expect("(");
      add(n, parse_expression());
      d.rparen = expect(")");
      d.semi = expect(";");
      finish(n);
      set(n, d);
      return n;
    }
    if (s == "switch") {
      NodeId n = make(NodeKind::Switch, begin);
      StmtData d;
      d.keyword = begin;
      advance();
      d.lparen = expect("(");
      add(n, parse_condition());
      d.rparen = expect(")");
      add(n, parse_statement_or_opaque());
      finish(n);
      set(n, d);
      return n;
    }
    if (s == "for") return parse_for();
    if (s == "return") {
      NodeId n = make(NodeKind::Return, begin);
      StmtData d;
      d.keyword = begin;
      advance();
      if (!at(";")) add(n, at("{") ? parse_init_list() : parse_expression());
      d.semi = expect(";");
      finish(n);
      set(n, d);
      return n;
    }
    if (s == "break" || s == "continue") {
      NodeId n = make(NodeKind::Jump, begin);
      advance();
      expect(";");
      finish(n);
      return n;
    }
    if (s == "goto") {
      NodeId n = make(NodeKind::Jump, begin);
      advance();
      advance();
      expect(";");
      finish(n);
      return n;
    }
    if (s == "case" || s == "default") {
      NodeId n = make(NodeKind::Label, begin);
      advance();
      if (s == "case") {
        size_t mark = t_.nodes.size();
        parse_conditional();
        t_.nodes.resize(mark);
      }
      expect(":");
      finish(n);
      return n;
    }
    if (at_ident() && at(":", 1)) {
      NodeId n = make(NodeKind::Label, begin);
      advance();
      advance();
      finish(n);
      return n;
    }
    if (s == "try") {
      NodeId n = make(NodeKind::Try, begin);
      advance();
      add(n, parse_compound());
      while (at("catch")) {
        advance();
        expect("(");
        if (!accept("...")) parse_param();
        expect(")");
        add(n, parse_compound());
      }
      finish(n);
      return n;
    }
    if (s == "namespace" || s == "template") throw ParseFail{};
    if (looks_like_declaration()) {
      State st = save();
      try {
        NodeId n = make(NodeKind::DeclStmt, begin);
        NodeId d;
        if (at("using")) {
          d = parse_using(begin, TemplateHeader{});
        } else if (at("static_assert")) {
          d = parse_declaration(Scope::Block);
        } else {
          d = parse_simple_declaration(Scope::Block, begin, nullptr);
        }
        if (t_.nodes[d].kind == NodeKind::Function && t_.nodes[d].children.size() > 0 &&
            std::get<FunctionData>(t_.nodes[d].data).body != kNoNode)
          throw ParseFail{};  // no function definitions in blocks
        add(n, d);
        finish(n);
        return n;
      } catch (ParseFail&) {
        restore(st);
      }
    }
    NodeId n = make(NodeKind::ExprStmt, begin);
    add(n, parse_expression());
    StmtData d;
    d.semi = expect(";");
    finish(n);
    set(n, d);
    return n;
  }

  NodeId parse_for() {
    uint32_t begin = expect("for");
    if (!at("(")) throw ParseFail{};
    if (is_range_for_header()) {
      NodeId n = make(NodeKind::RangeFor, begin);
      RangeForData r;
      r.for_tok = begin;
      r.lparen = expect("(");
      r.spec = parse_decl_spec(Scope::Block);
      if (r.spec.type.empty()) throw ParseFail{};
      r.decl = parse_declarator(false, Scope::Block);
      r.colon = expect(":");
      r.range = at("{") ? parse_init_list() : parse_expression();
      add(n, r.range);
      r.rparen = expect(")");
      r.body = parse_statement_or_opaque();
      add(n, r.body);
      finish(n);
      set(n, std::move(r));
      return n;
    }
    NodeId n = make(NodeKind::For, begin);
    StmtData d;
    d.keyword = begin;
    d.lparen = expect("(");
    // init-statement
    uint32_t ib = idx();
    if (at(";")) {
      NodeId nul = make(NodeKind::Null, ib);
      advance();
      finish(nul);
      add(n, nul);
    } else {
      bool done = false;
      if (looks_like_declaration()) {
        State st = save();
        try {
          NodeId ds = make(NodeKind::DeclStmt, ib);
          add(ds, parse_simple_declaration(Scope::Block, ib, nullptr));
          finish(ds);
          add(n, ds);
          done = true;
        } catch (ParseFail&) {
          restore(st);
        }
      }
      if (!done) {
        NodeId es = make(NodeKind::ExprStmt, ib);
        add(es, parse_expression());
        expect(";");
        finish(es);
        add(n, es);
      }
    }
    if (!at(";")) add(n, parse_condition());
    expect(";");
    if (!at(")")) add(n, parse_expression());
    d.rparen = expect(")");
    add(n, parse_statement_or_opaque());
    finish(n);
    set(n, d);
    return n;
  }

  // ---- expressions --------------------------------------------------------
  NodeId make_binary(NodeId lhs, uint32_t op_tok, std::string op, NodeId rhs) {
    NodeId n = make(NodeKind::Binary, t_.nodes[lhs].tokens.begin);
    add(n, lhs);
    add(n, rhs);
    t_.nodes[n].tokens.end = t_.nodes[rhs].tokens.end;
    ExprData e;
    e.op = op_tok;
    e.op_text = std::move(op);
    set(n, std::move(e));
    return n;
  }

  NodeId parse_expression() {
    NodeId lhs = parse_assignment();
    while (at(",") && no_comma_ == 0) {
      uint32_t op = idx();
      advance();
      NodeId rhs = parse_assignment();
      lhs = make_binary(lhs, op, ",", rhs);
    }
    return lhs;
  }

  NodeId parse_initializer_clause() { return at("{") ? parse_init_list() : parse_assignment(); }

  NodeId parse_init_list() {
    uint32_t begin = expect("{");
    NodeId n = make(NodeKind::InitList, begin);
    while (!at("}")) {
      add(n, parse_initializer_clause());
      accept("...");
      if (!accept(",")) break;
    }
    expect("}");
    finish(n);
    return n;
  }

  static bool is_assignment_op(std::string_view s) {
    return s == "=" || s == "+=" || s == "-=" || s == "*=" || s == "/=" || s == "%=" || s == "&=" ||
           s == "|=" || s == "^=" || s == "<<=" || s == ">>=";
  }

  NodeId parse_assignment() {
    if (at("throw")) {
      uint32_t begin = idx();
      NodeId n = make(NodeKind::Throw, begin);
      advance();
      if (!at(";") && !at(")") && !at(",") && !at(":")) add(n, parse_assignment());
      finish(n);
      return n;
    }
    NodeId lhs = parse_conditional();
    if (!eof() && is_assignment_op(peek()) && !(no_gt_ > 0 && at(">>="))) {
      uint32_t op = idx();
      std::string text(peek());
      advance();
      NodeId rhs = parse_initializer_clause();
      return make_binary(lhs, op, text, rhs);
    }
    return lhs;
  }

  NodeId parse_conditional() {
    NodeId c = parse_binary(1);
    if (at("?")) {
      NodeId n = make(NodeKind::Conditional, t_.nodes[c].tokens.begin);
      ExprData e;
      e.op = idx();
      e.op_text = "?";
      advance();
      add(n, c);
      int saved = no_gt_;
      no_gt_ = 0;
      add(n, parse_expression());
      no_gt_ = saved;
      expect(":");
      add(n, parse_assignment());
      finish(n);
      set(n, std::move(e));
      return n;
    }
    return c;
  }

  int precedence(std::string_view s) const {
    if (s == "||") return 1;
    if (s == "&&") return 2;
    if (s == "|") return 3;
    if (s == "^") return 4;
    if (s == "&") return 5;
    if (s == "==" || s == "!=") return 6;
    if (s == "<" || s == "<=" || s == ">=") return 7;
    if (s == ">") return no_gt_ > 0 ? 0 : 7;
    if (s == "<<") return 8;
    if (s == ">>") return no_gt_ > 0 ? 0 : 8;
    if (s == "+" || s == "-") return 9;
    if (s == "*" || s == "/" || s == "%") return 10;
    if (s == ".*" || s == "->*") return 11;
    return 0;
  }

  NodeId parse_binary(int min_prec) {
    NodeId lhs = parse_unary();
    for (;;) {
      if (eof() || half_) break;
      std::string_view s = peek();
      int prec = precedence(s);
      if (prec == 0 || prec < min_prec) break;
      uint32_t op = idx();
      std::string text(s);
      advance();
      NodeId rhs = parse_binary(prec + 1);
      lhs = make_binary(lhs, op, text, rhs);
    }
    return lhs;
  }

  bool can_start_operand(int k) const {
    if (eof(k)) return false;
    TokenKind tk = kind(k);
    std::string_view s = peek(k);
    if (tk == TokenKind::Identifier || tk == TokenKind::Literal) return true;
    if (tk == TokenKind::Keyword)
      return s == "this" || s == "true" || s == "false" || s == "nullptr" || s == "sizeof" ||
             s == "new" || s == "static_cast" || s == "const_cast" || s == "reinterpret_cast" ||
             s == "dynamic_cast" || is_type_keyword(s);
    return s == "(" || s == "!" || s == "~" || s == "::" || s == "++" || s == "--" || s == "-" ||
           s == "+" || s == "*" || s == "&" || s == "[";
  }

  // `(type)expr`
  bool try_cstyle_cast(NodeId* out) {
    if (!at("(")) return false;
    std::string_view s = peek(1);
    bool candidate = is_type_keyword(s) || s == "const" || s == "volatile" || s == "struct" ||
                     s == "unsigned" || s == "signed";
    if (!candidate && (kind(1) == TokenKind::Identifier || s == "::")) candidate = true;
    if (!candidate) return false;
    State st = save();
    try {
      uint32_t begin = idx();
      advance();
      uint32_t tb = idx();
      DeclSpec ds = parse_decl_spec(Scope::Param, true);
      if (ds.type.empty()) throw ParseFail{};
      std::string tname = t_.compact_text(ds.type);
      bool kw = is_type_keyword(t_.tok(ds.type.begin)) || t_.tok(ds.type.begin) == "struct";
      if (!kw && !known_type(tname)) throw ParseFail{};
      Declarator d = parse_declarator(true, Scope::Param);
      TokenSpan type = span_from(tb);
      expect(")");
      if (!can_start_operand(0)) throw ParseFail{};
      if (!kw && !d.ops.empty() && (at("*") || at("&") || at("-") || at("+"))) throw ParseFail{};
      if (!kw && d.ops.empty() && (at("*") || at("&") || at("-") || at("+") || at("["))) throw ParseFail{};
      NodeId n = make(NodeKind::Cast, begin);
      add(n, parse_unary());
      finish(n);
      ExprData e;
      e.cast_kind = "c-style";
      e.type = type;
      e.type_spec = ds;
      e.type_decl = std::move(d);
      set(n, std::move(e));
      *out = n;
      return true;
    } catch (ParseFail&) {
      restore(st);
      return false;
    }
  }

  NodeId parse_unary() {
    uint32_t begin = idx();
    std::string_view s = peek();
    if (s == "++" || s == "--" || s == "*" || s == "&" || s == "+" || s == "-" || s == "!" || s == "~" ||
        s == "&&") {
      NodeId n = make(NodeKind::Unary, begin);
      ExprData e;
      e.op = begin;
      e.op_text = std::string(s);
      advance();
      add(n, parse_unary());
      finish(n);
      set(n, std::move(e));
      return n;
    }
    if (s == "sizeof") {
      NodeId n = make(NodeKind::SizeOf, begin);
      advance();
      accept("...");
      ExprData e;
      e.op = begin;
      e.op_text = "sizeof";
      if (at("(")) {
        State st = save();
        try {
          advance();
          uint32_t tb = idx();
          DeclSpec ds = parse_decl_spec(Scope::Param, true);
          if (ds.type.empty()) throw ParseFail{};
          std::string tname = t_.compact_text(ds.type);
          if (!is_type_keyword(t_.tok(ds.type.begin)) && !known_type(tname)) throw ParseFail{};
          e.type_decl = parse_declarator(true, Scope::Param);
          e.type_spec = ds;
          e.type = span_from(tb);
          expect(")");
          finish(n);
          set(n, std::move(e));
          return n;
        } catch (ParseFail&) {
          restore(st);
        }
      }
      add(n, parse_unary());
      finish(n);
      set(n, std::move(e));
      return n;
    }
    if (s == "new" || (s == "::" && at("new", 1))) return parse_new();
    if (s == "delete" || (s == "::" && at("delete", 1))) {
      NodeId n = make(NodeKind::Delete, begin);
      accept("::");
      advance();
      if (at("[") && at("]", 1)) {
        advance();
        advance();
      }
      add(n, parse_unary());
      finish(n);
      return n;
    }
    NodeId cast;
    if (try_cstyle_cast(&cast)) return cast;
    return parse_postfix();
  }

  NodeId parse_new() {
    uint32_t begin = idx();
    NodeId n = make(NodeKind::New, begin);
    accept("::");
    expect("new");
    ExprData e;
    if (at("(")) {
      // placement args or parenthesized type-id
      State st = save();
      bool type_paren = false;
      try {
        advance();
        uint32_t tb = idx();
        DeclSpec ds = parse_decl_spec(Scope::Param, true);
        if (ds.type.empty()) throw ParseFail{};
        e.type_decl = parse_declarator(true, Scope::Param);
        e.type_spec = ds;
        e.type = span_from(tb);
        expect(")");
        type_paren = true;
      } catch (ParseFail&) {
        restore(st);
      }
      if (!type_paren) {
        skip_parens();
      }
    }
    if (!e.type.valid()) {
      uint32_t tb = idx();
      if (at("auto")) e.auto_tok = idx();
      DeclSpec ds = parse_decl_spec(Scope::Param, true);
      if (ds.type.empty()) throw ParseFail{};
      Declarator d;
      uint32_t db = idx();
      std::vector<DeclOp> ptrs;
      while (at("*") || at("&")) {
        DeclOp op;
        op.kind = at("*") ? DeclOp::Kind::Pointer : DeclOp::Kind::LRef;
        op.tok = idx();
        advance();
        while (at("const")) {
          op.is_const = true;
          advance();
        }
        ptrs.push_back(std::move(op));
      }
      std::vector<DeclOp> arrays;
      while (at("[")) {
        DeclOp op;
        op.kind = DeclOp::Kind::Array;
        op.tok = idx();
        advance();
        uint32_t eb = idx();
        add(n, parse_expression());
        op.extent = span_from(eb);
        op.close = expect("]");
        arrays.push_back(std::move(op));
      }
      for (auto& op : arrays) d.ops.push_back(std::move(op));
      for (auto it = ptrs.rbegin(); it != ptrs.rend(); ++it) d.ops.push_back(std::move(*it));
      d.span = span_from(db);
      e.type_spec = ds;
      e.type_decl = std::move(d);
      e.type = span_from(tb);
    }
    if (at("(")) {
      advance();
      if (!at(")")) {
        for (;;) {
          add(n, parse_initializer_clause());
          if (!accept(",")) break;
        }
      }
      expect(")");
    } else if (at("{")) {
      add(n, parse_init_list());
    }
    finish(n);
    set(n, std::move(e));
    return n;
  }

  NodeId parse_call_args(NodeId callee) {
    NodeId n = make(NodeKind::Call, t_.nodes[callee].tokens.begin);
    add(n, callee);
    expect("(");
    int saved_gt = no_gt_;
    int saved_comma = no_comma_;
    no_gt_ = 0;
    no_comma_ = 1;
    if (!at(")")) {
      for (;;) {
        add(n, parse_initializer_clause());
        accept("...");
        if (!accept(",")) break;
      }
    }
    no_gt_ = saved_gt;
    no_comma_ = saved_comma;
    expect(")");
    finish(n);
    set(n, ExprData{});
    return n;
  }

  NodeId parse_postfix() {
    NodeId e = parse_primary();
    for (;;) {
      if (half_) break;
      if (at("(")) {
        e = parse_call_args(e);
        continue;
      }
      if (at("[")) {
        NodeId n = make(NodeKind::Subscript, t_.nodes[e].tokens.begin);
        add(n, e);
        advance();
        int saved = no_gt_;
        no_gt_ = 0;
        add(n, parse_expression());
        no_gt_ = saved;
        expect("]");
        finish(n);
        set(n, ExprData{});
        e = n;
        continue;
      }
      if (at(".") || at("->")) {
        NodeId n = make(NodeKind::Member, t_.nodes[e].tokens.begin);
        add(n, e);
        ExprData d;
        d.op = idx();
        d.op_text = std::string(peek());
        advance();
        accept("template");
        if (at("~")) {
          advance();
          d.name = "~";
        }
        if (at("operator")) {
          d.name_tok = idx();
          d.name = parse_operator_name();
        } else {
          if (!at_ident()) throw ParseFail{};
          d.name_tok = idx();
          uint32_t nb = idx();
          QName q = parse_qualified_name(false);
          d.name += q.text;
          if (at("<") && known_template(q.last)) parse_template_args(&d.template_args);
          (void)nb;
        }
        finish(n);
        set(n, std::move(d));
        e = n;
        continue;
      }
      if (at("++") || at("--")) {
        NodeId n = make(NodeKind::Unary, t_.nodes[e].tokens.begin);
        add(n, e);
        ExprData d;
        d.op = idx();
        d.op_text = std::string(peek());
        d.postfix = true;
        advance();
        finish(n);
        set(n, std::move(d));
        e = n;
        continue;
      }
      break;
    }
    return e;
  }

  NodeId parse_lambda() {
    uint32_t begin = idx();
    NodeId n = make(NodeKind::Lambda, begin);
    LambdaData l;
    l.lbracket = expect("[");
    bool first = true;
    while (!at("]")) {
      if (!first) expect(",");
      first = false;
      Capture c;
      c.tok = idx();
      if (at("=") && (at(",", 1) || at("]", 1))) {
        l.capture_default = LambdaData::Default::Copy;
        advance();
        continue;
      }
      if (at("&") && (at(",", 1) || at("]", 1))) {
        l.capture_default = LambdaData::Default::Ref;
        advance();
        continue;
      }
      if (at("this")) {
        c.is_this = true;
        c.name = "this";
        advance();
        l.captures.push_back(std::move(c));
        continue;
      }
      if (at("*") && at("this", 1)) {
        c.is_this = true;
        c.name = "*this";
        advance();
        advance();
        l.captures.push_back(std::move(c));
        continue;
      }
      if (accept("&")) c.by_ref = true;
      if (!at_ident()) throw ParseFail{};
      c.tok = idx();
      c.name = std::string(peek());
      advance();
      accept("...");
      if (at("=") || at("(") || at("{")) {
        c.has_init = true;
        if (accept("=")) {
          size_t mark = t_.nodes.size();
          parse_initializer_clause();
          t_.nodes.resize(mark);
        } else if (at("(")) {
          skip_parens();
        } else {
          size_t mark = t_.nodes.size();
          parse_init_list();
          t_.nodes.resize(mark);
        }
      }
      l.captures.push_back(std::move(c));
    }
    l.rbracket = expect("]");
    int saved_gt = no_gt_;
    int saved_comma = no_comma_;
    no_gt_ = 0;
    no_comma_ = 0;
    if (at("(")) {
      DeclOp op;
      parse_params(op);
      l.lparen = op.tok;
      l.rparen = op.close;
      l.params = std::move(op.params);
      for (auto& p : l.params)
        if (!p.spec.empty() && t_.tok(p.spec.begin) == "auto") l.generic = true;
    }
    for (;;) {
      if (accept("mutable")) {
        l.is_mutable = true;
      } else if (at("noexcept")) {
        advance();
        if (at("(")) skip_parens();
      } else if (at("constexpr")) {
        advance();
      } else {
        break;
      }
    }
    if (at("->")) {
      l.arrow = idx();
      advance();
      uint32_t tb = idx();
      DeclSpec ds = parse_decl_spec(Scope::Param, true);
      if (ds.type.empty()) throw ParseFail{};
      parse_declarator(true, Scope::Param);
      l.ret = span_from(tb);
    }
    if (!at("{")) throw ParseFail{};
    l.body = parse_compound();
    add(n, l.body);
    no_gt_ = saved_gt;
    no_comma_ = saved_comma;
    finish(n);
    set(n, std::move(l));
    return n;
  }

  NodeId parse_primary() {
    uint32_t begin = idx();
    if (eof()) throw ParseFail{};
    std::string_view s = peek();
    TokenKind k = kind();
    if (k == TokenKind::Literal) {
      NodeId n = make(NodeKind::Literal, begin);
      advance();
      while (kind() == TokenKind::Literal && (s.find('"') != std::string_view::npos) &&
             peek().find('"') != std::string_view::npos)
        advance();
      finish(n);
      set(n, ExprData{});
      return n;
    }
    if (s == "true" || s == "false" || s == "nullptr") {
      NodeId n = make(NodeKind::Literal, begin);
      advance();
      finish(n);
      set(n, ExprData{});
      return n;
    }
    if (s == "this") {
      NodeId n = make(NodeKind::This, begin);
      advance();
      finish(n);
      return n;
    }
    if (s == "(") {
      NodeId n = make(NodeKind::Paren, begin);
      advance();
      int saved_gt = no_gt_;
      int saved_comma = no_comma_;
      no_gt_ = 0;
      no_comma_ = 0;
      add(n, parse_expression());
      no_gt_ = saved_gt;
      no_comma_ = saved_comma;
      expect(")");
      finish(n);
      return n;
    }
    if (s == "[") return parse_lambda();
    if (s == "{") return parse_init_list();
    if (s == "static_cast" || s == "dynamic_cast" || s == "const_cast" || s == "reinterpret_cast") {
      NodeId n = make(NodeKind::Cast, begin);
      ExprData e;
      e.cast_kind = std::string(s);
      advance();
      expect("<");
      int saved = no_gt_;
      ++no_gt_;
      uint32_t tb = idx();
      e.type_spec = parse_decl_spec(Scope::Param, true);
      if (e.type_spec.type.empty()) throw ParseFail{};
      e.type_decl = parse_declarator(true, Scope::Param);
      e.type = span_from(tb);
      no_gt_ = saved;
      if (!at_close_angle()) throw ParseFail{};
      consume_close_angle();
      expect("(");
      int sg = no_gt_;
      no_gt_ = 0;
      add(n, parse_expression());
      no_gt_ = sg;
      expect(")");
      finish(n);
      set(n, std::move(e));
      return n;
    }
    if (s == "typeid" || s == "alignof" || s == "noexcept" || s == "decltype") {
      NodeId n = make(NodeKind::SizeOf, begin);
      ExprData e;
      e.op_text = std::string(s);
      advance();
      skip_parens();
      finish(n);
      set(n, std::move(e));
      return n;
    }
    if (is_type_keyword(s) || s == "typename") {
      NodeId n = make(NodeKind::Construct, begin);
      ExprData e;
      uint32_t tb = idx();
      e.type_spec = parse_decl_spec(Scope::Param, true);
      e.type = span_from(tb);
      if (at("(")) {
        advance();
        if (!at(")")) {
          for (;;) {
            add(n, parse_initializer_clause());
            if (!accept(",")) break;
          }
        }
        expect(")");
      } else if (at("{")) {
        add(n, parse_init_list());
      } else {
        throw ParseFail{};
      }
      finish(n);
      set(n, std::move(e));
      return n;
    }
    if (k == TokenKind::Identifier || s == "::" || s == "operator" || s == "~") {
      if (s == "operator") {
        NodeId n = make(NodeKind::Identifier, begin);
        ExprData e;
        e.name = parse_operator_name();
        e.name_tok = begin;
        finish(n);
        set(n, std::move(e));
        return n;
      }
      if (s == "~") {
        advance();
        if (!at_ident()) throw ParseFail{};
      }
      QName q = parse_qualified_name(false);
      ExprData e;
      e.name = q.text;
      e.name_tok = q.last_tok;
      if (known_type(q.text) && !q.global && (at("(") || at("{")) && !function_templates_.contains(q.last) &&
          !(q.text.find('<') == std::string::npos && templates_.contains(q.last) && !types_.contains(q.last))) {
        if (kStdTemplates.contains(q.last) && !kStdTypes.contains(q.last) && is_std(q.text)) {
          // std::max(...) and friends are functions
        } else {
          NodeId n = make(NodeKind::Construct, begin);
          e.type = span_from(begin);
          if (at("(")) {
            advance();
            int sg = no_gt_;
            int sc = no_comma_;
            no_gt_ = 0;
            no_comma_ = 1;
            if (!at(")")) {
              for (;;) {
                add(n, parse_initializer_clause());
                if (!accept(",")) break;
              }
            }
            no_gt_ = sg;
            no_comma_ = sc;
            expect(")");
          } else {
            add(n, parse_init_list());
          }
          finish(n);
          set(n, std::move(e));
          return n;
        }
      }
      NodeId n = make(NodeKind::Identifier, begin);
      finish(n);
      set(n, std::move(e));
      return n;
    }
    throw ParseFail{};
  }

  SyntaxTree& t_;
  const ParseContext& ctx_;
  std::vector<uint32_t>& sig_;
  size_t p_ = 0;
  bool half_ = false;
  int no_gt_ = 0;
  int no_comma_ = 0;
  std::set<std::string, std::less<>> types_;
  std::set<std::string, std::less<>> templates_;
  std::set<std::string, std::less<>> function_templates_;
  std::vector<std::string> class_stack_;
  std::vector<NodeId> brace_lists_;
};

// Marks `#if 0` / `#if 1 ... #else` dead regions: token spans from the
// opening directive up to (not including) the directive that ends them.
std::vector<TokenSpan> find_dead_regions(const std::vector<Token>& tokens) {
  std::vector<TokenSpan> out;
  struct Frame {
    bool dead_here;       // this frame started a dead region
    bool then_live_one;   // `#if 1`: the else branch is dead
    uint32_t start;
  };
  std::vector<Frame> stack;
  int dead_depth = 0;  // >0 while inside a dead region
  uint32_t dead_start = 0;
  for (uint32_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::Preprocessor) continue;
    std::string_view name = directive_name(tokens[i].text);
    std::string_view arg = directive_argument(tokens[i].text);
    while (!arg.empty() && (arg.back() == ' ' || arg.back() == '\t' || arg.back() == '\r')) arg.remove_suffix(1);
    if (name == "if" || name == "ifdef" || name == "ifndef") {
      if (dead_depth > 0) {
        ++dead_depth;
        continue;
      }
      Frame f{false, false, i};
      if (name == "if" && arg == "0") {
        f.dead_here = true;
        dead_depth = 1;
        dead_start = i;
      } else if (name == "if" && arg == "1") {
        f.then_live_one = true;
      }
      stack.push_back(f);
    } else if (name == "else" || name == "elif") {
      if (dead_depth > 1) continue;
      if (stack.empty()) continue;
      Frame& f = stack.back();
      if (dead_depth == 1) {
        out.push_back({dead_start, i});
        dead_depth = 0;
        f.dead_here = false;
      } else if (f.then_live_one) {
        f.then_live_one = false;
        f.dead_here = true;
        dead_depth = 1;
        dead_start = i + 1;
      }
    } else if (name == "endif") {
      if (dead_depth > 1) {
        --dead_depth;
        continue;
      }
      if (dead_depth == 1 && !stack.empty()) {
        if (dead_start < i) out.push_back({dead_start, i});
        dead_depth = 0;
      }
      if (!stack.empty()) stack.pop_back();
    }
  }
  if (dead_depth > 0) out.push_back({dead_start, static_cast<uint32_t>(tokens.size())});
  return out;
}

}  // namespace

SyntaxTree parse_source(SourceText source, const ParseContext& context) {
  SyntaxTree tree;
  tree.source = std::move(source);
  LexResult lex = tokenize(tree.content());
  tree.tokens = std::move(lex.tokens);
  tree.diagnostics = std::move(lex.diagnostics);

  std::vector<TokenSpan> dead = find_dead_regions(tree.tokens);
  auto in_dead = [&](uint32_t i) {
    for (const auto& r : dead)
      if (r.contains(i)) return true;
    return false;
  };
  int attr_depth = 0;
  for (uint32_t i = 0; i < tree.tokens.size(); ++i) {
    const Token& t = tree.tokens[i];
    if (t.is_attribute_open()) {
      ++attr_depth;
      continue;
    }
    if (t.is_attribute_close() && attr_depth > 0) {
      --attr_depth;
      continue;
    }
    if (attr_depth > 0 || t.is_trivia() || in_dead(i)) continue;
    tree.significant.push_back(i);
  }

  Parser parser(tree, context);
  parser.dead_regions_ = dead;
  tree.dead_regions = dead;
  parser.run();
  return tree;
}

}  // namespace retrofit
