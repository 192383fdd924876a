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

#include "doctest.h"
#include "retrofit/semantics.hpp"
#include "test_util.hpp"

using namespace retrofit;
using retrofit::test::find_node;
using retrofit::test::find_variable;
using retrofit::test::parse;

namespace {

// Rendered deduced type of the declarator `name` in `code`.
std::string deduced(const std::string& code, std::string_view name) {
  SyntaxTree t = parse(code);
  SemanticModel sema(t);
  auto [node, index] = find_variable(t, name);
  REQUIRE(node != kNoNode);
  TypeResult r = sema.declared_type(NodeRef{&t, node}, index);
  if (!r) return "error:" + std::string(to_string(r.error.kind));
  return render(*r, std::string(name));
}

SemaError::Kind deduce_error(const std::string& code, std::string_view name) {
  SyntaxTree t = parse(code);
  SemanticModel sema(t);
  auto [node, index] = find_variable(t, name);
  REQUIRE(node != kNoNode);
  return sema.declared_type(NodeRef{&t, node}, index).error.kind;
}

}  // namespace

TEST_CASE("library model parses cleanly") {
  const SyntaxTree& lib = library_model_tree();
  CHECK(!lib.untransformable);
  int opaque = 0;
  lib.walk([&](NodeId id) { opaque += lib.node(id).kind == NodeKind::Opaque; });
  CHECK(opaque == 0);
}

TEST_CASE("literal and identifier deduction") {
  CHECK(deduced("void f() { auto a = 32; }", "a") == "int a");
  CHECK(deduced("void f() { auto d = 1.5; }", "d") == "double d");
  CHECK(deduced("void f() { auto d = 1.5f; }", "d") == "float d");
  CHECK(deduced("void f() { auto u = 3u; }", "u") == "unsigned u");
  CHECK(deduced("void f() { auto l = 3ul; }", "l") == "unsigned long l");
  CHECK(deduced("void f() { auto b = true; }", "b") == "bool b");
  CHECK(deduced("void f() { auto c = 'x'; }", "c") == "char c");
  CHECK(deduced("void f() { auto s = \"ab\"; }", "s") == "const char *s");
  CHECK(deduced("void f() { int a = 1; auto p = &a; }", "p") == "int *p");
}

TEST_CASE("function names decay to function pointers") {
  CHECK(deduced("int foo(int a) { return a; }\nvoid g() { auto fp = foo; }", "fp") == "int (*fp)(int)");
}

TEST_CASE("new auto and pointer patterns") {
  std::string code = "void f() { int a = 1; auto *b = new auto(&a); }";
  CHECK(deduced(code, "b") == "int **b");
  CHECK(deduced("void f() { int a = 1; auto *y = &a, **z = &y; }", "y") == "int *y");
  CHECK(deduced("void f() { int a = 1; auto *y = &a, **z = &y; }", "z") == "int **z");
  CHECK(deduce_error("void f() { int a = 1; auto *p = a; }", "p") == SemaError::Kind::DeductionMismatch);
}

TEST_CASE("reference patterns") {
  std::string foo = "int foo(int v) { return v; }\n";
  CHECK(deduced(foo + "void g() { const auto & y = foo(1); }", "y") == "const int &y");
  CHECK(deduced("const int& h();\nvoid g() { auto x = h(); }", "x") == "int x");
  CHECK(deduced("const int& h();\nvoid g() { auto& x = h(); }", "x") == "const int &x");
  CHECK(deduced("void g() { const int c = 1; auto x = c; }", "x") == "int x");
}

TEST_CASE("plain auto never yields a top-level reference") {
  const char* inits[] = {"r", "h()", "*p", "(r)", "arr[0]", "s.m", "v[1]"};
  for (const char* init : inits) {
    std::string code =
        "struct S { int m; };\nint& h();\n#include <vector>\nvoid g(int& r, int* p, S& s) { int arr[2]; "
        "std::vector<int> v; auto x = " +
        std::string(init) + "; }";
    SyntaxTree t = parse(code);
    SemanticModel sema(t);
    auto [node, index] = find_variable(t, "x");
    TypeResult r = sema.declared_type(NodeRef{&t, node}, index);
    CAPTURE(init);
    REQUIRE(r);
    CHECK(r->kind != TypeRepr::Kind::LRef);
    CHECK(render(*r, "x") == "int x");
  }
}

TEST_CASE("unresolved and unsupported initializers") {
  CHECK(deduce_error("void f() { auto a = missing; }", "a") == SemaError::Kind::UnresolvedIdentifier);
  CHECK(deduce_error("void f() { auto a = nullptr; }", "a") == SemaError::Kind::UnsupportedExpression);
  CHECK(deduce_error("void f() { auto l = [](){}; }", "l") == SemaError::Kind::UnsupportedExpression);
}

TEST_CASE("class members and library containers") {
  std::string code =
      "#include <vector>\n#include <map>\n#include <string>\n"
      "struct P { int x; double y; int get() const; };\n"
      "void f() {\n"
      "  P p; const P cp = p;\n"
      "  auto a = p.y;\n"
      "  auto b = cp.get();\n"
      "  std::vector<int> v;\n"
      "  auto it = v.begin();\n"
      "  auto n = v.size();\n"
      "  auto e = *it;\n"
      "  std::map<std::string, int> m;\n"
      "  auto mi = m.find(\"k\");\n"
      "  auto key = mi->first;\n"
      "  auto val = m[\"k\"];\n"
      "}\n";
  CHECK(deduced(code, "a") == "double a");
  CHECK(deduced(code, "b") == "int b");
  CHECK(deduced(code, "it") == "std::vector<int>::iterator it");
  CHECK(deduced(code, "n") == "std::vector<int>::size_type n");
  CHECK(deduced(code, "e") == "int e");
  CHECK(deduced(code, "mi") == "std::map<std::string, int>::iterator mi");
  CHECK(deduced(code, "key") == "std::string key");
  CHECK(deduced(code, "val") == "int val");
}

TEST_CASE("using namespace std makes library names visible") {
  std::string code = "#include <vector>\nusing namespace std;\nvoid f() { vector<double> v; auto x = v[0]; }";
  CHECK(deduced(code, "x") == "double x");
}

TEST_CASE("trailing return types") {
  SyntaxTree t = parse("auto foo(int a) -> decltype(a) { return a; }\nauto f() -> double { return 1; }\n"
                       "auto h(int a, long b) -> decltype(a + b) { return a; }\n"
                       "auto k(int a) -> decltype(a * 2) { return a; }\n");
  SemanticModel sema(t);
  NodeId foo = find_node(t, NodeKind::Function, "auto foo");
  NodeId f = find_node(t, NodeKind::Function, "auto f()");
  NodeId h = find_node(t, NodeKind::Function, "auto h");
  NodeId k = find_node(t, NodeKind::Function, "auto k");
  REQUIRE(foo != kNoNode);
  CHECK(render(*sema.deduce_trailing_return(foo)) == "int");
  CHECK(render(*sema.deduce_trailing_return(f)) == "double");
  CHECK(render(*sema.deduce_trailing_return(h)) == "long");
  CHECK(sema.deduce_trailing_return(k).error.kind == SemaError::Kind::UnsupportedDecltypeOperand);
}

TEST_CASE("templates are detected") {
  SyntaxTree t = parse("template <class T> auto g(T& r) -> decltype(r) { return r; }\n");
  SemanticModel sema(t);
  NodeId g = find_node(t, NodeKind::Function);
  CHECK(sema.in_template(g));
  CHECK(!sema.deduce_trailing_return(g));
}

TEST_CASE("range element types") {
  SyntaxTree t = parse(
      "#include <vector>\nvoid f() {\n  int array[4] = {1, 2, 3, 4};\n  for (int x : array) {}\n"
      "  std::vector<int> v;\n  for (auto& y : v) {}\n  const std::vector<int>& cv = v;\n  for (auto z : cv) {}\n"
      "  int bad = 0;\n  for (int w : bad) {}\n  int a[0];\n  for (int q : a) {}\n}\n");
  SemanticModel sema(t);
  std::vector<NodeId> loops;
  t.walk([&](NodeId id) {
    if (t.node(id).kind == NodeKind::RangeFor) loops.push_back(id);
  });
  REQUIRE(loops.size() == 5);
  auto plan = [&](size_t i) { return sema.range_element_type(t.get<RangeForData>(loops[i])->range); };

  RangeResult arr = plan(0);
  REQUIRE(arr);
  CHECK(arr.plan->kind == RangePlan::Kind::Array);
  CHECK(arr.plan->extent == 4);
  CHECK(render(arr.plan->iterator) == "int *");

  RangeResult vec = plan(1);
  REQUIRE(vec);
  CHECK(vec.plan->kind == RangePlan::Kind::MemberBeginEnd);
  CHECK(render(vec.plan->iterator) == "std::vector<int>::iterator");
  CHECK(render(*sema.declared_type(NodeRef{&t, loops[1]}, 0), "y") == "int &y");

  RangeResult cvec = plan(2);
  REQUIRE(cvec);
  CHECK(render(cvec.plan->iterator) == "std::vector<int>::const_iterator");
  CHECK(render(*sema.declared_type(NodeRef{&t, loops[2]}, 0), "z") == "int z");

  CHECK(plan(3).error.kind == SemaError::Kind::NoRangeProtocol);

  RangeResult empty = plan(4);
  REQUIRE(empty);
  CHECK(empty.plan->extent == 0);
}

TEST_CASE("free begin and end") {
  SyntaxTree t = parse(
      "namespace N { struct Bag { int items[3]; };\nint* begin(Bag& b);\nint* end(Bag& b); }\n"
      "void f(N::Bag& bag) { for (int x : bag) {} }\n");
  SemanticModel sema(t);
  NodeId loop = find_node(t, NodeKind::RangeFor);
  RangeResult r = sema.range_element_type(t.get<RangeForData>(loop)->range);
  REQUIRE(r);
  CHECK(r.plan->kind == RangePlan::Kind::FreeBeginEnd);
  CHECK(render(r.plan->iterator) == "int *");
}

TEST_CASE("scopes resolve the innermost binding") {
  SyntaxTree t = parse("int x = 1;\nvoid f() {\n  double x = 2;\n  { char x = 'a'; auto i = x; }\n  auto o = x;\n}\n"
                       "void g() { auto gl = x; }\n");
  SemanticModel sema(t);
  auto type_of = [&](std::string_view name) {
    auto [node, index] = find_variable(t, name);
    return render(*sema.declared_type(NodeRef{&t, node}, index));
  };
  CHECK(type_of("i") == "char");
  CHECK(type_of("o") == "double");
  CHECK(type_of("gl") == "int");
}

TEST_CASE("declaration order is respected") {
  CHECK(deduce_error("void f() { auto a = b; int b = 0; }", "a") == SemaError::Kind::UnresolvedIdentifier);
}

TEST_CASE("typedefs, enums and nested types") {
  std::string code =
      "typedef unsigned long size;\nenum Color { Red, Green };\n"
      "namespace geo { struct Pt { typedef double coord; coord x; }; }\n"
      "void f() { size s = 1; auto a = s; auto c = Green; geo::Pt p; auto px = p.x; }\n";
  CHECK(deduced(code, "a") == "size a");
  CHECK(deduced(code, "c") == "Color c");
  CHECK(deduced(code, "px") == "geo::Pt::coord px");
}

TEST_CASE("arithmetic follows the usual conversions") {
  CHECK(deduced("void f() { int i = 1; double d = 2; auto x = i + d; }", "x") == "double x");
  CHECK(deduced("void f() { char c = 1; auto x = c + c; }", "x") == "int x");
  CHECK(deduced("void f() { long l = 1; unsigned u = 2; auto x = l * u; }", "x") == "long x");
  CHECK(deduced("void f() { int i = 1; auto x = i < 2; }", "x") == "bool x");
  CHECK(deduced("void f() { int a[3]; auto x = a + 1; }", "x") == "int *x");
}

TEST_CASE("deduce_auto rules") {
  TypeRepr placeholder = TypeRepr::fundamental("auto");
  TypeRepr ci = add_const(TypeRepr::fundamental("int"));
  CHECK(render(*deduce_auto(placeholder, TypeRepr::lref(ci))) == "int");
  CHECK(render(*deduce_auto(TypeRepr::lref(placeholder), TypeRepr::lref(ci))) == "const int &");
  CHECK(render(*deduce_auto(TypeRepr::lref(add_const(placeholder)), TypeRepr::fundamental("int"))) ==
        "const int &");
  CHECK(render(*deduce_auto(add_const(placeholder), TypeRepr::fundamental("int"))) == "const int");
  CHECK(deduce_auto(TypeRepr::pointer(placeholder), TypeRepr::fundamental("int")).error.kind ==
        SemaError::Kind::DeductionMismatch);
  CHECK(render(*deduce_auto(placeholder, TypeRepr::array(ci, 3))) == "const int *");
}

TEST_CASE("rendered types parse back to themselves") {
  using T = TypeRepr;
  T i = T::fundamental("int");
  T d = T::fundamental("double");
  T vec = T::named("std::vector", {i});
  std::vector<T> samples = {
      i,
      T::fundamental("unsigned long"),
      add_const(i),
      T::pointer(i),
      T::pointer(T::pointer(add_const(T::fundamental("char")))),
      add_const(T::pointer(i)),
      T::lref(add_const(d)),
      T::array(i, 4),
      T::array(T::array(d, 2), 3),
      T::pointer(T::array(i, 4)),
      T::pointer(T::function(i, {i})),
      T::pointer(T::function(T::fundamental("void"), {T::lref(i), T::pointer(d)})),
      T::lref(T::function(d, {})),
      vec,
      T::named("std::map", {T::named("std::string"), vec}),
      T::member_type(vec, "iterator"),
      T::pointer(T::member_type(vec, "const_iterator")),
  };
  for (const T& sample : samples) {
    std::string text = render(sample, "x");
    CAPTURE(text);
    std::string code = "#include <vector>\n#include <map>\n#include <string>\n";
    bool is_ref = sample.kind == T::Kind::LRef;
    code += "void f() { " + text + (is_ref ? " = *(" + render(T::pointer(sample.inner())) + ")0" : "") + "; }";
    SyntaxTree t = parse(code);
    SemanticModel sema(t);
    auto [node, index] = find_variable(t, "x");
    REQUIRE(node != kNoNode);
    TypeResult back = sema.declared_type(NodeRef{&t, node}, index, false);
    REQUIRE(back);
    CHECK(*back == sample);
    CHECK(render(*back, "x") == text);
  }
}
