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

bool lvalue_like(const SyntaxTree& t, NodeId e) {
  const Node& n = t.node(e);
  switch (n.kind) {
    case NodeKind::Identifier:
    case NodeKind::Member:
    case NodeKind::Subscript:
      return true;
    case NodeKind::Paren:
      return !n.children.empty() && lvalue_like(t, n.children.front());
    case NodeKind::Unary: {
      const auto* d = t.get<ExprData>(e);
      return d && d->op_text == "*" && !d->postfix;
    }
    default:
      return false;
  }
}

bool name_used(const SyntaxTree& t, TokenSpan span, std::string_view name) {
  for (uint32_t i = span.begin; i < span.end; ++i)
    if (t.tokens[i].kind == TokenKind::Identifier && t.tokens[i].text == name) return true;
  return false;
}

}  // namespace

TransformResult lower_range_for(const SyntaxTree& tree, const SemanticModel& sema) {
  TransformResult r;
  if (tree.root == kNoNode) return r;
  std::map<NodeId, int> lowered;  // per enclosing function
  tree.walk([&](NodeId id) {
    const auto* rf = tree.get<RangeForData>(id);
    if (!rf) return;
    const Node& node = tree.node(id);
    if (sema.in_template(id)) {
      r.warn(tree, rf->for_tok, Feature::RangeFor, "range-for in a template");
      return;
    }
    RangeResult plan = sema.range_element_type(rf->range);
    if (!plan) {
      r.warn(tree, rf->for_tok, Feature::RangeFor, std::string(to_string(plan.error.kind)) + ": " + plan.error.message);
      return;
    }
    if (!lvalue_like(tree, rf->range)) {
      r.warn(tree, rf->for_tok, Feature::RangeFor, "range expression is not an lvalue");
      return;
    }
    std::string decl;
    if (rf->spec.auto_tok != kNoToken) {
      TypeResult ty = sema.declared_type(NodeRef{&tree, id}, 0);
      if (!ty) {
        r.warn(tree, rf->for_tok, Feature::RangeFor, std::string(to_string(ty.error.kind)) + ": " + ty.error.message);
        return;
      }
      decl = render(*ty, rf->decl.name_text);
    } else {
      uint32_t b = tree.begin_offset(rf->spec.span);
      decl = std::string(tree.content().substr(b, tree.end_offset(rf->decl.span) - b));
    }

    NodeId fn = tree.enclosing_function(id);
    TokenSpan scope = fn == kNoNode ? tree.node(tree.root).tokens : tree.node(fn).tokens;
    int k = ++lowered[fn];
    while (name_used(tree, scope, "__begin" + std::to_string(k)) || name_used(tree, scope, "__end" + std::to_string(k)))
      k = ++lowered[fn];
    std::string begin_name = "__begin" + std::to_string(k);
    std::string end_name = "__end" + std::to_string(k);

    std::string range(tree.text(rf->range));
    std::string b, e;
    switch (plan.plan->kind) {
      case RangePlan::Kind::Array:
        b = "(" + range + ")";
        e = "(" + range + ")+" + std::to_string(plan.plan->extent);
        break;
      case RangePlan::Kind::MemberBeginEnd:
        b = "(" + range + ").begin()";
        e = "(" + range + ").end()";
        break;
      case RangePlan::Kind::FreeBeginEnd:
        b = "begin(" + range + ")";
        e = "end(" + range + ")";
        break;
    }
    std::string ind = detail::indent_of(tree, rf->for_tok);
    NodeId parent = node.parent;
    bool wrap = parent == kNoNode || tree.node(parent).kind != NodeKind::Compound;
    std::string head = render(plan.plan->iterator, begin_name) + " = " + b + ";\n" + ind +
                       render(plan.plan->iterator, end_name) + " = " + e + ";\n" + ind;
    if (wrap) head = "{ " + head;
    size_t from = r.edits.size();
    r.edits.push_back(detail::insert_at(detail::tok_begin(tree, rf->for_tok), head, Feature::RangeFor));
    r.edits.push_back(detail::replace_tokens(tree, rf->lparen, rf->rparen,
                                             "(;" + begin_name + " != " + end_name + "; ++" + begin_name + ")",
                                             Feature::RangeFor));
    std::string bind = decl + " = *" + begin_name + ";";
    const Node& body = tree.node(rf->body);
    if (body.kind == NodeKind::Compound) {
      const auto& sd = *tree.get<StmtData>(rf->body);
      r.edits.push_back(detail::insert_at(detail::tok_end(tree, sd.lbrace), "\n" + ind + "  " + bind, Feature::RangeFor));
    } else {
      r.edits.push_back(detail::insert_at(tree.begin_offset(rf->body), "{ " + bind + " ", Feature::RangeFor));
      r.edits.push_back(detail::insert_at(tree.end_offset(rf->body), " }", Feature::RangeFor));
    }
    if (wrap) r.edits.push_back(detail::insert_at(tree.end_offset(id), " }", Feature::RangeFor));
    detail::group_edits(r.edits, from, detail::tok_begin(tree, rf->for_tok));
  });
  std::stable_sort(r.edits.begin(), r.edits.end(), [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
  return r;
}

}  // namespace retrofit
