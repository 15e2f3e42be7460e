#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eventua/ast.hpp"
#include "eventua/error.hpp"
#include "eventua/eval.hpp"
#include "eventua/print.hpp"
#include "eventua/world.hpp"

namespace eventua {

// Event-indexed relational layer: set operations and joins over abstraction
// extents, junctions guarded by named rules, and evolvents that re-index a
// query from view events onto world events by precomposition.

enum class SetOp { Union, Intersect, Difference };

inline const char* to_string(SetOp op) {
  switch (op) {
    case SetOp::Union: return "union";
    case SetOp::Intersect: return "intersect";
    case SetOp::Difference: return "difference";
  }
  return "?";
}

inline SetOp parse_setop(const std::string& word) {
  if (word == "union") return SetOp::Union;
  if (word == "intersect") return SetOp::Intersect;
  if (word == "difference") return SetOp::Difference;
  fail(ErrorKind::Parse, "unknown set operation '" + word + "'");
}

enum class Comparator { Eq, Neq, Lt, Gt, Le, Ge };

inline const char* to_string(Comparator c) {
  switch (c) {
    case Comparator::Eq: return "=";
    case Comparator::Neq: return "!=";
    case Comparator::Lt: return "<";
    case Comparator::Gt: return ">";
    case Comparator::Le: return "<=";
    case Comparator::Ge: return ">=";
  }
  return "?";
}

inline Comparator parse_comparator(const std::string& word) {
  if (word == "=") return Comparator::Eq;
  if (word == "!=") return Comparator::Neq;
  if (word == "<") return Comparator::Lt;
  if (word == ">") return Comparator::Gt;
  if (word == "<=") return Comparator::Le;
  if (word == ">=") return Comparator::Ge;
  fail(ErrorKind::Parse, "unknown comparator '" + word + "'");
}

// Equality and inequality compare values structurally; the order
// comparators compare numeric payloads and reject payload-free operands.
inline bool compare_values(const World& w, Comparator cmp, const DomainValue& a,
                           const DomainValue& b) {
  switch (cmp) {
    case Comparator::Eq: return a == b;
    case Comparator::Neq: return !(a == b);
    default: break;
  }
  auto payload = [&](const DomainValue& v) -> Rational {
    if (v.kind != DomainValue::Kind::Ind)
      fail(ErrorKind::NonNumericComparison,
           "value " + to_string(v) + " has no numeric payload");
    const auto& p = w.payload_of(v.ind);
    if (!p)
      fail(ErrorKind::NonNumericComparison,
           "individual " + v.ind + " has no numeric payload");
    return *p;
  };
  Rational pa = payload(a), pb = payload(b);
  switch (cmp) {
    case Comparator::Lt: return pa < pb;
    case Comparator::Gt: return pa > pb;
    case Comparator::Le: return pa <= pb;
    case Comparator::Ge: return pa >= pb;
    default: return false;
  }
}

inline bool compare_individuals(const World& w, Comparator cmp, const std::string& a,
                                const std::string& b) {
  return compare_values(w, cmp, DomainValue::individual(a), DomainValue::individual(b));
}

// Extent of {x | F} at an event: the potential individuals satisfying F.
inline std::set<std::string> abstraction_extent(const World& w, const Abstraction& abs,
                                                const std::string& event) {
  w.require_event(event);
  auto free = free_vars(abs.body);
  free.erase(abs.var);
  if (!free.empty())
    fail(ErrorKind::UnboundVariable, "unbound variable " + *free.begin());
  std::set<std::string> out;
  for (const auto& h : w.potential) {
    Env env{{abs.var, DomainValue::individual(h)}};
    if (eval_formula(w, env, abs.body, event)) out.insert(h);
  }
  return out;
}

inline std::set<std::string> eval_setop(const World& w, SetOp op, const Abstraction& lhs,
                                        const Abstraction& rhs, const std::string& event) {
  auto l = abstraction_extent(w, lhs, event);
  auto r = abstraction_extent(w, rhs, event);
  std::set<std::string> out;
  switch (op) {
    case SetOp::Union:
      out = l;
      out.insert(r.begin(), r.end());
      break;
    case SetOp::Intersect:
      for (const auto& x : l)
        if (r.count(x)) out.insert(x);
      break;
    case SetOp::Difference:
      for (const auto& x : l)
        if (!r.count(x)) out.insert(x);
      break;
  }
  return out;
}

using IndPair = std::pair<std::string, std::string>;

inline std::set<IndPair> theta_join(const World& w, Comparator cmp, const Abstraction& lhs,
                                    const Abstraction& rhs, const std::string& event) {
  auto l = abstraction_extent(w, lhs, event);
  auto r = abstraction_extent(w, rhs, event);
  std::set<IndPair> out;
  for (const auto& a : l)
    for (const auto& b : r)
      if (compare_individuals(w, cmp, a, b)) out.emplace(a, b);
  return out;
}

// A junction pairs two extents under a named guard rule. Rules see the
// world, the event and both candidates; the registry ships with `always`,
// `co-actual` and the `theta:<cmp>` family and accepts new rules until
// evaluation starts.
using JunctionRule = std::function<bool(const World&, const std::string& event,
                                        const std::string&, const std::string&)>;

class JunctionRegistry {
 public:
  JunctionRegistry() {
    rules_["always"] = [](const World&, const std::string&, const std::string&,
                          const std::string&) { return true; };
    rules_["co-actual"] = [](const World& w, const std::string& event,
                             const std::string& a, const std::string& b) {
      const auto& layer = w.actual_at(event);
      return layer.count(a) && layer.count(b);
    };
    for (Comparator cmp : {Comparator::Eq, Comparator::Neq, Comparator::Lt,
                           Comparator::Gt, Comparator::Le, Comparator::Ge}) {
      rules_[std::string("theta:") + to_string(cmp)] =
          [cmp](const World& w, const std::string&, const std::string& a,
                const std::string& b) { return compare_individuals(w, cmp, a, b); };
    }
  }

  void add(const std::string& name, JunctionRule rule) {
    if (!rules_.emplace(name, std::move(rule)).second)
      fail(ErrorKind::DuplicateName, "duplicate rule " + name);
  }

  bool has(const std::string& name) const { return rules_.count(name) != 0; }

  const JunctionRule& lookup(const std::string& name) const {
    auto it = rules_.find(name);
    if (it == rules_.end()) fail(ErrorKind::UnknownRule, "unknown rule " + name);
    return it->second;
  }

 private:
  std::map<std::string, JunctionRule> rules_;
};

inline std::set<IndPair> junction(const World& w, const JunctionRegistry& rules,
                                  const std::string& rule, const Abstraction& lhs,
                                  const Abstraction& rhs, const std::string& event) {
  const JunctionRule& guard = rules.lookup(rule);
  auto l = abstraction_extent(w, lhs, event);
  auto r = abstraction_extent(w, rhs, event);
  std::set<IndPair> out;
  for (const auto& a : l)
    for (const auto& b : r)
      if (guard(w, event, a, b)) out.emplace(a, b);
  return out;
}

// Tuples of a binary relation at an event, kept within the potential layer
// and filtered by a guard over the fixed variables x (first component) and
// y (second component).
inline std::set<IndPair> restricted_relation(const World& w, const std::string& rel_name,
                                             const FormulaPtr& guard,
                                             const std::string& event) {
  w.require_event(event);
  auto it = w.relations.find(rel_name);
  if (it == w.relations.end())
    fail(ErrorKind::UnknownRelation, "unknown relation " + rel_name);
  const Relation& rel = it->second;
  if (rel.arity != 2)
    fail(ErrorKind::Arity, "relation " + rel_name + " is not binary");
  auto free = free_vars(guard);
  free.erase("x");
  free.erase("y");
  if (!free.empty())
    fail(ErrorKind::UnboundVariable, "unbound variable " + *free.begin());
  std::set<IndPair> out;
  for (const auto& t : rel.extension_at(event)) {
    if (!w.is_potential(t[0]) || !w.is_potential(t[1])) continue;
    Env env{{"x", DomainValue::individual(t[0])}, {"y", DomainValue::individual(t[1])}};
    if (eval_formula(w, env, guard, event)) out.emplace(t[0], t[1]);
  }
  return out;
}

// --- evolvents and shifted queries -----------------------------------------

// A finite map from view events onto world events. Shifting a query along
// an evolvent precomposes every event-indexed component with the map, so
// the shifted query evaluated at a view event b equals the plain query at
// source_of(b).
struct Evolvent {
  std::vector<std::string> view_order;
  std::set<std::string> view_events;
  std::map<std::string, std::string> map;

  static Evolvent make(const World& w,
                       const std::vector<std::pair<std::string, std::string>>& pairs) {
    if (pairs.empty()) fail(ErrorKind::Parse, "evolvent needs at least one pair");
    Evolvent f;
    for (const auto& [b, i] : pairs) {
      w.require_event(i);
      if (!f.view_events.insert(b).second)
        fail(ErrorKind::DuplicateName, "duplicate view event " + b);
      f.view_order.push_back(b);
      f.map[b] = i;
    }
    return f;
  }

  static Evolvent identity(const World& w) {
    Evolvent f;
    for (const auto& e : w.event_order) {
      f.view_order.push_back(e);
      f.view_events.insert(e);
      f.map[e] = e;
    }
    return f;
  }

  const std::string& source_of(const std::string& b) const {
    auto it = map.find(b);
    if (it == map.end()) fail(ErrorKind::UnknownViewEvent, "unknown view event " + b);
    return it->second;
  }
};

struct QueryExpr;
using QueryPtr = std::shared_ptr<const QueryExpr>;

// One event-indexed query. Every kind evaluates to a row set so results
// stay uniform across shifting and snapshots: a formula yields the row (1)
// or (0), a term its printed value when defined, the relational kinds their
// member tuples.
struct QueryExpr {
  enum class Kind { Formula, Term, SetOp, Join, Junction, Restrict, Shifted };

  Kind kind = Kind::Formula;
  FormulaPtr formula;        // Formula; Restrict guard
  TermPtr term;              // Term
  SetOp setop = SetOp::Union;
  Comparator cmp = Comparator::Eq;
  std::string name;          // Junction rule; Restrict relation
  Abstraction lhs, rhs;      // SetOp, Join, Junction
  QueryPtr inner;            // Shifted
  std::optional<Evolvent> evolvent;  // Shifted
};

inline QueryPtr query_formula(FormulaPtr f) {
  auto q = std::make_shared<QueryExpr>();
  q->kind = QueryExpr::Kind::Formula;
  q->formula = std::move(f);
  return q;
}

inline QueryPtr query_term(TermPtr t) {
  auto q = std::make_shared<QueryExpr>();
  q->kind = QueryExpr::Kind::Term;
  q->term = std::move(t);
  return q;
}

inline QueryPtr query_setop(SetOp op, Abstraction lhs, Abstraction rhs) {
  auto q = std::make_shared<QueryExpr>();
  q->kind = QueryExpr::Kind::SetOp;
  q->setop = op;
  q->lhs = std::move(lhs);
  q->rhs = std::move(rhs);
  return q;
}

inline QueryPtr query_join(Comparator cmp, Abstraction lhs, Abstraction rhs) {
  auto q = std::make_shared<QueryExpr>();
  q->kind = QueryExpr::Kind::Join;
  q->cmp = cmp;
  q->lhs = std::move(lhs);
  q->rhs = std::move(rhs);
  return q;
}

inline QueryPtr query_junction(std::string rule, Abstraction lhs, Abstraction rhs) {
  auto q = std::make_shared<QueryExpr>();
  q->kind = QueryExpr::Kind::Junction;
  q->name = std::move(rule);
  q->lhs = std::move(lhs);
  q->rhs = std::move(rhs);
  return q;
}

inline QueryPtr query_restrict(std::string relation, FormulaPtr guard) {
  auto q = std::make_shared<QueryExpr>();
  q->kind = QueryExpr::Kind::Restrict;
  q->name = std::move(relation);
  q->formula = std::move(guard);
  return q;
}

inline QueryPtr shift(QueryPtr query, Evolvent evolvent) {
  auto q = std::make_shared<QueryExpr>();
  q->kind = QueryExpr::Kind::Shifted;
  q->inner = std::move(query);
  q->evolvent = std::move(evolvent);
  return q;
}

struct QueryResult {
  std::set<Tuple> rows;

  bool operator==(const QueryResult&) const = default;
};

inline QueryResult eval_query(const World& w, const JunctionRegistry& rules,
                              const QueryPtr& q, const std::string& event) {
  QueryResult out;
  switch (q->kind) {
    case QueryExpr::Kind::Formula: {
      Env env;
      out.rows.insert({eval_formula(w, env, q->formula, event) ? "1" : "0"});
      break;
    }
    case QueryExpr::Kind::Term: {
      Env env;
      auto v = eval_term(w, env, q->term, event);
      if (v) out.rows.insert({to_string(*v)});
      break;
    }
    case QueryExpr::Kind::SetOp:
      for (const auto& x : eval_setop(w, q->setop, q->lhs, q->rhs, event))
        out.rows.insert({x});
      break;
    case QueryExpr::Kind::Join:
      for (const auto& [a, b] : theta_join(w, q->cmp, q->lhs, q->rhs, event))
        out.rows.insert({a, b});
      break;
    case QueryExpr::Kind::Junction:
      for (const auto& [a, b] : junction(w, rules, q->name, q->lhs, q->rhs, event))
        out.rows.insert({a, b});
      break;
    case QueryExpr::Kind::Restrict:
      for (const auto& [a, b] : restricted_relation(w, q->name, q->formula, event))
        out.rows.insert({a, b});
      break;
    case QueryExpr::Kind::Shifted:
      return eval_query(w, rules, q->inner, q->evolvent->source_of(event));
  }
  return out;
}

inline std::string query_text(const QueryPtr& q) {
  auto abs_text = [](const Abstraction& a) {
    return "{" + a.var + " | " + print_formula(a.body) + "}";
  };
  switch (q->kind) {
    case QueryExpr::Kind::Formula:
      return "eval " + print_formula(q->formula);
    case QueryExpr::Kind::Term:
      return "evalterm " + print_term(q->term);
    case QueryExpr::Kind::SetOp:
      return std::string("setop ") + to_string(q->setop) + " " + abs_text(q->lhs) + " " +
             abs_text(q->rhs);
    case QueryExpr::Kind::Join:
      return std::string("join ") + to_string(q->cmp) + " " + abs_text(q->lhs) + " " +
             abs_text(q->rhs);
    case QueryExpr::Kind::Junction:
      return "junction " + q->name + " " + abs_text(q->lhs) + " " + abs_text(q->rhs);
    case QueryExpr::Kind::Restrict:
      return "restrict " + q->name + " where " + print_formula(q->formula);
    case QueryExpr::Kind::Shifted:
      return query_text(q->inner) + " (shifted)";
  }
  return "";
}

// A materialized view: the rows of the query seen from a view event, with
// the source event the evolvent resolved it to.
struct Snapshot {
  std::string view_event;
  std::string source_event;
  std::set<Tuple> rows;
  std::string provenance;
};

inline Snapshot materialize_view(const World& w, const JunctionRegistry& rules,
                                 const QueryPtr& query, const Evolvent& evolvent,
                                 const std::string& view_event) {
  Snapshot snap;
  snap.view_event = view_event;
  snap.source_event = evolvent.source_of(view_event);
  snap.rows = eval_query(w, rules, shift(query, evolvent), view_event).rows;
  snap.provenance = query_text(query);
  return snap;
}

// --- theta atoms under an evolvent -----------------------------------------

// The right operand of a theta atom takes one of four shapes. A bare
// application head is read as the constant-function shape by default; the
// application shape, which routes the head through its own shifted
// intension, is selected explicitly. For event-independent function
// constants both routes agree.
enum class ThetaOperandShape { AtomicObject, ConstantFunction, OrderedPair, Application };

inline ThetaOperandShape theta_operand_shape(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Const:
      return ThetaOperandShape::AtomicObject;
    case TermKind::App:
      if (t->lhs->kind == TermKind::FnRef && t->rhs->kind == TermKind::Const)
        return ThetaOperandShape::ConstantFunction;
      break;
    case TermKind::Pair:
      if (t->lhs->kind == TermKind::Const && t->rhs->kind == TermKind::Const)
        return ThetaOperandShape::OrderedPair;
      break;
    default:
      break;
  }
  fail(ErrorKind::Shape, "operand does not match a theta operand shape");
}

// Evaluates the theta atom cmp(h, operand) at the view event: both sides
// are resolved through the evolvent and compared. Must agree with direct
// evaluation of the atom at source_of(view_event).
inline bool eval_theta_case(const World& w, Comparator cmp, const TermPtr& h,
                            const TermPtr& operand, const Evolvent& evolvent,
                            const std::string& view_event,
                            std::optional<ThetaOperandShape> forced = std::nullopt) {
  const std::string& i = evolvent.source_of(view_event);
  ThetaOperandShape shape = forced ? *forced : theta_operand_shape(operand);

  auto const_value = [&](const TermPtr& c) -> DomainValue {
    if (c->kind != TermKind::Const)
      fail(ErrorKind::Shape, "operand does not match a theta operand shape");
    if (!w.has_individual(c->name))
      fail(ErrorKind::UnknownIndividual, "unknown individual " + c->name);
    return DomainValue::individual(c->name);
  };

  DomainValue right;
  switch (shape) {
    case ThetaOperandShape::AtomicObject:
      right = const_value(operand);
      break;
    case ThetaOperandShape::ConstantFunction: {
      // g composed after the shifted argument; g itself stays unshifted.
      if (operand->kind != TermKind::App || operand->lhs->kind != TermKind::FnRef)
        fail(ErrorKind::Shape, "operand does not match a theta operand shape");
      auto fn_it = w.functions.find(operand->lhs->name);
      if (fn_it == w.functions.end())
        fail(ErrorKind::UnknownFunction, "unknown function " + operand->lhs->name);
      DomainValue arg = const_value(operand->rhs);
      auto hit = fn_it->second.graph.find(arg.ind);
      if (hit == fn_it->second.graph.end())
        fail(ErrorKind::ApplicationOutsideGraph,
             "argument " + arg.ind + " is outside the function graph");
      right = DomainValue::individual(hit->second);
      break;
    }
    case ThetaOperandShape::OrderedPair:
      if (operand->kind != TermKind::Pair)
        fail(ErrorKind::Shape, "operand does not match a theta operand shape");
      right = DomainValue::pair(const_value(operand->lhs), const_value(operand->rhs));
      break;
    case ThetaOperandShape::Application: {
      // The head's intension is shifted along the evolvent and sampled at
      // the view event, then applied to the shifted argument value.
      if (operand->kind != TermKind::App || operand->lhs->kind != TermKind::FnRef)
        fail(ErrorKind::Shape, "operand does not match a theta operand shape");
      Env env;
      auto head = eval_term(w, env, operand->lhs, i);
      DomainValue arg = const_value(operand->rhs);
      auto hit = head->fn.find(arg.ind);
      if (hit == head->fn.end())
        fail(ErrorKind::ApplicationOutsideGraph,
             "argument " + arg.ind + " is outside the function graph");
      right = DomainValue::individual(hit->second);
      break;
    }
  }

  Env env;
  auto left = eval_term(w, env, h, i);
  if (!left) return false;
  return compare_values(w, cmp, *left, right);
}

}  // namespace eventua
