#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eventua/ast.hpp"
#include "eventua/error.hpp"
#include "eventua/world.hpp"

namespace eventua {

// Values a term can denote: an individual, an ordered pair, or a function
// graph. Truth values appear only inside formula concepts. Terms denote
// partially; "undefined" is represented by an empty optional, never by a
// value.
struct DomainValue {
  enum class Kind { Ind, Pair, Fn, Truth };

  Kind kind = Kind::Ind;
  std::string ind;
  std::shared_ptr<const DomainValue> first, second;
  std::map<std::string, std::string> fn;
  bool truth = false;

  static DomainValue individual(std::string name) {
    DomainValue v;
    v.kind = Kind::Ind;
    v.ind = std::move(name);
    return v;
  }

  static DomainValue pair(DomainValue a, DomainValue b) {
    DomainValue v;
    v.kind = Kind::Pair;
    v.first = std::make_shared<DomainValue>(std::move(a));
    v.second = std::make_shared<DomainValue>(std::move(b));
    return v;
  }

  static DomainValue fn_graph(std::map<std::string, std::string> graph) {
    DomainValue v;
    v.kind = Kind::Fn;
    v.fn = std::move(graph);
    return v;
  }

  static DomainValue truth_value(bool b) {
    DomainValue v;
    v.kind = Kind::Truth;
    v.truth = b;
    return v;
  }

  bool operator==(const DomainValue& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
      case Kind::Ind: return ind == o.ind;
      case Kind::Pair: return *first == *o.first && *second == *o.second;
      case Kind::Fn: return fn == o.fn;
      case Kind::Truth: return truth == o.truth;
    }
    return false;
  }
};

using PartialValue = std::optional<DomainValue>;
using Env = std::map<std::string, DomainValue>;

inline std::string to_string(const DomainValue& v) {
  switch (v.kind) {
    case DomainValue::Kind::Ind:
      return v.ind;
    case DomainValue::Kind::Pair:
      return "[" + to_string(*v.first) + ", " + to_string(*v.second) + "]";
    case DomainValue::Kind::Fn: {
      std::string out = "{";
      bool sep = false;
      for (const auto& [a, b] : v.fn) {
        if (sep) out += ", ";
        out += a + "->" + b;
        sep = true;
      }
      return out + "}";
    }
    case DomainValue::Kind::Truth:
      return v.truth ? "1" : "0";
  }
  return "";
}

namespace detail {

// Temporarily binds a variable, restoring any shadowed value on exit.
class ScopedBind {
 public:
  ScopedBind(Env& env, const std::string& var, DomainValue value)
      : env_(env), var_(var) {
    auto it = env_.find(var_);
    if (it != env_.end()) shadowed_ = std::move(it->second);
    env_[var_] = std::move(value);
  }

  ~ScopedBind() {
    if (shadowed_)
      env_[var_] = std::move(*shadowed_);
    else
      env_.erase(var_);
  }

  ScopedBind(const ScopedBind&) = delete;
  ScopedBind& operator=(const ScopedBind&) = delete;

 private:
  Env& env_;
  std::string var_;
  std::optional<DomainValue> shadowed_;
};

inline PartialValue eval_t(const World& w, Env& env, const TermPtr& t,
                           const std::string& event);

inline bool eval_f(const World& w, Env& env, const FormulaPtr& f,
                   const std::string& event) {
  switch (f->kind) {
    case FormulaKind::Pred: {
      auto rel_it = w.relations.find(f->name);
      if (rel_it == w.relations.end())
        fail(ErrorKind::UnknownRelation, "unknown relation " + f->name);
      const Relation& rel = rel_it->second;
      if (static_cast<int>(f->args.size()) != rel.arity)
        fail(ErrorKind::Arity, "relation " + rel.name + " expects " +
                                   std::to_string(rel.arity) + " arguments, got " +
                                   std::to_string(f->args.size()));
      // Atoms are strict: an undefined argument makes the atom false, and a
      // non-individual value can never occur in a tuple.
      Tuple tuple;
      bool admissible = true;
      for (const auto& arg : f->args) {
        auto v = eval_t(w, env, arg, event);
        if (!v || v->kind != DomainValue::Kind::Ind) {
          admissible = false;
          continue;
        }
        tuple.push_back(v->ind);
      }
      if (!admissible) return false;
      return rel.extension_at(event).count(tuple) != 0;
    }
    case FormulaKind::Eq: {
      auto a = eval_t(w, env, f->t1, event);
      auto b = eval_t(w, env, f->t2, event);
      return a && b && *a == *b;
    }
    case FormulaKind::Exist: {
      auto v = eval_t(w, env, f->t1, event);
      return v && v->kind == DomainValue::Kind::Ind && w.is_potential(v->ind);
    }
    case FormulaKind::Not:
      return !eval_f(w, env, f->f1, event);
    case FormulaKind::And: {
      bool a = eval_f(w, env, f->f1, event);
      bool b = eval_f(w, env, f->f2, event);
      return a && b;
    }
    case FormulaKind::Or: {
      bool a = eval_f(w, env, f->f1, event);
      bool b = eval_f(w, env, f->f2, event);
      return a || b;
    }
    default: {
      const bool actual_layer =
          f->kind == FormulaKind::ForallU || f->kind == FormulaKind::ExistsU;
      const bool universal =
          f->kind == FormulaKind::ForallH || f->kind == FormulaKind::ForallU;
      const std::set<std::string>& range =
          actual_layer ? w.actual_at(event) : w.potential;
      bool all = true, some = false;
      for (const auto& c : range) {
        ScopedBind bind(env, f->var, DomainValue::individual(c));
        bool v = eval_f(w, env, f->f1, event);
        all = all && v;
        some = some || v;
      }
      return universal ? all : some;
    }
  }
}

inline PartialValue eval_t(const World& w, Env& env, const TermPtr& t,
                           const std::string& event) {
  switch (t->kind) {
    case TermKind::Var: {
      auto it = env.find(t->name);
      if (it == env.end())
        fail(ErrorKind::UnboundVariable, "unbound variable " + t->name);
      return it->second;
    }
    case TermKind::Const: {
      if (!w.has_individual(t->name))
        fail(ErrorKind::UnknownIndividual, "unknown individual " + t->name);
      return DomainValue::individual(t->name);
    }
    case TermKind::FnRef: {
      auto it = w.functions.find(t->name);
      if (it == w.functions.end())
        fail(ErrorKind::UnknownFunction, "unknown function " + t->name);
      return DomainValue::fn_graph(it->second.graph);
    }
    case TermKind::Pair: {
      auto a = eval_t(w, env, t->lhs, event);
      auto b = eval_t(w, env, t->rhs, event);
      if (!a || !b) return std::nullopt;
      return DomainValue::pair(std::move(*a), std::move(*b));
    }
    case TermKind::App: {
      auto head = eval_t(w, env, t->lhs, event);
      auto arg = eval_t(w, env, t->rhs, event);
      if (!head || !arg) return std::nullopt;
      if (head->kind != DomainValue::Kind::Fn)
        fail(ErrorKind::UnknownFunction,
             "application head " + to_string(*head) + " is not a function");
      if (arg->kind != DomainValue::Kind::Ind)
        fail(ErrorKind::ApplicationOutsideGraph,
             "argument " + to_string(*arg) + " is outside the function graph");
      auto it = head->fn.find(arg->ind);
      if (it == head->fn.end())
        fail(ErrorKind::ApplicationOutsideGraph,
             "argument " + arg->ind + " is outside the function graph");
      return DomainValue::individual(it->second);
    }
    case TermKind::Iota:
    case TermKind::IotaActual: {
      const std::set<std::string>& range =
          t->kind == TermKind::Iota ? w.potential : w.actual_at(event);
      std::optional<std::string> witness;
      bool unique = true;
      for (const auto& c : range) {
        ScopedBind bind(env, t->var, DomainValue::individual(c));
        if (eval_f(w, env, t->body, event)) {
          if (witness) unique = false;
          witness = c;
        }
      }
      if (!witness || !unique) return std::nullopt;
      return DomainValue::individual(*witness);
    }
    case TermKind::Restrict: {
      if (!eval_f(w, env, t->body, event)) return std::nullopt;
      return eval_t(w, env, t->lhs, event);
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Truth of a formula in a world at an event, under an environment binding
// its free variables.
inline bool eval_formula(const World& w, const Env& env, const FormulaPtr& f,
                         const std::string& event) {
  w.require_event(event);
  Env scratch = env;
  return detail::eval_f(w, scratch, f, event);
}

// Partial denotation of a term; an empty optional is "undefined".
inline PartialValue eval_term(const World& w, const Env& env, const TermPtr& t,
                              const std::string& event) {
  w.require_event(event);
  Env scratch = env;
  return detail::eval_t(w, scratch, t, event);
}

// Physical existence of a term's denotation, expressed through the formula
// layer: exists y. y = t for a fresh y. Agrees with E(t) by construction of
// the equality and quantifier clauses.
inline bool exists_physically(const World& w, const Env& env, const TermPtr& t,
                              const std::string& event) {
  auto free = free_vars(t);
  std::string fresh = "_e";
  int n = 0;
  while (free.count(fresh) || env.count(fresh)) fresh = "_e" + std::to_string(n++);
  auto probe = mk_quant(FormulaKind::ExistsH, fresh, mk_eq(mk_var(fresh), t));
  return eval_formula(w, env, probe, event);
}

// A concept is the intension of an expression: its value at every event of
// the world, in declared event order. Formula concepts store truth values,
// term concepts store partial denotations.
struct Concept {
  bool formula_concept = false;
  std::vector<std::pair<std::string, PartialValue>> table;
};

inline Concept intension(const World& w, const Env& env, const FormulaPtr& f) {
  Concept c;
  c.formula_concept = true;
  for (const auto& e : w.event_order)
    c.table.emplace_back(e, DomainValue::truth_value(eval_formula(w, env, f, e)));
  return c;
}

inline Concept intension(const World& w, const Env& env, const TermPtr& t) {
  Concept c;
  c.formula_concept = false;
  for (const auto& e : w.event_order)
    c.table.emplace_back(e, eval_term(w, env, t, e));
  return c;
}

}  // namespace eventua
