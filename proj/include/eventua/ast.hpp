#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace eventua {

// Terms and formulas are immutable trees shared through pointers to const.
//
// Term shapes:
//   Var x            variable
//   Const #a         individual constant
//   FnRef g          function constant, appears in application head position
//   Pair [s, t]      ordered pair
//   App s(t)         application
//   Iota iota x. F   definite description over the potential layer
//   IotaActual       definite description over the actual layer of the event
//   Restrict rest(t, F)   t where F holds, undefined otherwise
//
// Formula shapes: predicate atoms, equality, the existence predicate E(t),
// negation, conjunction, disjunction, and four quantifiers: forall/exists
// range over the potential layer, forall@/exists@ over the actual layer of
// the evaluation event. Implication and biconditional exist only as surface
// sugar and are expanded by the parser.

struct Term;
struct Formula;
using TermPtr = std::shared_ptr<const Term>;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class TermKind { Var, Const, FnRef, Pair, App, Iota, IotaActual, Restrict };

struct Term {
  TermKind kind;
  std::string name;  // Var, Const, FnRef
  std::string var;   // Iota, IotaActual binder
  TermPtr lhs, rhs;  // Pair(lhs, rhs), App(lhs applied to rhs), Restrict(lhs)
  FormulaPtr body;   // Iota, IotaActual, Restrict guard
};

enum class FormulaKind {
  Pred,
  Eq,
  Exist,
  Not,
  And,
  Or,
  ForallH,
  ForallU,
  ExistsH,
  ExistsU,
};

struct Formula {
  FormulaKind kind;
  std::string name;           // Pred
  std::vector<TermPtr> args;  // Pred
  TermPtr t1, t2;             // Eq(t1, t2), Exist(t1)
  FormulaPtr f1, f2;          // Not(f1), And/Or(f1, f2), quantifier body f1
  std::string var;            // quantifier binder
};

inline TermPtr mk_var(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Var;
  t->name = std::move(name);
  return t;
}

inline TermPtr mk_const(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Const;
  t->name = std::move(name);
  return t;
}

inline TermPtr mk_fnref(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::FnRef;
  t->name = std::move(name);
  return t;
}

inline TermPtr mk_pair(TermPtr lhs, TermPtr rhs) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Pair;
  t->lhs = std::move(lhs);
  t->rhs = std::move(rhs);
  return t;
}

inline TermPtr mk_app(TermPtr head, TermPtr arg) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::App;
  t->lhs = std::move(head);
  t->rhs = std::move(arg);
  return t;
}

inline TermPtr mk_iota(std::string var, FormulaPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Iota;
  t->var = std::move(var);
  t->body = std::move(body);
  return t;
}

inline TermPtr mk_iota_actual(std::string var, FormulaPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::IotaActual;
  t->var = std::move(var);
  t->body = std::move(body);
  return t;
}

inline TermPtr mk_restrict(TermPtr base, FormulaPtr guard) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Restrict;
  t->lhs = std::move(base);
  t->body = std::move(guard);
  return t;
}

inline FormulaPtr mk_pred(std::string name, std::vector<TermPtr> args) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Pred;
  f->name = std::move(name);
  f->args = std::move(args);
  return f;
}

inline FormulaPtr mk_eq(TermPtr a, TermPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Eq;
  f->t1 = std::move(a);
  f->t2 = std::move(b);
  return f;
}

inline FormulaPtr mk_exist(TermPtr t) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Exist;
  f->t1 = std::move(t);
  return f;
}

inline FormulaPtr mk_not(FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Not;
  f->f1 = std::move(a);
  return f;
}

inline FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::And;
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}

inline FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::Or;
  f->f1 = std::move(a);
  f->f2 = std::move(b);
  return f;
}

inline FormulaPtr mk_quant(FormulaKind kind, std::string var, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->var = std::move(var);
  f->f1 = std::move(body);
  return f;
}

// A -> B and A <-> B as expanded by the parser.
inline FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) {
  return mk_or(mk_not(std::move(a)), b);
}

inline FormulaPtr mk_iff(FormulaPtr a, FormulaPtr b) {
  return mk_and(mk_implies(a, b), mk_implies(b, a));
}

inline bool is_quantifier(FormulaKind k) {
  return k == FormulaKind::ForallH || k == FormulaKind::ForallU ||
         k == FormulaKind::ExistsH || k == FormulaKind::ExistsU;
}

// --- structural equality ---------------------------------------------------

inline bool equal(const TermPtr& a, const TermPtr& b);

inline bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case FormulaKind::Pred: {
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (std::size_t k = 0; k < a->args.size(); ++k)
        if (!equal(a->args[k], b->args[k])) return false;
      return true;
    }
    case FormulaKind::Eq:
      return equal(a->t1, b->t1) && equal(a->t2, b->t2);
    case FormulaKind::Exist:
      return equal(a->t1, b->t1);
    case FormulaKind::Not:
      return equal(a->f1, b->f1);
    case FormulaKind::And:
    case FormulaKind::Or:
      return equal(a->f1, b->f1) && equal(a->f2, b->f2);
    default:
      return a->var == b->var && equal(a->f1, b->f1);
  }
}

inline bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Var:
    case TermKind::Const:
    case TermKind::FnRef:
      return a->name == b->name;
    case TermKind::Pair:
    case TermKind::App:
      return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case TermKind::Iota:
    case TermKind::IotaActual:
      return a->var == b->var && equal(a->body, b->body);
    case TermKind::Restrict:
      return equal(a->lhs, b->lhs) && equal(a->body, b->body);
  }
  return false;
}

// --- free variables --------------------------------------------------------

namespace detail {

inline void collect_free(const TermPtr& t, std::set<std::string>& bound,
                         std::set<std::string>& out);

inline void collect_free(const FormulaPtr& f, std::set<std::string>& bound,
                         std::set<std::string>& out) {
  switch (f->kind) {
    case FormulaKind::Pred:
      for (const auto& a : f->args) collect_free(a, bound, out);
      break;
    case FormulaKind::Eq:
      collect_free(f->t1, bound, out);
      collect_free(f->t2, bound, out);
      break;
    case FormulaKind::Exist:
      collect_free(f->t1, bound, out);
      break;
    case FormulaKind::Not:
      collect_free(f->f1, bound, out);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
      collect_free(f->f1, bound, out);
      collect_free(f->f2, bound, out);
      break;
    default: {
      bool fresh = bound.insert(f->var).second;
      collect_free(f->f1, bound, out);
      if (fresh) bound.erase(f->var);
      break;
    }
  }
}

inline void collect_free(const TermPtr& t, std::set<std::string>& bound,
                         std::set<std::string>& out) {
  switch (t->kind) {
    case TermKind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      break;
    case TermKind::Const:
    case TermKind::FnRef:
      break;
    case TermKind::Pair:
    case TermKind::App:
      collect_free(t->lhs, bound, out);
      collect_free(t->rhs, bound, out);
      break;
    case TermKind::Iota:
    case TermKind::IotaActual: {
      bool fresh = bound.insert(t->var).second;
      collect_free(t->body, bound, out);
      if (fresh) bound.erase(t->var);
      break;
    }
    case TermKind::Restrict:
      collect_free(t->lhs, bound, out);
      collect_free(t->body, bound, out);
      break;
  }
}

}  // namespace detail

inline std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  detail::collect_free(f, bound, out);
  return out;
}

inline std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> bound, out;
  detail::collect_free(t, bound, out);
  return out;
}

// --- substitution ----------------------------------------------------------
// Replaces free occurrences of a variable. The replacement is expected to be
// closed, which is the only way substitution is used here, so no renaming of
// binders is ever necessary; same-named binders simply shadow.

inline TermPtr substitute(const TermPtr& t, const std::string& var,
                          const TermPtr& repl);

inline FormulaPtr substitute(const FormulaPtr& f, const std::string& var,
                             const TermPtr& repl) {
  switch (f->kind) {
    case FormulaKind::Pred: {
      std::vector<TermPtr> args;
      args.reserve(f->args.size());
      for (const auto& a : f->args) args.push_back(substitute(a, var, repl));
      return mk_pred(f->name, std::move(args));
    }
    case FormulaKind::Eq:
      return mk_eq(substitute(f->t1, var, repl), substitute(f->t2, var, repl));
    case FormulaKind::Exist:
      return mk_exist(substitute(f->t1, var, repl));
    case FormulaKind::Not:
      return mk_not(substitute(f->f1, var, repl));
    case FormulaKind::And:
      return mk_and(substitute(f->f1, var, repl), substitute(f->f2, var, repl));
    case FormulaKind::Or:
      return mk_or(substitute(f->f1, var, repl), substitute(f->f2, var, repl));
    default:
      if (f->var == var) return f;
      return mk_quant(f->kind, f->var, substitute(f->f1, var, repl));
  }
}

inline TermPtr substitute(const TermPtr& t, const std::string& var,
                          const TermPtr& repl) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == var ? repl : t;
    case TermKind::Const:
    case TermKind::FnRef:
      return t;
    case TermKind::Pair:
      return mk_pair(substitute(t->lhs, var, repl), substitute(t->rhs, var, repl));
    case TermKind::App:
      return mk_app(substitute(t->lhs, var, repl), substitute(t->rhs, var, repl));
    case TermKind::Iota:
    case TermKind::IotaActual: {
      if (t->var == var) return t;
      auto body = substitute(t->body, var, repl);
      return t->kind == TermKind::Iota ? mk_iota(t->var, std::move(body))
                                       : mk_iota_actual(t->var, std::move(body));
    }
    case TermKind::Restrict:
      return mk_restrict(substitute(t->lhs, var, repl), substitute(t->body, var, repl));
  }
  return t;
}

// A set abstraction {x | F}: its extent at an event is every potential
// individual satisfying F. F may use no free variable other than x.
struct Abstraction {
  std::string var;
  FormulaPtr body;
};

}  // namespace eventua
