#pragma once

#include <string>

#include "eventua/ast.hpp"

namespace eventua {

// Canonical printer. Emits the minimal parenthesization that reparses to
// the same tree: precedence handles the connectives ('!' over '&' over
// 'or'), while binders and equalities ending in a binder are wrapped
// whenever material follows them, since binder bodies extend to the end of
// the enclosing group.

// True when the printed form of the term ends in an open binder body, i.e.
// text appended after it would be captured by the binder.
inline bool term_swallows_right(const TermPtr& t) {
  return t->kind == TermKind::Iota || t->kind == TermKind::IotaActual;
}

inline bool formula_swallows_right(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Pred:
    case FormulaKind::Exist:
      return false;
    case FormulaKind::Eq:
      return term_swallows_right(f->t2);
    case FormulaKind::Not:
      return formula_swallows_right(f->f1);
    case FormulaKind::And:
    case FormulaKind::Or:
      return formula_swallows_right(f->f2);
    default:
      return true;  // quantifiers
  }
}

namespace detail {

inline void print_t(const TermPtr& t, std::string& out);

// `required` is the minimum precedence the context demands (or=1, and=2,
// unary=3); `tail` is true when nothing follows this formula inside the
// current delimited group.
inline void print_f(const FormulaPtr& f, std::string& out, int required, bool tail) {
  switch (f->kind) {
    case FormulaKind::Pred: {
      out += f->name;
      out += "(";
      for (std::size_t k = 0; k < f->args.size(); ++k) {
        if (k) out += ", ";
        print_t(f->args[k], out);
      }
      out += ")";
      return;
    }
    case FormulaKind::Eq: {
      bool wrap = !tail && term_swallows_right(f->t2);
      if (wrap) out += "(";
      print_t(f->t1, out);
      out += " = ";
      print_t(f->t2, out);
      if (wrap) out += ")";
      return;
    }
    case FormulaKind::Exist:
      out += "E(";
      print_t(f->t1, out);
      out += ")";
      return;
    case FormulaKind::Not:
      out += "!";
      print_f(f->f1, out, 3, tail);
      return;
    case FormulaKind::And: {
      bool wrap = required > 2;
      if (wrap) out += "(";
      print_f(f->f1, out, 2, false);
      out += " & ";
      print_f(f->f2, out, 3, wrap ? true : tail);
      if (wrap) out += ")";
      return;
    }
    case FormulaKind::Or: {
      bool wrap = required > 1;
      if (wrap) out += "(";
      print_f(f->f1, out, 1, false);
      out += " or ";
      print_f(f->f2, out, 2, wrap ? true : tail);
      if (wrap) out += ")";
      return;
    }
    default: {
      bool wrap = !tail;
      if (wrap) out += "(";
      switch (f->kind) {
        case FormulaKind::ForallH: out += "forall "; break;
        case FormulaKind::ForallU: out += "forall@ "; break;
        case FormulaKind::ExistsH: out += "exists "; break;
        default: out += "exists@ "; break;
      }
      out += f->var;
      out += ". ";
      print_f(f->f1, out, 0, true);
      if (wrap) out += ")";
      return;
    }
  }
}

inline void print_t(const TermPtr& t, std::string& out) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::FnRef:
      out += t->name;
      return;
    case TermKind::Const:
      out += "#";
      out += t->name;
      return;
    case TermKind::Pair:
      out += "[";
      print_t(t->lhs, out);
      out += ", ";
      print_t(t->rhs, out);
      out += "]";
      return;
    case TermKind::App:
      print_t(t->lhs, out);
      out += "(";
      print_t(t->rhs, out);
      out += ")";
      return;
    case TermKind::Iota:
    case TermKind::IotaActual:
      out += t->kind == TermKind::Iota ? "iota " : "iota@ ";
      out += t->var;
      out += ". ";
      print_f(t->body, out, 0, true);
      return;
    case TermKind::Restrict:
      out += "rest(";
      print_t(t->lhs, out);
      out += ", ";
      print_f(t->body, out, 0, true);
      out += ")";
      return;
  }
}

}  // namespace detail

inline std::string print_formula(const FormulaPtr& f) {
  std::string out;
  detail::print_f(f, out, 0, true);
  return out;
}

inline std::string print_term(const TermPtr& t) {
  std::string out;
  detail::print_t(t, out);
  return out;
}

}  // namespace eventua
