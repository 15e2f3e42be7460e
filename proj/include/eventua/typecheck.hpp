#pragma once

#include <map>
#include <memory>
#include <string>

#include "eventua/ast.hpp"
#include "eventua/error.hpp"
#include "eventua/world.hpp"

namespace eventua {

// Simple types for the object language, solved bottom-up:
//
//   SortV      individuals
//   Two        truth values
//   Prod       ordered pairs
//   Arrow      functions
//   Indexed    event-indexed readings (intensions)
//
// Variables and constants are individual-sorted; an n-ary predicate gets
// the type (V x ... x V) -> 2 with a right-nested product domain, a unary
// predicate plain V -> 2. intension_type lifts a solved type to its
// event-indexed form.

struct TypeExpr;
using TypePtr = std::shared_ptr<const TypeExpr>;

enum class TypeKind { SortV, Two, Prod, Arrow, Indexed };

struct TypeExpr {
  TypeKind kind;
  TypePtr a, b;  // Prod(a, b), Arrow(a, b), Indexed(a)
};

inline TypePtr type_sort_v() {
  static const TypePtr t = std::make_shared<TypeExpr>(TypeExpr{TypeKind::SortV, nullptr, nullptr});
  return t;
}

inline TypePtr type_two() {
  static const TypePtr t = std::make_shared<TypeExpr>(TypeExpr{TypeKind::Two, nullptr, nullptr});
  return t;
}

inline TypePtr type_prod(TypePtr a, TypePtr b) {
  return std::make_shared<TypeExpr>(TypeExpr{TypeKind::Prod, std::move(a), std::move(b)});
}

inline TypePtr type_arrow(TypePtr a, TypePtr b) {
  return std::make_shared<TypeExpr>(TypeExpr{TypeKind::Arrow, std::move(a), std::move(b)});
}

inline TypePtr type_indexed(TypePtr a) {
  return std::make_shared<TypeExpr>(TypeExpr{TypeKind::Indexed, std::move(a), nullptr});
}

inline bool equal(const TypePtr& x, const TypePtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case TypeKind::SortV:
    case TypeKind::Two:
      return true;
    case TypeKind::Prod:
    case TypeKind::Arrow:
      return equal(x->a, y->a) && equal(x->b, y->b);
    case TypeKind::Indexed:
      return equal(x->a, y->a);
  }
  return false;
}

inline std::string to_string(const TypePtr& t) {
  auto atom = [](const TypePtr& x) {
    return x->kind == TypeKind::SortV || x->kind == TypeKind::Two ||
           x->kind == TypeKind::Indexed;
  };
  switch (t->kind) {
    case TypeKind::SortV: return "V";
    case TypeKind::Two: return "2";
    case TypeKind::Prod: {
      auto wrap = [&](const TypePtr& x) {
        auto s = to_string(x);
        return atom(x) || x->kind == TypeKind::Prod ? s : "(" + s + ")";
      };
      return wrap(t->a) + " x " + wrap(t->b);
    }
    case TypeKind::Arrow: {
      auto lhs = to_string(t->a);
      if (!atom(t->a)) lhs = "(" + lhs + ")";
      return lhs + " -> " + to_string(t->b);
    }
    case TypeKind::Indexed: {
      auto inner = to_string(t->a);
      if (!atom(t->a)) inner = "(" + inner + ")";
      return inner + "^I";
    }
  }
  return "?";
}

using Signature = std::map<std::string, TypePtr>;

// The domain type of an n-ary predicate: V, V x V, V x (V x V), ...
inline TypePtr predicate_domain(int arity) {
  TypePtr t = type_sort_v();
  for (int k = 1; k < arity; ++k) t = type_prod(type_sort_v(), t);
  return t;
}

inline TypePtr predicate_type(int arity) {
  return type_arrow(predicate_domain(arity), type_two());
}

inline Signature signature_of(const World& w) {
  Signature sig;
  for (const auto& [name, rel] : w.relations) sig[name] = predicate_type(rel.arity);
  for (const auto& [name, fn] : w.functions)
    sig[name] = type_arrow(type_sort_v(), type_sort_v());
  return sig;
}

inline TypePtr typecheck(const TermPtr& t, const Signature& sig);

inline TypePtr typecheck(const FormulaPtr& f, const Signature& sig) {
  switch (f->kind) {
    case FormulaKind::Pred: {
      auto it = sig.find(f->name);
      if (it == sig.end()) fail(ErrorKind::UnknownName, "unknown name " + f->name);
      const TypePtr& declared = it->second;
      if (declared->kind != TypeKind::Arrow || declared->b->kind != TypeKind::Two)
        fail(ErrorKind::TypeMismatch, f->name + " is not a predicate");
      TypePtr args = typecheck(f->args.back(), sig);
      for (std::size_t k = f->args.size() - 1; k-- > 0;)
        args = type_prod(typecheck(f->args[k], sig), args);
      if (!equal(args, declared->a))
        fail(ErrorKind::TypeMismatch, "arguments of type " + to_string(args) +
                                          " do not match " + to_string(declared->a));
      return type_two();
    }
    case FormulaKind::Eq: {
      auto a = typecheck(f->t1, sig);
      auto b = typecheck(f->t2, sig);
      if (!equal(a, b))
        fail(ErrorKind::TypeMismatch,
             "cannot equate " + to_string(a) + " with " + to_string(b));
      return type_two();
    }
    case FormulaKind::Exist:
      typecheck(f->t1, sig);
      return type_two();
    case FormulaKind::Not:
      typecheck(f->f1, sig);
      return type_two();
    case FormulaKind::And:
    case FormulaKind::Or:
      typecheck(f->f1, sig);
      typecheck(f->f2, sig);
      return type_two();
    default:
      typecheck(f->f1, sig);
      return type_two();
  }
}

inline TypePtr typecheck(const TermPtr& t, const Signature& sig) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Const:
      return type_sort_v();
    case TermKind::FnRef: {
      auto it = sig.find(t->name);
      if (it == sig.end()) fail(ErrorKind::UnknownName, "unknown name " + t->name);
      return it->second;
    }
    case TermKind::Pair:
      return type_prod(typecheck(t->lhs, sig), typecheck(t->rhs, sig));
    case TermKind::App: {
      auto head = typecheck(t->lhs, sig);
      auto arg = typecheck(t->rhs, sig);
      if (head->kind != TypeKind::Arrow)
        fail(ErrorKind::TypeMismatch,
             "cannot apply a value of type " + to_string(head));
      if (!equal(head->a, arg))
        fail(ErrorKind::TypeMismatch, "argument of type " + to_string(arg) +
                                          " does not match " + to_string(head->a));
      return head->b;
    }
    case TermKind::Iota:
    case TermKind::IotaActual:
      typecheck(t->body, sig);
      return type_sort_v();
    case TermKind::Restrict:
      typecheck(t->body, sig);
      return typecheck(t->lhs, sig);
  }
  return type_sort_v();
}

// Event-indexed reading of a solved type: base sorts pick up an index,
// products and arrows lift componentwise.
inline TypePtr intension_type(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::SortV:
    case TypeKind::Two:
      return type_indexed(t);
    case TypeKind::Prod:
      return type_prod(intension_type(t->a), intension_type(t->b));
    case TypeKind::Arrow:
      return type_arrow(intension_type(t->a), intension_type(t->b));
    case TypeKind::Indexed:
      return t;
  }
  return t;
}

}  // namespace eventua
