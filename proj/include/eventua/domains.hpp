#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "eventua/ast.hpp"
#include "eventua/error.hpp"
#include "eventua/eval.hpp"
#include "eventua/world.hpp"

namespace eventua {

// A named type is a generator formula over one variable; its extent at an
// event is every potential individual the generator accepts there. A
// variable domain over an ordered list of events enumerates the choice
// functions picking one extent member per event.

struct TypeDef {
  std::string name;
  std::string var;
  FormulaPtr generator;
};

// The generator must use exactly its bound variable.
inline void validate_type_def(const TypeDef& def) {
  auto free = free_vars(def.generator);
  if (free.size() != 1 || !free.count(def.var))
    fail(ErrorKind::UnboundVariable, "generator of type " + def.name +
                                         " must have exactly the free variable " + def.var);
}

inline std::set<std::string> type_extent(const World& w, const TypeDef& def,
                                         const std::string& event) {
  w.require_event(event);
  validate_type_def(def);
  std::set<std::string> out;
  for (const auto& h : w.potential) {
    Env env{{def.var, DomainValue::individual(h)}};
    if (eval_formula(w, env, def.generator, event)) out.insert(h);
  }
  return out;
}

// One row of a variable domain: the chosen individual per event, in the
// event order the domain was built over.
struct ChoiceFunction {
  std::vector<std::pair<std::string, std::string>> entries;

  bool operator==(const ChoiceFunction&) const = default;
};

// Lazy lexicographic enumerator over the product of per-event extents.
// Events keep the order they were requested in; individuals are ordered by
// name. An empty extent anywhere makes the domain empty.
class VariableDomain {
 public:
  VariableDomain(const World& w, const TypeDef& def, const std::vector<std::string>& events) {
    if (events.empty()) fail(ErrorKind::Parse, "variable domain needs at least one event");
    std::set<std::string> seen;
    for (const auto& e : events) {
      w.require_event(e);
      if (!seen.insert(e).second)
        fail(ErrorKind::DuplicateName, "duplicate event " + e + " in variable domain");
      auto ext = type_extent(w, def, e);
      extents_.emplace_back(e, std::vector<std::string>(ext.begin(), ext.end()));
      if (ext.empty()) empty_ = true;
    }
    odometer_.assign(extents_.size(), 0);
    done_ = empty_;
  }

  // Product of the extent sizes, saturating on overflow.
  std::uint64_t total() const {
    std::uint64_t n = 1;
    for (const auto& [e, ext] : extents_) {
      std::uint64_t m = ext.size();
      if (m != 0 && n > UINT64_MAX / m) return UINT64_MAX;
      n *= m;
    }
    return n;
  }

  bool next(ChoiceFunction& out) {
    if (done_) return false;
    out.entries.clear();
    for (std::size_t k = 0; k < extents_.size(); ++k)
      out.entries.emplace_back(extents_[k].first, extents_[k].second[odometer_[k]]);
    // Odometer step: the last event varies fastest.
    std::size_t k = extents_.size();
    while (k-- > 0) {
      if (++odometer_[k] < extents_[k].second.size()) return true;
      odometer_[k] = 0;
    }
    done_ = true;
    return true;
  }

 private:
  std::vector<std::pair<std::string, std::vector<std::string>>> extents_;
  std::vector<std::size_t> odometer_;
  bool empty_ = false;
  bool done_ = false;
};

// At most `limit` choice functions in lexicographic order.
inline std::vector<ChoiceFunction> variable_domain(const World& w, const TypeDef& def,
                                                   const std::vector<std::string>& events,
                                                   std::uint64_t limit) {
  if (limit == 0) fail(ErrorKind::Parse, "limit must be positive");
  VariableDomain dom(w, def, events);
  std::vector<ChoiceFunction> out;
  ChoiceFunction cf;
  while (out.size() < limit && dom.next(cf)) out.push_back(cf);
  return out;
}

// Concepts classified by where their values live, read pointwise across
// events; undefined entries constrain nothing.
//
//   Propositional   a formula concept
//   Actual          every defined value is actual at its event
//   Possible        every defined value is potential
//   Virtual         anything else
enum class ConceptClass { Propositional, Actual, Possible, Virtual };

inline const char* to_string(ConceptClass c) {
  switch (c) {
    case ConceptClass::Propositional: return "propositional";
    case ConceptClass::Actual: return "actual";
    case ConceptClass::Possible: return "possible";
    case ConceptClass::Virtual: return "virtual";
  }
  return "?";
}

inline ConceptClass classify_concept(const World& w, const Concept& c) {
  if (c.formula_concept) return ConceptClass::Propositional;
  bool all_actual = true, all_potential = true;
  for (const auto& [event, value] : c.table) {
    if (!value) continue;
    if (value->kind != DomainValue::Kind::Ind)
      fail(ErrorKind::NonIndividualConcept,
           "concept value at " + event + " is not an individual");
    if (!w.actual_at(event).count(value->ind)) all_actual = false;
    if (!w.is_potential(value->ind)) all_potential = false;
  }
  if (all_actual) return ConceptClass::Actual;
  if (all_potential) return ConceptClass::Possible;
  return ConceptClass::Virtual;
}

}  // namespace eventua
