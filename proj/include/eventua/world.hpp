#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eventua/error.hpp"
#include "eventua/rational.hpp"

namespace eventua {

// A world is a finite three-layer universe of named individuals observed
// through a finite set of events:
//
//   actual(i)  subset of  potential  subset of  virtuals
//
// Relations hold tuples of individuals, either once and for all
// (extensional) or per event (intensional). Function constants are total
// unary maps over the virtual layer. Worlds are immutable after loading;
// every evaluator in the library treats them as read-only.

struct Individual {
  std::string name;
  std::optional<Rational> payload;

  bool operator==(const Individual&) const = default;
};

enum class RelationKind { Extensional, Intensional };

using Tuple = std::vector<std::string>;

struct Relation {
  std::string name;
  int arity = 1;
  RelationKind kind = RelationKind::Extensional;
  std::set<Tuple> tuples;                           // extensional extension
  std::map<std::string, std::set<Tuple>> per_event; // intensional extensions

  bool operator==(const Relation&) const = default;

  // Extension visible at the given event. Intensional relations with no
  // declared tuples at an event have an empty extension there.
  const std::set<Tuple>& extension_at(const std::string& event) const {
    static const std::set<Tuple> empty;
    if (kind == RelationKind::Extensional) return tuples;
    auto it = per_event.find(event);
    return it == per_event.end() ? empty : it->second;
  }
};

struct FunctionConst {
  std::string name;
  std::map<std::string, std::string> graph; // total on the virtual layer

  bool operator==(const FunctionConst&) const = default;
};

struct World {
  std::vector<std::string> virtual_order;   // declared order of V
  std::map<std::string, Individual> individuals;
  std::vector<std::string> potential_order; // declared order of H
  std::set<std::string> potential;
  std::vector<std::string> event_order;     // declared order of I
  std::set<std::string> events;
  std::map<std::string, std::set<std::string>> actual; // one entry per event
  std::map<std::string, Relation> relations;
  std::map<std::string, FunctionConst> functions;

  bool operator==(const World&) const = default;

  bool has_individual(const std::string& name) const {
    return individuals.count(name) != 0;
  }

  bool is_potential(const std::string& name) const {
    return potential.count(name) != 0;
  }

  void require_event(const std::string& event) const {
    if (!events.count(event)) fail(ErrorKind::UnknownEvent, "unknown event " + event);
  }

  // The actual layer at an event.
  const std::set<std::string>& actual_at(const std::string& event) const {
    require_event(event);
    return actual.at(event);
  }

  const std::optional<Rational>& payload_of(const std::string& name) const {
    auto it = individuals.find(name);
    if (it == individuals.end())
      fail(ErrorKind::UnknownIndividual, "unknown individual " + name);
    return it->second.payload;
  }

  // Checks every stratum and reference constraint; loaders call this once
  // construction is complete, hand-built worlds in tests call it directly.
  void validate() const;
};

namespace detail {

inline bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

inline bool reserved_word(const std::string& s) {
  return s == "forall" || s == "exists" || s == "iota" || s == "rest" ||
         s == "or" || s == "E";
}

}  // namespace detail

inline void World::validate() const {
  if (virtual_order.empty()) fail(ErrorKind::Stratum, "world has no individuals");
  if (potential.empty()) fail(ErrorKind::Stratum, "world has no potential individuals");
  if (event_order.empty()) fail(ErrorKind::Stratum, "world has no events");
  for (const auto& h : potential)
    if (!has_individual(h))
      fail(ErrorKind::Stratum, "potential individual " + h + " is not virtual");
  for (const auto& e : event_order) {
    auto it = actual.find(e);
    if (it == actual.end()) fail(ErrorKind::Stratum, "no actual layer for event " + e);
    for (const auto& u : it->second)
      if (!is_potential(u))
        fail(ErrorKind::Stratum, "actual individual " + u + " at " + e + " is not potential");
  }
  for (const auto& [name, rel] : relations) {
    auto check_tuples = [&](const std::set<Tuple>& ts) {
      for (const auto& t : ts) {
        if (static_cast<int>(t.size()) != rel.arity)
          fail(ErrorKind::Arity, "relation " + name + "/" + std::to_string(rel.arity) +
                                     ": tuple of arity " + std::to_string(t.size()));
        for (const auto& m : t)
          if (!has_individual(m))
            fail(ErrorKind::UnknownIndividual, "unknown individual " + m + " in relation " + name);
      }
    };
    check_tuples(rel.tuples);
    for (const auto& [e, ts] : rel.per_event) {
      if (!events.count(e)) fail(ErrorKind::UnknownEvent, "unknown event " + e + " in relation " + name);
      check_tuples(ts);
    }
  }
  for (const auto& [name, fn] : functions) {
    for (const auto& [a, b] : fn.graph) {
      if (!has_individual(a))
        fail(ErrorKind::UnknownIndividual, "unknown individual " + a + " in function " + name);
      if (!has_individual(b))
        fail(ErrorKind::UnknownIndividual, "unknown individual " + b + " in function " + name);
    }
    for (const auto& v : virtual_order)
      if (!fn.graph.count(v))
        fail(ErrorKind::IncompleteFunction, "function " + name + " has no value for " + v);
  }
}

// ---------------------------------------------------------------------------
// World file format (line oriented, '#' starts a comment):
//
//   world
//   virtual a b c d
//   potential a b c
//   numeric a=1 b=2
//   events i1 i2
//   actual i1 : a b
//   actual i2 : b c
//   relation P/1 intensional
//     at i1 : (a)
//     at i2 : (b) (c)
//   relation Q/2 extensional : (a,b) (b,c)
//   function g : a->b b->c c->a d->d
//
// Sections appear in this order; numeric, actual, relation and function
// lines are optional, events without an actual line have an empty layer.
// ---------------------------------------------------------------------------

namespace detail {

struct LineScanner {
  std::string text;
  int line_no = 0;

  [[noreturn]] void err(ErrorKind kind, const std::string& msg) const {
    throw EngineError(kind, "line " + std::to_string(line_no) + ": " + msg);
  }
};

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::string checked_name(const LineScanner& ln, const std::string& tok,
                                const char* what) {
  if (!valid_name(tok))
    ln.err(ErrorKind::Parse, std::string("invalid ") + what + " name '" + tok + "'");
  return tok;
}

// Parses "(a,b) (c , d)" style tuple lists.
inline std::vector<Tuple> parse_tuples(const LineScanner& ln, const std::string& rest) {
  std::vector<Tuple> out;
  std::size_t i = 0;
  auto skip_ws = [&] { while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i; };
  skip_ws();
  while (i < rest.size()) {
    if (rest[i] != '(') ln.err(ErrorKind::Parse, "expected '(' in tuple list");
    std::size_t close = rest.find(')', i);
    if (close == std::string::npos) ln.err(ErrorKind::Parse, "unterminated tuple");
    std::string body = rest.substr(i + 1, close - i - 1);
    Tuple t;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = body.find(',', start);
      std::string part = comma == std::string::npos ? body.substr(start)
                                                    : body.substr(start, comma - start);
      std::size_t b = part.find_first_not_of(" \t");
      std::size_t e = part.find_last_not_of(" \t");
      if (b == std::string::npos) ln.err(ErrorKind::Parse, "empty tuple component");
      t.push_back(checked_name(ln, part.substr(b, e - b + 1), "individual"));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    out.push_back(std::move(t));
    i = close + 1;
    skip_ws();
  }
  return out;
}

// Parses "a->b b -> c" style graph lists.
inline std::vector<std::pair<std::string, std::string>> parse_arrows(
    const LineScanner& ln, const std::string& rest) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<std::string> pieces;
  for (const auto& tok : split_ws(rest)) {
    std::size_t p = 0;
    while (p < tok.size()) {
      std::size_t arrow = tok.find("->", p);
      if (arrow == std::string::npos) {
        pieces.push_back(tok.substr(p));
        break;
      }
      if (arrow > p) pieces.push_back(tok.substr(p, arrow - p));
      pieces.push_back("->");
      p = arrow + 2;
    }
  }
  for (std::size_t k = 0; k < pieces.size(); k += 3) {
    if (k + 2 >= pieces.size() || pieces[k + 1] != "->")
      ln.err(ErrorKind::Parse, "expected 'name->name' in function graph");
    out.emplace_back(checked_name(ln, pieces[k], "individual"),
                     checked_name(ln, pieces[k + 2], "individual"));
  }
  return out;
}

}  // namespace detail

inline World load_world(const std::string& source) {
  using detail::LineScanner;
  World w;
  LineScanner ln;
  std::istringstream in(source);
  std::string raw;

  // Section ordering is tracked with a monotone stage counter.
  enum Stage { SWorld, SVirtual, SPotential, SEvents, SActual, SRelation, SFunction, SDone };
  int stage = SWorld;
  Relation* open_relation = nullptr;
  std::set<std::string> open_relation_events;
  std::set<std::string> seen_actual;
  bool saw_numeric = false;

  auto advance_to = [&](int wanted, const char* what) {
    if (stage > wanted) ln.err(ErrorKind::Parse, std::string(what) + " section out of order");
    stage = wanted;
  };

  while (std::getline(in, raw)) {
    ++ln.line_no;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    auto toks = detail::split_ws(raw);
    if (toks.empty()) continue;
    ln.text = raw;
    const std::string& head = toks[0];
    if (stage == SWorld && head != "world")
      ln.err(ErrorKind::Parse, "missing 'world' header");

    if (head == "world") {
      if (stage != SWorld || toks.size() != 1) ln.err(ErrorKind::Parse, "misplaced 'world' header");
      stage = SVirtual;
    } else if (head == "virtual") {
      if (stage != SVirtual) ln.err(ErrorKind::Parse, "'virtual' section out of order");
      if (toks.size() < 2) ln.err(ErrorKind::Parse, "empty virtual section");
      for (std::size_t k = 1; k < toks.size(); ++k) {
        auto name = detail::checked_name(ln, toks[k], "individual");
        if (w.individuals.count(name)) ln.err(ErrorKind::DuplicateName, "duplicate individual " + name);
        w.individuals[name] = Individual{name, std::nullopt};
        w.virtual_order.push_back(name);
      }
      stage = SPotential;
    } else if (head == "potential") {
      if (stage != SPotential) ln.err(ErrorKind::Parse, "'potential' section out of order");
      if (toks.size() < 2) ln.err(ErrorKind::Parse, "empty potential section");
      for (std::size_t k = 1; k < toks.size(); ++k) {
        auto name = detail::checked_name(ln, toks[k], "individual");
        if (!w.has_individual(name))
          ln.err(ErrorKind::Stratum, "potential individual " + name + " is not virtual");
        if (!w.potential.insert(name).second)
          ln.err(ErrorKind::DuplicateName, "duplicate potential individual " + name);
        w.potential_order.push_back(name);
      }
      stage = SEvents;
    } else if (head == "numeric") {
      if (stage != SEvents || saw_numeric) ln.err(ErrorKind::Parse, "'numeric' section out of order");
      saw_numeric = true;
      for (std::size_t k = 1; k < toks.size(); ++k) {
        std::size_t eq = toks[k].find('=');
        if (eq == std::string::npos) ln.err(ErrorKind::Parse, "expected 'name=value'");
        auto name = detail::checked_name(ln, toks[k].substr(0, eq), "individual");
        auto it = w.individuals.find(name);
        if (it == w.individuals.end()) ln.err(ErrorKind::UnknownIndividual, "unknown individual " + name);
        if (it->second.payload) ln.err(ErrorKind::DuplicateName, "duplicate payload for " + name);
        try {
          it->second.payload = parse_rational(toks[k].substr(eq + 1));
        } catch (const EngineError& e) {
          ln.err(ErrorKind::Parse, e.what());
        }
      }
    } else if (head == "events") {
      advance_to(SEvents, "'events'");
      if (toks.size() < 2) ln.err(ErrorKind::Parse, "empty events section");
      for (std::size_t k = 1; k < toks.size(); ++k) {
        auto name = detail::checked_name(ln, toks[k], "event");
        if (!w.events.insert(name).second) ln.err(ErrorKind::DuplicateName, "duplicate event " + name);
        w.event_order.push_back(name);
        w.actual[name] = {};
      }
      stage = SActual;
    } else if (head == "actual") {
      advance_to(SActual, "'actual'");
      if (toks.size() < 3 || toks[2] != ":") ln.err(ErrorKind::Parse, "expected 'actual <event> : ...'");
      auto event = toks[1];
      if (!w.events.count(event)) ln.err(ErrorKind::UnknownEvent, "unknown event " + event);
      if (!seen_actual.insert(event).second)
        ln.err(ErrorKind::DuplicateName, "duplicate actual section for " + event);
      auto& layer = w.actual[event];
      for (std::size_t k = 3; k < toks.size(); ++k) {
        auto name = detail::checked_name(ln, toks[k], "individual");
        if (!w.is_potential(name))
          ln.err(ErrorKind::Stratum, "actual individual " + name + " at " + event + " is not potential");
        if (!layer.insert(name).second)
          ln.err(ErrorKind::DuplicateName, "duplicate actual individual " + name);
      }
    } else if (head == "relation") {
      if (stage > SRelation) ln.err(ErrorKind::Parse, "'relation' section out of order");
      stage = SRelation;
      if (toks.size() < 3) ln.err(ErrorKind::Parse, "expected 'relation NAME/ARITY KIND'");
      std::size_t slash = toks[1].find('/');
      if (slash == std::string::npos) ln.err(ErrorKind::Parse, "expected NAME/ARITY");
      auto name = detail::checked_name(ln, toks[1].substr(0, slash), "relation");
      if (detail::reserved_word(name)) ln.err(ErrorKind::Parse, "relation name '" + name + "' is reserved");
      std::string arity_text = toks[1].substr(slash + 1);
      if (arity_text.empty() ||
          arity_text.find_first_not_of("0123456789") != std::string::npos)
        ln.err(ErrorKind::Parse, "malformed arity");
      int arity = std::stoi(arity_text);
      if (arity < 1) ln.err(ErrorKind::Parse, "arity must be positive");
      if (w.relations.count(name)) ln.err(ErrorKind::DuplicateName, "duplicate relation " + name);
      Relation rel;
      rel.name = name;
      rel.arity = arity;
      if (toks[2] == "intensional") {
        rel.kind = RelationKind::Intensional;
        if (toks.size() != 3) ln.err(ErrorKind::Parse, "intensional relations list tuples on 'at' lines");
      } else if (toks[2] == "extensional") {
        rel.kind = RelationKind::Extensional;
        if (toks.size() < 4 || toks[3] != ":") ln.err(ErrorKind::Parse, "expected ':' after 'extensional'");
        std::size_t colon = raw.find(':');
        for (auto& t : detail::parse_tuples(ln, raw.substr(colon + 1))) {
          if (static_cast<int>(t.size()) != arity)
            ln.err(ErrorKind::Arity, "relation " + name + "/" + std::to_string(arity) +
                                         ": tuple of arity " + std::to_string(t.size()));
          for (const auto& m : t)
            if (!w.has_individual(m)) ln.err(ErrorKind::UnknownIndividual, "unknown individual " + m);
          rel.tuples.insert(std::move(t));
        }
      } else {
        ln.err(ErrorKind::Parse, "relation kind must be 'extensional' or 'intensional'");
      }
      open_relation = &(w.relations[name] = std::move(rel));
      open_relation_events.clear();
    } else if (head == "at") {
      if (stage != SRelation || !open_relation || open_relation->kind != RelationKind::Intensional)
        ln.err(ErrorKind::Parse, "'at' line outside an intensional relation");
      if (toks.size() < 3 || toks[2] != ":") ln.err(ErrorKind::Parse, "expected 'at <event> : ...'");
      auto event = toks[1];
      if (!w.events.count(event)) ln.err(ErrorKind::UnknownEvent, "unknown event " + event);
      if (!open_relation_events.insert(event).second)
        ln.err(ErrorKind::DuplicateName, "duplicate 'at " + event + "' line");
      std::size_t colon = raw.find(':');
      std::set<Tuple> ext;
      for (auto& t : detail::parse_tuples(ln, raw.substr(colon + 1))) {
        if (static_cast<int>(t.size()) != open_relation->arity)
          ln.err(ErrorKind::Arity, "relation " + open_relation->name + "/" +
                                       std::to_string(open_relation->arity) + ": tuple of arity " +
                                       std::to_string(t.size()));
        for (const auto& m : t)
          if (!w.has_individual(m)) ln.err(ErrorKind::UnknownIndividual, "unknown individual " + m);
        ext.insert(std::move(t));
      }
      // An empty extension is the default; keep the stored table canonical.
      if (!ext.empty()) open_relation->per_event[event] = std::move(ext);
    } else if (head == "function") {
      if (stage > SFunction) ln.err(ErrorKind::Parse, "'function' section out of order");
      stage = SFunction;
      open_relation = nullptr;
      if (toks.size() < 3 || toks[2] != ":") ln.err(ErrorKind::Parse, "expected 'function NAME : ...'");
      auto name = detail::checked_name(ln, toks[1], "function");
      if (detail::reserved_word(name)) ln.err(ErrorKind::Parse, "function name '" + name + "' is reserved");
      if (w.functions.count(name)) ln.err(ErrorKind::DuplicateName, "duplicate function " + name);
      if (w.relations.count(name))
        ln.err(ErrorKind::DuplicateName, "function " + name + " collides with a relation");
      FunctionConst fn;
      fn.name = name;
      std::size_t colon = raw.find(':');
      for (auto& [a, b] : detail::parse_arrows(ln, raw.substr(colon + 1))) {
        if (!w.has_individual(a)) ln.err(ErrorKind::UnknownIndividual, "unknown individual " + a);
        if (!w.has_individual(b)) ln.err(ErrorKind::UnknownIndividual, "unknown individual " + b);
        if (!fn.graph.emplace(a, b).second)
          ln.err(ErrorKind::DuplicateName, "duplicate graph entry for " + a);
      }
      for (const auto& v : w.virtual_order)
        if (!fn.graph.count(v))
          ln.err(ErrorKind::IncompleteFunction, "function " + name + " has no value for " + v);
      w.functions[name] = std::move(fn);
    } else {
      ln.err(ErrorKind::Parse, "unrecognized line '" + head + "'");
    }
  }
  if (stage == SWorld) fail(ErrorKind::Parse, "missing 'world' header");
  w.validate();
  return w;
}

inline World load_world_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_world(buf.str());
}

inline std::string format_tuple(const Tuple& t) {
  std::string out = "(";
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k) out += ",";
    out += t[k];
  }
  out += ")";
  return out;
}

// Canonical serialization; load_world(to_world_text(w)) reconstructs w.
inline std::string to_world_text(const World& w) {
  std::ostringstream out;
  out << "world\n";
  out << "virtual";
  for (const auto& v : w.virtual_order) out << " " << v;
  out << "\n";
  out << "potential";
  for (const auto& h : w.potential_order) out << " " << h;
  out << "\n";
  std::vector<std::string> numeric;
  for (const auto& v : w.virtual_order) {
    const auto& ind = w.individuals.at(v);
    if (ind.payload) numeric.push_back(v + "=" + ind.payload->str());
  }
  if (!numeric.empty()) {
    out << "numeric";
    for (const auto& n : numeric) out << " " << n;
    out << "\n";
  }
  out << "events";
  for (const auto& e : w.event_order) out << " " << e;
  out << "\n";
  for (const auto& e : w.event_order) {
    const auto& layer = w.actual.at(e);
    if (layer.empty()) continue;
    out << "actual " << e << " :";
    for (const auto& u : layer) out << " " << u;
    out << "\n";
  }
  for (const auto& [name, rel] : w.relations) {
    out << "relation " << name << "/" << rel.arity;
    if (rel.kind == RelationKind::Extensional) {
      out << " extensional :";
      for (const auto& t : rel.tuples) out << " " << format_tuple(t);
      out << "\n";
    } else {
      out << " intensional\n";
      for (const auto& e : w.event_order) {
        auto it = rel.per_event.find(e);
        if (it == rel.per_event.end() || it->second.empty()) continue;
        out << "  at " << e << " :";
        for (const auto& t : it->second) out << " " << format_tuple(t);
        out << "\n";
      }
    }
  }
  for (const auto& [name, fn] : w.functions) {
    out << "function " << name << " :";
    for (const auto& [a, b] : fn.graph) out << " " << a << "->" << b;
    out << "\n";
  }
  return out.str();
}

}  // namespace eventua
