#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eventua/algebra.hpp"
#include "eventua/domains.hpp"
#include "eventua/error.hpp"
#include "eventua/eval.hpp"
#include "eventua/parse.hpp"
#include "eventua/print.hpp"
#include "eventua/world.hpp"

namespace eventua {

// Script and REPL command layer. One command per line:
//
//   eval <formula> at <event>
//   evalterm <term> at <event>
//   intension <formula>
//   setop union|intersect|difference {x | F} {y | G} at <event>
//   join <cmp> {x | F} {y | G} at <event>
//   junction <rule> {x | F} {y | G} at <event>
//   restrict <R> where <formula> at <event>
//   evolvent <name> : <view> -> <event> [, <view> -> <event>]*
//   view <command-without-at> along <evolvent> at <view-event>
//   type <name> = {x | F}
//   extent <name> at <event>
//   vardomain <name> over <event>+ [limit <n>]
//   :world   :help   :quit
//
// Lines whose first character is '#' are comments. Diagnostics go to the
// error stream as "line N: message" and processing continues; the script
// exit status is 0 only when every command succeeded.

struct SessionOptions {
  std::string out_dir = ".";
  std::uint64_t vardomain_limit = 10000;
};

inline std::string snapshot_text(const Snapshot& snap) {
  std::string out = "view " + snap.view_event + " source " + snap.source_event + "\n";
  for (const auto& row : snap.rows) out += format_tuple(row) + "\n";
  return out;
}

inline void export_snapshot(const Snapshot& snap, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  out << snapshot_text(snap);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
}

inline void print_world_summary(const World& w, std::ostream& out) {
  out << "|V|=" << w.virtual_order.size() << " |H|=" << w.potential.size()
      << " |I|=" << w.event_order.size() << "\n";
  for (const auto& [name, rel] : w.relations)
    out << "relation " << name << "/" << rel.arity << " "
        << (rel.kind == RelationKind::Extensional ? "extensional" : "intensional")
        << "\n";
  for (const auto& [name, fn] : w.functions) out << "function " << name << "\n";
}

namespace detail {

struct Word {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
};

inline std::vector<Word> split_words(const std::string& s) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    out.push_back({s.substr(start, i - start), start, i});
  }
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Splits "<body> <keyword> <tail>" at the last standalone keyword.
inline bool split_last_keyword(const std::string& text, const std::string& keyword,
                               std::string& body, std::string& tail) {
  auto ws = split_words(text);
  for (std::size_t k = ws.size(); k-- > 0;) {
    if (ws[k].text == keyword) {
      body = trim(text.substr(0, ws[k].start));
      tail = trim(text.substr(ws[k].end));
      return true;
    }
  }
  return false;
}

inline std::string expect_event_tail(const std::string& text, std::string& body) {
  std::string tail;
  if (!split_last_keyword(text, "at", body, tail))
    fail(ErrorKind::Parse, "missing 'at <event>'");
  if (split_words(tail).size() != 1)
    fail(ErrorKind::Parse, "expected one event after 'at'");
  return tail;
}

// Parses "{x | F}" starting at pos, which is advanced past the '}'.
inline Abstraction parse_abstraction(const std::string& text, std::size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos >= text.size() || text[pos] != '{')
    fail(ErrorKind::Parse, "expected '{' starting an abstraction");
  std::size_t close = text.find('}', pos);
  if (close == std::string::npos) fail(ErrorKind::Parse, "unterminated abstraction");
  std::string inside = text.substr(pos + 1, close - pos - 1);
  pos = close + 1;
  std::size_t bar = inside.find('|');
  if (bar == std::string::npos) fail(ErrorKind::Parse, "expected '|' in abstraction");
  std::string var = trim(inside.substr(0, bar));
  if (!valid_name(var)) fail(ErrorKind::Parse, "invalid abstraction variable '" + var + "'");
  return Abstraction{var, parse_formula(inside.substr(bar + 1))};
}

inline void expect_exhausted(const std::string& text, std::size_t pos) {
  if (!trim(text.substr(pos)).empty())
    fail(ErrorKind::Parse, "unexpected trailing text '" + trim(text.substr(pos)) + "'");
}

}  // namespace detail

class Session {
 public:
  Session(World world, SessionOptions options, std::ostream& out, std::ostream& err,
          JunctionRegistry registry = JunctionRegistry())
      : world_(std::move(world)),
        options_(std::move(options)),
        registry_(std::move(registry)),
        out_(out),
        err_(err) {}

  const World& world() const { return world_; }
  JunctionRegistry& registry() { return registry_; }
  bool quit_requested() const { return quit_; }

  // Runs one command; returns false when it failed (diagnostic emitted).
  bool execute_line(const std::string& raw, int line_no) {
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') return true;
    try {
      dispatch(line);
      return true;
    } catch (const EngineError& e) {
      err_ << "line " << line_no << ": " << e.what() << "\n";
      return false;
    }
  }

 private:
  void dispatch(const std::string& line) {
    auto ws = detail::split_words(line);
    const std::string& head = ws[0].text;
    std::string rest = detail::trim(line.substr(ws[0].end));
    if (head == ":quit") {
      quit_ = true;
    } else if (head == ":world") {
      print_world_summary(world_, out_);
    } else if (head == ":help") {
      print_help();
    } else if (head == "eval") {
      std::string body;
      std::string event = detail::expect_event_tail(rest, body);
      Env env;
      out_ << (eval_formula(world_, env, parse_formula(body), event) ? "1" : "0") << "\n";
    } else if (head == "evalterm") {
      std::string body;
      std::string event = detail::expect_event_tail(rest, body);
      Env env;
      auto v = eval_term(world_, env, parse_term(body), event);
      out_ << (v ? to_string(*v) : "undefined") << "\n";
    } else if (head == "intension") {
      Env env;
      Concept c = intension(world_, env, parse_formula(rest));
      for (const auto& [event, value] : c.table)
        out_ << event << " : " << to_string(*value) << "\n";
    } else if (head == "setop" || head == "join" || head == "junction") {
      std::string body;
      std::string event = detail::expect_event_tail(rest, body);
      print_pairs_or_names(parse_relational(head, body), event);
    } else if (head == "restrict") {
      std::string body;
      std::string event = detail::expect_event_tail(rest, body);
      auto q = parse_restrict(body);
      for (const auto& p : restricted_relation(world_, q->name, q->formula, event))
        out_ << "(" << p.first << "," << p.second << ")\n";
    } else if (head == "evolvent") {
      define_evolvent(rest);
    } else if (head == "view") {
      run_view(rest);
    } else if (head == "type") {
      define_type(rest);
    } else if (head == "extent") {
      std::string body;
      std::string event = detail::expect_event_tail(rest, body);
      for (const auto& h : type_extent(world_, find_type(detail::trim(body)), event))
        out_ << h << "\n";
    } else if (head == "vardomain") {
      run_vardomain(rest);
    } else {
      fail(ErrorKind::Parse, "unknown command '" + head + "'");
    }
  }

  // setop/join/junction share the "<word> {x|F} {y|G}" layout.
  QueryPtr parse_relational(const std::string& head, const std::string& body) {
    auto ws = detail::split_words(body);
    if (ws.empty()) fail(ErrorKind::Parse, "missing operator after '" + head + "'");
    std::string op = ws[0].text;
    std::size_t pos = ws[0].end;
    Abstraction lhs = detail::parse_abstraction(body, pos);
    Abstraction rhs = detail::parse_abstraction(body, pos);
    detail::expect_exhausted(body, pos);
    if (head == "setop") return query_setop(parse_setop(op), lhs, rhs);
    if (head == "join") return query_join(parse_comparator(op), lhs, rhs);
    if (!registry_.has(op)) fail(ErrorKind::UnknownRule, "unknown rule " + op);
    return query_junction(op, lhs, rhs);
  }

  QueryPtr parse_restrict(const std::string& body) {
    auto ws = detail::split_words(body);
    if (ws.size() < 3 || ws[1].text != "where")
      fail(ErrorKind::Parse, "expected 'restrict <relation> where <formula>'");
    return query_restrict(ws[0].text, parse_formula(body.substr(ws[1].end)));
  }

  void print_pairs_or_names(const QueryPtr& q, const std::string& event) {
    auto result = eval_query(world_, registry_, q, event);
    for (const auto& row : result.rows) {
      if (row.size() == 1)
        out_ << row[0] << "\n";
      else
        out_ << format_tuple(row) << "\n";
    }
  }

  void define_evolvent(const std::string& rest) {
    std::size_t colon = rest.find(':');
    if (colon == std::string::npos)
      fail(ErrorKind::Parse, "expected 'evolvent <name> : <view> -> <event>, ...'");
    std::string name = detail::trim(rest.substr(0, colon));
    if (!detail::valid_name(name))
      fail(ErrorKind::Parse, "invalid evolvent name '" + name + "'");
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string tail = rest.substr(colon + 1);
    std::size_t start = 0;
    while (start <= tail.size()) {
      std::size_t comma = tail.find(',', start);
      std::string piece = comma == std::string::npos ? tail.substr(start)
                                                     : tail.substr(start, comma - start);
      std::size_t arrow = piece.find("->");
      if (arrow == std::string::npos)
        fail(ErrorKind::Parse, "expected '<view> -> <event>' in evolvent");
      std::string b = detail::trim(piece.substr(0, arrow));
      std::string i = detail::trim(piece.substr(arrow + 2));
      if (!detail::valid_name(b) || !detail::valid_name(i))
        fail(ErrorKind::Parse, "expected '<view> -> <event>' in evolvent");
      pairs.emplace_back(b, i);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    evolvents_[name] = Evolvent::make(world_, pairs);
  }

  void run_view(const std::string& rest) {
    std::string before_at;
    std::string b = detail::expect_event_tail(rest, before_at);
    std::string sub, fname;
    if (!detail::split_last_keyword(before_at, "along", sub, fname))
      fail(ErrorKind::Parse, "missing 'along <evolvent>'");
    if (detail::split_words(fname).size() != 1)
      fail(ErrorKind::Parse, "expected one evolvent name after 'along'");
    auto it = evolvents_.find(fname);
    if (it == evolvents_.end()) fail(ErrorKind::UnknownName, "unknown evolvent " + fname);
    auto ws = detail::split_words(sub);
    if (ws.empty()) fail(ErrorKind::Parse, "missing command after 'view'");
    QueryPtr q = parse_subquery(ws[0].text, detail::trim(sub.substr(ws[0].end)));
    Snapshot snap = materialize_view(world_, registry_, q, it->second, b);
    out_ << snapshot_text(snap);
    export_snapshot(snap, options_.out_dir + "/" + snap.view_event + ".view");
  }

  QueryPtr parse_subquery(const std::string& head, const std::string& body) {
    if (head == "eval") return query_formula(parse_formula(body));
    if (head == "evalterm") return query_term(parse_term(body));
    if (head == "setop" || head == "join" || head == "junction")
      return parse_relational(head, body);
    if (head == "restrict") return parse_restrict(body);
    fail(ErrorKind::Parse, "command '" + head + "' cannot appear under 'view'");
  }

  void define_type(const std::string& rest) {
    std::size_t brace = rest.find('{');
    if (brace == std::string::npos)
      fail(ErrorKind::Parse, "expected 'type <name> = {x | F}'");
    auto ws = detail::split_words(rest.substr(0, brace));
    if (ws.size() != 2 || ws[1].text != "=")
      fail(ErrorKind::Parse, "expected 'type <name> = {x | F}'");
    std::string name = ws[0].text;
    if (!detail::valid_name(name)) fail(ErrorKind::Parse, "invalid type name '" + name + "'");
    std::size_t pos = brace;
    Abstraction abs = detail::parse_abstraction(rest, pos);
    detail::expect_exhausted(rest, pos);
    TypeDef def{name, abs.var, abs.body};
    validate_type_def(def);
    types_[name] = def;
  }

  const TypeDef& find_type(const std::string& name) const {
    auto it = types_.find(name);
    if (it == types_.end()) fail(ErrorKind::UnknownName, "unknown type " + name);
    return it->second;
  }

  void run_vardomain(const std::string& rest) {
    auto ws = detail::split_words(rest);
    if (ws.size() < 3 || ws[1].text != "over")
      fail(ErrorKind::Parse, "expected 'vardomain <type> over <event>...'");
    const TypeDef& def = find_type(ws[0].text);
    std::vector<std::string> events;
    std::uint64_t limit = options_.vardomain_limit;
    for (std::size_t k = 2; k < ws.size(); ++k) {
      if (ws[k].text == "limit") {
        if (k + 2 != ws.size()) fail(ErrorKind::Parse, "expected 'limit <n>'");
        const std::string& n = ws[k + 1].text;
        if (n.empty() || n.find_first_not_of("0123456789") != std::string::npos)
          fail(ErrorKind::Parse, "expected 'limit <n>'");
        limit = std::stoull(n);
        if (limit == 0) fail(ErrorKind::Parse, "limit must be positive");
        break;
      }
      events.push_back(ws[k].text);
    }
    if (events.empty()) fail(ErrorKind::Parse, "expected at least one event after 'over'");
    VariableDomain dom(world_, def, events);
    ChoiceFunction cf;
    std::uint64_t shown = 0;
    while (shown < limit && dom.next(cf)) {
      out_ << "{";
      for (std::size_t k = 0; k < cf.entries.size(); ++k) {
        if (k) out_ << ", ";
        out_ << cf.entries[k].first << "->" << cf.entries[k].second;
      }
      out_ << "}\n";
      ++shown;
    }
    out_ << "total " << dom.total() << "\n";
  }

  void print_help() {
    out_ << "commands:\n"
         << "  eval <formula> at <event>\n"
         << "  evalterm <term> at <event>\n"
         << "  intension <formula>\n"
         << "  setop union|intersect|difference {x | F} {y | G} at <event>\n"
         << "  join =|!=|<|>|<=|>= {x | F} {y | G} at <event>\n"
         << "  junction <rule> {x | F} {y | G} at <event>\n"
         << "  restrict <relation> where <formula> at <event>\n"
         << "  evolvent <name> : <view> -> <event>, ...\n"
         << "  view <command-without-at> along <evolvent> at <view-event>\n"
         << "  type <name> = {x | F}\n"
         << "  extent <type> at <event>\n"
         << "  vardomain <type> over <event>... [limit <n>]\n"
         << "  :world  :help  :quit\n";
  }

  World world_;
  SessionOptions options_;
  JunctionRegistry registry_;
  std::ostream& out_;
  std::ostream& err_;
  std::map<std::string, Evolvent> evolvents_;
  std::map<std::string, TypeDef> types_;
  bool quit_ = false;
};

inline int run_script(const std::string& world_path, const std::string& script_path,
                      std::ostream& out, std::ostream& err,
                      const SessionOptions& options = {}) {
  std::optional<World> world;
  try {
    world = load_world_file(world_path);
  } catch (const EngineError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  std::ifstream script(script_path);
  if (!script) {
    err << "error: cannot read " << script_path << "\n";
    return 2;
  }
  Session session(std::move(*world), options, out, err);
  bool ok = true;
  std::string line;
  int line_no = 0;
  while (std::getline(script, line)) {
    ok = session.execute_line(line, ++line_no) && ok;
    if (session.quit_requested()) break;
  }
  return ok ? 0 : 1;
}

inline int run_repl(const std::string& world_path, std::istream& in, std::ostream& out,
                    std::ostream& err, const SessionOptions& options = {}) {
  std::optional<World> world;
  try {
    world = load_world_file(world_path);
  } catch (const EngineError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  Session session(std::move(*world), options, out, err);
  std::string line;
  int line_no = 0;
  err << "eventua> " << std::flush;
  while (std::getline(in, line)) {
    session.execute_line(line, ++line_no);
    if (session.quit_requested()) break;
    err << "eventua> " << std::flush;
  }
  return 0;
}

inline int check_world(const std::string& world_path, std::ostream& out, std::ostream& err) {
  try {
    World w = load_world_file(world_path);
    print_world_summary(w, out);
    return 0;
  } catch (const EngineError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace eventua
