#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "eventua/ast.hpp"
#include "eventua/error.hpp"

namespace eventua {

// Recursive descent parser for the surface language.
//
//   formula  :=  imp ( '<->' imp )*                     left associative
//   imp      :=  or ( '->' imp )?                       right associative
//   or       :=  and ( 'or' and )*
//   and      :=  unary ( '&' unary )*
//   unary    :=  '!' unary | quantifier | atom
//   quant    :=  ('forall'|'forall@'|'exists'|'exists@') VAR '.' formula
//   atom     :=  'E' '(' term ')' | '(' formula ')'
//             |  NAME '(' term (',' term)* ')'          predicate
//             |  term '=' term
//   term     :=  base ( '(' term ')' )*
//   base     :=  VAR | NAME '(' term ')' | '#' NAME | '[' term ',' term ']'
//             |  ('iota'|'iota@') VAR '.' formula | 'rest' '(' term ',' formula ')'
//
// Binders scope maximally to the right; '->' and '<->' are expanded into
// the connective core while parsing. A bare name applied to an argument is
// read as a function constant reference; name resolution happens at
// evaluation time. A predicate applied to one literal pair, R([s,t]), is
// normalized to R(s,t).

namespace detail {

enum class Tok {
  Ident,
  HashIdent,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Dot,
  Bang,
  Amp,
  Equal,
  Arrow,
  Iff,
  KwForall,
  KwForallAt,
  KwExists,
  KwExistsAt,
  KwIota,
  KwIotaAt,
  KwRest,
  KwOr,
  KwE,
  End,
};

inline const char* token_label(Tok t) {
  switch (t) {
    case Tok::Ident: return "name";
    case Tok::HashIdent: return "constant";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Equal: return "'='";
    case Tok::Arrow: return "'->'";
    case Tok::Iff: return "'<->'";
    case Tok::KwForall: return "'forall'";
    case Tok::KwForallAt: return "'forall@'";
    case Tok::KwExists: return "'exists'";
    case Tok::KwExistsAt: return "'exists@'";
    case Tok::KwIota: return "'iota'";
    case Tok::KwIotaAt: return "'iota@'";
    case Tok::KwRest: return "'rest'";
    case Tok::KwOr: return "'or'";
    case Tok::KwE: return "'E'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_ident_start = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  };
  auto is_ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_ident_start(c)) {
      while (i < src.size() && is_ident_char(src[i])) ++i;
      std::string word = src.substr(start, i - start);
      Tok kind = Tok::Ident;
      if (word == "forall" || word == "exists" || word == "iota") {
        bool at = i < src.size() && src[i] == '@';
        if (at) ++i;
        if (word == "forall") kind = at ? Tok::KwForallAt : Tok::KwForall;
        else if (word == "exists") kind = at ? Tok::KwExistsAt : Tok::KwExists;
        else kind = at ? Tok::KwIotaAt : Tok::KwIota;
      } else if (word == "rest") {
        kind = Tok::KwRest;
      } else if (word == "or") {
        kind = Tok::KwOr;
      } else if (word == "E") {
        kind = Tok::KwE;
      }
      out.push_back({kind, std::move(word), start});
      continue;
    }
    switch (c) {
      case '#': {
        ++i;
        if (i >= src.size() || !is_ident_start(src[i]))
          throw ParseError("expected a name after '#'", i);
        std::size_t nstart = i;
        while (i < src.size() && is_ident_char(src[i])) ++i;
        out.push_back({Tok::HashIdent, src.substr(nstart, i - nstart), start});
        break;
      }
      case '(': out.push_back({Tok::LParen, "(", start}); ++i; break;
      case ')': out.push_back({Tok::RParen, ")", start}); ++i; break;
      case '[': out.push_back({Tok::LBracket, "[", start}); ++i; break;
      case ']': out.push_back({Tok::RBracket, "]", start}); ++i; break;
      case ',': out.push_back({Tok::Comma, ",", start}); ++i; break;
      case '.': out.push_back({Tok::Dot, ".", start}); ++i; break;
      case '!': out.push_back({Tok::Bang, "!", start}); ++i; break;
      case '&': out.push_back({Tok::Amp, "&", start}); ++i; break;
      case '=': out.push_back({Tok::Equal, "=", start}); ++i; break;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          out.push_back({Tok::Arrow, "->", start});
          i += 2;
          break;
        }
        throw ParseError("unexpected character '-'", start);
      case '<':
        if (i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '>') {
          out.push_back({Tok::Iff, "<->", start});
          i += 3;
          break;
        }
        throw ParseError("unexpected character '<'", start);
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", src.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  FormulaPtr formula() {
    auto f = parse_iff();
    expect(Tok::End);
    return f;
  }

  TermPtr term() {
    auto t = parse_term();
    expect(Tok::End);
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }

  const Token& advance() { return toks_[pos_++]; }

  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind)
      throw ParseError(std::string("expected ") + token_label(kind) + ", found " +
                           token_label(peek().kind),
                       peek().pos);
    return advance();
  }

  FormulaPtr parse_iff() {
    auto f = parse_imp();
    while (accept(Tok::Iff)) f = mk_iff(f, parse_imp());
    return f;
  }

  FormulaPtr parse_imp() {
    auto f = parse_or();
    if (accept(Tok::Arrow)) return mk_implies(f, parse_imp());
    return f;
  }

  FormulaPtr parse_or() {
    auto f = parse_and();
    while (accept(Tok::KwOr)) f = mk_or(f, parse_and());
    return f;
  }

  FormulaPtr parse_and() {
    auto f = parse_unary();
    while (accept(Tok::Amp)) f = mk_and(f, parse_unary());
    return f;
  }

  FormulaPtr parse_unary() {
    if (accept(Tok::Bang)) return mk_not(parse_unary());
    switch (peek().kind) {
      case Tok::KwForall: return parse_quant(FormulaKind::ForallH);
      case Tok::KwForallAt: return parse_quant(FormulaKind::ForallU);
      case Tok::KwExists: return parse_quant(FormulaKind::ExistsH);
      case Tok::KwExistsAt: return parse_quant(FormulaKind::ExistsU);
      default: return parse_atom();
    }
  }

  FormulaPtr parse_quant(FormulaKind kind) {
    advance();
    auto var = expect(Tok::Ident).text;
    expect(Tok::Dot);
    return mk_quant(kind, var, parse_iff());
  }

  FormulaPtr parse_atom() {
    if (accept(Tok::LParen)) {
      auto f = parse_iff();
      expect(Tok::RParen);
      return f;
    }
    if (accept(Tok::KwE)) {
      expect(Tok::LParen);
      auto t = parse_term();
      expect(Tok::RParen);
      return mk_exist(t);
    }
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::LParen) {
      auto name = advance().text;
      std::size_t open_pos = peek().pos;
      advance();  // '('
      std::vector<TermPtr> args;
      args.push_back(parse_term());
      while (accept(Tok::Comma)) args.push_back(parse_term());
      expect(Tok::RParen);
      // A following '(' or '=' forces the application-term reading.
      if (peek().kind == Tok::LParen || peek().kind == Tok::Equal) {
        if (args.size() != 1)
          throw ParseError("application takes a single argument", open_pos);
        TermPtr t = mk_app(mk_fnref(name), args[0]);
        while (accept(Tok::LParen)) {
          t = mk_app(t, parse_term());
          expect(Tok::RParen);
        }
        expect(Tok::Equal);
        return mk_eq(t, parse_term());
      }
      if (args.size() == 1 && args[0]->kind == TermKind::Pair)
        args = {args[0]->lhs, args[0]->rhs};
      return mk_pred(name, std::move(args));
    }
    auto t = parse_term();
    expect(Tok::Equal);
    return mk_eq(t, parse_term());
  }

  TermPtr parse_term() {
    TermPtr base;
    switch (peek().kind) {
      case Tok::HashIdent:
        base = mk_const(advance().text);
        break;
      case Tok::LBracket: {
        advance();
        auto a = parse_term();
        expect(Tok::Comma);
        auto b = parse_term();
        expect(Tok::RBracket);
        base = mk_pair(a, b);
        break;
      }
      case Tok::KwIota:
      case Tok::KwIotaAt: {
        bool actual = advance().kind == Tok::KwIotaAt;
        auto var = expect(Tok::Ident).text;
        expect(Tok::Dot);
        auto body = parse_iff();
        // Binders swallow everything to their right, so no suffix follows.
        return actual ? mk_iota_actual(var, body) : mk_iota(var, body);
      }
      case Tok::KwRest: {
        advance();
        expect(Tok::LParen);
        auto t = parse_term();
        expect(Tok::Comma);
        auto guard = parse_iff();
        expect(Tok::RParen);
        base = mk_restrict(t, guard);
        break;
      }
      case Tok::Ident: {
        auto name = advance().text;
        if (accept(Tok::LParen)) {
          auto arg = parse_term();
          expect(Tok::RParen);
          base = mk_app(mk_fnref(name), arg);
        } else {
          base = mk_var(name);
        }
        break;
      }
      default:
        throw ParseError(std::string("expected a term, found ") + token_label(peek().kind),
                         peek().pos);
    }
    while (accept(Tok::LParen)) {
      base = mk_app(base, parse_term());
      expect(Tok::RParen);
    }
    return base;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline FormulaPtr parse_formula(const std::string& source) {
  return detail::Parser(source).formula();
}

inline TermPtr parse_term(const std::string& source) {
  return detail::Parser(source).term();
}

}  // namespace eventua
