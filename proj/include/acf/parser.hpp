#pragma once

// Recursive-descent parser for terms and formulas.
//
//   formula := ("forall" | "exists") var "." formula | imp
//   imp     := or ("->" imp)?
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "!" unary | quantified | "(" formula ")" | "true" | "false" | atom
//   atom    := R "(" term ("," term)* ")" | term ("=" | "!=") term
//   term    := prod (("+" | "-") prod)*
//   prod    := neg ("*" neg)*
//   neg     := "-" neg | power
//   power   := base ("^" natural)?
//   base    := var | constant | integer | f "(" term ("," term)* ")" | "(" term ")"
//
// Integer literals n >= 2 denote 1 + 1 + ... + 1 (left nested); "-t" denotes 0 - t;
// t^n denotes t * t * ... * t; "true"/"false" denote 0 = 0 and 0 != 0.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "acf/error.hpp"
#include "acf/syntax.hpp"

namespace acf {

namespace detail {

struct Token {
  enum class Type { Ident, Number, Symbol, End };
  Type type;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(c) || c == '_') {
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '\''))
        ++i;
      out.push_back({Token::Type::Ident, std::string(text.substr(start, i - start)), start});
      continue;
    }
    if (std::isdigit(c)) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Token::Type::Number, std::string(text.substr(start, i - start)), start});
      continue;
    }
    auto two = text.substr(i, 2);
    if (two == "->" || two == "!=") {
      out.push_back({Token::Type::Symbol, std::string(two), start});
      i += 2;
      continue;
    }
    static constexpr std::string_view singles = "=!&|().,+-*^";
    if (singles.find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Token::Type::Symbol, std::string(1, static_cast<char>(c)), start});
      ++i;
      continue;
    }
    throw ParseError(start, std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
  out.push_back({Token::Type::End, "", text.size()});
  return out;
}

// Beyond this a numeral sugar tree becomes unreasonable.
inline constexpr unsigned long kMaxNumeral = 100000;
inline constexpr unsigned long kMaxPower = 64;

class Parser {
public:
  Parser(std::string_view text, const Signature& sig) : tokens_(tokenize(text)), sig_(sig) {}

  Term parse_whole_term() {
    Term t = term();
    expect_end();
    return t;
  }

  Formula parse_whole_formula() {
    Formula f = formula();
    expect_end();
    return f;
  }

private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at(std::string_view sym) const {
    return peek().type == Token::Type::Symbol && peek().text == sym;
  }
  bool at_keyword(std::string_view kw) const {
    return peek().type == Token::Type::Ident && peek().text == kw;
  }
  void expect(std::string_view sym) {
    if (!at(sym)) fail("expected '" + std::string(sym) + "'");
    ++pos_;
  }
  void expect_end() {
    if (peek().type != Token::Type::End) fail("unexpected trailing input");
  }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.type == Token::Type::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.pos, what + ", found " + found);
  }

  Formula formula() {
    if (at_keyword("forall") || at_keyword("exists")) return quantified();
    return implication();
  }

  Formula quantified() {
    bool universal = peek().text == "forall";
    ++pos_;
    if (peek().type != Token::Type::Ident || is_keyword(peek().text))
      fail("expected a variable after quantifier");
    std::string var = peek().text;
    if (sig_.has_symbol(var)) fail("cannot quantify over signature symbol '" + var + "'");
    ++pos_;
    expect(".");
    Formula body = formula();
    return universal ? Formula::forall(var, body) : Formula::exists(var, body);
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (at("->")) {
      ++pos_;
      return Formula::implication(lhs, implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (at("|")) {
      ++pos_;
      f = Formula::disjunction(f, conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (at("&")) {
      ++pos_;
      f = Formula::conjunction(f, unary());
    }
    return f;
  }

  Formula unary() {
    if (at("!")) {
      ++pos_;
      return Formula::negation(unary());
    }
    if (at_keyword("forall") || at_keyword("exists")) return quantified();
    if (at_keyword("true") || at_keyword("false")) {
      bool truth = peek().text == "true";
      if (!sig_.has_constant("0")) fail("'true'/'false' need the constant 0");
      ++pos_;
      Formula f = Formula::eq(Term::constant("0"), Term::constant("0"));
      return truth ? f : Formula::negation(f);
    }
    if (at("(")) {
      // Either a parenthesized formula or an atom whose left term starts with '('.
      std::size_t save = pos_;
      try {
        return atom();
      } catch (const ParseError& atom_error) {
        std::size_t atom_pos = atom_error.position();
        pos_ = save;
        ++pos_;
        try {
          Formula f = formula();
          expect(")");
          return f;
        } catch (const ParseError& group_error) {
          if (group_error.position() >= atom_pos) throw;
          throw atom_error;
        }
      }
    }
    return atom();
  }

  Formula atom() {
    if (peek().type == Token::Type::Ident && sig_.relation_arity(peek().text)) {
      std::string name = peek().text;
      ++pos_;
      return Formula::rel(name, arguments(name, *sig_.relation_arity(name)));
    }
    Term lhs = term();
    if (at("=")) {
      ++pos_;
      return Formula::eq(lhs, term());
    }
    if (at("!=")) {
      ++pos_;
      return Formula::negation(Formula::eq(lhs, term()));
    }
    fail("expected '=' or '!='");
  }

  std::vector<Term> arguments(const std::string& name, std::size_t arity) {
    std::size_t at_pos = peek().pos;
    expect("(");
    std::vector<Term> args{term()};
    while (at(",")) {
      ++pos_;
      args.push_back(term());
    }
    expect(")");
    if (args.size() != arity)
      throw ParseError(at_pos, "'" + name + "' expects " + std::to_string(arity) +
                                   " arguments, got " + std::to_string(args.size()));
    return args;
  }

  Term binary(const std::string& op, Term a, Term b, std::size_t at_pos) {
    if (sig_.function_arity(op) != 2u)
      throw ParseError(at_pos, "operator '" + op + "' is not a binary function of the signature");
    return Term::apply(op, {std::move(a), std::move(b)});
  }

  Term term() {
    Term t = product();
    while (at("+") || at("-")) {
      std::string op = peek().text;
      std::size_t p = peek().pos;
      ++pos_;
      t = binary(op, t, product(), p);
    }
    return t;
  }

  Term product() {
    Term t = negated();
    while (at("*")) {
      std::size_t p = peek().pos;
      ++pos_;
      t = binary("*", t, negated(), p);
    }
    return t;
  }

  Term negated() {
    if (at("-")) {
      std::size_t p = peek().pos;
      ++pos_;
      if (!sig_.has_constant("0")) throw ParseError(p, "unary minus needs the constant 0");
      return binary("-", Term::constant("0"), negated(), p);
    }
    return power();
  }

  Term power() {
    Term b = base();
    if (at("^")) {
      std::size_t p = peek().pos;
      ++pos_;
      if (peek().type != Token::Type::Number) fail("expected a natural exponent");
      unsigned long n = number(peek());
      ++pos_;
      if (n == 0) {
        if (!sig_.has_constant("1")) throw ParseError(p, "x^0 needs the constant 1");
        return Term::constant("1");
      }
      if (n > kMaxPower) throw ParseError(p, "exponent too large");
      Term t = b;
      for (unsigned long i = 1; i < n; ++i) t = binary("*", t, b, p);
      return t;
    }
    return b;
  }

  unsigned long number(const Token& tok) const {
    if (tok.text.size() > 9) throw ParseError(tok.pos, "integer literal too large");
    return std::stoul(tok.text);
  }

  Term numeral(const Token& tok) {
    unsigned long n = number(tok);
    if (n > kMaxNumeral) throw ParseError(tok.pos, "integer literal too large");
    if (n == 0) {
      if (!sig_.has_constant("0")) throw ParseError(tok.pos, "literal 0 needs the constant 0");
      return Term::constant("0");
    }
    if (!sig_.has_constant("1")) throw ParseError(tok.pos, "integer literals need the constant 1");
    Term t = Term::constant("1");
    for (unsigned long i = 1; i < n; ++i) t = binary("+", t, Term::constant("1"), tok.pos);
    return t;
  }

  Term base() {
    const Token tok = peek();
    switch (tok.type) {
    case Token::Type::Number:
      ++pos_;
      return numeral(tok);
    case Token::Type::Ident: {
      if (is_keyword(tok.text)) fail("unexpected keyword");
      ++pos_;
      if (sig_.has_constant(tok.text)) return Term::constant(tok.text);
      if (auto arity = sig_.function_arity(tok.text))
        return Term::apply(tok.text, arguments(tok.text, *arity));
      if (sig_.relation_arity(tok.text))
        throw ParseError(tok.pos, "relation '" + tok.text + "' used as a term");
      if (at("(")) throw ParseError(tok.pos, "unknown function symbol '" + tok.text + "'");
      return Term::variable(tok.text);
    }
    case Token::Type::Symbol:
      if (tok.text == "(") {
        ++pos_;
        Term t = term();
        expect(")");
        return t;
      }
      break;
    case Token::Type::End:
      break;
    }
    fail("expected a term");
  }

  std::vector<Token> tokens_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

} // namespace detail

inline Term parse_term(std::string_view text, const Signature& sig = Signature::ring()) {
  return detail::Parser(text, sig).parse_whole_term();
}

inline Formula parse_formula(std::string_view text, const Signature& sig = Signature::ring()) {
  return detail::Parser(text, sig).parse_whole_formula();
}

} // namespace acf
