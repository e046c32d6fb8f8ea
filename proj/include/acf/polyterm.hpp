#pragma once

// Conversion between ring-language terms and polynomials.

#include <optional>
#include <string>
#include <string_view>

#include "acf/parser.hpp"
#include "acf/poly.hpp"
#include "acf/syntax.hpp"

namespace acf {

inline MultiPoly to_polynomial(const Term& t, const CoefField& field = CoefField::rationals()) {
  if (auto n = detail::as_numeral(t)) return MultiPoly::constant(field, Rational(*n));
  switch (t.kind()) {
  case Term::Kind::Variable:
    return MultiPoly::variable(field, t.name());
  case Term::Kind::Constant:
    if (t.name() == "0") return MultiPoly(field);
    if (t.name() == "1") return MultiPoly::constant(field, 1);
    break;
  case Term::Kind::Apply:
    if (t.args().size() == 2) {
      MultiPoly a = to_polynomial(t.args()[0], field);
      MultiPoly b = to_polynomial(t.args()[1], field);
      if (t.name() == "+") return a + b;
      if (t.name() == "-") return a - b;
      if (t.name() == "*") return a * b;
    }
    break;
  }
  throw SymbolError("'" + t.name() + "' is not a ring symbol");
}

inline MultiPoly parse_polynomial(std::string_view text, const CoefField& field = CoefField::rationals()) {
  return to_polynomial(parse_term(text), field);
}

namespace detail {

inline Term numeral_term(const Integer& n) {
  if (n == 0) return Term::constant("0");
  if (n <= kMaxNumeral) {
    Term t = Term::constant("1");
    for (unsigned long i = 1; i < n.get_ui(); ++i) t = Term::apply("+", {t, Term::constant("1")});
    return t;
  }
  // n = 2 * (n / 2) + (n mod 2)
  Term half = numeral_term(n / 2);
  Term t = Term::apply("*", {numeral_term(2), half});
  return n % 2 == 0 ? t : Term::apply("+", {t, Term::constant("1")});
}

} // namespace detail

// Ring term denoting f; coefficients must be integers.
inline Term to_term(const MultiPoly& f) {
  if (f.is_zero()) return Term::constant("0");
  std::optional<Term> out;
  for (const auto& [m, c] : f.sorted_terms()) {
    if (c.get_den() != 1) throw DomainError("polynomial has a non-integer coefficient");
    const Integer mag = abs(c.get_num());
    std::optional<Term> t;
    if (mag != 1 || m.empty()) t = detail::numeral_term(mag);
    for (const auto& [v, e] : m)
      for (unsigned i = 0; i < e; ++i)
        t = t ? Term::apply("*", {*t, Term::variable(v)}) : Term::variable(v);
    if (!out) out = c < 0 ? Term::apply("-", {Term::constant("0"), *t}) : *t;
    else out = Term::apply(c < 0 ? "-" : "+", {*out, *t});
  }
  return *out;
}

} // namespace acf
