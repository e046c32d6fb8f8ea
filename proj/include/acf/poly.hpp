#pragma once

// Exact sparse multivariate polynomials over Q or F_p.
//
// A polynomial is a map from monomials to nonzero coefficients. Monomials are
// sorted (variable, exponent) lists, so polynomials over different variable
// sets combine without re-indexing and the canonical form is unique.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "acf/error.hpp"

namespace acf {

using Rational = mpq_class;
using Integer = mpz_class;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Q or F_p. F_p elements are stored as canonical residues in [0, p).
class CoefField {
public:
  static CoefField rationals() { return CoefField(0); }
  static CoefField prime(std::uint64_t p) {
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    return CoefField(p);
  }

  bool is_rationals() const noexcept { return p_ == 0; }
  std::uint64_t characteristic() const noexcept { return p_; }

  Rational normalize(const Rational& c) const {
    if (p_ == 0) return c;
    Integer p(static_cast<unsigned long>(p_));
    Integer num = c.get_num() % p;
    Integer den = c.get_den() % p;
    if (den == 0) throw DomainError("denominator divisible by " + std::to_string(p_));
    Integer inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
    Integer r = (num * inv) % p;
    if (r < 0) r += p;
    return Rational(r);
  }

  Rational inverse(const Rational& c) const {
    if (c == 0) throw DomainError("division by zero");
    if (p_ == 0) return 1 / c;
    Integer p(static_cast<unsigned long>(p_));
    Integer inv;
    Integer v = c.get_num();
    mpz_invert(inv.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
    return Rational(inv);
  }

  std::string to_string() const { return p_ == 0 ? "Q" : "F" + std::to_string(p_); }

  friend bool operator==(const CoefField&, const CoefField&) = default;

private:
  explicit CoefField(std::uint64_t p) : p_(p) {}
  std::uint64_t p_;
};

// Sorted by variable name; exponents positive.
using Monomial = std::vector<std::pair<std::string, unsigned>>;

namespace detail {

inline Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  auto i = a.begin(), j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) out.push_back(*i++);
    else if (i == a.end() || j->first < i->first) out.push_back(*j++);
    else {
      out.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return out;
}

inline unsigned monomial_degree(const Monomial& m, const std::string& var) {
  for (const auto& [v, e] : m)
    if (v == var) return e;
  return 0;
}

inline unsigned monomial_total_degree(const Monomial& m) {
  unsigned d = 0;
  for (const auto& [v, e] : m) d += e;
  return d;
}

// a / b when b divides a.
inline std::optional<Monomial> monomial_div(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto i = a.begin();
  for (const auto& [v, e] : b) {
    while (i != a.end() && i->first < v) out.push_back(*i++);
    if (i == a.end() || i->first != v || i->second < e) return std::nullopt;
    if (i->second > e) out.emplace_back(v, i->second - e);
    ++i;
  }
  while (i != a.end()) out.push_back(*i++);
  return out;
}

// Graded order with variables ranked by name: true when a > b.
inline bool grlex_greater(const Monomial& a, const Monomial& b) {
  unsigned da = monomial_total_degree(a), db = monomial_total_degree(b);
  if (da != db) return da > db;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first != j->first) return i->first < j->first;
    if (i->second != j->second) return i->second > j->second;
    ++i;
    ++j;
  }
  return i != a.end() && j == b.end();
}

} // namespace detail

class MultiPoly {
public:
  using Terms = std::map<Monomial, Rational>;

  // Degree reported for the zero polynomial.
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  MultiPoly() : field_(CoefField::rationals()) {}
  explicit MultiPoly(CoefField field) : field_(field) {}

  static MultiPoly constant(const CoefField& field, const Rational& c) {
    MultiPoly p(field);
    p.add_term({}, c);
    return p;
  }
  static MultiPoly constant(const Rational& c) { return constant(CoefField::rationals(), c); }
  static MultiPoly variable(const CoefField& field, const std::string& name) {
    MultiPoly p(field);
    p.add_term({{name, 1}}, 1);
    return p;
  }
  static MultiPoly variable(const std::string& name) {
    return variable(CoefField::rationals(), name);
  }
  static MultiPoly monomial(const CoefField& field, Monomial m, const Rational& c) {
    MultiPoly p(field);
    p.add_term(std::move(m), c);
    return p;
  }

  const CoefField& field() const noexcept { return field_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  bool is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }
  Rational constant_value() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
  }
  bool is_one() const { return is_constant() && constant_value() == 1; }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m) out.insert(v);
    return out;
  }
  bool mentions(const std::string& var) const {
    for (const auto& [m, c] : terms_)
      if (detail::monomial_degree(m, var) > 0) return true;
    return false;
  }

  // Largest exponent of var; kZeroDegree for the zero polynomial.
  int degree(const std::string& var) const {
    if (is_zero()) return kZeroDegree;
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, detail::monomial_degree(m, var));
    return static_cast<int>(d);
  }
  int total_degree() const {
    if (is_zero()) return kZeroDegree;
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, detail::monomial_total_degree(m));
    return static_cast<int>(d);
  }

  // Coefficients in var: result[k] multiplies var^k.
  std::vector<MultiPoly> coefficients(const std::string& var) const {
    std::vector<MultiPoly> out;
    for (const auto& [m, c] : terms_) {
      unsigned k = detail::monomial_degree(m, var);
      if (out.size() <= k) out.resize(k + 1, MultiPoly(field_));
      Monomial rest;
      for (const auto& ve : m)
        if (ve.first != var) rest.push_back(ve);
      out[k].add_term(std::move(rest), c);
    }
    return out;
  }
  MultiPoly coefficient(const std::string& var, unsigned k) const {
    auto cs = coefficients(var);
    return k < cs.size() ? cs[k] : MultiPoly(field_);
  }
  MultiPoly leading_coefficient(const std::string& var) const {
    if (is_zero()) return *this;
    return coefficients(var).back();
  }

  static MultiPoly from_coefficients(const CoefField& field, const std::string& var,
                                     const std::vector<MultiPoly>& coeffs) {
    MultiPoly out(field);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      Monomial xk;
      if (k) xk.emplace_back(var, static_cast<unsigned>(k));
      for (const auto& [m, c] : coeffs[k].terms_) out.add_term(detail::monomial_mul(m, xk), c);
    }
    return out;
  }

  // Leading term under the graded order.
  std::pair<Monomial, Rational> leading_term() const {
    if (is_zero()) throw DomainError("zero polynomial has no leading term");
    auto best = terms_.begin();
    for (auto it = terms_.begin(); it != terms_.end(); ++it)
      if (detail::grlex_greater(it->first, best->first)) best = it;
    return *best;
  }

  MultiPoly operator-() const {
    MultiPoly out(field_);
    for (const auto& [m, c] : terms_) out.add_term(m, -c);
    return out;
  }
  MultiPoly& operator+=(const MultiPoly& o) {
    check_field(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    check_field(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_field(b);
    MultiPoly out(a.field_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(detail::monomial_mul(ma, mb), ca * cb);
    return out;
  }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  MultiPoly scaled(const Rational& c) const {
    MultiPoly out(field_);
    for (const auto& [m, v] : terms_) out.add_term(m, v * c);
    return out;
  }

  MultiPoly pow(unsigned n) const {
    MultiPoly result = constant(field_, 1), base = *this;
    while (n) {
      if (n & 1u) result *= base;
      n >>= 1;
      if (n) base *= base;
    }
    return result;
  }

  // Replace var by the given polynomial.
  MultiPoly substitute(const std::string& var, const MultiPoly& value) const {
    auto cs = coefficients(var);
    MultiPoly out(field_);
    for (std::size_t k = cs.size(); k-- > 0;) out = out * value + cs[k];
    return out;
  }

  // Value at a full rational assignment of the polynomial's variables.
  Rational evaluate(const std::map<std::string, Rational>& point) const {
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (const auto& [v, e] : m) {
        auto it = point.find(v);
        if (it == point.end()) throw DomainError("no value for variable '" + v + "'");
        Rational x = it->second, acc = 1;
        for (unsigned i = 0; i < e; ++i) acc *= x;
        t *= acc;
      }
      total += t;
    }
    return field_.normalize(total);
  }

  // Value in F_p at a point of residues. Requires p-integral coefficients.
  std::uint64_t evaluate_mod(std::uint64_t p, const std::map<std::string, std::uint64_t>& point) const {
    const CoefField fp = CoefField::prime(p);
    unsigned __int128 total = 0;
    for (const auto& [m, c] : terms_) {
      unsigned __int128 t = fp.normalize(c).get_num().get_ui();
      for (const auto& [v, e] : m) {
        auto it = point.find(v);
        if (it == point.end()) throw DomainError("no value for variable '" + v + "'");
        for (unsigned i = 0; i < e; ++i) t = t * (it->second % p) % p;
      }
      total = (total + t) % p;
    }
    return static_cast<std::uint64_t>(total);
  }

  // Same polynomial with the leading coefficient (graded order) positive.
  // Only meaningful over Q.
  MultiPoly sign_normalized() const {
    if (is_zero() || !field_.is_rationals()) return *this;
    return leading_term().second < 0 ? -*this : *this;
  }

  std::string to_string() const;

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.field_ == b.field_ && a.terms_ == b.terms_;
  }
  friend bool operator<(const MultiPoly& a, const MultiPoly& b) {
    if (a.field_.characteristic() != b.field_.characteristic())
      return a.field_.characteristic() < b.field_.characteristic();
    // Lower total degree first, then by the graded order of the sorted terms.
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    auto ta = a.sorted_terms(), tb = b.sorted_terms();
    for (std::size_t i = 0; i < std::min(ta.size(), tb.size()); ++i) {
      if (ta[i].first != tb[i].first) return detail::grlex_greater(ta[i].first, tb[i].first);
      if (ta[i].second != tb[i].second) return ta[i].second < tb[i].second;
    }
    return ta.size() < tb.size();
  }

  // Terms in descending graded order.
  std::vector<std::pair<Monomial, Rational>> sorted_terms() const {
    std::vector<std::pair<Monomial, Rational>> out(terms_.begin(), terms_.end());
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return detail::grlex_greater(x.first, y.first); });
    return out;
  }

  void add_term(Monomial m, const Rational& c) {
    Rational v = field_.normalize(c);
    if (v == 0) return;
    canonicalize(m);
    auto [it, inserted] = terms_.try_emplace(std::move(m), v);
    if (!inserted) {
      it->second = field_.normalize(it->second + v);
      if (it->second == 0) terms_.erase(it);
    }
  }

private:
  // Sort by variable, merge repeats, drop zero exponents.
  static void canonicalize(Monomial& m) {
    bool ok = true;
    for (std::size_t i = 0; i < m.size() && ok; ++i)
      ok = m[i].second > 0 && (i == 0 || m[i - 1].first < m[i].first);
    if (ok) return;
    std::sort(m.begin(), m.end());
    Monomial out;
    for (auto& [v, e] : m) {
      if (e == 0) continue;
      if (!out.empty() && out.back().first == v) out.back().second += e;
      else out.emplace_back(std::move(v), e);
    }
    m = std::move(out);
  }

  void check_field(const MultiPoly& o) const {
    if (!(field_ == o.field_))
      throw DomainError("coefficient field mismatch: " + field_.to_string() + " vs " +
                        o.field_.to_string());
  }

  CoefField field_;
  Terms terms_;
};

inline std::string MultiPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : sorted_terms()) {
    Rational mag = abs(c);
    bool negative = c < 0;
    if (first) out += negative ? "-" : "";
    else out += negative ? " - " : " + ";
    first = false;
    std::string mono;
    for (const auto& [v, e] : m) {
      if (!mono.empty()) mono += "*";
      mono += v;
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) out += mag.get_str();
    else if (mag == 1) out += mono;
    else out += mag.get_str() + "*" + mono;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Division and elimination primitives

struct PseudoDivision {
  MultiPoly quotient;
  MultiPoly remainder;
  unsigned power = 0;
};

namespace detail {

// Units usable as exact divisors in every characteristic: +-1 over Q, any
// nonzero constant over F_p.
inline std::optional<Rational> unit_inverse(const MultiPoly& c) {
  if (!c.is_constant() || c.is_zero()) return std::nullopt;
  Rational v = c.constant_value();
  if (c.field().is_rationals()) {
    if (v == 1 || v == -1) return v;
    return std::nullopt;
  }
  return c.field().inverse(v);
}

} // namespace detail

// lc(g)^power * f = quotient * g + remainder with deg_var(remainder) < deg_var(g).
// The leading coefficient is only multiplied in when it is not a unit, so
// integral inputs over Q give integral outputs.
inline PseudoDivision pseudo_divide(const MultiPoly& f, const MultiPoly& g, const std::string& var) {
  if (g.is_zero()) throw DomainError("pseudo-division by the zero polynomial");
  const int m = g.degree(var);
  if (m <= 0) throw DomainError("divisor has degree 0 in " + var);
  const MultiPoly lc = g.leading_coefficient(var);
  const auto unit = detail::unit_inverse(lc);
  const CoefField& field = f.field();

  PseudoDivision out{MultiPoly(field), f, 0};
  while (!out.remainder.is_zero() && out.remainder.degree(var) >= m) {
    const int d = out.remainder.degree(var);
    std::vector<MultiPoly> shift(static_cast<std::size_t>(d - m) + 1, MultiPoly(field));
    shift.back() = out.remainder.leading_coefficient(var);
    if (unit) shift.back() = shift.back().scaled(*unit);
    const MultiPoly step = MultiPoly::from_coefficients(field, var, shift);
    if (unit) {
      out.quotient += step;
      out.remainder -= step * g;
    } else {
      out.quotient = lc * out.quotient + step;
      out.remainder = lc * out.remainder - step * g;
      ++out.power;
    }
  }
  return out;
}

// Exact multivariate division; throws DomainError when b does not divide a.
inline MultiPoly exact_divide(const MultiPoly& a, const MultiPoly& b) {
  if (b.is_zero()) throw DomainError("division by the zero polynomial");
  const auto [lm, lcoef] = b.leading_term();
  const Rational inv = b.field().inverse(lcoef);
  MultiPoly rem = a, quot(a.field());
  while (!rem.is_zero()) {
    auto [m, c] = rem.leading_term();
    auto q = detail::monomial_div(m, lm);
    if (!q) throw DomainError("inexact polynomial division");
    MultiPoly t = MultiPoly::monomial(a.field(), *q, c * inv);
    quot += t;
    rem -= t * b;
  }
  return quot;
}

// Determinant by Bareiss fraction-free elimination.
inline MultiPoly determinant(std::vector<std::vector<MultiPoly>> m, const CoefField& field) {
  const std::size_t n = m.size();
  if (n == 0) return MultiPoly::constant(field, 1);
  MultiPoly prev = MultiPoly::constant(field, 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return MultiPoly(field);
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = exact_divide(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

// Sylvester-matrix resultant in var, columns by descending power of var, with
// g's deg_var(f) rows above f's deg_var(g) rows. Equals (-1)^(mn) times the
// f-first determinant; so Res(x - a, x - b) = b - a and Res(f, x - y) = f(y).
inline MultiPoly resultant(const MultiPoly& f, const MultiPoly& g, const std::string& var) {
  if (!(f.field() == g.field())) throw DomainError("coefficient field mismatch");
  if (f.is_zero() || g.is_zero()) throw DomainError("resultant of the zero polynomial");
  const int m = f.degree(var), n = g.degree(var);
  if (m == 0 && n == 0) throw DomainError("both polynomials have degree 0 in " + var);
  const std::size_t size = static_cast<std::size_t>(m + n);
  const auto fc = f.coefficients(var), gc = g.coefficients(var);
  std::vector<std::vector<MultiPoly>> rows;
  auto push_rows = [&](const std::vector<MultiPoly>& coeffs, int deg, int count) {
    for (int r = 0; r < count; ++r) {
      std::vector<MultiPoly> row(size, MultiPoly(f.field()));
      for (int k = 0; k <= deg; ++k)
        row[static_cast<std::size_t>(r + deg - k)] = coeffs[static_cast<std::size_t>(k)];
      rows.push_back(std::move(row));
    }
  };
  push_rows(gc, n, m);
  push_rows(fc, m, n);
  return determinant(std::move(rows), f.field());
}

// Monic gcd of univariate polynomials over a field (Euclid); gcd(0, 0) = 0.
inline MultiPoly gcd_univariate(MultiPoly f, MultiPoly g) {
  if (!(f.field() == g.field())) throw DomainError("coefficient field mismatch");
  auto vars = f.variables();
  for (const auto& v : g.variables()) vars.insert(v);
  if (vars.size() > 1) throw DomainError("gcd_univariate needs univariate polynomials");
  const CoefField field = f.field();
  auto monic = [&](const MultiPoly& p) {
    return p.is_zero() ? p : p.scaled(field.inverse(p.leading_term().second));
  };
  if (vars.empty()) {
    if (f.is_zero() && g.is_zero()) return f;
    return MultiPoly::constant(field, 1);
  }
  const std::string var = *vars.begin();
  while (!g.is_zero()) {
    if (g.degree(var) == 0) return MultiPoly::constant(field, 1);
    MultiPoly r = pseudo_divide(monic(f), monic(g), var).remainder;
    f = std::move(g);
    g = std::move(r);
  }
  return monic(f);
}

// Coefficient-wise image in F_p.
inline MultiPoly reduce_mod_p(const MultiPoly& f, std::uint64_t p) {
  if (!f.field().is_rationals()) throw DomainError("reduce_mod_p expects a polynomial over Q");
  const CoefField fp = CoefField::prime(p);
  MultiPoly out(fp);
  for (const auto& [m, c] : f.terms()) {
    if (c.get_den() % static_cast<unsigned long>(p) == 0)
      throw DomainError("coefficient " + c.get_str() + " has a denominator divisible by " +
                        std::to_string(p));
    out.add_term(m, c);
  }
  return out;
}

} // namespace acf
