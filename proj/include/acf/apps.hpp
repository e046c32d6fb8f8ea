#pragma once

// Applications reduced to quantifier elimination: Nullstellensatz solvability,
// strong minimality of one-variable sets, Noether-Ostrowski irreducibility,
// and Lefschetz-style characteristic reports.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acf/error.hpp"
#include "acf/galois.hpp"
#include "acf/poly.hpp"
#include "acf/polyterm.hpp"
#include "acf/qe.hpp"
#include "acf/syntax.hpp"

namespace acf {

// ---------------------------------------------------------------------------
// Nullstellensatz

struct PolySystem {
  std::vector<MultiPoly> generators;
  std::vector<std::string> variables;

  // Variables default to those of the generators, sorted.
  explicit PolySystem(std::vector<MultiPoly> gens, std::vector<std::string> vars = {})
      : generators(std::move(gens)), variables(std::move(vars)) {
    if (generators.empty()) throw DomainError("a polynomial system needs at least one generator");
    std::set<std::string> used;
    for (const auto& g : generators) {
      if (!g.field().is_rationals()) throw DomainError("system generators must be over Q");
      auto vs = g.variables();
      used.insert(vs.begin(), vs.end());
    }
    if (variables.empty()) variables.assign(used.begin(), used.end());
    for (const auto& v : used)
      if (std::find(variables.begin(), variables.end(), v) == variables.end())
        throw DomainError("generator uses undeclared variable '" + v + "'");
  }
};

namespace detail {

// f scaled by the lcm of its denominators; the scale must be a unit in the
// characteristic.
inline MultiPoly clear_denominators(const MultiPoly& f, std::uint64_t characteristic) {
  Integer l = 1;
  for (const auto& [m, c] : f.terms()) l = lcm(l, Integer(c.get_den()));
  if (characteristic && l % static_cast<unsigned long>(characteristic) == 0)
    throw DomainError("coefficient denominators vanish in characteristic " + std::to_string(characteristic));
  return f.scaled(Rational(l));
}

} // namespace detail

// The sentence: exists variables. f_1 = 0 & ... & f_k = 0.
inline Formula system_sentence(const PolySystem& sys, std::uint64_t characteristic = 0) {
  std::optional<Formula> body;
  for (const auto& g : sys.generators) {
    Formula eq = Formula::eq(to_term(detail::clear_denominators(g, characteristic)), Term::constant("0"));
    body = body ? Formula::conjunction(*body, eq) : eq;
  }
  Formula out = *body;
  for (std::size_t i = sys.variables.size(); i-- > 0;) out = Formula::exists(sys.variables[i], out);
  return out;
}

// Do the generators have a common zero in the algebraic closure of the prime
// field of the given characteristic?
inline bool nullstellensatz_decide(const PolySystem& sys, std::uint64_t characteristic,
                                   const QeOptions& options = {}) {
  check_characteristic(characteristic);
  return decide(system_sentence(sys, characteristic), characteristic, options);
}

// ---------------------------------------------------------------------------
// Strong minimality

struct MinimalityReport {
  enum class Verdict { Finite, Cofinite };
  Verdict verdict = Verdict::Finite;
  // Finite: at most this many points. Cofinite: at most this many missing.
  std::size_t bound = 0;

  std::string to_string() const {
    return (verdict == Verdict::Finite ? "Finite(" : "Cofinite(") + std::to_string(bound) + ")";
  }
  friend bool operator==(const MinimalityReport&, const MinimalityReport&) = default;
};

namespace detail {

inline MultiPoly over_field(const MultiPoly& f, std::uint64_t characteristic) {
  return characteristic ? reduce_mod_p(f, characteristic) : f;
}

inline std::size_t degree_in(const MultiPoly& f) {
  return f.is_zero() ? 0 : static_cast<std::size_t>(std::max(f.total_degree(), 0));
}

} // namespace detail

// Finite or cofinite verdict for a constructible set in at most one variable
// over an algebraically closed field of the given characteristic.
inline MinimalityReport strong_minimality_analyze(const ConstructibleForm& form, std::uint64_t characteristic) {
  check_characteristic(characteristic);
  if (form.variables().size() > 1) throw DomainError("strong minimality expects a single variable");
  const ConstructibleForm c = simplify(form, characteristic);

  std::size_t finite_total = 0;
  std::optional<std::size_t> cofinite;
  for (const auto& conj : c.disjuncts()) {
    std::optional<MultiPoly> g; // gcd of the equations
    std::vector<MultiPoly> neqs;
    bool unknown_constant = false;
    for (const auto& a : conj) {
      if (a.is_constant()) {
        unknown_constant = true;
        continue;
      }
      MultiPoly p = detail::over_field(a.poly, characteristic);
      if (a.sign == Sign::Zero) g = g ? gcd_univariate(*g, p) : gcd_univariate(p, MultiPoly(p.field()));
      else neqs.push_back(std::move(p));
    }
    if (unknown_constant && !characteristic)
      throw InternalError("unresolved characteristic atom in " + c.to_string());
    if (g) {
      // Roots of g that are not roots of any inequation.
      MultiPoly h = *g;
      for (const auto& q : neqs)
        for (;;) {
          MultiPoly common = gcd_univariate(h, q);
          if (common.total_degree() <= 0) break;
          h = exact_divide(h, common);
          if (h.is_constant()) break;
        }
      finite_total += h.is_constant() ? 0 : detail::degree_in(h);
    } else {
      std::size_t missing = 0;
      for (const auto& q : neqs) missing += detail::degree_in(q);
      cofinite = cofinite ? std::min(*cofinite, missing) : missing;
    }
  }
  if (cofinite) return {MinimalityReport::Verdict::Cofinite, *cofinite};
  return {MinimalityReport::Verdict::Finite, finite_total};
}

// ---------------------------------------------------------------------------
// Irreducibility

namespace detail {

// Monomials of total degree <= n in vars, in a fixed order.
inline std::vector<Monomial> monomials_up_to(const std::vector<std::string>& vars, unsigned n) {
  std::vector<Monomial> out;
  Monomial cur;
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i == vars.size()) {
      out.push_back(cur);
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      if (e) cur.emplace_back(vars[i], e);
      self(self, i + 1, left - e);
      if (e) cur.pop_back();
    }
  };
  rec(rec, 0, n);
  return out;
}

} // namespace detail

inline constexpr int kMaxIrreducibilityDegree = 3;
inline constexpr std::size_t kMaxIrreducibilityVariables = 2;

// Sentence true exactly in the characteristics where f is irreducible over the
// algebraic closure: for every split k + l = n, no product of general
// polynomials of total degrees k and l equals f coefficient by coefficient.
inline Formula irreducibility_sentence(const MultiPoly& f) {
  if (!f.field().is_rationals()) throw DomainError("expected a polynomial over Q");
  for (const auto& [m, c] : f.terms())
    if (c.get_den() != 1) throw DomainError("expected integer coefficients");
  const int n = f.total_degree();
  if (n < 2) throw DomainError("irreducibility needs total degree at least 2");
  const auto var_set = f.variables();
  if (n > kMaxIrreducibilityDegree || var_set.size() > kMaxIrreducibilityVariables)
    throw DomainError("irreducibility is limited to total degree 3 in at most 2 variables");
  const std::vector<std::string> vars(var_set.begin(), var_set.end());

  std::set<std::string> taken(var_set.begin(), var_set.end());
  auto fresh = [&](const std::string& base) {
    std::string name = fresh_name(base, taken);
    taken.insert(name);
    return name;
  };

  std::optional<Formula> all_splits;
  for (int k = 1; k < n; ++k) {
    const int l = n - k;
    auto general = [&](int deg, const std::string& base, std::vector<std::string>& coeffs) {
      MultiPoly g;
      for (const auto& m : detail::monomials_up_to(vars, static_cast<unsigned>(deg))) {
        coeffs.push_back(fresh(base));
        g += MultiPoly::variable(coeffs.back()) * MultiPoly::monomial(CoefField::rationals(), m, 1);
      }
      return g;
    };
    std::vector<std::string> as, bs;
    const MultiPoly prod = general(k, "a", as) * general(l, "b", bs);
    // prod - f as a polynomial in the original variables.
    std::map<Monomial, MultiPoly> diff;
    const MultiPoly residual = prod - f;
    for (const auto& [m, c] : residual.terms()) {
      Monomial outer, inner;
      for (const auto& ve : m) (var_set.count(ve.first) ? outer : inner).push_back(ve);
      diff[outer].add_term(inner, c);
    }
    std::optional<Formula> differs;
    for (const auto& [m, c] : diff) {
      if (c.is_zero()) continue;
      Formula ne = Formula::negation(Formula::eq(to_term(c), Term::constant("0")));
      differs = differs ? Formula::disjunction(*differs, ne) : ne;
    }
    Formula split = *differs;
    for (std::size_t i = bs.size(); i-- > 0;) split = Formula::forall(bs[i], split);
    for (std::size_t i = as.size(); i-- > 0;) split = Formula::forall(as[i], split);
    all_splits = all_splits ? Formula::conjunction(*all_splits, split) : split;
  }
  return *all_splits;
}

struct NoetherOstrowskiReport {
  bool irreducible_char0 = false;
  std::vector<std::pair<std::uint64_t, bool>> per_prime; // (p, irreducible)
  CharCondition spectrum;
  // Sampled primes whose verdict differs from characteristic 0.
  std::vector<std::uint64_t> exceptions;
  // Spectrum is finite/cofinite as the theorem requires and every sampled
  // verdict matches it.
  bool consistent = false;
};

inline NoetherOstrowskiReport noether_ostrowski_check(const MultiPoly& f, const std::vector<std::uint64_t>& primes,
                                                      const QeOptions& options = {}) {
  for (auto p : primes)
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
  const Formula phi = irreducibility_sentence(f);
  const ConstructibleForm form = eliminate_all(phi, options);
  NoetherOstrowskiReport r;
  r.irreducible_char0 = simplify(form, 0).is_true();
  r.spectrum = spectrum_of(form);
  r.consistent = r.spectrum.true_in_char0 == r.irreducible_char0 &&
                 r.spectrum.true_in_char0 == (r.spectrum.prime_mode == CharCondition::Mode::AllExceptListed);
  for (auto p : primes) {
    const ConstructibleForm at = simplify(form, p);
    if (!at.is_true() && !at.is_false()) throw InternalError("irreducibility sentence did not reduce to a constant");
    const bool irr = at.is_true();
    r.per_prime.emplace_back(p, irr);
    if (irr != r.irreducible_char0) r.exceptions.push_back(p);
    if (irr != r.spectrum.holds_in_char(p)) r.consistent = false;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Lefschetz report

namespace detail {

// Exact truth in the algebraic closure of F_p for sentences whose quantifiers
// each bind one variable over a quantifier-free body in that variable alone;
// nullopt for anything else. Each such subsentence is decided by scanning
// F_{p^k}: its solution set is finite (every point has degree <= d over F_p)
// or cofinite (some F_{p^k} with more elements than all atoms have roots).
class ClosureOracle {
public:
  explicit ClosureOracle(std::uint64_t p) : p_(p) {}

  std::optional<bool> eval(const Formula& f) {
    switch (f.kind()) {
    case Formula::Kind::Eq: {
      if (!free_vars(f).empty()) return std::nullopt;
      return reduce_mod_p(to_polynomial(f.lhs()) - to_polynomial(f.rhs()), p_).is_zero();
    }
    case Formula::Kind::Rel: return std::nullopt;
    case Formula::Kind::Not: {
      auto v = eval(f.sub());
      return v ? std::optional<bool>(!*v) : std::nullopt;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies: {
      auto a = eval(f.left()), b = eval(f.right());
      if (!a || !b) return std::nullopt;
      if (f.kind() == Formula::Kind::And) return *a && *b;
      if (f.kind() == Formula::Kind::Or) return *a || *b;
      return !*a || *b;
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      if (!is_quantifier_free(f.body())) return std::nullopt;
      std::size_t max_deg = 1, total = 0;
      if (!collect(f.body(), f.var(), max_deg, total)) return std::nullopt;
      const bool universal = f.kind() == Formula::Kind::Forall;
      std::size_t k_cof = 1;
      for (std::uint64_t q = p_; q <= total; q *= p_) ++k_cof;
      for (std::size_t k = 1; k <= std::max(max_deg, k_cof); ++k) {
        const GaloisField field(p_, k);
        for (std::uint64_t x = 0; x < field.size(); ++x)
          if (body_holds(f.body(), f.var(), field, static_cast<GaloisField::Elem>(x)) != universal)
            return !universal;
      }
      return universal;
    }
    }
    return std::nullopt;
  }

private:
  std::vector<GaloisField::Elem> coeffs(const Formula& eq, const std::string& var) const {
    MultiPoly f = reduce_mod_p(to_polynomial(eq.lhs()) - to_polynomial(eq.rhs()), p_);
    std::vector<GaloisField::Elem> out;
    if (f.is_zero()) return {0};
    for (const auto& c : f.coefficients(var))
      out.push_back(static_cast<GaloisField::Elem>(c.constant_value().get_num().get_ui()));
    return out;
  }

  bool collect(const Formula& f, const std::string& var, std::size_t& max_deg, std::size_t& total) const {
    if (f.kind() == Formula::Kind::Rel) return false;
    if (f.kind() == Formula::Kind::Eq) {
      auto vs = free_vars(f);
      if (vs.size() > 1 || (vs.size() == 1 && !vs.count(var))) return false;
      auto c = coeffs(f, var);
      max_deg = std::max(max_deg, c.size() - 1);
      total += c.size() - 1;
      return true;
    }
    if (f.kind() == Formula::Kind::Not) return collect(f.sub(), var, max_deg, total);
    return collect(f.left(), var, max_deg, total) && collect(f.right(), var, max_deg, total);
  }

  bool body_holds(const Formula& f, const std::string& var, const GaloisField& field, GaloisField::Elem x) {
    switch (f.kind()) {
    case Formula::Kind::Eq: {
      auto c = coeffs(f, var);
      return field.evaluate(c, x) == 0;
    }
    case Formula::Kind::Not: return !body_holds(f.sub(), var, field, x);
    case Formula::Kind::And: return body_holds(f.left(), var, field, x) && body_holds(f.right(), var, field, x);
    case Formula::Kind::Or: return body_holds(f.left(), var, field, x) || body_holds(f.right(), var, field, x);
    case Formula::Kind::Implies:
      return !body_holds(f.left(), var, field, x) || body_holds(f.right(), var, field, x);
    default: throw InternalError("unexpected formula in oracle body");
    }
  }

  std::uint64_t p_;
};

} // namespace detail

struct LefschetzReport {
  struct PrimeCheck {
    std::uint64_t prime;
    bool spectrum_verdict;
    std::optional<bool> oracle_verdict; // nullopt when the oracle does not apply
  };
  CharCondition spectrum;
  std::vector<PrimeCheck> checks;
};

// char_spectrum plus an independent finite-field check at every prime up to
// prime_bound. Raises InternalError on any disagreement.
inline LefschetzReport lefschetz_report(const Formula& s, std::uint64_t prime_bound = 7,
                                        const QeOptions& options = {}) {
  if (!is_sentence(s)) throw DomainError("lefschetz_report expects a sentence");
  LefschetzReport r;
  r.spectrum = char_spectrum(s, options);
  for (std::uint64_t p = 2; p <= prime_bound; ++p) {
    if (!is_prime(p)) continue;
    detail::ClosureOracle oracle(p);
    std::optional<bool> o;
    try {
      o = oracle.eval(s);
    } catch (const ResourceError&) {
      o = std::nullopt;
    }
    const bool v = r.spectrum.holds_in_char(p);
    if (o && *o != v)
      throw InternalError("spectrum and finite-field oracle disagree at p = " + std::to_string(p) + " for " +
                          to_string(s));
    r.checks.push_back({p, v, o});
  }
  return r;
}

} // namespace acf
