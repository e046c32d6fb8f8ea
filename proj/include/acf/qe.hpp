#pragma once

// Quantifier elimination for algebraically closed fields.
//
// Formulas are normalized to polynomial atoms p = 0 / p != 0 with integer
// coefficients. Elimination never divides by an integer, so one result is
// valid in every characteristic; integer constants that survive ("2 = 0")
// are characteristic atoms, evaluated once a characteristic is fixed.

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "acf/error.hpp"
#include "acf/poly.hpp"
#include "acf/polyterm.hpp"
#include "acf/syntax.hpp"

namespace acf {

enum class Sign { Zero, NonZero };

// p = 0 or p != 0, with p sign-normalized.
struct Atom {
  MultiPoly poly;
  Sign sign = Sign::Zero;

  Atom() = default;
  Atom(const MultiPoly& p, Sign s) : poly(p.sign_normalized()), sign(s) {}

  Atom negated() const { return Atom(poly, sign == Sign::Zero ? Sign::NonZero : Sign::Zero); }
  bool is_constant() const { return poly.is_constant(); }

  // Truth at a point of F_p.
  bool holds_mod(std::uint64_t p, const std::map<std::string, std::uint64_t>& point) const {
    return (poly.evaluate_mod(p, point) == 0) == (sign == Sign::Zero);
  }

  std::string to_string() const { return poly.to_string() + (sign == Sign::Zero ? " = 0" : " != 0"); }
  Formula to_formula() const {
    Formula eq = Formula::eq(to_term(poly), Term::constant("0"));
    return sign == Sign::Zero ? eq : Formula::negation(eq);
  }

  friend bool operator==(const Atom& a, const Atom& b) { return a.sign == b.sign && a.poly == b.poly; }
  friend bool operator<(const Atom& a, const Atom& b) {
    if (!(a.poly == b.poly)) return a.poly < b.poly;
    return a.sign < b.sign;
  }
};

using Conjunction = std::vector<Atom>;

// Disjunction of conjunctions of atoms. No disjuncts is FALSE; a single empty
// conjunction is TRUE.
class ConstructibleForm {
public:
  ConstructibleForm() = default;
  explicit ConstructibleForm(std::vector<Conjunction> disjuncts) : disjuncts_(std::move(disjuncts)) {}

  static ConstructibleForm truth() { return ConstructibleForm({Conjunction{}}); }
  static ConstructibleForm falsity() { return ConstructibleForm(); }
  static ConstructibleForm atom(const Atom& a) { return ConstructibleForm({Conjunction{a}}); }

  const std::vector<Conjunction>& disjuncts() const noexcept { return disjuncts_; }
  std::vector<Conjunction>& disjuncts() noexcept { return disjuncts_; }
  bool is_false() const noexcept { return disjuncts_.empty(); }
  bool is_true() const {
    return std::any_of(disjuncts_.begin(), disjuncts_.end(), [](const auto& c) { return c.empty(); });
  }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    for (const auto& c : disjuncts_)
      for (const auto& a : c) {
        auto vs = a.poly.variables();
        out.insert(vs.begin(), vs.end());
      }
    return out;
  }
  std::size_t atom_count() const {
    std::size_t n = 0;
    for (const auto& c : disjuncts_) n += c.size();
    return n;
  }

  bool holds_mod(std::uint64_t p, const std::map<std::string, std::uint64_t>& point) const {
    for (const auto& c : disjuncts_)
      if (std::all_of(c.begin(), c.end(), [&](const Atom& a) { return a.holds_mod(p, point); }))
        return true;
    return false;
  }

  std::string to_string() const {
    if (is_false()) return "false";
    if (is_true()) return "true";
    auto conj = [](const Conjunction& c) {
      std::string s;
      for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " & " : "") + c[i].to_string();
      return s;
    };
    if (disjuncts_.size() == 1) return conj(disjuncts_[0]);
    std::string out;
    for (std::size_t i = 0; i < disjuncts_.size(); ++i) out += (i ? " | (" : "(") + conj(disjuncts_[i]) + ")";
    return out;
  }

  Formula to_formula() const {
    const Formula t = Formula::eq(Term::constant("0"), Term::constant("0"));
    if (is_false()) return Formula::negation(t);
    std::optional<Formula> out;
    for (const auto& c : disjuncts_) {
      std::optional<Formula> conj;
      for (const auto& a : c) conj = conj ? Formula::conjunction(*conj, a.to_formula()) : a.to_formula();
      Formula d = conj ? *conj : t;
      out = out ? Formula::disjunction(*out, d) : d;
    }
    return *out;
  }

  friend bool operator==(const ConstructibleForm&, const ConstructibleForm&) = default;
  friend std::ostream& operator<<(std::ostream& os, const ConstructibleForm& f) {
    return os << f.to_string();
  }

private:
  std::vector<Conjunction> disjuncts_;
};

// Set of characteristics in which a sentence holds: either exactly the listed
// primes, or every prime except the listed ones.
struct CharCondition {
  enum class Mode { OnlyListed, AllExceptListed };

  bool true_in_char0 = false;
  Mode prime_mode = Mode::OnlyListed;
  std::vector<Integer> listed; // sorted, distinct

  bool holds_at(const Integer& p) const {
    bool in = std::binary_search(listed.begin(), listed.end(), p);
    return prime_mode == Mode::OnlyListed ? in : !in;
  }
  bool holds_in_char(std::uint64_t c) const {
    return c == 0 ? true_in_char0 : holds_at(Integer(static_cast<unsigned long>(c)));
  }

  std::string to_string() const {
    std::string out = std::string("char0:") + (true_in_char0 ? "true" : "false") + ", primes:";
    out += prime_mode == Mode::OnlyListed ? "only{" : "all-except{";
    for (std::size_t i = 0; i < listed.size(); ++i) out += (i ? "," : "") + listed[i].get_str();
    return out + "}";
  }

  friend bool operator==(const CharCondition&, const CharCondition&) = default;
};

// ---------------------------------------------------------------------------
// Atom formulas

class AtomFormula {
public:
  enum class Kind { True, False, Atom, Not, And, Or, Implies, Exists, Forall };

  static AtomFormula constant(bool v) { return AtomFormula(v ? Kind::True : Kind::False); }
  static AtomFormula atom(const acf::Atom& a) {
    if (a.poly.is_zero()) return constant(a.sign == Sign::Zero);
    AtomFormula f(Kind::Atom);
    f.atom_ = a;
    return f;
  }
  static AtomFormula unary(Kind k, AtomFormula sub, std::string var = {}) {
    AtomFormula f(k);
    f.var_ = std::move(var);
    f.subs_.push_back(std::move(sub));
    return f;
  }
  static AtomFormula binary(Kind k, AtomFormula a, AtomFormula b) {
    AtomFormula f(k);
    f.subs_.push_back(std::move(a));
    f.subs_.push_back(std::move(b));
    return f;
  }

  Kind kind() const noexcept { return kind_; }
  const acf::Atom& atom() const noexcept { return atom_; }
  const std::string& var() const noexcept { return var_; }
  const std::vector<AtomFormula>& subs() const noexcept { return subs_; }

private:
  explicit AtomFormula(Kind k) : kind_(k) {}
  Kind kind_;
  acf::Atom atom_;
  std::string var_;
  std::vector<AtomFormula> subs_;
};

// Replace each t1 = t2 by the atom (t1 - t2 = 0); a negated equation becomes a
// NonZero atom. Non-ring symbols raise SymbolError.
inline AtomFormula to_polynomial_atoms(const Formula& f) {
  using K = AtomFormula::Kind;
  switch (f.kind()) {
  case Formula::Kind::Eq:
    return AtomFormula::atom(Atom(to_polynomial(f.lhs()) - to_polynomial(f.rhs()), Sign::Zero));
  case Formula::Kind::Rel:
    throw SymbolError("relation '" + f.name() + "' is not in the ring language");
  case Formula::Kind::Not:
    if (f.sub().kind() == Formula::Kind::Eq)
      return AtomFormula::atom(
          Atom(to_polynomial(f.sub().lhs()) - to_polynomial(f.sub().rhs()), Sign::NonZero));
    return AtomFormula::unary(K::Not, to_polynomial_atoms(f.sub()));
  case Formula::Kind::And:
    return AtomFormula::binary(K::And, to_polynomial_atoms(f.left()), to_polynomial_atoms(f.right()));
  case Formula::Kind::Or:
    return AtomFormula::binary(K::Or, to_polynomial_atoms(f.left()), to_polynomial_atoms(f.right()));
  case Formula::Kind::Implies:
    return AtomFormula::binary(K::Implies, to_polynomial_atoms(f.left()),
                               to_polynomial_atoms(f.right()));
  case Formula::Kind::Exists:
    return AtomFormula::unary(K::Exists, to_polynomial_atoms(f.body()), f.var());
  case Formula::Kind::Forall:
    return AtomFormula::unary(K::Forall, to_polynomial_atoms(f.body()), f.var());
  }
  throw InternalError("unknown formula kind");
}

// ---------------------------------------------------------------------------
// Simplification

namespace detail {

inline bool is_subset(const Conjunction& a, const Conjunction& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool conj_less(const Conjunction& a, const Conjunction& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Residues of f mod p as a polynomial over Q with coefficients in [0, p).
inline MultiPoly residues_over_q(const MultiPoly& f, std::uint64_t p) {
  MultiPoly out;
  const MultiPoly r = reduce_mod_p(f, p);
  for (const auto& [m, c] : r.terms()) out.add_term(m, c);
  return out;
}

// Simplify one conjunction; nullopt when it is contradictory.
inline std::optional<Conjunction> simplify_conjunction(const Conjunction& in,
                                                       std::optional<std::uint64_t> characteristic) {
  Conjunction atoms;
  for (Atom a : in) {
    if (characteristic && *characteristic > 0) a = Atom(residues_over_q(a.poly, *characteristic), a.sign);
    if (a.poly.is_zero()) {
      if (a.sign == Sign::NonZero) return std::nullopt;
      continue;
    }
    if (a.is_constant()) {
      const Rational c = a.poly.constant_value();
      const bool unit = c == 1 || c == -1;
      if (characteristic || unit) {
        // Over Q, or already reduced mod p: a nonzero constant is nonzero.
        if (a.sign == Sign::Zero) return std::nullopt;
        continue;
      }
    }
    atoms.push_back(std::move(a));
  }
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i)
    if (atoms[i].poly == atoms[i + 1].poly) return std::nullopt;

  // Characteristic atoms: n = 0 and m = 0 merge to gcd(n, m) = 0; n = 0 with
  // n | m refutes m != 0.
  std::optional<Integer> modulus;
  for (const auto& a : atoms)
    if (a.is_constant() && a.sign == Sign::Zero) {
      const Integer n = abs(a.poly.constant_value().get_num());
      modulus = modulus ? Integer(gcd(*modulus, n)) : n;
    }
  if (modulus) {
    if (*modulus == 1) return std::nullopt;
    Conjunction kept;
    for (auto& a : atoms) {
      if (a.is_constant()) {
        if (a.sign == Sign::Zero) continue;
        if (a.poly.constant_value().get_num() % *modulus == 0) return std::nullopt;
      }
      kept.push_back(std::move(a));
    }
    kept.push_back(Atom(MultiPoly::constant(Rational(*modulus)), Sign::Zero));
    std::sort(kept.begin(), kept.end());
    atoms = std::move(kept);
  }
  return atoms;
}

} // namespace detail

// Equivalent, smaller form: constants folded (characteristic atoms only when a
// characteristic is given), duplicates and contradictions removed, subsumed
// disjuncts dropped, and [A, a] | [A, !a] merged into [A]. Disjuncts come out
// in canonical order.
inline ConstructibleForm simplify(const ConstructibleForm& form,
                                  std::optional<std::uint64_t> characteristic = std::nullopt) {
  if (characteristic && *characteristic != 0 && !is_prime(*characteristic))
    throw DomainError("characteristic must be 0 or a prime");
  std::vector<Conjunction> ds;
  for (const auto& c : form.disjuncts())
    if (auto s = detail::simplify_conjunction(c, characteristic)) {
      if (s->empty()) return ConstructibleForm::truth();
      ds.push_back(std::move(*s));
    }

  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(ds.begin(), ds.end(), detail::conj_less);
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    // Subsumption: ds is sorted by size, so a subset always precedes.
    std::vector<Conjunction> kept;
    for (auto& d : ds) {
      bool subsumed = std::any_of(kept.begin(), kept.end(),
                                  [&](const Conjunction& k) { return detail::is_subset(k, d); });
      if (!subsumed) kept.push_back(std::move(d));
    }
    ds = std::move(kept);
    // Complementary merge.
    for (std::size_t i = 0; i < ds.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < ds.size() && !changed; ++j) {
        if (ds[i].size() != ds[j].size()) continue;
        std::size_t diff = 0, at = 0;
        for (std::size_t k = 0; k < ds[i].size() && diff < 2; ++k)
          if (!(ds[i][k] == ds[j][k])) {
            ++diff;
            at = k;
          }
        if (diff == 1 && ds[i][at].negated() == ds[j][at]) {
          Conjunction merged = ds[i];
          merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(at));
          if (merged.empty()) return ConstructibleForm::truth();
          ds[i] = std::move(merged);
          ds.erase(ds.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
  }
  return ConstructibleForm(std::move(ds));
}

// ---------------------------------------------------------------------------
// Elimination

struct QeOptions {
  // Work units (branches explored plus conjunctions built) before giving up.
  std::size_t budget = 2'000'000;
};

namespace detail {

class Eliminator {
public:
  explicit Eliminator(const QeOptions& options) : budget_(options.budget) {}

  void tick(std::size_t n = 1) {
    used_ += n;
    if (used_ > budget_) throw ResourceError("quantifier elimination exceeded its budget");
  }

  ConstructibleForm disjoin(const ConstructibleForm& a, const ConstructibleForm& b) {
    auto ds = a.disjuncts();
    ds.insert(ds.end(), b.disjuncts().begin(), b.disjuncts().end());
    return simplify(ConstructibleForm(std::move(ds)));
  }

  ConstructibleForm conjoin(const ConstructibleForm& a, const ConstructibleForm& b) {
    std::vector<Conjunction> ds;
    for (const auto& x : a.disjuncts())
      for (const auto& y : b.disjuncts()) {
        tick();
        Conjunction c = x;
        c.insert(c.end(), y.begin(), y.end());
        ds.push_back(std::move(c));
      }
    return simplify(ConstructibleForm(std::move(ds)));
  }

  ConstructibleForm negate(const ConstructibleForm& f) {
    ConstructibleForm out = ConstructibleForm::truth();
    for (const auto& c : f.disjuncts()) {
      std::vector<Conjunction> alts;
      for (const auto& a : c) alts.push_back({a.negated()});
      out = conjoin(out, ConstructibleForm(std::move(alts)));
      if (out.is_false()) break;
    }
    return out;
  }

  ConstructibleForm dnf(const AtomFormula& f) {
    using K = AtomFormula::Kind;
    switch (f.kind()) {
    case K::True: return ConstructibleForm::truth();
    case K::False: return ConstructibleForm::falsity();
    case K::Atom: return simplify(ConstructibleForm::atom(f.atom()));
    case K::Not: return negate(dnf(f.subs()[0]));
    case K::And: return conjoin(dnf(f.subs()[0]), dnf(f.subs()[1]));
    case K::Or: return disjoin(dnf(f.subs()[0]), dnf(f.subs()[1]));
    case K::Implies: return disjoin(negate(dnf(f.subs()[0])), dnf(f.subs()[1]));
    case K::Exists:
    case K::Forall: return quantifier_block(f);
    }
    throw InternalError("unknown formula kind");
  }

  ConstructibleForm exists(const ConstructibleForm& f, const std::string& var) {
    std::vector<Conjunction> out;
    for (const auto& c : f.disjuncts()) {
      auto part = exists(c, var);
      out.insert(out.end(), part.disjuncts().begin(), part.disjuncts().end());
    }
    return simplify(ConstructibleForm(std::move(out)));
  }

  ConstructibleForm exists(const Conjunction& conj, const std::string& var) {
    Branch b;
    bool mentioned = false;
    for (const auto& a : conj) {
      if (!a.poly.mentions(var)) b.guard.push_back(a);
      else {
        mentioned = true;
        (a.sign == Sign::Zero ? b.eqs : b.neqs).push_back(a.poly);
      }
    }
    if (!mentioned) return ConstructibleForm({conj});
    std::vector<Conjunction> out;
    solve(std::move(b), var, out);
    return simplify(ConstructibleForm(std::move(out)));
  }

private:
  struct Branch {
    Conjunction guard;
    std::vector<MultiPoly> eqs, neqs;
  };

  // Every quantifier of the same kind directly nested in f is eliminated as a
  // block, choosing the cheapest variable first.
  ConstructibleForm quantifier_block(const AtomFormula& f) {
    const auto kind = f.kind();
    std::vector<std::string> vars;
    const AtomFormula* cur = &f;
    while (cur->kind() == kind) {
      if (std::find(vars.begin(), vars.end(), cur->var()) == vars.end()) vars.push_back(cur->var());
      cur = &cur->subs()[0];
    }
    ConstructibleForm body = dnf(*cur);
    const bool universal = kind == AtomFormula::Kind::Forall;
    if (universal) body = negate(body);
    while (!vars.empty()) {
      // Lowest maximal degree first; ties go to the innermost variable.
      std::size_t best = vars.size() - 1;
      int best_deg = std::numeric_limits<int>::max();
      for (std::size_t i = vars.size(); i-- > 0;) {
        int d = 0;
        for (const auto& c : body.disjuncts())
          for (const auto& a : c) d = std::max(d, a.poly.degree(vars[i]));
        if (d < best_deg) {
          best_deg = d;
          best = i;
        }
      }
      body = exists(body, vars[best]);
      vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return universal ? negate(body) : body;
  }

  // Is c known to be nonzero (true) or zero (false) under the guard?
  static std::optional<bool> status(const Conjunction& guard, const MultiPoly& c) {
    if (c.is_constant()) {
      const Rational v = c.constant_value();
      if (v == 1 || v == -1) return true;
    }
    const MultiPoly n = c.sign_normalized();
    for (const auto& a : guard) {
      if (a.poly == n) return a.sign == Sign::NonZero;
      if (a.sign == Sign::Zero && !a.poly.is_constant() && divides_integrally(a.poly, n)) return false;
    }
    return std::nullopt;
  }

  static bool divides_integrally(const MultiPoly& g, const MultiPoly& c) {
    if (c.total_degree() < g.total_degree()) return false;
    try {
      MultiPoly q = exact_divide(c, g);
      for (const auto& [m, v] : q.terms())
        if (v.get_den() != 1) return false;
      return true;
    } catch (const DomainError&) {
      return false;
    }
  }

  static MultiPoly reductum(const MultiPoly& p, const std::string& var) {
    auto cs = p.coefficients(var);
    cs.pop_back();
    return MultiPoly::from_coefficients(p.field(), var, cs);
  }

  // Move var-free polynomials to the guard. False when the branch is dead.
  static bool settle(Branch& b, const std::string& var) {
    auto move = [&](std::vector<MultiPoly>& polys, Sign sign) {
      std::vector<MultiPoly> keep;
      for (auto& p : polys) {
        if (p.mentions(var)) keep.push_back(std::move(p));
        else if (p.is_zero()) {
          if (sign == Sign::NonZero) return false;
        } else b.guard.emplace_back(p, sign);
      }
      polys = std::move(keep);
      return true;
    };
    if (!move(b.eqs, Sign::Zero) || !move(b.neqs, Sign::NonZero)) return false;
    std::sort(b.guard.begin(), b.guard.end());
    b.guard.erase(std::unique(b.guard.begin(), b.guard.end()), b.guard.end());
    for (std::size_t i = 0; i + 1 < b.guard.size(); ++i)
      if (b.guard[i].poly == b.guard[i + 1].poly) return false;
    return true;
  }

  // Make the leading coefficient of every polynomial in `polys` known
  // nonzero. Returns true when it had to branch (the branches were solved).
  bool split_leading(Branch& b, std::vector<MultiPoly> Branch::*polys, const std::string& var,
                     std::vector<Conjunction>& out) {
    for (std::size_t i = 0; i < (b.*polys).size(); ++i) {
      MultiPoly& p = (b.*polys)[i];
      const MultiPoly lc = p.leading_coefficient(var);
      auto known = status(b.guard, lc);
      if (known && *known) continue;
      if (known) {
        p = reductum(p, var);
        solve(std::move(b), var, out);
        return true;
      }
      Branch nonzero = b;
      nonzero.guard.emplace_back(lc, Sign::NonZero);
      Branch zero = std::move(b);
      zero.guard.emplace_back(lc, Sign::Zero);
      (zero.*polys)[i] = reductum((zero.*polys)[i], var);
      solve(std::move(nonzero), var, out);
      solve(std::move(zero), var, out);
      return true;
    }
    return false;
  }

  void solve(Branch b, const std::string& var, std::vector<Conjunction>& out) {
    tick();
    if (!settle(b, var)) return;
    if (split_leading(b, &Branch::eqs, var, out)) return;

    if (b.eqs.size() >= 2) {
      // Reduce the highest-degree equation by the lowest-degree one.
      auto deg = [&](const MultiPoly& p) { return p.degree(var); };
      std::size_t lo = 0, hi = 0;
      for (std::size_t i = 1; i < b.eqs.size(); ++i) {
        if (deg(b.eqs[i]) < deg(b.eqs[lo])) lo = i;
        if (deg(b.eqs[i]) >= deg(b.eqs[hi])) hi = i;
      }
      if (hi == lo) hi = lo == 0 ? 1 : 0;
      b.eqs[hi] = pseudo_divide(b.eqs[hi], b.eqs[lo], var).remainder;
      solve(std::move(b), var, out);
      return;
    }

    if (b.eqs.size() == 1) {
      // p has a root off every q_j iff p does not divide (prod q_j)^deg p.
      const MultiPoly& p = b.eqs[0];
      const int m = p.degree(var);
      MultiPoly r = MultiPoly::constant(1);
      for (const auto& q : b.neqs)
        for (int i = 0; i < m; ++i) {
          tick();
          r = pseudo_divide(r * q, p, var).remainder;
          if (r.is_zero()) return;
        }
      if (r.degree(var) <= 0) {
        Conjunction c = b.guard;
        c.emplace_back(r, Sign::NonZero);
        out.push_back(std::move(c));
        return;
      }
      const auto cs = r.coefficients(var);
      for (std::size_t k = cs.size(); k-- > 0;) {
        if (cs[k].is_zero()) continue;
        Conjunction c = b.guard;
        c.emplace_back(cs[k], Sign::NonZero);
        out.push_back(std::move(c));
      }
      return;
    }

    // Only inequations: once each has a nonzero leading coefficient the
    // product is a nonzero polynomial, and an infinite field avoids its roots.
    if (split_leading(b, &Branch::neqs, var, out)) return;
    out.push_back(b.guard);
  }

  std::size_t budget_;
  std::size_t used_ = 0;
};

} // namespace detail

// Disjunctive normal form of a quantifier-free atom formula.
inline ConstructibleForm to_dnf(const AtomFormula& qf, const QeOptions& options = {}) {
  detail::Eliminator e(options);
  return e.dnf(qf);
}

// Var-free form equivalent over every algebraically closed field to
// exists var (conj).
inline ConstructibleForm eliminate_exists_one_var(const Conjunction& conj, const std::string& var,
                                                  const QeOptions& options = {}) {
  detail::Eliminator e(options);
  return e.exists(conj, var);
}

// Quantifier-free equivalent of f over ACF, in the free variables of f.
inline ConstructibleForm eliminate_all(const Formula& f, const QeOptions& options = {}) {
  detail::Eliminator e(options);
  return e.dnf(to_polynomial_atoms(f));
}

inline void check_characteristic(std::uint64_t c) {
  if (c != 0 && !is_prime(c)) throw DomainError(std::to_string(c) + " is not 0 or a prime");
}

// Truth of a sentence in ACF of the given characteristic (0 or a prime).
inline bool decide(const Formula& s, std::uint64_t characteristic, const QeOptions& options = {}) {
  check_characteristic(characteristic);
  if (!is_sentence(s)) throw DomainError("decide expects a sentence");
  ConstructibleForm r = simplify(eliminate_all(s, options), characteristic);
  if (r.is_true()) return true;
  if (r.is_false()) return false;
  throw InternalError("elimination left a non-constant form: " + r.to_string());
}

namespace detail {

inline void pollard_rho(const Integer& n, std::set<Integer>& out);

inline void factor_into(Integer n, std::set<Integer>& out) {
  n = abs(n);
  for (unsigned long d = 2; d < 10000 && n > 1; ++d)
    if (n % d == 0) {
      out.insert(Integer(d));
      while (n % d == 0) n /= d;
    }
  if (n > 1) pollard_rho(n, out);
}

inline void pollard_rho(const Integer& n, std::set<Integer>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
    out.insert(n);
    return;
  }
  for (unsigned long c = 1;; ++c) {
    Integer x = 2, y = 2, d = 1;
    auto f = [&](const Integer& v) { return Integer((v * v + c) % n); };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = gcd(Integer(abs(x - y)), n);
    }
    if (d != n) {
      pollard_rho(d, out);
      pollard_rho(n / d, out);
      return;
    }
  }
}

// Truth of a form whose atoms are all integer constants, at a characteristic.
inline bool constant_truth(const ConstructibleForm& form, const Integer& characteristic) {
  for (const auto& c : form.disjuncts()) {
    bool all = true;
    for (const auto& a : c) {
      const Integer n = a.poly.constant_value().get_num();
      const bool zero = characteristic == 0 ? n == 0 : n % characteristic == 0;
      if (zero != (a.sign == Sign::Zero)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

} // namespace detail

// Characteristics in which a quantifier-free form without variables holds.
// Only primes dividing a surviving integer constant can differ from
// characteristic 0.
inline CharCondition spectrum_of(const ConstructibleForm& eliminated) {
  const ConstructibleForm form = simplify(eliminated);
  std::set<Integer> special;
  for (const auto& c : form.disjuncts())
    for (const auto& a : c) {
      if (!a.is_constant()) throw InternalError("elimination left a non-constant atom: " + a.to_string());
      if (a.poly.constant_value().get_den() != 1) throw InternalError("non-integer constant atom");
      detail::factor_into(a.poly.constant_value().get_num(), special);
    }
  CharCondition out;
  out.true_in_char0 = detail::constant_truth(form, 0);
  out.prime_mode = out.true_in_char0 ? CharCondition::Mode::AllExceptListed : CharCondition::Mode::OnlyListed;
  for (const auto& p : special)
    if (detail::constant_truth(form, p) != out.true_in_char0) out.listed.push_back(p);
  return out;
}

// Characteristics in which a sentence holds; eliminates once.
inline CharCondition char_spectrum(const Formula& s, const QeOptions& options = {}) {
  if (!is_sentence(s)) throw DomainError("char_spectrum expects a sentence");
  return spectrum_of(eliminate_all(s, options));
}

} // namespace acf
