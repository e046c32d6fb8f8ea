#pragma once

// First-order syntax: signatures, terms, formulas, and the structural
// operations on them (free variables, capture-avoiding substitution,
// induction-schema instances, printing).

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "acf/error.hpp"

namespace acf {

namespace detail {

inline bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

inline bool is_keyword(const std::string& s) {
  return s == "exists" || s == "forall" || s == "true" || s == "false";
}

inline bool is_infix_symbol(const std::string& s) { return s == "+" || s == "-" || s == "*"; }

} // namespace detail

// The non-logical symbols of a first-order language.
class Signature {
public:
  using Symbol = std::pair<std::string, std::size_t>;

  Signature() = default;

  // Throws DomainError when names collide, an arity is zero, or a name is
  // not expressible in the formula grammar.
  Signature(std::vector<Symbol> functions, std::vector<Symbol> relations,
            std::vector<std::string> constants)
      : functions_(std::move(functions)), relations_(std::move(relations)),
        constants_(std::move(constants)) {
    std::set<std::string> seen;
    auto claim = [&](const std::string& name) {
      if (!seen.insert(name).second) throw DomainError("duplicate symbol '" + name + "'");
      if (detail::is_keyword(name)) throw DomainError("symbol name is a keyword: " + name);
    };
    for (const auto& [name, arity] : functions_) {
      claim(name);
      if (arity == 0) throw DomainError("function '" + name + "' has arity 0");
      bool ok = detail::is_identifier(name) || (detail::is_infix_symbol(name) && arity == 2);
      if (!ok) throw DomainError("bad function symbol name '" + name + "'");
    }
    for (const auto& [name, arity] : relations_) {
      claim(name);
      if (arity == 0) throw DomainError("relation '" + name + "' has arity 0");
      if (!detail::is_identifier(name)) throw DomainError("bad relation symbol name '" + name + "'");
    }
    for (const auto& name : constants_) {
      claim(name);
      if (!(detail::is_identifier(name) || name == "0" || name == "1"))
        throw DomainError("bad constant symbol name '" + name + "'");
    }
  }

  // {0, 1, +, -, *}: the language of rings.
  static Signature ring() {
    return Signature({{"+", 2}, {"-", 2}, {"*", 2}}, {}, {"0", "1"});
  }

  // {0, +}: additive groups.
  static Signature additive_group() { return Signature({{"+", 2}}, {}, {"0"}); }

  const std::vector<Symbol>& functions() const noexcept { return functions_; }
  const std::vector<Symbol>& relations() const noexcept { return relations_; }
  const std::vector<std::string>& constants() const noexcept { return constants_; }

  std::optional<std::size_t> function_arity(const std::string& name) const {
    return lookup(functions_, name);
  }
  std::optional<std::size_t> relation_arity(const std::string& name) const {
    return lookup(relations_, name);
  }
  bool has_constant(const std::string& name) const {
    return std::find(constants_.begin(), constants_.end(), name) != constants_.end();
  }
  bool has_symbol(const std::string& name) const {
    return function_arity(name) || relation_arity(name) || has_constant(name);
  }

  // Same symbols with the same arities, in any declaration order.
  friend bool operator==(const Signature& a, const Signature& b) {
    auto sorted = [](auto v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    return sorted(a.functions_) == sorted(b.functions_) && sorted(a.relations_) == sorted(b.relations_) &&
           sorted(a.constants_) == sorted(b.constants_);
  }

private:
  static std::optional<std::size_t> lookup(const std::vector<Symbol>& table,
                                           const std::string& name) {
    for (const auto& [n, a] : table)
      if (n == name) return a;
    return std::nullopt;
  }

  std::vector<Symbol> functions_;
  std::vector<Symbol> relations_;
  std::vector<std::string> constants_;
};

// Immutable term tree. Copies share structure.
class Term {
public:
  enum class Kind { Variable, Constant, Apply };

  static Term variable(std::string name) { return Term(Kind::Variable, std::move(name), {}); }
  static Term constant(std::string name) { return Term(Kind::Constant, std::move(name), {}); }
  static Term apply(std::string function, std::vector<Term> args) {
    return Term(Kind::Apply, std::move(function), std::move(args));
  }

  Kind kind() const noexcept { return node_->kind; }
  bool is_variable() const noexcept { return kind() == Kind::Variable; }
  bool is_constant() const noexcept { return kind() == Kind::Constant; }
  bool is_apply() const noexcept { return kind() == Kind::Apply; }
  // Variable name, constant name, or function symbol.
  const std::string& name() const noexcept { return node_->name; }
  const std::vector<Term>& args() const noexcept { return node_->args; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    return a.kind() == b.kind() && a.name() == b.name() && a.args() == b.args();
  }

private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Term> args;
  };
  Term(Kind kind, std::string name, std::vector<Term> args)
      : node_(std::make_shared<const Node>(Node{kind, std::move(name), std::move(args)})) {}

  std::shared_ptr<const Node> node_;
};

// Immutable formula tree.
class Formula {
public:
  enum class Kind { Eq, Rel, Not, And, Or, Implies, Exists, Forall };

  static Formula eq(Term lhs, Term rhs) {
    return Formula(Kind::Eq, {}, {std::move(lhs), std::move(rhs)}, {});
  }
  static Formula rel(std::string relation, std::vector<Term> args) {
    return Formula(Kind::Rel, std::move(relation), std::move(args), {});
  }
  static Formula negation(Formula f) { return Formula(Kind::Not, {}, {}, {std::move(f)}); }
  static Formula conjunction(Formula a, Formula b) {
    return Formula(Kind::And, {}, {}, {std::move(a), std::move(b)});
  }
  static Formula disjunction(Formula a, Formula b) {
    return Formula(Kind::Or, {}, {}, {std::move(a), std::move(b)});
  }
  static Formula implication(Formula a, Formula b) {
    return Formula(Kind::Implies, {}, {}, {std::move(a), std::move(b)});
  }
  static Formula exists(std::string var, Formula body) {
    return Formula(Kind::Exists, std::move(var), {}, {std::move(body)});
  }
  static Formula forall(std::string var, Formula body) {
    return Formula(Kind::Forall, std::move(var), {}, {std::move(body)});
  }

  Kind kind() const noexcept { return node_->kind; }
  bool is_atomic() const noexcept { return kind() == Kind::Eq || kind() == Kind::Rel; }
  bool is_quantifier() const noexcept {
    return kind() == Kind::Exists || kind() == Kind::Forall;
  }
  bool is_binary() const noexcept {
    return kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Implies;
  }

  // Relation symbol (Rel) or bound variable (Exists/Forall).
  const std::string& name() const noexcept { return node_->name; }
  const std::string& var() const noexcept { return node_->name; }
  // Arguments of Eq (size 2) or Rel.
  const std::vector<Term>& terms() const noexcept { return node_->terms; }
  const Term& lhs() const { return node_->terms.at(0); }
  const Term& rhs() const { return node_->terms.at(1); }
  // Operand of Not, body of a quantifier.
  const Formula& sub() const { return node_->subs.at(0); }
  const Formula& body() const { return node_->subs.at(0); }
  const Formula& left() const { return node_->subs.at(0); }
  const Formula& right() const { return node_->subs.at(1); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    return a.kind() == b.kind() && a.name() == b.name() && a.node_->terms == b.node_->terms &&
           a.node_->subs == b.node_->subs;
  }

private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Term> terms;
    std::vector<Formula> subs;
  };
  Formula(Kind kind, std::string name, std::vector<Term> terms, std::vector<Formula> subs)
      : node_(std::make_shared<const Node>(
            Node{kind, std::move(name), std::move(terms), std::move(subs)})) {}

  std::shared_ptr<const Node> node_;
};

using VarSet = std::set<std::string>;
using Bindings = std::map<std::string, Term>;

// ---------------------------------------------------------------------------
// Signature checks

inline void check_term(const Term& t, const Signature& sig) {
  switch (t.kind()) {
  case Term::Kind::Variable:
    if (sig.has_symbol(t.name()))
      throw SymbolError("variable name '" + t.name() + "' collides with a signature symbol");
    return;
  case Term::Kind::Constant:
    if (!sig.has_constant(t.name())) throw SymbolError("unknown constant '" + t.name() + "'");
    return;
  case Term::Kind::Apply: {
    auto arity = sig.function_arity(t.name());
    if (!arity) throw SymbolError("unknown function '" + t.name() + "'");
    if (*arity != t.args().size())
      throw SymbolError("function '" + t.name() + "' expects " + std::to_string(*arity) +
                        " arguments, got " + std::to_string(t.args().size()));
    for (const auto& a : t.args()) check_term(a, sig);
    return;
  }
  }
}

inline void check_formula(const Formula& f, const Signature& sig) {
  switch (f.kind()) {
  case Formula::Kind::Eq:
    check_term(f.lhs(), sig);
    check_term(f.rhs(), sig);
    return;
  case Formula::Kind::Rel: {
    auto arity = sig.relation_arity(f.name());
    if (!arity) throw SymbolError("unknown relation '" + f.name() + "'");
    if (*arity != f.terms().size())
      throw SymbolError("relation '" + f.name() + "' expects " + std::to_string(*arity) +
                        " arguments, got " + std::to_string(f.terms().size()));
    for (const auto& t : f.terms()) check_term(t, sig);
    return;
  }
  case Formula::Kind::Not:
    check_formula(f.sub(), sig);
    return;
  case Formula::Kind::And:
  case Formula::Kind::Or:
  case Formula::Kind::Implies:
    check_formula(f.left(), sig);
    check_formula(f.right(), sig);
    return;
  case Formula::Kind::Exists:
  case Formula::Kind::Forall:
    if (!detail::is_identifier(f.var()) || detail::is_keyword(f.var()) || sig.has_symbol(f.var()))
      throw SymbolError("illegal bound variable '" + f.var() + "'");
    check_formula(f.body(), sig);
    return;
  }
}

// ---------------------------------------------------------------------------
// Variables

inline void collect_vars(const Term& t, VarSet& out) {
  if (t.is_variable()) out.insert(t.name());
  for (const auto& a : t.args()) collect_vars(a, out);
}

inline VarSet term_vars(const Term& t) {
  VarSet out;
  collect_vars(t, out);
  return out;
}

namespace detail {

inline void free_vars_into(const Formula& f, VarSet& bound, VarSet& out) {
  if (f.is_atomic()) {
    VarSet vs;
    for (const auto& t : f.terms()) collect_vars(t, vs);
    for (const auto& v : vs)
      if (!bound.count(v)) out.insert(v);
    return;
  }
  if (f.is_quantifier()) {
    bool fresh = bound.insert(f.var()).second;
    free_vars_into(f.body(), bound, out);
    if (fresh) bound.erase(f.var());
    return;
  }
  if (f.kind() == Formula::Kind::Not) {
    free_vars_into(f.sub(), bound, out);
    return;
  }
  free_vars_into(f.left(), bound, out);
  free_vars_into(f.right(), bound, out);
}

inline void all_vars_into(const Formula& f, VarSet& out) {
  for (const auto& t : f.is_atomic() ? f.terms() : std::vector<Term>{}) collect_vars(t, out);
  if (f.is_quantifier()) out.insert(f.var());
  if (f.kind() == Formula::Kind::Not || f.is_quantifier()) all_vars_into(f.sub(), out);
  if (f.is_binary()) {
    all_vars_into(f.left(), out);
    all_vars_into(f.right(), out);
  }
}

} // namespace detail

inline VarSet free_vars(const Formula& f) {
  VarSet bound, out;
  detail::free_vars_into(f, bound, out);
  return out;
}

// Every variable name occurring in f, free or bound.
inline VarSet all_vars(const Formula& f) {
  VarSet out;
  detail::all_vars_into(f, out);
  return out;
}

inline bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

inline bool is_quantifier_free(const Formula& f) {
  if (f.is_atomic()) return true;
  if (f.is_quantifier()) return false;
  if (f.kind() == Formula::Kind::Not) return is_quantifier_free(f.sub());
  return is_quantifier_free(f.left()) && is_quantifier_free(f.right());
}

inline std::size_t quantifier_rank(const Formula& f) {
  if (f.is_atomic()) return 0;
  if (f.is_quantifier()) return 1 + quantifier_rank(f.body());
  if (f.kind() == Formula::Kind::Not) return quantifier_rank(f.sub());
  return std::max(quantifier_rank(f.left()), quantifier_rank(f.right()));
}

// `base` followed by the smallest positive integer suffix not in `used`.
inline std::string fresh_name(const std::string& base, const VarSet& used) {
  for (std::size_t n = 1;; ++n) {
    std::string candidate = base + std::to_string(n);
    if (!used.count(candidate)) return candidate;
  }
}

// ---------------------------------------------------------------------------
// Substitution

inline Term substitute(const Term& t, const Bindings& bindings) {
  switch (t.kind()) {
  case Term::Kind::Variable: {
    auto it = bindings.find(t.name());
    return it == bindings.end() ? t : it->second;
  }
  case Term::Kind::Constant:
    return t;
  case Term::Kind::Apply: {
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(substitute(a, bindings));
    return Term::apply(t.name(), std::move(args));
  }
  }
  return t;
}

namespace detail {

inline Formula rebuild(const Formula& f, std::vector<Formula> subs) {
  switch (f.kind()) {
  case Formula::Kind::Not: return Formula::negation(std::move(subs[0]));
  case Formula::Kind::And: return Formula::conjunction(std::move(subs[0]), std::move(subs[1]));
  case Formula::Kind::Or: return Formula::disjunction(std::move(subs[0]), std::move(subs[1]));
  case Formula::Kind::Implies:
    return Formula::implication(std::move(subs[0]), std::move(subs[1]));
  case Formula::Kind::Exists: return Formula::exists(f.var(), std::move(subs[0]));
  case Formula::Kind::Forall: return Formula::forall(f.var(), std::move(subs[0]));
  default: return f;
  }
}

inline Formula substitute_impl(const Formula& f, const Bindings& bindings, VarSet& used) {
  if (bindings.empty()) return f;
  switch (f.kind()) {
  case Formula::Kind::Eq:
    return Formula::eq(substitute(f.lhs(), bindings), substitute(f.rhs(), bindings));
  case Formula::Kind::Rel: {
    std::vector<Term> args;
    for (const auto& t : f.terms()) args.push_back(substitute(t, bindings));
    return Formula::rel(f.name(), std::move(args));
  }
  case Formula::Kind::Not:
  case Formula::Kind::And:
  case Formula::Kind::Or:
  case Formula::Kind::Implies: {
    std::vector<Formula> subs{substitute_impl(f.left(), bindings, used)};
    if (f.is_binary()) subs.push_back(substitute_impl(f.right(), bindings, used));
    return rebuild(f, std::move(subs));
  }
  case Formula::Kind::Exists:
  case Formula::Kind::Forall: {
    // Only bindings for variables actually free in the body matter.
    const VarSet body_free = free_vars(f.body());
    Bindings inner;
    for (const auto& [v, t] : bindings)
      if (v != f.var() && body_free.count(v)) inner.emplace(v, t);
    if (inner.empty()) return f;

    bool captures = false;
    for (const auto& [v, t] : inner)
      if (term_vars(t).count(f.var())) captures = true;

    std::string var = f.var();
    Formula body = f.body();
    if (captures) {
      var = fresh_name(f.var(), used);
      used.insert(var);
      body = substitute_impl(body, Bindings{{f.var(), Term::variable(var)}}, used);
    }
    body = substitute_impl(body, inner, used);
    return f.kind() == Formula::Kind::Exists ? Formula::exists(var, std::move(body))
                                             : Formula::forall(var, std::move(body));
  }
  }
  return f;
}

} // namespace detail

// Capture-avoiding simultaneous substitution of terms for free variables.
// A bound variable that would capture a variable of a substituted term is
// renamed with a numeric suffix unused anywhere in the formula or bindings.
inline Formula substitute(const Formula& f, const Bindings& bindings) {
  VarSet used = all_vars(f);
  for (const auto& [v, t] : bindings) {
    used.insert(v);
    collect_vars(t, used);
  }
  return detail::substitute_impl(f, bindings, used);
}

// Instance of the induction schema for `phi` on `var`, universally closed over
// the remaining free variables (in lexicographic order, outermost first).
inline Formula induction_axiom(const Formula& phi, const std::string& var,
                               const Signature& sig = Signature::ring()) {
  if (!sig.has_constant("0") || !sig.has_constant("1") || sig.function_arity("+") != 2u)
    throw SymbolError("induction schema needs 0, 1 and binary + in the signature");
  VarSet fv = free_vars(phi);
  if (!fv.count(var)) throw DomainError("variable '" + var + "' is not free in the formula");

  Term x = Term::variable(var);
  Formula base = substitute(phi, {{var, Term::constant("0")}});
  Formula step = Formula::forall(
      var, Formula::implication(
               phi, substitute(phi, {{var, Term::apply("+", {x, Term::constant("1")})}})));
  Formula result = Formula::implication(Formula::conjunction(base, step), Formula::forall(var, phi));

  fv.erase(var);
  for (auto it = fv.rbegin(); it != fv.rend(); ++it) result = Formula::forall(*it, result);
  return result;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

// Integer literals are parsed as left-nested sums of 1; print them back as numerals.
inline std::optional<unsigned long> as_numeral(const Term& t) {
  if (t.is_constant() && (t.name() == "0" || t.name() == "1")) return t.name() == "1" ? 1 : 0;
  unsigned long count = 0;
  const Term* cur = &t;
  while (cur->is_apply() && cur->name() == "+" && cur->args().size() == 2) {
    const Term& r = cur->args()[1];
    if (!(r.is_constant() && r.name() == "1")) return std::nullopt;
    ++count;
    cur = &cur->args()[0];
  }
  if (count == 0 || !(cur->is_constant() && cur->name() == "1")) return std::nullopt;
  return count + 1;
}

// Precedence levels: 1 sum, 2 product, 3 negation, 4 atomic.
inline int term_level(const Term& t) {
  if (!t.is_apply() || as_numeral(t)) return 4;
  const auto& n = t.name();
  if (n == "-" && t.args()[0].is_constant() && t.args()[0].name() == "0") return 3;
  if (n == "+" || n == "-") return 1;
  if (n == "*") return 2;
  return 4;
}

inline std::string print_term(const Term& t, int min_level);

inline std::string print_term_at(const Term& t, int min_level) {
  std::string s = print_term(t, min_level);
  return term_level(t) < min_level ? "(" + s + ")" : s;
}

inline std::string print_term(const Term& t, int /*min_level*/) {
  if (t.is_variable() || t.is_constant()) return t.name();
  if (auto n = as_numeral(t)) return std::to_string(*n);
  const auto& n = t.name();
  const auto& a = t.args();
  switch (term_level(t)) {
  case 3: return "-" + print_term_at(a[1], 3);
  case 1: return print_term_at(a[0], 1) + " " + n + " " + print_term_at(a[1], 2);
  case 2: return print_term_at(a[0], 2) + " * " + print_term_at(a[1], 3);
  default: break;
  }
  std::string out = n + "(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ", ";
    out += print_term(a[i], 1);
  }
  return out + ")";
}

} // namespace detail

inline std::string to_string(const Term& t) { return detail::print_term(t, 1); }

inline std::string to_string(const Formula& f) {
  auto wrap = [](const Formula& g) {
    bool bare = g.is_atomic() ||
                (g.kind() == Formula::Kind::Not && g.sub().kind() == Formula::Kind::Eq);
    return bare ? to_string(g) : "(" + to_string(g) + ")";
  };
  switch (f.kind()) {
  case Formula::Kind::Eq: return to_string(f.lhs()) + " = " + to_string(f.rhs());
  case Formula::Kind::Rel: {
    std::string out = f.name() + "(";
    for (std::size_t i = 0; i < f.terms().size(); ++i) {
      if (i) out += ", ";
      out += to_string(f.terms()[i]);
    }
    return out + ")";
  }
  case Formula::Kind::Not:
    if (f.sub().kind() == Formula::Kind::Eq)
      return to_string(f.sub().lhs()) + " != " + to_string(f.sub().rhs());
    return "!" + wrap(f.sub());
  case Formula::Kind::And: return wrap(f.left()) + " & " + wrap(f.right());
  case Formula::Kind::Or: return wrap(f.left()) + " | " + wrap(f.right());
  case Formula::Kind::Implies: return wrap(f.left()) + " -> " + wrap(f.right());
  case Formula::Kind::Exists: return "exists " + f.var() + ". (" + to_string(f.body()) + ")";
  case Formula::Kind::Forall: return "forall " + f.var() + ". (" + to_string(f.body()) + ")";
  }
  return {};
}

} // namespace acf
