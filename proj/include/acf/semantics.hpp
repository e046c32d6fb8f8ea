#pragma once

// Finite L-structures, Tarski satisfaction, and structure-preserving maps.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "acf/error.hpp"
#include "acf/parser.hpp"
#include "acf/syntax.hpp"

namespace acf {

using Element = std::size_t;
using Assignment = std::map<std::string, Element>;
using ElementMap = std::vector<Element>;

// A nonempty finite universe with an interpretation of every symbol of its
// signature. Elements are the indices 0..size()-1; names are for I/O only.
// Function tables are stored row-major over argument tuples.
class FiniteStructure {
public:
  using FunctionTable = std::vector<Element>;
  using RelationTable = std::vector<bool>;

  FiniteStructure(Signature sig, std::vector<std::string> universe,
                  std::map<std::string, FunctionTable> functions,
                  std::map<std::string, RelationTable> relations,
                  std::map<std::string, Element> constants)
      : sig_(std::move(sig)), universe_(std::move(universe)), functions_(std::move(functions)),
        relations_(std::move(relations)), constants_(std::move(constants)) {
    validate();
  }

  // Builds every table by calling the given interpretations on all tuples.
  static FiniteStructure tabulate(
      const Signature& sig, std::vector<std::string> universe,
      const std::function<Element(const std::string&, std::span<const Element>)>& fn,
      const std::function<bool(const std::string&, std::span<const Element>)>& rel,
      const std::map<std::string, Element>& constants) {
    const std::size_t n = universe.size();
    std::map<std::string, FunctionTable> functions;
    for (const auto& [name, arity] : sig.functions()) {
      FunctionTable table(power(n, arity));
      for_each_tuple(n, arity, [&](std::span<const Element> args, std::size_t idx) {
        table[idx] = fn(name, args);
      });
      functions.emplace(name, std::move(table));
    }
    std::map<std::string, RelationTable> relations;
    for (const auto& [name, arity] : sig.relations()) {
      RelationTable table(power(n, arity));
      for_each_tuple(n, arity, [&](std::span<const Element> args, std::size_t idx) {
        table[idx] = rel(name, args);
      });
      relations.emplace(name, std::move(table));
    }
    return FiniteStructure(sig, std::move(universe), std::move(functions), std::move(relations),
                           constants);
  }

  // Z/n with the ring signature; elements named "0".."n-1".
  static FiniteStructure integers_mod(std::size_t n) {
    return tabulate(
        Signature::ring(), numbered(n),
        [n](const std::string& f, std::span<const Element> a) -> Element {
          if (f == "+") return (a[0] + a[1]) % n;
          if (f == "-") return (a[0] + n - a[1]) % n;
          return (a[0] * a[1]) % n;
        },
        [](const std::string&, std::span<const Element>) { return false; },
        {{"0", 0}, {"1", 1 % n}});
  }

  // Z/n with the additive-group signature {0, +}.
  static FiniteStructure cyclic_group(std::size_t n) {
    return tabulate(
        Signature::additive_group(), numbered(n),
        [n](const std::string&, std::span<const Element> a) -> Element { return (a[0] + a[1]) % n; },
        [](const std::string&, std::span<const Element>) { return false; }, {{"0", 0}});
  }

  static std::vector<std::string> numbered(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return names;
  }

  const Signature& signature() const noexcept { return sig_; }
  std::size_t size() const noexcept { return universe_.size(); }
  const std::vector<std::string>& universe() const noexcept { return universe_; }
  const std::string& name_of(Element e) const { return universe_.at(e); }
  std::optional<Element> find(const std::string& name) const {
    for (Element e = 0; e < universe_.size(); ++e)
      if (universe_[e] == name) return e;
    return std::nullopt;
  }

  Element apply(const std::string& fn, std::span<const Element> args) const {
    auto it = functions_.find(fn);
    if (it == functions_.end()) throw SymbolError("structure has no function '" + fn + "'");
    return it->second[index(args)];
  }
  bool holds(const std::string& rel, std::span<const Element> args) const {
    auto it = relations_.find(rel);
    if (it == relations_.end()) throw SymbolError("structure has no relation '" + rel + "'");
    return it->second[index(args)];
  }
  Element constant(const std::string& c) const {
    auto it = constants_.find(c);
    if (it == constants_.end()) throw SymbolError("structure has no constant '" + c + "'");
    return it->second;
  }

  const std::map<std::string, FunctionTable>& function_tables() const noexcept { return functions_; }
  const std::map<std::string, RelationTable>& relation_tables() const noexcept { return relations_; }
  const std::map<std::string, Element>& constant_values() const noexcept { return constants_; }

  // Row-major position of a tuple.
  std::size_t index(std::span<const Element> args) const {
    std::size_t idx = 0;
    for (Element a : args) idx = idx * size() + a;
    return idx;
  }

  // Calls visit(tuple, row-major index) for every tuple in {0..n-1}^arity.
  template <typename Visit>
  static void for_each_tuple(std::size_t n, std::size_t arity, Visit&& visit) {
    std::vector<Element> tuple(arity, 0);
    const std::size_t total = power(n, arity);
    for (std::size_t idx = 0; idx < total; ++idx) {
      visit(std::span<const Element>(tuple), idx);
      for (std::size_t i = arity; i-- > 0;) {
        if (++tuple[i] < n) break;
        tuple[i] = 0;
      }
    }
  }

  static std::size_t power(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    while (exp--) r *= base;
    return r;
  }

private:
  void validate() const {
    const std::size_t n = universe_.size();
    if (n == 0) throw DomainError("universe must be nonempty");
    if (std::set<std::string>(universe_.begin(), universe_.end()).size() != n)
      throw DomainError("universe names must be distinct");
    for (const auto& [name, arity] : sig_.functions()) {
      auto it = functions_.find(name);
      if (it == functions_.end()) throw DomainError("missing table for function '" + name + "'");
      if (it->second.size() != power(n, arity))
        throw DomainError("table for '" + name + "' has wrong size");
      for (Element e : it->second)
        if (e >= n) throw DomainError("table for '" + name + "' leaves the universe");
    }
    for (const auto& [name, arity] : sig_.relations()) {
      auto it = relations_.find(name);
      if (it == relations_.end()) throw DomainError("missing table for relation '" + name + "'");
      if (it->second.size() != power(n, arity))
        throw DomainError("table for '" + name + "' has wrong size");
    }
    for (const auto& name : sig_.constants()) {
      auto it = constants_.find(name);
      if (it == constants_.end()) throw DomainError("missing value for constant '" + name + "'");
      if (it->second >= n) throw DomainError("constant '" + name + "' outside the universe");
    }
    if (functions_.size() != sig_.functions().size() ||
        relations_.size() != sig_.relations().size() ||
        constants_.size() != sig_.constants().size())
      throw DomainError("interpretation of a symbol outside the signature");
  }

  Signature sig_;
  std::vector<std::string> universe_;
  std::map<std::string, FunctionTable> functions_;
  std::map<std::string, RelationTable> relations_;
  std::map<std::string, Element> constants_;
};

// ---------------------------------------------------------------------------
// Satisfaction

// Iterative: numeral sugar makes left spines tens of thousands deep.
inline Element eval_term(const FiniteStructure& s, const Term& t, const Assignment& a) {
  struct Frame {
    const Term* term;
    std::vector<Element> args;
  };
  std::vector<Frame> stack{{&t, {}}};
  Element result = 0;
  while (!stack.empty()) {
    Frame& top = stack.back();
    const Term& cur = *top.term;
    if (cur.kind() == Term::Kind::Apply && top.args.size() < cur.args().size()) {
      const Term* next = &cur.args()[top.args.size()];
      stack.push_back({next, {}});
      continue;
    }
    switch (cur.kind()) {
    case Term::Kind::Variable: {
      auto it = a.find(cur.name());
      if (it == a.end()) throw DomainError("unassigned variable '" + cur.name() + "'");
      if (it->second >= s.size()) throw DomainError("variable '" + cur.name() + "' assigned outside the universe");
      result = it->second;
      break;
    }
    case Term::Kind::Constant: result = s.constant(cur.name()); break;
    case Term::Kind::Apply: result = s.apply(cur.name(), top.args); break;
    }
    stack.pop_back();
    if (!stack.empty()) stack.back().args.push_back(result);
  }
  return result;
}

namespace detail {

inline bool eval_impl(const FiniteStructure& s, const Formula& f, Assignment& a) {
  switch (f.kind()) {
  case Formula::Kind::Eq:
    return eval_term(s, f.lhs(), a) == eval_term(s, f.rhs(), a);
  case Formula::Kind::Rel: {
    std::vector<Element> args;
    for (const auto& t : f.terms()) args.push_back(eval_term(s, t, a));
    return s.holds(f.name(), args);
  }
  case Formula::Kind::Not:
    return !eval_impl(s, f.sub(), a);
  case Formula::Kind::And:
    return eval_impl(s, f.left(), a) && eval_impl(s, f.right(), a);
  case Formula::Kind::Or:
    return eval_impl(s, f.left(), a) || eval_impl(s, f.right(), a);
  case Formula::Kind::Implies:
    return !eval_impl(s, f.left(), a) || eval_impl(s, f.right(), a);
  case Formula::Kind::Exists:
  case Formula::Kind::Forall: {
    const bool want = f.kind() == Formula::Kind::Exists;
    std::optional<Element> saved;
    if (auto it = a.find(f.var()); it != a.end()) saved = it->second;
    bool result = !want;
    for (Element b = 0; b < s.size(); ++b) {
      a[f.var()] = b;
      if (eval_impl(s, f.body(), a) == want) {
        result = want;
        break;
      }
    }
    if (saved) a[f.var()] = *saved;
    else a.erase(f.var());
    return result;
  }
  }
  return false;
}

} // namespace detail

// Truth of f in s under a; quantifiers range over the finite universe.
inline bool eval(const FiniteStructure& s, const Formula& f, const Assignment& a = {}) {
  Assignment scratch = a;
  return detail::eval_impl(s, f, scratch);
}

// s satisfies every sentence of the theory.
inline bool is_model(const FiniteStructure& s, const std::vector<Formula>& theory) {
  for (const auto& phi : theory)
    if (!is_sentence(phi)) throw DomainError("theory member is not a sentence: " + to_string(phi));
  for (const auto& phi : theory)
    if (!eval(s, phi)) return false;
  return true;
}

// The nine field axioms over the ring signature.
inline std::vector<Formula> field_axioms() {
  static const char* const texts[] = {
      "forall x. forall y. x + y = y + x",
      "forall x. forall y. forall z. x + (y + z) = (x + y) + z",
      "forall x. x + 0 = x",
      "forall x. exists y. x + y = 0",
      "forall x. forall y. x * y = y * x",
      "forall x. forall y. forall z. x * (y * z) = (x * y) * z",
      "forall x. x * 1 = x",
      "forall x. x != 0 -> exists y. x * y = 1",
      "forall x. forall y. forall z. x * (y + z) = x * y + x * z",
  };
  std::vector<Formula> out;
  for (const char* t : texts) out.push_back(parse_formula(t));
  return out;
}

// ---------------------------------------------------------------------------
// Maps between structures

// Function clause, relation clause in the "if and only if" form, and constant
// clause. This is stronger than the one-directional relation clause common in
// other texts: a homomorphism must also reflect relations.
inline bool is_homomorphism(const ElementMap& m, const FiniteStructure& a, const FiniteStructure& b) {
  if (!(a.signature() == b.signature())) throw DomainError("structures have different signatures");
  if (m.size() != a.size()) throw DomainError("map is not total on the domain");
  for (Element img : m)
    if (img >= b.size()) throw DomainError("map leaves the codomain");

  std::vector<Element> image;
  for (const auto& [name, arity] : a.signature().functions()) {
    bool ok = true;
    FiniteStructure::for_each_tuple(a.size(), arity, [&](std::span<const Element> args, std::size_t) {
      if (!ok) return;
      image.assign(args.size(), 0);
      for (std::size_t i = 0; i < args.size(); ++i) image[i] = m[args[i]];
      if (m[a.apply(name, args)] != b.apply(name, image)) ok = false;
    });
    if (!ok) return false;
  }
  for (const auto& [name, arity] : a.signature().relations()) {
    bool ok = true;
    FiniteStructure::for_each_tuple(a.size(), arity, [&](std::span<const Element> args, std::size_t) {
      if (!ok) return;
      image.assign(args.size(), 0);
      for (std::size_t i = 0; i < args.size(); ++i) image[i] = m[args[i]];
      if (a.holds(name, args) != b.holds(name, image)) ok = false;
    });
    if (!ok) return false;
  }
  for (const auto& c : a.signature().constants())
    if (m[a.constant(c)] != b.constant(c)) return false;
  return true;
}

namespace detail {

class IsoSearch {
public:
  IsoSearch(const FiniteStructure& a, const FiniteStructure& b)
      : a_(a), b_(b), fwd_(a.size(), kNone), bwd_(b.size(), kNone) {}

  std::optional<ElementMap> run() {
    for (const auto& c : a_.signature().constants())
      if (!bind(a_.constant(c), b_.constant(c))) return std::nullopt;
    if (!consistent()) return std::nullopt;
    if (!extend(0)) return std::nullopt;
    return ElementMap(fwd_.begin(), fwd_.end());
  }

private:
  static constexpr Element kNone = static_cast<Element>(-1);

  bool bind(Element x, Element y) {
    if (fwd_[x] == y && bwd_[y] == x) return true;
    if (fwd_[x] != kNone || bwd_[y] != kNone) return false;
    fwd_[x] = y;
    bwd_[y] = x;
    return true;
  }

  // Every table entry whose arguments are all mapped must agree with the
  // partial bijection.
  bool consistent() const {
    std::vector<Element> image;
    for (const auto& [name, arity] : a_.signature().functions()) {
      bool ok = true;
      FiniteStructure::for_each_tuple(a_.size(), arity, [&](std::span<const Element> args, std::size_t) {
        if (!ok || !mapped(args, image)) return;
        Element out = a_.apply(name, args);
        Element img = b_.apply(name, image);
        if (fwd_[out] != kNone ? fwd_[out] != img : bwd_[img] != kNone) ok = false;
      });
      if (!ok) return false;
    }
    for (const auto& [name, arity] : a_.signature().relations()) {
      bool ok = true;
      FiniteStructure::for_each_tuple(a_.size(), arity, [&](std::span<const Element> args, std::size_t) {
        if (!ok || !mapped(args, image)) return;
        if (a_.holds(name, args) != b_.holds(name, image)) ok = false;
      });
      if (!ok) return false;
    }
    return true;
  }

  bool mapped(std::span<const Element> args, std::vector<Element>& image) const {
    image.assign(args.size(), 0);
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (fwd_[args[i]] == kNone) return false;
      image[i] = fwd_[args[i]];
    }
    return true;
  }

  bool extend(Element x) {
    while (x < a_.size() && fwd_[x] != kNone) ++x;
    if (x == a_.size()) return true;
    for (Element y = 0; y < b_.size(); ++y) {
      if (bwd_[y] != kNone) continue;
      fwd_[x] = y;
      bwd_[y] = x;
      if (consistent() && extend(x + 1)) return true;
      fwd_[x] = kNone;
      bwd_[y] = kNone;
    }
    return false;
  }

  const FiniteStructure& a_;
  const FiniteStructure& b_;
  std::vector<Element> fwd_;
  std::vector<Element> bwd_;
};

} // namespace detail

// A bijection that is a homomorphism with homomorphic inverse, or nothing.
// Exact backtracking; intended for universes of up to about a dozen elements.
inline std::optional<ElementMap> find_isomorphism(const FiniteStructure& a, const FiniteStructure& b) {
  if (!(a.signature() == b.signature())) throw DomainError("structures have different signatures");
  if (a.size() != b.size()) return std::nullopt;
  return detail::IsoSearch(a, b).run();
}

// The substructure of b on `subset` (element indices of b), or nothing when
// the subset is empty or not closed under b's functions and constants.
inline std::optional<FiniteStructure> induced_substructure(const FiniteStructure& b,
                                                           const std::vector<Element>& subset) {
  std::vector<Element> elems(subset);
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (elems.empty()) return std::nullopt;
  std::map<Element, Element> local;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (elems[i] >= b.size()) throw DomainError("subset leaves the universe");
    local[elems[i]] = i;
  }
  std::map<std::string, Element> constants;
  for (const auto& c : b.signature().constants()) {
    auto it = local.find(b.constant(c));
    if (it == local.end()) return std::nullopt;
    constants[c] = it->second;
  }
  std::vector<std::string> names;
  for (Element e : elems) names.push_back(b.name_of(e));

  bool closed = true;
  std::vector<Element> outer;
  auto fn = [&](const std::string& f, std::span<const Element> args) -> Element {
    outer.assign(args.size(), 0);
    for (std::size_t i = 0; i < args.size(); ++i) outer[i] = elems[args[i]];
    auto it = local.find(b.apply(f, outer));
    if (it == local.end()) {
      closed = false;
      return 0;
    }
    return it->second;
  };
  auto rel = [&](const std::string& r, std::span<const Element> args) {
    outer.assign(args.size(), 0);
    for (std::size_t i = 0; i < args.size(); ++i) outer[i] = elems[args[i]];
    return b.holds(r, outer);
  };
  FiniteStructure sub = FiniteStructure::tabulate(b.signature(), names, fn, rel, constants);
  if (!closed) return std::nullopt;
  return sub;
}

// a's universe (matched by element name) is a subset of b's, and every table of
// a is the restriction of b's. Closure follows because a's tables are total.
inline bool is_substructure(const FiniteStructure& a, const FiniteStructure& b) {
  if (!(a.signature() == b.signature())) throw DomainError("structures have different signatures");
  ElementMap inclusion;
  for (const auto& name : a.universe()) {
    auto e = b.find(name);
    if (!e) return false;
    inclusion.push_back(*e);
  }
  std::vector<Element> image;
  for (const auto& [name, arity] : a.signature().functions()) {
    bool ok = true;
    FiniteStructure::for_each_tuple(a.size(), arity, [&](std::span<const Element> args, std::size_t) {
      if (!ok) return;
      image.assign(args.size(), 0);
      for (std::size_t i = 0; i < args.size(); ++i) image[i] = inclusion[args[i]];
      if (inclusion[a.apply(name, args)] != b.apply(name, image)) ok = false;
    });
    if (!ok) return false;
  }
  for (const auto& [name, arity] : a.signature().relations()) {
    bool ok = true;
    FiniteStructure::for_each_tuple(a.size(), arity, [&](std::span<const Element> args, std::size_t) {
      if (!ok) return;
      image.assign(args.size(), 0);
      for (std::size_t i = 0; i < args.size(); ++i) image[i] = inclusion[args[i]];
      if (a.holds(name, args) != b.holds(name, image)) ok = false;
    });
    if (!ok) return false;
  }
  for (const auto& c : a.signature().constants())
    if (inclusion[a.constant(c)] != b.constant(c)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Bounded elementary equivalence via the Ehrenfeucht-Fraisse game.

namespace detail {

class EfGame {
public:
  EfGame(const FiniteStructure& a, const FiniteStructure& b) : a_(a), b_(b) {}

  bool duplicator_wins(std::vector<Element>& xs, std::vector<Element>& ys, std::size_t rounds) const {
    if (!partial_iso(xs, ys)) return false;
    if (rounds == 0) return true;
    // Spoiler plays in a; duplicator answers in b. Then the other way round.
    for (int side = 0; side < 2; ++side) {
      const FiniteStructure& spoil = side == 0 ? a_ : b_;
      const FiniteStructure& answer = side == 0 ? b_ : a_;
      for (Element s = 0; s < spoil.size(); ++s) {
        bool answered = false;
        for (Element r = 0; r < answer.size() && !answered; ++r) {
          xs.push_back(side == 0 ? s : r);
          ys.push_back(side == 0 ? r : s);
          answered = duplicator_wins(xs, ys, rounds - 1);
          xs.pop_back();
          ys.pop_back();
        }
        if (!answered) return false;
      }
    }
    return true;
  }

private:
  static constexpr Element kNone = static_cast<Element>(-1);

  // The pairing (xs_i, ys_i) together with the constants extends to an
  // isomorphism between the generated substructures. With function symbols this
  // is what agreement on all atomic formulas (arbitrary terms) requires.
  bool partial_iso(const std::vector<Element>& xs, const std::vector<Element>& ys) const {
    std::vector<Element> fwd(a_.size(), kNone), bwd(b_.size(), kNone);
    std::vector<Element> pa, pb;
    auto pair = [&](Element x, Element y) {
      if (fwd[x] == y) return true;
      if (fwd[x] != kNone || bwd[y] != kNone) return false;
      fwd[x] = y;
      bwd[y] = x;
      pa.push_back(x);
      pb.push_back(y);
      return true;
    };
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!pair(xs[i], ys[i])) return false;
    for (const auto& c : a_.signature().constants())
      if (!pair(a_.constant(c), b_.constant(c))) return false;

    std::vector<Element> ia, ib;
    for (bool grew = true; grew;) {
      grew = false;
      const std::size_t k = pa.size();
      for (const auto& [name, arity] : a_.signature().functions()) {
        bool ok = true;
        FiniteStructure::for_each_tuple(k, arity, [&](std::span<const Element> idx, std::size_t) {
          if (!ok) return;
          ia.assign(arity, 0);
          ib.assign(arity, 0);
          for (std::size_t i = 0; i < arity; ++i) {
            ia[i] = pa[idx[i]];
            ib[i] = pb[idx[i]];
          }
          std::size_t before = pa.size();
          if (!pair(a_.apply(name, ia), b_.apply(name, ib))) ok = false;
          if (pa.size() != before) grew = true;
        });
        if (!ok) return false;
      }
    }
    for (const auto& [name, arity] : a_.signature().relations()) {
      bool ok = true;
      FiniteStructure::for_each_tuple(pa.size(), arity, [&](std::span<const Element> idx, std::size_t) {
        if (!ok) return;
        ia.assign(arity, 0);
        ib.assign(arity, 0);
        for (std::size_t i = 0; i < arity; ++i) {
          ia[i] = pa[idx[i]];
          ib[i] = pb[idx[i]];
        }
        if (a_.holds(name, ia) != b_.holds(name, ib)) ok = false;
      });
      if (!ok) return false;
    }
    return true;
  }

  const FiniteStructure& a_;
  const FiniteStructure& b_;
};

} // namespace detail

// a and b agree on every sentence of quantifier rank <= depth.
inline bool elem_equiv_at_depth(const FiniteStructure& a, const FiniteStructure& b, std::size_t depth) {
  if (!(a.signature() == b.signature())) throw DomainError("structures have different signatures");
  std::vector<Element> xs, ys;
  return detail::EfGame(a, b).duplicator_wins(xs, ys, depth);
}

} // namespace acf
