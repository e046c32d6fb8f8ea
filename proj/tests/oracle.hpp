#pragma once

// Brute-force oracles shared by the unit tests and the acceptance binary.

#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "acf/galois.hpp"
#include "acf/qe.hpp"

namespace oracle {

using acf::GaloisField;
using Elem = GaloisField::Elem;
using Point = std::map<std::string, std::uint64_t>;

inline const GaloisField& field(std::uint64_t p, std::size_t k) {
  static std::map<std::pair<std::uint64_t, std::size_t>, std::unique_ptr<GaloisField>> cache;
  auto& slot = cache[{p, k}];
  if (!slot) slot = std::make_unique<GaloisField>(p, k);
  return *slot;
}

// Coefficients in var (low to high) after substituting the residues in point.
inline std::vector<Elem> specialize(const acf::MultiPoly& f, const std::string& var, std::uint64_t p,
                                    const Point& point) {
  std::vector<Elem> out(static_cast<std::size_t>(std::max(f.degree(var), 0)) + 1, 0);
  const acf::CoefField fp = acf::CoefField::prime(p);
  for (const auto& [m, c] : f.terms()) {
    std::uint64_t v = fp.normalize(c).get_num().get_ui();
    unsigned k = 0;
    for (const auto& [name, e] : m) {
      if (name == var) {
        k = e;
        continue;
      }
      for (unsigned i = 0; i < e; ++i) v = v * (point.at(name) % p) % p;
    }
    out[k] = static_cast<Elem>((out[k] + v) % p);
  }
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

inline bool is_zero(const std::vector<Elem>& c) { return c.size() == 1 && c[0] == 0; }

// Is there x in F_{p^k} for some k <= max_k satisfying every atom? With no
// usable equation, k grows until the field outnumbers the inequations' roots.
inline bool exists_root(const acf::Conjunction& conj, const std::string& var, std::uint64_t p,
                        const Point& point, std::size_t max_k) {
  std::vector<std::vector<Elem>> eqs, neqs;
  for (const auto& a : conj) {
    auto c = specialize(a.poly, var, p, point);
    if (a.sign == acf::Sign::Zero) {
      if (is_zero(c)) continue;
      if (c.size() == 1) return false;
      eqs.push_back(std::move(c));
    } else {
      if (is_zero(c)) return false;
      if (c.size() == 1) continue;
      neqs.push_back(std::move(c));
    }
  }
  auto satisfies = [&](const GaloisField& f, Elem x) {
    for (const auto& e : eqs)
      if (f.evaluate(e, x) != 0) return false;
    for (const auto& n : neqs)
      if (f.evaluate(n, x) == 0) return false;
    return true;
  };
  auto scan = [&](const GaloisField& f) {
    for (std::uint64_t x = 0; x < f.size(); ++x)
      if (satisfies(f, static_cast<Elem>(x))) return true;
    return false;
  };
  if (eqs.empty()) {
    std::size_t roots = 0;
    for (const auto& n : neqs) roots += n.size() - 1;
    std::size_t k = 1;
    std::uint64_t q = p;
    while (q <= roots) {
      q *= p;
      ++k;
    }
    return scan(field(p, k));
  }
  for (std::size_t k = 1; k <= max_k; ++k)
    if (scan(field(p, k))) return true;
  return false;
}

// Every assignment of residues mod p to the given variables.
template <typename Fn>
void for_each_point(const std::vector<std::string>& vars, std::uint64_t p, Fn&& fn) {
  Point point;
  for (const auto& v : vars) point[v] = 0;
  while (true) {
    fn(point);
    std::size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++point[vars[i]] < p) break;
      point[vars[i]] = 0;
    }
    if (i == vars.size()) return;
  }
}

// Random polynomial in x and the parameters, x-degree at most max_deg.
inline acf::MultiPoly random_poly(std::mt19937& rng, const std::vector<std::string>& params,
                                  unsigned max_deg, int coef_range = 3) {
  std::uniform_int_distribution<int> coef(-coef_range, coef_range);
  std::uniform_int_distribution<unsigned> xdeg(0, max_deg), pdeg(0, 1);
  std::uniform_int_distribution<int> count(1, 4);
  acf::MultiPoly f;
  for (int t = count(rng); t > 0; --t) {
    acf::Monomial m;
    if (unsigned e = xdeg(rng)) m.emplace_back("x", e);
    for (const auto& v : params)
      if (unsigned e = pdeg(rng)) m.emplace_back(v, e);
    f.add_term(m, coef(rng));
  }
  if (f.degree("x") <= 0) f.add_term({{"x", 1 + xdeg(rng) % max_deg}}, 1);
  return f;
}

// Random conjunction of 1-3 atoms, at least one mentioning x.
inline acf::Conjunction random_conjunction(std::mt19937& rng, const std::vector<std::string>& params,
                                           unsigned max_deg) {
  std::uniform_int_distribution<int> count(1, 3), sign(0, 2);
  acf::Conjunction conj;
  for (int n = count(rng); n > 0; --n)
    conj.emplace_back(random_poly(rng, params, max_deg), sign(rng) == 0 ? acf::Sign::NonZero : acf::Sign::Zero);
  return conj;
}

} // namespace oracle
