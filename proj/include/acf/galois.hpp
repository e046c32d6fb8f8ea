#pragma once

// Arithmetic in the finite field with p^k elements, realized as F_p[t]/(m(t))
// with m the lexicographically first monic irreducible of degree k. Used as a
// brute-force oracle for statements about algebraic closures of F_p.
//
// Elements are encoded as integers in [0, p^k): base-p digit i is the
// coefficient of t^i. The prime subfield is therefore {0, ..., p-1}.

#include <cstdint>
#include <vector>

#include "acf/error.hpp"
#include "acf/poly.hpp"

namespace acf {

// Largest field the oracle will enumerate.
inline constexpr std::uint64_t kMaxOracleFieldSize = 1'000'000;

namespace detail {

using Digits = std::vector<std::uint64_t>; // low to high, length k

// Product of two residues mod m(t), where m is monic of degree k given by
// its low coefficients m[0..k-1].
inline Digits mul_mod(const Digits& a, const Digits& b, const Digits& m, std::uint64_t p) {
  const std::size_t k = m.size();
  std::vector<std::uint64_t> prod(2 * k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  for (std::size_t d = 2 * k; d-- > k;) {
    std::uint64_t c = prod[d];
    if (c == 0) continue;
    prod[d] = 0;
    // t^k = -m(t) + t^k
    for (std::size_t i = 0; i < k; ++i) prod[d - k + i] = (prod[d - k + i] + (p - m[i]) * c) % p;
  }
  prod.resize(k);
  return prod;
}

// Is the monic polynomial with low coefficients `num` divisible by the monic
// polynomial with low coefficients `div`?
inline bool divisible(Digits num, const Digits& div, std::uint64_t p) {
  num.push_back(1);
  Digits d(div);
  d.push_back(1);
  const std::size_t dn = div.size();
  for (std::size_t top = num.size(); top-- > dn;) {
    const std::uint64_t c = num[top];
    if (c == 0) continue;
    for (std::size_t i = 0; i <= dn; ++i)
      num[top - dn + i] = (num[top - dn + i] + (p - c) * d[i]) % p;
  }
  for (std::size_t i = 0; i < dn; ++i)
    if (num[i]) return false;
  return true;
}

inline Digits digits_of(std::uint64_t index, std::uint64_t p, std::size_t k) {
  Digits out(k);
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = index % p;
    index /= p;
  }
  return out;
}

inline std::uint64_t index_of(const Digits& d, std::uint64_t p) {
  std::uint64_t idx = 0;
  for (std::size_t i = d.size(); i-- > 0;) idx = idx * p + d[i];
  return idx;
}

} // namespace detail

// Lexicographically first monic irreducible of degree k over F_p, ordering
// candidates by (c_{k-1}, ..., c_0). Returns the low coefficients c_0..c_{k-1}.
inline std::vector<std::uint64_t> first_irreducible(std::uint64_t p, std::size_t k) {
  if (k == 0) throw DomainError("extension degree must be positive");
  if (k == 1) return {0};
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < k; ++i) count *= p;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    auto cand = detail::digits_of(idx, p, k);
    bool reducible = false;
    for (std::size_t d = 1; d <= k / 2 && !reducible; ++d) {
      std::uint64_t divisors = 1;
      for (std::size_t i = 0; i < d; ++i) divisors *= p;
      for (std::uint64_t j = 0; j < divisors && !reducible; ++j)
        reducible = detail::divisible(cand, detail::digits_of(j, p, d), p);
    }
    if (!reducible) return cand;
  }
  throw InternalError("no irreducible polynomial found");
}

class GaloisField {
public:
  using Elem = std::uint32_t;

  GaloisField(std::uint64_t p, std::size_t k) : p_(p), k_(k) {
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
    if (k == 0) throw DomainError("extension degree must be positive");
    q_ = 1;
    for (std::size_t i = 0; i < k; ++i) {
      q_ *= p;
      if (q_ > kMaxOracleFieldSize)
        throw ResourceError("field of size " + std::to_string(p) + "^" + std::to_string(k) +
                            " exceeds the oracle bound");
    }
    modulus_ = first_irreducible(p, k);
    build_tables();
  }

  std::uint64_t characteristic() const noexcept { return p_; }
  std::size_t degree() const noexcept { return k_; }
  std::uint64_t size() const noexcept { return q_; }
  // Low coefficients of the defining polynomial (monic, degree k).
  const std::vector<std::uint64_t>& modulus() const noexcept { return modulus_; }

  Elem from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += static_cast<std::int64_t>(p_);
    return static_cast<Elem>(r);
  }

  Elem add(Elem a, Elem b) const {
    if (k_ == 1) return static_cast<Elem>((a + b) % p_);
    Elem out = 0, scale = 1;
    for (std::size_t i = 0; i < k_; ++i) {
      out += static_cast<Elem>(((a % p_) + (b % p_)) % p_) * scale;
      a /= static_cast<Elem>(p_);
      b /= static_cast<Elem>(p_);
      scale *= static_cast<Elem>(p_);
    }
    return out;
  }
  Elem neg(Elem a) const {
    if (k_ == 1) return static_cast<Elem>((p_ - a) % p_);
    Elem out = 0, scale = 1;
    for (std::size_t i = 0; i < k_; ++i) {
      out += static_cast<Elem>((p_ - a % p_) % p_) * scale;
      a /= static_cast<Elem>(p_);
      scale *= static_cast<Elem>(p_);
    }
    return out;
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    if (k_ == 1) return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
    std::uint64_t e = static_cast<std::uint64_t>(log_[a]) + log_[b];
    if (e >= q_ - 1) e -= q_ - 1;
    return exp_[e];
  }

  // Horner evaluation; coefficients are low to high.
  Elem evaluate(const std::vector<Elem>& coeffs, Elem x) const {
    Elem acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = add(mul(acc, x), coeffs[i]);
    return acc;
  }

  // Digits of an element, low to high.
  std::vector<std::uint64_t> digits(Elem a) const { return detail::digits_of(a, p_, k_); }

private:
  void build_tables() {
    if (k_ == 1) return;
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    // Prime factors of q - 1 for the primitivity test.
    std::vector<std::uint64_t> factors;
    std::uint64_t n = q_ - 1;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) {
        factors.push_back(d);
        while (n % d == 0) n /= d;
      }
    if (n > 1) factors.push_back(n);

    auto power = [&](const detail::Digits& base, std::uint64_t e) {
      detail::Digits result(k_, 0), b = base;
      result[0] = 1;
      while (e) {
        if (e & 1u) result = detail::mul_mod(result, b, modulus_, p_);
        e >>= 1;
        if (e) b = detail::mul_mod(b, b, modulus_, p_);
      }
      return result;
    };
    detail::Digits one(k_, 0);
    one[0] = 1;
    for (std::uint64_t g = 2; g < q_; ++g) {
      auto gd = detail::digits_of(g, p_, k_);
      bool primitive = true;
      for (auto r : factors)
        if (power(gd, (q_ - 1) / r) == one) {
          primitive = false;
          break;
        }
      if (!primitive) continue;
      detail::Digits cur = one;
      for (std::uint64_t i = 0; i < q_ - 1; ++i) {
        Elem idx = static_cast<Elem>(detail::index_of(cur, p_));
        exp_[i] = idx;
        log_[idx] = static_cast<Elem>(i);
        cur = detail::mul_mod(cur, gd, modulus_, p_);
      }
      return;
    }
    throw InternalError("no primitive element found");
  }

  std::uint64_t p_;
  std::size_t k_;
  std::uint64_t q_;
  std::vector<std::uint64_t> modulus_;
  std::vector<Elem> exp_;
  std::vector<Elem> log_;
};

// Coefficients (low to high) of a univariate polynomial over F_p as residues.
inline std::vector<GaloisField::Elem> residue_coefficients(const MultiPoly& f) {
  if (f.field().is_rationals()) throw DomainError("expected a polynomial over F_p");
  auto vars = f.variables();
  if (vars.size() > 1) throw DomainError("expected a univariate polynomial");
  std::vector<GaloisField::Elem> out;
  if (vars.empty()) {
    out.push_back(static_cast<GaloisField::Elem>(f.constant_value().get_num().get_ui()));
    return out;
  }
  for (const auto& c : f.coefficients(*vars.begin()))
    out.push_back(static_cast<GaloisField::Elem>(c.constant_value().get_num().get_ui()));
  return out;
}

// Every root of f in the field with p^k elements, by exhaustive evaluation.
inline std::vector<GaloisField::Elem> roots_in_Fq(const GaloisField& field, const MultiPoly& f) {
  if (f.is_zero()) throw DomainError("roots of the zero polynomial");
  if (f.field().characteristic() != field.characteristic())
    throw DomainError("polynomial and field have different characteristics");
  const auto coeffs = residue_coefficients(f);
  std::vector<GaloisField::Elem> roots;
  for (std::uint64_t x = 0; x < field.size(); ++x)
    if (field.evaluate(coeffs, static_cast<GaloisField::Elem>(x)) == 0)
      roots.push_back(static_cast<GaloisField::Elem>(x));
  return roots;
}

inline std::vector<GaloisField::Elem> roots_in_Fq(const MultiPoly& f, std::size_t k) {
  if (f.field().is_rationals()) throw DomainError("expected a polynomial over F_p");
  return roots_in_Fq(GaloisField(f.field().characteristic(), k), f);
}

} // namespace acf
