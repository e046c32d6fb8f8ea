#include <random>

#include <gtest/gtest.h>

#include "acf/galois.hpp"
#include "acf/polyterm.hpp"

using namespace acf;

namespace {

const CoefField kQ = CoefField::rationals();

MultiPoly P(const char* text, const CoefField& field = kQ) { return parse_polynomial(text, field); }

MultiPoly random_poly(std::mt19937& rng, const CoefField& field, const std::vector<std::string>& vars,
                      unsigned max_deg, int coef_range) {
  std::uniform_int_distribution<int> coef(-coef_range, coef_range);
  std::uniform_int_distribution<unsigned> exp(0, max_deg);
  std::uniform_int_distribution<int> count(1, 5);
  MultiPoly f(field);
  for (int t = count(rng); t > 0; --t) {
    Monomial m;
    unsigned budget = max_deg;
    for (const auto& v : vars) {
      unsigned e = std::min(exp(rng), budget);
      budget -= e;
      if (e) m.emplace_back(v, e);
    }
    f.add_term(m, coef(rng));
  }
  return f;
}

} // namespace

TEST(Arith, Examples) {
  EXPECT_EQ(P("(x+1)*(x-1)"), P("x^2 - 1"));
  EXPECT_EQ((P("x+1") * P("x-1")).to_string(), "x^2 - 1");
  EXPECT_EQ(P("x*y + 3") + MultiPoly(), P("x*y + 3"));
  const CoefField f2 = CoefField::prime(2);
  EXPECT_EQ(P("x+y", f2).pow(2), P("x^2 + y^2", f2));
  EXPECT_THROW(P("x") + P("x", f2), DomainError);
  EXPECT_EQ(P("2*x - 3*y^2 + 1").to_string(), "-3*y^2 + 2*x + 1");
}

TEST(Degree, Examples) {
  EXPECT_EQ(P("x^2*y + 1").degree("x"), 2);
  EXPECT_EQ(MultiPoly().degree("x"), MultiPoly::kZeroDegree);
  EXPECT_EQ(P("y + 1").degree("x"), 0);
  EXPECT_EQ(P("x^2*y^3 + x").total_degree(), 5);
}

TEST(PseudoDivide, Examples) {
  auto a = pseudo_divide(P("x^2 + 1"), P("x - 1"), "x");
  EXPECT_EQ(a.quotient, P("x + 1"));
  EXPECT_EQ(a.remainder, P("2"));
  EXPECT_EQ(a.power, 0u);

  auto b = pseudo_divide(P("x"), P("a*x + b"), "x");
  EXPECT_EQ(b.quotient, P("1"));
  EXPECT_EQ(b.remainder, P("-b"));
  EXPECT_EQ(b.power, 1u);

  auto c = pseudo_divide(P("x + 5"), P("x^2 + y"), "x");
  EXPECT_TRUE(c.quotient.is_zero());
  EXPECT_EQ(c.remainder, P("x + 5"));
  EXPECT_EQ(c.power, 0u);

  EXPECT_THROW(pseudo_divide(P("x"), MultiPoly(), "x"), DomainError);
  EXPECT_THROW(pseudo_divide(P("x"), P("y + 1"), "x"), DomainError);
}

TEST(Resultant, Examples) {
  EXPECT_EQ(resultant(P("x^2 + 1"), P("x - y"), "x"), P("y^2 + 1"));
  EXPECT_EQ(resultant(P("x - a"), P("x - b"), "x"), P("b - a"));
  EXPECT_EQ(resultant(P("x^3 + x + 1"), P("5"), "x"), P("125"));
  EXPECT_EQ(resultant(P("x^2 - 1"), P("x - 1"), "x"), MultiPoly());
  EXPECT_THROW(resultant(P("y"), P("3"), "x"), DomainError);
}

TEST(Resultant, ShiftedRootIdentity) {
  // Res_x(f, x - y) = f(y) for any f in x.
  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) {
    MultiPoly f = random_poly(rng, kQ, {"x", "z"}, 4, 6);
    if (f.degree("x") <= 0) continue;
    EXPECT_EQ(resultant(f, P("x - y"), "x"), f.substitute("x", P("y"))) << f.to_string();
  }
}

TEST(Gcd, Examples) {
  EXPECT_EQ(gcd_univariate(P("x^2 - 1"), P("x - 1")), P("x - 1"));
  EXPECT_EQ(gcd_univariate(P("3*x^2 - 3"), MultiPoly()), P("x^2 - 1"));
  const CoefField f2 = CoefField::prime(2);
  EXPECT_EQ(gcd_univariate(P("x^2 + 1", f2), P("x^2 + x", f2)), P("x + 1", f2));
  EXPECT_EQ(gcd_univariate(P("x^2 + 1"), P("x")), P("1"));
  EXPECT_THROW(gcd_univariate(P("x"), P("y")), DomainError);
}

TEST(ReduceModP, Examples) {
  const CoefField f3 = CoefField::prime(3);
  EXPECT_EQ(reduce_mod_p(P("x^2 + 3*x + 5"), 3), P("x^2 + 2", f3));
  EXPECT_TRUE(reduce_mod_p(P("3*x + 6*y^2"), 3).is_zero());
  MultiPoly half(kQ);
  half.add_term({{"x", 1}}, Rational(1, 2));
  EXPECT_THROW(reduce_mod_p(half, 2), DomainError);
  EXPECT_EQ(reduce_mod_p(half, 3), P("2*x", f3));
  EXPECT_THROW(reduce_mod_p(P("x"), 4), DomainError);
}

TEST(Determinant, SmallMatrices) {
  auto c = [](int v) { return MultiPoly::constant(v); };
  EXPECT_EQ(determinant({{c(2), c(3)}, {c(4), c(5)}}, kQ), c(-2));
  EXPECT_EQ(determinant({{c(0), c(1), c(0)}, {c(1), c(0), c(0)}, {c(0), c(0), c(7)}}, kQ), c(-7));
  EXPECT_EQ(determinant({{P("a"), P("b")}, {P("c"), P("d")}}, kQ), P("a*d - b*c"));
}

TEST(ExactDivide, ExactAndInexact) {
  EXPECT_EQ(exact_divide(P("x^2*y - y^3"), P("x + y")), P("x*y - y^2"));
  EXPECT_THROW(exact_divide(P("x^2 + 1"), P("x + 1")), DomainError);
}

TEST(Evaluate, RationalAndModular) {
  MultiPoly f = P("x^2 - 3*x*y + 7");
  EXPECT_EQ(f.evaluate({{"x", 2}, {"y", 1}}), Rational(5));
  EXPECT_EQ(f.evaluate_mod(5, {{"x", 2}, {"y", 1}}), 0u);
  EXPECT_THROW(f.evaluate({{"x", 2}}), DomainError);
}

// --- properties ------------------------------------------------------------

TEST(Property, CanonicalFormIsOrderIndependent) {
  std::mt19937 rng(17);
  for (int i = 0; i < 200; ++i) {
    MultiPoly f = random_poly(rng, kQ, {"x", "y", "z"}, 3, 5);
    MultiPoly g = random_poly(rng, kQ, {"x", "y", "z"}, 3, 5);
    EXPECT_EQ((f + g).terms(), (g + f).terms());
    EXPECT_EQ((f * g).terms(), (g * f).terms());
    const MultiPoly fg = f * g;
    for (const auto& [m, c] : fg.terms()) EXPECT_NE(c, 0);
  }
}

TEST(Property, PseudoDivisionIdentity) {
  std::mt19937 rng(19);
  for (const CoefField field : {kQ, CoefField::prime(7)}) {
    for (int i = 0; i < 150; ++i) {
      MultiPoly f = random_poly(rng, field, {"x", "a", "b"}, 4, 4);
      MultiPoly g = random_poly(rng, field, {"x", "a"}, 3, 4);
      if (g.degree("x") <= 0) continue;
      auto [q, r, e] = pseudo_divide(f, g, "x");
      EXPECT_TRUE((g.leading_coefficient("x").pow(e) * f - q * g - r).is_zero());
      EXPECT_LT(r.degree("x"), g.degree("x"));
    }
  }
}

TEST(Property, ResultantVanishesIffCommonFactor) {
  std::mt19937 rng(23);
  int zero = 0;
  for (std::uint64_t p : {2u, 3u, 5u}) {
    const CoefField fp = CoefField::prime(p);
    for (int i = 0; i < 60; ++i) {
      MultiPoly f = random_poly(rng, fp, {"x"}, 3, 4);
      MultiPoly g = random_poly(rng, fp, {"x"}, 3, 4);
      if (i % 3 == 0) {
        MultiPoly h = random_poly(rng, fp, {"x"}, 2, 4);
        f *= h;
        g *= h;
      }
      if (f.is_zero() || g.is_zero() || (f.degree("x") <= 0 && g.degree("x") <= 0)) continue;
      bool res_zero = resultant(f, g, "x").is_zero();
      bool shared = gcd_univariate(f, g).degree("x") > 0;
      EXPECT_EQ(res_zero, shared) << f.to_string() << " ; " << g.to_string();
      zero += res_zero;
    }
  }
  EXPECT_GT(zero, 10);
}

TEST(Property, ReductionIsRingHomomorphism) {
  std::mt19937 rng(29);
  for (std::uint64_t p : {2u, 3u, 7u, 13u}) {
    for (int i = 0; i < 50; ++i) {
      MultiPoly f = random_poly(rng, kQ, {"x", "y"}, 3, 20);
      MultiPoly g = random_poly(rng, kQ, {"x", "y"}, 3, 20);
      EXPECT_EQ(reduce_mod_p(f + g, p), reduce_mod_p(f, p) + reduce_mod_p(g, p));
      EXPECT_EQ(reduce_mod_p(f * g, p), reduce_mod_p(f, p) * reduce_mod_p(g, p));
    }
  }
}
