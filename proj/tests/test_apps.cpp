#include <random>

#include <gtest/gtest.h>

#include "acf/apps.hpp"
#include "acf/parser.hpp"
#include "oracle.hpp"

using namespace acf;

namespace {

MultiPoly P(const char* text) { return parse_polynomial(text); }

ConstructibleForm form(const char* text) { return eliminate_all(parse_formula(text)); }

// Does f factor over F_{p^k} into two factors of positive total degree?
// Brute force over monic-normalized factors of degree 1 (f quadratic in two
// variables): f = c * (x + u*y + v) * g with g linear.
bool quadratic_splits_over(const MultiPoly& f, std::uint64_t p, std::size_t k) {
  const auto& F = oracle::field(p, k);
  // f = sum c_m x^i y^j with i + j <= 2; factors (a0 + a1 x + a2 y)(b0 + b1 x + b2 y).
  auto coef = [&](unsigned i, unsigned j) {
    Monomial m;
    if (i) m.emplace_back("x", i);
    if (j) m.emplace_back("y", j);
    auto it = f.terms().find(m);
    if (it == f.terms().end()) return GaloisField::Elem{0};
    const Integer r = it->second.get_num() % static_cast<unsigned long>(p);
    return F.from_int(r.get_si());
  };
  const auto q = static_cast<GaloisField::Elem>(F.size());
  const GaloisField::Elem target[6] = {coef(0, 0), coef(1, 0), coef(0, 1), coef(2, 0), coef(1, 1), coef(0, 2)};
  for (GaloisField::Elem a0 = 0; a0 < q; ++a0)
    for (GaloisField::Elem a1 = 0; a1 < q; ++a1)
      for (GaloisField::Elem a2 = 0; a2 < q; ++a2)
        for (GaloisField::Elem b0 = 0; b0 < q; ++b0)
          for (GaloisField::Elem b1 = 0; b1 < q; ++b1)
            for (GaloisField::Elem b2 = 0; b2 < q; ++b2) {
              if ((a1 == 0 && a2 == 0) || (b1 == 0 && b2 == 0)) continue;
              const GaloisField::Elem got[6] = {F.mul(a0, b0),
                                                F.add(F.mul(a0, b1), F.mul(a1, b0)),
                                                F.add(F.mul(a0, b2), F.mul(a2, b0)),
                                                F.mul(a1, b1),
                                                F.add(F.mul(a1, b2), F.mul(a2, b1)),
                                                F.mul(a2, b2)};
              if (std::equal(got, got + 6, target)) return true;
            }
  return false;
}

} // namespace

TEST(Nullstellensatz, Examples) {
  EXPECT_TRUE(nullstellensatz_decide(PolySystem({P("x^2 + 1"), P("y - x")}), 0));
  EXPECT_FALSE(nullstellensatz_decide(PolySystem({P("x"), P("x - 1")}), 0));
  EXPECT_FALSE(nullstellensatz_decide(PolySystem({P("1")}), 0));
  EXPECT_FALSE(nullstellensatz_decide(PolySystem({P("1")}), 5));
  // 2x - 1 has a zero unless 2 = 0.
  EXPECT_TRUE(nullstellensatz_decide(PolySystem({P("2*x - 1")}), 3));
  EXPECT_FALSE(nullstellensatz_decide(PolySystem({P("2*x - 1")}), 2));
  EXPECT_THROW(PolySystem({}), DomainError);
  EXPECT_THROW(PolySystem({P("x*y")}, {"x"}), DomainError);
  EXPECT_THROW(nullstellensatz_decide(PolySystem({P("x")}), 9), DomainError);
}

TEST(Nullstellensatz, SentenceShape) {
  Formula s = system_sentence(PolySystem({P("x^2 + 1"), P("y - x")}));
  EXPECT_TRUE(is_sentence(s));
  EXPECT_EQ(s.kind(), Formula::Kind::Exists);
  EXPECT_EQ(s.var(), "x");
}

TEST(StrongMinimality, Examples) {
  EXPECT_EQ(strong_minimality_analyze(form("x*x = 1"), 0), (MinimalityReport{MinimalityReport::Verdict::Finite, 2}));
  EXPECT_EQ(strong_minimality_analyze(form("x != 0"), 0),
            (MinimalityReport{MinimalityReport::Verdict::Cofinite, 1}));
  EXPECT_EQ(strong_minimality_analyze(form("x = 0 & x = 1"), 0),
            (MinimalityReport{MinimalityReport::Verdict::Finite, 0}));
  // The bound is a degree, not a root count: x^2 - 1 = (x - 1)^2 in characteristic 2.
  EXPECT_EQ(strong_minimality_analyze(form("x*x = 1"), 2), (MinimalityReport{MinimalityReport::Verdict::Finite, 2}));
  EXPECT_EQ(strong_minimality_analyze(form("x*x = 1 & x != 1"), 2), (MinimalityReport{MinimalityReport::Verdict::Finite, 0}));
  EXPECT_EQ(strong_minimality_analyze(form("x*x = 1 & x != 1"), 0).bound, 1u);
  EXPECT_EQ(strong_minimality_analyze(form("x*x = 1 | x*x*x != 0"), 0).verdict,
            MinimalityReport::Verdict::Cofinite);
  EXPECT_THROW(strong_minimality_analyze(form("x = y"), 0), DomainError);
}

TEST(Irreducibility, SentenceStructure) {
  Formula s = irreducibility_sentence(P("x^2 + y^2"));
  EXPECT_TRUE(is_sentence(s));
  // One split (1,1): six universally quantified coefficients.
  std::size_t quantifiers = 0;
  const Formula* cur = &s;
  while (cur->kind() == Formula::Kind::Forall) {
    ++quantifiers;
    cur = &cur->body();
  }
  EXPECT_EQ(quantifiers, 6u);
  EXPECT_THROW(irreducibility_sentence(P("3")), DomainError);
  EXPECT_THROW(irreducibility_sentence(P("x + y")), DomainError);
  EXPECT_THROW(irreducibility_sentence(P("x^4 + 1")), DomainError);
}

TEST(Irreducibility, OneVariableSquareIsReducible) {
  EXPECT_FALSE(decide(irreducibility_sentence(P("x^2")), 0));
  EXPECT_FALSE(decide(irreducibility_sentence(P("x^2 + 1")), 0));
  EXPECT_FALSE(decide(irreducibility_sentence(P("x^3 - 2")), 0));
}

TEST(NoetherOstrowski, CircleAndSumOfSquares) {
  const std::vector<std::uint64_t> primes{2, 3, 5, 7};
  auto circle = noether_ostrowski_check(P("x^2 + y^2 - 1"), primes);
  EXPECT_TRUE(circle.irreducible_char0);
  EXPECT_EQ(circle.exceptions, std::vector<std::uint64_t>{2});
  EXPECT_TRUE(circle.consistent);

  auto squares = noether_ostrowski_check(P("x^2 + y^2"), primes);
  EXPECT_FALSE(squares.irreducible_char0);
  EXPECT_TRUE(squares.exceptions.empty());
  EXPECT_TRUE(squares.consistent);

  auto parabola = noether_ostrowski_check(P("x^2 - y"), {3, 5});
  EXPECT_TRUE(parabola.irreducible_char0);
  EXPECT_TRUE(parabola.exceptions.empty());
}

TEST(NoetherOstrowski, AgreesWithFactorSearch) {
  for (const char* f : {"x^2 + y^2 - 1", "x^2 + y^2", "x^2 - y"}) {
    auto r = noether_ostrowski_check(P(f), {2, 3});
    for (auto [p, irreducible] : r.per_prime)
      EXPECT_EQ(irreducible, !quadratic_splits_over(P(f), p, 2)) << f << " p=" << p;
  }
}

TEST(Lefschetz, Examples) {
  auto a = lefschetz_report(parse_formula("exists x. x*x + 1 = 0"), 7);
  EXPECT_TRUE(a.spectrum.true_in_char0);
  ASSERT_EQ(a.checks.size(), 4u);
  for (const auto& c : a.checks) {
    EXPECT_TRUE(c.spectrum_verdict);
    ASSERT_TRUE(c.oracle_verdict);
    EXPECT_TRUE(*c.oracle_verdict);
  }

  auto b = lefschetz_report(parse_formula("1 + 1 = 0"), 7);
  EXPECT_EQ(b.spectrum.listed, std::vector<Integer>{2});
  EXPECT_EQ(b.spectrum.prime_mode, CharCondition::Mode::OnlyListed);

  auto c = lefschetz_report(parse_formula("(exists x. x*x*x = 2) & 3 != 0"), 7);
  EXPECT_TRUE(c.spectrum.true_in_char0);
  for (const auto& check : c.checks) {
    EXPECT_EQ(check.spectrum_verdict, check.prime != 3);
    EXPECT_TRUE(check.oracle_verdict);
  }
  EXPECT_THROW(lefschetz_report(parse_formula("x = 0")), DomainError);
}

TEST(Lefschetz, OracleRejectsNestedQuantifiers) {
  auto r = lefschetz_report(parse_formula("forall x. exists y. x*y = 1 | x = 0"), 3);
  for (const auto& c : r.checks) EXPECT_FALSE(c.oracle_verdict);
}

// --- properties ------------------------------------------------------------

TEST(Property, SolvableSystemsHaveFiniteFieldPoints) {
  // Systems with a visible F_p point must be reported solvable.
  std::mt19937 rng(53);
  std::uniform_int_distribution<int> c(-2, 2);
  for (int i = 0; i < 15; ++i) {
    MultiPoly f = P("x*y") + P("x").scaled(c(rng)) + P("y^2").scaled(c(rng)) + MultiPoly::constant(c(rng));
    MultiPoly g = P("x") - P("y").scaled(c(rng)) + MultiPoly::constant(c(rng));
    PolySystem sys({f, g});
    for (std::uint64_t p : {3u, 5u}) {
      bool found = false;
      oracle::for_each_point({"x", "y"}, p, [&](const oracle::Point& pt) {
        found = found || (f.evaluate_mod(p, pt) == 0 && g.evaluate_mod(p, pt) == 0);
      });
      if (found) EXPECT_TRUE(nullstellensatz_decide(sys, p));
    }
  }
}

TEST(Property, MinimalityBoundsHoldPointwise) {
  std::mt19937 rng(59);
  for (int i = 0; i < 30; ++i) {
    ConstructibleForm f = simplify(ConstructibleForm(
        {oracle::random_conjunction(rng, {}, 3), oracle::random_conjunction(rng, {}, 3)}));
    for (std::uint64_t p : {101u, 127u}) {
      auto report = strong_minimality_analyze(f, p);
      std::size_t count = 0;
      for (std::uint64_t x = 0; x < p; ++x) count += f.holds_mod(p, {{"x", x}});
      if (report.verdict == MinimalityReport::Verdict::Finite) {
        EXPECT_LE(count, report.bound) << f.to_string();
      } else {
        EXPECT_LE(p - count, report.bound) << f.to_string();
      }
    }
  }
}

TEST(Property, IrreducibilitySentenceIsAlwaysASentence) {
  for (const char* f : {"x^2", "x*y + 1", "x^3 + y", "x^2*y - 3", "y^2 - x^3 - x"})
    EXPECT_TRUE(is_sentence(irreducibility_sentence(P(f)))) << f;
}
