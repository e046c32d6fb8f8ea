#include <random>

#include <gtest/gtest.h>

#include "acf/parser.hpp"
#include "acf/semantics.hpp"
#include "acf/syntax.hpp"

using namespace acf;

namespace {

const Signature kRing = Signature::ring();

Term var(const std::string& n) { return Term::variable(n); }
Term cst(const std::string& n) { return Term::constant(n); }
Term add(Term a, Term b) { return Term::apply("+", {std::move(a), std::move(b)}); }
Term mul(Term a, Term b) { return Term::apply("*", {std::move(a), std::move(b)}); }

} // namespace

TEST(Signature, RejectsDuplicatesAndZeroArity) {
  EXPECT_THROW(Signature({{"f", 1}}, {{"f", 2}}, {}), DomainError);
  EXPECT_THROW(Signature({{"f", 0}}, {}, {}), DomainError);
  EXPECT_THROW(Signature({}, {{"R", 0}}, {}), DomainError);
  EXPECT_THROW(Signature({}, {}, {"c", "c"}), DomainError);
  EXPECT_NO_THROW(Signature({{"f", 1}, {"+", 2}}, {{"R", 2}}, {"c", "0"}));
}

TEST(ParseTerm, BasicTerms) {
  EXPECT_EQ(parse_term("0+0", kRing), add(cst("0"), cst("0")));
  EXPECT_EQ(parse_term("x", kRing), var("x"));
  EXPECT_THROW(parse_term("++", kRing), ParseError);
}

TEST(ParseTerm, NumeralsAndSugar) {
  EXPECT_EQ(parse_term("3"), add(add(cst("1"), cst("1")), cst("1")));
  EXPECT_EQ(parse_term("-1"), Term::apply("-", {cst("0"), cst("1")}));
  EXPECT_EQ(parse_term("x^3"), mul(mul(var("x"), var("x")), var("x")));
  EXPECT_EQ(parse_term("x^0"), cst("1"));
  // Unary minus binds looser than ^.
  EXPECT_EQ(parse_term("-x^2"), Term::apply("-", {cst("0"), mul(var("x"), var("x"))}));
}

TEST(ParseTerm, ErrorsCarryPositions) {
  try {
    parse_term("x + * y");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  EXPECT_THROW(parse_term("f(x)"), ParseError);            // unknown function
  Signature sig({{"f", 2}}, {}, {"c"});
  EXPECT_THROW(parse_term("f(c)", sig), ParseError);       // arity mismatch
  EXPECT_THROW(parse_term("x + c", sig), ParseError);      // + absent
  EXPECT_EQ(parse_term("f(c, x)", sig), Term::apply("f", {cst("c"), var("x")}));
}

TEST(ParseFormula, Examples) {
  Formula f = parse_formula("exists x. x*x + 1 = 0");
  EXPECT_EQ(f, Formula::exists("x", Formula::eq(add(mul(var("x"), var("x")), cst("1")), cst("0"))));

  Formula g = parse_formula("x + 1 = 0");
  EXPECT_EQ(g, Formula::eq(add(var("x"), cst("1")), cst("0")));
  EXPECT_EQ(free_vars(g), VarSet{"x"});

  EXPECT_THROW(parse_formula("exists x x="), ParseError);
}

TEST(ParseFormula, Precedence) {
  // ! > & > | > ->
  Formula f = parse_formula("!a = 0 & b = 0 | c = 0 -> d = 0");
  ASSERT_EQ(f.kind(), Formula::Kind::Implies);
  ASSERT_EQ(f.left().kind(), Formula::Kind::Or);
  ASSERT_EQ(f.left().left().kind(), Formula::Kind::And);
  ASSERT_EQ(f.left().left().left().kind(), Formula::Kind::Not);

  // Quantifier scope runs to the end of the group.
  Formula g = parse_formula("(exists x. x = y & x = 0) | y = 1");
  ASSERT_EQ(g.kind(), Formula::Kind::Or);
  ASSERT_EQ(g.left().kind(), Formula::Kind::Exists);
  EXPECT_EQ(g.left().body().kind(), Formula::Kind::And);

  // Parenthesized term on the left of an atom.
  Formula h = parse_formula("(x + 1) * y = 0");
  EXPECT_EQ(h.kind(), Formula::Kind::Eq);
}

TEST(ParseFormula, RelationsAndUnknownSymbols) {
  Signature sig({{"s", 1}}, {{"R", 2}}, {"c"});
  Formula f = parse_formula("forall x. R(x, s(c)) -> x != c", sig);
  EXPECT_TRUE(is_sentence(f));
  EXPECT_THROW(parse_formula("Q(x)", sig), ParseError);
  EXPECT_THROW(parse_formula("R(x) ", sig), ParseError);
  EXPECT_THROW(parse_formula("x + 1 = 0", sig), ParseError);
}

TEST(Print, CanonicalForms) {
  EXPECT_EQ(to_string(parse_formula("exists x. x + 1 = 0")), "exists x. (x + 1 = 0)");
  EXPECT_EQ(to_string(var("x")), "x");
  EXPECT_EQ(to_string(parse_term("x - (y - 2)")), "x - (y - 2)");
  EXPECT_EQ(to_string(parse_term("(x + y) * -z")), "(x + y) * -z");
  EXPECT_EQ(to_string(parse_formula("!(a = 0 & b = 0)")), "!(a = 0 & b = 0)");
}

TEST(FreeVars, Examples) {
  EXPECT_EQ(free_vars(parse_formula("x + 1 = 0")), VarSet{"x"});
  EXPECT_TRUE(free_vars(parse_formula("exists x. x + 1 = 0")).empty());
  EXPECT_EQ(free_vars(parse_formula("forall x. exists y. x + y = z")), VarSet{"z"});
  // A variable both bound and free.
  EXPECT_EQ(free_vars(parse_formula("x = 0 & exists x. x = 1")), VarSet{"x"});
}

TEST(IsSentence, Examples) {
  EXPECT_TRUE(is_sentence(parse_formula("exists x. x*x + 1 = 0")));
  EXPECT_FALSE(is_sentence(parse_formula("x = 0")));
  EXPECT_TRUE(is_sentence(parse_formula("forall x. x = x")));
}

TEST(Substitute, Examples) {
  Formula f = parse_formula("x + 1 = 0");
  EXPECT_EQ(substitute(f, {{"x", cst("0")}}), parse_formula("0 + 1 = 0"));

  Formula g = parse_formula("exists x. x + y = 0");
  Formula renamed = substitute(g, {{"y", var("x")}});
  EXPECT_EQ(renamed, parse_formula("exists x1. x1 + x = 0"));

  Formula h = parse_formula("exists x. x = 1");
  EXPECT_EQ(substitute(h, {{"x", cst("0")}}), h);
}

TEST(Substitute, CaptureAvoidanceIsSemantic) {
  // Evaluate both sides in Z/3: (exists x. x + y = 0)[y := x] at x = a must
  // equal (exists x. x + y = 0) at y = a.
  FiniteStructure z3 = FiniteStructure::integers_mod(3);
  Formula g = parse_formula("exists x. x + y = 0 & x != y");
  Formula renamed = substitute(g, {{"y", var("x")}});
  for (std::size_t a = 0; a < 3; ++a)
    EXPECT_EQ(eval(z3, renamed, {{"x", a}}), eval(z3, g, {{"y", a}})) << a;
}

TEST(InductionAxiom, Examples) {
  Formula inst = induction_axiom(parse_formula("x = x"), "x");
  EXPECT_EQ(to_string(inst),
            "(0 = 0 & (forall x. (x = x -> x + 1 = x + 1))) -> (forall x. (x = x))");
  EXPECT_TRUE(is_sentence(inst));

  Formula with_param = induction_axiom(parse_formula("x + w = w + x"), "x");
  EXPECT_TRUE(is_sentence(with_param));
  EXPECT_EQ(with_param.kind(), Formula::Kind::Forall);
  EXPECT_EQ(with_param.var(), "w");

  EXPECT_THROW(induction_axiom(parse_formula("w = w"), "x"), DomainError);
}

// --- properties ------------------------------------------------------------

namespace {

struct TreeGen {
  std::mt19937 rng;
  const Signature& sig;

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  Term term(int depth) {
    static const char* vars[] = {"x", "y", "z"};
    if (depth == 0 || pick(3) == 0) {
      if (pick(2)) return var(vars[pick(3)]);
      return cst(sig.constants()[pick(sig.constants().size())]);
    }
    const auto& [name, arity] = sig.functions()[pick(sig.functions().size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < arity; ++i) args.push_back(term(depth - 1));
    return Term::apply(name, std::move(args));
  }

  Formula formula(int depth) {
    static const char* vars[] = {"x", "y", "z"};
    if (depth == 0) {
      if (!sig.relations().empty() && pick(2)) {
        const auto& [name, arity] = sig.relations()[pick(sig.relations().size())];
        std::vector<Term> args;
        for (std::size_t i = 0; i < arity; ++i) args.push_back(term(2));
        return Formula::rel(name, std::move(args));
      }
      return Formula::eq(term(2), term(2));
    }
    switch (pick(6)) {
    case 0: return Formula::negation(formula(depth - 1));
    case 1: return Formula::conjunction(formula(depth - 1), formula(depth - 1));
    case 2: return Formula::disjunction(formula(depth - 1), formula(depth - 1));
    case 3: return Formula::implication(formula(depth - 1), formula(depth - 1));
    case 4: return Formula::exists(vars[pick(3)], formula(depth - 1));
    default: return Formula::forall(vars[pick(3)], formula(depth - 1));
    }
  }
};

} // namespace

TEST(Property, PrintParseRoundTrip) {
  Signature sig({{"+", 2}, {"-", 2}, {"*", 2}, {"f", 1}, {"g", 3}}, {{"R", 2}, {"P", 1}},
                {"0", "1", "c"});
  TreeGen gen{std::mt19937(7), sig};
  for (int i = 0; i < 500; ++i) {
    Formula f = gen.formula(1 + i % 4);
    std::string text = to_string(f);
    EXPECT_EQ(parse_formula(text, sig), f) << text;
    Term t = gen.term(1 + i % 5);
    EXPECT_EQ(parse_term(to_string(t), sig), t) << to_string(t);
  }
}

TEST(Property, SubstitutingNonFreeVariableIsIdentity) {
  TreeGen gen{std::mt19937(11), kRing};
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.formula(3);
    if (free_vars(f).count("w")) continue;
    EXPECT_EQ(substitute(f, {{"w", gen.term(2)}}), f);
  }
}

TEST(Property, InductionAxiomIsSentence) {
  TreeGen gen{std::mt19937(13), kRing};
  int built = 0;
  for (int i = 0; i < 200; ++i) {
    Formula f = gen.formula(2);
    if (!free_vars(f).count("x")) continue;
    EXPECT_TRUE(is_sentence(induction_axiom(f, "x")));
    ++built;
  }
  EXPECT_GT(built, 20);
}

TEST(Property, ParserRejectsForeignSymbols) {
  Signature sig({{"f", 1}}, {{"R", 1}}, {"c"});
  for (const char* text : {"R(g(c))", "R(c + c)", "S(c)", "f(c) = d(c)", "R(c) & c * c = c"})
    EXPECT_THROW(parse_formula(text, sig), ParseError) << text;
}
