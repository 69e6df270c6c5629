#include <cmath>

#include <gtest/gtest.h>

#include "smoothring/generate.hpp"
#include "smoothring/jet.hpp"
#include "smoothring/normalize.hpp"
#include "smoothring/random.hpp"
#include "smoothring/sexpr.hpp"

using namespace smoothring;

namespace {

// Symbolic d/dx_i, independent of the jet arithmetic.
Term derivative(const Term& t, std::size_t i) {
  switch (t.kind()) {
    case Kind::Var: return cnst(t.var_index() == i ? 1 : 0);
    case Kind::Const: return cnst(0);
    case Kind::Add: return derivative(t.args()[0], i) + derivative(t.args()[1], i);
    case Kind::Mul:
      return derivative(t.args()[0], i) * t.args()[1] + t.args()[0] * derivative(t.args()[1], i);
    case Kind::Neg: return -derivative(t.args()[0], i);
    case Kind::Prim: {
      const Term& u = t.args()[0];
      Term outer = cnst(0);
      switch (t.primitive()) {
        case Prim::Exp: outer = apply(Prim::Exp, u); break;
        case Prim::Sin: outer = apply(Prim::Cos, u); break;
        case Prim::Cos: outer = -apply(Prim::Sin, u); break;
        case Prim::Atan: outer = apply(Prim::Recip1pSq, u); break;
        case Prim::Tanh: outer = cnst(1) - apply(Prim::Tanh, u) * apply(Prim::Tanh, u); break;
        case Prim::Recip1pSq:
          outer = cnst(-2) * u * apply(Prim::Recip1pSq, u) * apply(Prim::Recip1pSq, u);
          break;
      }
      return outer * derivative(u, i);
    }
    case Kind::Star: break;
  }
  throw std::logic_error("no derivative for star terms");
}

double central_difference(const Term& t, Point p, std::size_t i, double h = 1e-5) {
  Point lo = p, hi = p;
  lo[i] -= h;
  hi[i] += h;
  return (eval(t, hi) - eval(t, lo)) / (2 * h);
}

bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

// ---- eval -------------------------------------------------------------------

TEST(Eval, ProductOfProjections) {
  EXPECT_EQ(eval(var(0) * var(1), Point{2, 3}), 6.0);
}

TEST(Eval, ExpAtZero) { EXPECT_EQ(eval(apply(Prim::Exp, cnst(0)), Point{}), 1.0); }

TEST(Eval, LocalizationRelationVanishesAtFraction) {
  EXPECT_EQ(eval(var(0) * var(1) + (-cnst(1)), Point{0.5, 2}), 0.0);
}

TEST(Eval, ArityMismatch) {
  try {
    eval(var(2), Point{1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ArityMismatch);
  }
}

TEST(Eval, OverflowIsNonFinite) {
  Term big = apply(Prim::Exp, apply(Prim::Exp, apply(Prim::Exp, var(0))));
  try {
    eval(big, Point{3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFiniteResult);
  }
}

TEST(Eval, PrimitivesMatchLibm) {
  const double x = 0.7;
  EXPECT_DOUBLE_EQ(eval(apply(Prim::Sin, var(0)), Point{x}), std::sin(x));
  EXPECT_DOUBLE_EQ(eval(apply(Prim::Cos, var(0)), Point{x}), std::cos(x));
  EXPECT_DOUBLE_EQ(eval(apply(Prim::Atan, var(0)), Point{x}), std::atan(x));
  EXPECT_DOUBLE_EQ(eval(apply(Prim::Tanh, var(0)), Point{x}), std::tanh(x));
  EXPECT_DOUBLE_EQ(eval(apply(Prim::Recip1pSq, var(0)), Point{x}), 1 / (1 + x * x));
}

// ---- jets -------------------------------------------------------------------

TEST(Jet, ExpSecondOrder) {
  Jet j = jet_eval(apply(Prim::Exp, var(0)), Point{0}, 2);
  ASSERT_EQ(j.coefficients().size(), 3u);
  // oracle: c1 = f'(0), c2 = f''(0)/2 from nested central differences
  const Term f = apply(Prim::Exp, var(0));
  const double h = 1e-4;
  double d1 = central_difference(f, {0}, 0);
  double d2 = (eval(f, Point{h}) - 2 * eval(f, Point{0}) + eval(f, Point{-h})) / (h * h);
  EXPECT_NEAR(j[0], 1.0, 1e-15);
  EXPECT_NEAR(j[1], d1, 1e-8);
  EXPECT_NEAR(j[2], d2 / 2, 1e-6);
  EXPECT_NEAR(j[2], 0.5, 1e-15);
}

TEST(Jet, IdentityFirstOrder) {
  Jet j = jet_eval(var(0), Point{1.25}, 1);
  EXPECT_EQ(j[0], 1.25);
  EXPECT_EQ(j[1], 1.0);
}

TEST(Jet, SquareAtThree) {
  const Term sq = var(0) * var(0);
  Jet j = jet_eval(sq, Point{3}, 2);
  const Term d1 = derivative(sq, 0), d2 = derivative(d1, 0);
  EXPECT_EQ(j[0], 9.0);
  EXPECT_EQ(j[1], eval(d1, Point{3}));
  EXPECT_EQ(j[2], eval(d2, Point{3}) / 2);
  EXPECT_EQ(j[1], 6.0);
  EXPECT_EQ(j[2], 1.0);
}

TEST(Jet, OrderZeroSliceIsEval) {
  Rng rng(11);
  TermGenerator gen{2, 3, true, false};
  for (int k = 0; k < 100; ++k) {
    Term t = gen(rng);
    Point p = rng.point(2, 1.0);
    for (unsigned order : {0u, 1u, 3u}) EXPECT_DOUBLE_EQ(jet_eval(t, p, order).value(), eval(t, p));
  }
}

TEST(Jet, MixedPartialMatchesSymbolic) {
  const Term f = apply(Prim::Sin, var(0) * var(1)) + apply(Prim::Exp, var(1));
  Point p{0.3, -0.8};
  Jet j = jet_eval(f, p, 2);
  double dxy = eval(derivative(derivative(f, 0), 1), p);
  EXPECT_NEAR(j.coefficient({1, 1}), dxy, 1e-12);
  double dyy = eval(derivative(derivative(f, 1), 1), p);
  EXPECT_NEAR(j.coefficient({0, 2}), dyy / 2, 1e-12);
}

// 200 seeded base points per primitive in [-3, 3].
TEST(Jet, PrimitiveFirstOrderMatchesFiniteDifferences) {
  Rng rng(derive_seed(0, "jet-fd"));
  for (Prim p : kAllPrims) {
    const Term f = apply(p, var(0));
    for (int s = 0; s < 200; ++s) {
      double a = rng.uniform(-3, 3);
      Jet j = jet_eval(f, Point{a}, 1);
      EXPECT_TRUE(rel_close(j[1], central_difference(f, {a}, 0), 1e-5)) << prim_name(p) << " at " << a;
    }
  }
}

TEST(Jet, HigherOrderPrimitiveCoefficientsMatchSymbolic) {
  for (Prim p : kAllPrims) {
    const Term f = apply(p, var(0));
    Term d = f;
    Jet j = jet_eval(f, Point{0.4}, 4);
    double fact = 1;
    for (unsigned k = 1; k <= 4; ++k) {
      d = derivative(d, 0);
      fact *= k;
      EXPECT_NEAR(j[k], eval(d, Point{0.4}) / fact, 1e-10) << prim_name(p) << " order " << k;
    }
  }
}

// ---- substitute -------------------------------------------------------------

TEST(Substitute, ProjectionAxiom) {
  EXPECT_EQ(substitute(var(0), std::vector<Term>{var(1)}), var(1));
  std::vector<Term> g{apply(Prim::Sin, var(0)), cnst(3), var(0) * var(1)};
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(substitute(var(i), g), g[i]);
}

TEST(Substitute, SyntacticComposition) {
  Term sin_x = apply(Prim::Sin, var(0));
  EXPECT_EQ(substitute(sin_x, std::vector<Term>{var(0) + var(1)}), apply(Prim::Sin, var(0) + var(1)));
}

TEST(Substitute, Simultaneous) {
  // swap, not sequential replacement
  Term t = var(0) - var(1);
  EXPECT_EQ(substitute(t, std::vector<Term>{var(1), var(0)}), var(1) - var(0));
}

TEST(Substitute, ArityMismatch) {
  try {
    substitute(var(0) + var(2), std::vector<Term>{var(0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ArityMismatch);
  }
}

TEST(Substitute, CompositionSoundness) {
  Rng rng(derive_seed(0, "composition"));
  TermGenerator outer{3, 3, true, false};
  TermGenerator inner{2, 3, true, false};
  int checked = 0;
  while (checked < 100) {
    Term f = outer(rng);
    std::vector<Term> g{inner(rng), inner(rng), inner(rng)};
    Point p = rng.point(2, 3.0);
    Point gp;
    for (const Term& gi : g) gp.push_back(eval_or_nan(gi, p));
    double lhs = eval_or_nan(substitute(f, g), p);
    if (!is_finite(gp) || !std::isfinite(lhs)) continue;
    double rhs = eval_or_nan(f, gp);
    if (!std::isfinite(rhs)) continue;
    EXPECT_TRUE(rel_close(lhs, rhs, 1e-12)) << to_sexpr(f);
    ++checked;
  }
}

// ---- normalize --------------------------------------------------------------

TEST(Normalize, AdditiveIdentity) { EXPECT_EQ(normalize(cnst(0) + var(0)), var(0)); }

TEST(Normalize, ConstantFolding) { EXPECT_EQ(normalize(cnst(2) * cnst(3)), cnst(6)); }

TEST(Normalize, DoubleNegation) { EXPECT_EQ(normalize(-(-apply(Prim::Sin, var(0)))), apply(Prim::Sin, var(0))); }

TEST(Normalize, Absorption) { EXPECT_EQ(normalize(cnst(0) * apply(Prim::Exp, var(3))), cnst(0)); }

TEST(Normalize, OperandOrderIsCanonical) {
  Term a = apply(Prim::Sin, var(1)), b = var(0) * var(2);
  EXPECT_EQ(normalize(a + b), normalize(b + a));
  EXPECT_EQ(normalize(a * b), normalize(b * a));
  EXPECT_EQ(normalize((a + b) + var(4)), normalize(a + (b + var(4))));
}

TEST(Normalize, IdempotentAndEvaluationPreserving) {
  Rng rng(derive_seed(0, "normalize"));
  TermGenerator gen{3, 4, true, false};
  for (int k = 0; k < 500; ++k) {
    Term t = gen(rng);
    Term n = normalize(t);
    EXPECT_EQ(normalize(n), n) << to_sexpr(t);
    for (int s = 0; s < 3; ++s) {
      Point p = rng.point(3, 3.0);
      double a = eval_or_nan(t, p), b = eval_or_nan(n, p);
      if (!std::isfinite(a) || !std::isfinite(b)) continue;
      EXPECT_TRUE(rel_close(a, b, 1e-9)) << to_sexpr(t) << " vs " << to_sexpr(n);
    }
  }
}

// ---- s-expressions ----------------------------------------------------------

TEST(Sexpr, RoundTrip) {
  Rng rng(derive_seed(0, "sexpr"));
  TermGenerator gen{4, 4, true, true};
  for (int k = 0; k < 300; ++k) {
    Term t = gen(rng);
    EXPECT_EQ(parse_term(to_sexpr(t)), t);
  }
}

TEST(Sexpr, DecimalConstantsAreExact) {
  Term t = parse_term("(const -0.125)");
  EXPECT_EQ(t, cnst(Rational(-1, 8)));
  EXPECT_EQ(parse_term("(const 3)"), cnst(3));
  // non-terminating fractions print as p/q and read back exactly
  Term third = cnst(Rational(1, 3));
  EXPECT_EQ(to_sexpr(third), "(const 1/3)");
  EXPECT_EQ(parse_term(to_sexpr(third)), third);
}

TEST(Sexpr, RejectsBareAtomsAndUnknownHeads) {
  for (const char* bad : {"x0", "-1", "(pow (var 0) 2)", "(add (var 0))", "(var -1)", "(const 1.2.3)", "(const 1/0)",
                          "(add (var 0) (var 1)", ")"}) {
    try {
      parse_term(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_TRUE(e.kind() == ErrorKind::SyntaxError || e.kind() == ErrorKind::ArityError) << bad;
    }
  }
}

TEST(Sexpr, SyntaxErrorsCarryPosition) {
  try {
    parse_term("(add (var 0)\n  (foo 1))");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Sexpr, StarRejectedWhereSmoothTermsAreRequired) {
  EXPECT_THROW(parse_term("(star (var 0))", false), Error);
  EXPECT_EQ(parse_term("(star (var 0))"), star(var(0)));
}
