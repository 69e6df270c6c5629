#include <chrono>
#include <cmath>

#include <gtest/gtest.h>

#include "smoothring/vn.hpp"

using namespace smoothring;

namespace {

const Term x = var(0);
const Term f = apply(Prim::Recip1pSq, var(0));

Config config(std::uint64_t seed = 3) {
  Config c;
  c.seed = seed;
  return c;
}

using Value = ModelRing::Value;

std::vector<ModelRing> all_models() {
  return {ModelRing::reals(), ModelRing::product(3), ModelRing::jet(1, 2), ModelRing::jet(2, 1)};
}

// Values of a sorted univariate solution list.
std::vector<double> reals_of(const PhiObject& p) {
  std::vector<double> out;
  for (const auto& s : p.solutions()) out.push_back(s.at(0).at(0));
  return out;
}

}  // namespace

// ---- interpretation ---------------------------------------------------------

TEST(Interpret, RealsExp) {
  auto r = ModelRing::reals();
  std::vector<Value> args{{0.5}};
  EXPECT_DOUBLE_EQ(r.interpret(apply(Prim::Exp, x), args)[0], std::exp(0.5));
}

TEST(Interpret, ProductIsComponentwise) {
  auto r = ModelRing::product(2);
  std::vector<Value> args{{2, -1}, {3, 4}};
  EXPECT_EQ(r.interpret(var(0) * var(1), args), (Value{6, -4}));
}

TEST(Interpret, FirstOrderJetCarriesDerivative) {
  auto r = ModelRing::jet(1, 1);
  const double a = 0.8, b = 1.7, h = 1e-5;
  for (Prim p : kAllPrims) {
    const Term t = apply(p, x);
    Value out = r.interpret(t, std::vector<Value>{{a, b}});
    double fd = (eval(t, Point{a + h}) - eval(t, Point{a - h})) / (2 * h);
    EXPECT_DOUBLE_EQ(out[0], eval(t, Point{a}));
    EXPECT_NEAR(out[1], fd * b, 1e-5 * std::max(1.0, std::abs(fd * b))) << prim_name(p);
  }
}

TEST(Interpret, OrderZeroJetsAreReals) {
  auto jet0 = ModelRing::jet(1, 0), reals = ModelRing::reals();
  Rng rng(5);
  TermGenerator gen{2, 3, true, false};
  for (int k = 0; k < 100; ++k) {
    Term t = gen(rng);
    std::vector<Value> args{{rng.uniform(-1, 1)}, {rng.uniform(-1, 1)}};
    EXPECT_EQ(jet0.interpret(t, args), reals.interpret(t, args));
  }
}

TEST(Interpret, WrongCarrierSize) {
  auto r = ModelRing::product(2);
  EXPECT_THROW(r.interpret(x, std::vector<Value>{{1, 2, 3}}), Error);
}

TEST(Axioms, AllModelKinds) {
  for (const ModelRing& r : all_models()) {
    auto rep = check_axioms(r, config(), 200, 1e-9);
    EXPECT_EQ(rep.samples, 200u) << r.describe();
    EXPECT_TRUE(rep.projection_exact) << r.describe();
    EXPECT_LE(rep.composition_max_rel, 1e-9) << r.describe();
    EXPECT_TRUE(rep.verdict.holds()) << r.describe();
  }
}

// ---- φ_R --------------------------------------------------------------------

TEST(Phi, TerminalIsAPoint) {
  for (const ModelRing& r : all_models()) {
    auto p = phi_object(r, Presentation::free(0), config());
    EXPECT_EQ(p.solutions().size(), 1u) << r.describe();
  }
}

TEST(Phi, TwoRealRoots) {
  auto p = phi_object(ModelRing::reals(), Presentation(1, {x * x - cnst(1)}), config());
  auto roots = reals_of(p);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_NEAR(roots[0], -1.0, 1e-9);
  EXPECT_NEAR(roots[1], 1.0, 1e-9);
  for (const auto& s : p.solutions()) EXPECT_TRUE(p.contains(s));
}

TEST(Phi, NoRealRoots) {
  auto p = phi_object(ModelRing::reals(), Presentation(1, {x * x + cnst(1)}), config());
  EXPECT_TRUE(p.solutions().empty());
}

TEST(Phi, FreeLineIsPredicateOnly) {
  auto r = ModelRing::reals();
  auto p = phi_object(r, Presentation::free(1), config());
  EXPECT_FALSE(p.enumeration.has_value());
  EXPECT_THROW(p.solutions(), Error);
  // ev shadow: every carrier value is a solution
  Rng rng(2);
  for (int k = 0; k < 20; ++k) EXPECT_TRUE(p.contains({r.random(rng, 3.0)}));
}

TEST(Phi, ProductModelSolutionsAreTuples) {
  auto p = phi_object(ModelRing::product(2), Presentation(1, {x * x - cnst(1)}), config());
  EXPECT_EQ(p.solutions().size(), 4u);
}

TEST(Phi, JetModelSolutionsAreConstantJets) {
  auto r = ModelRing::jet(1, 2);
  auto p = phi_object(r, Presentation(1, {x * x - cnst(4)}), config());
  ASSERT_EQ(p.solutions().size(), 2u);
  for (const auto& s : p.solutions()) {
    EXPECT_NEAR(std::abs(s[0][0]), 2.0, 1e-9);
    EXPECT_EQ(s[0][1], 0.0);
    EXPECT_EQ(s[0][2], 0.0);
  }
  // 2 + ε is not a solution: (2 + ε)² − 4 = 4ε
  EXPECT_FALSE(p.contains({Value{2, 1, 0}}));
}

TEST(PhiMap, IdentityIsIdentity) {
  auto r = ModelRing::reals();
  Presentation a(1, {x * (x * x - cnst(1))}, "A");
  auto pa = phi_object(r, a, config());
  auto m = phi_index_map(r, identity(a), pa, pa, config());
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(m[i], i);
}

TEST(PhiMap, LocalizationProjectsInjectively) {
  auto r = ModelRing::reals();
  Presentation a(1, {x * (x * x - cnst(1))}, "A");
  auto l = localize(a, x + cnst(2));
  auto pa = phi_object(r, a, config()), pl = phi_object(r, l.object, config());
  ASSERT_EQ(pl.solutions().size(), 3u);
  auto m = phi_index_map(r, l.quotient, pl, pa, config());
  std::set<std::size_t> image(m.begin(), m.end());
  EXPECT_EQ(image.size(), m.size());
  // localizing at x drops the root 0
  auto lx = localize(a, x);
  auto plx = phi_object(r, lx.object, config());
  EXPECT_EQ(plx.solutions().size(), 2u);
}

TEST(PhiMap, Contravariance) {
  auto r = ModelRing::reals();
  Presentation a(1, {x * x - cnst(1)}, "A"), b(1, {x * x * x * x - cnst(1)}, "B");
  Presentation c(1, {(x - cnst(1)) * (x + cnst(1)) * (x - cnst(3))}, "C");
  Config cfg = config();
  Morphism phi = with_certificates(Morphism(b, a, {x}), cfg);   // B → A
  Morphism psi = with_certificates(Morphism(a, a, {-x}), cfg);  // A → A
  ASSERT_TRUE(verify_morphism(phi, cfg).is_proven());
  (void)c;
  auto pa = phi_object(r, a, cfg), pb = phi_object(r, b, cfg);
  auto composite = phi_index_map(r, compose(psi, phi), pa, pb, cfg);
  auto first = phi_index_map(r, psi, pa, pa, cfg);
  auto second = phi_index_map(r, phi, pa, pb, cfg);
  for (std::size_t i = 0; i < composite.size(); ++i) EXPECT_EQ(composite[i], second[first[i]]);
}

TEST(PhiMap, RelationViolation) {
  auto r = ModelRing::reals();
  Presentation a(1, {x}, "Z");
  Morphism bogus(a, Presentation::free(1), {x});
  try {
    phi_apply(r, bogus, {Value{2.0}}, config());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RelationViolation);
  }
}

// ---- locality ---------------------------------------------------------------

TEST(Local, RealsAndJets) {
  EXPECT_TRUE(is_local(ModelRing::reals(), config()).is_proven());
  EXPECT_TRUE(is_local(ModelRing::jet(1, 2), config()).is_proven());
  EXPECT_TRUE(is_local(ModelRing::jet(2, 3), config()).is_proven());
  EXPECT_TRUE(is_local(ModelRing::product(1), config()).is_proven());
}

TEST(Local, ProductsAreNotLocal) {
  for (std::size_t k : {2u, 3u, 5u}) {
    Verdict v = is_local(ModelRing::product(k), config());
    ASSERT_TRUE(v.is_refuted());
    Value w(k, 0.0);
    w[0] = 1.0;
    EXPECT_EQ(*v.witness, w);
  }
}

TEST(Local, JetInverse) {
  auto r = ModelRing::jet(1, 3);
  Value a{2, 1, -1, 0.5};
  ASSERT_TRUE(r.is_unit(a));
  EXPECT_TRUE(values_close(r.mul(a, r.inverse(a)), r.constant(1), 1e-14));
  EXPECT_FALSE(r.is_unit(Value{0, 1, 0, 0}));
}

TEST(Epi, CanonicalCoverOverReals) {
  Presentation a = Presentation::free(1);
  Cover c = make_cover(a, {f, cnst(1) - f}, std::vector<Term>{cnst(1), cnst(1)}, config());
  EXPECT_TRUE(epi_family_check(ModelRing::reals(), c, config()).is_proven());
  EXPECT_TRUE(epi_family_check(ModelRing::reals(), a, c.elements, config()).holds());
}

TEST(Epi, ThreeElementCover) {
  Presentation a = Presentation::free(1);
  // a₁ + a₂ + a₃ = 1 with f² and 2f(1−f) and (1−f)²
  std::vector<Term> elems{f * f, cnst(2) * f * (cnst(1) - f), (cnst(1) - f) * (cnst(1) - f)};
  Cover c = make_cover(a, elems, std::vector<Term>{cnst(1), cnst(1), cnst(1)}, config());
  ASSERT_TRUE(c.verdict.is_proven());
  EXPECT_TRUE(epi_family_check(ModelRing::reals(), c, config()).holds());
}

TEST(Epi, NonCoverRefutedAtOrigin) {
  Verdict v = epi_family_check(ModelRing::reals(), Presentation::free(1), {x}, config());
  ASSERT_TRUE(v.is_refuted());
  EXPECT_NEAR((*v.witness)[0], 0.0, 1e-6);
}

TEST(Epi, ProductModelSeesNonLocality) {
  Verdict v = epi_family_check(ModelRing::product(2), Presentation::free(1), {x * x, cnst(1) - x * x}, config());
  EXPECT_TRUE(v.is_refuted());
}

// ---- left exactness ---------------------------------------------------------

TEST(Lex, SuitePassesInEveryModel) {
  for (const ModelRing& r : {ModelRing::reals(), ModelRing::product(2), ModelRing::jet(1, 2)}) {
    auto rep = left_exactness_suite(r, config());
    EXPECT_EQ(rep.terminal_points, 1u) << r.describe();
    EXPECT_TRUE(rep.failures.empty()) << r.describe() << ": " << (rep.failures.empty() ? "" : rep.failures[0]);
    EXPECT_GE(rep.products.size(), 1u);
    EXPECT_GE(rep.coequalizers.size(), 10u);
    for (const auto& p : rep.products) {
      EXPECT_EQ(p.product, p.left * p.right) << p.name;
      EXPECT_TRUE(p.bijective) << p.name;
    }
    for (const auto& c : rep.coequalizers) {
      EXPECT_TRUE(c.equal) << c.name;
      EXPECT_EQ(c.equalizer, c.coequalizer) << c.name;
      EXPECT_EQ(c.coequalizer, c.difference_form) << c.name;
    }
    EXPECT_TRUE(rep.verdict.holds());
  }
}

TEST(Lex, TwoByTwo) {
  auto r = ModelRing::reals();
  Presentation a(1, {x * x - cnst(1)}, "A"), b(1, {x * x - cnst(4)}, "B");
  auto pa = phi_object(r, a, config()), pb = phi_object(r, b, config());
  auto pab = phi_object(r, coproduct(a, b).object, config());
  EXPECT_EQ(pab.solutions().size(), pa.solutions().size() * pb.solutions().size());
  EXPECT_EQ(pab.solutions().size(), 4u);
}

// ---- vN calculus ------------------------------------------------------------

TEST(StarNormalize, SigmaRules) {
  EXPECT_EQ(star_normalize(x * (star(x) * x)), x);
  EXPECT_EQ(star_normalize(star(x) * (x * star(x))), star(x));
  EXPECT_EQ(star_normalize(star(cnst(0))), cnst(0));
  EXPECT_EQ(star_normalize(star(cnst(2))), cnst(Rational(1, 2)));
  EXPECT_EQ(to_sexpr(star_normalize(star(cnst(2)))), "(const 0.5)");
}

TEST(StarNormalize, DoubleStarIsNotARewrite) {
  EXPECT_NE(star_normalize(star(star(x))), x);
}

TEST(StarNormalize, IdempotentAndTerminating) {
  Rng rng(derive_seed(0, "star-idem"));
  TermGenerator gen{2, 4, true, true};
  for (int k = 0; k < 1000; ++k) {
    Term t = gen(rng);
    auto start = std::chrono::steady_clock::now();
    Term n = star_normalize(t);
    auto elapsed = std::chrono::steady_clock::now() - start;
    EXPECT_LT(elapsed, std::chrono::seconds(1)) << to_sexpr(t);
    EXPECT_EQ(star_normalize(n), n) << to_sexpr(t);
  }
}

TEST(Sigma, SoundInEveryVnModel) {
  Rng rng(derive_seed(0, "sigma-terms"));
  TermGenerator exact{2, 4, false, true}, smooth{2, 3, true, true};
  std::vector<Term> terms;
  for (int k = 0; k < 50; ++k) terms.push_back(k % 5 == 4 ? smooth(rng) : exact(rng));
  // planted redexes
  terms.push_back(x * (star(x) * x));
  terms.push_back(star(var(1)) * (var(1) * star(var(1))));
  for (const ModelRing& r : {ModelRing::reals(), ModelRing::product(3)}) {
    auto rep = sigma_soundness(terms, r, 10, config());
    EXPECT_GE(rep.checked, 500u);
    EXPECT_EQ(rep.exact_mismatches, 0u) << r.describe();
    EXPECT_EQ(rep.approximate_mismatches, 0u) << r.describe();
    EXPECT_GT(rep.exact_checked, 0u);
    EXPECT_TRUE(rep.verdict.holds());
  }
}

TEST(Sigma, JetModelsHaveNoStar) {
  EXPECT_THROW(sigma_soundness({x}, ModelRing::jet(1, 1), 1, config()), Error);
}

TEST(VnCheck, Verdicts) {
  EXPECT_TRUE(vn_check(ModelRing::product(3), config()).is_proven());
  EXPECT_TRUE(vn_check(ModelRing::reals(), config()).is_proven());
  Verdict v = vn_check(ModelRing::jet(1, 1), config());
  ASSERT_TRUE(v.is_refuted());
  EXPECT_EQ(*v.witness, (Point{0, 1}));
  // the witness really is a nonzero nilpotent
  auto r = ModelRing::jet(1, 1);
  EXPECT_EQ(r.mul(*v.witness, *v.witness), (Value{0, 0}));
}

TEST(Idempotent, Examples) {
  auto r = ModelRing::product(3);
  EXPECT_EQ(idempotent_of(r, {1, 0, 2}), (Value{1, 0, 1}));
  EXPECT_EQ(idempotent_of(r, {0, 0, 0}), (Value{0, 0, 0}));
  EXPECT_EQ(idempotent_of(r, {-3, 0.25, 7}), (Value{1, 1, 1}));
  Value a{1, 0, 2}, e = idempotent_of(r, a);
  EXPECT_EQ(r.mul(e, e), e);
  EXPECT_EQ(r.mul(e, a), a);
  EXPECT_EQ(r.mul(a, r.star(a)), e);
}

TEST(VnLaws, DoubleStarAndIdempotents) {
  for (const ModelRing& r : {ModelRing::reals(), ModelRing::product(4)}) {
    auto rep = vn_laws(r, config(), 500);
    EXPECT_EQ(rep.double_star_failures, 0u);
    EXPECT_EQ(rep.idempotent_failures, 0u);
    EXPECT_TRUE(rep.verdict.holds());
  }
}

TEST(StarHom, CoordinateMaps) {
  EXPECT_TRUE(star_hom_check(CoordinateMap::projection(2, 1), config()).is_proven());
  EXPECT_TRUE(star_hom_check(CoordinateMap::diagonal(2), config()).is_proven());
  CoordinateMap perm{3, {2, 0, 1}};
  EXPECT_TRUE(star_hom_check(perm, config()).is_proven());
  CoordinateMap comp = compose(CoordinateMap::projection(3, 0), perm);
  EXPECT_EQ(comp.index, std::vector<std::size_t>{2});
  EXPECT_TRUE(star_hom_check(comp, config()).is_proven());
  EXPECT_THROW(star_hom_check(CoordinateMap{2, {5}}, config()), Error);
}
