#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "smoothring/certificate.hpp"
#include "smoothring/error.hpp"
#include "smoothring/eval.hpp"
#include "smoothring/normalize.hpp"
#include "smoothring/presentation.hpp"
#include "smoothring/random.hpp"
#include "smoothring/verdict.hpp"
#include "smoothring/zero_set.hpp"

namespace smoothring {

inline constexpr std::string_view kNoSamplePoints = "NoSamplePointsFound";

/// Whether |value| at an approximate zero-set point is a genuine
/// separation rather than propagated solver error.
inline bool separates(double value, double scale, double point_residual_sq, double tol) {
  double bound = std::max(tol * std::max(1.0, scale), 1e3 * std::sqrt(point_residual_sq));
  return !std::isfinite(value) || std::abs(value) > bound;
}

/// Samples the real zero set of `ring` and checks that `value` vanishes
/// there.  `scale` feeds the relative tolerance.
inline Verdict check_vanishes_on_points(const Term& value, const Term& scale_term,
                                        const Presentation& ring, const Config& cfg,
                                        std::uint64_t seed) {
  auto sample = sample_zero_set(ring.relations, ring.arity, cfg, seed, cfg.samples);
  if (sample.points.empty()) {
    Verdict v = Verdict::supported(0, 0.0, "no real point of the zero set was found");
    return v.flag(std::string(kNoSamplePoints));
  }
  double worst = 0.0;
  std::optional<ZeroPoint> witness;
  double witness_value = 0.0;
  for (const ZeroPoint& z : sample.points) {
    double v = eval_or_nan(value, z.point);
    double s = std::abs(eval_or_nan(scale_term, z.point));
    if (separates(v, s, z.residual_sq, cfg.tol)) {
      if (!witness || std::abs(v) > std::abs(witness_value)) {
        witness = z;
        witness_value = v;
      }
    } else {
      worst = std::max(worst, std::abs(v));
    }
  }
  if (witness)
    return Verdict::refuted(witness->point, std::abs(witness_value),
                            "separated at a zero-set sample");
  return Verdict::supported(sample.points.size(), worst, "vanishes on all zero-set samples");
}

struct IdealCheck {
  Verdict verdict;
  std::optional<IdealCertificate> certificate;
};

/// Three-valued membership of `target` in the ideal of `ring`: syntactic
/// zero, supplied certificate, bounded certificate search, then sampling.
inline IdealCheck check_in_ideal(const Term& target, const Presentation& ring,
                                 const std::optional<IdealCertificate>& cert, const Config& cfg,
                                 std::uint64_t seed, const Term& scale_term = cnst(1)) {
  if (to_poly(target).is_zero())
    return {Verdict::proven("normal form is zero"),
            IdealCertificate{std::vector<Term>(ring.relations.size(), cnst(0))}};
  if (cert && certifies(target, ring.relations, *cert))
    return {Verdict::proven("certificate verified"), cert};
  if (auto found = search_certificate(target, ring.relations, ring.arity, cfg.cert_degree))
    return {Verdict::proven("certificate found by template search"), found};
  Verdict v = check_vanishes_on_points(target, scale_term, ring, cfg, seed);
  if (cert && !v.is_refuted()) v.flag("supplied certificate did not verify");
  return {v, std::nullopt};
}

/// a ≡ b in the common ambient ring.
inline Verdict equal_mod_ideal(const Element& a, const Element& b,
                               const std::optional<IdealCertificate>& cert, const Config& cfg) {
  if (!(a.ambient == b.ambient))
    throw Error(ErrorKind::SourceMismatch, "elements live in different presentations");
  Term diff = a.term - b.term;
  Term scale = a.term * a.term + b.term * b.term;
  return check_in_ideal(diff, a.ambient, cert, cfg,
                        derive_seed(cfg.seed, "equal:" + to_sexpr(diff)), scale)
      .verdict;
}

/// Checks every fⱼ∘φ ∈ ⟨g⟩.
inline Verdict verify_morphism(const Morphism& m, const Config& cfg) {
  Verdict out = Verdict::proven("no relations to transport");
  auto pulled = m.pulled_relations();
  for (std::size_t j = 0; j < pulled.size(); ++j) {
    auto r = check_in_ideal(pulled[j], m.target, m.certificates[j], cfg,
                            derive_seed(cfg.seed, "morphism:" + to_sexpr(pulled[j])));
    out = j == 0 ? r.verdict : meet(out, r.verdict);
  }
  if (out.is_proven() && !pulled.empty()) out.reason = "all relations certified";
  return out;
}

/// Fills in missing certificates where bounded search finds them.
inline Morphism with_certificates(Morphism m, const Config& cfg) {
  auto pulled = m.pulled_relations();
  for (std::size_t j = 0; j < pulled.size(); ++j) {
    if (m.certificates[j] && certifies(pulled[j], m.target.relations, *m.certificates[j])) continue;
    m.certificates[j] = search_certificate(pulled[j], m.target.relations, m.target.arity,
                                           cfg.cert_degree);
  }
  return m;
}

/// Componentwise equality of two parallel morphisms in the target ring.
inline Verdict morphisms_agree(const Morphism& f, const Morphism& g, const Config& cfg) {
  if (!(f.source == g.source) || !(f.target == g.target))
    throw Error(ErrorKind::ParallelismViolation, "morphisms are not parallel");
  Verdict out = Verdict::proven("components agree");
  for (std::size_t i = 0; i < f.components.size(); ++i) {
    Term diff = f.components[i] - g.components[i];
    Term scale = f.components[i] * f.components[i] + g.components[i] * g.components[i];
    auto r = check_in_ideal(diff, f.target, std::nullopt, cfg,
                            derive_seed(cfg.seed, "agree:" + to_sexpr(diff)), scale);
    out = i == 0 ? r.verdict : meet(out, r.verdict);
  }
  if (out.is_proven()) out.reason = "components agree modulo the target ideal";
  return out;
}

/// g∘f = id and f∘g = id, each up to the relevant ideal.
inline Verdict verify_inverse_pair(const Morphism& f, const Morphism& g, const Config& cfg) {
  Verdict a = morphisms_agree(compose(g, f), identity(f.source), cfg);
  Verdict b = morphisms_agree(compose(f, g), identity(f.target), cfg);
  Verdict out = meet(a, b);
  if (out.is_proven()) out.reason = "both round trips are identities";
  return out;
}

// ---------------------------------------------------------------------------
// Colimits

struct CoproductResult {
  Presentation object;
  Morphism left;
  Morphism right;
};

/// A ⊗∞ B by juxtaposition: arity n+m, relations fᵢ and gⱼ shifted by n.
inline CoproductResult coproduct(const Presentation& a, const Presentation& b) {
  std::vector<Term> rels = a.relations;
  for (const Term& g : b.relations) rels.push_back(shift_vars(g, a.arity));
  Presentation p(a.arity + b.arity, rels, "(" + a.name + " (x) " + b.name + ")");
  std::vector<Term> lc, rc;
  for (std::size_t i = 0; i < a.arity; ++i) lc.push_back(var(i));
  for (std::size_t i = 0; i < b.arity; ++i) rc.push_back(var(a.arity + i));
  std::vector<std::optional<IdealCertificate>> lcert, rcert;
  for (std::size_t j = 0; j < a.relations.size(); ++j)
    lcert.emplace_back(unit_certificate(rels.size(), j));
  for (std::size_t j = 0; j < b.relations.size(); ++j)
    rcert.emplace_back(unit_certificate(rels.size(), a.relations.size() + j));
  return {p, Morphism(a, p, lc, lcert), Morphism(b, p, rc, rcert)};
}

struct QuotientResult {
  Presentation object;
  Morphism quotient;
};

/// Target ring with the extra relations sᵢ − s′ᵢ for each source generator.
inline QuotientResult coequalizer(const Morphism& s, const Morphism& t) {
  if (!(s.source == t.source) || !(s.target == t.target))
    throw Error(ErrorKind::ParallelismViolation, "coequalizer needs parallel morphisms");
  const Presentation& b = s.target;
  std::vector<Term> rels = b.relations;
  for (std::size_t i = 0; i < s.components.size(); ++i)
    rels.push_back(s.components[i] - t.components[i]);
  Presentation q(b.arity, rels, "coeq(" + b.name + ")");
  std::vector<Term> comps;
  for (std::size_t i = 0; i < b.arity; ++i) comps.push_back(var(i));
  std::vector<std::optional<IdealCertificate>> certs;
  for (std::size_t j = 0; j < b.relations.size(); ++j)
    certs.emplace_back(unit_certificate(rels.size(), j));
  return {q, Morphism(b, q, comps, certs)};
}

struct PushoutResult {
  Presentation object;
  Morphism left;   // B → P
  Morphism right;  // C → P
  Verdict commutes;
};

/// Coequalizer of ι_B∘f and ι_C∘g in B ⊗∞ C.
inline PushoutResult pushout(const Morphism& f, const Morphism& g, const Config& cfg) {
  if (!(f.source == g.source))
    throw Error(ErrorKind::SourceMismatch, "pushout legs must share their source");
  auto co = coproduct(f.target, g.target);
  auto q = coequalizer(compose(co.left, f), compose(co.right, g));
  q.object.name = "pushout(" + f.target.name + ", " + g.target.name + ")";
  Morphism left = compose(q.quotient, co.left);
  Morphism right = compose(q.quotient, co.right);
  left.target.name = right.target.name = q.object.name;
  Verdict commutes = morphisms_agree(compose(left, f), compose(right, g), cfg);
  return {q.object, left, right, commutes};
}

// ---------------------------------------------------------------------------
// Rings of fractions

/// A{a⁻¹} ≅ C∞(ℝⁿ⁺¹)/⟨f₁…f_k, a·x_n − 1⟩ with η_a.
inline QuotientResult localize(const Presentation& a, const Term& element) {
  check_arity(element, a.arity, "element");
  std::vector<Term> rels = a.relations;
  rels.push_back(element * var(a.arity) - cnst(1));
  std::string base = a.name.empty() ? "A" : a.name;
  Presentation l(a.arity + 1, rels, base + "{" + to_sexpr(element) + "^-1}");
  std::vector<Term> comps;
  for (std::size_t i = 0; i < a.arity; ++i) comps.push_back(var(i));
  std::vector<std::optional<IdealCertificate>> certs;
  for (std::size_t j = 0; j < a.relations.size(); ++j)
    certs.emplace_back(unit_certificate(rels.size(), j));
  return {l, Morphism(a, l, comps, certs)};
}

/// A{1⁻¹} → A sending the adjoined inverse to 1.
inline Morphism unit_localization_inverse(const Presentation& a) {
  auto l = localize(a, cnst(1));
  std::vector<Term> comps;
  for (std::size_t i = 0; i < a.arity; ++i) comps.push_back(var(i));
  comps.push_back(cnst(1));
  std::vector<std::optional<IdealCertificate>> certs;
  for (std::size_t j = 0; j < a.relations.size(); ++j)
    certs.emplace_back(unit_certificate(a.relations.size(), j));
  certs.emplace_back(IdealCertificate{std::vector<Term>(a.relations.size(), cnst(0))});
  return Morphism(l.object, a, comps, certs);
}

/// The canonical g′: A{a⁻¹} → B{g(a)⁻¹} with g′∘η_a = η_{g(a)}∘g.
inline Morphism localized_morphism(const Morphism& g, const Term& a) {
  auto src = localize(g.source, a);
  auto dst = localize(g.target, g(a));
  std::vector<Term> comps = g.components;
  comps.push_back(var(g.target.arity));
  std::vector<std::optional<IdealCertificate>> certs;
  const std::size_t t = dst.object.relations.size();
  for (const auto& c : g.certificates) {
    if (!c) {
      certs.emplace_back();
      continue;
    }
    IdealCertificate lifted = *c;
    lifted.multipliers.push_back(cnst(0));
    certs.emplace_back(std::move(lifted));
  }
  certs.emplace_back(unit_certificate(t, t - 1));
  return Morphism(src.object, dst.object, comps, certs);
}

struct FlattenResult {
  Presentation iterated;  // (A{a⁻¹}){η_a(b)⁻¹}
  Presentation single;    // A{(a·b)⁻¹}
  Morphism theta;         // iterated → single
  Morphism theta_inverse;
  Verdict round_trip;
  Verdict triangle;
};

/// θ: (A{a⁻¹}){β⁻¹} ≅ A{(a·b)⁻¹} for β = η_a(b)/η_a(c); only c = 1.
inline FlattenResult flatten_localization(const Presentation& a, const Term& first,
                                          const Term& second, const Config& cfg,
                                          const std::optional<Term>& denominator = std::nullopt) {
  if (denominator && !(normalize(*denominator) == cnst(1)))
    throw Error(ErrorKind::UnsupportedDenominator,
                "only numerators over the denominator 1 are supported");
  const std::size_t n = a.arity;
  auto step1 = localize(a, first);
  auto step2 = localize(step1.object, second);
  auto single = localize(a, first * second);
  const std::size_t k = a.relations.size();

  std::vector<Term> theta_comps;
  for (std::size_t i = 0; i < n; ++i) theta_comps.push_back(var(i));
  theta_comps.push_back(second * var(n));
  theta_comps.push_back(first * var(n));
  std::vector<std::optional<IdealCertificate>> theta_certs;
  for (std::size_t j = 0; j < k; ++j) theta_certs.emplace_back(unit_certificate(k + 1, j));
  theta_certs.emplace_back(unit_certificate(k + 1, k));
  theta_certs.emplace_back(unit_certificate(k + 1, k));
  Morphism theta(step2.object, single.object, theta_comps, theta_certs);

  // a·b·u·v − 1 = (b·v)(a·u − 1) + (b·v − 1)
  std::vector<Term> inv_comps;
  for (std::size_t i = 0; i < n; ++i) inv_comps.push_back(var(i));
  inv_comps.push_back(var(n) * var(n + 1));
  std::vector<std::optional<IdealCertificate>> inv_certs;
  for (std::size_t j = 0; j < k; ++j) inv_certs.emplace_back(unit_certificate(k + 2, j));
  IdealCertificate last{std::vector<Term>(k + 2, cnst(0))};
  last.multipliers[k] = second * var(n + 1);
  last.multipliers[k + 1] = cnst(1);
  inv_certs.emplace_back(std::move(last));
  Morphism theta_inv(single.object, step2.object, inv_comps, inv_certs);

  Verdict rt = verify_inverse_pair(theta, theta_inv, cfg);
  Morphism via_iterated = compose(theta, compose(step2.quotient, step1.quotient));
  Verdict tri = morphisms_agree(via_iterated, single.quotient, cfg);
  return {step2.object, single.object, theta, theta_inv, rt, tri};
}

struct SaturationResult {
  Verdict verdict;
  std::optional<Term> inverse;  // in A{a⁻¹}
  std::optional<IdealCertificate> certificate;
};

/// Is η_a(s) a unit of A{a⁻¹}?  Searches inverse templates of bounded
/// degree in the generators, the adjoined inverse and the atoms of s.
inline SaturationResult saturation_member(const Presentation& a, const Term& element,
                                          const Term& s, const Config& cfg) {
  check_arity(s, a.arity, "element");
  auto loc = localize(a, element);
  const Presentation& l = loc.object;
  std::vector<Term> seen = l.relations;
  seen.push_back(s);
  auto atoms = template_atoms(l.arity, seen);
  Polynomial sp = to_poly(s);
  std::vector<Polynomial> gens;
  for (const Term& g : l.relations) gens.push_back(to_poly(g));
  for (unsigned d = 0; d <= cfg.cert_degree; ++d) {
    auto monos = template_monomials(atoms, d);
    if (monos.size() * (gens.size() + 1) > 1500) break;
    std::vector<Polynomial> basis;
    for (const Monomial& m : monos) basis.push_back(Polynomial::of(m, 1) * sp);
    for (const Polynomial& g : gens)
      for (const Monomial& m : monos) basis.push_back(Polynomial::of(m, 1) * g);
    auto sol = solve_combination(basis, Polynomial::constant(1));
    if (!sol) continue;
    std::span<const Rational> all(*sol);
    Term inverse = combination_term(monos, all.subspan(0, monos.size()));
    IdealCertificate cert;
    for (std::size_t r = 0; r < gens.size(); ++r) {
      auto part = all.subspan((r + 1) * monos.size(), monos.size());
      std::vector<Rational> negated(part.begin(), part.end());
      for (auto& c : negated) c = -c;
      cert.multipliers.push_back(combination_term(monos, negated));
    }
    if (!certifies(s * inverse - cnst(1), l.relations, cert)) continue;
    return {Verdict::proven("inverse found with certificate"), inverse, cert};
  }
  std::vector<Term> system = l.relations;
  system.push_back(s);
  std::uint64_t seed = derive_seed(cfg.seed, "saturation:" + to_sexpr(s));
  if (auto z = find_common_zero(system, l.arity, cfg, seed, std::max<std::size_t>(cfg.samples, 32)))
    return {Verdict::refuted(z->point, std::sqrt(z->residual_sq),
                             "element vanishes at a point of the localized zero set"),
            std::nullopt, std::nullopt};
  Verdict v = check_vanishes_on_points(cnst(0), cnst(1), l, cfg, seed);
  v.reason = "no inverse found within the template bound and no common zero found";
  v.flag("Unknown");
  return {v, std::nullopt, std::nullopt};
}

}  // namespace smoothring
