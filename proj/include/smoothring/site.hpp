#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smoothring/fp_rings.hpp"

namespace smoothring {

/// A smooth-Zariski co-covering family {η_{aᵢ}: A → A{aᵢ⁻¹}} together with
/// evidence that ⟨a₁…a_n⟩ = A.  The certificate, when present, has one
/// multiplier per element followed by one per relation of the base:
/// Σ λᵢaᵢ + Σ hₗfₗ = 1.
struct Cover {
  Presentation base;
  std::vector<Term> elements;
  std::optional<IdealCertificate> unimodularity;
  std::vector<Morphism> arrows;
  Verdict verdict;

  std::vector<Term> lambdas() const {
    if (!unimodularity) return {};
    return {unimodularity->multipliers.begin(),
            unimodularity->multipliers.begin() + static_cast<std::ptrdiff_t>(elements.size())};
  }
};

inline std::vector<Term> augmented_generators(const Presentation& a, const std::vector<Term>& elems) {
  std::vector<Term> gens = elems;
  gens.insert(gens.end(), a.relations.begin(), a.relations.end());
  return gens;
}

inline std::uint64_t cover_seed(const Config& cfg, std::string_view what,
                                const std::vector<Term>& elems) {
  std::string label(what);
  for (const Term& t : elems) label += to_sexpr(t);
  return derive_seed(cfg.seed, label);
}

/// Common real zero of the relations and all elements, if one is found.
inline std::optional<ZeroPoint> uncovered_point(const Presentation& a, const std::vector<Term>& elems,
                                                const Config& cfg) {
  auto system = augmented_generators(a, elems);
  return find_common_zero(system, a.arity, cfg, cover_seed(cfg, "uncovered:", elems),
                          std::max<std::size_t>(cfg.samples, 64));
}

namespace detail {
inline std::vector<Morphism> cover_arrows(const Presentation& a, const std::vector<Term>& elems) {
  std::vector<Morphism> arrows;
  for (const Term& e : elems) arrows.push_back(localize(a, e).quotient);
  return arrows;
}
}  // namespace detail

/// Builds a cover, verifying or discovering the unimodularity certificate.
/// `lambdas` may hold n element multipliers or n+k full multipliers.
inline Cover make_cover(const Presentation& a, std::vector<Term> elems,
                        std::optional<std::vector<Term>> lambdas, const Config& cfg) {
  if (elems.empty()) throw Error(ErrorKind::InvalidArgument, "a cover needs at least one element");
  for (const Term& e : elems) check_arity(e, a.arity, "cover element");
  const std::size_t n = elems.size(), k = a.relations.size();
  auto gens = augmented_generators(a, elems);
  Cover c{a, elems, std::nullopt, detail::cover_arrows(a, elems), {}};

  if (lambdas) {
    if (lambdas->size() != n && lambdas->size() != n + k)
      throw Error(ErrorKind::ArityMismatch, "unimodularity certificate has the wrong length");
    for (const Term& l : *lambdas) check_arity(l, a.arity, "multiplier");
    IdealCertificate cert{*lambdas};
    cert.multipliers.resize(n + k, cnst(0));
    if (certifies(cnst(1), gens, cert)) {
      c.unimodularity = cert;
      c.verdict = Verdict::proven("unimodularity certificate verified");
      return c;
    }
    // Σλa − 1 ∈ ⟨f⟩?
    std::vector<Term> lam(lambdas->begin(), lambdas->begin() + static_cast<std::ptrdiff_t>(n));
    Term combo = cnst(0);
    for (std::size_t i = 0; i < n; ++i) combo = combo + lam[i] * elems[i];
    auto rest = check_in_ideal(cnst(1) - combo, a, std::nullopt, cfg,
                               cover_seed(cfg, "unimod:", elems));
    if (rest.verdict.is_refuted())
      throw Error(ErrorKind::CertificateRefuted,
                  "Σ λᵢaᵢ differs from 1 at a point of the zero set", rest.verdict.witness);
    if (auto z = uncovered_point(a, elems, cfg))
      throw Error(ErrorKind::CertificateRefuted, "common real zero of all elements", z->point);
    IdealCertificate full{lam};
    if (rest.certificate)
      full.multipliers.insert(full.multipliers.end(), rest.certificate->multipliers.begin(),
                              rest.certificate->multipliers.end());
    else
      full.multipliers.resize(n + k, cnst(0));
    c.unimodularity = full;
    c.verdict = rest.verdict;
    if (c.verdict.is_proven()) c.verdict.reason = "unimodularity certificate verified";
    return c;
  }

  if (auto found = search_certificate(cnst(1), gens, a.arity, cfg.cert_degree)) {
    c.unimodularity = found;
    c.verdict = Verdict::proven("unimodularity certificate found by template search");
    return c;
  }
  if (auto z = uncovered_point(a, elems, cfg))
    throw Error(ErrorKind::CertificateRefuted, "common real zero of all elements", z->point);
  throw Error(ErrorKind::CertificateNotFound,
              "no unimodularity certificate within the template bound");
}

/// Re-runs acceptance on a cover's own data.
inline Verdict check_cover(const Cover& c, const Config& cfg) {
  std::optional<std::vector<Term>> lam;
  if (c.unimodularity) lam = c.unimodularity->multipliers;
  try {
    return make_cover(c.base, c.elements, lam, cfg).verdict;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CertificateRefuted && e.witness())
      return Verdict::refuted(*e.witness(), 0.0, e.what());
    throw;
  }
}

/// Isomorphism axiom: an isomorphism φ: A → A′ (with inverse ψ) is
/// covering.  Via the unit localization A{1⁻¹} ≅ A, {φ} is the family
/// generated by the element 1 with certificate λ = (1).
struct IsomorphismCover {
  Cover cover;
  Verdict inverse_pair;
  Verdict unit_localization;
};

inline IsomorphismCover isomorphism_cover(const Morphism& phi, const Morphism& psi, const Config& cfg) {
  Verdict pair = verify_inverse_pair(phi, psi, cfg);
  if (pair.is_refuted())
    throw Error(ErrorKind::CertificateRefuted, "the given maps are not mutually inverse", pair.witness);
  auto unit = localize(phi.source, cnst(1));
  Verdict iso = verify_inverse_pair(unit.quotient, unit_localization_inverse(phi.source), cfg);
  Cover c = make_cover(phi.source, {cnst(1)}, std::vector<Term>{cnst(1)}, cfg);
  c.verdict = meet(meet(c.verdict, pair), iso);
  return {c, pair, iso};
}

struct PullbackResult {
  Cover cover;
  /// g′ᵢ: A{aᵢ⁻¹} → B{g(aᵢ)⁻¹}
  std::vector<Morphism> comparisons;
  /// g′ᵢ∘η_{aᵢ} = η_{g(aᵢ)}∘g for every i.
  Verdict squares;
};

/// Transports a cover of A along g: A → B.
inline PullbackResult pullback_cover(const Cover& c, const Morphism& g, const Config& cfg) {
  if (!(g.source == c.base))
    throw Error(ErrorKind::SourceMismatch, "morphism does not start at the cover's base");
  Morphism gc = with_certificates(g, cfg);
  std::vector<Term> elems;
  for (const Term& e : c.elements) elems.push_back(normalize(gc(e)));
  std::optional<std::vector<Term>> lam;
  if (c.unimodularity) {
    const std::size_t n = c.elements.size();
    std::vector<Term> mult;
    for (std::size_t i = 0; i < n; ++i) mult.push_back(normalize(gc(c.unimodularity->multipliers[i])));
    // Σ g(hₗ)·(fₗ∘g) = Σ_r (Σₗ g(hₗ)μₗᵣ) g_r
    if (gc.all_certified()) {
      const std::size_t t = g.target.relations.size();
      for (std::size_t r = 0; r < t; ++r) {
        Polynomial acc;
        for (std::size_t l = 0; l < c.base.relations.size(); ++l)
          acc += to_poly(gc(c.unimodularity->multipliers[n + l])) *
                 to_poly(gc.certificates[l]->multipliers[r]);
        mult.push_back(to_term(acc));
      }
    }
    lam = mult;
  }
  Cover pulled = make_cover(g.target, elems, lam, cfg);
  PullbackResult out{pulled, {}, Verdict::proven("no squares")};
  for (std::size_t i = 0; i < c.elements.size(); ++i) {
    Morphism gi = localized_morphism(gc, c.elements[i]);
    auto eta_a = localize(c.base, c.elements[i]).quotient;
    auto eta_ga = localize(g.target, gc(c.elements[i])).quotient;
    Verdict sq = morphisms_agree(compose(gi, eta_a), compose(eta_ga, gc), cfg);
    out.squares = i == 0 ? sq : meet(out.squares, sq);
    out.comparisons.push_back(std::move(gi));
  }
  if (out.squares.is_proven()) out.squares.reason = "every localization square commutes";
  return out;
}

/// Refinement of the i-th leg: elements η(b_ij) of A{aᵢ⁻¹} given by A-terms
/// b_ij, with optional multipliers μ_ij over A{aᵢ⁻¹} (Σ μ_ij b_ij ≡ 1).
struct Refinement {
  std::vector<Term> numerators;
  std::optional<std::vector<Term>> multipliers;
};

struct ComposeResult {
  Cover cover;
  /// Largest exponent N used when clearing denominators (0 if geometric).
  unsigned exponent = 0;
  bool geometric_fallback = false;
};

namespace detail {

// Writes μ(x, u) with u = Var(n) as Σ_d μ_d(x)·u^d; nullopt if u occurs
// inside a non-variable atom.
inline std::optional<std::map<unsigned, Polynomial>> split_by_inverse(const Term& mu, std::size_t n) {
  std::map<unsigned, Polynomial> parts;
  const Term u = var(n);
  const Polynomial poly = to_poly(mu);
  for (const auto& [m, c] : poly.terms()) {
    Monomial rest;
    unsigned d = 0;
    for (const auto& [atom, e] : m) {
      if (atom == u) {
        d = e;
      } else {
        if (atom.arity() > n) return std::nullopt;
        rest.emplace_back(atom, e);
      }
    }
    parts[d].add_term(rest, c);
  }
  return parts;
}

inline Polynomial poly_pow(const Polynomial& p, unsigned e) {
  Polynomial acc = Polynomial::constant(1);
  for (unsigned i = 0; i < e; ++i) acc = acc * p;
  return acc;
}

// All compositions of `total` into `parts` non-negative integers.
inline void compositions(unsigned total, std::size_t parts, std::vector<unsigned>& cur,
                         std::vector<std::vector<unsigned>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (unsigned k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(total - k, parts, cur, out);
    cur.pop_back();
  }
}

inline Rational factorial(unsigned k) {
  Rational f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace detail

inline Cover geometric_cover(const Presentation& a, std::vector<Term> elems, const Config& cfg);

/// Transitivity: the cover of A by {aᵢ·b_ij}.  The certificate is built by
/// clearing the adjoined inverse from each refinement certificate
/// (aᵢ^{Dᵢ} ≡ Σⱼ μ̃_ij b_ij) and expanding (Σλᵢaᵢ)^K with K = Σ Dᵢ + 1.
inline ComposeResult compose_covers(const Cover& c, const std::vector<Refinement>& refinements,
                                    const Config& cfg) {
  const std::size_t n = c.elements.size();
  const std::size_t ar = c.base.arity;
  if (refinements.size() != n)
    throw Error(ErrorKind::InvalidArgument, "one refinement per cover element is required");
  std::vector<Term> elems;
  for (std::size_t i = 0; i < n; ++i) {
    if (refinements[i].numerators.empty())
      throw Error(ErrorKind::InvalidArgument, "empty refinement");
    for (const Term& b : refinements[i].numerators) {
      check_arity(b, ar, "refinement numerator");
      elems.push_back(c.elements[i] * b);
    }
  }

  bool algebraic = c.unimodularity.has_value();
  std::vector<std::vector<Polynomial>> cleared(n);  // μ̃_ij
  std::vector<unsigned> exps(n, 1);                 // eᵢ = Dᵢ + 1
  for (std::size_t i = 0; i < n && algebraic; ++i) {
    const auto& ref = refinements[i];
    auto loc = localize(c.base, c.elements[i]);
    std::vector<Term> mu;
    if (ref.multipliers) {
      if (ref.multipliers->size() != ref.numerators.size())
        throw Error(ErrorKind::ArityMismatch, "refinement multipliers do not match its elements");
      mu = *ref.multipliers;
    } else {
      auto gens = augmented_generators(loc.object, ref.numerators);
      auto found = search_certificate(cnst(1), gens, loc.object.arity, cfg.cert_degree);
      if (!found) {
        algebraic = false;
        break;
      }
      mu.assign(found->multipliers.begin(),
                found->multipliers.begin() + static_cast<std::ptrdiff_t>(ref.numerators.size()));
    }
    std::vector<std::map<unsigned, Polynomial>> parts;
    unsigned dmax = 0;
    for (const Term& m : mu) {
      auto p = detail::split_by_inverse(m, ar);
      if (!p) {
        algebraic = false;
        break;
      }
      if (!p->empty()) dmax = std::max(dmax, p->rbegin()->first);
      parts.push_back(std::move(*p));
    }
    if (!algebraic) break;
    if (dmax + 1 > cfg.nmax)
      throw Error(ErrorKind::CertificateNotFound,
                  "denominator clearing needs exponent " + std::to_string(dmax + 1) +
                      " > nmax = " + std::to_string(cfg.nmax));
    Polynomial ai = to_poly(c.elements[i]);
    Polynomial check = detail::poly_pow(ai, dmax);
    for (std::size_t j = 0; j < parts.size(); ++j) {
      Polynomial mt;
      for (const auto& [d, coef] : parts[j]) mt += coef * detail::poly_pow(ai, dmax - d);
      check -= mt * to_poly(ref.numerators[j]);
      cleared[i].push_back(std::move(mt));
    }
    auto ok = check_in_ideal(to_term(check), c.base, std::nullopt, cfg,
                             derive_seed(cfg.seed, "clear:" + std::to_string(i)));
    if (ok.verdict.is_refuted()) {
      algebraic = false;
      break;
    }
    exps[i] = dmax + 1;
  }

  if (!algebraic) {
    ComposeResult out{geometric_cover(c.base, elems, cfg), 0, true};
    return out;
  }

  unsigned total = 1;
  for (unsigned e : exps) total += e - 1;
  std::vector<Polynomial> lam, apol;
  auto lterms = c.lambdas();
  for (std::size_t i = 0; i < n; ++i) {
    lam.push_back(to_poly(lterms[i]));
    apol.push_back(to_poly(c.elements[i]));
  }
  std::vector<std::vector<Polynomial>> lambda_prime(n);
  for (std::size_t i = 0; i < n; ++i) lambda_prime[i].resize(refinements[i].numerators.size());
  std::vector<std::vector<unsigned>> comps;
  std::vector<unsigned> cur;
  detail::compositions(total, n, cur, comps);
  for (const auto& k : comps) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i)
      if (k[i] >= exps[i]) {
        pick = i;
        break;
      }
    Rational coef = detail::factorial(total);
    for (unsigned ki : k) coef /= detail::factorial(ki);
    Polynomial common = Polynomial::constant(coef);
    for (std::size_t l = 0; l < n; ++l) {
      common = common * detail::poly_pow(lam[l], k[l]);
      unsigned ae = l == pick ? k[l] - exps[l] : k[l];
      common = common * detail::poly_pow(apol[l], ae);
    }
    for (std::size_t j = 0; j < lambda_prime[pick].size(); ++j)
      lambda_prime[pick][j] += common * cleared[pick][j];
  }
  std::vector<Term> flat;
  for (const auto& row : lambda_prime)
    for (const auto& p : row) flat.push_back(to_term(p));
  unsigned exponent = *std::max_element(exps.begin(), exps.end());
  return {make_cover(c.base, elems, flat, cfg), exponent, false};
}

struct SpecSampleReport {
  std::size_t samples = 0;
  std::size_t covered = 0;
  std::vector<std::size_t> nonzero_counts;
  std::optional<Point> uncovered;
  std::vector<std::string> flags;

  bool all_covered() const { return samples > 0 && covered == samples && !uncovered; }
};

/// Classifies sampled ℝ-points of A by which D(aᵢ) contain them, and runs a
/// targeted search for a common zero of the elements.
inline SpecSampleReport spec_sample(const Presentation& a, const std::vector<Term>& elems,
                                    const Config& cfg) {
  SpecSampleReport r;
  r.nonzero_counts.assign(elems.size(), 0);
  auto sample = sample_zero_set(a.relations, a.arity, cfg, cover_seed(cfg, "spec:", elems),
                                cfg.samples);
  r.samples = sample.points.size();
  for (const ZeroPoint& z : sample.points) {
    bool any = false;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      double v = eval_or_nan(elems[i], z.point);
      if (separates(v, 1.0, z.residual_sq, cfg.tol)) {
        ++r.nonzero_counts[i];
        any = true;
      }
    }
    if (any)
      ++r.covered;
    else if (!r.uncovered)
      r.uncovered = z.point;
  }
  if (!r.uncovered && r.samples > 0)
    if (auto z = uncovered_point(a, elems, cfg)) r.uncovered = z->point;
  if (r.samples == 0) {
    r.flags.emplace_back(kNoSamplePoints);
    r.flags.emplace_back("likely-trivial-ring");
  }
  return r;
}

/// Cover validated only geometrically (no algebraic certificate).
inline Cover geometric_cover(const Presentation& a, std::vector<Term> elems, const Config& cfg) {
  auto rep = spec_sample(a, elems, cfg);
  if (rep.uncovered)
    throw Error(ErrorKind::CertificateRefuted, "common real zero of all elements", rep.uncovered);
  Cover c{a, elems, std::nullopt, detail::cover_arrows(a, elems), {}};
  c.verdict = Verdict::supported(rep.samples, 0.0, "covering checked on sampled points only");
  c.verdict.flag("geometric-validation");
  c.verdict.flag("lower-confidence");
  if (rep.samples == 0) c.verdict.flag(std::string(kNoSamplePoints));
  return c;
}

// ---------------------------------------------------------------------------
// Sheaf conditions

struct GlueInstance {
  /// Index into the target point list for each (leg, covered point) pair.
  std::vector<std::vector<std::size_t>> family;
  std::optional<std::vector<std::size_t>> glued;
  bool unique = false;
};

struct SheafCheckReport {
  std::size_t points = 0;
  std::size_t target_points = 0;
  std::size_t matching_families = 0;
  std::size_t glued_uniquely = 0;
  std::vector<GlueInstance> glue_instances;  // first few, for display
  bool exhaustive = false;
  Verdict equalizer;
};

namespace detail {

inline std::vector<Point> sheaf_points(const Presentation& a, const std::vector<Term>& elems,
                                       const Config& cfg, std::size_t count) {
  auto sample = sample_zero_set(a.relations, a.arity, cfg, cover_seed(cfg, "sheaf:", elems), count);
  std::vector<Point> pts;
  for (auto& z : sample.points) pts.push_back(z.point);
  // a planted uncovered point makes a failing cover visible
  if (auto z = uncovered_point(a, elems, cfg)) pts.push_back(z->point);
  return pts;
}

inline bool in_leg(const Term& a, const Point& p, const Config& cfg) {
  return separates(eval_or_nan(a, p), 1.0, 0.0, cfg.tol);
}

}  // namespace detail

/// Point-model shadow of the representable sheaf condition for Hom(B, −):
/// sections over D(aᵢ) are maps from sampled ℝ-points of A in D(aᵢ) to the
/// finite set φ_ℝ(B).  Every matching family must have exactly one global
/// extension among all maps (sampled points) → φ_ℝ(B).
inline SheafCheckReport sheaf_check_representable(const Cover& c, const Presentation& target,
                                                  const Config& cfg, std::size_t point_count = 4) {
  SheafCheckReport rep;
  auto enumeration = enumerate_zero_set(target.relations, target.arity, cfg,
                                        derive_seed(cfg.seed, "sheaf-target"),
                                        std::max<std::size_t>(cfg.samples, 16));
  if (!enumeration.complete)
    throw Error(ErrorKind::EnumerationOverflow, "φ_ℝ of the target is not finitely enumerable");
  auto pts = detail::sheaf_points(c.base, c.elements, cfg, point_count);
  const std::size_t np = pts.size(), nb = enumeration.points.size();
  rep.points = np;
  rep.target_points = nb;
  std::vector<std::vector<std::size_t>> legs(c.elements.size());
  double family_space = 1.0;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    for (std::size_t p = 0; p < np; ++p)
      if (detail::in_leg(c.elements[i], pts[p], cfg)) legs[i].push_back(p);
    family_space *= std::pow(static_cast<double>(nb), static_cast<double>(legs[i].size()));
  }
  double global_space = std::pow(static_cast<double>(nb), static_cast<double>(np));
  if (family_space > static_cast<double>(cfg.budget) || global_space > static_cast<double>(cfg.budget))
    throw Error(ErrorKind::EnumerationOverflow, "candidate space exceeds the enumeration budget");

  // Index global maps by their tuple of values.
  std::vector<std::vector<std::size_t>> globals;
  {
    std::vector<std::size_t> g(np, 0);
    for (;;) {
      globals.push_back(g);
      std::size_t pos = 0;
      while (pos < np && ++g[pos] == nb) g[pos++] = 0;
      if (pos == np) break;
    }
    if (nb == 0) globals.clear();
  }

  // Enumerate families leg by leg, keeping only those matching on overlaps.
  std::vector<std::size_t> slots;  // flattened (leg, point)
  std::vector<std::pair<std::size_t, std::size_t>> where;
  for (std::size_t i = 0; i < legs.size(); ++i)
    for (std::size_t p : legs[i]) where.emplace_back(i, p);
  std::vector<std::size_t> assign(where.size(), 0);
  bool done = nb == 0 && !where.empty();
  bool all_ok = true;
  std::optional<Point> bad_point;
  while (!done) {
    // matching: same point in two legs ⇒ same value
    bool matching = true;
    std::map<std::size_t, std::size_t> value_at;
    for (std::size_t s = 0; s < where.size() && matching; ++s) {
      auto [it, fresh] = value_at.emplace(where[s].second, assign[s]);
      if (!fresh && it->second != assign[s]) matching = false;
    }
    if (matching) {
      ++rep.matching_families;
      std::size_t count = 0;
      std::optional<std::vector<std::size_t>> first;
      for (const auto& g : globals) {
        bool restricts = true;
        for (std::size_t s = 0; s < where.size() && restricts; ++s)
          restricts = g[where[s].second] == assign[s];
        if (restricts) {
          ++count;
          if (!first) first = g;
        }
      }
      if (count == 1) {
        ++rep.glued_uniquely;
      } else {
        all_ok = false;
        for (std::size_t p = 0; p < np && !bad_point; ++p)
          if (!value_at.count(p)) bad_point = pts[p];
      }
      if (rep.glue_instances.size() < 4) {
        GlueInstance gi;
        gi.family.resize(legs.size());
        for (std::size_t s = 0; s < where.size(); ++s) gi.family[where[s].first].push_back(assign[s]);
        gi.glued = first;
        gi.unique = count == 1;
        rep.glue_instances.push_back(std::move(gi));
      }
    }
    std::size_t pos = 0;
    while (pos < assign.size() && ++assign[pos] == nb) assign[pos++] = 0;
    if (pos == assign.size()) done = true;
  }
  rep.exhaustive = true;
  if (all_ok) {
    rep.equalizer = Verdict::supported(np, 0.0, "every matching family glues uniquely");
  } else {
    Point w = bad_point ? *bad_point : (pts.empty() ? Point{} : pts.front());
    rep.equalizer = Verdict::refuted(w, 0.0, "a matching family glues non-uniquely");
  }
  return rep;
}

/// Structure-sheaf variant A → ∏A{aᵢ⁻¹} ⇉ ∏A{(aᵢaⱼ)⁻¹} on a finite list of
/// global elements: local sections are restrictions of candidates;
/// families matching on overlaps must glue to candidates that agree
/// everywhere (separation), and gluing among candidates is reported.
struct StructureSheafReport {
  std::size_t points = 0;
  std::size_t matching_families = 0;
  std::size_t glued = 0;
  std::size_t unglued_among_candidates = 0;
  Verdict separation;
};

inline StructureSheafReport sheaf_check_structure(const Cover& c, const std::vector<Term>& candidates,
                                                  const Config& cfg, std::size_t point_count = 6) {
  StructureSheafReport rep;
  auto pts = detail::sheaf_points(c.base, c.elements, cfg, point_count);
  rep.points = pts.size();
  const std::size_t nc = candidates.size(), nl = c.elements.size();
  if (std::pow(static_cast<double>(nc), static_cast<double>(nl)) > static_cast<double>(cfg.budget))
    throw Error(ErrorKind::EnumerationOverflow, "candidate space exceeds the enumeration budget");
  std::vector<std::vector<double>> values(nc, std::vector<double>(pts.size()));
  for (std::size_t g = 0; g < nc; ++g)
    for (std::size_t p = 0; p < pts.size(); ++p) values[g][p] = eval_or_nan(candidates[g], pts[p]);
  std::vector<std::vector<bool>> in(nl, std::vector<bool>(pts.size()));
  for (std::size_t i = 0; i < nl; ++i)
    for (std::size_t p = 0; p < pts.size(); ++p) in[i][p] = detail::in_leg(c.elements[i], pts[p], cfg);
  auto close = [&](double x, double y) {
    return std::abs(x - y) <= cfg.tol * std::max({1.0, std::abs(x), std::abs(y)});
  };
  rep.separation = Verdict::supported(pts.size(), 0.0, "glued sections are unique");
  std::vector<std::size_t> pick(nl, 0);
  bool done = nc == 0;
  while (!done) {
    bool matching = true;
    for (std::size_t p = 0; p < pts.size() && matching; ++p)
      for (std::size_t i = 0; i < nl && matching; ++i)
        for (std::size_t j = i + 1; j < nl && matching; ++j)
          if (in[i][p] && in[j][p] && !close(values[pick[i]][p], values[pick[j]][p])) matching = false;
    if (matching) {
      ++rep.matching_families;
      std::vector<std::size_t> gluings;
      for (std::size_t g = 0; g < nc; ++g) {
        bool ok = true;
        for (std::size_t p = 0; p < pts.size() && ok; ++p)
          for (std::size_t i = 0; i < nl && ok; ++i)
            if (in[i][p] && !close(values[g][p], values[pick[i]][p])) ok = false;
        if (ok) gluings.push_back(g);
      }
      if (gluings.empty()) ++rep.unglued_among_candidates;
      else ++rep.glued;
      for (std::size_t x = 1; x < gluings.size(); ++x)
        for (std::size_t p = 0; p < pts.size(); ++p)
          if (!close(values[gluings[0]][p], values[gluings[x]][p]) && rep.separation.holds())
            rep.separation = Verdict::refuted(pts[p], std::abs(values[gluings[0]][p] - values[gluings[x]][p]),
                                              "two global sections restrict to the same family");
    }
    std::size_t pos = 0;
    while (pos < nl && ++pick[pos] == nc) pick[pos++] = 0;
    if (pos == nl) done = true;
  }
  return rep;
}

}  // namespace smoothring
