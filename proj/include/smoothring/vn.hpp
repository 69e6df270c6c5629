#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smoothring/models.hpp"

namespace smoothring {

/// σ as left-to-right rewrites on top of the polynomial normal form.
/// (x*)* → x is deliberately not a rule.
inline Term star_normalize(const Term& t) { return Normalizer(true).normalize(t); }

/// Field semantics over ℚ: x* = 1/x, 0* = 0.  Primitives have no exact
/// rational value.
struct ExactAlgebra {
  Rational constant(const Rational& r) const { return r; }
  Rational add(const Rational& a, const Rational& b) const { return a + b; }
  Rational mul(const Rational& a, const Rational& b) const { return a * b; }
  Rational neg(const Rational& a) const { return -a; }
  Rational prim(Prim, const Rational&) const {
    throw Error(ErrorKind::InvalidArgument, "primitives have no exact rational value");
  }
  Rational star(const Rational& x) const { return x == 0 ? Rational(0) : Rational(1 / x); }
};

inline bool has_prim(const Term& t) {
  if (t.kind() == Kind::Prim) return true;
  for (const Term& a : t.args())
    if (has_prim(a)) return true;
  return false;
}

/// StarTerm in a vN model: Reals or ProductOfReals, star pointwise.
inline ModelRing::Value interpret_star(const ModelRing& r, const Term& t,
                                       std::span<const ModelRing::Value> args) {
  if (!r.has_star()) throw Error(ErrorKind::InvalidArgument, "model carries no quasi-inverse");
  check_arity(t, args.size());
  ModelRing::Value out(r.carrier_size());
  Point p(args.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    for (std::size_t i = 0; i < args.size(); ++i) p[i] = args[i][c];
    out[c] = evaluate<double>(t, std::span<const double>(p), RealAlgebra{true});
  }
  return out;
}

struct SigmaReport {
  std::size_t checked = 0;
  std::size_t exact_checked = 0;
  std::size_t exact_mismatches = 0;
  std::size_t approximate_mismatches = 0;
  std::size_t discarded = 0;  // overflowed 1/x
  std::optional<Point> witness;
  Verdict verdict;
};

namespace detail {
inline Rational sample_rational(Rng& rng) {
  // zeros are frequent on purpose: that is where 0* = 0 matters
  if (rng.below(4) == 0) return 0;
  long num = static_cast<long>(rng.below(13)) - 6;
  long den = static_cast<long>(rng.below(4)) + 1;
  return Rational(num, den);
}
}  // namespace detail

/// Checks eval(star_normalize(t)) = eval(t) in a vN model.  Terms without
/// primitives are compared exactly over ℚ, coordinatewise; the rest in
/// doubles at relative tolerance `cfg.tol`.
inline SigmaReport sigma_soundness(const std::vector<Term>& terms, const ModelRing& r,
                                   std::size_t samples_per_term, const Config& cfg) {
  if (!r.has_star()) throw Error(ErrorKind::InvalidArgument, "model carries no quasi-inverse");
  SigmaReport rep;
  Rng rng(derive_seed(cfg.seed, "sigma:" + r.describe()));
  for (const Term& t : terms) {
    Term n = star_normalize(t);
    const std::size_t ar = std::max(t.arity(), n.arity());
    const bool exact = !has_prim(t);
    for (std::size_t s = 0; s < samples_per_term; ++s) {
      ++rep.checked;
      std::vector<ModelRing::Value> args(ar, ModelRing::Value(r.carrier_size()));
      std::vector<std::vector<Rational>> qargs(r.carrier_size(), std::vector<Rational>(ar));
      for (std::size_t i = 0; i < ar; ++i)
        for (std::size_t c = 0; c < r.carrier_size(); ++c) {
          qargs[c][i] = detail::sample_rational(rng);
          args[i][c] = to_double(qargs[c][i]);
        }
      if (exact) {
        ++rep.exact_checked;
        for (std::size_t c = 0; c < r.carrier_size(); ++c) {
          std::span<const Rational> q(qargs[c]);
          if (evaluate<Rational>(t, q, ExactAlgebra{}) != evaluate<Rational>(n, q, ExactAlgebra{})) {
            ++rep.exact_mismatches;
            if (!rep.witness) rep.witness = args.empty() ? Point{} : args[0];
            break;
          }
        }
        continue;
      }
      auto a = interpret_star(r, t, args), b = interpret_star(r, n, args);
      if (!is_finite(a) || !is_finite(b)) {
        ++rep.discarded;
        continue;
      }
      if (!values_close(a, b, cfg.tol)) {
        ++rep.approximate_mismatches;
        if (!rep.witness) rep.witness = args.empty() ? Point{} : args[0];
      }
    }
  }
  if (rep.exact_mismatches + rep.approximate_mismatches > 0)
    rep.verdict = Verdict::refuted(*rep.witness, 0.0, "star normalization changed a value");
  else
    rep.verdict = Verdict::supported(rep.checked, 0.0, "normal forms agree on all samples");
  return rep;
}

/// Every a has x with a = a²x.
inline Verdict vn_check(const ModelRing& r, const Config& cfg, std::size_t samples = 200) {
  if (!r.has_star()) {
    // ε is nilpotent: a² = 0, so a = a²x forces a = 0.
    auto layout = JetLayout::get(r.vars(), r.order());
    Jet eps = Jet::variable(layout, 0, 0.0);
    ModelRing::Value w(eps.coefficients().begin(), eps.coefficients().end());
    return Verdict::refuted(w, 0.0, "nonzero nilpotent: a = eps has a^2 = 0");
  }
  Rng rng(derive_seed(cfg.seed, "vn:" + r.describe()));
  for (std::size_t s = 0; s < samples; ++s) {
    ModelRing::Value a = r.random(rng, 3.0);
    for (double& x : a)
      if (rng.below(3) == 0) x = 0.0;
    ModelRing::Value x = r.star(a);
    ModelRing::Value back = r.mul(r.mul(a, a), x);
    if (!values_close(back, a, 1e-12)) return Verdict::refuted(a, 0.0, "a != a^2 a*");
  }
  Verdict v = Verdict::proven("pointwise quasi-inverse of a product of fields");
  v.samples = samples;
  return v;
}

/// e = a·a*: the idempotent generating ⟨a⟩.
inline ModelRing::Value idempotent_of(const ModelRing& r, const ModelRing::Value& a) {
  return r.mul(a, r.star(a));
}

struct VnLawReport {
  std::size_t samples = 0;
  std::size_t double_star_failures = 0;  // (x*)* = x
  std::size_t idempotent_failures = 0;   // e² = e, a·a*·a = a, e·a = a
  Verdict verdict;
};

/// Derived laws checked on sampled carrier values (exact on dyadic data).
inline VnLawReport vn_laws(const ModelRing& r, const Config& cfg, std::size_t samples) {
  VnLawReport rep;
  Rng rng(derive_seed(cfg.seed, "vn-laws:" + r.describe()));
  std::optional<Point> bad;
  for (std::size_t s = 0; s < samples; ++s) {
    ModelRing::Value a(r.carrier_size());
    for (double& x : a) x = to_double(detail::sample_rational(rng));
    ++rep.samples;
    if (r.star(r.star(a)) != a) {
      ++rep.double_star_failures;
      if (!bad) bad = a;
    }
    auto e = idempotent_of(r, a);
    bool ok = r.mul(e, e) == e && values_close(r.mul(r.mul(a, r.star(a)), a), a, 1e-15) &&
              values_close(r.mul(e, a), a, 1e-15);
    if (!ok) {
      ++rep.idempotent_failures;
      if (!bad) bad = a;
    }
  }
  rep.verdict = bad ? Verdict::refuted(*bad, 0.0, "a derived vN law failed")
                    : Verdict::supported(rep.samples, 0.0, "(x*)* = x and e^2 = e on all samples");
  return rep;
}

/// A homomorphism ℝᵏ → ℝᵐ that copies coordinates: output j is input
/// index[j].  Projections, diagonals and permutations are of this form.
struct CoordinateMap {
  std::size_t source = 1;
  std::vector<std::size_t> index;

  std::size_t target() const { return index.size(); }

  ModelRing::Value operator()(const ModelRing::Value& a) const {
    ModelRing::Value out;
    for (std::size_t i : index) out.push_back(a.at(i));
    return out;
  }

  static CoordinateMap projection(std::size_t k, std::size_t i) { return {k, {i}}; }
  static CoordinateMap diagonal(std::size_t m) { return {1, std::vector<std::size_t>(m, 0)}; }
};

/// second ∘ first
inline CoordinateMap compose(const CoordinateMap& second, const CoordinateMap& first) {
  if (second.source != first.target())
    throw Error(ErrorKind::SourceMismatch, "coordinate maps do not compose");
  CoordinateMap out{first.source, {}};
  for (std::size_t i : second.index) out.index.push_back(first.index.at(i));
  return out;
}

/// h(x*) = h(x)* on sampled values.  Samples include images of random
/// smooth terms so "evaluate then project" composites are exercised.
inline Verdict star_hom_check(const CoordinateMap& h, const Config& cfg, std::size_t samples = 200) {
  for (std::size_t i : h.index)
    if (i >= h.source) throw Error(ErrorKind::ArityMismatch, "coordinate index out of range");
  ModelRing src = ModelRing::product(h.source), dst = ModelRing::product(std::max<std::size_t>(1, h.target()));
  Rng rng(derive_seed(cfg.seed, "star-hom"));
  TermGenerator gen{2, 2, true, false};
  for (std::size_t s = 0; s < samples; ++s) {
    ModelRing::Value a;
    if (s % 2 == 0) {
      a = src.random(rng, 3.0);
      for (double& x : a)
        if (rng.below(3) == 0) x = 0.0;
    } else {
      std::vector<ModelRing::Value> args{src.random(rng, 1.0), src.random(rng, 1.0)};
      a = src.interpret(gen(rng), args);
      if (!is_finite(a)) continue;
    }
    if (h.target() == 0) continue;
    if (h(src.star(a)) != dst.star(h(a))) return Verdict::refuted(a, 0.0, "h(a*) != h(a)*");
  }
  Verdict v = Verdict::proven("coordinate maps commute with the pointwise star");
  v.samples = samples;
  return v;
}

}  // namespace smoothring
