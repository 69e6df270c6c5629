#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smoothring/generate.hpp"
#include "smoothring/jet.hpp"
#include "smoothring/site.hpp"

namespace smoothring {

enum class ModelKind { Reals, ProductOfReals, JetAlgebra };

/// A C∞-ring in Set: ℝ, ℝᵏ, or the truncated jets ℝ[ε₁…ε_v]/(ε)^{k+1}.
/// Carrier values are flat coefficient vectors.
class ModelRing {
 public:
  using Value = std::vector<double>;

  static ModelRing reals() { return ModelRing(ModelKind::Reals, 1, 0, 0); }
  static ModelRing product(std::size_t k) {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "a product model needs k >= 1");
    return ModelRing(ModelKind::ProductOfReals, k, 0, 0);
  }
  static ModelRing jet(std::size_t vars, unsigned order) {
    return ModelRing(ModelKind::JetAlgebra, JetLayout::get(vars, order)->size(), vars, order);
  }

  ModelKind kind() const { return kind_; }
  std::size_t carrier_size() const { return size_; }
  std::size_t vars() const { return vars_; }
  unsigned order() const { return order_; }

  std::string describe() const {
    switch (kind_) {
      case ModelKind::Reals: return "(model reals)";
      case ModelKind::ProductOfReals: return "(model prod " + std::to_string(size_) + ")";
      case ModelKind::JetAlgebra:
        return "(model jet :vars " + std::to_string(vars_) + " :order " + std::to_string(order_) + ")";
    }
    return "?";
  }

  Value constant(double c) const {
    Value v(size_, 0.0);
    if (kind_ == ModelKind::ProductOfReals) std::fill(v.begin(), v.end(), c);
    else v[0] = c;
    return v;
  }

  /// t^{(R)} applied to carrier values.
  Value interpret(const Term& t, std::span<const Value> args) const {
    check_arity(t, args.size());
    for (const Value& a : args)
      if (a.size() != size_) throw Error(ErrorKind::ArityMismatch, "carrier value has the wrong size");
    switch (kind_) {
      case ModelKind::Reals:
      case ModelKind::ProductOfReals: {
        Value out(size_);
        Point p(args.size());
        for (std::size_t c = 0; c < size_; ++c) {
          for (std::size_t i = 0; i < args.size(); ++i) p[i] = args[i][c];
          out[c] = evaluate<double>(t, std::span<const double>(p), RealAlgebra{false});
        }
        return out;
      }
      case ModelKind::JetAlgebra: {
        auto layout = JetLayout::get(vars_, order_);
        std::vector<Jet> js;
        for (const Value& a : args) {
          Jet j(layout);
          std::copy(a.begin(), a.end(), j.coefficients().begin());
          js.push_back(std::move(j));
        }
        Jet r = interpret_jet(t, js, layout);
        return Value(r.coefficients().begin(), r.coefficients().end());
      }
    }
    return {};
  }

  Value add(const Value& a, const Value& b) const { return interpret(var(0) + var(1), pair(a, b)); }
  Value sub(const Value& a, const Value& b) const { return interpret(var(0) - var(1), pair(a, b)); }
  Value mul(const Value& a, const Value& b) const { return interpret(var(0) * var(1), pair(a, b)); }

  /// Reals: a ≠ 0; products: every coordinate ≠ 0; jets: constant part ≠ 0.
  bool is_unit(const Value& a) const {
    if (kind_ == ModelKind::ProductOfReals)
      return std::all_of(a.begin(), a.end(), [](double x) { return x != 0.0; });
    return a[0] != 0.0;
  }

  /// Inverse of a unit (jets via the geometric series).
  Value inverse(const Value& a) const {
    if (!is_unit(a)) throw Error(ErrorKind::InvalidArgument, "not a unit");
    if (kind_ != ModelKind::JetAlgebra) {
      Value out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = 1.0 / a[i];
      return out;
    }
    auto layout = JetLayout::get(vars_, order_);
    Jet j(layout);
    std::copy(a.begin(), a.end(), j.coefficients().begin());
    std::vector<double> taylor(order_ + 1);
    double c = a[0];
    for (unsigned k = 0; k <= order_; ++k) taylor[k] = (k % 2 ? -1.0 : 1.0) / std::pow(c, k + 1);
    Jet r = j.compose(taylor);
    return Value(r.coefficients().begin(), r.coefficients().end());
  }

  bool has_star() const { return kind_ != ModelKind::JetAlgebra || order_ == 0; }

  /// Pointwise quasi-inverse: 1/x, or 0 at 0.
  Value star(const Value& a) const {
    if (!has_star()) throw Error(ErrorKind::InvalidArgument, "model carries no quasi-inverse");
    Value out(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] == 0.0 ? 0.0 : 1.0 / a[i];
    return out;
  }

  Value random(Rng& rng, double box) const {
    Value v(size_);
    for (double& x : v) x = rng.uniform(-box, box);
    return v;
  }

  /// Embeds a real point coordinatewise (product) or as constant jets.
  Value embed(double x) const { return constant(x); }

  friend bool operator==(const ModelRing& a, const ModelRing& b) {
    return a.kind_ == b.kind_ && a.size_ == b.size_ && a.vars_ == b.vars_ && a.order_ == b.order_;
  }

 private:
  ModelRing(ModelKind k, std::size_t size, std::size_t vars, unsigned order)
      : kind_(k), size_(size), vars_(vars), order_(order) {}

  static std::vector<Value> pair(const Value& a, const Value& b) { return {a, b}; }

  ModelKind kind_;
  std::size_t size_;
  std::size_t vars_;
  unsigned order_;
};

inline bool values_close(std::span<const double> a, std::span<const double> b, double rel) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
    if (!(std::abs(a[i] - b[i]) <= rel * scale)) return false;
  }
  return true;
}

inline bool all_finite(const std::vector<ModelRing::Value>& vs) {
  return std::all_of(vs.begin(), vs.end(), [](const auto& v) { return is_finite(v); });
}

// ---------------------------------------------------------------------------
// Structure axioms

struct AxiomReport {
  std::size_t samples = 0;
  std::size_t discarded = 0;  // non-finite intermediate values
  bool projection_exact = true;
  double composition_max_rel = 0.0;
  Verdict verdict;
};

/// Projection axiom (exact) and composition axiom (relative tolerance) on
/// seeded random terms and carrier values.
inline AxiomReport check_axioms(const ModelRing& r, const Config& cfg, std::size_t samples = 200,
                                double rel = 1e-9) {
  AxiomReport rep;
  Rng rng(derive_seed(cfg.seed, "axioms:" + r.describe()));
  const std::size_t m = 2, n = 3;
  TermGenerator outer{m, 3, true, false};
  TermGenerator inner{n, 2, true, false};
  std::optional<Point> bad;
  while (rep.samples < samples) {
    std::vector<ModelRing::Value> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(r.random(rng, 1.0));
    std::size_t i = rng.below(n);
    if (r.interpret(var(i), xs) != xs[i]) {
      rep.projection_exact = false;
      if (!bad) bad = xs[i];
    }
    Term f = outer(rng);
    std::vector<Term> gs{inner(rng), inner(rng)};
    std::vector<ModelRing::Value> inner_vals;
    for (const Term& g : gs) inner_vals.push_back(r.interpret(g, xs));
    ModelRing::Value lhs = r.interpret(f, inner_vals);
    ModelRing::Value rhs = r.interpret(substitute(f, gs), xs);
    if (!all_finite(inner_vals) || !is_finite(lhs) || !is_finite(rhs)) {
      ++rep.discarded;
      continue;
    }
    ++rep.samples;
    for (std::size_t c = 0; c < lhs.size(); ++c) {
      double e = std::abs(lhs[c] - rhs[c]) / std::max({1.0, std::abs(lhs[c]), std::abs(rhs[c])});
      rep.composition_max_rel = std::max(rep.composition_max_rel, e);
    }
    if (!values_close(lhs, rhs, rel) && !bad) bad = xs[0];
  }
  if (bad)
    rep.verdict = Verdict::refuted(*bad, rep.composition_max_rel, "structure axiom violated");
  else
    rep.verdict = Verdict::supported(rep.samples, rep.composition_max_rel,
                                     "projection exact, composition within tolerance");
  return rep;
}

// ---------------------------------------------------------------------------
// φ_R

/// φ_R(A) ↣ Rⁿ: the membership predicate, plus an enumeration when the
/// solution set is finite and found completely.
struct PhiObject {
  using Solution = std::vector<ModelRing::Value>;

  ModelRing model;
  Presentation presentation;
  double tolerance = 0.0;
  std::optional<std::vector<Solution>> enumeration;
  std::string overflow_reason;

  bool contains(const Solution& x) const {
    if (x.size() != presentation.arity) return false;
    for (const Term& f : presentation.relations) {
      auto v = model.interpret(f, x);
      for (double c : v)
        if (!(std::abs(c) <= tolerance)) return false;
    }
    return true;
  }

  const std::vector<Solution>& solutions() const {
    if (!enumeration) throw Error(ErrorKind::EnumerationOverflow, overflow_reason);
    return *enumeration;
  }

  std::optional<std::size_t> index_of(const Solution& x, double radius) const {
    const auto& sols = solutions();
    for (std::size_t i = 0; i < sols.size(); ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) d = std::max(d, distance(sols[i][j], x[j]));
      if (d <= radius) return i;
    }
    return std::nullopt;
  }
};

inline double membership_tolerance(const Config& cfg) {
  return std::max(cfg.tol, std::sqrt(cfg.zero_threshold));
}

inline ZeroEnumeration real_solutions(const Presentation& a, const Config& cfg) {
  std::string label = "phi:" + std::to_string(a.arity);
  for (const Term& f : a.relations) label += to_sexpr(f);
  return enumerate_zero_set(a.relations, a.arity, cfg, derive_seed(cfg.seed, label),
                            std::max<std::size_t>(cfg.samples, 64));
}

/// Builds φ_R(A).  Real roots are found by multi-start search; ℝᵏ-points
/// are k-tuples of them.  In jet models a root with invertible Jacobian
/// lifts uniquely to the constant jet, so complete nondegenerate real
/// enumerations give the jet solutions too.
inline PhiObject phi_object(const ModelRing& r, const Presentation& a, const Config& cfg) {
  PhiObject phi{r, a, membership_tolerance(cfg), std::nullopt, {}};
  auto real = real_solutions(a, cfg);
  if (!real.complete) {
    phi.overflow_reason = real.overflow ? "root enumeration exceeded the budget"
                                        : "zero set has non-isolated points";
    return phi;
  }
  if (r.kind() == ModelKind::JetAlgebra && a.relations.size() < a.arity && !real.points.empty()) {
    phi.overflow_reason = "jet lifts are not unique";
    return phi;
  }
  const std::size_t k = r.kind() == ModelKind::ProductOfReals ? r.carrier_size() : 1;
  double count = std::pow(static_cast<double>(real.points.size()), static_cast<double>(k));
  if (count > static_cast<double>(cfg.budget)) {
    phi.overflow_reason = "solution count exceeds the budget";
    return phi;
  }
  std::vector<PhiObject::Solution> sols;
  std::vector<std::size_t> idx(k, 0);
  const std::size_t np = real.points.size();
  for (bool more = np > 0; more;) {
    PhiObject::Solution s(a.arity, ModelRing::Value(r.carrier_size(), 0.0));
    for (std::size_t i = 0; i < a.arity; ++i) {
      if (r.kind() == ModelKind::ProductOfReals)
        for (std::size_t c = 0; c < k; ++c) s[i][c] = real.points[idx[c]][i];
      else
        s[i] = r.embed(real.points[idx[0]][i]);
    }
    sols.push_back(std::move(s));
    std::size_t pos = 0;
    while (pos < k && ++idx[pos] == np) idx[pos++] = 0;
    more = pos < k;
  }
  phi.enumeration = std::move(sols);
  return phi;
}

/// φ_R(Φ): φ_R(B) → φ_R(A) for Φ: A → B, y ↦ (Φ₁(y), …, Φ_n(y)).
inline PhiObject::Solution phi_apply(const ModelRing& r, const Morphism& m,
                                     const PhiObject::Solution& y, const Config& cfg) {
  if (y.size() != m.target.arity)
    throw Error(ErrorKind::ArityMismatch, "solution has the wrong number of coordinates");
  PhiObject::Solution x;
  for (const Term& c : m.components) x.push_back(r.interpret(c, y));
  PhiObject check{r, m.source, membership_tolerance(cfg), std::nullopt, {}};
  if (!check.contains(x)) {
    std::vector<double> w;
    for (const auto& v : y) w.insert(w.end(), v.begin(), v.end());
    throw Error(ErrorKind::RelationViolation, "image violates the source relations", w);
  }
  return x;
}

/// φ_R(Φ) as an index map between enumerations.
inline std::vector<std::size_t> phi_index_map(const ModelRing& r, const Morphism& m,
                                              const PhiObject& target, const PhiObject& source,
                                              const Config& cfg) {
  std::vector<std::size_t> out;
  for (const auto& y : target.solutions()) {
    auto x = phi_apply(r, m, y, cfg);
    auto i = source.index_of(x, 1e3 * cfg.dedup_radius);
    if (!i) throw Error(ErrorKind::RelationViolation, "image is not among the enumerated solutions");
    out.push_back(*i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Locality

/// (∀a)(a invertible ∨ 1−a invertible).
inline Verdict is_local(const ModelRing& r, const Config& cfg, std::size_t samples = 200) {
  if (r.kind() == ModelKind::ProductOfReals && r.carrier_size() >= 2) {
    ModelRing::Value w(r.carrier_size(), 0.0);
    w[0] = 1.0;
    return Verdict::refuted(w, 0.0, "neither a nor 1-a is invertible");
  }
  // Closed form: the constant parts of a and 1−a sum to 1.  Sampled
  // values (with planted zero constant parts) corroborate it.
  Rng rng(derive_seed(cfg.seed, "local:" + r.describe()));
  for (std::size_t s = 0; s < samples; ++s) {
    ModelRing::Value a = r.random(rng, 2.0);
    if (s % 4 == 0) a[0] = 0.0;
    if (s % 4 == 1) a[0] = 1.0;
    ModelRing::Value b = r.sub(r.constant(1.0), a);
    const ModelRing::Value& u = std::abs(a[0]) >= std::abs(b[0]) ? a : b;
    if (!r.is_unit(u) || !values_close(r.mul(u, r.inverse(u)), r.constant(1.0), 1e-9))
      return Verdict::refuted(a, 0.0, "neither a nor 1-a is invertible");
  }
  Verdict v = Verdict::proven("a and 1-a cannot both have zero constant part");
  v.samples = samples;
  return v;
}

/// Points of φ_R(A) at which to test an epimorphic family: the complete
/// enumeration if there is one, otherwise zero-set samples (as k-tuples in
/// product models).
inline std::vector<PhiObject::Solution> epi_points(const ModelRing& r, const Presentation& a,
                                                   const std::vector<Term>& elems, const Config& cfg) {
  std::vector<Point> real;
  auto en = real_solutions(a, cfg);
  if (en.complete) {
    real = en.points;
  } else {
    auto s = sample_zero_set(a.relations, a.arity, cfg, cover_seed(cfg, "epi:", elems), cfg.samples);
    for (auto& z : s.points) real.push_back(z.point);
  }
  if (auto z = uncovered_point(a, elems, cfg)) real.push_back(z->point);
  // points where some element vanishes make non-locality visible
  for (const Term& e : elems) {
    std::vector<Term> sys = a.relations;
    sys.push_back(e);
    if (auto z = find_common_zero(sys, a.arity, cfg, cover_seed(cfg, "epi-zero:", {e}), 64))
      real.push_back(z->point);
  }
  std::vector<PhiObject::Solution> pts;
  const std::size_t k = r.kind() == ModelKind::ProductOfReals ? r.carrier_size() : 1;
  std::vector<std::size_t> idx(k, 0);
  const std::size_t np = real.size();
  for (bool more = np > 0; more && pts.size() < cfg.budget;) {
    PhiObject::Solution s(a.arity, ModelRing::Value(r.carrier_size(), 0.0));
    for (std::size_t i = 0; i < a.arity; ++i) {
      if (k > 1)
        for (std::size_t c = 0; c < k; ++c) s[i][c] = real[idx[c]][i];
      else
        s[i] = r.embed(real[idx[0]][i]);
    }
    pts.push_back(std::move(s));
    std::size_t pos = 0;
    while (pos < k && ++idx[pos] == np) idx[pos++] = 0;
    more = pos < k;
  }
  return pts;
}

/// Every point of φ_R(A) lies in the image of some φ_R(A{aᵢ⁻¹}), i.e. some
/// aᵢ^{(R)} is invertible there.
inline Verdict epi_family_check(const ModelRing& r, const Presentation& a,
                                const std::vector<Term>& elems, const Config& cfg,
                                bool certified = false) {
  for (const Term& e : elems) check_arity(e, a.arity, "family element");
  auto pts = epi_points(r, a, elems, cfg);
  if (pts.empty()) {
    Verdict v = Verdict::supported(0, 0.0, "no points of the solution set were found");
    return v.flag(std::string(kNoSamplePoints));
  }
  for (const auto& p : pts) {
    bool hit = false;
    for (const Term& e : elems) {
      auto v = r.interpret(e, p);
      if (!is_finite(v)) continue;
      bool unit = r.kind() == ModelKind::ProductOfReals
                      ? std::all_of(v.begin(), v.end(), [&](double x) { return separates(x, 1.0, 0.0, cfg.tol); })
                      : separates(v[0], 1.0, 0.0, cfg.tol);
      if (unit) {
        hit = true;
        break;
      }
    }
    if (!hit) {
      std::vector<double> w;
      for (const auto& v : p) w.insert(w.end(), v.begin(), v.end());
      return Verdict::refuted(w, 0.0, "no family member is invertible at this point");
    }
  }
  if (certified && is_local(r, cfg, 16).is_proven()) {
    Verdict v = Verdict::proven("unimodularity certificate in a local model");
    v.samples = pts.size();
    return v;
  }
  return Verdict::supported(pts.size(), 0.0, "every sampled point is covered");
}

inline Verdict epi_family_check(const ModelRing& r, const Cover& c, const Config& cfg) {
  return epi_family_check(r, c.base, c.elements, cfg, c.verdict.is_proven());
}

// ---------------------------------------------------------------------------
// Left exactness

struct LexProductCase {
  std::string name;
  std::size_t left = 0, right = 0, product = 0;
  bool bijective = false;
};

struct LexCoeqCase {
  std::string name;
  std::size_t equalizer = 0, coequalizer = 0, difference_form = 0;
  bool equal = false;
};

struct LexReport {
  std::size_t terminal_points = 0;
  std::vector<LexProductCase> products;
  std::vector<LexCoeqCase> coequalizers;
  std::vector<std::string> failures;
  Verdict verdict;
};

namespace detail {

inline Presentation univariate(const char* name, const Term& rel) { return Presentation(1, {rel}, name); }

inline bool same_solution_sets(const PhiObject& a, const PhiObject& b, double radius) {
  const auto& sa = a.solutions();
  const auto& sb = b.solutions();
  if (sa.size() != sb.size()) return false;
  for (const auto& s : sa)
    if (!b.index_of(s, radius)) return false;
  return true;
}

}  // namespace detail

/// Terminal object, binary products, and coequalizer-to-equalizer
/// transport on a fixed corpus of small presentations.
inline LexReport left_exactness_suite(const ModelRing& r, const Config& cfg) {
  LexReport rep;
  const Term x = var(0), y = var(1);
  const double radius = 1e3 * cfg.dedup_radius;

  try {
    rep.terminal_points = phi_object(r, Presentation::free(0, "R0"), cfg).solutions().size();
  } catch (const Error& e) {
    rep.failures.push_back(std::string("terminal: ") + e.what());
  }
  if (rep.terminal_points != 1) rep.failures.push_back("terminal: not a single point");

  struct Pair {
    const char* name;
    Presentation a, b;
  };
  std::vector<Pair> pairs{
      {"x^2-1 (x) x^2-4", detail::univariate("A", x * x - cnst(1)), detail::univariate("B", x * x - cnst(4))},
      {"x^3-x (x) x^2-4", detail::univariate("A", x * x * x - x), detail::univariate("B", x * x - cnst(4))},
      {"x^2-1 (x) R^0", detail::univariate("A", x * x - cnst(1)), Presentation::free(0, "R0")},
      {"x^2+1 (x) x^2-1", detail::univariate("A", x * x + cnst(1)), detail::univariate("B", x * x - cnst(1))},
      {"circle.line (x) x^2-9", Presentation(2, {x * x + y * y - cnst(1), x - y}, "A"),
       detail::univariate("B", x * x - cnst(9))},
  };
  for (const auto& p : pairs) {
    LexProductCase pc{p.name};
    try {
      auto co = coproduct(p.a, p.b);
      auto pa = phi_object(r, p.a, cfg), pb = phi_object(r, p.b, cfg), pab = phi_object(r, co.object, cfg);
      pc.left = pa.solutions().size();
      pc.right = pb.solutions().size();
      pc.product = pab.solutions().size();
      auto ia = phi_index_map(r, co.left, pab, pa, cfg);
      auto ib = phi_index_map(r, co.right, pab, pb, cfg);
      std::set<std::pair<std::size_t, std::size_t>> seen;
      for (std::size_t i = 0; i < ia.size(); ++i) seen.emplace(ia[i], ib[i]);
      pc.bijective = pc.product == pc.left * pc.right && seen.size() == pc.product;
    } catch (const Error& e) {
      rep.failures.push_back(std::string(p.name) + ": " + e.what());
    }
    if (!pc.bijective) rep.failures.push_back(std::string(p.name) + ": product is not a bijection");
    rep.products.push_back(pc);
  }

  // Parallel pairs s, s′: C∞(ℝᵐ) → B with B = C∞(ℝ)/⟨x(x²−1)(x²−4)⟩.
  const Presentation b(1, {x * (x * x - cnst(1)) * (x * x - cnst(4))}, "B5");
  const Presentation free1 = Presentation::free(1, "F1"), free2 = Presentation::free(2, "F2");
  struct Par {
    const char* name;
    const Presentation* src;
    std::vector<Term> s, t;
  };
  std::vector<Par> pars{
      {"x^2 = 1", &free1, {x * x}, {cnst(1)}},
      {"x = -x", &free1, {x}, {-x}},
      {"x^3 = x", &free1, {x * x * x}, {x}},
      {"x^2 = x", &free1, {x * x}, {x}},
      {"x^2 = 4", &free1, {x * x}, {cnst(4)}},
      {"x = 3", &free1, {x}, {cnst(3)}},
      {"exp x = 1 + x", &free1, {apply(Prim::Exp, x)}, {cnst(1) + x}},
      {"sin x = x", &free1, {apply(Prim::Sin, x)}, {x}},
      {"cos x = 1", &free1, {apply(Prim::Cos, x)}, {cnst(1)}},
      {"atan x = x", &free1, {apply(Prim::Atan, x)}, {x}},
      {"tanh x^2 = tanh 1", &free1, {apply(Prim::Tanh, x * x)}, {apply(Prim::Tanh, cnst(1))}},
      {"(x, x^2) = (x^2, x)", &free2, {x, x * x}, {x * x, x}},
      {"(x^2, x^4) = (4, 16)", &free2, {x * x, x * x * x * x}, {cnst(4), cnst(16)}},
      {"(x, 0) = (x, x+2)", &free2, {x, cnst(0)}, {x, x + cnst(2)}},
  };
  try {
    auto phib = phi_object(r, b, cfg);
    for (const auto& p : pars) {
      LexCoeqCase cc{p.name};
      try {
        Morphism s(*p.src, b, p.s), t(*p.src, b, p.t);
        std::vector<Term> diff;
        for (std::size_t i = 0; i < p.s.size(); ++i) diff.push_back(p.s[i] - p.t[i]);
        Morphism d(*p.src, b, diff), zero(*p.src, b, std::vector<Term>(p.s.size(), cnst(0)));
        // equalizer of φ(s), φ(s′) inside φ(B)
        std::vector<PhiObject::Solution> eq;
        for (const auto& yv : phib.solutions()) {
          auto u = phi_apply(r, s, yv, cfg), v = phi_apply(r, t, yv, cfg);
          bool same = true;
          for (std::size_t i = 0; i < u.size() && same; ++i)
            for (std::size_t c = 0; c < u[i].size() && same; ++c)
              same = !separates(u[i][c] - v[i][c], std::abs(u[i][c]) + std::abs(v[i][c]), 0.0, cfg.tol);
          if (same) eq.push_back(yv);
        }
        PhiObject eqobj{r, b, phib.tolerance, eq, {}};
        auto q1 = phi_object(r, coequalizer(s, t).object, cfg);
        auto q2 = phi_object(r, coequalizer(d, zero).object, cfg);
        cc.equalizer = eq.size();
        cc.coequalizer = q1.solutions().size();
        cc.difference_form = q2.solutions().size();
        cc.equal = detail::same_solution_sets(eqobj, q1, radius) &&
                   detail::same_solution_sets(q1, q2, radius) &&
                   detail::same_solution_sets(q2, eqobj, radius);
      } catch (const Error& e) {
        rep.failures.push_back(std::string(p.name) + ": " + e.what());
      }
      if (!cc.equal) rep.failures.push_back(std::string(p.name) + ": equalizer mismatch");
      rep.coequalizers.push_back(cc);
    }
  } catch (const Error& e) {
    rep.failures.push_back(std::string("coequalizer base: ") + e.what());
  }

  if (rep.failures.empty()) {
    rep.verdict = Verdict::supported(rep.products.size() + rep.coequalizers.size() + 1, 0.0,
                                     "terminal, products and equalizers preserved");
  } else {
    rep.verdict = Verdict::refuted({}, 0.0, rep.failures.front());
  }
  return rep;
}

}  // namespace smoothring
