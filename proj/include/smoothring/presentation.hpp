#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smoothring/certificate.hpp"
#include "smoothring/error.hpp"
#include "smoothring/eval.hpp"
#include "smoothring/normalize.hpp"
#include "smoothring/term.hpp"

namespace smoothring {

/// A finitely presented C∞-ring C∞(ℝⁿ)/⟨f₁…f_k⟩.
struct Presentation {
  std::size_t arity = 0;
  std::vector<Term> relations;
  std::string name;

  Presentation() = default;
  Presentation(std::size_t n, std::vector<Term> rels, std::string display = {})
      : arity(n), relations(std::move(rels)), name(std::move(display)) {
    for (const Term& f : relations) {
      if (f.has_star()) throw Error(ErrorKind::InvalidArgument, "relations must be smooth terms");
      check_arity(f, arity, "relation");
    }
  }

  /// C∞(ℝⁿ) with no relations.
  static Presentation free(std::size_t n, std::string display = {}) {
    return Presentation(n, {}, std::move(display));
  }
  /// The zero ring: arity 0 and the relation 1.
  static Presentation trivial(std::string display = "0") {
    return Presentation(0, {cnst(1)}, std::move(display));
  }

  /// Same generators and relation list; names are ignored.
  friend bool operator==(const Presentation& a, const Presentation& b) {
    return a.arity == b.arity && a.relations == b.relations;
  }
};

/// Residue class of a term in a presentation.
struct Element {
  Presentation ambient;
  Term term;

  Element(Presentation a, Term t) : ambient(std::move(a)), term(std::move(t)) {
    check_arity(term, ambient.arity, "element");
  }
};

/// A C∞-homomorphism C∞(ℝⁿ)/⟨f⟩ → C∞(ℝᵐ)/⟨g⟩ given by the images of the
/// n generators, with optional witnesses fⱼ∘φ ∈ ⟨g⟩.
struct Morphism {
  Presentation source;
  Presentation target;
  std::vector<Term> components;
  std::vector<std::optional<IdealCertificate>> certificates;

  Morphism() = default;
  Morphism(Presentation src, Presentation dst, std::vector<Term> comps,
           std::vector<std::optional<IdealCertificate>> certs = {})
      : source(std::move(src)), target(std::move(dst)), components(std::move(comps)),
        certificates(std::move(certs)) {
    if (components.size() != source.arity)
      throw Error(ErrorKind::ArityMismatch, "morphism needs " + std::to_string(source.arity) +
                                                " components, got " +
                                                std::to_string(components.size()));
    for (const Term& c : components) {
      if (c.has_star()) throw Error(ErrorKind::InvalidArgument, "components must be smooth terms");
      check_arity(c, target.arity, "component");
    }
    certificates.resize(source.relations.size());
    for (const auto& c : certificates)
      if (c && c->multipliers.size() != target.relations.size())
        throw Error(ErrorKind::ArityMismatch, "certificate length must equal the target relation count");
  }

  /// Image of an element of the source: t ∘ φ.
  Term operator()(const Term& t) const { return substitute(t, components); }

  /// fⱼ ∘ φ for each source relation.
  std::vector<Term> pulled_relations() const {
    std::vector<Term> out;
    for (const Term& f : source.relations) out.push_back((*this)(f));
    return out;
  }

  bool all_certified() const {
    for (const auto& c : certificates)
      if (!c) return false;
    return true;
  }
};

inline IdealCertificate unit_certificate(std::size_t length, std::size_t which) {
  IdealCertificate c;
  for (std::size_t i = 0; i < length; ++i) c.multipliers.push_back(cnst(i == which ? 1 : 0));
  return c;
}

inline Morphism identity(const Presentation& p) {
  std::vector<Term> comps;
  for (std::size_t i = 0; i < p.arity; ++i) comps.push_back(var(i));
  std::vector<std::optional<IdealCertificate>> certs;
  for (std::size_t j = 0; j < p.relations.size(); ++j)
    certs.emplace_back(unit_certificate(p.relations.size(), j));
  return Morphism(p, p, std::move(comps), std::move(certs));
}

/// second ∘ first.  Certificates compose when both sides carry them.
inline Morphism compose(const Morphism& second, const Morphism& first) {
  if (!(first.target == second.source))
    throw Error(ErrorKind::SourceMismatch, "composite is not defined: codomain and domain differ");
  std::vector<Term> comps;
  for (const Term& c : first.components) comps.push_back(normalize(second(c)));
  std::vector<std::optional<IdealCertificate>> certs(first.source.relations.size());
  if (second.all_certified()) {
    const std::size_t t = second.target.relations.size();
    for (std::size_t j = 0; j < certs.size(); ++j) {
      if (!first.certificates[j]) continue;
      IdealCertificate c;
      for (std::size_t r = 0; r < t; ++r) {
        Polynomial acc;
        for (std::size_t l = 0; l < first.certificates[j]->multipliers.size(); ++l)
          acc += to_poly(second(first.certificates[j]->multipliers[l])) *
                 to_poly(second.certificates[l]->multipliers[r]);
        c.multipliers.push_back(to_term(acc));
      }
      certs[j] = std::move(c);
    }
  }
  return Morphism(first.source, second.target, std::move(comps), std::move(certs));
}

}  // namespace smoothring
