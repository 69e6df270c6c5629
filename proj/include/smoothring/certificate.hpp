#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "smoothring/normalize.hpp"
#include "smoothring/term.hpp"

namespace smoothring {

/// Witness that a term lies in the ideal ⟨g₁…g_t⟩: target = Σ hₗ·gₗ.
struct IdealCertificate {
  std::vector<Term> multipliers;
};

/// Syntactic check of target − Σ hₗgₗ ≡ 0 in the polynomial normal form.
inline bool certifies(const Term& target, std::span<const Term> generators,
                      const IdealCertificate& cert) {
  if (cert.multipliers.size() != generators.size()) return false;
  Polynomial p = to_poly(target);
  for (std::size_t l = 0; l < generators.size(); ++l)
    p -= to_poly(cert.multipliers[l]) * to_poly(generators[l]);
  return p.is_zero();
}

/// All monomials of total degree ≤ `degree` over `atoms`, in a fixed order.
inline std::vector<Monomial> template_monomials(const std::vector<Term>& atoms, unsigned degree) {
  std::vector<Monomial> out{Monomial{}};
  std::vector<Monomial> frontier{Monomial{}};
  for (unsigned d = 1; d <= degree; ++d) {
    std::vector<Monomial> next;
    for (const Monomial& m : frontier) {
      // extend only with atoms ≥ the last one to avoid permutations
      std::size_t start = 0;
      if (!m.empty()) {
        auto it = std::find(atoms.begin(), atoms.end(), m.back().first);
        start = static_cast<std::size_t>(it - atoms.begin());
      }
      for (std::size_t a = start; a < atoms.size(); ++a)
        next.push_back(monomial_product(m, Monomial{{atoms[a], 1u}}));
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

/// Exact sparse elimination: finds rationals c with Σ c_k·basis_k = target,
/// if the target lies in the span.
inline std::optional<std::vector<Rational>> solve_combination(std::span<const Polynomial> basis,
                                                              const Polynomial& target) {
  struct Row {
    Polynomial vec;
    std::map<std::size_t, Rational> combo;
  };
  std::map<Monomial, Row, MonomialLess> pivots;  // keyed by leading monomial

  auto reduce = [&](Polynomial& v, std::map<std::size_t, Rational>& combo) {
    while (!v.is_zero()) {
      const auto& [lead, coef] = *v.terms().rbegin();
      auto it = pivots.find(lead);
      if (it == pivots.end()) return;
      Rational f = coef / it->second.vec.terms().rbegin()->second;
      v -= it->second.vec.scaled(f);
      for (const auto& [k, c] : it->second.combo) {
        Rational& slot = combo[k];
        slot -= f * c;
        if (slot == 0) combo.erase(k);
      }
    }
  };

  for (std::size_t k = 0; k < basis.size(); ++k) {
    Polynomial v = basis[k];
    std::map<std::size_t, Rational> combo{{k, Rational(1)}};
    reduce(v, combo);
    if (v.is_zero()) continue;
    Monomial lead = v.terms().rbegin()->first;
    pivots.emplace(std::move(lead), Row{std::move(v), std::move(combo)});
  }

  // target = Σ f_b·row_b  ⇒  remainder = target − Σ f_b·row_b = 0
  Polynomial rest = target;
  std::map<std::size_t, Rational> combo;
  reduce(rest, combo);
  if (!rest.is_zero()) return std::nullopt;
  std::vector<Rational> out(basis.size(), Rational(0));
  for (const auto& [k, c] : combo) out[k] = -c;
  return out;
}

/// Atoms available to templates: the n generators plus every non-variable
/// atom of the given terms.
inline std::vector<Term> template_atoms(std::size_t n, std::span<const Term> terms) {
  std::set<Term> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.insert(var(i));
  for (const Term& t : terms)
    for (const Term& a : to_poly(t).atoms()) atoms.insert(a);
  return {atoms.begin(), atoms.end()};
}

inline Term combination_term(std::span<const Monomial> monos, std::span<const Rational> coefs) {
  Polynomial p;
  for (std::size_t i = 0; i < monos.size(); ++i) p.add_term(monos[i], coefs[i]);
  return to_term(p);
}

/// Bounded template search for target ∈ ⟨generators⟩ with multipliers that
/// are polynomials of degree ≤ `max_degree` in the available atoms.
/// `max_unknowns` caps the size of the linear system.
inline std::optional<IdealCertificate> search_certificate(const Term& target,
                                                          std::span<const Term> generators,
                                                          std::size_t n, unsigned max_degree,
                                                          std::size_t max_unknowns = 1500) {
  Polynomial tp = to_poly(target);
  if (tp.is_zero()) return IdealCertificate{std::vector<Term>(generators.size(), cnst(0))};
  if (generators.empty()) return std::nullopt;
  std::vector<Term> all(generators.begin(), generators.end());
  all.push_back(target);
  auto atoms = template_atoms(n, all);
  std::vector<Polynomial> gen_polys;
  for (const Term& g : generators) gen_polys.push_back(to_poly(g));
  for (unsigned d = 0; d <= max_degree; ++d) {
    auto monos = template_monomials(atoms, d);
    if (monos.size() * generators.size() > max_unknowns) break;
    std::vector<Polynomial> basis;
    for (const Polynomial& g : gen_polys)
      for (const Monomial& m : monos) basis.push_back(Polynomial::of(m, 1) * g);
    if (auto sol = solve_combination(basis, tp)) {
      IdealCertificate cert;
      for (std::size_t l = 0; l < generators.size(); ++l)
        cert.multipliers.push_back(combination_term(
            monos, std::span<const Rational>(*sol).subspan(l * monos.size(), monos.size())));
      return cert;
    }
  }
  return std::nullopt;
}

}  // namespace smoothring
