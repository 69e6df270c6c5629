#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "smoothring/error.hpp"
#include "smoothring/term.hpp"

namespace smoothring {

/// A product of atom powers.  Atoms are normalized Var, Prim and Star
/// terms; the vector is kept sorted by the term order.
using Monomial = std::vector<std::pair<Term, unsigned>>;

inline unsigned degree(const Monomial& m) {
  unsigned d = 0;
  for (const auto& [a, e] : m) d += e;
  return d;
}

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (unsigned da = degree(a), db = degree(b); da != db) return da < db;
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (auto c = a[i].first <=> b[i].first; c != 0) return c < 0;
      if (a[i].second != b[i].second) return a[i].second > b[i].second;
    }
    return a.size() < b.size();
  }
};

inline Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

/// Sparse polynomial with exact rational coefficients over atoms.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, MonomialLess>;

  Polynomial() = default;
  static Polynomial constant(const Rational& c) {
    Polynomial p;
    if (c != 0) p.terms_.emplace(Monomial{}, c);
    return p;
  }
  static Polynomial atom(const Term& a) {
    Polynomial p;
    p.terms_.emplace(Monomial{{a, 1u}}, Rational(1));
    return p;
  }
  static Polynomial of(const Monomial& m, const Rational& c) {
    Polynomial p;
    if (c != 0) p.terms_.emplace(m, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  std::optional<Rational> as_constant() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
    return std::nullopt;
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  Polynomial operator-() const {
    Polynomial p;
    for (const auto& [m, c] : terms_) p.terms_.emplace(m, -c);
    return p;
  }
  Polynomial scaled(const Rational& s) const {
    if (s == 0) return {};
    Polynomial p;
    for (const auto& [m, c] : terms_) p.terms_.emplace(m, c * s);
    return p;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial p;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) p.add_term(monomial_product(ma, mb), ca * cb);
    return p;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  std::set<Term> atoms() const {
    std::set<Term> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [a, e] : m) out.insert(a);
    return out;
  }

 private:
  Terms terms_;
};

inline Term monomial_term(const Monomial& m) {
  std::optional<Term> acc;
  for (const auto& [a, e] : m)
    for (unsigned i = 0; i < e; ++i) acc = acc ? *acc * a : a;
  return acc ? *acc : cnst(1);
}

/// Canonical term for a polynomial: a left-nested sum of monomials in
/// monomial order, each monomial `c·atoms` with unit coefficients elided
/// and -1 written as Neg.
inline Term to_term(const Polynomial& p) {
  if (p.is_zero()) return cnst(0);
  std::optional<Term> acc;
  for (const auto& [m, c] : p.terms()) {
    Term mono = [&] {
      if (m.empty()) return cnst(c);
      Term body = monomial_term(m);
      if (c == 1) return body;
      if (c == -1) return -body;
      return cnst(c) * body;
    }();
    acc = acc ? *acc + mono : mono;
  }
  return *acc;
}

/// Polynomial normal form over atoms.  Performs constant folding,
/// double-negation removal, flattening and ordering of sums and products,
/// identity and absorption laws, distribution and collection of like
/// monomials.  With `star_rules` it additionally rewrites
/// x·x*·x → x, x*·x·x* → x*, 0* → 0 and c* → 1/c.
class Normalizer {
 public:
  explicit Normalizer(bool star_rules = false, std::size_t max_terms = 200000)
      : star_rules_(star_rules), max_terms_(max_terms) {}

  Term normalize(const Term& t) const { return to_term(to_poly(t)); }

  Polynomial to_poly(const Term& t) const {
    switch (t.kind()) {
      case Kind::Var:
        return Polynomial::atom(t);
      case Kind::Const:
        return Polynomial::constant(t.value());
      case Kind::Add:
        return to_poly(t.arg(0)) + to_poly(t.arg(1));
      case Kind::Neg:
        return -to_poly(t.arg(0));
      case Kind::Mul:
        return product(t);
      case Kind::Prim: {
        Term arg = normalize(t.arg(0));
        if (arg.is_const(0)) return Polynomial::constant(prim_at_zero(t.primitive()));
        return Polynomial::atom(apply(t.primitive(), arg));
      }
      case Kind::Star: {
        Term arg = normalize(t.arg(0));
        if (star_rules_ && arg.kind() == Kind::Const)
          return Polynomial::constant(arg.value() == 0 ? Rational(0) : Rational(1 / arg.value()));
        return Polynomial::atom(star(arg));
      }
    }
    return {};
  }

  static Rational prim_at_zero(Prim p) {
    switch (p) {
      case Prim::Exp:
      case Prim::Cos:
      case Prim::Recip1pSq:
        return 1;
      default:
        return 0;
    }
  }

 private:
  static void flatten_mul(const Term& t, std::vector<Term>& out) {
    if (t.kind() == Kind::Mul) {
      flatten_mul(t.arg(0), out);
      flatten_mul(t.arg(1), out);
    } else {
      out.push_back(t);
    }
  }

  Polynomial product(const Term& t) const {
    std::vector<Term> factors;
    flatten_mul(t, factors);
    if (star_rules_) {
      for (Term& f : factors) f = normalize(f);
      reduce_factors(factors);
    }
    Polynomial acc = Polynomial::constant(1);
    for (const Term& f : factors) {
      acc = acc * to_poly(f);
      if (star_rules_) acc = reduce_monomials(acc);
      if (acc.size() > max_terms_)
        throw Error(ErrorKind::InvalidArgument, "normalization exceeded the expansion limit");
      if (acc.is_zero()) break;
    }
    return acc;
  }

  // u^p (u*)^q with p + q ≥ 3 loses one u and one u*, repeatedly.
  static void reduce_factors(std::vector<Term>& factors) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t s = 0; s < factors.size() && !changed; ++s) {
        if (factors[s].kind() != Kind::Star) continue;
        const Term& u = factors[s].arg(0);
        std::size_t p = 0, q = 0;
        for (const Term& f : factors) {
          if (f == u) ++p;
          if (f == factors[s]) ++q;
        }
        if (p >= 1 && q >= 1 && p + q >= 3) {
          Term st = factors[s];
          auto drop = [&](const Term& x) {
            auto it = std::find(factors.begin(), factors.end(), x);
            factors.erase(it);
          };
          drop(u);
          drop(st);
          changed = true;
        }
      }
    }
  }

  // Monomial-level version: u may be any coefficient-1 monomial.
  Polynomial reduce_monomials(const Polynomial& p) const {
    bool any_star = false;
    for (const auto& [m, c] : p.terms())
      for (const auto& [a, e] : m) any_star = any_star || a.kind() == Kind::Star;
    if (!any_star) return p;
    Polynomial out;
    for (const auto& [m, c] : p.terms()) out.add_term(reduce_monomial(m), c);
    return out;
  }

  Monomial reduce_monomial(Monomial m) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t s = 0; s < m.size() && !changed; ++s) {
        if (m[s].first.kind() != Kind::Star) continue;
        Polynomial inner = to_poly(m[s].first.arg(0));
        if (inner.size() != 1 || inner.terms().begin()->second != 1) continue;
        const Monomial& u = inner.terms().begin()->first;
        if (u.empty()) continue;
        unsigned q = m[s].second;
        unsigned p = ~0u;
        for (const auto& [a, e] : u) {
          auto it = std::find_if(m.begin(), m.end(), [&](const auto& x) { return x.first == a; });
          unsigned have = it == m.end() ? 0 : it->second;
          p = std::min(p, have / e);
        }
        if (p >= 1 && q >= 1 && p + q >= 3) {
          Term st = m[s].first;
          for (const auto& [a, e] : u) {
            auto it = std::find_if(m.begin(), m.end(), [&](const auto& x) { return x.first == a; });
            it->second -= e;
          }
          auto it = std::find_if(m.begin(), m.end(), [&](const auto& x) { return x.first == st; });
          it->second -= 1;
          std::erase_if(m, [](const auto& x) { return x.second == 0; });
          changed = true;
        }
      }
    }
    return m;
  }

  bool star_rules_;
  std::size_t max_terms_;
};

inline Term normalize(const Term& t) { return Normalizer{}.normalize(t); }
inline Polynomial to_poly(const Term& t) { return Normalizer{}.to_poly(t); }

}  // namespace smoothring
