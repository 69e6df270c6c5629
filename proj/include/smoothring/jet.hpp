#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "smoothring/error.hpp"
#include "smoothring/eval.hpp"
#include "smoothring/term.hpp"

namespace smoothring {

using MultiIndex = std::vector<unsigned>;

/// Dense storage layout for truncated Taylor polynomials in `vars`
/// variables up to total degree `order`.  Multi-indices are stored in
/// graded lexicographic order, so slot 0 is the constant term and, for
/// one variable, slot i is the coefficient of εⁱ.
class JetLayout {
 public:
  JetLayout(std::size_t vars, unsigned order) : vars_(vars), order_(order) {
    MultiIndex current(vars, 0);
    for (unsigned d = 0; d <= order; ++d) enumerate(current, 0, d);
    for (std::size_t i = 0; i < indices_.size(); ++i) lookup_.emplace(indices_[i], i);
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      for (std::size_t j = 0; j < indices_.size(); ++j) {
        if (total(indices_[i]) + total(indices_[j]) > order) continue;
        MultiIndex s(vars);
        for (std::size_t v = 0; v < vars; ++v) s[v] = indices_[i][v] + indices_[j][v];
        products_.emplace_back(i, j, lookup_.at(s));
      }
    }
  }

  static std::shared_ptr<const JetLayout> get(std::size_t vars, unsigned order) {
    static std::mutex mu;
    static std::map<std::pair<std::size_t, unsigned>, std::shared_ptr<const JetLayout>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{vars, order}];
    if (!slot) slot = std::make_shared<const JetLayout>(vars, order);
    return slot;
  }

  std::size_t vars() const { return vars_; }
  unsigned order() const { return order_; }
  std::size_t size() const { return indices_.size(); }
  const MultiIndex& index(std::size_t slot) const { return indices_[slot]; }
  std::optional<std::size_t> slot(const MultiIndex& m) const {
    auto it = lookup_.find(m);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }
  const std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>& products() const {
    return products_;
  }

  static unsigned total(const MultiIndex& m) {
    unsigned t = 0;
    for (unsigned e : m) t += e;
    return t;
  }

 private:
  void enumerate(MultiIndex& current, std::size_t pos, unsigned remaining) {
    if (pos + 1 >= vars_) {
      if (vars_ == 0) {
        if (remaining == 0) indices_.push_back(current);
        return;
      }
      current[pos] = remaining;
      indices_.push_back(current);
      current[pos] = 0;
      return;
    }
    for (unsigned e = remaining + 1; e-- > 0;) {
      current[pos] = e;
      enumerate(current, pos + 1, remaining - e);
    }
    current[pos] = 0;
  }

  std::size_t vars_;
  unsigned order_;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, std::size_t> lookup_;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> products_;
};

/// Element of ℝ[ε₁…ε_v]/(ε)^{k+1}; coefficients are Taylor coefficients
/// (∂^α f / α!), not raw derivatives.
class Jet {
 public:
  Jet() = default;
  explicit Jet(std::shared_ptr<const JetLayout> layout)
      : layout_(std::move(layout)), coef_(layout_->size(), 0.0) {}

  static Jet constant(std::shared_ptr<const JetLayout> layout, double c) {
    Jet j(std::move(layout));
    j.coef_[0] = c;
    return j;
  }
  /// a + ε_v
  static Jet variable(std::shared_ptr<const JetLayout> layout, std::size_t v, double a) {
    Jet j = constant(layout, a);
    if (layout->order() >= 1) {
      MultiIndex m(layout->vars(), 0);
      m[v] = 1;
      j.coef_[*layout->slot(m)] = 1.0;
    }
    return j;
  }

  const JetLayout& layout() const { return *layout_; }
  const std::shared_ptr<const JetLayout>& layout_ptr() const { return layout_; }
  std::span<const double> coefficients() const { return coef_; }
  std::span<double> coefficients() { return coef_; }
  double value() const { return coef_[0]; }
  double operator[](std::size_t slot) const { return coef_[slot]; }
  double& operator[](std::size_t slot) { return coef_[slot]; }
  double coefficient(const MultiIndex& m) const {
    auto s = layout_->slot(m);
    return s ? coef_[*s] : 0.0;
  }

  friend Jet operator+(Jet a, const Jet& b) {
    for (std::size_t i = 0; i < a.coef_.size(); ++i) a.coef_[i] += b.coef_[i];
    return a;
  }
  friend Jet operator-(Jet a, const Jet& b) {
    for (std::size_t i = 0; i < a.coef_.size(); ++i) a.coef_[i] -= b.coef_[i];
    return a;
  }
  Jet operator-() const {
    Jet r = *this;
    for (double& c : r.coef_) c = -c;
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.layout_);
    for (const auto& [i, j, k] : a.layout_->products()) r.coef_[k] += a.coef_[i] * b.coef_[j];
    return r;
  }
  friend Jet operator*(double s, Jet a) {
    for (double& c : a.coef_) c *= s;
    return a;
  }

  /// Σ c_j h^j where h is the nilpotent part of this jet.
  Jet compose(std::span<const double> taylor) const {
    Jet h = *this;
    h.coef_[0] = 0.0;
    Jet acc = constant(layout_, taylor.back());
    for (std::size_t j = taylor.size() - 1; j-- > 0;) {
      acc = acc * h;
      acc.coef_[0] += taylor[j];
    }
    return acc;
  }

  bool is_finite() const { return smoothring::is_finite(coef_); }

 private:
  std::shared_ptr<const JetLayout> layout_;
  std::vector<double> coef_;
};

/// Taylor coefficients c_0..c_k of p(a + t) in t.
inline std::vector<double> taylor_coefficients(Prim p, double a, unsigned k) {
  std::vector<double> c(k + 1, 0.0);
  switch (p) {
    case Prim::Exp: {
      double e = std::exp(a), fact = 1.0;
      for (unsigned j = 0; j <= k; ++j) {
        if (j > 0) fact *= j;
        c[j] = e / fact;
      }
      break;
    }
    case Prim::Sin:
    case Prim::Cos: {
      // derivatives cycle through sin, cos, -sin, -cos
      double s = std::sin(a), co = std::cos(a), fact = 1.0;
      const double cycle[4] = {s, co, -s, -co};
      unsigned shift = p == Prim::Sin ? 0 : 1;
      for (unsigned j = 0; j <= k; ++j) {
        if (j > 0) fact *= j;
        c[j] = cycle[(j + shift) % 4] / fact;
      }
      break;
    }
    case Prim::Recip1pSq:
    case Prim::Atan: {
      // r = 1/q with q(t) = (1 + a²) + 2a t + t²
      const double q[3] = {1.0 + a * a, 2.0 * a, 1.0};
      std::vector<double> r(k + 1, 0.0);
      for (unsigned j = 0; j <= k; ++j) {
        double acc = j == 0 ? 1.0 : 0.0;
        for (unsigned i = 1; i <= std::min(j, 2u); ++i) acc -= q[i] * r[j - i];
        r[j] = acc / q[0];
      }
      if (p == Prim::Recip1pSq) return r;
      c[0] = std::atan(a);
      for (unsigned j = 1; j <= k; ++j) c[j] = r[j - 1] / j;
      break;
    }
    case Prim::Tanh: {
      // y' = 1 - y²
      c[0] = std::tanh(a);
      for (unsigned j = 0; j < k; ++j) {
        double sq = 0.0;
        for (unsigned i = 0; i <= j; ++i) sq += c[i] * c[j - i];
        c[j + 1] = ((j == 0 ? 1.0 : 0.0) - sq) / (j + 1);
      }
      break;
    }
  }
  return c;
}

struct JetAlgebra {
  std::shared_ptr<const JetLayout> layout;
  Jet constant(const Rational& r) const { return Jet::constant(layout, to_double(r)); }
  Jet add(const Jet& a, const Jet& b) const { return a + b; }
  Jet mul(const Jet& a, const Jet& b) const { return a * b; }
  Jet neg(const Jet& a) const { return -a; }
  Jet prim(Prim p, const Jet& x) const {
    auto c = taylor_coefficients(p, x.value(), layout->order());
    return x.compose(c);
  }
  Jet star(const Jet&) const {
    throw Error(ErrorKind::InvalidArgument, "jet algebras carry no quasi-inverse");
  }
};

/// Interprets a term on jets (the C∞-structure of a Weil algebra).
inline Jet interpret_jet(const Term& t, std::span<const Jet> args,
                         std::shared_ptr<const JetLayout> layout) {
  check_arity(t, args.size());
  return evaluate<Jet>(t, args, JetAlgebra{std::move(layout)});
}

/// Degree-≤k Taylor expansion of t at `base`, one ε per coordinate.
inline Jet jet_eval(const Term& t, std::span<const double> base, unsigned order) {
  check_arity(t, base.size());
  if (!is_finite(base)) throw Error(ErrorKind::NonFiniteResult, "jet base point is not finite");
  auto layout = JetLayout::get(base.size(), order);
  std::vector<Jet> args;
  args.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) args.push_back(Jet::variable(layout, i, base[i]));
  Jet j = evaluate<Jet>(t, std::span<const Jet>(args), JetAlgebra{layout});
  if (!j.is_finite()) throw Error(ErrorKind::NonFiniteResult, "jet overflowed at " + to_sexpr(t));
  return j;
}

/// Value and gradient at a point (order-1 jet).
inline std::pair<double, std::vector<double>> value_and_gradient(const Term& t,
                                                                 std::span<const double> p) {
  auto layout = JetLayout::get(p.size(), 1);
  std::vector<Jet> args;
  for (std::size_t i = 0; i < p.size(); ++i) args.push_back(Jet::variable(layout, i, p[i]));
  Jet j = evaluate<Jet>(t, std::span<const Jet>(args), JetAlgebra{layout});
  std::vector<double> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) g[i] = j[i + 1];
  return {j.value(), g};
}

}  // namespace smoothring
