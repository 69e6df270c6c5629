#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "smoothring/eval.hpp"
#include "smoothring/jet.hpp"
#include "smoothring/random.hpp"
#include "smoothring/term.hpp"

namespace smoothring {

namespace detail {

using Matrix = std::vector<std::vector<double>>;

// Solves a·x = b in place by partial pivoting; false if singular.
inline bool solve_dense(Matrix a, std::vector<double> b, std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-300) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t c = n; c-- > 0;) {
    double s = b[c];
    for (std::size_t k = c + 1; k < n; ++k) s -= a[c][k] * x[k];
    x[c] = s / a[c][c];
  }
  return true;
}

}  // namespace detail

/// Numerical rank by Gaussian elimination with a relative pivot threshold.
inline std::size_t numerical_rank(detail::Matrix m, double rel = 1e-8) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  double scale = 0.0;
  for (const auto& r : m)
    for (double v : r) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    for (std::size_t r = rank + 1; r < rows; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) <= rel * scale) continue;
    std::swap(m[rank], m[piv]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      double f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// Σ fᵢ(p)², or +∞ if any value is not finite.
inline double residual_sq(std::span<const Term> system, std::span<const double> p) {
  double s = 0.0;
  for (const Term& f : system) {
    double v = eval_or_nan(f, p);
    if (!std::isfinite(v)) return INFINITY;
    s += v * v;
  }
  return std::isfinite(s) ? s : INFINITY;
}

inline detail::Matrix jacobian(std::span<const Term> system, std::span<const double> p,
                               std::vector<double>* values = nullptr) {
  detail::Matrix j;
  if (values) values->clear();
  for (const Term& f : system) {
    auto [v, g] = value_and_gradient(f, p);
    j.push_back(std::move(g));
    if (values) values->push_back(v);
  }
  return j;
}

struct ZeroPoint {
  Point point;
  double residual_sq = 0.0;
};

/// Damped Gauss–Newton (Levenberg–Marquardt) descent on Σ fᵢ² from `start`.
/// Returns the final iterate whatever its residual.
inline ZeroPoint descend(std::span<const Term> system, Point x, unsigned max_iter = 200) {
  const std::size_t n = x.size();
  double cost = residual_sq(system, x);
  if (system.empty() || n == 0) return {x, cost};
  double lambda = 1e-3;
  std::vector<double> r;
  for (unsigned it = 0; it < max_iter && std::isfinite(cost) && cost > 1e-30; ++it) {
    auto jac = jacobian(system, x, &r);
    detail::Matrix a(n, std::vector<double>(n, 0.0));
    std::vector<double> g(n, 0.0);
    for (std::size_t i = 0; i < jac.size(); ++i)
      for (std::size_t c = 0; c < n; ++c) {
        g[c] -= jac[i][c] * r[i];
        for (std::size_t d = 0; d < n; ++d) a[c][d] += jac[i][c] * jac[i][d];
      }
    bool improved = false;
    while (lambda < 1e14) {
      auto damped = a;
      for (std::size_t c = 0; c < n; ++c) damped[c][c] += lambda * (1.0 + a[c][c]);
      std::vector<double> step;
      if (detail::solve_dense(damped, g, step)) {
        Point trial = x;
        for (std::size_t c = 0; c < n; ++c) trial[c] += step[c];
        double tc = residual_sq(system, trial);
        if (tc < cost) {
          x = std::move(trial);
          cost = tc;
          lambda = std::max(lambda / 3.0, 1e-12);
          improved = true;
          break;
        }
      }
      lambda *= 4.0;
    }
    if (!improved) break;
  }
  return {x, cost};
}

/// Length of the Gauss–Newton step at p, with damping relative to the
/// Jacobian scale so that a flat residual still gets a full-size step.
inline double newton_step_norm(std::span<const Term> system, const Point& p) {
  const std::size_t n = p.size();
  if (n == 0 || system.empty()) return 0.0;
  std::vector<double> r;
  auto jac = jacobian(system, p, &r);
  detail::Matrix a(n, std::vector<double>(n, 0.0));
  std::vector<double> g(n, 0.0);
  double scale = 0.0;
  for (std::size_t i = 0; i < jac.size(); ++i)
    for (std::size_t c = 0; c < n; ++c) {
      g[c] -= jac[i][c] * r[i];
      for (std::size_t d = 0; d < n; ++d) a[c][d] += jac[i][c] * jac[i][d];
    }
  for (std::size_t c = 0; c < n; ++c) scale = std::max(scale, a[c][c]);
  if (scale == 0.0) return 0.0;
  for (std::size_t c = 0; c < n; ++c) a[c][c] += 1e-10 * scale;
  std::vector<double> step;
  if (!detail::solve_dense(a, g, step)) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (double v : step) s = std::max(s, std::abs(v));
  return s;
}

/// A small residual is not enough: exp(x) is tiny far to the left.  A point
/// counts as a zero only if it is a fixed point of Newton's method.
inline bool accepted_zero(std::span<const Term> system, const ZeroPoint& z, const Config& cfg) {
  if (!(z.residual_sq <= cfg.zero_threshold) || !is_finite(z.point)) return false;
  double size = 1.0;
  for (double c : z.point) {
    if (std::abs(c) > cfg.escape_radius) return false;
    size = std::max(size, std::abs(c));
  }
  return newton_step_norm(system, z.point) <= 1e-3 * size;
}

struct ZeroSample {
  std::vector<ZeroPoint> points;
  std::size_t attempts = 0;
};

/// Seeded multi-start search for up to `count` points of the real zero set
/// of `system` in n variables; starts are uniform in [-box, box]ⁿ.
inline ZeroSample sample_zero_set(std::span<const Term> system, std::size_t n, const Config& cfg,
                                  std::uint64_t seed, std::size_t count,
                                  std::size_t max_attempts = 0) {
  if (max_attempts == 0) max_attempts = std::max<std::size_t>(4 * count, 32);
  Rng rng(seed);
  ZeroSample out;
  while (out.points.size() < count && out.attempts < max_attempts) {
    ++out.attempts;
    Point start = rng.point(n, cfg.box);
    ZeroPoint z = system.empty() ? ZeroPoint{start, 0.0} : descend(system, std::move(start));
    if (system.empty() || accepted_zero(system, z, cfg)) out.points.push_back(std::move(z));
  }
  return out;
}

/// A common real zero of `system`, if the search finds one.
inline std::optional<ZeroPoint> find_common_zero(std::span<const Term> system, std::size_t n,
                                                 const Config& cfg, std::uint64_t seed,
                                                 std::size_t attempts) {
  auto s = sample_zero_set(system, n, cfg, seed, 1, attempts);
  if (s.points.empty()) return std::nullopt;
  return s.points.front();
}

struct ZeroEnumeration {
  std::vector<Point> points;
  /// Every found root was isolated (full-rank Jacobian) and within budget.
  bool complete = true;
  bool overflow = false;
  std::size_t attempts = 0;
};

inline bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Multi-start root enumeration with deduplication.  Roots whose Jacobian
/// has rank < n signal a positive-dimensional (or degenerate) zero set and
/// mark the enumeration incomplete.
inline ZeroEnumeration enumerate_zero_set(std::span<const Term> system, std::size_t n,
                                          const Config& cfg, std::uint64_t seed,
                                          std::size_t starts) {
  ZeroEnumeration out;
  if (n == 0) {
    out.attempts = 1;
    if (residual_sq(system, Point{}) <= cfg.zero_threshold) out.points.push_back(Point{});
    return out;
  }
  Rng rng(seed);
  for (std::size_t s = 0; s < starts; ++s) {
    ++out.attempts;
    ZeroPoint z = descend(system, rng.point(n, cfg.box));
    if (!accepted_zero(system, z, cfg)) continue;
    bool dup = std::any_of(out.points.begin(), out.points.end(), [&](const Point& q) {
      return distance(q, z.point) <= cfg.dedup_radius;
    });
    if (dup) continue;
    if (numerical_rank(jacobian(system, z.point)) < n) out.complete = false;
    out.points.push_back(z.point);
    if (out.points.size() > cfg.budget) {
      out.overflow = true;
      out.complete = false;
      break;
    }
  }
  std::sort(out.points.begin(), out.points.end(), lex_less);
  return out;
}

}  // namespace smoothring
