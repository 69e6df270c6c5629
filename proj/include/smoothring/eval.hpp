#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "smoothring/error.hpp"
#include "smoothring/term.hpp"

namespace smoothring {

/// A point of ℝⁿ; coordinates must be finite.
using Point = std::vector<double>;

inline bool is_finite(std::span<const double> p) {
  for (double x : p)
    if (!std::isfinite(x)) return false;
  return true;
}

/// Interprets a term in any structure supplying the ring operations, the
/// primitive library and (optionally) the quasi-inverse.
///
/// `Algebra` must provide `constant(Rational)`, `add`, `mul`, `neg`,
/// `prim(Prim, S)` and `star(S)`.
template <class S, class Algebra>
S evaluate(const Term& t, std::span<const S> args, const Algebra& alg) {
  switch (t.kind()) {
    case Kind::Var:
      return args[t.var_index()];
    case Kind::Const:
      return alg.constant(t.value());
    case Kind::Add:
      return alg.add(evaluate<S>(t.arg(0), args, alg), evaluate<S>(t.arg(1), args, alg));
    case Kind::Mul:
      return alg.mul(evaluate<S>(t.arg(0), args, alg), evaluate<S>(t.arg(1), args, alg));
    case Kind::Neg:
      return alg.neg(evaluate<S>(t.arg(0), args, alg));
    case Kind::Prim:
      return alg.prim(t.primitive(), evaluate<S>(t.arg(0), args, alg));
    case Kind::Star:
      return alg.star(evaluate<S>(t.arg(0), args, alg));
  }
  return alg.constant(0);
}

inline double eval_prim(Prim p, double x) {
  switch (p) {
    case Prim::Exp: return std::exp(x);
    case Prim::Sin: return std::sin(x);
    case Prim::Cos: return std::cos(x);
    case Prim::Atan: return std::atan(x);
    case Prim::Tanh: return std::tanh(x);
    case Prim::Recip1pSq: return 1.0 / (1.0 + x * x);
  }
  return 0.0;
}

/// Real semantics.  With `allow_star` the quasi-inverse of a field is
/// used: x* = 1/x for x ≠ 0 and 0* = 0.
struct RealAlgebra {
  bool allow_star = false;
  double constant(const Rational& r) const { return to_double(r); }
  double add(double a, double b) const { return a + b; }
  double mul(double a, double b) const { return a * b; }
  double neg(double a) const { return -a; }
  double prim(Prim p, double x) const { return eval_prim(p, x); }
  double star(double x) const {
    if (!allow_star) throw Error(ErrorKind::InvalidArgument, "star is not a smooth symbol");
    return x == 0.0 ? 0.0 : 1.0 / x;
  }
};

inline void check_arity(const Term& t, std::size_t available, std::string_view what = "term") {
  if (t.arity() > available)
    throw Error(ErrorKind::ArityMismatch, std::string(what) + " uses " + std::to_string(t.arity()) +
                                              " variables but only " + std::to_string(available) +
                                              " are available");
}

/// f(p) over ℝ.
inline double eval(const Term& t, std::span<const double> point) {
  check_arity(t, point.size());
  if (!is_finite(point)) throw Error(ErrorKind::NonFiniteResult, "evaluation point is not finite");
  double v = evaluate<double>(t, point, RealAlgebra{});
  if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteResult, "value overflowed at " + to_sexpr(t));
  return v;
}

/// Like eval, but returns NaN instead of throwing on overflow.
inline double eval_or_nan(const Term& t, std::span<const double> point) {
  return evaluate<double>(t, point, RealAlgebra{});
}

/// Simultaneous substitution Var i ↦ replacement[i].
inline Term substitute(const Term& t, std::span<const Term> replacement) {
  check_arity(t, replacement.size());
  switch (t.kind()) {
    case Kind::Var:
      return replacement[t.var_index()];
    case Kind::Const:
      return t;
    case Kind::Add:
      return substitute(t.arg(0), replacement) + substitute(t.arg(1), replacement);
    case Kind::Mul:
      return substitute(t.arg(0), replacement) * substitute(t.arg(1), replacement);
    case Kind::Neg:
      return -substitute(t.arg(0), replacement);
    case Kind::Prim:
      return apply(t.primitive(), substitute(t.arg(0), replacement));
    case Kind::Star:
      return star(substitute(t.arg(0), replacement));
  }
  return t;
}

/// Var i ↦ Var (i + offset).
inline Term shift_vars(const Term& t, std::size_t offset) {
  std::vector<Term> repl;
  repl.reserve(t.arity());
  for (std::size_t i = 0; i < t.arity(); ++i) repl.push_back(var(i + offset));
  return substitute(t, repl);
}

}  // namespace smoothring
