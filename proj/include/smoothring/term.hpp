#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smoothring/error.hpp"
#include "smoothring/rational.hpp"

namespace smoothring {

/// The fixed library of globally smooth unary primitives.
enum class Prim : std::uint8_t { Exp, Sin, Cos, Atan, Tanh, Recip1pSq };

inline constexpr std::array<Prim, 6> kAllPrims = {Prim::Exp,  Prim::Sin,  Prim::Cos,
                                                  Prim::Atan, Prim::Tanh, Prim::Recip1pSq};

inline std::string_view prim_name(Prim p) {
  switch (p) {
    case Prim::Exp: return "exp";
    case Prim::Sin: return "sin";
    case Prim::Cos: return "cos";
    case Prim::Atan: return "atan";
    case Prim::Tanh: return "tanh";
    case Prim::Recip1pSq: return "recip1psq";
  }
  return "?";
}

inline std::optional<Prim> prim_from_name(std::string_view name) {
  for (Prim p : kAllPrims)
    if (prim_name(p) == name) return p;
  return std::nullopt;
}

enum class Kind : std::uint8_t { Var, Const, Add, Mul, Neg, Prim, Star };

class Term;

namespace detail {
struct Node;
}

/// Immutable expression tree. Copies share structure; equality is
/// structural.  A term containing no Star node is a smooth term; Star
/// only appears in the quasi-inverse calculus.
class Term {
 public:
  static Term var(std::size_t index);
  static Term constant(Rational value);
  static Term constant(long value) { return constant(Rational(value)); }
  static Term add(Term a, Term b);
  static Term mul(Term a, Term b);
  static Term neg(Term a);
  static Term prim(Prim p, Term arg);
  static Term star(Term arg);

  Kind kind() const;
  std::size_t var_index() const;
  const Rational& value() const;
  Prim primitive() const;
  std::span<const Term> args() const;
  const Term& arg(std::size_t i = 0) const { return args()[i]; }

  /// One more than the largest Var index (0 for closed terms).
  std::size_t arity() const;
  std::size_t size() const;
  bool has_star() const;
  std::size_t hash() const;

  bool is_const(long v) const { return kind() == Kind::Const && value() == v; }

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

namespace detail {
struct Node {
  Kind kind{};
  std::size_t var = 0;
  Rational value;
  Prim prim = Prim::Exp;
  std::vector<Term> args;
  std::size_t arity = 0;
  std::size_t size = 1;
  std::size_t hash = 0;
  bool has_star = false;
};

inline std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

inline std::shared_ptr<const Node> finish(Node n) {
  n.hash = mix(static_cast<std::size_t>(n.kind) + 1, n.var);
  if (n.kind == Kind::Const) n.hash = mix(n.hash, std::hash<std::string>{}(n.value.str()));
  if (n.kind == Kind::Prim) n.hash = mix(n.hash, static_cast<std::size_t>(n.prim));
  n.size = 1;
  n.arity = n.kind == Kind::Var ? n.var + 1 : 0;
  n.has_star = n.kind == Kind::Star;
  for (const Term& a : n.args) {
    n.hash = mix(n.hash, a.hash());
    n.size += a.size();
    n.arity = std::max(n.arity, a.arity());
    n.has_star = n.has_star || a.has_star();
  }
  return std::make_shared<const Node>(std::move(n));
}
}  // namespace detail

inline Term Term::var(std::size_t index) {
  detail::Node n;
  n.kind = Kind::Var;
  n.var = index;
  return Term(detail::finish(std::move(n)));
}

inline Term Term::constant(Rational value) {
  detail::Node n;
  n.kind = Kind::Const;
  n.value = std::move(value);
  return Term(detail::finish(std::move(n)));
}

inline Term Term::add(Term a, Term b) {
  detail::Node n;
  n.kind = Kind::Add;
  n.args = {std::move(a), std::move(b)};
  return Term(detail::finish(std::move(n)));
}

inline Term Term::mul(Term a, Term b) {
  detail::Node n;
  n.kind = Kind::Mul;
  n.args = {std::move(a), std::move(b)};
  return Term(detail::finish(std::move(n)));
}

inline Term Term::neg(Term a) {
  detail::Node n;
  n.kind = Kind::Neg;
  n.args = {std::move(a)};
  return Term(detail::finish(std::move(n)));
}

inline Term Term::prim(Prim p, Term arg) {
  detail::Node n;
  n.kind = Kind::Prim;
  n.prim = p;
  n.args = {std::move(arg)};
  return Term(detail::finish(std::move(n)));
}

inline Term Term::star(Term arg) {
  detail::Node n;
  n.kind = Kind::Star;
  n.args = {std::move(arg)};
  return Term(detail::finish(std::move(n)));
}

inline Kind Term::kind() const { return node_->kind; }
inline std::size_t Term::var_index() const { return node_->var; }
inline const Rational& Term::value() const { return node_->value; }
inline Prim Term::primitive() const { return node_->prim; }
inline std::span<const Term> Term::args() const { return node_->args; }
inline std::size_t Term::arity() const { return node_->arity; }
inline std::size_t Term::size() const { return node_->size; }
inline bool Term::has_star() const { return node_->has_star; }
inline std::size_t Term::hash() const { return node_->hash; }

inline bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

/// Total structural order: kind, then payload, then arguments.
inline std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Kind::Var:
      return a.var_index() <=> b.var_index();
    case Kind::Const:
      if (a.value() < b.value()) return std::strong_ordering::less;
      if (b.value() < a.value()) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    case Kind::Prim:
      if (auto c = a.primitive() <=> b.primitive(); c != 0) return c;
      break;
    default:
      break;
  }
  auto as = a.args();
  auto bs = b.args();
  if (auto c = as.size() <=> bs.size(); c != 0) return c;
  for (std::size_t i = 0; i < as.size(); ++i)
    if (auto c = as[i] <=> bs[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

// Convenience builders.
inline Term var(std::size_t i) { return Term::var(i); }
inline Term cnst(Rational v) { return Term::constant(std::move(v)); }
inline Term cnst(long v) { return Term::constant(v); }
inline Term operator+(Term a, Term b) { return Term::add(std::move(a), std::move(b)); }
inline Term operator*(Term a, Term b) { return Term::mul(std::move(a), std::move(b)); }
inline Term operator-(Term a) { return Term::neg(std::move(a)); }
inline Term operator-(Term a, Term b) { return Term::add(std::move(a), Term::neg(std::move(b))); }
inline Term apply(Prim p, Term a) { return Term::prim(p, std::move(a)); }
inline Term star(Term a) { return Term::star(std::move(a)); }

/// Sum of a sequence; the empty sum is 0.
inline Term sum_of(std::span<const Term> ts) {
  if (ts.empty()) return cnst(0);
  Term acc = ts[0];
  for (std::size_t i = 1; i < ts.size(); ++i) acc = acc + ts[i];
  return acc;
}

inline Term pow_of(const Term& t, unsigned e) {
  if (e == 0) return cnst(1);
  Term acc = t;
  for (unsigned i = 1; i < e; ++i) acc = acc * t;
  return acc;
}

std::string to_sexpr(const Term& t);

inline void write_sexpr(std::string& out, const Term& t) {
  switch (t.kind()) {
    case Kind::Var:
      out += "(var " + std::to_string(t.var_index()) + ")";
      return;
    case Kind::Const:
      out += "(const " + format_rational(t.value()) + ")";
      return;
    case Kind::Add:
    case Kind::Mul:
      out += t.kind() == Kind::Add ? "(add " : "(mul ";
      write_sexpr(out, t.arg(0));
      out += ' ';
      write_sexpr(out, t.arg(1));
      out += ')';
      return;
    case Kind::Neg:
    case Kind::Star:
      out += t.kind() == Kind::Neg ? "(neg " : "(star ";
      write_sexpr(out, t.arg(0));
      out += ')';
      return;
    case Kind::Prim:
      out += '(';
      out += prim_name(t.primitive());
      out += ' ';
      write_sexpr(out, t.arg(0));
      out += ')';
      return;
  }
}

inline std::string to_sexpr(const Term& t) {
  std::string s;
  write_sexpr(s, t);
  return s;
}

}  // namespace smoothring

template <>
struct std::hash<smoothring::Term> {
  std::size_t operator()(const smoothring::Term& t) const noexcept { return t.hash(); }
};
