#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "smoothring/error.hpp"
#include "smoothring/term.hpp"

namespace smoothring {

/// A parsed S-expression datum with its source position (1-based).
struct Sexp {
  bool is_list = false;
  std::string atom;
  std::vector<Sexp> items;
  int line = 1;
  int column = 1;

  bool is_atom() const { return !is_list; }
  bool is_symbol(std::string_view s) const { return !is_list && atom == s; }
  std::string head() const {
    return is_list && !items.empty() && items[0].is_atom() ? items[0].atom : std::string();
  }
};

[[noreturn]] inline void syntax_error(int line, int column, const std::string& expected) {
  throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ", column " +
                                          std::to_string(column) + ": expected " + expected);
}

[[noreturn]] inline void syntax_error(const Sexp& at, const std::string& expected) {
  syntax_error(at.line, at.column, expected);
}

class SexpReader {
 public:
  explicit SexpReader(std::string_view text) : text_(text) {}

  std::vector<Sexp> read_all() {
    std::vector<Sexp> out;
    skip_space();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_space();
    }
    return out;
  }

 private:
  Sexp read() {
    skip_space();
    if (pos_ >= text_.size()) syntax_error(line_, col_, "{'(', atom}");
    Sexp s;
    s.line = line_;
    s.column = col_;
    char c = text_[pos_];
    if (c == ')') syntax_error(line_, col_, "{'(', atom}");
    if (c == '(') {
      advance();
      s.is_list = true;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) syntax_error(line_, col_, "{')', '(', atom}");
        if (text_[pos_] == ')') {
          advance();
          return s;
        }
        s.items.push_back(read());
      }
    }
    while (pos_ < text_.size()) {
      c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';') break;
      s.atom += c;
      advance();
    }
    return s;
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

inline std::vector<Sexp> read_sexps(std::string_view text) { return SexpReader(text).read_all(); }

inline Sexp read_one(std::string_view text) {
  auto all = read_sexps(text);
  if (all.size() != 1) syntax_error(1, 1, "exactly one expression");
  return all[0];
}

inline constexpr std::string_view kTermHeads =
    "{var, const, add, mul, neg, exp, sin, cos, atan, tanh, recip1psq, star}";

/// Grammar: (var N) | (const DECIMAL) | (add t t) | (mul t t) | (neg t)
/// | (exp t) | (sin t) | (cos t) | (atan t) | (tanh t) | (recip1psq t)
/// | (star t).  `allow_star` gates the last form.
inline Term parse_term(const Sexp& s, bool allow_star = true) {
  if (!s.is_list || s.items.empty() || !s.items[0].is_atom())
    syntax_error(s, "term (" + std::string(kTermHeads) + " ...)");
  const std::string& head = s.items[0].atom;
  auto expect_args = [&](std::size_t n) {
    if (s.items.size() != n + 1)
      throw Error(ErrorKind::ArityError, "line " + std::to_string(s.line) + ", column " +
                                             std::to_string(s.column) + ": '" + head +
                                             "' takes " + std::to_string(n) + " argument(s)");
  };
  if (head == "var" || head == "const") {
    expect_args(1);
    const Sexp& a = s.items[1];
    if (!a.is_atom()) syntax_error(a, head == "var" ? "non-negative integer" : "DECIMAL");
    if (head == "var") {
      if (a.atom.empty() || a.atom.size() > 9 ||
          !std::all_of(a.atom.begin(), a.atom.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        syntax_error(a, "non-negative integer");
      return var(std::stoul(a.atom));
    }
    try {
      return cnst(parse_rational(a.atom));
    } catch (const Error&) {
      syntax_error(a, "DECIMAL");
    }
  }
  if (head == "add" || head == "mul") {
    expect_args(2);
    Term l = parse_term(s.items[1], allow_star);
    Term r = parse_term(s.items[2], allow_star);
    return head == "add" ? l + r : l * r;
  }
  if (head == "neg") {
    expect_args(1);
    return -parse_term(s.items[1], allow_star);
  }
  if (head == "star" && allow_star) {
    expect_args(1);
    return star(parse_term(s.items[1], allow_star));
  }
  if (auto p = prim_from_name(head)) {
    expect_args(1);
    return apply(*p, parse_term(s.items[1], allow_star));
  }
  syntax_error(s.items[0], std::string(kTermHeads));
}

inline Term parse_term(std::string_view text, bool allow_star = true) {
  return parse_term(read_one(text), allow_star);
}

}  // namespace smoothring
