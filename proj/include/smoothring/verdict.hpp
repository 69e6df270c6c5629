#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smoothring/eval.hpp"

namespace smoothring {

enum class Status { Refuted = 0, NumericallySupported = 1, Proven = 2 };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::Proven: return "Proven";
    case Status::NumericallySupported: return "NumericallySupported";
    case Status::Refuted: return "Refuted";
  }
  return "?";
}

/// Three-valued outcome.  Proven comes only from syntactic reasoning;
/// Refuted always carries a concrete witness point.
struct Verdict {
  Status status = Status::NumericallySupported;
  std::size_t samples = 0;
  double max_residual = 0.0;
  std::optional<Point> witness;
  std::optional<double> witness_residual;
  std::vector<std::string> flags;
  std::string reason;

  static Verdict proven(std::string why) {
    Verdict v;
    v.status = Status::Proven;
    v.reason = std::move(why);
    return v;
  }
  static Verdict supported(std::size_t samples, double max_residual, std::string why = {}) {
    Verdict v;
    v.samples = samples;
    v.max_residual = max_residual;
    v.reason = std::move(why);
    return v;
  }
  static Verdict refuted(Point witness, double residual, std::string why = {}) {
    Verdict v;
    v.status = Status::Refuted;
    v.witness = std::move(witness);
    v.witness_residual = residual;
    v.reason = std::move(why);
    return v;
  }

  bool is_proven() const { return status == Status::Proven; }
  bool is_refuted() const { return status == Status::Refuted; }
  bool holds() const { return status != Status::Refuted; }
  bool has_flag(std::string_view f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
  }
  Verdict& flag(std::string f) {
    if (!has_flag(f)) flags.push_back(std::move(f));
    return *this;
  }
};

/// The weakest of two verdicts; evidence is merged.
inline Verdict meet(const Verdict& a, const Verdict& b) {
  Verdict out = a.status <= b.status ? a : b;
  const Verdict& other = a.status <= b.status ? b : a;
  if (out.status == Status::NumericallySupported && other.status == Status::NumericallySupported) {
    out.samples = a.samples + b.samples;
    out.max_residual = std::max(a.max_residual, b.max_residual);
  }
  for (const auto& f : other.flags) out.flag(f);
  return out;
}

}  // namespace smoothring
