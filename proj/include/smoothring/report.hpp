#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "smoothring/vn.hpp"

namespace smoothring {

using Json = nlohmann::ordered_json;

inline Json to_json(const Term& t) { return to_sexpr(t); }

inline Json to_json(const std::vector<Term>& ts) {
  Json a = Json::array();
  for (const Term& t : ts) a.push_back(to_sexpr(t));
  return a;
}

inline Json to_json(std::span<const double> p) {
  Json a = Json::array();
  for (double x : p) a.push_back(x);
  return a;
}

inline Json to_json(const Verdict& v) {
  Json j;
  j["status"] = std::string(to_string(v.status));
  j["samples"] = v.samples;
  j["max_residual"] = v.max_residual;
  if (v.witness) j["witness"] = to_json(std::span<const double>(*v.witness));
  if (v.witness_residual) j["witness_residual"] = *v.witness_residual;
  if (!v.flags.empty()) j["flags"] = v.flags;
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

inline Json to_json(const Presentation& p) {
  Json j;
  if (!p.name.empty()) j["name"] = p.name;
  j["arity"] = p.arity;
  j["relations"] = to_json(p.relations);
  return j;
}

inline Json to_json(const IdealCertificate& c) { return to_json(c.multipliers); }

inline Json to_json(const Morphism& m) {
  Json j;
  j["source"] = m.source.name.empty() ? Json(to_json(m.source)) : Json(m.source.name);
  j["target"] = m.target.name.empty() ? Json(to_json(m.target)) : Json(m.target.name);
  j["components"] = to_json(m.components);
  Json certs = Json::array();
  for (const auto& c : m.certificates) certs.push_back(c ? to_json(*c) : Json(nullptr));
  j["certificates"] = certs;
  return j;
}

inline Json to_json(const Cover& c) {
  Json j;
  j["base"] = c.base.name.empty() ? Json(to_json(c.base)) : Json(c.base.name);
  j["elements"] = to_json(c.elements);
  j["unimodularity"] = c.unimodularity ? to_json(*c.unimodularity) : Json(nullptr);
  Json arrows = Json::array();
  for (const Morphism& m : c.arrows) arrows.push_back(m.target.name);
  j["arrows"] = arrows;
  j["verdict"] = to_json(c.verdict);
  return j;
}

inline Json to_json(const SpecSampleReport& r) {
  Json j;
  j["samples"] = r.samples;
  j["covered"] = r.covered;
  j["nonzero_counts"] = r.nonzero_counts;
  j["all_covered"] = r.all_covered();
  if (r.uncovered) j["uncovered_witness"] = to_json(std::span<const double>(*r.uncovered));
  if (!r.flags.empty()) j["flags"] = r.flags;
  return j;
}

inline Json to_json(const SheafCheckReport& r) {
  Json j;
  j["points"] = r.points;
  j["target_points"] = r.target_points;
  j["matching_families"] = r.matching_families;
  j["glued_uniquely"] = r.glued_uniquely;
  j["exhaustive"] = r.exhaustive;
  Json inst = Json::array();
  for (const auto& g : r.glue_instances) {
    Json gi;
    gi["family"] = g.family;
    gi["glued"] = g.glued ? Json(*g.glued) : Json(nullptr);
    gi["unique"] = g.unique;
    inst.push_back(gi);
  }
  j["glue_instances"] = inst;
  j["equalizer_verdict"] = to_json(r.equalizer);
  return j;
}

inline Json to_json(const StructureSheafReport& r) {
  Json j;
  j["points"] = r.points;
  j["matching_families"] = r.matching_families;
  j["glued"] = r.glued;
  j["unglued_among_candidates"] = r.unglued_among_candidates;
  j["equalizer_verdict"] = to_json(r.separation);
  return j;
}

inline Json value_json(const ModelRing::Value& v) { return to_json(std::span<const double>(v)); }

inline Json to_json(const PhiObject& p) {
  Json j;
  j["model"] = p.model.describe();
  j["presentation"] = p.presentation.name.empty() ? Json(to_json(p.presentation)) : Json(p.presentation.name);
  j["tolerance"] = p.tolerance;
  if (p.enumeration) {
    j["count"] = p.enumeration->size();
    Json sols = Json::array();
    for (const auto& s : *p.enumeration) {
      Json one = Json::array();
      for (const auto& v : s) one.push_back(value_json(v));
      sols.push_back(one);
    }
    j["solutions"] = sols;
  } else {
    j["count"] = nullptr;
    j["overflow"] = p.overflow_reason;
  }
  return j;
}

inline Json to_json(const LexReport& r) {
  Json j;
  j["terminal_points"] = r.terminal_points;
  Json prods = Json::array();
  for (const auto& p : r.products) {
    Json o;
    o["name"] = p.name;
    o["left"] = p.left;
    o["right"] = p.right;
    o["product"] = p.product;
    o["bijective"] = p.bijective;
    prods.push_back(o);
  }
  j["products"] = prods;
  Json coeqs = Json::array();
  for (const auto& c : r.coequalizers) {
    Json o;
    o["name"] = c.name;
    o["equalizer"] = c.equalizer;
    o["coequalizer"] = c.coequalizer;
    o["difference_form"] = c.difference_form;
    o["equal"] = c.equal;
    coeqs.push_back(o);
  }
  j["coequalizers"] = coeqs;
  j["failures"] = r.failures;
  j["verdict"] = to_json(r.verdict);
  return j;
}

// ---------------------------------------------------------------------------
// Text rendering

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace detail {

inline std::string inline_text(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_float()) return format_double(j.get<double>());
  if (j.is_array()) {
    std::string s = "[";
    for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + inline_text(j[i]);
    return s + "]";
  }
  return j.dump();
}

inline bool is_flat(const Json& j) {
  if (j.is_object()) return false;
  if (j.is_array())
    for (const auto& x : j)
      if (x.is_object()) return false;
  return true;
}

inline void render(const Json& j, int indent, std::string& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    out.append(static_cast<std::size_t>(indent), ' ');
    out += it.key();
    out += ':';
    const Json& v = it.value();
    if (is_flat(v)) {
      out += ' ';
      out += inline_text(v);
      out += '\n';
    } else if (v.is_object()) {
      out += '\n';
      render(v, indent + 2, out);
    } else {
      out += '\n';
      for (const auto& x : v) {
        out.append(static_cast<std::size_t>(indent + 2), ' ');
        out += "-\n";
        if (x.is_object()) render(x, indent + 4, out);
      }
    }
  }
}

}  // namespace detail

/// Human-readable form of a report object: one `key: value` per line.
inline std::string render_text(const Json& report) {
  std::string out;
  detail::render(report, 0, out);
  return out;
}

}  // namespace smoothring
