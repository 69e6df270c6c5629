#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smoothring/report.hpp"
#include "smoothring/sexpr.hpp"

namespace smoothring {

inline std::string to_string(const Sexp& s) {
  if (!s.is_list) return s.atom;
  std::string out = "(";
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (i) out += ' ';
    out += to_string(s.items[i]);
  }
  return out + ")";
}

/// Named objects of one session.  Names are unique per kind.
struct Workspace {
  struct CoverDef {
    std::string base;
    std::vector<Term> elements;
    std::optional<std::vector<Term>> unimod;
    std::optional<Cover> built;
  };

  std::map<std::string, Presentation> rings;
  std::map<std::string, Morphism> homs;
  std::map<std::string, CoverDef> covers;
  std::map<std::string, ModelRing> models;

  std::string kind_of(const std::string& name) const {
    if (rings.count(name)) return "ring";
    if (homs.count(name)) return "hom";
    if (covers.count(name)) return "cover";
    if (models.count(name)) return "model";
    return {};
  }
};

/// Exit status of a session: 0 when every verdict holds, 1 when one is
/// Refuted, 2 on any error.
enum class Outcome { Holds = 0, Refuted = 1, Error = 2 };

/// A batch session: reads forms, dispatches commands, emits one report
/// object per form.  Stops at the first error.
class Session {
 public:
  Session(Config cfg, bool seed_given) : cfg_(cfg), seed_given_(seed_given) {}

  const Workspace& workspace() const { return ws_; }
  Outcome outcome() const { return outcome_; }
  const std::vector<Json>& reports() const { return reports_; }

  /// Runs every form of `source`; returns false once an error stopped it.
  bool run_source(std::string_view source) {
    std::vector<Sexp> forms;
    try {
      forms = read_sexps(source);
    } catch (const Error& e) {
      push_error("", e);
      return false;
    }
    for (const Sexp& f : forms)
      if (!run_form(f)) return false;
    return true;
  }

  bool run_form(const Sexp& form) {
    try {
      Json rep = dispatch(form);
      reports_.push_back(std::move(rep));
      return true;
    } catch (const Error& e) {
      push_error(to_string(form), e);
      return false;
    }
  }

 private:
  // ---- argument handling -------------------------------------------------

  struct Call {
    const Sexp& form;
    std::vector<const Sexp*> pos;
    std::map<std::string, const Sexp*> kw;

    explicit Call(const Sexp& f) : form(f) {
      for (std::size_t i = 1; i < f.items.size(); ++i) {
        const Sexp& it = f.items[i];
        if (it.is_atom() && it.atom.size() > 1 && it.atom[0] == ':') {
          if (i + 1 >= f.items.size()) syntax_error(it, "a value after " + it.atom);
          kw[it.atom.substr(1)] = &f.items[++i];
        } else {
          pos.push_back(&it);
        }
      }
    }

    void shape(std::size_t min, std::size_t max, std::set<std::string> allowed = {}) const {
      if (pos.size() < min || pos.size() > max)
        throw Error(ErrorKind::ArityError,
                    "line " + std::to_string(form.line) + ", column " + std::to_string(form.column) +
                        ": '" + form.head() + "' takes " + std::to_string(min) +
                        (max != min ? "-" + std::to_string(max) : std::string()) + " argument(s)");
      for (const auto& [k, v] : kw)
        if (!allowed.count(k)) syntax_error(*v, "one of the keywords for '" + form.head() + "'");
    }
    const Sexp& at(std::size_t i) const { return *pos[i]; }
    const Sexp* key(const std::string& k) const {
      auto it = kw.find(k);
      return it == kw.end() ? nullptr : it->second;
    }
  };

  static std::string name_of(const Sexp& s) {
    if (!s.is_atom() || s.atom.empty() || s.atom[0] == ':') syntax_error(s, "NAME");
    return s.atom;
  }

  static std::vector<Term> terms_of(const Sexp& s, bool allow_star = false) {
    if (!s.is_list) syntax_error(s, "(t ...)");
    std::vector<Term> out;
    for (const Sexp& t : s.items) out.push_back(parse_term(t, allow_star));
    return out;
  }

  static std::vector<double> numbers_of(const Sexp& s) {
    if (!s.is_list) syntax_error(s, "(DECIMAL ...)");
    std::vector<double> out;
    for (const Sexp& x : s.items) {
      if (!x.is_atom()) syntax_error(x, "DECIMAL");
      try {
        out.push_back(to_double(parse_rational(x.atom)));
      } catch (const Error&) {
        syntax_error(x, "DECIMAL");
      }
    }
    return out;
  }

  static std::size_t count_of(const Sexp& s) {
    if (!s.is_atom() || s.atom.empty() || s.atom.size() > 9 ||
        !std::all_of(s.atom.begin(), s.atom.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      syntax_error(s, "non-negative integer");
    return std::stoul(s.atom);
  }

  template <class Map>
  auto& lookup(Map& m, const Sexp& s, const char* kind) {
    std::string n = name_of(s);
    auto it = m.find(n);
    if (it != m.end()) return it->second;
    std::string other = ws_.kind_of(n);
    if (!other.empty())
      throw Error(ErrorKind::KindMismatch, "'" + n + "' is a " + other + ", expected a " + kind);
    throw Error(ErrorKind::UnknownName, "no " + std::string(kind) + " named '" + n + "'");
  }

  template <class Map, class V>
  void bind(Map& m, const std::string& name, V value, const char* kind) {
    if (ws_.kind_of(name) == kind)
      throw Error(ErrorKind::InvalidArgument, std::string(kind) + " '" + name + "' is already bound");
    m.emplace(name, std::move(value));
  }

  Presentation& ring(const Sexp& s) { return lookup(ws_.rings, s, "ring"); }
  Morphism& hom(const Sexp& s) { return lookup(ws_.homs, s, "hom"); }

  ModelRing model(const Sexp& s) {
    if (s.is_list) return parse_model(s, 1);
    return lookup(ws_.models, s, "model");
  }

  static ModelRing parse_model(const Sexp& s, std::size_t from) {
    if (!s.is_list || s.items.size() <= from) syntax_error(s, "(model reals|prod K|jet :vars V :order K)");
    const Sexp& k = s.items[from];
    if (k.is_symbol("reals")) {
      if (s.items.size() != from + 1) syntax_error(s.items[from + 1], "')'");
      return ModelRing::reals();
    }
    if (k.is_symbol("prod")) {
      if (s.items.size() != from + 2) syntax_error(k, "prod K");
      return ModelRing::product(count_of(s.items[from + 1]));
    }
    if (k.is_symbol("jet")) {
      std::size_t vars = 1, order = 1;
      for (std::size_t i = from + 1; i < s.items.size(); i += 2) {
        if (i + 1 >= s.items.size()) syntax_error(s.items[i], "a value");
        if (s.items[i].is_symbol(":vars")) vars = count_of(s.items[i + 1]);
        else if (s.items[i].is_symbol(":order")) order = count_of(s.items[i + 1]);
        else syntax_error(s.items[i], "{:vars, :order}");
      }
      if (vars == 0) throw Error(ErrorKind::InvalidArgument, "a jet model needs at least one variable");
      return ModelRing::jet(vars, static_cast<unsigned>(order));
    }
    syntax_error(k, "{reals, prod, jet}");
  }

  Cover& cover(const Sexp& s) {
    auto& def = lookup(ws_.covers, s, "cover");
    if (!def.built) def.built = make_cover(ws_.rings.at(def.base), def.elements, def.unimod, cfg_);
    return *def.built;
  }

  void need_seed(const std::string& cmd) const {
    if (!seed_given_)
      throw Error(ErrorKind::InvalidArgument, "'" + cmd + "' samples and requires --seed");
  }

  // ---- reports -----------------------------------------------------------

  static Json header(const Sexp& form) {
    Json j;
    j["command"] = to_string(form);
    return j;
  }

  Json& note(Json& j, const Verdict& v) {
    j["status"] = std::string(to_string(v.status));
    if (v.is_refuted() && outcome_ == Outcome::Holds) outcome_ = Outcome::Refuted;
    return j;
  }

  static void ok(Json& j) { j["status"] = "ok"; }

  void push_error(const std::string& command, const Error& e) {
    Json j;
    if (!command.empty()) j["command"] = command;
    j["status"] = "error";
    j["error"] = std::string(to_string(e.kind()));
    j["message"] = e.what();
    if (e.witness()) j["witness"] = to_json(std::span<const double>(*e.witness()));
    reports_.push_back(std::move(j));
    outcome_ = Outcome::Error;
  }

  // ---- dispatch ----------------------------------------------------------

  Json dispatch(const Sexp& form) {
    const std::string head = form.head();
    if (head.empty()) syntax_error(form, "(command ...)");
    static const std::set<std::string> kSampling{
        "pushout", "flatten", "saturate", "cover-make", "cover-check", "cover-pullback",
        "cover-compose", "sheaf-check", "spec-sample", "phi", "phi-map", "local-check", "epi-check",
        "lex-suite", "vn-check", "star-hom-check", "equal", "axioms", "hom"};
    if (kSampling.count(head)) need_seed(head);
    Json j = header(form);
    Call c(form);

    if (head == "ring") {
      c.shape(1, 1, {"arity", "rels"});
      std::string n = name_of(c.at(0));
      if (!c.key("arity")) syntax_error(form, ":arity N");
      std::vector<Term> rels = c.key("rels") ? terms_of(*c.key("rels")) : std::vector<Term>{};
      Presentation p(count_of(*c.key("arity")), rels, n);
      bind(ws_.rings, n, p, "ring");
      ok(j);
      j["bound"] = n;
      j["ring"] = to_json(p);
      return j;
    }
    if (head == "hom") {
      c.shape(0, 1, {"src", "dst", "comps", "certs"});
      if (!c.key("src") || !c.key("dst") || !c.key("comps")) syntax_error(form, ":src NAME :dst NAME :comps (t ...)");
      const Presentation& src = ring(*c.key("src"));
      const Presentation& dst = ring(*c.key("dst"));
      std::vector<std::optional<IdealCertificate>> certs;
      if (const Sexp* cs = c.key("certs")) {
        if (!cs->is_list) syntax_error(*cs, "(((t ...)) ...)");
        for (const Sexp& one : cs->items) certs.push_back(certificate_of(one));
      }
      Morphism m(src, dst, terms_of(*c.key("comps")), certs);
      Verdict v = verify_morphism(m, cfg_);
      if (v.is_refuted())
        throw Error(ErrorKind::RelationViolation, "components do not respect the relations", v.witness);
      std::string n = c.pos.empty() ? "H" + std::to_string(ws_.homs.size()) : name_of(c.at(0));
      bind(ws_.homs, n, with_certificates(m, cfg_), "hom");
      note(j, v);
      j["bound"] = n;
      j["morphism"] = to_json(ws_.homs.at(n));
      j["verdict"] = to_json(v);
      return j;
    }
    if (head == "cover") {
      c.shape(1, 1, {"base", "elems", "unimod"});
      std::string n = name_of(c.at(0));
      if (!c.key("base") || !c.key("elems")) syntax_error(form, ":base NAME :elems (t ...)");
      const Presentation& base = ring(*c.key("base"));
      Workspace::CoverDef def{name_of(*c.key("base")), terms_of(*c.key("elems")), std::nullopt, std::nullopt};
      for (const Term& e : def.elements) check_arity(e, base.arity, "cover element");
      if (const Sexp* u = c.key("unimod")) def.unimod = terms_of(*u);
      bind(ws_.covers, n, def, "cover");
      ok(j);
      j["bound"] = n;
      j["certificate"] = def.unimod ? "supplied" : "search at check time";
      return j;
    }
    if (head == "model") {
      bool named = form.items.size() >= 2 && form.items[1].is_atom() &&
                   !form.items[1].is_symbol("reals") && !form.items[1].is_symbol("prod") &&
                   !form.items[1].is_symbol("jet");
      ModelRing m = parse_model(form, named ? 2 : 1);
      std::string n = named ? form.items[1].atom : "R";
      bind(ws_.models, n, m, "model");
      ok(j);
      j["bound"] = n;
      j["model"] = m.describe();
      return j;
    }

    if (head == "parse") {
      c.shape(1, 1);
      Term t = parse_term(c.at(0), true);
      ok(j);
      j["term"] = to_sexpr(t);
      j["arity"] = t.arity();
      j["size"] = t.size();
      j["normal_form"] = to_sexpr(t.has_star() ? star_normalize(t) : normalize(t));
      return j;
    }
    if (head == "eval") {
      c.shape(2, 2);
      Term t = parse_term(c.at(0), true);
      auto p = numbers_of(c.at(1));
      double v;
      if (t.has_star()) {
        check_arity(t, p.size());
        v = evaluate<double>(t, std::span<const double>(p), RealAlgebra{true});
        if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteResult, "value is not finite");
      } else {
        v = eval(t, p);
      }
      ok(j);
      j["value"] = v;
      return j;
    }
    if (head == "jet") {
      c.shape(3, 3);
      Term t = parse_term(c.at(0));
      auto base = numbers_of(c.at(1));
      unsigned k = static_cast<unsigned>(count_of(c.at(2)));
      Jet r = jet_eval(t, base, k);
      ok(j);
      j["order"] = k;
      j["coefficients"] = to_json(r.coefficients());
      return j;
    }
    if (head == "equal") {
      c.shape(3, 3);
      const Presentation& a = ring(c.at(0));
      Verdict v = equal_mod_ideal(Element(a, parse_term(c.at(1))), Element(a, parse_term(c.at(2))),
                                  std::nullopt, cfg_);
      note(j, v);
      j["verdict"] = to_json(v);
      return j;
    }
    if (head == "localize") {
      c.shape(2, 2, {"as"});
      const Presentation& a = ring(c.at(0));
      auto r = localize(a, parse_term(c.at(1)));
      std::string n = c.key("as") ? name_of(*c.key("as")) : a.name + ".loc" + std::to_string(++counter_);
      r.object.name = n;
      r.quotient.target.name = n;
      bind(ws_.rings, n, r.object, "ring");
      bind(ws_.homs, "eta." + n, r.quotient, "hom");
      ok(j);
      j["bound"] = Json::array({n, "eta." + n});
      j["ring"] = to_json(r.object);
      j["morphism"] = to_json(r.quotient);
      return j;
    }
    if (head == "coproduct") {
      c.shape(2, 2, {"as"});
      auto r = coproduct(ring(c.at(0)), ring(c.at(1)));
      std::string n = c.key("as") ? name_of(*c.key("as")) : "P" + std::to_string(++counter_);
      rename_target(r.object, {&r.left, &r.right}, n);
      bind(ws_.rings, n, r.object, "ring");
      bind(ws_.homs, n + ".inl", r.left, "hom");
      bind(ws_.homs, n + ".inr", r.right, "hom");
      ok(j);
      j["bound"] = Json::array({n, n + ".inl", n + ".inr"});
      j["ring"] = to_json(r.object);
      return j;
    }
    if (head == "coeq") {
      c.shape(2, 2, {"as"});
      auto r = coequalizer(hom(c.at(0)), hom(c.at(1)));
      std::string n = c.key("as") ? name_of(*c.key("as")) : "Q" + std::to_string(++counter_);
      rename_target(r.object, {&r.quotient}, n);
      bind(ws_.rings, n, r.object, "ring");
      bind(ws_.homs, n + ".q", r.quotient, "hom");
      ok(j);
      j["bound"] = Json::array({n, n + ".q"});
      j["ring"] = to_json(r.object);
      return j;
    }
    if (head == "pushout") {
      c.shape(2, 2, {"as"});
      auto r = pushout(hom(c.at(0)), hom(c.at(1)), cfg_);
      std::string n = c.key("as") ? name_of(*c.key("as")) : "P" + std::to_string(++counter_);
      rename_target(r.object, {&r.left, &r.right}, n);
      bind(ws_.rings, n, r.object, "ring");
      bind(ws_.homs, n + ".inl", r.left, "hom");
      bind(ws_.homs, n + ".inr", r.right, "hom");
      note(j, r.commutes);
      j["bound"] = Json::array({n, n + ".inl", n + ".inr"});
      j["ring"] = to_json(r.object);
      j["square"] = to_json(r.commutes);
      return j;
    }
    if (head == "flatten") {
      c.shape(3, 3, {"denominator"});
      std::optional<Term> den;
      if (const Sexp* d = c.key("denominator")) den = parse_term(*d);
      auto r = flatten_localization(ring(c.at(0)), parse_term(c.at(1)), parse_term(c.at(2)), cfg_, den);
      note(j, meet(r.round_trip, r.triangle));
      j["iterated"] = to_json(r.iterated);
      j["single"] = to_json(r.single);
      j["theta"] = to_json(r.theta.components);
      j["theta_inverse"] = to_json(r.theta_inverse.components);
      j["round_trip"] = to_json(r.round_trip);
      j["triangle"] = to_json(r.triangle);
      return j;
    }
    if (head == "saturate") {
      c.shape(3, 3);
      auto r = saturation_member(ring(c.at(0)), parse_term(c.at(1)), parse_term(c.at(2)), cfg_);
      note(j, r.verdict);
      j["inverse"] = r.inverse ? Json(to_sexpr(*r.inverse)) : Json(nullptr);
      j["verdict"] = to_json(r.verdict);
      return j;
    }
    if (head == "cover-make") {
      c.shape(2, 2, {"unimod", "as"});
      const Presentation& a = ring(c.at(0));
      std::optional<std::vector<Term>> lam;
      if (const Sexp* u = c.key("unimod")) lam = terms_of(*u);
      std::string n = c.key("as") ? name_of(*c.key("as")) : "C" + std::to_string(++counter_);
      return cover_report(j, n, name_of(c.at(0)), [&] { return make_cover(a, terms_of(c.at(1)), lam, cfg_); });
    }
    if (head == "cover-check") {
      c.shape(1, 1);
      auto& def = lookup(ws_.covers, c.at(0), "cover");
      std::string n = name_of(c.at(0));
      try {
        if (!def.built) def.built = make_cover(ws_.rings.at(def.base), def.elements, def.unimod, cfg_);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::CertificateRefuted || !e.witness()) throw;
        Verdict v = Verdict::refuted(*e.witness(), 0.0, e.what());
        note(j, v);
        j["verdict"] = to_json(v);
        return j;
      }
      Verdict v = check_cover(*def.built, cfg_);
      note(j, v);
      j["cover"] = to_json(*def.built);
      j["verdict"] = to_json(v);
      return j;
    }
    if (head == "cover-pullback") {
      c.shape(2, 2, {"as"});
      const Cover& cv = cover(c.at(0));
      const Morphism& g = hom(c.at(1));
      std::string n = c.key("as") ? name_of(*c.key("as")) : "C" + std::to_string(++counter_);
      auto r = pullback_cover(cv, g, cfg_);
      bind(ws_.covers, n, Workspace::CoverDef{ring_name(g.target), r.cover.elements, std::nullopt, r.cover}, "cover");
      note(j, meet(r.cover.verdict, r.squares));
      j["bound"] = n;
      j["cover"] = to_json(r.cover);
      j["squares"] = to_json(r.squares);
      return j;
    }
    if (head == "cover-compose") {
      c.shape(2, 2, {"mult", "as"});
      const Cover& cv = cover(c.at(0));
      const Sexp& refs = c.at(1);
      if (!refs.is_list) syntax_error(refs, "((t ...) ...)");
      std::vector<Refinement> rs;
      for (const Sexp& r : refs.items) rs.push_back({terms_of(r), std::nullopt});
      if (const Sexp* m = c.key("mult")) {
        if (!m->is_list || m->items.size() != rs.size()) syntax_error(*m, "one multiplier list per refinement");
        for (std::size_t i = 0; i < rs.size(); ++i)
          if (!(m->items[i].is_symbol("nil"))) rs[i].multipliers = terms_of(m->items[i]);
      }
      std::string n = c.key("as") ? name_of(*c.key("as")) : "C" + std::to_string(++counter_);
      auto r = compose_covers(cv, rs, cfg_);
      bind(ws_.covers, n, Workspace::CoverDef{ring_name(cv.base), r.cover.elements, std::nullopt, r.cover}, "cover");
      note(j, r.cover.verdict);
      j["bound"] = n;
      j["exponent"] = r.exponent;
      j["geometric_fallback"] = r.geometric_fallback;
      j["cover"] = to_json(r.cover);
      return j;
    }
    if (head == "sheaf-check") {
      c.shape(1, 2, {"structure"});
      const Cover& cv = cover(c.at(0));
      if (const Sexp* s = c.key("structure")) {
        auto r = sheaf_check_structure(cv, terms_of(*s), cfg_);
        note(j, r.separation);
        j["mode"] = "structure-sheaf";
        j["report"] = to_json(r);
        return j;
      }
      if (c.pos.size() != 2) syntax_error(form, "(sheaf-check COVER TARGET)");
      auto r = sheaf_check_representable(cv, ring(c.at(1)), cfg_);
      note(j, r.equalizer);
      j["mode"] = "point-model";
      j["presheaf"] = "Hom(" + name_of(c.at(1)) + ", -) over (model reals)";
      j["report"] = to_json(r);
      return j;
    }
    if (head == "spec-sample") {
      c.shape(2, 2);
      auto r = spec_sample(ring(c.at(0)), terms_of(c.at(1)), cfg_);
      Verdict v = r.uncovered ? Verdict::refuted(*r.uncovered, 0.0, "uncovered point")
                              : Verdict::supported(r.samples, 0.0, "all samples covered");
      for (const auto& f : r.flags) v.flag(f);
      note(j, v);
      j["report"] = to_json(r);
      return j;
    }
    if (head == "phi") {
      c.shape(2, 2);
      auto p = phi_object(model(c.at(0)), ring(c.at(1)), cfg_);
      ok(j);
      j["phi"] = to_json(p);
      return j;
    }
    if (head == "phi-map") {
      c.shape(2, 2);
      ModelRing m = model(c.at(0));
      const Morphism& h = hom(c.at(1));
      auto tgt = phi_object(m, h.target, cfg_), src = phi_object(m, h.source, cfg_);
      auto idx = phi_index_map(m, h, tgt, src, cfg_);
      ok(j);
      j["domain_count"] = tgt.solutions().size();
      j["codomain_count"] = src.solutions().size();
      j["map"] = idx;
      return j;
    }
    if (head == "local-check") {
      c.shape(1, 1);
      Verdict v = is_local(model(c.at(0)), cfg_);
      note(j, v);
      j["verdict"] = to_json(v);
      return j;
    }
    if (head == "epi-check") {
      c.shape(2, 3);
      ModelRing m = model(c.at(0));
      Verdict v = c.pos.size() == 2 ? epi_family_check(m, cover(c.at(1)), cfg_)
                                    : epi_family_check(m, ring(c.at(1)), terms_of(c.at(2)), cfg_);
      note(j, v);
      j["verdict"] = to_json(v);
      return j;
    }
    if (head == "lex-suite") {
      c.shape(1, 1);
      auto r = left_exactness_suite(model(c.at(0)), cfg_);
      note(j, r.verdict);
      j["report"] = to_json(r);
      return j;
    }
    if (head == "axioms") {
      c.shape(1, 1);
      auto r = check_axioms(model(c.at(0)), cfg_);
      note(j, r.verdict);
      j["samples"] = r.samples;
      j["discarded"] = r.discarded;
      j["projection_exact"] = r.projection_exact;
      j["composition_max_rel"] = r.composition_max_rel;
      j["verdict"] = to_json(r.verdict);
      return j;
    }
    if (head == "vn-normalize") {
      c.shape(1, 1);
      Term t = parse_term(c.at(0), true);
      ok(j);
      j["normal_form"] = to_sexpr(star_normalize(t));
      return j;
    }
    if (head == "vn-check") {
      c.shape(1, 1);
      Verdict v = vn_check(model(c.at(0)), cfg_);
      note(j, v);
      j["verdict"] = to_json(v);
      return j;
    }
    if (head == "idem") {
      c.shape(2, 2);
      ModelRing m = model(c.at(0));
      auto a = numbers_of(c.at(1));
      if (a.size() != m.carrier_size()) throw Error(ErrorKind::ArityMismatch, "value has the wrong size");
      ok(j);
      j["idempotent"] = value_json(idempotent_of(m, a));
      j["quasi_inverse"] = value_json(m.star(a));
      return j;
    }
    if (head == "star-hom-check") {
      c.shape(2, 2);
      CoordinateMap h{count_of(c.at(0)), {}};
      if (!c.at(1).is_list) syntax_error(c.at(1), "(INDEX ...)");
      for (const Sexp& i : c.at(1).items) h.index.push_back(count_of(i));
      Verdict v = star_hom_check(h, cfg_);
      note(j, v);
      j["verdict"] = to_json(v);
      return j;
    }
    syntax_error(form.items[0], "a command");
  }

  static std::optional<IdealCertificate> certificate_of(const Sexp& s) {
    if (s.is_symbol("nil")) return std::nullopt;
    if (!s.is_list) syntax_error(s, "((t ...)) or nil");
    if (s.items.empty()) return IdealCertificate{};
    // ((t ...)) or (t ...)
    if (s.items.size() == 1 && s.items[0].is_list && (s.items[0].items.empty() || s.items[0].items[0].is_list))
      return IdealCertificate{terms_of(s.items[0])};
    return IdealCertificate{terms_of(s)};
  }

  static void rename_target(Presentation& obj, std::initializer_list<Morphism*> arrows, const std::string& n) {
    obj.name = n;
    for (Morphism* m : arrows) m->target.name = n;
  }

  std::string ring_name(const Presentation& p) {
    for (const auto& [n, r] : ws_.rings)
      if (r == p) return n;
    std::string n = (p.name.empty() ? std::string("ring") : p.name) + "." + std::to_string(++counter_);
    ws_.rings.emplace(n, p);
    return n;
  }

  template <class Build>
  Json cover_report(Json& j, const std::string& n, const std::string& base, Build build) {
    Cover cv;
    try {
      cv = build();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CertificateRefuted || !e.witness()) throw;
      Verdict v = Verdict::refuted(*e.witness(), 0.0, e.what());
      note(j, v);
      j["verdict"] = to_json(v);
      return j;
    }
    bind(ws_.covers, n, Workspace::CoverDef{base, cv.elements, std::nullopt, cv}, "cover");
    note(j, cv.verdict);
    j["bound"] = n;
    j["cover"] = to_json(cv);
    return j;
  }

  Config cfg_;
  bool seed_given_;
  Workspace ws_;
  std::vector<Json> reports_;
  Outcome outcome_ = Outcome::Holds;
  std::size_t counter_ = 0;
};

}  // namespace smoothring
