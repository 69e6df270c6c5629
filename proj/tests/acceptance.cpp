// Standalone acceptance run: one PASS/FAIL line per criterion.
// usage: acceptance TOOL CORPUS_DIR

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "smoothring/site.hpp"
#include "smoothring/models.hpp"
#include "smoothring/vn.hpp"

using namespace smoothring;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Checker {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && out_.pass) out_.detail = what;
    out_.pass = out_.pass && ok;
  }
  void note(const std::string& s) {
    if (out_.pass) out_.detail = s;
  }
  Outcome result() const { return out_; }

 private:
  Outcome out_;
};

Config config(std::uint64_t seed = 1) {
  Config c;
  c.seed = seed;
  return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const Term x = var(0);
const Term f = apply(Prim::Recip1pSq, var(0));

std::vector<Term> ones(std::size_t n) { return std::vector<Term>(n, cnst(1)); }

// ---- 1 ----------------------------------------------------------------------

Outcome axioms() {
  Checker c;
  auto t0 = std::chrono::steady_clock::now();
  std::size_t discarded = 0;
  for (const ModelRing& r : {ModelRing::reals(), ModelRing::product(3), ModelRing::jet(2, 2)}) {
    auto rep = check_axioms(r, config(), 200, 1e-9);
    c.require(rep.samples == 200, r.describe() + ": expected 200 samples");
    c.require(rep.projection_exact, r.describe() + ": projection axiom not exact");
    c.require(rep.composition_max_rel <= 1e-9, r.describe() + ": composition rel error " +
                                                   std::to_string(rep.composition_max_rel));
    c.require(rep.verdict.holds(), r.describe() + ": verdict refuted");
    discarded += rep.discarded;
  }
  double dt = seconds_since(t0);
  c.require(dt < 10.0, "runtime " + std::to_string(dt) + " s");
  c.note("3 models x 200 samples, " + std::to_string(discarded) + " discarded, " + std::to_string(dt) + " s");
  return c.result();
}

// ---- 2 ----------------------------------------------------------------------

double central_difference(const Term& t, double a, double h = 1e-5) {
  return (eval(t, Point{a + h}) - eval(t, Point{a - h})) / (2 * h);
}

bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

Outcome jets() {
  Checker c;
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(derive_seed(0, "acceptance-jet"));
  std::size_t checks = 0;
  for (Prim p : kAllPrims) {
    const Term t = apply(p, x);
    for (int s = 0; s < 50; ++s) {
      double a = rng.uniform(-3, 3);
      double d = jet_eval(t, Point{a}, 1)[1], fd = central_difference(t, a);
      c.require(rel_close(d, fd, 1e-5), std::string(prim_name(p)) + " at " + std::to_string(a));
      ++checks;
    }
  }
  TermGenerator gen{1, 4, true, false};
  std::size_t composites = 0;
  while (composites < 100) {
    Term t = gen(rng);
    if (t.arity() == 0) continue;
    double a = rng.uniform(-2, 2);
    double v = eval_or_nan(t, Point{a});
    double fd = central_difference(t, a);
    if (!std::isfinite(v) || !std::isfinite(fd)) continue;
    double d = jet_eval(t, Point{a}, 1)[1];
    c.require(rel_close(d, fd, 1e-5), to_sexpr(t) + " at " + std::to_string(a) + ": jet " +
                                          std::to_string(d) + " vs " + std::to_string(fd));
    ++composites;
    ++checks;
  }
  double dt = seconds_since(t0);
  c.require(dt < 10.0, "runtime " + std::to_string(dt) + " s");
  c.note(std::to_string(kAllPrims.size()) + " primitives + " + std::to_string(composites) +
         " composites, " + std::to_string(checks) + " checks, " + std::to_string(dt) + " s");
  return c.result();
}

// ---- 3 ----------------------------------------------------------------------

Outcome localization() {
  Checker c;
  struct Case {
    Presentation a, b;
    std::vector<Term> comps;
    std::vector<Term> elems;
  };
  const Presentation f1 = Presentation::free(1, "F"), f2 = Presentation::free(2, "F2");
  const Presentation cubic(1, {x * x * x - x}, "A");
  const Presentation cubic_pair(2, {var(0) * var(0) * var(0) - var(0), var(1)}, "B");
  const std::vector<Term> univ{x, cnst(1) + x * x, f};
  std::vector<Case> cases{
      {f1, f1, {x + cnst(1)}, univ},
      {f1, f1, {x * x}, univ},
      {f1, f1, {apply(Prim::Sin, x)}, univ},
      {f1, f1, {cnst(2) * x}, univ},
      {f1, f1, {apply(Prim::Exp, x)}, univ},
      {cubic, cubic_pair, {var(0) + var(1)}, {x + cnst(2), x * x + cnst(1), f}},
      {f2, f1, {x, x * x}, {var(0) * var(1) + cnst(3), var(0)}},
  };
  std::size_t squares = 0;
  for (const Case& k : cases) {
    Morphism g = with_certificates(Morphism(k.a, k.b, k.comps), config());
    for (const Term& el : k.elems) {
      Morphism gp = localized_morphism(g, el);
      auto la = localize(k.a, el), lb = localize(k.b, g(el));
      Verdict vm = verify_morphism(gp, config());
      Verdict sq = morphisms_agree(compose(gp, la.quotient), compose(lb.quotient, g), config());
      std::string what = "square at " + to_sexpr(el) + " along " + to_sexpr(k.comps[0]);
      c.require(vm.is_proven(), what + ": localized map not Proven");
      c.require(sq.is_proven(), what + ": square not Proven");
      ++squares;
    }
  }
  c.require(squares >= 20, "only " + std::to_string(squares) + " squares");

  struct Flat {
    Presentation a;
    Term first, second;
  };
  std::vector<Flat> flats{{cubic, x + cnst(2), x + cnst(2)},
                          {f2, cnst(1), var(0) * var(1) + cnst(3)},
                          {f1, x, x * x + cnst(1)},
                          {f2, var(0), var(1)},
                          {f1, f, cnst(1) - f}};
  for (const Flat& fl : flats) {
    auto r = flatten_localization(fl.a, fl.first, fl.second, config());
    std::string what = "flatten " + to_sexpr(fl.first) + ", " + to_sexpr(fl.second);
    c.require(r.round_trip.is_proven(), what + ": round trip not Proven");
    c.require(r.triangle.is_proven(), what + ": triangle not Proven");
  }

  std::vector<Presentation> units{f1, f2, cubic, Presentation(1, {apply(Prim::Sin, x)}, "S")};
  for (const Presentation& a : units) {
    auto l = localize(a, cnst(1));
    c.require(verify_inverse_pair(l.quotient, unit_localization_inverse(a), config()).is_proven(),
              "unit localization not Proven");
  }
  c.note(std::to_string(squares) + " squares, " + std::to_string(flats.size()) + " flattenings, " +
         std::to_string(units.size()) + " unit localizations, all Proven");
  return c.result();
}

// ---- 4, 5, 7 shared corpus --------------------------------------------------

struct CoverCorpus {
  std::vector<Cover> covers;
  struct Broken {
    Presentation base;
    std::vector<Term> elems;
    std::optional<std::vector<Term>> lambdas;
    bool unit_ideal = false;  // only the certificate is wrong
  };
  std::vector<Broken> broken;
};

Morphism endo(const Term& image) { return Morphism(Presentation::free(1, "F"), Presentation::free(1, "F"), {image}); }

CoverCorpus build_corpus() {
  CoverCorpus k;
  const Presentation f1 = Presentation::free(1, "F"), f2 = Presentation::free(2, "F2");
  const Presentation cubic(1, {x * x * x - x}, "A");
  auto add = [&](const Presentation& a, std::vector<Term> e, std::optional<std::vector<Term>> lam) {
    k.covers.push_back(make_cover(a, std::move(e), std::move(lam), config()));
  };
  add(f1, {f, cnst(1) - f}, ones(2));
  add(f1, {x * x, cnst(1) - x * x}, std::nullopt);
  add(f1, {x * x, (x - cnst(1)) * (x - cnst(1)), (x - cnst(2)) * (x - cnst(2))}, std::nullopt);
  add(f1, {f * f, cnst(2) * f * (cnst(1) - f), (cnst(1) - f) * (cnst(1) - f)}, ones(3));
  add(Presentation::free(3, "F3"), {cnst(1)}, ones(1));
  add(f2, {apply(Prim::Recip1pSq, var(0)), cnst(1) - apply(Prim::Recip1pSq, var(0))}, ones(2));
  add(cubic, {x, cnst(1) - x * x}, std::vector<Term>{x, cnst(1)});
  add(f1, {cnst(2)}, std::vector<Term>{cnst(Rational(1, 2))});
  add(f1, {apply(Prim::Sin, x) * apply(Prim::Sin, x), apply(Prim::Cos, x) * apply(Prim::Cos, x)}, ones(2));

  // three legs by refining the first leg of (f, 1 − f): ½·f + (1 − f/2) = 1 on D(f)
  const Term half = cnst(Rational(1, 2));
  std::vector<Refinement> refs{{{f, cnst(1) - half * f}, std::vector<Term>{half, cnst(1)}},
                               {{cnst(1)}, ones(1)}};
  k.covers.push_back(compose_covers(k.covers[0], refs, config()).cover);

  k.covers.push_back(isomorphism_cover(endo(x + cnst(1)), endo(x - cnst(1)), config()).cover);

  k.broken = {{f1, {x}, std::nullopt},
              {f1, {x, x - cnst(1)}, ones(2), true},
              {f1, {x * x}, std::nullopt},
              {f2, {var(0), var(1)}, std::nullopt},
              {f1, {x * x - cnst(1), x * x * x - x}, std::nullopt},
              {cubic, {x}, std::nullopt}};
  return k;
}

bool geometrically_clean(const Cover& c) {
  if (c.verdict.is_proven()) return true;
  return c.verdict.holds() && spec_sample(c.base, c.elements, config()).all_covered();
}

Outcome pretopology(const CoverCorpus& k) {
  Checker c;
  c.require(k.covers.size() >= 10, "corpus has " + std::to_string(k.covers.size()) + " covers");
  bool three = false;
  for (const Cover& cv : k.covers) {
    std::string what = "cover " + to_sexpr(cv.elements[0]) + " ... (" + std::to_string(cv.elements.size()) + ")";
    c.require(geometrically_clean(cv), what + ": not accepted");
    three = three || cv.elements.size() == 3;

    // stability along the identity, and along x ↦ x² + 1 over C∞(ℝ)
    std::vector<Morphism> gs{identity(cv.base)};
    if (cv.base == Presentation::free(1)) gs.push_back(endo(x * x + cnst(1)));
    for (const Morphism& g : gs) {
      auto pb = pullback_cover(cv, g, config());
      c.require(geometrically_clean(pb.cover), what + ": pullback not accepted");
      c.require(pb.squares.holds(), what + ": pullback square fails");
    }

    // transitivity with trivial refinements
    std::vector<Refinement> refs(cv.elements.size(), Refinement{{cnst(1)}, ones(1)});
    auto comp = compose_covers(cv, refs, config());
    c.require(geometrically_clean(comp.cover), what + ": composite not accepted");
  }
  c.require(three, "no three-element cover");

  auto iso = isomorphism_cover(endo(x + cnst(1)), endo(x - cnst(1)), config());
  c.require(iso.inverse_pair.is_proven() && iso.unit_localization.is_proven() && iso.cover.verdict.is_proven(),
            "isomorphism cover not Proven");

  std::size_t refuted = 0;
  for (const auto& b : k.broken) {
    try {
      make_cover(b.base, b.elems, b.lambdas, config());
      c.require(false, "broken family " + to_sexpr(b.elems[0]) + " accepted");
    } catch (const Error& e) {
      bool ok = e.kind() == ErrorKind::CertificateRefuted && e.witness().has_value();
      c.require(ok, "broken family " + to_sexpr(b.elems[0]) + ": " + e.what());
      if (ok) ++refuted;
    }
  }
  c.note(std::to_string(k.covers.size()) + " covers with pullback and composition, " + std::to_string(refuted) +
         " broken families Refuted with witnesses");
  return c.result();
}

// ---- 5 ----------------------------------------------------------------------

Outcome sheaves(const CoverCorpus& k) {
  Checker c;
  const Presentation pm1(1, {x * x - cnst(1)}, "B2"), p3(1, {x * (x * x - cnst(1))}, "B3");
  const Presentation point = Presentation::free(0, "R0");
  struct Pair {
    const Cover* cover;
    Presentation target;
    std::size_t target_points;
  };
  std::vector<Pair> pairs{{&k.covers[4], pm1, 2}, {&k.covers[0], point, 1}, {&k.covers[0], p3, 3},
                          {&k.covers[0], pm1, 2}, {&k.covers[2], pm1, 2},  {&k.covers[6], pm1, 2},
                          {&k.covers[3], pm1, 2}};
  std::size_t families = 0;
  for (const Pair& p : pairs) {
    auto rep = sheaf_check_representable(*p.cover, p.target, config());
    std::string what = "pair " + to_sexpr(p.cover->elements[0]) + " -> " + p.target.name;
    // oracle: every sampled point lies in a leg, so matching families are all maps into φ(B)
    double expected = std::pow(static_cast<double>(p.target_points), static_cast<double>(rep.points));
    c.require(rep.target_points == p.target_points, what + ": target enumeration");
    c.require(rep.exhaustive, what + ": not exhaustive");
    c.require(rep.points > 0, what + ": no points");
    c.require(static_cast<double>(rep.matching_families) == expected, what + ": matching family count");
    c.require(rep.glued_uniquely == rep.matching_families, what + ": gluing failure or non-uniqueness");
    c.require(rep.equalizer.holds(), what + ": equalizer refuted");
    families += rep.matching_families;
  }
  c.note(std::to_string(pairs.size()) + " pairs, " + std::to_string(families) + " matching families glued uniquely");
  return c.result();
}

// ---- 6 ----------------------------------------------------------------------

Outcome left_exactness() {
  Checker c;
  std::size_t coeqs = 0;
  for (const ModelRing& r : {ModelRing::reals(), ModelRing::product(2), ModelRing::jet(1, 2)}) {
    auto rep = left_exactness_suite(r, config());
    c.require(rep.terminal_points == 1, r.describe() + ": terminal");
    c.require(rep.failures.empty(), r.describe() + ": " + (rep.failures.empty() ? "" : rep.failures[0]));
    c.require(!rep.products.empty(), r.describe() + ": no products");
    for (const auto& p : rep.products)
      c.require(p.product == p.left * p.right && p.bijective, r.describe() + ": product " + p.name);
    c.require(rep.coequalizers.size() >= 10, r.describe() + ": fewer than 10 coequalizers");
    for (const auto& q : rep.coequalizers)
      c.require(q.equal && q.equalizer == q.coequalizer, r.describe() + ": coequalizer " + q.name);
    c.require(rep.verdict.holds(), r.describe() + ": verdict refuted");
    coeqs += rep.coequalizers.size();
  }
  auto r = ModelRing::reals();
  Presentation a(1, {x * x - cnst(1)}, "A"), b(1, {x * x - cnst(4)}, "B");
  auto n = phi_object(r, coproduct(a, b).object, config()).solutions().size();
  c.require(n == 4, "2 x 2 product has " + std::to_string(n) + " points");
  c.note("terminal, products (2 x 2 = 4), " + std::to_string(coeqs) + " coequalizer instances");
  return c.result();
}

// ---- 7 ----------------------------------------------------------------------

Outcome locality(const CoverCorpus& k) {
  Checker c;
  c.require(is_local(ModelRing::reals(), config()).is_proven(), "reals not Proven local");
  c.require(is_local(ModelRing::jet(1, 2), config()).is_proven(), "jet(1,2) not Proven local");
  c.require(is_local(ModelRing::jet(2, 3), config()).is_proven(), "jet(2,3) not Proven local");
  Verdict p2 = is_local(ModelRing::product(2), config());
  c.require(p2.is_refuted() && p2.witness == Point{1.0, 0.0}, "prod 2 not Refuted with (1, 0)");
  for (const Cover& cv : k.covers)
    c.require(epi_family_check(ModelRing::reals(), cv, config()).holds(),
              "epi check fails on accepted cover " + to_sexpr(cv.elements[0]));
  std::size_t planted = 0;
  for (const auto& b : k.broken) {
    if (b.unit_ideal) continue;
    ++planted;
    Verdict v = epi_family_check(ModelRing::reals(), b.base, b.elems, config());
    c.require(v.is_refuted() && v.witness.has_value(), "epi check passes planted non-cover " + to_sexpr(b.elems[0]));
  }
  c.note("reals and jets local, prod 2 witness (1, 0), epi on " + std::to_string(k.covers.size()) + " covers and " +
         std::to_string(planted) + " planted non-covers");
  return c.result();
}

// ---- 8 ----------------------------------------------------------------------

Outcome vn() {
  Checker c;
  Rng rng(derive_seed(0, "acceptance-sigma"));
  TermGenerator exact{2, 4, false, true}, smooth{2, 3, true, true};
  std::vector<Term> terms;
  for (int i = 0; i < 50; ++i) terms.push_back(i % 5 == 4 ? smooth(rng) : exact(rng));
  terms.push_back(x * (star(x) * x));
  terms.push_back(star(var(1)) * (var(1) * star(var(1))));
  std::size_t discarded = 0, checked = 0;
  for (const ModelRing& r : {ModelRing::reals(), ModelRing::product(2), ModelRing::product(3)}) {
    auto rep = sigma_soundness(terms, r, 10, config());
    c.require(rep.checked >= 500, r.describe() + ": only " + std::to_string(rep.checked) + " samples");
    c.require(rep.exact_mismatches == 0, r.describe() + ": exact mismatch");
    c.require(rep.verdict.holds(), r.describe() + ": sigma verdict refuted");
    discarded += rep.discarded;
    checked += rep.checked;
  }

  Rng idem(derive_seed(0, "acceptance-star-idem"));
  TermGenerator gen{2, 4, true, true};
  for (int i = 0; i < 1000; ++i) {
    Term t = gen(idem);
    Term n = star_normalize(t);
    c.require(star_normalize(n) == n, "star_normalize not idempotent on " + to_sexpr(t));
  }

  for (const ModelRing& r : {ModelRing::reals(), ModelRing::product(4)}) {
    auto rep = vn_laws(r, config(), 500);
    c.require(rep.double_star_failures == 0, r.describe() + ": (x*)* = x fails");
    c.require(rep.idempotent_failures == 0, r.describe() + ": e^2 = e fails");
  }

  auto jet = ModelRing::jet(1, 1);
  Verdict v = vn_check(jet, config());
  bool nilpotent = v.witness && jet.mul(*v.witness, *v.witness) == ModelRing::Value(v.witness->size(), 0.0) &&
                   std::any_of(v.witness->begin(), v.witness->end(), [](double d) { return d != 0.0; });
  c.require(v.is_refuted() && nilpotent, "jet vn_check not Refuted with a nilpotent witness");
  c.note(std::to_string(checked) + " sigma samples, 0 exact mismatches, " + std::to_string(discarded) +
         " overflow discards; 1000 idempotence checks; jet witness nilpotent");
  return c.result();
}

// ---- 9 ----------------------------------------------------------------------

bool run_tool(const std::string& cmd, std::string& out, int& status) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return false;
  std::array<char, 4096> buf{};
  out.clear();
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  status = pclose(pipe);
  return true;
}

Outcome determinism(const std::string& tool, const std::string& corpus) {
  Checker c;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(corpus))
    if (e.path().extension() == ".sr") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  c.require(!files.empty(), "no session files in " + corpus);
  std::size_t bytes = 0;
  for (const auto& p : files) {
    std::string cmd = "'" + tool + "' --seed 7 --format structured '" + p.string() + "' 2>&1";
    std::string a, b;
    int sa = 0, sb = 0;
    c.require(run_tool(cmd, a, sa) && run_tool(cmd, b, sb), "cannot run " + cmd);
    c.require(!a.empty(), p.filename().string() + ": empty output");
    c.require(a == b && sa == sb, p.filename().string() + ": runs differ");
    bytes += a.size();
  }
  c.note(std::to_string(files.size()) + " sessions, " + std::to_string(bytes) + " bytes identical across runs");
  return c.result();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance TOOL CORPUS_DIR\n";
    return 2;
  }
  const std::string tool = argv[1], corpus = argv[2];
  bool all = true;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name << ": " << o.detail << std::endl;
  };

  CoverCorpus k;
  bool corpus_ok = true;
  try {
    k = build_corpus();
  } catch (const std::exception& e) {
    corpus_ok = false;
    std::cout << "cover corpus construction failed: " << e.what() << std::endl;
  }
  auto with_corpus = [&](Outcome (*fn)(const CoverCorpus&)) {
    return [&, fn] { return corpus_ok ? fn(k) : Outcome{false, "cover corpus unavailable"}; };
  };

  report(1, "structure axioms", axioms);
  report(2, "jet derivatives", jets);
  report(3, "localization laws", localization);
  report(4, "pretopology", with_corpus(pretopology));
  report(5, "sheaf condition", with_corpus(sheaves));
  report(6, "left exactness", left_exactness);
  report(7, "locality", with_corpus(locality));
  report(8, "von Neumann calculus", vn);
  report(9, "determinism", [&] { return determinism(tool, corpus); });
  return all ? 0 : 1;
}
