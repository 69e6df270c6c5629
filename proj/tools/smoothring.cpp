#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "smoothring/smoothring.hpp"

namespace {

const std::set<std::string> kCommands{
    "parse",       "eval",        "jet",         "localize",       "coproduct",   "coeq",
    "pushout",     "flatten",     "saturate",    "cover-make",     "cover-check", "cover-pullback",
    "cover-compose", "sheaf-check", "spec-sample", "phi",          "phi-map",     "local-check",
    "epi-check",   "lex-suite",   "vn-normalize", "vn-check",      "idem",        "star-hom-check",
    "equal",       "axioms"};

bool read_file(const std::string& path, std::string& out) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    out = ss.str();
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finitely presented C-infinity rings, smooth Zariski covers and set models"};
  smoothring::Config cfg;
  std::optional<std::uint64_t> seed;
  std::string format = "text";
  std::string load;
  std::vector<std::string> args;

  app.add_option("--seed", seed, "seed for every sampling command")->envname("SMOOTHRING_SEED");
  app.add_option("--tol", cfg.tol, "relative tolerance")->envname("SMOOTHRING_TOL")->capture_default_str();
  app.add_option("--samples", cfg.samples, "zero-set samples per check")
      ->envname("SMOOTHRING_SAMPLES")
      ->capture_default_str();
  app.add_option("--nmax", cfg.nmax, "denominator-clearing exponent bound")
      ->envname("SMOOTHRING_NMAX")
      ->capture_default_str();
  app.add_option("--budget", cfg.budget, "enumeration budget")->envname("SMOOTHRING_BUDGET")->capture_default_str();
  app.add_option("--format", format, "report format")
      ->envname("SMOOTHRING_FORMAT")
      ->check(CLI::IsMember({"text", "structured"}))
      ->capture_default_str();
  app.add_option("--load", load, "session file to load before a single command");
  app.add_option("args", args, "SESSION-FILE, or COMMAND ARG...");
  app.positionals_at_end();
  CLI11_PARSE(app, argc, argv);

  if (seed) cfg.seed = *seed;
  smoothring::Session session(cfg, seed.has_value());

  auto emit = [&] {
    bool first = true;
    for (const auto& r : session.reports()) {
      if (format == "structured") {
        std::cout << r.dump() << '\n';
      } else {
        if (!first) std::cout << '\n';
        std::cout << smoothring::render_text(r);
      }
      first = false;
    }
  };

  if (args.empty() && load.empty()) {
    std::cerr << app.help();
    return 2;
  }
  std::string source;
  bool single = !args.empty() && kCommands.count(args[0]);
  std::string file = single ? load : (args.empty() ? load : args[0]);
  if (!single && args.size() > 1) {
    std::cerr << "unknown command '" << args[0] << "'\n";
    return 2;
  }
  if (!file.empty() && !read_file(file, source)) {
    std::cerr << "cannot read " << file << '\n';
    return 2;
  }
  bool ok = session.run_source(source);
  if (ok && single) {
    std::string form = "(" + args[0];
    for (std::size_t i = 1; i < args.size(); ++i) form += " " + args[i];
    form += ")";
    try {
      session.run_form(smoothring::read_one(form));
    } catch (const smoothring::Error& e) {
      session.run_source(form);  // reports the syntax error
    }
  }
  emit();
  return static_cast<int>(session.outcome());
}
