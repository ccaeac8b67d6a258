// Command-line front end: law suites per effect, end-to-end effect demos
// with inversion round trips, and fixture verification for the finite
// category engine. Exit codes: 0 success, 1 property failure, 2 usage or
// parse error.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>

#include "invarr/effects.hpp"
#include "invarr/profcheck.hpp"

using namespace invarr;

namespace {

struct Options {
  int fin = 2;
  int maxlen = 2;
  int alphabet = 4;
  std::string format = "text";
  bool machine() const { return format == "machine"; }
  Bounds bounds() const { return Bounds{fin, maxlen, alphabet, 8}; }
};

int run_laws(const Options& opt, const std::string& effect) {
  const EffectEntry* entry = find_effect(effect);
  if (!entry) {
    std::cerr << "unknown effect '" << effect << "'; known effects:";
    for (const auto& e : effect_registry()) std::cerr << " " << e.name;
    std::cerr << "\n";
    return 2;
  }
  Bounds bounds = opt.bounds();
  ArrowInstance inst = entry->make_instance(bounds);
  std::vector<ArrowValue> fixtures = entry->make_fixtures(inst, bounds);
  LawReport report = check_laws(inst, fixtures, entry->fragment, default_law_config(bounds));
  if (opt.machine()) {
    std::cout << "command=laws\neffect=" << effect << "\nfin=" << bounds.fin
              << "\nmaxlen=" << bounds.maxlen << "\nalphabet=" << bounds.alphabet << "\n"
              << report.to_machine();
  } else {
    std::cout << report.to_text();
  }
  return report.all_passed() ? 0 : 1;
}

void transcript_line(std::ostream& out, const std::string& key, const std::string& value) {
  out << key << "=" << value << "\n";
}

int run_demo_serialize(const Options& opt) {
  Bounds bounds = opt.bounds();
  CodecSpec codec = default_codec(bounds.alphabet, bounds.serialized_len);
  Ty t = Ty::prod(Ty::fin(bounds.fin), Ty::fin(bounds.fin));
  PartialIso ser = codec.serialize(t);
  std::ostringstream out;
  transcript_line(out, "demo", "serialize");
  transcript_line(out, "type", t.to_string());
  bool ok = true;
  for (const auto& v : enumerate(t)) {
    auto tokens = ser.forward(v);
    auto back = ser.backward(*tokens);
    ok = ok && back && *back == v;
    transcript_line(out, "encode " + v.to_string(), tokens->to_string() +
                        " decode=" + (back ? back->to_string() : "undefined"));
  }
  // A non-canonical string: too long to be any canonical encoding.
  Value bogus = Value::seq({Value::atom(0), Value::atom(0), Value::atom(0)});
  bool rejected = !ser.backward(bogus).has_value();
  transcript_line(out, "decode " + bogus.to_string(), rejected ? "undefined" : "DECODED");
  ok = ok && rejected;

  // do/undo on the serializer instance.
  ArrowInstance inst = serializer_instance(codec);
  ArrowValue p = arr(inst, symmetry(Ty::fin(bounds.fin), Ty::fin(bounds.fin)));
  ArrowValue round = seq(inst, seq(inst, p, inv(inst, p)), p);
  bool undo_ok = arrow_eq(inst, round, p);
  transcript_line(out, "do-undo-do", undo_ok ? "pass" : "fail");
  ok = ok && undo_ok;
  transcript_line(out, "result", ok ? "pass" : "fail");
  std::cout << out.str();
  return ok ? 0 : 1;
}

int run_demo_state(const Options& opt) {
  Bounds bounds = opt.bounds();
  Ty x = Ty::fin(bounds.fin), s = Ty::fin(bounds.fin);
  ArrowInstance inst = rstate_instance(s);
  PartialIso bump = cyclic_group(bounds.fin).mul(Value::atom(1 % bounds.fin));
  ArrowValue p = seq(inst, rstate_update(x, bump), rstate_get(x, s));
  std::ostringstream out;
  transcript_line(out, "demo", "state");
  for (const auto& v : enumerate(p.core.dom())) {
    auto w = p.core.forward(v);
    transcript_line(out, "forward " + v.to_string(), w ? w->to_string() : "undefined");
  }
  ArrowValue q = inv(inst, p);
  for (const auto& v : enumerate(q.core.dom())) {
    auto w = q.core.forward(v);
    transcript_line(out, "backward " + v.to_string(), w ? w->to_string() : "undefined");
  }
  bool ok = arrow_eq(inst, seq(inst, seq(inst, p, q), p), p);
  bool collapses = arrow_eq(inst, seq(inst, rstate_get(x, s), rstate_assert(x, s)),
                            arr(inst, identity(x)));
  transcript_line(out, "do-undo-do", ok ? "pass" : "fail");
  transcript_line(out, "get-then-assert", collapses ? "pass" : "fail");
  transcript_line(out, "result", (ok && collapses) ? "pass" : "fail");
  std::cout << out.str();
  return (ok && collapses) ? 0 : 1;
}

int run_demo_rewriter(const Options& opt, int modulus) {
  GroupSpec group = cyclic_group(modulus);
  Ty x = Ty::fin(opt.fin);
  ArrowInstance inst = rewriter_instance(group);
  ArrowValue step = rewrite(group, x, Value::atom(1 % modulus));
  std::ostringstream out;
  transcript_line(out, "demo", "rewriter");
  transcript_line(out, "group", group.name);
  ArrowValue walk = step;
  for (int i = 1; i < modulus; ++i) walk = seq(inst, walk, step);
  bool cycles = arrow_eq(inst, walk, arr(inst, identity(x)));
  Value state = Value::atom(0);
  std::string orbit = state.to_string();
  for (int i = 0; i < modulus; ++i) {
    state = *group.mul(Value::atom(1 % modulus)).forward(state);
    orbit += " -> " + state.to_string();
  }
  transcript_line(out, "orbit", orbit);
  bool undo = arrow_eq(inst, seq(inst, step, rewrite(group, x, *group.inverse.forward(Value::atom(1 % modulus)))),
                       arr(inst, identity(x)));
  transcript_line(out, "rewrite-cycle", cycles ? "pass" : "fail");
  transcript_line(out, "rewrite-unwrite", undo ? "pass" : "fail");
  transcript_line(out, "result", (cycles && undo) ? "pass" : "fail");
  std::cout << out.str();
  return (cycles && undo) ? 0 : 1;
}

int run_demo_info(const Options& opt) {
  Ty x = Ty::fin(opt.fin);
  ArrowInstance inst = info_instance();
  std::ostringstream out;
  transcript_line(out, "demo", "info");
  ArrowValue er = info_erase(x);
  ArrowValue cr = info_create(x);
  for (const auto& [v, w] : er.core.forward_graph())
    transcript_line(out, "erase " + v.to_string(), w.to_string());
  bool inv_ok = arrow_eq(inst, inv(inst, er), cr);
  bool collapse = arrow_eq(inst, seq(inst, cr, er), arr(inst, identity(Ty::unit())));
  bool undo = arrow_eq(inst, seq(inst, seq(inst, er, inv(inst, er)), er), er);
  transcript_line(out, "inv-erase-is-create", inv_ok ? "pass" : "fail");
  transcript_line(out, "create-then-erase-is-id", collapse ? "pass" : "fail");
  transcript_line(out, "do-undo-do", undo ? "pass" : "fail");
  bool ok = inv_ok && collapse && undo;
  transcript_line(out, "result", ok ? "pass" : "fail");
  std::cout << out.str();
  return ok ? 0 : 1;
}

int run_profcheck(const Options& opt, const std::string& path) {
  Fixture fixture;
  try {
    fixture = load_fixture(path);
  } catch (const FixtureParseError& e) {
    std::cerr << "fixture parse error: " << path << ": " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  FixtureOutcome outcome = run_fixture(fixture);
  if (opt.machine()) {
    std::cout << "command=profcheck\nfixture=" << fixture.cat.name << "\n"
              << outcome.report.to_machine()
              << "expectations=" << (outcome.expectations_met ? "met" : "unmet") << "\n";
  } else {
    std::cout << "fixture '" << fixture.cat.name << "'\n" << outcome.report.to_text();
    std::cout << (outcome.expectations_met ? "expectations met"
                                           : "EXPECTATION MISMATCH: " + outcome.mismatch)
              << "\n";
  }
  return outcome.expectations_met ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"reversible-effect law harness and finite category checker"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--fin", opt.fin, "atom count for the base finite type")->check(CLI::PositiveNumber);
  app.add_option("--maxlen", opt.maxlen, "sequence length bound");
  app.add_option("--alphabet", opt.alphabet, "serializer alphabet size")->check(CLI::PositiveNumber);
  app.add_option("--format", opt.format, "report format")
      ->check(CLI::IsMember({"text", "machine"}));

  std::string effect;
  auto* laws = app.add_subcommand("laws", "run the law suite for one effect instance");
  laws->add_option("name", effect, "effect instance name")->required(false);
  std::string effect_flag;
  laws->add_option("--effect", effect_flag, "effect instance name (alternative to positional)");

  std::string which;
  int modulus = 3;
  auto* demo = app.add_subcommand("demo", "run an effect demo with its inversion round trip");
  demo->add_option("which", which, "one of: serialize, state, rewriter, info")->required();
  demo->add_option("--mod", modulus, "group order for the rewriter demo")->check(CLI::PositiveNumber);

  std::string fixture_path;
  auto* prof = app.add_subcommand("profcheck", "verify a finite-category fixture file");
  prof->add_option("path", fixture_path, "fixture file path")->required(false);
  std::string fixture_flag;
  prof->add_option("--fixture", fixture_flag, "fixture file path (alternative to positional)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (laws->parsed()) {
      std::string name = !effect.empty() ? effect : effect_flag;
      if (name.empty()) {
        std::cerr << "laws: missing effect name\n";
        return 2;
      }
      return run_laws(opt, name);
    }
    if (demo->parsed()) {
      if (which == "serialize") return run_demo_serialize(opt);
      if (which == "state") return run_demo_state(opt);
      if (which == "rewriter") return run_demo_rewriter(opt, modulus);
      if (which == "info") return run_demo_info(opt);
      std::cerr << "unknown demo '" << which << "'\n";
      return 2;
    }
    if (prof->parsed()) {
      std::string path = !fixture_path.empty() ? fixture_path : fixture_flag;
      if (path.empty()) {
        std::cerr << "profcheck: missing fixture path\n";
        return 2;
      }
      return run_profcheck(opt, path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
