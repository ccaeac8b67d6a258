#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "invarr/effects.hpp"

using namespace invarr;

namespace {

Ty f2() { return Ty::fin(2); }

LawReport run_registry_entry(const std::string& name, Bounds bounds = Bounds{}) {
  const EffectEntry* entry = find_effect(name);
  REQUIRE(entry != nullptr);
  ArrowInstance inst = entry->make_instance(bounds);
  auto fixtures = entry->make_fixtures(inst, bounds);
  return check_laws(inst, fixtures, entry->fragment, default_law_config(bounds));
}

std::set<int> failing_laws(const LawReport& report) {
  std::set<int> out;
  for (const auto& law : report.laws)
    if (law.verdict == Verdict::Fail) out.insert(law.id);
  return out;
}

} // namespace

TEST_CASE("the identity lift is the morphism itself and inverts by dagger") {
  ArrowInstance inst = identity_instance();
  for (const auto& f : enumerate_homset(f2(), Ty::sum(Ty::unit(), f2()))) {
    ArrowValue lifted = arr(inst, f);
    CHECK(extensionally_equal(lifted.core, f));
    CHECK(extensionally_equal(inv(inst, lifted).core, dagger(f)));
  }
}

TEST_CASE("identity instance satisfies all fourteen laws over Fin(2)") {
  LawReport report = run_registry_entry("identity");
  CHECK(report.all_passed());
  for (int id = 1; id <= 14; ++id) {
    const LawResult* law = report.law(id);
    REQUIRE(law != nullptr);
    CHECK(law->verdict == Verdict::Pass);
    CHECK(law->cases > 0); // no vacuous quantifiers at the default bounds
  }
}

TEST_CASE("weak instances skip the first laws and pass the rest") {
  LawReport report = run_registry_entry("error");
  CHECK(report.all_passed());
  for (int id : {4, 5, 6, 7, 8, 12}) CHECK(report.law(id)->verdict == Verdict::Skipped);
  for (int id : {1, 2, 3, 9, 10, 11, 13, 14}) CHECK(report.law(id)->verdict == Verdict::Pass);
}

TEST_CASE("broken inversion is flagged on laws 10, 11 and 13 with witnesses") {
  LawReport report = run_registry_entry("mutant-noinv");
  CHECK_FALSE(report.all_passed());
  CHECK(failing_laws(report) == std::set<int>{10, 11, 13});
  CHECK_FALSE(report.law(13)->witness.empty());
  CHECK(report.law(9)->verdict == Verdict::Pass);
  CHECK(report.law(14)->verdict == Verdict::Pass);
}

TEST_CASE("broken first is flagged on laws 5 and 7 with witnesses") {
  LawReport report = run_registry_entry("mutant-badfirst");
  CHECK_FALSE(report.all_passed());
  CHECK(failing_laws(report) == std::set<int>{5, 7});
  CHECK_FALSE(report.law(7)->witness.empty());
}

TEST_CASE("a non-length-preserving vector fixture is flagged on law 4 and the invariant") {
  LawReport report = run_registry_entry("mutant-vector-len");
  CHECK_FALSE(report.all_passed());
  // Law 8 also catches it: composing the mutant with itself restores length,
  // so first distributes differently over the composite.
  CHECK(failing_laws(report) == std::set<int>{0, 4, 8});
  CHECK(report.law(0)->witness.find("length") != std::string::npos);
  CHECK_FALSE(report.law(4)->witness.empty());
}

TEST_CASE("a context-modifying reader fixture is flagged on the instance invariant only") {
  LawReport report = run_registry_entry("mutant-reader-ctx");
  CHECK_FALSE(report.all_passed());
  CHECK(failing_laws(report) == std::set<int>{0});
  CHECK(report.law(0)->witness.find("context") != std::string::npos);
}

TEST_CASE("redundancy: instances passing 13 and 14 also pass 11 and 12, and inv fixes arr id") {
  for (const char* name : {"identity", "rstate", "reader", "rewriter", "vector", "serializer",
                           "info", "error"}) {
    CAPTURE(name);
    LawReport report = run_registry_entry(name);
    REQUIRE(report.law(13)->verdict == Verdict::Pass);
    REQUIRE(report.law(14)->verdict == Verdict::Pass);
    CHECK(report.law(11)->verdict == Verdict::Pass);
    CHECK(report.law(12)->verdict != Verdict::Fail); // pass, or skipped for weak arrows

    const EffectEntry* entry = find_effect(name);
    ArrowInstance inst = entry->make_instance(Bounds{});
    ArrowValue lifted_id = arr(inst, identity(f2()));
    CHECK(arrow_eq(inst, inv(inst, lifted_id), lifted_id));
  }
}

TEST_CASE("combinator misuse throws") {
  ArrowInstance inst = identity_instance();
  ArrowInstance err = error_instance(f2());
  ArrowValue a = arr(inst, identity(f2()));
  ArrowValue b = arr(inst, identity(Ty::unit()));
  CHECK_THROWS_AS(seq(inst, a, b), std::invalid_argument);
  CHECK_THROWS_AS(seq(inst, a, arr(err, identity(f2()))), std::invalid_argument);
  CHECK_THROWS_AS(first(err, arr(err, identity(f2())), f2()), std::logic_error);
  CHECK_THROWS_AS(left(err, arr(err, identity(f2())), f2()), std::logic_error);
}

TEST_CASE("second mirrors first across the symmetry") {
  ArrowInstance inst = rstate_instance(f2());
  ArrowValue a = rstate_get(f2(), f2());
  ArrowValue s = second(inst, a, f2());
  // Manual construction: swap, run first, swap back.
  ArrowValue manual = seq(inst, seq(inst, arr(inst, symmetry(f2(), a.dom)),
                                    first(inst, a, f2())),
                          arr(inst, symmetry(a.cod, f2())));
  CHECK(arrow_eq(inst, s, manual));
  CHECK(arrow_eq(inst, second(inst, arr(inst, identity(f2())), f2()),
                 arr(inst, identity(Ty::prod(f2(), f2())))));
  // inv(second a) = second(inv a), a consequence of law 12 and unitarity.
  CHECK(arrow_eq(inst, inv(inst, second(inst, a, f2())), second(inst, inv(inst, a), f2())));
}

TEST_CASE("left acts on the tagged side only and preserves composition") {
  ArrowInstance inst = identity_instance();
  for (const auto& f : enumerate_homset(f2(), f2())) {
    ArrowValue lf = left(inst, arr(inst, f), f2());
    for (const auto& x : enumerate(f2())) {
      auto out = lf.core.forward(Value::in_left(x));
      auto expect = f.forward(x);
      CHECK(out.has_value() == expect.has_value());
      if (out) CHECK(*out == Value::in_left(*expect));
      CHECK(*lf.core.forward(Value::in_right(x)) == Value::in_right(x));
    }
  }
  CHECK(arrow_eq(inst, left(inst, arr(inst, identity(f2())), f2()),
                 arr(inst, identity(Ty::sum(f2(), f2())))));
  auto homset = enumerate_homset(f2(), f2());
  for (const auto& f : homset)
    for (const auto& g : homset) {
      ArrowValue a = arr(inst, f), b = arr(inst, g);
      CHECK(arrow_eq(inst, left(inst, seq(inst, a, b), f2()),
                     seq(inst, left(inst, a, f2()), left(inst, b, f2()))));
    }
}

TEST_CASE("fanout copies the input through both arrows") {
  ArrowInstance inst = identity_instance();
  ArrowValue ids = arr(inst, identity(f2()));
  CHECK(arrow_eq(inst, fanout(inst, ids, ids), arr(inst, diagonal(f2()))));

  ArrowInstance st = rstate_instance(f2());
  ArrowValue f = arr(st, identity(f2()));
  ArrowValue g = rstate_update(f2(), cyclic_group(2).mul(Value::atom(1)));
  ArrowValue fg = fanout(st, f, g);
  // Componentwise oracle: run f and g against the shared input and state.
  for (const auto& v : enumerate(fg.core.dom())) {
    auto out = fg.core.forward(v);
    const Value& x = v.first();
    const Value& s0 = v.second();
    auto fr = f.core.forward(Value::pair(x, s0));
    REQUIRE(fr);
    auto gr = g.core.forward(Value::pair(x, fr->second()));
    REQUIRE(gr);
    REQUIRE(out);
    CHECK(out->first() == Value::pair(fr->first(), gr->first()));
    CHECK(out->second() == gr->second());
  }
}

TEST_CASE("bind pairs the input with the intermediate result") {
  ArrowInstance inst = identity_instance();
  auto homset = enumerate_homset(f2(), f2());
  ArrowValue f = arr(inst, homset.back()); // transposition
  ArrowValue g = arr(inst, symmetry(f2(), f2()));
  ArrowValue bound = bind(inst, f, g);
  for (const auto& x : enumerate(f2())) {
    auto out = bound.core.forward(x);
    REQUIRE(out);
    CHECK(*out == Value::pair(*f.core.forward(x), x)); // σ of (x, f x)
  }
  CHECK_THROWS_AS(bind(inst, f, f), std::invalid_argument);
}

TEST_CASE("binding into the symmetry is fanning out with the identity") {
  for (const auto& inst : {identity_instance(), rstate_instance(f2())}) {
    CAPTURE(inst.name);
    for (const auto& p : enumerate_homset(f2(), f2())) {
      ArrowValue f = arr(inst, p);
      ArrowValue lhs = bind(inst, f, arr(inst, symmetry(f2(), f2())));
      ArrowValue rhs = fanout(inst, f, arr(inst, identity(f2())));
      CHECK(arrow_eq(inst, lhs, rhs));
    }
  }
}

TEST_CASE("do/undo holds for one hundred deterministic pipelines") {
  auto pipelines = generate_pipelines(100);
  REQUIRE(pipelines.size() == 100);
  std::set<Pipeline::Op> seen;
  std::function<void(const Pipeline&)> visit = [&](const Pipeline& p) {
    seen.insert(p.op);
    if (p.lhs) visit(*p.lhs);
    if (p.rhs) visit(*p.rhs);
  };
  for (const auto& p : pipelines) visit(p);
  CHECK(seen.size() == 6); // every constructor appears

  std::vector<ArrowInstance> instances = {identity_instance(), rstate_instance(f2()),
                                          vector_instance(2),
                                          serializer_instance(default_codec(4, 8)),
                                          info_instance()};
  for (const auto& inst : instances) {
    CAPTURE(inst.name);
    for (const auto& p : pipelines) {
      ArrowValue v = eval_pipeline(inst, p);
      ArrowValue round = seq(inst, seq(inst, v, inv(inst, v)), v);
      if (!arrow_eq(inst, round, v)) {
        CAPTURE(p.show());
        CHECK(false);
        break;
      }
    }
  }
}

namespace {

// Reversal permutation on a finite type (identity elsewhere): a self-inverse
// twist used to corrupt instances for sensitivity probes.
PartialIso reversal(const Ty& ty) {
  auto vs = enumerate(ty);
  PartialIso::Graph graph;
  for (size_t i = 0; i < vs.size(); ++i)
    graph.emplace(vs[i], ty.is(Ty::Kind::Fin) ? vs[vs.size() - 1 - i] : vs[i]);
  return PartialIso::from_graph(ty, ty, std::move(graph), "rev");
}

// Rotation by one on a finite type (identity elsewhere): not self-inverse.
PartialIso rotation(const Ty& ty) {
  auto vs = enumerate(ty);
  PartialIso::Graph graph;
  for (size_t i = 0; i < vs.size(); ++i)
    graph.emplace(vs[i], ty.is(Ty::Kind::Fin) ? vs[(i + 1) % vs.size()] : vs[i]);
  return PartialIso::from_graph(ty, ty, std::move(graph), "rot");
}

ArrowValue raw(const std::string& inst, Ty dom, Ty cod, PartialIso core) {
  ArrowValue v;
  v.instance = inst;
  v.dom = std::move(dom);
  v.cod = std::move(cod);
  v.core = std::move(core);
  return v;
}

std::vector<ArrowValue> endo_lifts(const ArrowInstance& inst) {
  std::vector<ArrowValue> out;
  for (const auto& f : enumerate_homset(Ty::fin(2), Ty::fin(2))) out.push_back(arr(inst, f));
  return out;
}

} // namespace

TEST_CASE("the harness is sensitive to a break in every law family") {
  LawCheckConfig cfg{{Ty::unit(), f2()}};

  // Law 1: composition that twists at the junction is not associative.
  ArrowInstance bad_seq = identity_instance();
  bad_seq.compose_values = [](const ArrowValue& a, const ArrowValue& b) {
    return raw("identity", a.dom, b.cod,
               compose(compose(a.core, b.core), reversal(b.cod)));
  };
  CHECK(check_laws(bad_seq, endo_lifts(bad_seq), Fragment::Full, cfg).law(1)->verdict ==
        Verdict::Fail);

  // Laws 2 and 3: a lift that post-twists is not functorial.
  ArrowInstance bad_lift = identity_instance();
  bad_lift.lift = [](const PartialIso& f) {
    return raw("identity", f.dom(), f.cod(), compose(f, reversal(f.cod())));
  };
  {
    LawReport rep = check_laws(bad_lift, endo_lifts(bad_lift), Fragment::Full, cfg);
    CHECK(rep.law(2)->verdict == Verdict::Fail);
    CHECK(rep.law(3)->verdict == Verdict::Fail);
  }

  // Laws 6 and 12: first that twists the ancilla breaks the associator
  // alignment, and (with a non-self-inverse twist) inversion symmetry.
  ArrowInstance bad_first = identity_instance();
  bad_first.first_op = [](const ArrowValue& a, const Ty& z) {
    return raw("identity", Ty::prod(a.dom, z), Ty::prod(a.cod, z),
               compose(tensor(a.core, identity(z)), tensor(identity(a.cod), rotation(z))));
  };
  {
    LawCheckConfig cfg3{{Ty::unit(), Ty::fin(3)}};
    std::vector<ArrowValue> fixtures;
    for (const auto& f : enumerate_homset(Ty::fin(3), Ty::fin(3)))
      fixtures.push_back(arr(bad_first, f));
    LawReport rep = check_laws(bad_first, fixtures, Fragment::Full, cfg3);
    CHECK(rep.law(6)->verdict == Verdict::Fail);
    CHECK(rep.law(12)->verdict == Verdict::Fail);
  }

  // Law 9: inversion that twists is not involutive.
  ArrowInstance bad_inv = identity_instance();
  bad_inv.invert = [](const ArrowValue& a) {
    return raw("identity", a.cod, a.dom, compose(dagger(a.core), reversal(a.dom)));
  };
  CHECK(check_laws(bad_inv, endo_lifts(bad_inv), Fragment::Full, cfg).law(9)->verdict ==
        Verdict::Fail);

  // Law 14: a constant inversion makes the candidate positives non-commuting.
  ArrowInstance bad_pos = identity_instance();
  bad_pos.invert = [](const ArrowValue& a) {
    return raw("identity", a.cod, a.dom, reversal(a.dom).relabel("const-inv"));
  };
  CHECK(check_laws(bad_pos, endo_lifts(bad_pos), Fragment::Full, cfg).law(14)->verdict ==
        Verdict::Fail);
}

TEST_CASE("pure pipelines evaluate to the lift of their pure denotation") {
  // The identity instance computes each pipeline's pure meaning; in every
  // other instance the same expression must equal the lift of that meaning.
  ArrowInstance pure = identity_instance();
  auto pipelines = generate_pipelines(100);
  std::vector<ArrowInstance> instances = {rstate_instance(f2()), reader_instance(f2()),
                                          rewriter_instance(cyclic_group(2)),
                                          vector_instance(2),
                                          serializer_instance(default_codec(4, 8)),
                                          info_instance()};
  for (const auto& inst : instances) {
    CAPTURE(inst.name);
    for (const auto& p : pipelines) {
      ArrowValue denotation = eval_pipeline(pure, p);
      ArrowValue effectful = eval_pipeline(inst, p);
      if (!arrow_eq(inst, effectful, arr(inst, denotation.core))) {
        CAPTURE(p.show());
        CHECK(false);
        break;
      }
    }
  }
}

TEST_CASE("law reports serialize one line per law") {
  LawReport report = run_registry_entry("error");
  std::string machine = report.to_machine();
  for (int id = 1; id <= 14; ++id)
    CHECK(machine.find("law=" + std::to_string(id) + " ") != std::string::npos);
  CHECK(machine.find("result=pass") != std::string::npos);
  CHECK(machine.find("verdict=skipped") != std::string::npos);
  // Machine output carries no timing, so reruns are byte-identical.
  LawReport again = run_registry_entry("error");
  CHECK(machine == again.to_machine());
}

TEST_CASE("instance equality is an equivalence relation on fixtures") {
  for (const char* name : {"identity", "rstate", "info", "serializer"}) {
    CAPTURE(name);
    const EffectEntry* entry = find_effect(name);
    ArrowInstance inst = entry->make_instance(Bounds{});
    auto fixtures = entry->make_fixtures(inst, Bounds{});
    for (const auto& a : fixtures) CHECK(arrow_eq(inst, a, a));
    for (const auto& a : fixtures)
      for (const auto& b : fixtures) {
        if (a.dom != b.dom || a.cod != b.cod) continue;
        bool ab = arrow_eq(inst, a, b);
        CHECK(ab == arrow_eq(inst, b, a));
        if (!ab) continue;
        for (const auto& c : fixtures) {
          if (b.dom != c.dom || b.cod != c.cod) continue;
          if (arrow_eq(inst, b, c)) CHECK(arrow_eq(inst, a, c));
        }
      }
  }
}
