#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "invarr/effects.hpp"

using namespace invarr;

namespace {

Ty f2() { return Ty::fin(2); }
Ty f3() { return Ty::fin(3); }
Value a(int i) { return Value::atom(i); }
Value pr(Value x, Value y) { return Value::pair(std::move(x), std::move(y)); }

PartialIso transposition() {
  PartialIso::Graph graph;
  graph.emplace(a(0), a(1));
  graph.emplace(a(1), a(0));
  return PartialIso::from_graph(f2(), f2(), std::move(graph), "swap01");
}

// Independent recursive-descent decoder, the oracle for the prefix codec.
std::optional<Value> oracle_decode(const Ty& ty, const std::vector<Value>& tokens, size_t& pos) {
  switch (ty.kind()) {
    case Ty::Kind::Unit:
      return Value::unit();
    case Ty::Kind::Zero:
      return std::nullopt;
    case Ty::Kind::Fin: {
      if (pos >= tokens.size()) return std::nullopt;
      int ix = tokens[pos++].atom_index();
      if (ix >= ty.atom_count()) return std::nullopt;
      return Value::atom(ix);
    }
    case Ty::Kind::Prod: {
      auto l = oracle_decode(ty.left(), tokens, pos);
      if (!l) return std::nullopt;
      auto r = oracle_decode(ty.right(), tokens, pos);
      if (!r) return std::nullopt;
      return Value::pair(*l, *r);
    }
    case Ty::Kind::Sum: {
      if (pos >= tokens.size()) return std::nullopt;
      int tag = tokens[pos++].atom_index();
      if (tag == 0) {
        auto v = oracle_decode(ty.left(), tokens, pos);
        if (!v) return std::nullopt;
        return Value::in_left(*v);
      }
      if (tag == 1) {
        auto v = oracle_decode(ty.right(), tokens, pos);
        if (!v) return std::nullopt;
        return Value::in_right(*v);
      }
      return std::nullopt;
    }
    case Ty::Kind::Seq: {
      if (pos >= tokens.size()) return std::nullopt;
      int len = tokens[pos++].atom_index();
      if (len > ty.max_len()) return std::nullopt;
      std::vector<Value> items;
      for (int i = 0; i < len; ++i) {
        auto v = oracle_decode(ty.elem(), tokens, pos);
        if (!v) return std::nullopt;
        items.push_back(*v);
      }
      return Value::seq(std::move(items));
    }
    case Ty::Kind::Serialized:
      return std::nullopt; // not exercised by the oracle battery
  }
  return std::nullopt;
}

} // namespace

// ---------------------------------------------------------------------------
// Groups

TEST_CASE("cyclic groups satisfy the group axioms") {
  for (int n : {1, 2, 3, 5}) CHECK_FALSE(group_defect(cyclic_group(n)).has_value());
}

TEST_CASE("a broken multiplication is reported with a witness") {
  GroupSpec bogus = cyclic_group(3);
  bogus.mul = [](const Value& v) {
    // Constant family: every element acts like the unit. Not a group action.
    (void)v;
    return identity(Ty::fin(3));
  };
  auto defect = group_defect(bogus);
  REQUIRE(defect.has_value());
  CHECK_FALSE(defect->empty());
  CHECK_THROWS_AS(rewriter_instance(bogus), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Reversible state

TEST_CASE("get duplicates the state into the output") {
  ArrowValue get = rstate_get(f2(), f2());
  CHECK(*get.core.forward(pr(a(0), a(1))) == pr(pr(a(0), a(1)), a(1)));
}

TEST_CASE("assert is undefined when the asserted state disagrees") {
  ArrowValue chk = rstate_assert(f2(), f2());
  CHECK(*chk.core.forward(pr(pr(a(0), a(1)), a(1))) == pr(a(0), a(1)));
  CHECK_FALSE(chk.core.forward(pr(pr(a(0), a(1)), a(0))));
}

TEST_CASE("update applies the store transformer to the state only") {
  ArrowValue upd = rstate_update(f2(), transposition());
  CHECK(*upd.core.forward(pr(a(0), a(0))) == pr(a(0), a(1)));
  CHECK(*upd.core.forward(pr(a(1), a(0))) == pr(a(1), a(1)));
}

TEST_CASE("state arr threads the store unchanged") {
  ArrowInstance inst = rstate_instance(f2());
  ArrowValue lifted = arr(inst, transposition());
  for (const auto& v : enumerate(lifted.core.dom()))
    CHECK(*lifted.core.forward(v) ==
          pr(*transposition().forward(v.first()), v.second()));
}

TEST_CASE("get then assert collapses to the identity") {
  ArrowInstance inst = rstate_instance(f2());
  CHECK(arrow_eq(inst, seq(inst, rstate_get(f2(), f2()), rstate_assert(f2(), f2())),
                 arr(inst, identity(f2()))));
}

TEST_CASE("state inversion is the dagger of the carrier") {
  ArrowInstance inst = rstate_instance(f2());
  const EffectEntry* entry = find_effect("rstate");
  for (const auto& v : entry->make_fixtures(inst, Bounds{})) {
    ArrowValue i = inv(inst, v);
    CHECK(extensionally_equal(i.core, dagger(v.core)));
  }
}

// ---------------------------------------------------------------------------
// Reader

TEST_CASE("reader_make accepts context-preserving cores") {
  PartialIso core = tensor(transposition(), identity(f2()));
  ReaderMake made = reader_make(f2(), core);
  REQUIRE(made.value.has_value());
  CHECK(made.value->dom == f2());
  ArrowInstance inst = reader_instance(f2());
  CHECK_FALSE(inst.validate(*made.value).has_value());
}

TEST_CASE("reader_make rejects a context-swapping core with a witness") {
  ReaderMake made = reader_make(f2(), mutant_reader_context_core(f2(), f2()));
  CHECK_FALSE(made.value.has_value());
  CHECK(made.witness.find("context") != std::string::npos);
  CHECK(made.witness.find("->") != std::string::npos); // shows the offending transition
}

TEST_CASE("reader_get behaves as the state get and instance ops preserve invariance") {
  ArrowValue rget = reader_get(f2(), f2());
  ArrowValue sget = rstate_get(f2(), f2());
  CHECK(extensionally_equal(rget.core, sget.core));

  ArrowInstance inst = reader_instance(f2());
  ArrowValue lifted = arr(inst, transposition());
  ArrowValue built = seq(inst, first(inst, lifted, f2()), inv(inst, first(inst, lifted, f2())));
  CHECK_FALSE(inst.validate(built).has_value());
  CHECK_FALSE(inst.validate(inv(inst, rget)).has_value());
}

// ---------------------------------------------------------------------------
// Rewriter

TEST_CASE("rewriting composes by the group multiplication") {
  GroupSpec z3 = cyclic_group(3);
  ArrowInstance inst = rewriter_instance(z3);
  Ty x = f2();
  // Modular oracle: rewriting by 1 from state 2 lands on 0.
  ArrowValue one = rewrite(z3, x, a(1));
  CHECK(*one.core.forward(pr(a(0), a(2))) == pr(a(0), a(0)));
  // Unit acts trivially.
  CHECK(arrow_eq(inst, rewrite(z3, x, z3.unit), arr(inst, identity(x))));
  // Writing then unwriting cancels.
  for (const auto& g : enumerate(z3.carrier)) {
    ArrowValue w = rewrite(z3, x, g);
    ArrowValue unw = rewrite(z3, x, *z3.inverse.forward(g));
    CHECK(arrow_eq(inst, seq(inst, w, unw), arr(inst, identity(x))));
  }
  // Sequencing is the group action: rewrite(a) then rewrite(b) = rewrite(b·a).
  for (const auto& ga : enumerate(z3.carrier))
    for (const auto& gb : enumerate(z3.carrier)) {
      Value ba = *z3.mul(gb).forward(ga);
      CHECK(arrow_eq(inst, seq(inst, rewrite(z3, x, ga), rewrite(z3, x, gb)),
                     rewrite(z3, x, ba)));
    }
}

// ---------------------------------------------------------------------------
// Vector

TEST_CASE("zip pairs equal-length sequences and refuses others") {
  PartialIso zip = rev_zip(f2(), f2(), 2);
  Value xs = Value::seq({a(0), a(1)});
  Value ys = Value::seq({a(1), a(0)});
  CHECK(*zip.forward(pr(xs, ys)) == Value::seq({pr(a(0), a(1)), pr(a(1), a(0))}));
  CHECK_FALSE(zip.forward(pr(Value::seq({a(0)}), Value::seq({}))));
  // The dagger unzips every sequence of pairs.
  CHECK(zip.backward_graph().size() == enumerate(zip.cod()).size());
}

TEST_CASE("rev_map applies the morphism elementwise") {
  ArrowValue mapped = rev_map(2, transposition());
  CHECK(*mapped.core.forward(Value::seq({a(0), a(0)})) == Value::seq({a(1), a(1)}));
  CHECK(*mapped.core.forward(Value::seq({})) == Value::seq({}));
  // Partial element morphisms make the map partial.
  PartialIso half = PartialIso::from_graph(f2(), f2(), {{a(0), a(1)}}, "p01");
  ArrowValue mapped_half = rev_map(2, half);
  CHECK(*mapped_half.core.forward(Value::seq({a(0)})) == Value::seq({a(1)}));
  CHECK_FALSE(mapped_half.core.forward(Value::seq({a(1)})));
}

TEST_CASE("instance-built vector arrows preserve length") {
  ArrowInstance inst = vector_instance(2);
  ArrowValue m = arr(inst, transposition());
  for (const ArrowValue& v : {m, seq(inst, m, m), first(inst, m, f2()), inv(inst, m),
                              fanout(inst, m, m)})
    CHECK_FALSE(inst.validate(v).has_value());
  CHECK(inst.validate(mutant_vector_length_value(2)).has_value());
}

TEST_CASE("vector first agrees with the explicit unzip-transform-zip route") {
  ArrowInstance inst = vector_instance(2);
  PartialIso zip = rev_zip(f2(), f2(), 2);
  for (const auto& p : enumerate_homset(f2(), f2())) {
    ArrowValue a = arr(inst, p);
    PartialIso direct = first(inst, a, f2()).core;
    PartialIso routed =
        compose(compose(dagger(rev_zip(f2(), f2(), 2)),
                        tensor(a.core, identity(Ty::seq(f2(), 2)))),
                zip);
    CHECK(extensionally_equal(direct, routed));
  }
}

TEST_CASE("vector first is undefined exactly where the inner arrow changes length") {
  ArrowInstance inst = vector_instance(2);
  ArrowValue bad = mutant_vector_length_value(2);
  ArrowValue fb = first(inst, bad, f2());
  // bad maps [] to [a0]; zipping a length-1 output with zero ancillas fails.
  CHECK_FALSE(fb.core.forward(Value::seq({})));
}

// ---------------------------------------------------------------------------
// Error

TEST_CASE("error arr succeeds on clean input and propagates errors") {
  ArrowInstance inst = error_instance(f2());
  ArrowValue lifted = arr(inst, transposition());
  CHECK(*lifted.core.forward(Value::in_left(a(0))) == Value::in_left(a(1)));
  CHECK(*lifted.core.forward(Value::in_right(a(0))) == Value::in_right(a(0)));
}

TEST_CASE("raise tags fresh errors through the site choice") {
  Ty e = f2();
  PartialIso to_error = transposition();
  PartialIso site = left_injection(e, e); // this site's errors go left
  ArrowValue raised = error_raise(e, to_error, site, e);
  // Fresh error: x is mapped by to_error and recovered from the left tag.
  CHECK(*raised.core.forward(Value::in_left(a(0))) == Value::in_right(a(1)));
  CHECK(*raised.core.forward(Value::in_left(a(1))) == Value::in_right(a(0)));
  // Propagated errors need the right tag, which the left-injection site
  // never produces: undefined.
  CHECK_FALSE(raised.core.forward(Value::in_right(a(0))));

  ArrowValue handler = error_handle(e, to_error, site, e);
  ArrowInstance inst = error_instance(e);
  CHECK(arrow_eq(inst, handler, inv(inst, raised)));
  // Raising then handling is the partial identity on raise's domain.
  ArrowValue round = seq(inst, raised, handler);
  CHECK(extensionally_equal(round.core, restriction(raised.core)));
}

TEST_CASE("raise validates its shapes") {
  CHECK_THROWS_AS(error_raise(f2(), transposition(), identity(f2()), f2()),
                  std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Serializer

TEST_CASE("default codec encodes along the declared grammar") {
  CodecSpec codec = default_codec(4, 8);
  CHECK(*codec.serialize(Ty::unit()).forward(Value::unit()) == Value::seq({}));
  CHECK(*codec.serialize(f3()).forward(a(2)) == Value::seq({a(2)}));
  Ty sum = Ty::sum(Ty::unit(), f2());
  CHECK(*codec.serialize(sum).forward(Value::in_left(Value::unit())) == Value::seq({a(0)}));
  CHECK(*codec.serialize(sum).forward(Value::in_right(a(1))) == Value::seq({a(1), a(1)}));
  Ty seq2 = Ty::seq(f2(), 2);
  CHECK(*codec.serialize(seq2).forward(Value::seq({a(1)})) == Value::seq({a(1), a(1)}));
  Ty pairs = Ty::prod(f2(), f2());
  CHECK(*codec.serialize(pairs).forward(pr(a(1), a(0))) == Value::seq({a(1), a(0)}));
}

TEST_CASE("the codec agrees with an independent prefix decoder and is injective") {
  CodecSpec codec = default_codec(4, 8);
  std::vector<Ty> battery = {Ty::unit(), f2(), f3(), Ty::prod(f2(), f2()),
                             Ty::sum(Ty::unit(), f2()), Ty::seq(f2(), 2),
                             Ty::prod(Ty::seq(f2(), 2), f2())};
  for (const auto& t : battery) {
    CAPTURE(t.to_string());
    PartialIso ser = codec.serialize(t);
    std::set<Value> images;
    for (const auto& v : enumerate(t)) {
      auto tokens = ser.forward(v);
      REQUIRE(tokens.has_value());
      images.insert(*tokens);
      size_t pos = 0;
      auto decoded = oracle_decode(t, tokens->items(), pos);
      REQUIRE(decoded.has_value());
      CHECK(pos == tokens->items().size()); // the oracle consumes everything
      CHECK(*decoded == v);
    }
    CHECK(images.size() == enumerate(t).size());
  }
}

TEST_CASE("deserialization round trips and rejects non-canonical strings") {
  CodecSpec codec = default_codec(4, 8);
  std::vector<Ty> battery = {Ty::unit(), f2(), Ty::prod(f2(), f2()), Ty::sum(Ty::unit(), f2()),
                             Ty::seq(f2(), 2)};
  for (const auto& t : battery) {
    CAPTURE(t.to_string());
    PartialIso ser = codec.serialize(t);
    CHECK(extensionally_equal(compose(ser, dagger(ser)), identity(t)));
    // Composing the other way is the partial identity on canonical strings.
    PartialIso canon = compose(dagger(ser), ser);
    CHECK(extensionally_equal(canon, restriction(dagger(ser))));
    // At least one string in the codomain fails to decode.
    Value bogus = Value::seq({a(3), a(3), a(3)});
    CHECK(check_type(bogus, ser.cod()));
    CHECK_FALSE(ser.backward(bogus));
  }
}

TEST_CASE("the codec rejects types that overflow its bounds") {
  CHECK_THROWS_AS(default_codec(2, 8).serialize(f3()), std::invalid_argument);
  CHECK_THROWS_AS(default_codec(4, 1).serialize(Ty::prod(f2(), f2())), std::invalid_argument);
}

TEST_CASE("serializer arr serializes the pure image") {
  CodecSpec codec = default_codec(4, 8);
  ArrowInstance inst = serializer_instance(codec);
  ArrowValue lifted = arr(inst, transposition());
  PartialIso ser = codec.serialize(f2());
  for (const auto& x : enumerate(f2()))
    CHECK(*lifted.core.forward(x) == *ser.forward(*transposition().forward(x)));
}

TEST_CASE("serializer first re-serializes the paired output") {
  CodecSpec codec = default_codec(4, 8);
  ArrowInstance inst = serializer_instance(codec);
  ArrowValue lifted = arr(inst, transposition());
  ArrowValue fst = first(inst, lifted, f2());
  PartialIso ser_y = codec.serialize(f2());
  PartialIso ser_pair = codec.serialize(Ty::prod(f2(), f2()));
  for (const auto& v : enumerate(Ty::prod(f2(), f2()))) {
    auto mid = lifted.core.forward(v.first());
    REQUIRE(mid);
    auto expected = ser_pair.forward(pr(*ser_y.backward(*mid), v.second()));
    CHECK(*fst.core.forward(v) == *expected);
  }
}

TEST_CASE("serializer composition deserializes between stages") {
  CodecSpec codec = default_codec(4, 8);
  ArrowInstance inst = serializer_instance(codec);
  ArrowValue f = arr(inst, transposition());
  ArrowValue g = arr(inst, transposition());
  ArrowValue fg = seq(inst, f, g);
  CHECK(arrow_eq(inst, fg, arr(inst, identity(f2()))));
}

// ---------------------------------------------------------------------------
// Information effects

TEST_CASE("erase moves the payload into the garbage") {
  ArrowValue er = info_erase(f2());
  CHECK(*er.core.forward(pr(a(1), Value::unit())) == pr(Value::unit(), a(1)));
  CHECK(er.garbage == f2());
  CHECK(er.heap == Ty::unit());
}

TEST_CASE("inverting erase yields create") {
  ArrowInstance inst = info_instance();
  CHECK(arrow_eq(inst, inv(inst, info_erase(f2())), info_create(f2())));
  CHECK(arrow_eq(inst, inv(inst, info_create(f2())), info_erase(f2())));
}

TEST_CASE("creating then erasing is the identity up to ancilla bookkeeping") {
  ArrowInstance inst = info_instance();
  ArrowValue round = seq(inst, info_create(f2()), info_erase(f2()));
  CHECK(arrow_eq(inst, round, arr(inst, identity(Ty::unit()))));
}

TEST_CASE("info equality distinguishes genuinely different arrows") {
  ArrowInstance inst = info_instance();
  ArrowValue id2 = arr(inst, identity(f2()));
  ArrowValue swapped = arr(inst, transposition());
  CHECK_FALSE(arrow_eq(inst, id2, swapped));
  // Same signature, different garbage profile content.
  ArrowValue er = info_erase(f2());
  ArrowValue made = seq(inst, seq(inst, info_create(f2()), arr(inst, transposition())),
                        info_erase(f2()));
  // create;swap;erase maps heap x to garbage swap(x): not equal to create;erase.
  ArrowValue plain = seq(inst, info_create(f2()), info_erase(f2()));
  CHECK_FALSE(arrow_eq(inst, made, plain));
  (void)er;
}

TEST_CASE("info do-undo-do holds for the ancilla-bearing generators") {
  ArrowInstance inst = info_instance();
  for (const ArrowValue& v : {info_erase(f2()), info_create(f2()),
                              seq(inst, info_erase(f2()), info_create(f2()))}) {
    ArrowValue round = seq(inst, seq(inst, v, inv(inst, v)), v);
    CHECK(arrow_eq(inst, round, v));
  }
}
