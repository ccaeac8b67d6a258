#include "invarr/effects.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace invarr {

namespace {

// First point where two carriers disagree, as a readable witness.
std::optional<std::string> graphs_differ(const PartialIso& x, const PartialIso& y) {
  if (x.dom() != y.dom() || x.cod() != y.cod())
    return "carrier signatures differ: " + x.dom().to_string() + "->" + x.cod().to_string() +
           " vs " + y.dom().to_string() + "->" + y.cod().to_string();
  const auto& gx = x.forward_graph();
  const auto& gy = y.forward_graph();
  auto ix = gx.begin();
  auto iy = gy.begin();
  while (ix != gx.end() || iy != gy.end()) {
    if (iy == gy.end() || (ix != gx.end() && ix->first < iy->first))
      return "at " + ix->first.to_string() + ": lhs=" + ix->second.to_string() +
             " rhs=undefined";
    if (ix == gx.end() || iy->first < ix->first)
      return "at " + iy->first.to_string() + ": lhs=undefined rhs=" + iy->second.to_string();
    if (ix->second != iy->second)
      return "at " + ix->first.to_string() + ": lhs=" + ix->second.to_string() +
             " rhs=" + iy->second.to_string();
    ++ix;
    ++iy;
  }
  return std::nullopt;
}

std::optional<std::string> core_differ(const ArrowValue& a, const ArrowValue& b) {
  return graphs_differ(a.core, b.core);
}

ArrowValue make_value(std::string instance, Ty dom, Ty cod, PartialIso core) {
  ArrowValue v;
  v.instance = std::move(instance);
  v.dom = std::move(dom);
  v.cod = std::move(cod);
  v.core = std::move(core);
  return v;
}

} // namespace

// ---------------------------------------------------------------------------
// Groups

GroupSpec cyclic_group(int n) {
  if (n < 1) throw std::invalid_argument("cyclic_group: order must be >= 1");
  Ty carrier = Ty::fin(n);
  GroupSpec g;
  g.name = "z" + std::to_string(n);
  g.carrier = carrier;
  g.unit = Value::atom(0);
  g.mul = [n, carrier](const Value& a) {
    if (!check_type(a, carrier))
      throw std::invalid_argument("cyclic_group: element out of range: " + a.to_string());
    PartialIso::Graph graph;
    for (int i = 0; i < n; ++i)
      graph.emplace(Value::atom(i), Value::atom((a.atom_index() + i) % n));
    return PartialIso::from_graph(carrier, carrier, std::move(graph),
                                  "add" + std::to_string(a.atom_index()));
  };
  PartialIso::Graph neg;
  for (int i = 0; i < n; ++i) neg.emplace(Value::atom(i), Value::atom((n - i) % n));
  g.inverse = PartialIso::from_graph(carrier, carrier, std::move(neg), "neg");
  return g;
}

std::optional<std::string> group_defect(const GroupSpec& group) {
  if (!check_type(group.unit, group.carrier)) return "unit does not inhabit the carrier";
  auto elements = enumerate(group.carrier);
  if (!extensionally_equal(group.mul(group.unit), identity(group.carrier)))
    return "multiplication by the unit is not the identity";
  for (const auto& a : elements) {
    auto ma = group.mul(a);
    if (ma.forward_graph().size() != elements.size()) return "mul(" + a.to_string() + ") is not total";
    if (!(*ma.forward(group.unit) == a))
      return "mul(" + a.to_string() + ") does not send the unit to " + a.to_string();
    for (const auto& b : elements) {
      auto ab = ma.forward(b);
      if (!ab) return "mul undefined at " + b.to_string();
      if (!extensionally_equal(compose(group.mul(b), ma), group.mul(*ab)))
        return "mul(" + a.to_string() + ")∘mul(" + b.to_string() + ") != mul(" +
               ab->to_string() + ")";
    }
    auto ai = group.inverse.forward(a);
    if (!ai) return "inverse undefined at " + a.to_string();
    if (!extensionally_equal(group.mul(*ai), dagger(ma)))
      return "mul(inverse " + a.to_string() + ") is not the inverse of mul(" + a.to_string() + ")";
  }
  if (!extensionally_equal(compose(group.inverse, group.inverse), identity(group.carrier)))
    return "inversion is not involutive";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Codec

namespace {

void encode_into(const Value& v, std::vector<Value>& tokens) {
  switch (v.kind()) {
    case Value::Kind::Unit:
      return;
    case Value::Kind::Atom:
      tokens.push_back(v);
      return;
    case Value::Kind::Pair:
      encode_into(v.first(), tokens);
      encode_into(v.second(), tokens);
      return;
    case Value::Kind::InL:
      tokens.push_back(Value::atom(0));
      encode_into(v.inner(), tokens);
      return;
    case Value::Kind::InR:
      tokens.push_back(Value::atom(1));
      encode_into(v.inner(), tokens);
      return;
    case Value::Kind::Seq:
      tokens.push_back(Value::atom(static_cast<int>(v.items().size())));
      for (const auto& item : v.items()) encode_into(item, tokens);
      return;
  }
  throw std::logic_error("unreachable");
}

} // namespace

CodecSpec default_codec(int alphabet, int max_len) {
  CodecSpec codec;
  codec.alphabet = alphabet;
  codec.max_len = max_len;
  codec.serialize = [alphabet, max_len](const Ty& t) {
    Ty cod = Ty::serialized(t, alphabet, max_len);
    PartialIso::Graph graph;
    for (const auto& v : enumerate(t)) {
      std::vector<Value> tokens;
      encode_into(v, tokens);
      if (static_cast<int>(tokens.size()) > max_len)
        throw std::invalid_argument("codec: encoding of " + v.to_string() + " : " +
                                    t.to_string() + " exceeds the length bound");
      for (const auto& tok : tokens)
        if (tok.atom_index() >= alphabet)
          throw std::invalid_argument("codec: token " + tok.to_string() +
                                      " exceeds the alphabet while encoding " + t.to_string());
      graph.emplace(v, Value::seq(tokens));
    }
    return PartialIso::from_graph(t, cod, std::move(graph), "serialize");
  };
  return codec;
}

Ty serialized_ty(const CodecSpec& codec, const Ty& t) {
  return Ty::serialized(t, codec.alphabet, codec.max_len);
}

// ---------------------------------------------------------------------------
// Identity instance

ArrowInstance identity_instance() {
  ArrowInstance inst;
  inst.name = "identity";
  inst.supports_first = true;
  inst.supports_choice = true;
  inst.lift = [](const PartialIso& f) { return make_value("identity", f.dom(), f.cod(), f); };
  inst.compose_values = [](const ArrowValue& a, const ArrowValue& b) {
    return make_value("identity", a.dom, b.cod, compose(a.core, b.core));
  };
  inst.first_op = [](const ArrowValue& a, const Ty& z) {
    return make_value("identity", Ty::prod(a.dom, z), Ty::prod(a.cod, z),
                      tensor(a.core, identity(z)));
  };
  inst.invert = [](const ArrowValue& a) {
    return make_value("identity", a.cod, a.dom, dagger(a.core));
  };
  inst.left_op = [](const ArrowValue& a, const Ty& z) {
    return make_value("identity", Ty::sum(a.dom, z), Ty::sum(a.cod, z),
                      direct_sum(a.core, identity(z)));
  };
  inst.differ = core_differ;
  return inst;
}

// ---------------------------------------------------------------------------
// Reversible state (shared by reader and rewriter)

namespace {

// Core of first for store-threading instances: ((x,z),s) steps the inner
// computation on (x,s) and carries z along.
PartialIso state_first_core(const PartialIso& core, const Ty& x, const Ty& y, const Ty& z,
                            const Ty& s) {
  Ty dom = Ty::prod(Ty::prod(x, z), s);
  PartialIso::Graph graph;
  for (const auto& v : enumerate(dom)) {
    const Value& xx = v.first().first();
    const Value& zz = v.first().second();
    const Value& ss = v.second();
    if (auto r = core.forward(Value::pair(xx, ss)))
      graph.emplace(v, Value::pair(Value::pair(r->first(), zz), r->second()));
  }
  return PartialIso::from_graph(dom, Ty::prod(Ty::prod(y, z), s), std::move(graph),
                                "first(" + core.label() + ")");
}

ArrowInstance state_like_instance(std::string name, const Ty& s) {
  ArrowInstance inst;
  inst.name = name;
  inst.supports_first = true;
  inst.lift = [name, s](const PartialIso& f) {
    return make_value(name, f.dom(), f.cod(), tensor(f, identity(s)));
  };
  inst.compose_values = [name](const ArrowValue& a, const ArrowValue& b) {
    return make_value(name, a.dom, b.cod, compose(a.core, b.core));
  };
  inst.first_op = [name, s](const ArrowValue& a, const Ty& z) {
    return make_value(name, Ty::prod(a.dom, z), Ty::prod(a.cod, z),
                      state_first_core(a.core, a.dom, a.cod, z, s));
  };
  inst.invert = [name](const ArrowValue& a) {
    return make_value(name, a.cod, a.dom, dagger(a.core));
  };
  inst.differ = core_differ;
  return inst;
}

PartialIso get_core(const Ty& x, const Ty& s) {
  Ty dom = Ty::prod(x, s);
  PartialIso::Graph graph;
  for (const auto& v : enumerate(dom)) graph.emplace(v, Value::pair(v, v.second()));
  return PartialIso::from_graph(dom, Ty::prod(dom, s), std::move(graph), "get");
}

} // namespace

ArrowInstance rstate_instance(const Ty& s) { return state_like_instance("rstate", s); }

ArrowValue rstate_get(const Ty& x, const Ty& s) {
  return make_value("rstate", x, Ty::prod(x, s), get_core(x, s));
}

ArrowValue rstate_assert(const Ty& x, const Ty& s) {
  return make_value("rstate", Ty::prod(x, s), x, dagger(get_core(x, s)).relabel("assert"));
}

ArrowValue rstate_update(const Ty& x, const PartialIso& f) {
  if (f.dom() != f.cod())
    throw std::invalid_argument("rstate_update: store transformer must be an endomorphism");
  return make_value("rstate", x, x,
                    tensor(identity(x), f).relabel("update(" + f.label() + ")"));
}

// ---------------------------------------------------------------------------
// Reader

namespace {

std::optional<std::string> context_violation(const PartialIso& core) {
  for (const auto& [v, w] : core.forward_graph()) {
    if (!(v.second() == w.second()))
      return "context changes: " + v.to_string() + " -> " + w.to_string();
  }
  return std::nullopt;
}

} // namespace

ArrowInstance reader_instance(const Ty& c) {
  ArrowInstance inst = state_like_instance("reader", c);
  inst.validate = [](const ArrowValue& a) { return context_violation(a.core); };
  return inst;
}

ReaderMake reader_make(const Ty& c, const PartialIso& core) {
  if (!core.dom().is(Ty::Kind::Prod) || core.dom().right() != c || !core.cod().is(Ty::Kind::Prod) ||
      core.cod().right() != c)
    return {std::nullopt, "carrier is not context-shaped over " + c.to_string()};
  if (auto bad = context_violation(core)) return {std::nullopt, *bad};
  return {make_value("reader", core.dom().left(), core.cod().left(), core), ""};
}

ArrowValue reader_get(const Ty& x, const Ty& c) {
  return make_value("reader", x, Ty::prod(x, c), get_core(x, c));
}

// ---------------------------------------------------------------------------
// Rewriter

ArrowInstance rewriter_instance(const GroupSpec& group) {
  if (auto bad = group_defect(group))
    throw std::invalid_argument("rewriter_instance: not a group: " + *bad);
  return state_like_instance("rewriter", group.carrier);
}

ArrowValue rewrite(const GroupSpec& group, const Ty& x, const Value& a) {
  if (!check_type(a, group.carrier))
    throw std::invalid_argument("rewrite: " + a.to_string() + " does not inhabit the carrier");
  return make_value("rewriter", x, x,
                    tensor(identity(x), group.mul(a)).relabel("rewrite(" + a.to_string() + ")"));
}

// ---------------------------------------------------------------------------
// Vector

namespace {

std::optional<Value> map_seq(const PartialIso& f, const Value& xs) {
  std::vector<Value> out;
  out.reserve(xs.items().size());
  for (const auto& x : xs.items()) {
    auto y = f.forward(x);
    if (!y) return std::nullopt;
    out.push_back(*y);
  }
  return Value::seq(std::move(out));
}

PartialIso vector_lift_core(const PartialIso& f, int max_len) {
  Ty dom = Ty::seq(f.dom(), max_len);
  PartialIso::Graph graph;
  for (const auto& xs : enumerate(dom))
    if (auto ys = map_seq(f, xs)) graph.emplace(xs, *ys);
  return PartialIso::from_graph(dom, Ty::seq(f.cod(), max_len), std::move(graph),
                                "map(" + f.label() + ")");
}

} // namespace

ArrowInstance vector_instance(int max_len) {
  ArrowInstance inst;
  inst.name = "vector";
  inst.supports_first = true;
  inst.lift = [max_len](const PartialIso& f) {
    return make_value("vector", f.dom(), f.cod(), vector_lift_core(f, max_len));
  };
  inst.compose_values = [](const ArrowValue& a, const ArrowValue& b) {
    return make_value("vector", a.dom, b.cod, compose(a.core, b.core));
  };
  inst.first_op = [max_len](const ArrowValue& a, const Ty& z) {
    Ty dom = Ty::seq(Ty::prod(a.dom, z), max_len);
    Ty cod = Ty::seq(Ty::prod(a.cod, z), max_len);
    PartialIso::Graph graph;
    for (const auto& ps : enumerate(dom)) {
      std::vector<Value> xs, zs;
      for (const auto& p : ps.items()) {
        xs.push_back(p.first());
        zs.push_back(p.second());
      }
      auto ys = a.core.forward(Value::seq(xs));
      if (!ys || ys->items().size() != zs.size()) continue; // zip undefined
      std::vector<Value> out;
      for (size_t i = 0; i < zs.size(); ++i) out.push_back(Value::pair(ys->items()[i], zs[i]));
      graph.emplace(ps, Value::seq(std::move(out)));
    }
    return make_value("vector", Ty::prod(a.dom, z), Ty::prod(a.cod, z),
                      PartialIso::from_graph(dom, cod, std::move(graph),
                                             "first(" + a.core.label() + ")"));
  };
  inst.invert = [](const ArrowValue& a) {
    return make_value("vector", a.cod, a.dom, dagger(a.core));
  };
  inst.differ = core_differ;
  inst.validate = [](const ArrowValue& a) -> std::optional<std::string> {
    for (const auto& [xs, ys] : a.core.forward_graph())
      if (xs.items().size() != ys.items().size())
        return "length changes: " + xs.to_string() + " -> " + ys.to_string();
    return std::nullopt;
  };
  return inst;
}

ArrowValue rev_map(int max_len, const PartialIso& f) {
  return vector_instance(max_len).lift(f);
}

PartialIso rev_zip(const Ty& a, const Ty& b, int max_len) {
  Ty dom = Ty::prod(Ty::seq(a, max_len), Ty::seq(b, max_len));
  Ty cod = Ty::seq(Ty::prod(a, b), max_len);
  PartialIso::Graph graph;
  for (const auto& v : enumerate(dom)) {
    const auto& xs = v.first().items();
    const auto& ys = v.second().items();
    if (xs.size() != ys.size()) continue;
    std::vector<Value> out;
    for (size_t i = 0; i < xs.size(); ++i) out.push_back(Value::pair(xs[i], ys[i]));
    graph.emplace(v, Value::seq(std::move(out)));
  }
  return PartialIso::from_graph(dom, cod, std::move(graph), "zip");
}

// ---------------------------------------------------------------------------
// Error (weak)

namespace {

PartialIso error_lift_core(const PartialIso& f, const Ty& e) {
  PartialIso::Graph graph;
  for (const auto& [v, w] : f.forward_graph())
    graph.emplace(Value::in_left(v), Value::in_left(w));
  for (const auto& err : enumerate(e)) graph.emplace(Value::in_right(err), Value::in_right(err));
  return PartialIso::from_graph(Ty::sum(f.dom(), e), Ty::sum(f.cod(), e), std::move(graph),
                                "try(" + f.label() + ")");
}

} // namespace

ArrowInstance error_instance(const Ty& e) {
  ArrowInstance inst;
  inst.name = "error";
  inst.supports_first = false;
  inst.lift = [e](const PartialIso& f) {
    return make_value("error", f.dom(), f.cod(), error_lift_core(f, e));
  };
  inst.compose_values = [](const ArrowValue& a, const ArrowValue& b) {
    return make_value("error", a.dom, b.cod, compose(a.core, b.core));
  };
  inst.invert = [](const ArrowValue& a) {
    return make_value("error", a.cod, a.dom, dagger(a.core));
  };
  inst.differ = core_differ;
  return inst;
}

ArrowValue error_raise(const Ty& e, const PartialIso& to_error, const PartialIso& site,
                       const Ty& cod) {
  if (to_error.cod() != e || site.dom() != e || site.cod() != Ty::sum(e, e))
    throw std::invalid_argument("error_raise: wrong shapes for error type " + e.to_string());
  Ty dom = Ty::sum(to_error.dom(), e);
  PartialIso::Graph graph;
  for (const auto& [x, err] : to_error.forward_graph())
    if (auto w = site.backward(Value::in_left(err)))
      graph.emplace(Value::in_left(x), Value::in_right(*w));
  for (const auto& err : enumerate(e))
    if (auto w = site.backward(Value::in_right(err)))
      graph.emplace(Value::in_right(err), Value::in_right(*w));
  return make_value("error", to_error.dom(), cod,
                    PartialIso::from_graph(dom, Ty::sum(cod, e), std::move(graph), "raise"));
}

ArrowValue error_handle(const Ty& e, const PartialIso& to_error, const PartialIso& site,
                        const Ty& dom) {
  ArrowValue raised = error_raise(e, to_error, site, dom);
  return make_value("error", raised.cod, raised.dom, dagger(raised.core).relabel("handle"));
}

// ---------------------------------------------------------------------------
// Serializer

ArrowInstance serializer_instance(const CodecSpec& codec) {
  ArrowInstance inst;
  inst.name = "serializer";
  inst.supports_first = true;
  inst.lift = [codec](const PartialIso& f) {
    PartialIso ser = codec.serialize(f.cod());
    PartialIso::Graph graph;
    for (const auto& [x, y] : f.forward_graph()) graph.emplace(x, *ser.forward(y));
    return make_value("serializer", f.dom(), f.cod(),
                      PartialIso::from_graph(f.dom(), serialized_ty(codec, f.cod()),
                                             std::move(graph), "ser(" + f.label() + ")"));
  };
  inst.compose_values = [codec](const ArrowValue& a, const ArrowValue& b) {
    PartialIso ser = codec.serialize(a.cod);
    PartialIso::Graph graph;
    for (const auto& [x, t] : a.core.forward_graph()) {
      auto y = ser.backward(t);
      if (!y) continue;
      if (auto out = b.core.forward(*y)) graph.emplace(x, *out);
    }
    return make_value("serializer", a.dom, b.cod,
                      PartialIso::from_graph(a.dom, serialized_ty(codec, b.cod),
                                             std::move(graph),
                                             "(" + a.core.label() + ";" + b.core.label() + ")"));
  };
  inst.first_op = [codec](const ArrowValue& a, const Ty& z) {
    Ty dom = Ty::prod(a.dom, z);
    Ty pair_cod = Ty::prod(a.cod, z);
    PartialIso ser_y = codec.serialize(a.cod);
    PartialIso ser_pair = codec.serialize(pair_cod);
    PartialIso::Graph graph;
    for (const auto& v : enumerate(dom)) {
      auto t = a.core.forward(v.first());
      if (!t) continue;
      auto y = ser_y.backward(*t);
      if (!y) continue;
      graph.emplace(v, *ser_pair.forward(Value::pair(*y, v.second())));
    }
    return make_value("serializer", dom, pair_cod,
                      PartialIso::from_graph(dom, serialized_ty(codec, pair_cod),
                                             std::move(graph),
                                             "first(" + a.core.label() + ")"));
  };
  inst.invert = [codec](const ArrowValue& a) {
    PartialIso ser_y = codec.serialize(a.cod);
    PartialIso ser_x = codec.serialize(a.dom);
    PartialIso::Graph graph;
    for (const auto& y : enumerate(a.cod)) {
      auto x = a.core.backward(*ser_y.forward(y));
      if (!x) continue;
      graph.emplace(y, *ser_x.forward(*x));
    }
    return make_value("serializer", a.cod, a.dom,
                      PartialIso::from_graph(a.cod, serialized_ty(codec, a.dom),
                                             std::move(graph),
                                             "inv(" + a.core.label() + ")"));
  };
  inst.differ = core_differ;
  return inst;
}

// ---------------------------------------------------------------------------
// Information effects

namespace {

void collect_leaf_tys(const Ty& ty, std::vector<Ty>& out) {
  if (ty.is(Ty::Kind::Unit)) return;
  if (ty.is(Ty::Kind::Prod)) {
    collect_leaf_tys(ty.left(), out);
    collect_leaf_tys(ty.right(), out);
    return;
  }
  out.push_back(ty);
}

std::vector<Ty> leaf_tys(const Ty& ty) {
  std::vector<Ty> out;
  collect_leaf_tys(ty, out);
  return out;
}

void collect_leaf_values(const Ty& ty, const Value& v, std::vector<Value>& out) {
  if (ty.is(Ty::Kind::Unit)) return;
  if (ty.is(Ty::Kind::Prod)) {
    collect_leaf_values(ty.left(), v.first(), out);
    collect_leaf_values(ty.right(), v.second(), out);
    return;
  }
  out.push_back(v);
}

Value build_from_leaves(const Ty& ty, const std::vector<Value>& leaves, size_t& pos) {
  if (ty.is(Ty::Kind::Unit)) return Value::unit();
  if (ty.is(Ty::Kind::Prod)) {
    Value l = build_from_leaves(ty.left(), leaves, pos);
    Value r = build_from_leaves(ty.right(), leaves, pos);
    return Value::pair(std::move(l), std::move(r));
  }
  return leaves.at(pos++);
}

Ty prod_of(const std::vector<Ty>& tys) {
  if (tys.empty()) return Ty::unit();
  Ty out = tys.back();
  for (auto it = tys.rbegin() + 1; it != tys.rend(); ++it) out = Ty::prod(*it, out);
  return out;
}

// Tensors an untouched ancilla onto an arrow: the pad enters on the heap
// and leaves on the garbage unchanged.
ArrowValue info_pad(const ArrowValue& a, const std::vector<Ty>& pad) {
  if (pad.empty()) return a;
  Ty pad_ty = prod_of(pad);
  Ty heap = Ty::prod(a.heap, pad_ty);
  Ty garbage = Ty::prod(a.garbage, pad_ty);
  Ty dom = Ty::prod(a.dom, heap);
  PartialIso::Graph graph;
  for (const auto& v : enumerate(dom)) {
    const Value& x = v.first();
    const Value& h = v.second().first();
    const Value& k = v.second().second();
    if (auto r = a.core.forward(Value::pair(x, h)))
      graph.emplace(v, Value::pair(r->first(), Value::pair(r->second(), k)));
  }
  ArrowValue out = a;
  out.heap = heap;
  out.garbage = garbage;
  out.core = PartialIso::from_graph(dom, Ty::prod(a.cod, garbage), std::move(graph),
                                    "pad(" + a.core.label() + ")");
  return out;
}

// Sorted multiset difference lhs ∖ rhs.
std::vector<Ty> multiset_minus(std::vector<Ty> lhs, std::vector<Ty> rhs) {
  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  std::vector<Ty> out;
  std::set_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter(out));
  return out;
}

// All type-preserving bijections as index maps from `from` positions into
// `to` positions. Leaf counts stay tiny at desk scale.
std::vector<std::vector<size_t>> matchings(const std::vector<Ty>& from,
                                           const std::vector<Ty>& to) {
  std::vector<std::vector<size_t>> out;
  std::vector<size_t> current(from.size(), 0);
  std::vector<bool> used(to.size(), false);
  std::function<void(size_t)> walk = [&](size_t i) {
    if (i == from.size()) {
      out.push_back(current);
      return;
    }
    for (size_t j = 0; j < to.size(); ++j) {
      if (used[j] || from[i] != to[j]) continue;
      used[j] = true;
      current[i] = j;
      walk(i + 1);
      used[j] = false;
    }
  };
  walk(0);
  return out;
}

// Equality of information-effect arrows up to ancilla bookkeeping: pad each
// side with the heap leaves the other uses, then search for leaf
// permutations making the cores agree pointwise.
std::optional<std::string> info_differ(const ArrowValue& a, const ArrowValue& b) {
  std::vector<Ty> ha = leaf_tys(a.heap);
  std::vector<Ty> hb = leaf_tys(b.heap);
  ArrowValue pa = info_pad(a, multiset_minus(hb, ha));
  ArrowValue pb = info_pad(b, multiset_minus(ha, hb));
  std::vector<Ty> heap_a = leaf_tys(pa.heap);
  std::vector<Ty> heap_b = leaf_tys(pb.heap);
  std::vector<Ty> gar_a = leaf_tys(pa.garbage);
  std::vector<Ty> gar_b = leaf_tys(pb.garbage);
  auto sorted = [](std::vector<Ty> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(gar_a) != sorted(gar_b)) {
    auto show = [](const std::vector<Ty>& v) {
      std::string s = "[";
      for (const auto& t : v) s += t.to_string() + " ";
      return s + "]";
    };
    return "garbage profiles differ: " + show(gar_a) + " vs " + show(gar_b);
  }
  if (heap_a.size() > 8 || gar_a.size() > 8)
    throw std::length_error("info equality: too many ancilla leaves");

  auto heap_maps = matchings(heap_b, heap_a);  // position in b-heap → position in a-heap
  auto gar_maps = matchings(gar_a, gar_b);     // position in a-garbage → position in b-garbage
  auto xs = enumerate(pa.dom);
  auto heaps_b = enumerate(pb.heap);
  std::string last = "no ancilla matching";
  for (const auto& sigma : heap_maps) {
    for (const auto& tau : gar_maps) {
      bool ok = true;
      std::string witness;
      for (const auto& x : xs) {
        for (const auto& hb_val : heaps_b) {
          std::vector<Value> hb_leaves;
          collect_leaf_values(pb.heap, hb_val, hb_leaves);
          std::vector<Value> ha_leaves(heap_a.size(), Value::unit());
          for (size_t i = 0; i < hb_leaves.size(); ++i) ha_leaves[sigma[i]] = hb_leaves[i];
          size_t pos = 0;
          Value ha_val = build_from_leaves(pa.heap, ha_leaves, pos);
          auto ra = pa.core.forward(Value::pair(x, ha_val));
          auto rb = pb.core.forward(Value::pair(x, hb_val));
          if (ra.has_value() != rb.has_value()) {
            ok = false;
            witness = "at x=" + x.to_string() + " heap=" + hb_val.to_string() + ": " +
                      (ra ? "lhs defined, rhs undefined" : "lhs undefined, rhs defined");
            break;
          }
          if (!ra) continue;
          if (!(ra->first() == rb->first())) {
            ok = false;
            witness = "at x=" + x.to_string() + " heap=" + hb_val.to_string() + ": outputs " +
                      ra->first().to_string() + " vs " + rb->first().to_string();
            break;
          }
          std::vector<Value> ga_leaves, gb_leaves;
          collect_leaf_values(pa.garbage, ra->second(), ga_leaves);
          collect_leaf_values(pb.garbage, rb->second(), gb_leaves);
          for (size_t i = 0; i < ga_leaves.size() && ok; ++i)
            if (!(ga_leaves[i] == gb_leaves[tau[i]])) {
              ok = false;
              witness = "at x=" + x.to_string() + " heap=" + hb_val.to_string() +
                        ": garbage leaves disagree";
            }
          if (!ok) break;
        }
        if (!ok) break;
      }
      if (ok) return std::nullopt;
      last = witness.empty() ? last : witness;
    }
  }
  return last;
}

} // namespace

ArrowInstance info_instance() {
  ArrowInstance inst;
  inst.name = "info";
  inst.supports_first = true;
  inst.lift = [](const PartialIso& f) {
    ArrowValue v = make_value("info", f.dom(), f.cod(), tensor(f, identity(Ty::unit())));
    v.heap = Ty::unit();
    v.garbage = Ty::unit();
    return v;
  };
  inst.compose_values = [](const ArrowValue& a, const ArrowValue& b) {
    Ty heap = Ty::prod(a.heap, b.heap);
    Ty garbage = Ty::prod(b.garbage, a.garbage);
    Ty dom = Ty::prod(a.dom, heap);
    PartialIso::Graph graph;
    for (const auto& v : enumerate(dom)) {
      const Value& x = v.first();
      const Value& h1 = v.second().first();
      const Value& h2 = v.second().second();
      auto r1 = a.core.forward(Value::pair(x, h1));
      if (!r1) continue;
      auto r2 = b.core.forward(Value::pair(r1->first(), h2));
      if (!r2) continue;
      graph.emplace(v, Value::pair(r2->first(), Value::pair(r2->second(), r1->second())));
    }
    ArrowValue out = make_value(
        "info", a.dom, b.cod,
        PartialIso::from_graph(dom, Ty::prod(b.cod, garbage), std::move(graph),
                               "(" + a.core.label() + ";" + b.core.label() + ")"));
    out.heap = heap;
    out.garbage = garbage;
    return out;
  };
  inst.first_op = [](const ArrowValue& a, const Ty& z) {
    Ty dom = Ty::prod(Ty::prod(a.dom, z), a.heap);
    PartialIso::Graph graph;
    for (const auto& v : enumerate(dom)) {
      const Value& x = v.first().first();
      const Value& zz = v.first().second();
      const Value& h = v.second();
      if (auto r = a.core.forward(Value::pair(x, h)))
        graph.emplace(v, Value::pair(Value::pair(r->first(), zz), r->second()));
    }
    ArrowValue out = make_value(
        "info", Ty::prod(a.dom, z), Ty::prod(a.cod, z),
        PartialIso::from_graph(dom, Ty::prod(Ty::prod(a.cod, z), a.garbage), std::move(graph),
                               "first(" + a.core.label() + ")"));
    out.heap = a.heap;
    out.garbage = a.garbage;
    return out;
  };
  inst.invert = [](const ArrowValue& a) {
    ArrowValue out = make_value("info", a.cod, a.dom, dagger(a.core));
    out.heap = a.garbage;
    out.garbage = a.heap;
    return out;
  };
  inst.differ = info_differ;
  return inst;
}

ArrowValue info_erase(const Ty& x) {
  ArrowValue v = make_value("info", x, Ty::unit(), symmetry(x, Ty::unit()).relabel("erase"));
  v.heap = Ty::unit();
  v.garbage = x;
  return v;
}

ArrowValue info_create(const Ty& x) {
  ArrowValue v = make_value("info", Ty::unit(), x, symmetry(Ty::unit(), x).relabel("create"));
  v.heap = x;
  v.garbage = Ty::unit();
  return v;
}

// ---------------------------------------------------------------------------
// Mutants

ArrowInstance mutant_noinv_instance() {
  ArrowInstance inst = identity_instance();
  inst.name = "mutant-noinv";
  inst.lift = [](const PartialIso& f) { return make_value("mutant-noinv", f.dom(), f.cod(), f); };
  inst.compose_values = [](const ArrowValue& a, const ArrowValue& b) {
    return make_value("mutant-noinv", a.dom, b.cod, compose(a.core, b.core));
  };
  inst.first_op = [](const ArrowValue& a, const Ty& z) {
    return make_value("mutant-noinv", Ty::prod(a.dom, z), Ty::prod(a.cod, z),
                      tensor(a.core, identity(z)));
  };
  // The break: inversion returns endomorphisms unchanged. Non-endomorphisms
  // keep the correct dagger so every law cell stays well-typed.
  inst.invert = [](const ArrowValue& a) {
    if (a.dom == a.cod) return a;
    return make_value("mutant-noinv", a.cod, a.dom, dagger(a.core));
  };
  return inst;
}

ArrowInstance mutant_badfirst_instance(const Ty& s) {
  ArrowInstance inst = state_like_instance("mutant-badfirst", s);
  auto good_first = inst.first_op;
  // The break: first only accepts the first enumerated ancilla value.
  inst.first_op = [good_first](const ArrowValue& a, const Ty& z) {
    ArrowValue out = good_first(a, z);
    auto ancillas = enumerate(z);
    if (ancillas.empty()) return out;
    const Value pick = ancillas.front();
    PartialIso::Graph graph;
    for (const auto& [v, w] : out.core.forward_graph())
      if (v.first().second() == pick) graph.emplace(v, w);
    out.core = PartialIso::from_graph(out.core.dom(), out.core.cod(), std::move(graph),
                                      out.core.label() + "?");
    return out;
  };
  return inst;
}

ArrowValue mutant_vector_length_value(int max_len) {
  Ty carrier = Ty::seq(Ty::fin(2), max_len);
  PartialIso::Graph graph;
  graph.emplace(Value::seq({}), Value::seq({Value::atom(0)}));
  graph.emplace(Value::seq({Value::atom(0)}), Value::seq({}));
  return make_value("vector", Ty::fin(2), Ty::fin(2),
                    PartialIso::from_graph(carrier, carrier, std::move(graph), "shrink"));
}

PartialIso mutant_reader_context_core(const Ty& x, const Ty& c) {
  auto contexts = enumerate(c);
  PartialIso::Graph bump;
  for (size_t i = 0; i < contexts.size(); ++i)
    bump.emplace(contexts[i], contexts[(i + 1) % contexts.size()]);
  return tensor(identity(x),
                PartialIso::from_graph(c, c, std::move(bump), "bump"))
      .relabel("ctx-bump");
}

// ---------------------------------------------------------------------------
// Registry

namespace {

std::vector<ArrowValue> lift_fixtures(const ArrowInstance& inst, const Bounds& bounds) {
  std::vector<Ty> tys = {Ty::unit(), Ty::fin(bounds.fin)};
  std::vector<ArrowValue> out;
  for (const auto& x : tys)
    for (const auto& y : tys)
      for (const auto& f : enumerate_homset(x, y)) out.push_back(arr(inst, f));
  return out;
}

std::vector<EffectEntry> build_registry() {
  std::vector<EffectEntry> entries;

  entries.push_back({"identity", Fragment::Full,
                     [](const Bounds&) { return identity_instance(); },
                     [](const ArrowInstance& inst, const Bounds& b) {
                       return lift_fixtures(inst, b);
                     },
                     {}});

  entries.push_back(
      {"rstate", Fragment::Full,
       [](const Bounds& b) { return rstate_instance(Ty::fin(b.fin)); },
       [](const ArrowInstance& inst, const Bounds& b) {
         Ty x = Ty::fin(b.fin), s = Ty::fin(b.fin);
         auto out = lift_fixtures(inst, b);
         out.push_back(rstate_get(x, s));
         out.push_back(rstate_assert(x, s));
         size_t total = enumerate(s).size();
         bool have_total = false, have_partial = false;
         for (const auto& f : enumerate_homset(s, s)) {
           size_t defined = f.forward_graph().size();
           if (!have_total && defined == total && !extensionally_equal(f, identity(s))) {
             out.push_back(rstate_update(x, f));
             have_total = true;
           } else if (!have_partial && defined > 0 && defined < total) {
             out.push_back(rstate_update(x, f));
             have_partial = true;
           }
           if (have_total && have_partial) break;
         }
         return out;
       },
       {}});

  entries.push_back({"reader", Fragment::Full,
                     [](const Bounds& b) { return reader_instance(Ty::fin(b.fin)); },
                     [](const ArrowInstance& inst, const Bounds& b) {
                       auto out = lift_fixtures(inst, b);
                       out.push_back(reader_get(Ty::fin(b.fin), Ty::fin(b.fin)));
                       return out;
                     },
                     {}});

  entries.push_back({"rewriter", Fragment::Full,
                     [](const Bounds& b) { return rewriter_instance(cyclic_group(b.fin)); },
                     [](const ArrowInstance& inst, const Bounds& b) {
                       GroupSpec g = cyclic_group(b.fin);
                       auto out = lift_fixtures(inst, b);
                       for (const auto& a : enumerate(g.carrier))
                         out.push_back(rewrite(g, Ty::fin(b.fin), a));
                       return out;
                     },
                     {}});

  entries.push_back({"vector", Fragment::Full,
                     [](const Bounds& b) { return vector_instance(b.maxlen); },
                     [](const ArrowInstance& inst, const Bounds& b) {
                       return lift_fixtures(inst, b);
                     },
                     {}});

  entries.push_back(
      {"error", Fragment::Weak,
       [](const Bounds& b) { return error_instance(Ty::fin(b.fin)); },
       [](const ArrowInstance& inst, const Bounds& b) {
         Ty e = Ty::fin(b.fin);
         auto out = lift_fixtures(inst, b);
         PartialIso to_error = identity(e);
         PartialIso site = left_injection(e, e);
         out.push_back(error_raise(e, to_error, site, e));
         out.push_back(error_handle(e, to_error, site, e));
         return out;
       },
       {}});

  entries.push_back({"serializer", Fragment::Full,
                     [](const Bounds& b) {
                       return serializer_instance(default_codec(b.alphabet, b.serialized_len));
                     },
                     [](const ArrowInstance& inst, const Bounds& b) {
                       return lift_fixtures(inst, b);
                     },
                     {}});

  // The information-effect instance is the arrow over the total fragment:
  // its cores come from bijective terms, so the lifted fixtures range over
  // total bijections. Partial lifts stay legal arrows but their restriction
  // idempotents need not commute with the ancilla-moving positives.
  entries.push_back({"info", Fragment::Full,
                     [](const Bounds&) { return info_instance(); },
                     [](const ArrowInstance& inst, const Bounds& b) {
                       std::vector<Ty> tys = {Ty::unit(), Ty::fin(b.fin)};
                       std::vector<ArrowValue> out;
                       for (const auto& x : tys)
                         for (const auto& y : tys)
                           for (const auto& f : enumerate_homset(x, y)) {
                             bool total = f.forward_graph().size() == enumerate(x).size();
                             bool onto = f.forward_graph().size() == enumerate(y).size();
                             if (total && onto) out.push_back(arr(inst, f));
                           }
                       out.push_back(info_erase(Ty::fin(b.fin)));
                       out.push_back(info_create(Ty::fin(b.fin)));
                       out.push_back(info_erase(Ty::unit()));
                       return out;
                     },
                     {}});

  entries.push_back({"mutant-noinv", Fragment::Full,
                     [](const Bounds&) { return mutant_noinv_instance(); },
                     [](const ArrowInstance& inst, const Bounds& b) {
                       Ty x = Ty::fin(b.fin);
                       std::vector<ArrowValue> out;
                       for (const auto& f : enumerate_homset(x, x)) out.push_back(arr(inst, f));
                       return out;
                     },
                     {10, 11, 13}});

  entries.push_back({"mutant-badfirst", Fragment::Full,
                     [](const Bounds& b) { return mutant_badfirst_instance(Ty::fin(b.fin)); },
                     [](const ArrowInstance& inst, const Bounds& b) {
                       return lift_fixtures(inst, b);
                     },
                     {5, 7}});

  entries.push_back({"mutant-vector-len", Fragment::Full,
                     [](const Bounds& b) { return vector_instance(b.maxlen); },
                     [](const ArrowInstance& inst, const Bounds& b) {
                       auto out = lift_fixtures(inst, b);
                       out.push_back(mutant_vector_length_value(b.maxlen));
                       return out;
                     },
                     {0, 4, 8}});

  entries.push_back({"mutant-reader-ctx", Fragment::Full,
                     [](const Bounds& b) { return reader_instance(Ty::fin(b.fin)); },
                     [](const ArrowInstance& inst, const Bounds& b) {
                       Ty x = Ty::fin(b.fin), c = Ty::fin(b.fin);
                       auto out = lift_fixtures(inst, b);
                       ArrowValue bad = make_value("reader", x, x,
                                                   mutant_reader_context_core(x, c));
                       out.push_back(bad);
                       return out;
                     },
                     {0}});

  return entries;
}

} // namespace

const std::vector<EffectEntry>& effect_registry() {
  static const std::vector<EffectEntry> registry = build_registry();
  return registry;
}

const EffectEntry* find_effect(const std::string& name) {
  for (const auto& entry : effect_registry())
    if (entry.name == name) return &entry;
  return nullptr;
}

LawCheckConfig default_law_config(const Bounds& bounds) {
  return LawCheckConfig{{Ty::unit(), Ty::fin(bounds.fin)}};
}

} // namespace invarr
