#include "invarr/pinj.hpp"

#include <stdexcept>

namespace invarr {

struct PartialIso::Impl {
  Ty dom;
  Ty cod;
  Graph fwd;
  Graph bwd;
  std::string label;
};

namespace {

[[noreturn]] void violation(const std::string& label, const std::string& what) {
  throw std::logic_error("partial injection '" + label + "': " + what);
}

} // namespace

PartialIso::PartialIso(Ty dom, Ty cod, const Fn& fwd, const Fn& bwd, std::string label) {
  auto impl = std::make_shared<Impl>(Impl{dom, cod, {}, {}, std::move(label)});
  for (const auto& v : enumerate(dom)) {
    if (auto w = fwd(v)) {
      if (!check_type(*w, cod))
        violation(impl->label, "forward image " + w->to_string() + " of " + v.to_string() +
                                   " does not inhabit " + cod.to_string());
      auto back = bwd(*w);
      if (!back || *back != v)
        violation(impl->label, "backward(forward(" + v.to_string() + ")) != " + v.to_string());
      impl->fwd.emplace(v, *w);
    }
  }
  for (const auto& w : enumerate(cod)) {
    if (auto v = bwd(w)) {
      if (!check_type(*v, dom))
        violation(impl->label, "backward image " + v->to_string() + " of " + w.to_string() +
                                   " does not inhabit " + dom.to_string());
      auto fore = fwd(*v);
      if (!fore || *fore != w)
        violation(impl->label, "forward(backward(" + w.to_string() + ")) != " + w.to_string());
      impl->bwd.emplace(w, *v);
    }
  }
  impl_ = std::move(impl);
}

PartialIso PartialIso::from_graph(Ty dom, Ty cod, Graph fwd, std::string label) {
  auto impl = std::make_shared<Impl>(Impl{dom, cod, std::move(fwd), {}, std::move(label)});
  for (const auto& [v, w] : impl->fwd) {
    if (!check_type(v, dom))
      violation(impl->label, "graph key " + v.to_string() + " does not inhabit " + dom.to_string());
    if (!check_type(w, cod))
      violation(impl->label, "graph image " + w.to_string() + " does not inhabit " + cod.to_string());
    if (!impl->bwd.emplace(w, v).second)
      violation(impl->label, "not injective at image " + w.to_string());
  }
  return PartialIso{std::move(impl)};
}

const Ty& PartialIso::dom() const { return impl_->dom; }
const Ty& PartialIso::cod() const { return impl_->cod; }
const std::string& PartialIso::label() const { return impl_->label; }

PartialIso PartialIso::relabel(std::string label) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->label = std::move(label);
  return PartialIso{std::move(impl)};
}

std::optional<Value> PartialIso::forward(const Value& v) const {
  if (!check_type(v, impl_->dom))
    throw std::invalid_argument("'" + impl_->label + "' applied forward to " + v.to_string() +
                                " which does not inhabit " + impl_->dom.to_string());
  auto it = impl_->fwd.find(v);
  if (it == impl_->fwd.end()) return std::nullopt;
  return it->second;
}

std::optional<Value> PartialIso::backward(const Value& v) const {
  if (!check_type(v, impl_->cod))
    throw std::invalid_argument("'" + impl_->label + "' applied backward to " + v.to_string() +
                                " which does not inhabit " + impl_->cod.to_string());
  auto it = impl_->bwd.find(v);
  if (it == impl_->bwd.end()) return std::nullopt;
  return it->second;
}

const PartialIso::Graph& PartialIso::forward_graph() const { return impl_->fwd; }
const PartialIso::Graph& PartialIso::backward_graph() const { return impl_->bwd; }

std::optional<Value> apply(const PartialIso& f, const Value& v, Direction direction) {
  return direction == Direction::Forward ? f.forward(v) : f.backward(v);
}

bool extensionally_equal(const PartialIso& f, const PartialIso& g) {
  return f.dom() == g.dom() && f.cod() == g.cod() && f.forward_graph() == g.forward_graph();
}

PartialIso identity(const Ty& ty) {
  PartialIso::Graph graph;
  for (const auto& v : enumerate(ty)) graph.emplace(v, v);
  return PartialIso::from_graph(ty, ty, std::move(graph), "id");
}

PartialIso compose(const PartialIso& f, const PartialIso& g) {
  if (f.cod() != g.dom())
    throw std::invalid_argument("compose: cod of '" + f.label() + "' is " + f.cod().to_string() +
                                " but dom of '" + g.label() + "' is " + g.dom().to_string());
  PartialIso::Graph graph;
  for (const auto& [v, mid] : f.forward_graph()) {
    auto it = g.forward_graph().find(mid);
    if (it != g.forward_graph().end()) graph.emplace(v, it->second);
  }
  return PartialIso::from_graph(f.dom(), g.cod(), std::move(graph),
                                "(" + f.label() + " ; " + g.label() + ")");
}

PartialIso dagger(const PartialIso& f) {
  PartialIso::Graph graph = f.backward_graph();
  return PartialIso::from_graph(f.cod(), f.dom(), std::move(graph), f.label() + "^");
}

PartialIso restriction(const PartialIso& f) {
  PartialIso::Graph graph;
  for (const auto& [v, _] : f.forward_graph()) graph.emplace(v, v);
  return PartialIso::from_graph(f.dom(), f.dom(), std::move(graph), "rst(" + f.label() + ")");
}

PartialIso tensor(const PartialIso& f, const PartialIso& g) {
  PartialIso::Graph graph;
  for (const auto& [vf, wf] : f.forward_graph())
    for (const auto& [vg, wg] : g.forward_graph())
      graph.emplace(Value::pair(vf, vg), Value::pair(wf, wg));
  return PartialIso::from_graph(Ty::prod(f.dom(), g.dom()), Ty::prod(f.cod(), g.cod()),
                                std::move(graph), "(" + f.label() + " x " + g.label() + ")");
}

PartialIso associator(const Ty& a, const Ty& b, const Ty& c) {
  Ty dom = Ty::prod(a, Ty::prod(b, c));
  Ty cod = Ty::prod(Ty::prod(a, b), c);
  PartialIso::Graph graph;
  for (const auto& v : enumerate(dom)) {
    const Value& x = v.first();
    const Value& y = v.second().first();
    const Value& z = v.second().second();
    graph.emplace(v, Value::pair(Value::pair(x, y), z));
  }
  return PartialIso::from_graph(dom, cod, std::move(graph), "assoc");
}

PartialIso right_unitor(const Ty& a) {
  Ty dom = Ty::prod(a, Ty::unit());
  PartialIso::Graph graph;
  for (const auto& v : enumerate(dom)) graph.emplace(v, v.first());
  return PartialIso::from_graph(dom, a, std::move(graph), "runit");
}

PartialIso left_unitor(const Ty& a) {
  Ty dom = Ty::prod(Ty::unit(), a);
  PartialIso::Graph graph;
  for (const auto& v : enumerate(dom)) graph.emplace(v, v.second());
  return PartialIso::from_graph(dom, a, std::move(graph), "lunit");
}

PartialIso symmetry(const Ty& a, const Ty& b) {
  Ty dom = Ty::prod(a, b);
  PartialIso::Graph graph;
  for (const auto& v : enumerate(dom)) graph.emplace(v, Value::pair(v.second(), v.first()));
  return PartialIso::from_graph(dom, Ty::prod(b, a), std::move(graph), "swap");
}

PartialIso coherence(CoherenceKind kind, const std::vector<Ty>& tys, bool inverse) {
  auto want = [&](size_t n) {
    if (tys.size() != n)
      throw std::invalid_argument("coherence: expected " + std::to_string(n) + " types, got " +
                                  std::to_string(tys.size()));
  };
  PartialIso iso = [&] {
    switch (kind) {
      case CoherenceKind::Assoc: want(3); return associator(tys[0], tys[1], tys[2]);
      case CoherenceKind::RightUnit: want(1); return right_unitor(tys[0]);
      case CoherenceKind::LeftUnit: want(1); return left_unitor(tys[0]);
      case CoherenceKind::Swap: want(2); return symmetry(tys[0], tys[1]);
    }
    throw std::logic_error("unreachable");
  }();
  return inverse ? dagger(iso) : iso;
}

PartialIso direct_sum(const PartialIso& f, const PartialIso& g) {
  PartialIso::Graph graph;
  for (const auto& [v, w] : f.forward_graph()) graph.emplace(Value::in_left(v), Value::in_left(w));
  for (const auto& [v, w] : g.forward_graph()) graph.emplace(Value::in_right(v), Value::in_right(w));
  return PartialIso::from_graph(Ty::sum(f.dom(), g.dom()), Ty::sum(f.cod(), g.cod()),
                                std::move(graph), "(" + f.label() + " + " + g.label() + ")");
}

PartialIso left_injection(const Ty& x, const Ty& y) {
  PartialIso::Graph graph;
  for (const auto& v : enumerate(x)) graph.emplace(v, Value::in_left(v));
  return PartialIso::from_graph(x, Ty::sum(x, y), std::move(graph), "inl");
}

PartialIso right_injection(const Ty& x, const Ty& y) {
  PartialIso::Graph graph;
  for (const auto& v : enumerate(y)) graph.emplace(v, Value::in_right(v));
  return PartialIso::from_graph(y, Ty::sum(x, y), std::move(graph), "inr");
}

PartialIso zero_morphism(const Ty& a, const Ty& b) {
  return PartialIso::from_graph(a, b, {}, "0");
}

PartialIso diagonal(const Ty& ty) {
  PartialIso::Graph graph;
  for (const auto& v : enumerate(ty)) graph.emplace(v, Value::pair(v, v));
  return PartialIso::from_graph(ty, Ty::prod(ty, ty), std::move(graph), "copy");
}

bool is_partial_isometry(const PartialIso& f) {
  return extensionally_equal(compose(compose(f, dagger(f)), f), f);
}

bool positives_commute(const PartialIso& f, const PartialIso& g) {
  if (f.dom() != g.dom())
    throw std::invalid_argument("positives_commute: domains differ");
  PartialIso pf = compose(f, dagger(f));
  PartialIso pg = compose(g, dagger(g));
  return extensionally_equal(compose(pf, pg), compose(pg, pf));
}

bool is_partial_isomorphism(const PartialIso& f, const PartialIso& g_candidate) {
  if (f.dom() != g_candidate.cod() || f.cod() != g_candidate.dom())
    throw std::invalid_argument("is_partial_isomorphism: candidate has wrong typing");
  // g ∘ f = f̄ and f ∘ g = ḡ, with composition read left to right.
  return extensionally_equal(compose(f, g_candidate), restriction(f)) &&
         extensionally_equal(compose(g_candidate, f), restriction(g_candidate));
}

std::vector<PartialIso> enumerate_homset(const Ty& a, const Ty& b) {
  std::vector<Value> as = enumerate(a);
  std::vector<Value> bs = enumerate(b);
  std::vector<PartialIso> out;
  // choice[i] = -1 for undefined, else an index into bs, all distinct.
  std::vector<int> choice(as.size(), -1);
  std::vector<bool> used(bs.size(), false);
  size_t counter = 0;
  auto emit = [&] {
    PartialIso::Graph graph;
    for (size_t i = 0; i < as.size(); ++i)
      if (choice[i] >= 0) graph.emplace(as[i], bs[choice[i]]);
    out.push_back(PartialIso::from_graph(a, b, std::move(graph), "h" + std::to_string(counter++)));
  };
  std::function<void(size_t)> walk = [&](size_t i) {
    if (i == as.size()) {
      emit();
      return;
    }
    choice[i] = -1;
    walk(i + 1);
    for (size_t j = 0; j < bs.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      choice[i] = static_cast<int>(j);
      walk(i + 1);
      used[j] = false;
    }
    choice[i] = -1;
  };
  walk(0);
  return out;
}

} // namespace invarr
