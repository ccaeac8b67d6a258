#include "invarr/arrow.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

namespace invarr {

namespace {

void require_instance(const ArrowInstance& inst, const ArrowValue& a) {
  if (a.instance != inst.name)
    throw std::invalid_argument("arrow value belongs to instance '" + a.instance +
                                "', expected '" + inst.name + "'");
}

} // namespace

ArrowValue arr(const ArrowInstance& inst, const PartialIso& f) { return inst.lift(f); }

ArrowValue seq(const ArrowInstance& inst, const ArrowValue& a, const ArrowValue& b) {
  require_instance(inst, a);
  require_instance(inst, b);
  if (a.cod != b.dom)
    throw std::invalid_argument("seq: cod " + a.cod.to_string() + " does not match dom " +
                                b.dom.to_string());
  return inst.compose_values(a, b);
}

ArrowValue first(const ArrowInstance& inst, const ArrowValue& a, const Ty& z) {
  require_instance(inst, a);
  if (!inst.supports_first || !inst.first_op)
    throw std::logic_error("instance '" + inst.name + "' does not support first");
  return inst.first_op(a, z);
}

ArrowValue inv(const ArrowInstance& inst, const ArrowValue& a) {
  require_instance(inst, a);
  return inst.invert(a);
}

ArrowValue second(const ArrowInstance& inst, const ArrowValue& a, const Ty& z) {
  ArrowValue pre = arr(inst, symmetry(z, a.dom));
  ArrowValue post = arr(inst, symmetry(a.cod, z));
  return seq(inst, seq(inst, pre, first(inst, a, z)), post);
}

ArrowValue left(const ArrowInstance& inst, const ArrowValue& a, const Ty& z) {
  require_instance(inst, a);
  if (!inst.supports_choice || !inst.left_op)
    throw std::logic_error("instance '" + inst.name + "' does not support left");
  return inst.left_op(a, z);
}

ArrowValue fanout(const ArrowInstance& inst, const ArrowValue& f, const ArrowValue& g) {
  require_instance(inst, f);
  require_instance(inst, g);
  if (f.dom != g.dom)
    throw std::invalid_argument("fanout: domains differ");
  ArrowValue copy = arr(inst, diagonal(f.dom));
  return seq(inst, seq(inst, copy, first(inst, f, g.dom)), second(inst, g, f.cod));
}

ArrowValue bind(const ArrowInstance& inst, const ArrowValue& f, const ArrowValue& g) {
  require_instance(inst, f);
  require_instance(inst, g);
  if (g.dom != Ty::prod(f.dom, f.cod))
    throw std::invalid_argument("bind: continuation dom must pair input with output");
  return seq(inst, fanout(inst, arr(inst, identity(f.dom)), f), g);
}

bool arrow_eq(const ArrowInstance& inst, const ArrowValue& a, const ArrowValue& b) {
  require_instance(inst, a);
  require_instance(inst, b);
  if (a.dom != b.dom || a.cod != b.cod) return false;
  return !inst.differ(a, b).has_value();
}

// ---------------------------------------------------------------------------
// LawReport

bool LawReport::all_passed() const {
  for (const auto& law : laws)
    if (law.verdict == Verdict::Fail) return false;
  return true;
}

const LawResult* LawReport::law(int id) const {
  for (const auto& entry : laws)
    if (entry.id == id) return &entry;
  return nullptr;
}

namespace {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skipped: return "skipped";
  }
  return "?";
}

} // namespace

std::string LawReport::to_text() const {
  std::ostringstream out;
  out << "law report for instance '" << instance_name << "'\n";
  if (!domains.empty()) out << "  pure morphisms over: " << domains << "\n";
  for (const auto& law : laws) {
    out << "  law " << law.id << " (" << law.name << "): " << verdict_name(law.verdict);
    if (law.verdict != Verdict::Skipped)
      out << "  [" << law.cases << " cases, " << law.millis << " ms]";
    if (law.verdict == Verdict::Fail) out << "\n    witness: " << law.witness;
    out << "\n";
  }
  out << (all_passed() ? "all laws hold" : "LAW VIOLATION") << "\n";
  return out.str();
}

std::string LawReport::to_machine() const {
  std::ostringstream out;
  out << "instance=" << instance_name << "\n";
  if (!domains.empty()) out << "domains=" << domains << "\n";
  for (const auto& law : laws) {
    out << "law=" << law.id << " name=" << law.name << " verdict=" << verdict_name(law.verdict)
        << " cases=" << law.cases;
    if (law.verdict == Verdict::Fail) out << " witness=" << law.witness;
    out << "\n";
  }
  out << "result=" << (all_passed() ? "pass" : "fail") << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Law harness

namespace {

class LawRunner {
public:
  LawRunner(const ArrowInstance& inst, const std::vector<ArrowValue>& fixtures,
            const LawCheckConfig& config)
      : inst_(inst), fixtures_(fixtures), config_(config) {}

  LawResult run(int id, const std::string& name,
                const std::function<void(LawRunner&)>& body) {
    result_ = LawResult{id, name, Verdict::Pass, "", 0, 0.0};
    auto start = std::chrono::steady_clock::now();
    body(*this);
    auto stop = std::chrono::steady_clock::now();
    result_.millis = std::chrono::duration<double, std::milli>(stop - start).count();
    return result_;
  }

  static LawResult skipped(int id, const std::string& name) {
    return LawResult{id, name, Verdict::Skipped, "", 0, 0.0};
  }

  void count_case() { ++result_.cases; }

  void force_fail(const std::string& witness) {
    if (result_.verdict == Verdict::Fail) return;
    result_.verdict = Verdict::Fail;
    result_.witness = witness;
  }

  // Compares two arrow values, recording the first counterexample.
  void expect_eq(const ArrowValue& lhs, const ArrowValue& rhs, const std::string& context) {
    ++result_.cases;
    if (result_.verdict == Verdict::Fail) return;
    if (lhs.dom != rhs.dom || lhs.cod != rhs.cod) {
      result_.verdict = Verdict::Fail;
      result_.witness = context + ": signature mismatch " + lhs.dom.to_string() + "->" +
                        lhs.cod.to_string() + " vs " + rhs.dom.to_string() + "->" +
                        rhs.cod.to_string();
      return;
    }
    if (auto diff = inst_.differ(lhs, rhs)) {
      result_.verdict = Verdict::Fail;
      result_.witness = context + ": " + *diff;
    }
  }

  const ArrowInstance& inst() const { return inst_; }
  const std::vector<ArrowValue>& fixtures() const { return fixtures_; }
  const LawCheckConfig& config() const { return config_; }

  void each_fixture(const std::function<void(const ArrowValue&)>& f) {
    for (const auto& a : fixtures_) f(a);
  }

  void each_composable_pair(const std::function<void(const ArrowValue&, const ArrowValue&)>& f) {
    for (const auto& a : fixtures_)
      for (const auto& b : fixtures_)
        if (a.cod == b.dom) f(a, b);
  }

  void each_pure(const Ty& x, const Ty& y, const std::function<void(const PartialIso&)>& f) {
    for (const auto& p : homset(x, y)) f(p);
  }

  const std::vector<PartialIso>& homset(const Ty& x, const Ty& y) {
    auto key = std::make_pair(x, y);
    auto it = homsets_.find(key);
    if (it == homsets_.end()) it = homsets_.emplace(key, enumerate_homset(x, y)).first;
    return it->second;
  }

private:
  const ArrowInstance& inst_;
  const std::vector<ArrowValue>& fixtures_;
  const LawCheckConfig& config_;
  LawResult result_;
  std::map<std::pair<Ty, Ty>, std::vector<PartialIso>> homsets_;
};

std::string describe(const ArrowValue& a) {
  return a.core.label() + " : " + a.dom.to_string() + " -> " + a.cod.to_string();
}

} // namespace

LawReport check_laws(const ArrowInstance& inst, const std::vector<ArrowValue>& fixtures,
                     Fragment fragment, const LawCheckConfig& config) {
  LawReport report;
  report.instance_name = inst.name;
  for (const auto& ty : config.pure_types) {
    if (!report.domains.empty()) report.domains += " ";
    report.domains += ty.to_string();
  }
  LawRunner runner(inst, fixtures, config);
  const auto& pure = config.pure_types;
  const bool with_first = fragment == Fragment::Full;

  if (inst.validate) {
    report.laws.push_back(runner.run(0, "instance-invariant", [&](LawRunner& r) {
      for (const auto& a : fixtures) {
        r.count_case();
        if (auto bad = inst.validate(a)) {
          r.force_fail(describe(a) + ": " + *bad);
          return;
        }
      }
    }));
  }

  report.laws.push_back(runner.run(1, "seq-assoc", [&](LawRunner& r) {
    for (const auto& a : fixtures)
      for (const auto& b : fixtures) {
        if (a.cod != b.dom) continue;
        for (const auto& c : fixtures) {
          if (b.cod != c.dom) continue;
          r.expect_eq(seq(inst, seq(inst, a, b), c), seq(inst, a, seq(inst, b, c)),
                      "a=" + describe(a) + " b=" + describe(b) + " c=" + describe(c));
        }
      }
  }));

  report.laws.push_back(runner.run(2, "arr-compose", [&](LawRunner& r) {
    for (const auto& x : pure)
      for (const auto& y : pure)
        for (const auto& z : pure)
          r.each_pure(x, y, [&](const PartialIso& f) {
            r.each_pure(y, z, [&](const PartialIso& g) {
              r.expect_eq(arr(inst, compose(f, g)), seq(inst, arr(inst, f), arr(inst, g)),
                          "f=" + f.label() + " g=" + g.label());
            });
          });
  }));

  report.laws.push_back(runner.run(3, "arr-id-unit", [&](LawRunner& r) {
    for (const auto& a : fixtures) {
      r.expect_eq(seq(inst, arr(inst, identity(a.dom)), a), a, "left unit at " + describe(a));
      r.expect_eq(seq(inst, a, arr(inst, identity(a.cod))), a, "right unit at " + describe(a));
    }
  }));

  auto skip_or = [&](int id, const std::string& name, const std::function<void(LawRunner&)>& body) {
    return with_first ? runner.run(id, name, body) : LawRunner::skipped(id, name);
  };

  report.laws.push_back(skip_or(4, "first-unit-ancilla", [&](LawRunner& r) {
    Ty unit = Ty::unit();
    for (const auto& a : fixtures)
      r.expect_eq(seq(inst, first(inst, a, unit), arr(inst, right_unitor(a.cod))),
                  seq(inst, arr(inst, right_unitor(a.dom)), a), "a=" + describe(a));
  }));

  report.laws.push_back(skip_or(5, "first-pure-ancilla", [&](LawRunner& r) {
    for (const auto& a : fixtures)
      for (const auto& z : pure)
        for (const auto& z2 : pure)
          r.each_pure(z, z2, [&](const PartialIso& f) {
            r.expect_eq(
                seq(inst, first(inst, a, z), arr(inst, tensor(identity(a.cod), f))),
                seq(inst, arr(inst, tensor(identity(a.dom), f)), first(inst, a, z2)),
                "a=" + describe(a) + " f=" + f.label());
          });
  }));

  report.laws.push_back(skip_or(6, "first-assoc-ancilla", [&](LawRunner& r) {
    for (const auto& a : fixtures)
      for (const auto& z : pure)
        for (const auto& v : pure) {
          Ty zv = Ty::prod(z, v);
          r.expect_eq(seq(inst, first(inst, a, zv), arr(inst, associator(a.cod, z, v))),
                      seq(inst, arr(inst, associator(a.dom, z, v)),
                          first(inst, first(inst, a, z), v)),
                      "a=" + describe(a) + " z=" + z.to_string() + " v=" + v.to_string());
        }
  }));

  report.laws.push_back(skip_or(7, "first-arr", [&](LawRunner& r) {
    for (const auto& x : pure)
      for (const auto& y : pure)
        for (const auto& z : pure)
          r.each_pure(x, y, [&](const PartialIso& f) {
            r.expect_eq(first(inst, arr(inst, f), z), arr(inst, tensor(f, identity(z))),
                        "f=" + f.label() + " z=" + z.to_string());
          });
  }));

  report.laws.push_back(skip_or(8, "first-seq", [&](LawRunner& r) {
    r.each_composable_pair([&](const ArrowValue& a, const ArrowValue& b) {
      for (const auto& z : r.config().pure_types)
        r.expect_eq(first(inst, seq(inst, a, b), z),
                    seq(inst, first(inst, a, z), first(inst, b, z)),
                    "a=" + describe(a) + " b=" + describe(b) + " z=" + z.to_string());
    });
  }));

  report.laws.push_back(runner.run(9, "inv-involutive", [&](LawRunner& r) {
    for (const auto& a : fixtures)
      r.expect_eq(inv(inst, inv(inst, a)), a, "a=" + describe(a));
  }));

  report.laws.push_back(runner.run(10, "inv-antihomomorphism", [&](LawRunner& r) {
    r.each_composable_pair([&](const ArrowValue& b, const ArrowValue& a) {
      // b : W → X, a : X → Y. inv a then inv b = inv (b then a).
      r.expect_eq(seq(inst, inv(inst, a), inv(inst, b)), inv(inst, seq(inst, b, a)),
                  "a=" + describe(a) + " b=" + describe(b));
    });
  }));

  report.laws.push_back(runner.run(11, "inv-arr", [&](LawRunner& r) {
    for (const auto& x : pure)
      for (const auto& y : pure)
        r.each_pure(x, y, [&](const PartialIso& f) {
          r.expect_eq(arr(inst, dagger(f)), inv(inst, arr(inst, f)), "f=" + f.label());
        });
  }));

  report.laws.push_back(skip_or(12, "inv-first", [&](LawRunner& r) {
    for (const auto& a : fixtures)
      for (const auto& z : pure)
        r.expect_eq(inv(inst, first(inst, a, z)), first(inst, inv(inst, a), z),
                    "a=" + describe(a) + " z=" + z.to_string());
  }));

  report.laws.push_back(runner.run(13, "do-undo-do", [&](LawRunner& r) {
    for (const auto& a : fixtures)
      r.expect_eq(seq(inst, seq(inst, a, inv(inst, a)), a), a, "a=" + describe(a));
  }));

  report.laws.push_back(runner.run(14, "positives-commute", [&](LawRunner& r) {
    for (const auto& a : fixtures)
      for (const auto& b : fixtures) {
        if (a.dom != b.dom) continue;
        ArrowValue pa = seq(inst, a, inv(inst, a));
        ArrowValue pb = seq(inst, b, inv(inst, b));
        r.expect_eq(seq(inst, pa, pb), seq(inst, pb, pa),
                    "a=" + describe(a) + " b=" + describe(b));
      }
  }));

  return report;
}

// ---------------------------------------------------------------------------
// Pipelines

namespace {

Pipeline lift_pipeline(const PartialIso& f) {
  Pipeline p;
  p.op = Pipeline::Op::Lift;
  p.pure = std::make_shared<const PartialIso>(f);
  p.dom = f.dom();
  p.cod = f.cod();
  return p;
}

std::shared_ptr<const Pipeline> share(Pipeline p) {
  return std::make_shared<const Pipeline>(std::move(p));
}

Pipeline seq_pipeline(const Pipeline& a, const Pipeline& b) {
  Pipeline p;
  p.op = Pipeline::Op::Seq;
  p.lhs = share(a);
  p.rhs = share(b);
  p.dom = a.dom;
  p.cod = b.cod;
  return p;
}

Pipeline first_pipeline(const Pipeline& a, const Ty& z) {
  Pipeline p;
  p.op = Pipeline::Op::First;
  p.lhs = share(a);
  p.ancilla = z;
  p.dom = Ty::prod(a.dom, z);
  p.cod = Ty::prod(a.cod, z);
  return p;
}

Pipeline inv_pipeline(const Pipeline& a) {
  Pipeline p;
  p.op = Pipeline::Op::Inv;
  p.lhs = share(a);
  p.dom = a.cod;
  p.cod = a.dom;
  return p;
}

Pipeline fanout_pipeline(const Pipeline& a, const Pipeline& b) {
  Pipeline p;
  p.op = Pipeline::Op::Fanout;
  p.lhs = share(a);
  p.rhs = share(b);
  p.dom = a.dom;
  p.cod = Ty::prod(a.cod, b.cod);
  return p;
}

Pipeline bind_pipeline(const Pipeline& a, const Pipeline& b) {
  Pipeline p;
  p.op = Pipeline::Op::Bind;
  p.lhs = share(a);
  p.rhs = share(b);
  p.dom = a.dom;
  p.cod = b.cod;
  return p;
}

} // namespace

std::string Pipeline::show() const {
  switch (op) {
    case Op::Lift: return "arr(" + pure->label() + ")";
    case Op::Seq: return "seq(" + lhs->show() + "," + rhs->show() + ")";
    case Op::First: return "first(" + lhs->show() + "," + ancilla.to_string() + ")";
    case Op::Inv: return "inv(" + lhs->show() + ")";
    case Op::Fanout: return "fanout(" + lhs->show() + "," + rhs->show() + ")";
    case Op::Bind: return "bind(" + lhs->show() + "," + rhs->show() + ")";
  }
  throw std::logic_error("unreachable");
}

std::vector<Pipeline> generate_pipelines(size_t count) {
  Ty f2 = Ty::fin(2);
  auto endos = enumerate_homset(f2, f2);
  std::vector<Pipeline> out;

  // A showcase covering every constructor, then systematic closure.
  Pipeline swap_lift = lift_pipeline(endos.back()); // last endo is the transposition
  Pipeline id_lift = lift_pipeline(identity(f2));
  out.push_back(id_lift);
  out.push_back(seq_pipeline(swap_lift, swap_lift));
  out.push_back(first_pipeline(swap_lift, f2));
  out.push_back(inv_pipeline(swap_lift));
  out.push_back(fanout_pipeline(id_lift, swap_lift));
  out.push_back(bind_pipeline(swap_lift, first_pipeline(swap_lift, f2)));

  for (const auto& f : endos) {
    if (out.size() >= count) break;
    out.push_back(lift_pipeline(f));
  }
  for (size_t k = 0; k < out.size() && out.size() < count; ++k) {
    const Pipeline a = out[k];
    if (out.size() < count) out.push_back(inv_pipeline(a));
    if (out.size() < count) out.push_back(first_pipeline(a, f2));
    for (size_t j = 0; j <= k && out.size() < count; ++j) {
      const Pipeline b = out[j];
      if (a.cod == b.dom && out.size() < count) out.push_back(seq_pipeline(a, b));
      if (b.cod == a.dom && j != k && out.size() < count) out.push_back(seq_pipeline(b, a));
      if (a.dom == b.dom && out.size() < count) out.push_back(fanout_pipeline(a, b));
      if (b.dom == Ty::prod(a.dom, a.cod) && out.size() < count)
        out.push_back(bind_pipeline(a, b));
    }
  }
  return out;
}

ArrowValue eval_pipeline(const ArrowInstance& inst, const Pipeline& p) {
  switch (p.op) {
    case Pipeline::Op::Lift: return arr(inst, *p.pure);
    case Pipeline::Op::Seq:
      return seq(inst, eval_pipeline(inst, *p.lhs), eval_pipeline(inst, *p.rhs));
    case Pipeline::Op::First: return first(inst, eval_pipeline(inst, *p.lhs), p.ancilla);
    case Pipeline::Op::Inv: return inv(inst, eval_pipeline(inst, *p.lhs));
    case Pipeline::Op::Fanout:
      return fanout(inst, eval_pipeline(inst, *p.lhs), eval_pipeline(inst, *p.rhs));
    case Pipeline::Op::Bind:
      return bind(inst, eval_pipeline(inst, *p.lhs), eval_pipeline(inst, *p.rhs));
  }
  throw std::logic_error("unreachable");
}

} // namespace invarr
