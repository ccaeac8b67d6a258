#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "invarr/pinj.hpp"

namespace invarr {

/// An effectful computation of one instance: a logical signature dom → cod
/// plus an instance-specific carrier. The carrier is always a partial
/// injection over effect-extended types; instances that track ancillary
/// objects (the information-effect instance) also record heap and garbage
/// types.
struct ArrowValue {
  std::string instance;
  Ty dom = Ty::unit();
  Ty cod = Ty::unit();
  PartialIso core = identity(Ty::unit());
  Ty heap = Ty::unit();
  Ty garbage = Ty::unit();
};

/// First-class effect descriptor: how to lift pure morphisms, compose,
/// thread an ancilla through `first`, invert, and compare values. Equality
/// is instance-specific because some instances compare carriers only up to
/// ancilla bookkeeping.
struct ArrowInstance {
  std::string name;
  bool supports_first = true;
  bool supports_choice = false;

  std::function<ArrowValue(const PartialIso&)> lift;
  std::function<ArrowValue(const ArrowValue&, const ArrowValue&)> compose_values;
  std::function<ArrowValue(const ArrowValue&, const Ty&)> first_op; // null when unsupported
  std::function<ArrowValue(const ArrowValue&)> invert;
  std::function<ArrowValue(const ArrowValue&, const Ty&)> left_op; // null when unsupported

  /// Returns std::nullopt when the two values are equal, otherwise a
  /// human-readable witness of the difference. Only called on values with
  /// identical logical signatures.
  std::function<std::optional<std::string>(const ArrowValue&, const ArrowValue&)> differ;

  /// Optional per-value interface invariant (e.g. context invariance,
  /// length preservation). Returns a witness when violated.
  std::function<std::optional<std::string>(const ArrowValue&)> validate;
};

// Combinators. All check instance tags and signatures, throwing
// std::invalid_argument on misuse and std::logic_error for operations the
// instance does not support.
ArrowValue arr(const ArrowInstance& inst, const PartialIso& f);
ArrowValue seq(const ArrowInstance& inst, const ArrowValue& a, const ArrowValue& b);
ArrowValue first(const ArrowInstance& inst, const ArrowValue& a, const Ty& z);
ArrowValue inv(const ArrowInstance& inst, const ArrowValue& a);

// Derived combinators, expanded definitionally from the primitives.
ArrowValue second(const ArrowInstance& inst, const ArrowValue& a, const Ty& z);
ArrowValue left(const ArrowInstance& inst, const ArrowValue& a, const Ty& z);
ArrowValue fanout(const ArrowInstance& inst, const ArrowValue& f, const ArrowValue& g);
ArrowValue bind(const ArrowInstance& inst, const ArrowValue& f, const ArrowValue& g);

bool arrow_eq(const ArrowInstance& inst, const ArrowValue& a, const ArrowValue& b);

// ---------------------------------------------------------------------------
// Law harness

enum class Verdict { Pass, Fail, Skipped };

struct LawResult {
  int id = 0; // 1..14 for the interface laws, 0 for the instance invariant
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string witness; // non-empty exactly when verdict == Fail
  long cases = 0;
  double millis = 0.0;
};

struct LawReport {
  std::string instance_name;
  std::string domains; // the pure-morphism types quantified over
  std::vector<LawResult> laws;

  bool all_passed() const;
  const LawResult* law(int id) const;
  std::string to_text() const;    // human-readable, includes timings
  std::string to_machine() const; // line-oriented key=value, byte-stable
};

enum class Fragment { Full, Weak };

struct LawCheckConfig {
  /// Types over which the pure morphisms f, g of the lifted-morphism laws
  /// (and the ancilla types of the `first` laws) are quantified.
  std::vector<Ty> pure_types;
};

/// Checks laws 1–14 over every type-compatible combination of fixtures and
/// every pure morphism between the configured types, comparing sides with
/// the instance's equality. The weak fragment skips the laws that mention
/// `first`. Failures never throw; they are report entries with witnesses.
LawReport check_laws(const ArrowInstance& inst, const std::vector<ArrowValue>& fixtures,
                     Fragment fragment, const LawCheckConfig& config);

// ---------------------------------------------------------------------------
// Instance-independent pipelines

/// A combinator expression over pure morphisms. The same expression
/// evaluates in any instance that supports `first`, which is what the
/// do/undo round-trip checks quantify over.
struct Pipeline {
  enum class Op { Lift, Seq, First, Inv, Fanout, Bind };
  Op op = Op::Lift;
  std::shared_ptr<const Pipeline> lhs, rhs;
  std::shared_ptr<const PartialIso> pure; // Lift only
  Ty ancilla = Ty::unit();                // First only
  Ty dom = Ty::unit();
  Ty cod = Ty::unit();

  std::string show() const;
};

/// Deterministically enumerates `count` well-typed pipelines over Fin(2)
/// types, using every constructor at least once (for count >= 8).
std::vector<Pipeline> generate_pipelines(size_t count);

ArrowValue eval_pipeline(const ArrowInstance& inst, const Pipeline& p);

} // namespace invarr
