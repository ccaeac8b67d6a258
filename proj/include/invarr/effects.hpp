#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "invarr/arrow.hpp"

namespace invarr {

// ---------------------------------------------------------------------------
// Parameter bundles

/// A finite group presented on a value carrier: a unit element, a family of
/// left-multiplication bijections, and the inversion bijection.
struct GroupSpec {
  std::string name;
  Ty carrier = Ty::fin(1);
  Value unit = Value::atom(0);
  std::function<PartialIso(const Value&)> mul; // left multiplication by a fixed element
  PartialIso inverse = identity(Ty::fin(1));
};

/// Z mod n with addition, on Fin(n).
GroupSpec cyclic_group(int n);

/// Checks the group axioms extensionally; returns a witness on failure.
std::optional<std::string> group_defect(const GroupSpec& group);

/// A per-type family of serializers into token strings. serialize(t) must be
/// total on t and injective; its dagger is the (partial) deserializer,
/// defined exactly on canonical token strings.
struct CodecSpec {
  int alphabet = 4;
  int max_len = 8;
  std::function<PartialIso(const Ty&)> serialize;
};

/// Self-delimiting prefix encoding: unit encodes to the empty string, atoms
/// to one token, pairs to concatenation, tagged values to a tag token then
/// the payload, sequences to a length token then the elements. Throws if a
/// value of the requested type does not fit the alphabet or length bound.
CodecSpec default_codec(int alphabet, int max_len);

Ty serialized_ty(const CodecSpec& codec, const Ty& t);

// ---------------------------------------------------------------------------
// Effect instances

/// Pure computations: arrow values are partial injections themselves and
/// inversion is the dagger. Also supports choice over sums.
ArrowInstance identity_instance();

/// Mutable store of type S: carriers are partial injections X⊗S ↔ Y⊗S.
ArrowInstance rstate_instance(const Ty& s);
ArrowValue rstate_get(const Ty& x, const Ty& s);    // x ↦ ((x,s),s)
ArrowValue rstate_assert(const Ty& x, const Ty& s); // inverse of get
ArrowValue rstate_update(const Ty& x, const PartialIso& f); // f : S ↔ S

/// Immutable context of type C: same carrier as the state instance, but
/// every arrow must leave the context component unchanged.
ArrowInstance reader_instance(const Ty& c);
struct ReaderMake {
  std::optional<ArrowValue> value; // absent when rejected
  std::string witness;             // set when rejected
};
ReaderMake reader_make(const Ty& c, const PartialIso& core);
ArrowValue reader_get(const Ty& x, const Ty& c);

/// Group-valued store: state changes by multiplying with group elements,
/// so every write can be unwritten.
ArrowInstance rewriter_instance(const GroupSpec& group);
ArrowValue rewrite(const GroupSpec& group, const Ty& x, const Value& a);

/// Length-preserving transformations of bounded sequences.
ArrowInstance vector_instance(int max_len);
ArrowValue rev_map(int max_len, const PartialIso& f);
/// Pairs of equal-length sequences ↔ sequences of pairs; undefined on
/// unequal lengths.
PartialIso rev_zip(const Ty& a, const Ty& b, int max_len);

/// Failure with error type E: carriers X⊕E ↔ Y⊕E. A weak arrow: `first`
/// is unsupported.
ArrowInstance error_instance(const Ty& e);
/// Raising maps fresh errors through `to_error` and tags provenance with
/// the choice function `site` (E ↔ E⊕E). The success codomain is free, so
/// it is passed explicitly.
ArrowValue error_raise(const Ty& e, const PartialIso& to_error, const PartialIso& site,
                       const Ty& cod);
ArrowValue error_handle(const Ty& e, const PartialIso& to_error, const PartialIso& site,
                        const Ty& dom);

/// Serialization: carriers X ↔ Serialized(Y); composition deserializes
/// between stages, inversion re-serializes through the dagger.
ArrowInstance serializer_instance(const CodecSpec& codec);

/// Explicit information creation and erasure: carriers X⊗H ↔ Y⊗G with a
/// heap H and a garbage dump G; equality holds up to ancilla bookkeeping.
ArrowInstance info_instance();
ArrowValue info_erase(const Ty& x);  // heap 1, garbage X
ArrowValue info_create(const Ty& x); // heap X, garbage 1

// ---------------------------------------------------------------------------
// Mutants bundled for harness validation. Each breaks one interface
// obligation while keeping every carrier a well-formed partial injection.

ArrowInstance mutant_noinv_instance();           // inv a = a (on endo fixtures)
ArrowInstance mutant_badfirst_instance(const Ty& s); // first restricted to one ancilla value
ArrowValue mutant_vector_length_value(int max_len);  // swaps [] and [a0]
PartialIso mutant_reader_context_core(const Ty& x, const Ty& c); // bumps the context

// ---------------------------------------------------------------------------
// Registry

struct Bounds {
  int fin = 2;
  int maxlen = 2;
  int alphabet = 4;
  int serialized_len = 8;
};

struct EffectEntry {
  std::string name;
  Fragment fragment = Fragment::Full;
  std::function<ArrowInstance(const Bounds&)> make_instance;
  std::function<std::vector<ArrowValue>(const ArrowInstance&, const Bounds&)> make_fixtures;
  std::vector<int> expected_failing_laws; // empty for healthy instances
};

const std::vector<EffectEntry>& effect_registry();
const EffectEntry* find_effect(const std::string& name);
LawCheckConfig default_law_config(const Bounds& bounds);

} // namespace invarr
