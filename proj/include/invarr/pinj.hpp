#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "invarr/value.hpp"

namespace invarr {

/// A typed partial injection: mutually inverse partial maps between two
/// bounded types. Construction verifies typing and the mutual-inverse
/// invariant over the whole (finite) domain and codomain, so every value of
/// this class is a morphism of the category of partial injections.
///
/// Immutable and cheap to copy (shared internals).
class PartialIso {
public:
  using Fn = std::function<std::optional<Value>(const Value&)>;
  using Graph = std::map<Value, Value>;

  /// Builds from a forward/backward pair of partial functions, checking
  /// both directions extensionally. Throws std::logic_error on violation.
  PartialIso(Ty dom, Ty cod, const Fn& fwd, const Fn& bwd, std::string label);

  /// Builds from an explicit forward graph; the backward graph is its
  /// inverse. Throws std::logic_error if the graph is ill-typed or not
  /// injective.
  static PartialIso from_graph(Ty dom, Ty cod, Graph fwd, std::string label);

  const Ty& dom() const;
  const Ty& cod() const;
  const std::string& label() const;
  PartialIso relabel(std::string label) const;

  /// Image if defined, absent otherwise. Throws std::invalid_argument if
  /// the input does not inhabit the expected side.
  std::optional<Value> forward(const Value& v) const;
  std::optional<Value> backward(const Value& v) const;

  const Graph& forward_graph() const;
  const Graph& backward_graph() const;

private:
  struct Impl;
  explicit PartialIso(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

enum class Direction { Forward, Backward };

std::optional<Value> apply(const PartialIso& f, const Value& v, Direction direction);

/// Extensional graph equality: same endpoints, same forward graph.
bool extensionally_equal(const PartialIso& f, const PartialIso& g);

// Category structure. Composition is written left to right: compose(f, g)
// runs f, then g, and requires cod(f) == dom(g).
PartialIso identity(const Ty& ty);
PartialIso compose(const PartialIso& f, const PartialIso& g);

// Dagger and restriction.
PartialIso dagger(const PartialIso& f);
PartialIso restriction(const PartialIso& f); // partial identity on the domain of definition

// Monoidal structure on products: acts componentwise, defined iff both
// components are defined.
PartialIso tensor(const PartialIso& f, const PartialIso& g);

// Coherence isomorphisms (all unitary: dagger = inverse).
PartialIso associator(const Ty& a, const Ty& b, const Ty& c); // A⊗(B⊗C) → (A⊗B)⊗C
PartialIso right_unitor(const Ty& a);                         // A⊗I → A
PartialIso left_unitor(const Ty& a);                          // I⊗A → A
PartialIso symmetry(const Ty& a, const Ty& b);                // A⊗B → B⊗A

enum class CoherenceKind { Assoc, RightUnit, LeftUnit, Swap };
PartialIso coherence(CoherenceKind kind, const std::vector<Ty>& tys, bool inverse);

// Disjointness tensor on sums, with the nowhere-defined zero morphisms and
// the canonical quasi-injections.
PartialIso direct_sum(const PartialIso& f, const PartialIso& g); // acts by cases
PartialIso left_injection(const Ty& x, const Ty& y);             // X → X⊕Y, total
PartialIso right_injection(const Ty& x, const Ty& y);            // Y → X⊕Y, total
PartialIso zero_morphism(const Ty& a, const Ty& b);

// Inverse product diagonal x ↦ (x,x); its dagger is defined on equal pairs only.
PartialIso diagonal(const Ty& ty);

// Decision procedures for the base-category axioms, decided extensionally
// over the enumerated domain.
bool is_partial_isometry(const PartialIso& f);
bool positives_commute(const PartialIso& f, const PartialIso& g); // requires dom f == dom g
bool is_partial_isomorphism(const PartialIso& f, const PartialIso& g_candidate);

/// All partial injections from a to b, in a deterministic order (the
/// nowhere-defined morphism comes first). Sizes grow fast; intended for
/// desk-scale types only.
std::vector<PartialIso> enumerate_homset(const Ty& a, const Ty& b);

} // namespace invarr
