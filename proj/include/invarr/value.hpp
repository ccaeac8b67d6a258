#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace invarr {

/// First-order type language. Every type is finite: sequences carry an
/// explicit length bound, and serialized types are token strings over a
/// fixed alphabet with a length bound. This keeps every extensional check
/// in the repository a finite enumeration.
class Ty {
public:
  enum class Kind { Unit, Zero, Fin, Prod, Sum, Seq, Serialized };

  static Ty unit();
  static Ty zero();
  static Ty fin(int atom_count);                 // atom_count >= 1
  static Ty prod(Ty left, Ty right);
  static Ty sum(Ty left, Ty right);
  static Ty seq(Ty elem, int max_len);           // max_len >= 0
  static Ty serialized(Ty payload, int alphabet, int max_len);

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }

  int atom_count() const; // Fin
  int max_len() const;    // Seq, Serialized
  int alphabet() const;   // Serialized
  Ty left() const;        // Prod, Sum
  Ty right() const;       // Prod, Sum
  Ty elem() const;        // Seq
  Ty payload() const;     // Serialized

  bool operator==(const Ty& other) const;
  bool operator!=(const Ty& other) const { return !(*this == other); }
  bool operator<(const Ty& other) const;

  // S-expression rendering, e.g. (prod (fin 2) unit).
  std::string to_string() const;

private:
  struct Node {
    Kind kind;
    int a = 0; // Fin count / Seq, Serialized max_len
    int b = 0; // Serialized alphabet
    std::shared_ptr<const Node> kid0, kid1;
  };
  explicit Ty(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static int compare(const Node& lhs, const Node& rhs);
  std::shared_ptr<const Node> node_;
};

/// Parses the S-expression type syntax produced by Ty::to_string.
/// Throws std::invalid_argument with a character position on bad input.
Ty parse_ty(std::string_view text);

/// Canonical first-order values: unit, indexed atoms, pairs, tagged sums,
/// sequences. Structural equality and a total order are decidable; the
/// order backs deterministic enumeration and map keys.
class Value {
public:
  enum class Kind { Unit, Atom, Pair, InL, InR, Seq };

  static Value unit();
  static Value atom(int index);
  static Value pair(Value first, Value second);
  static Value in_left(Value v);
  static Value in_right(Value v);
  static Value seq(std::vector<Value> items);

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }

  int atom_index() const;
  const Value& first() const;  // Pair
  const Value& second() const; // Pair
  const Value& inner() const;  // InL, InR
  const std::vector<Value>& items() const; // Seq

  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }
  bool operator<(const Value& other) const;

  std::string to_string() const;

private:
  Kind kind_ = Kind::Unit;
  int atom_ = 0;
  std::vector<Value> kids_;
  static int compare(const Value& lhs, const Value& rhs);
};

/// Optional display table mapping atom indices to labels in reports.
struct AtomDisplay {
  std::vector<std::string> names;
  std::string show(const Value& v) const;
};

/// Number of inhabitants of a bounded type.
long long cardinality(const Ty& ty);

/// All inhabitants exactly once, in a deterministic lexicographic order
/// (stable across runs). Zero yields the empty list. Throws
/// std::length_error if the type is too large to enumerate.
std::vector<Value> enumerate(const Ty& ty);

/// Decides whether v inhabits ty under the inductive typing rules.
bool check_type(const Value& v, const Ty& ty);

} // namespace invarr
