#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "invarr/value.hpp"

namespace invarr {

// ---------------------------------------------------------------------------
// Reports

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string witness;
};

struct CheckReport {
  std::vector<CheckResult> checks;

  void add(CheckResult result) { checks.push_back(std::move(result)); }
  bool all_passed() const;
  const CheckResult* find(const std::string& name) const;
  std::string to_text() const;
  std::string to_machine() const;
};

// ---------------------------------------------------------------------------
// Finite dagger categories as tables

/// A finite category with identity, composition, and dagger tables. All ids
/// are indices; `then(f, g)` is "f, then g" (g ∘ f) and is defined exactly
/// when cod f = dom g.
struct FinDagCat {
  struct Mor {
    std::string name;
    int dom = 0;
    int cod = 0;
  };

  std::string name;
  std::vector<std::string> objects;
  std::vector<Mor> morphisms;
  std::vector<int> identity_of;                // per object
  std::map<std::pair<int, int>, int> then_tab; // (f, g) → composite
  std::vector<int> dag;                        // per morphism

  int object_index(const std::string& label) const;  // -1 when absent
  int morphism_index(const std::string& label) const;
  std::vector<int> hom(int x, int y) const;
  std::optional<int> then(int f, int g) const;
  int then_or_throw(int f, int g) const;
  const Mor& mor(int f) const { return morphisms.at(f); }
};

/// The category of partial injections between the given types, tabulated.
FinDagCat pinj_category(const std::vector<Ty>& objects, const std::string& name);

CheckResult check_category(const FinDagCat& cat);
CheckResult check_dagger(const FinDagCat& cat);
CheckResult check_inverse(const FinDagCat& cat);

// ---------------------------------------------------------------------------
// Profunctors

/// A Set-valued profunctor on a finite category: carrier sets per object
/// pair and a full action table. The action act(f, g, m) applies f
/// contravariantly and g covariantly, so for m over (X, Y) it needs
/// f : X' → X and g : Y → Y'.
struct FinProfunctor {
  const FinDagCat* cat = nullptr;
  std::string name;
  std::vector<std::string> elem_names;
  std::vector<std::pair<int, int>> elem_home;
  std::map<std::pair<int, int>, std::vector<int>> carrier;
  std::map<std::tuple<int, int, int>, int> action;

  int act(int f, int g, int m) const;
  const std::vector<int>& at(int x, int y) const;
  std::string describe_elem(int m) const;
};

FinProfunctor hom_profunctor(const FinDagCat& cat);
CheckResult check_functorial(const FinProfunctor& prof);

/// The conjugate profunctor: carriers re-homed by swapping the indices,
/// action conjugated through the dagger. A strict involution.
FinProfunctor involution_prof(const FinProfunctor& prof);

/// A coend tensor with explicit equivalence classes: carrier at (X, Z) is
/// the union-find quotient of the middle-object pairs.
struct ProfTensor {
  FinProfunctor prof;
  std::map<std::pair<int, int>, int> class_of;             // (F-elem, G-elem) → class
  std::map<int, std::vector<std::pair<int, int>>> members; // class → pairs
};

enum class MergeOrder { Forward, Reversed };

ProfTensor prof_tensor(const FinProfunctor& f, const FinProfunctor& g,
                       MergeOrder order = MergeOrder::Forward);

/// Left unit coherence of the tensor: hom ⊗ M ≅ M via the action. Returns
/// a witness when the induced map is not a well-defined bijection.
std::optional<std::string> hom_tensor_unit_iso(const FinProfunctor& m);

/// The component F̄ ⊗ Ḡ → conj(G ⊗ F) of the involution on the tensor:
/// checks it is a well-defined bijection of classes.
std::optional<std::string> check_chi_bijection(const FinProfunctor& f, const FinProfunctor& g);

/// The two coherence squares relating the involution to the associator and
/// to double conjugation, checked elementwise on classes.
std::optional<std::string> check_involutive_coherence(const FinProfunctor& f,
                                                      const FinProfunctor& g,
                                                      const FinProfunctor& h);

/// The canonical unit component hom → conj(hom) (the dagger), checked to be
/// a natural bijection.
std::optional<std::string> check_phi_natural_iso(const FinDagCat& cat);

// ---------------------------------------------------------------------------
// Monoids in the profunctor category

/// A monoid over the coend tensor: unit per base morphism (the lifting) and
/// multiplication on composable element pairs (the composition).
struct MonoidInProf {
  FinProfunctor carrier;
  std::map<int, int> unit;                 // base morphism id → element id
  std::map<std::pair<int, int>, int> mult; // (m over (X,Y), n over (Y,Z)) → element

  int apply_mult(int m, int n) const;
  int apply_unit(int f) const;
};

/// The hom monoid: unit is the identity re-indexing, multiplication is the
/// base composition, involution is the dagger.
struct InvolutiveStructure {
  std::map<int, int> inv; // element → element over the swapped pair
  int apply(int m) const;
};

MonoidInProf hom_monoid(const FinDagCat& cat);
InvolutiveStructure hom_involution(const FinDagCat& cat);

CheckResult check_monoid(const MonoidInProf& m);
CheckResult check_involutive_monoid(const MonoidInProf& m, const InvolutiveStructure& inv);

// The endomorphism constructions used by the characterization diagrams.
FinProfunctor build_L(const FinProfunctor& m);
FinProfunctor build_Lplus(const MonoidInProf& m, const InvolutiveStructure& inv);
FinProfunctor build_DM(const MonoidInProf& m, const InvolutiveStructure& inv);

/// Elementwise verification of the three characterization diagrams, with
/// their naturality side-conditions.
CheckReport check_inverse_arrow_diagrams(const MonoidInProf& m, const InvolutiveStructure& inv);

// ---------------------------------------------------------------------------
// The monoid ↔ identity-on-objects-functor correspondence

struct ReconstructedCategory {
  FinDagCat cat;                // D with hom(X,Y) = M(X,Y)
  std::vector<int> functor;     // J: base morphism id → D morphism id
  std::vector<int> elem_to_mor; // M element id → D morphism id
};

ReconstructedCategory monoid_to_category(const FinDagCat& base, const MonoidInProf& m,
                                         const InvolutiveStructure* inv);

/// Inverse direction: an identity-on-objects functor J : C → D presented by
/// its morphism map induces a monoid (and an involution when D has a dagger
/// and J preserves it).
MonoidInProf category_to_monoid(const FinDagCat& base, const FinDagCat& d,
                                const std::vector<int>& j_mor,
                                InvolutiveStructure* out_inv);

/// Searches for an isomorphism of monoids (bijections per object pair
/// commuting with unit, mult, and action). Returns a witness when none
/// exists.
std::optional<std::string> monoid_isomorphic(const MonoidInProf& a, const MonoidInProf& b);

/// Full desk-scale verification: base-category axioms, monoid and
/// involution axioms, the three diagrams, the reconstructed category's
/// inverse-category check, dagger preservation of the reconstruction
/// functor, and the agreement row stating that the diagram side and the
/// reconstruction side decide alike.
CheckReport verify_theorem(const FinDagCat& base, const MonoidInProf& m,
                           const InvolutiveStructure& inv);

// ---------------------------------------------------------------------------
// Fixture files

struct Expectation {
  std::string check;
  bool pass = true;
  std::string witness; // optional expected witness
};

struct Fixture {
  FinDagCat cat;
  bool has_monoid = false; // explicit profunctor/monoid sections present
  MonoidInProf monoid;
  InvolutiveStructure involution;
  std::vector<Expectation> expectations;
};

struct FixtureParseError : std::runtime_error {
  int line;
  FixtureParseError(int line_number, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
        line(line_number) {}
};

Fixture parse_fixture(const std::string& text);
Fixture load_fixture(const std::string& path);

struct FixtureOutcome {
  CheckReport report;
  bool expectations_met = true;
  std::string mismatch; // first unmet expectation
};

FixtureOutcome run_fixture(const Fixture& fixture);

} // namespace invarr
