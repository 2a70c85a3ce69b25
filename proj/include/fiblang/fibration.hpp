#pragma once

// Discrete fibrations over a finite base: recognition, fibres, reindexing,
// the category-of-elements equivalence with presheaves, and the
// comprehensive factorization of an arbitrary functor.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fiblang/fincat.hpp"

namespace fiblang {

/// For each total object E, the unique lift of each base morphism f into
/// p(E): lifts[E][f] = h with tgt(h) = E and p(h) = f.
using LiftTable = std::vector<std::map<Index, Index>>;

struct FibrationCheck {
  struct Counterexample {
    Index total_object = kNoIndex;
    Index base_morphism = kNoIndex;
    std::size_t lift_count = 0;
  };

  bool is_fibration = false;
  LiftTable lifts;
  std::optional<Counterexample> counterexample;
};

FibrationCheck is_discrete_fibration(const CatFunctor& p);

class Fibration {
 public:
  /// Throws NotAFibration naming the first (E, f) without a unique lift.
  explicit Fibration(CatFunctor projection);

  const CatFunctor& projection() const { return projection_; }
  const FinCategory& total() const { return *projection_.dom; }
  const FinCategory& base() const { return *projection_.cod; }
  const CategoryPtr& total_ptr() const { return projection_.dom; }
  const CategoryPtr& base_ptr() const { return projection_.cod; }
  const LiftTable& lifts() const { return lifts_; }
  Index lift(Index total_object, Index base_morphism) const {
    return lifts_.at(total_object).at(base_morphism);
  }

 private:
  CatFunctor projection_;
  LiftTable lifts_;
};

struct Fibre {
  std::vector<Index> objects;
  /// Morphisms sitting over the identity of the base object.
  std::vector<Index> morphisms;
};

Fibre fibre(const CatFunctor& p, Index base_object);
/// Same as above; for a discrete fibration the morphism list holds
/// identities only.
Fibre fibre(const Fibration& p, Index base_object);

/// Category of elements of a presheaf, given as a SetFunctor on opposite(L).
/// Objects are "L:x", the lift of f : L -> L' at (L', x') is "f@L':x'".
Fibration grothendieck(const SetFunctor& presheaf);
/// As above, sharing an existing language pointer as the base; its
/// opposite must equal presheaf.base.
Fibration grothendieck(const SetFunctor& presheaf, const CategoryPtr& language);

/// Fibres as values, reindexing (lift sources) as actions. Element ids are
/// the total object ids.
SetFunctor to_presheaf(const Fibration& p);
/// Runs the fibration check first; NotAFibration on failure.
SetFunctor to_presheaf(const CatFunctor& p);

struct ReindexMap {
  Index base_morphism = kNoIndex;
  /// total object over tgt(f) -> source of its lift, over src(f)
  std::map<Index, Index> function;
};

ReindexMap reindexing(const Fibration& p, Index base_morphism);

/// Empty iff h is a valid functor between the total categories with
/// q ∘ h = p on objects and morphisms.
std::vector<std::string> validate_fibration_morphism(const CatFunctor& h, const Fibration& p,
                                                     const Fibration& q);

/// An isomorphism h : total(p) -> total(q) over the common base, if any.
std::optional<CatFunctor> fibration_iso(const Fibration& p, const Fibration& q);

/// The data needed to factor a functor through its comma categories without
/// requiring a composition table on the domain: objects, morphism endpoints
/// and the object/morphism maps into the base. Any category presented by
/// generators has the same connected comma components as its generators.
struct FunctorGraph {
  std::vector<std::string> object_ids;
  struct Arrow {
    Index src = kNoIndex;
    Index tgt = kNoIndex;
  };
  std::vector<Arrow> arrows;
  std::vector<Index> object_map;
  std::vector<Index> arrow_map;
};

FunctorGraph functor_graph(const CatFunctor& p);

/// The presheaf L |-> pi_0(L ↓ p), one element per comma component.
struct ComponentPresheaf {
  SetFunctor presheaf;
  /// members[L][k] lists the comma objects (d, f : L -> p d) of element k.
  std::vector<std::vector<std::vector<std::pair<Index, Index>>>> members;
};

/// Elements are named by the least comma-object id "(d,f)" in their block.
ComponentPresheaf component_presheaf(const FunctorGraph& graph, const CategoryPtr& base);

struct Factorization {
  CatFunctor first;
  Fibration fibration;
  SetFunctor presheaf;
};

/// p = fibration.projection ∘ first, with the second factor a discrete
/// fibration.
Factorization comprehensive_factorization(const CatFunctor& p);

}  // namespace fiblang
