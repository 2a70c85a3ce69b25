#pragma once

// The FP collage C ≀ Q: freely adjoin the edges of a quiver Q (on the
// objects of C) to a finite category C. Morphisms are normal-form words
//
//     c0 q1 c1 q2 ... qn cn
//
// with exactly one base morphism in every slot; composition concatenates
// and folds the two adjacent base morphisms with C's composition.

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fiblang/fincat.hpp"

namespace fiblang {

struct Word {
  std::vector<Index> base;   // size = edges.size() + 1
  std::vector<Index> edges;  // Q-edge indices

  std::size_t edge_count() const { return edges.size(); }
  friend auto operator<=>(const Word&, const Word&) = default;
  friend bool operator==(const Word&, const Word&) = default;
};

/// A letter of a raw, possibly unnormalized, alternating sequence.
struct Letter {
  enum class Kind { Base, Edge };
  Kind kind = Kind::Base;
  Index index = kNoIndex;
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// False iff some directed cycle through a Q-edge exists once every
/// non-identity base morphism is read as an edge too.
bool collage_is_finite(const FinCategory& c, const Quiver& q);

/// Folds adjacent base letters and inserts identities so that every slot
/// holds exactly one base morphism. An empty sequence needs a start object.
Word normalize_word(const FinCategory& c, const Quiver& q, std::span<const Letter> letters,
                    std::optional<Index> start = std::nullopt);

class CollageCategory {
 public:
  const FinCategory& base() const { return *base_; }
  const CategoryPtr& base_ptr() const { return base_; }
  /// Q with its vertices listed in the base's object order.
  const Quiver& quiver() const { return quiver_; }
  /// Index i of words() is morphism i of category(); the first
  /// base().morphism_count() words are the 0-edge words, in base order.
  const std::vector<Word>& words() const { return words_; }
  const CategoryPtr& category() const { return category_; }
  bool closed() const { return category_->closed(); }
  std::optional<std::size_t> bound() const { return bound_; }

  Index src(const Word& w) const { return base_->src(w.base.front()); }
  Index tgt(const Word& w) const { return base_->tgt(w.base.back()); }
  std::optional<Index> find_word(const Word& w) const;
  /// g after f. NotComposable on mismatched endpoints; BoundExceeded when
  /// the result has more edges than a truncated collage holds.
  Word compose(const Word& g, const Word& f) const;
  /// Base id for 0-edge words, "[c0|q1|c1|...]" otherwise.
  std::string word_id(const Word& w) const;

 private:
  friend CollageCategory fp_collage(CategoryPtr c, const Quiver& q, std::optional<std::size_t> bound);

  CategoryPtr base_;
  Quiver quiver_;
  std::vector<Word> words_;
  std::map<Word, Index> lookup_;
  CategoryPtr category_;
  std::optional<std::size_t> bound_;
};

/// UnboundedHomSet when infinite and no bound is given; VertexMismatch when
/// Q's vertices are not C's objects.
CollageCategory fp_collage(CategoryPtr c, const Quiver& q,
                           std::optional<std::size_t> bound = std::nullopt);

/// K : C -> C ≀ Q, identity on objects, f |-> its 0-edge word.
CatFunctor canonical_functor(const CollageCategory& collage);

/// Extends M : C -> Set along the free edges; MissingEdgeAction when an
/// edge has no function or the function has the wrong shape.
SetFunctor extend_set_functor(const CollageCategory& collage, const SetFunctor& m,
                              const std::map<Index, std::vector<Index>>& edge_actions);

}  // namespace fiblang
