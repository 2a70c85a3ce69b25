#pragma once

// Finite categories, quivers, functors and Set-valued functors, plus the
// universal constructions the rest of the engine is assembled from.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fiblang {

using Index = std::size_t;
inline constexpr Index kNoIndex = static_cast<Index>(-1);

/// A category with finitely many objects and morphisms, stored as explicit
/// tables. Objects and morphisms are addressed by position; their string
/// identifiers are unique within each kind and are what serializers and
/// scenario files use.
///
/// A category built with a bounded enumeration (free categories on cyclic
/// quivers, truncated collages) is flagged non-closed: composites that would
/// exceed the bound are simply absent from the table.
class FinCategory {
 public:
  struct Morphism {
    std::string id;
    Index src = kNoIndex;
    Index tgt = kNoIndex;
    friend bool operator==(const Morphism&, const Morphism&) = default;
  };

  /// Adds an object without an identity; pair with set_identity.
  Index add_object(std::string id);
  /// Adds an object together with its identity "id_<id>" and id∘id = id.
  Index add_object_with_identity(std::string id);
  Index add_morphism(std::string id, Index src, Index tgt);
  void set_identity(Index object, Index morphism);
  /// Records g∘f = gf. Requires tgt(f) = src(g) and matching endpoints.
  void set_composite(Index g, Index f, Index gf);
  /// Fills id∘f = f and f∘id = f for every morphism.
  void fill_identity_composites();
  void set_closed(bool closed) { closed_ = closed; }

  std::size_t object_count() const { return objects_.size(); }
  std::size_t morphism_count() const { return morphisms_.size(); }
  const std::string& object_id(Index x) const { return objects_.at(x); }
  const Morphism& morphism(Index m) const { return morphisms_.at(m); }
  const std::string& morphism_id(Index m) const { return morphisms_.at(m).id; }
  Index src(Index m) const { return morphisms_.at(m).src; }
  Index tgt(Index m) const { return morphisms_.at(m).tgt; }
  /// kNoIndex when the object has no identity yet.
  Index identity(Index x) const { return identities_.at(x); }
  bool is_identity(Index m) const;
  bool closed() const { return closed_; }

  std::optional<Index> find_object(std::string_view id) const;
  std::optional<Index> find_morphism(std::string_view id) const;
  /// Throws ReferenceError for unknown identifiers.
  Index object_index(std::string_view id) const;
  Index morphism_index(std::string_view id) const;

  /// g∘f when recorded.
  std::optional<Index> compose(Index g, Index f) const;
  /// g∘f, throwing NotComposable for mismatched endpoints and
  /// BoundExceeded when the pair is composable but the table is truncated.
  Index compose_checked(Index g, Index f) const;

  std::vector<Index> hom(Index x, Index y) const;
  const std::vector<Index>& outgoing(Index x) const { return out_.at(x); }
  const std::vector<Index>& incoming(Index x) const { return in_.at(x); }

  /// Composition table as (g, f, g∘f), sorted.
  std::vector<std::tuple<Index, Index, Index>> composition_table() const;

  friend bool operator==(const FinCategory& a, const FinCategory& b);

 private:
  static std::uint64_t key(Index g, Index f) {
    return (static_cast<std::uint64_t>(g) << 32) | static_cast<std::uint64_t>(f);
  }

  std::vector<std::string> objects_;
  std::vector<Index> identities_;
  std::vector<Morphism> morphisms_;
  std::unordered_map<std::string, Index> object_lookup_;
  std::unordered_map<std::string, Index> morphism_lookup_;
  std::unordered_map<std::uint64_t, Index> compose_;
  std::vector<std::vector<Index>> out_;
  std::vector<std::vector<Index>> in_;
  bool closed_ = true;
};

using CategoryPtr = std::shared_ptr<const FinCategory>;

inline CategoryPtr share(FinCategory c) { return std::make_shared<const FinCategory>(std::move(c)); }

/// Empty result means every category law holds. Truncated categories are
/// refused with a single violation.
std::vector<std::string> validate_category(const FinCategory& c);

/// Same objects and morphisms in the same order; src/tgt swapped and
/// composition reversed. An involution, exactly.
FinCategory opposite(const FinCategory& c);

/// One object "pt" with its identity.
FinCategory terminal_category();
FinCategory discrete_category(std::span<const std::string> objects);

struct Quiver {
  struct Edge {
    std::string id;
    Index src = kNoIndex;
    Index tgt = kNoIndex;
    /// Origin label set by quiver_pushout ("base" or "extra").
    std::string tag;
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  std::vector<std::string> vertices;
  std::vector<Edge> edges;

  Index vertex_index(std::string_view id) const;
  friend bool operator==(const Quiver&, const Quiver&) = default;
};

Quiver discrete_quiver(std::span<const std::string> vertices);
Quiver underlying_quiver(const FinCategory& c);
bool has_directed_cycle(const Quiver& q);

/// Path category on q. Identities are "id_<v>", a path is its edge ids
/// joined by ';' in traversal order. Cyclic quivers need a bound; the
/// result is then non-closed and only paths of length <= bound exist.
FinCategory free_category(const Quiver& q, std::optional<std::size_t> bound = std::nullopt);

/// Edges of both quivers over their shared vertex set, tagged by origin.
Quiver quiver_pushout(const Quiver& base, const Quiver& extra);

/// Composite of a path given first-to-last. An empty path needs a start
/// object and yields its identity.
Index compose_path(const FinCategory& c, std::span<const Index> path,
                   std::optional<Index> start = std::nullopt);

struct CatFunctor {
  CategoryPtr dom;
  CategoryPtr cod;
  std::vector<Index> object_map;
  std::vector<Index> morphism_map;

  friend bool operator==(const CatFunctor& a, const CatFunctor& b);
};

std::vector<std::string> validate_functor(const CatFunctor& f);
CatFunctor identity_functor(const CategoryPtr& c);
/// g after f; requires *f.cod == *g.dom.
CatFunctor compose_functors(const CatFunctor& g, const CatFunctor& f);

/// A covariant functor base -> FinSet. values[x] lists the element ids of
/// object x; actions[m][i] is the index, in values[tgt m], of the image of
/// values[src m][i].
struct SetFunctor {
  CategoryPtr base;
  std::vector<std::vector<std::string>> values;
  std::vector<std::vector<Index>> actions;

  std::optional<Index> find_element(Index object, std::string_view element) const;
  friend bool operator==(const SetFunctor& a, const SetFunctor& b);
};

std::vector<std::string> validate_setfunctor(const SetFunctor& f);
/// f ∘ along: a functor on along.dom.
SetFunctor restrict_along(const SetFunctor& f, const CatFunctor& along);
/// Reads the same value/action tables over the opposite base, i.e. the
/// composite the variance convention uses for D^op : A^op -> L^op.
SetFunctor pullback_opposite(const SetFunctor& presheaf, const CatFunctor& diagram);

/// Per-object bijections F(x) -> G(x) commuting with every action.
using NaturalIso = std::vector<std::vector<Index>>;
/// Throws BaseMismatch when the bases differ.
std::optional<NaturalIso> natural_iso_check(const SetFunctor& f, const SetFunctor& g);

struct Diagram {
  CategoryPtr shape;
  CatFunctor labels;
};

struct LimitCone {
  /// Shape objects in the fixed order used for tuple components (by id).
  std::vector<Index> component_order;
  /// tuples[k][a] = element index in the value set of shape object a.
  std::vector<std::vector<Index>> tuples;
  /// "(x_1,...,x_n)" following component_order.
  std::vector<std::string> ids;

  std::size_t size() const { return tuples.size(); }
  /// Projection onto shape object a.
  std::vector<Index> leg(Index a) const;
};

/// All compatible families of the Set-valued diagram, i.e. the limit in Set.
/// Tuples are sorted lexicographically by their element ids.
LimitCone set_limit(const SetFunctor& diagram);

struct CommaCategory {
  FinCategory category;
  /// labels[o] = (d, f) with f : L -> p(d).
  std::vector<std::pair<Index, Index>> labels;
};

/// L ↓ p: objects (d, f : L -> p d), morphisms g : d1 -> d2 with p(g)∘f1 = f2.
CommaCategory comma_category(Index l, const CatFunctor& p);

/// Zigzag-connected blocks, each sorted by object id and the blocks sorted
/// by their least id.
std::vector<std::vector<Index>> connected_components(const FinCategory& c);

}  // namespace fiblang
