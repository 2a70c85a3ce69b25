#include "fiblang/fincat.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

#include "fiblang/error.hpp"

namespace fiblang {

// ---------------------------------------------------------------------------
// FinCategory

Index FinCategory::add_object(std::string id) {
  if (object_lookup_.contains(id)) {
    throw Error(ErrorCode::InvalidArgument, "duplicate object id '" + id + "'");
  }
  Index x = objects_.size();
  object_lookup_.emplace(id, x);
  objects_.push_back(std::move(id));
  identities_.push_back(kNoIndex);
  out_.emplace_back();
  in_.emplace_back();
  return x;
}

Index FinCategory::add_object_with_identity(std::string id) {
  std::string identity_id = "id_" + id;
  Index x = add_object(std::move(id));
  Index m = add_morphism(std::move(identity_id), x, x);
  set_identity(x, m);
  set_composite(m, m, m);
  return x;
}

Index FinCategory::add_morphism(std::string id, Index src, Index tgt) {
  if (src >= objects_.size() || tgt >= objects_.size()) {
    throw Error(ErrorCode::InvalidArgument, "morphism '" + id + "' has unknown endpoint");
  }
  if (morphism_lookup_.contains(id)) {
    throw Error(ErrorCode::InvalidArgument, "duplicate morphism id '" + id + "'");
  }
  Index m = morphisms_.size();
  morphism_lookup_.emplace(id, m);
  morphisms_.push_back({std::move(id), src, tgt});
  out_[src].push_back(m);
  in_[tgt].push_back(m);
  return m;
}

void FinCategory::set_identity(Index object, Index morphism) {
  const auto& m = morphisms_.at(morphism);
  if (m.src != object || m.tgt != object) {
    throw Error(ErrorCode::InvalidArgument,
                "identity '" + m.id + "' is not an endomorphism of '" + objects_.at(object) + "'");
  }
  identities_.at(object) = morphism;
}

void FinCategory::set_composite(Index g, Index f, Index gf) {
  const auto& mg = morphisms_.at(g);
  const auto& mf = morphisms_.at(f);
  const auto& mgf = morphisms_.at(gf);
  if (mf.tgt != mg.src) {
    throw Error(ErrorCode::NotComposable, mg.id + " after " + mf.id);
  }
  if (mgf.src != mf.src || mgf.tgt != mg.tgt) {
    throw Error(ErrorCode::InvalidArgument,
                "composite " + mg.id + "∘" + mf.id + " = " + mgf.id + " has wrong endpoints");
  }
  compose_[key(g, f)] = gf;
}

void FinCategory::fill_identity_composites() {
  for (Index m = 0; m < morphisms_.size(); ++m) {
    Index s = identities_[morphisms_[m].src];
    Index t = identities_[morphisms_[m].tgt];
    if (s != kNoIndex) compose_.try_emplace(key(m, s), m);
    if (t != kNoIndex) compose_.try_emplace(key(t, m), m);
  }
}

bool FinCategory::is_identity(Index m) const {
  return identities_.at(morphisms_.at(m).src) == m;
}

std::optional<Index> FinCategory::find_object(std::string_view id) const {
  auto it = object_lookup_.find(std::string(id));
  if (it == object_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> FinCategory::find_morphism(std::string_view id) const {
  auto it = morphism_lookup_.find(std::string(id));
  if (it == morphism_lookup_.end()) return std::nullopt;
  return it->second;
}

Index FinCategory::object_index(std::string_view id) const {
  if (auto x = find_object(id)) return *x;
  throw Error(ErrorCode::ReferenceError, "unknown object '" + std::string(id) + "'");
}

Index FinCategory::morphism_index(std::string_view id) const {
  if (auto m = find_morphism(id)) return *m;
  throw Error(ErrorCode::ReferenceError, "unknown morphism '" + std::string(id) + "'");
}

std::optional<Index> FinCategory::compose(Index g, Index f) const {
  auto it = compose_.find(key(g, f));
  if (it == compose_.end()) return std::nullopt;
  return it->second;
}

Index FinCategory::compose_checked(Index g, Index f) const {
  if (tgt(f) != src(g)) {
    throw Error(ErrorCode::NotComposable, morphism_id(g) + " after " + morphism_id(f));
  }
  if (auto gf = compose(g, f)) return *gf;
  if (!closed_) {
    throw Error(ErrorCode::BoundExceeded, morphism_id(g) + " after " + morphism_id(f));
  }
  throw Error(ErrorCode::InvalidArgument,
              "composition table has no entry for " + morphism_id(g) + " after " + morphism_id(f));
}

std::vector<Index> FinCategory::hom(Index x, Index y) const {
  std::vector<Index> result;
  for (Index m : out_.at(x)) {
    if (morphisms_[m].tgt == y) result.push_back(m);
  }
  return result;
}

std::vector<std::tuple<Index, Index, Index>> FinCategory::composition_table() const {
  std::vector<std::tuple<Index, Index, Index>> table;
  table.reserve(compose_.size());
  for (const auto& [k, gf] : compose_) {
    table.emplace_back(static_cast<Index>(k >> 32), static_cast<Index>(k & 0xffffffffu), gf);
  }
  std::sort(table.begin(), table.end());
  return table;
}

bool operator==(const FinCategory& a, const FinCategory& b) {
  return a.closed_ == b.closed_ && a.objects_ == b.objects_ && a.identities_ == b.identities_ &&
         a.morphisms_ == b.morphisms_ && a.compose_ == b.compose_;
}

// ---------------------------------------------------------------------------

std::vector<std::string> validate_category(const FinCategory& c) {
  std::vector<std::string> violations;
  if (!c.closed()) {
    violations.emplace_back("category is truncated (not closed); laws are not checkable");
    return violations;
  }
  const std::size_t n = c.morphism_count();
  for (Index x = 0; x < c.object_count(); ++x) {
    Index id = c.identity(x);
    if (id == kNoIndex) {
      violations.push_back("object '" + c.object_id(x) + "' has no identity");
    }
  }
  if (!violations.empty()) return violations;

  for (Index f = 0; f < n; ++f) {
    Index s = c.identity(c.src(f));
    Index t = c.identity(c.tgt(f));
    if (c.compose(f, s) != f) {
      violations.push_back(c.morphism_id(f) + "∘" + c.morphism_id(s) + " != " + c.morphism_id(f));
    }
    if (c.compose(t, f) != f) {
      violations.push_back(c.morphism_id(t) + "∘" + c.morphism_id(f) + " != " + c.morphism_id(f));
    }
  }
  for (Index f = 0; f < n; ++f) {
    for (Index g : c.outgoing(c.tgt(f))) {
      if (!c.compose(g, f)) {
        violations.push_back("missing composite " + c.morphism_id(g) + "∘" + c.morphism_id(f));
      }
    }
  }
  if (!violations.empty()) return violations;

  for (Index f = 0; f < n; ++f) {
    for (Index g : c.outgoing(c.tgt(f))) {
      Index gf = *c.compose(g, f);
      for (Index h : c.outgoing(c.tgt(g))) {
        Index hg = *c.compose(h, g);
        Index left = *c.compose(h, gf);
        Index right = *c.compose(hg, f);
        if (left != right) {
          violations.push_back("associativity fails for (" + c.morphism_id(h) + ", " +
                               c.morphism_id(g) + ", " + c.morphism_id(f) + "): " +
                               c.morphism_id(left) + " vs " + c.morphism_id(right));
        }
      }
    }
  }
  return violations;
}

FinCategory opposite(const FinCategory& c) {
  FinCategory op;
  for (Index x = 0; x < c.object_count(); ++x) op.add_object(c.object_id(x));
  for (Index m = 0; m < c.morphism_count(); ++m) {
    op.add_morphism(c.morphism_id(m), c.tgt(m), c.src(m));
  }
  for (Index x = 0; x < c.object_count(); ++x) {
    if (c.identity(x) != kNoIndex) op.set_identity(x, c.identity(x));
  }
  for (const auto& [g, f, gf] : c.composition_table()) op.set_composite(f, g, gf);
  op.set_closed(c.closed());
  return op;
}

FinCategory terminal_category() {
  FinCategory c;
  c.add_object_with_identity("pt");
  return c;
}

FinCategory discrete_category(std::span<const std::string> objects) {
  FinCategory c;
  for (const auto& x : objects) c.add_object_with_identity(x);
  return c;
}

// ---------------------------------------------------------------------------
// Quivers

Index Quiver::vertex_index(std::string_view id) const {
  for (Index v = 0; v < vertices.size(); ++v) {
    if (vertices[v] == id) return v;
  }
  throw Error(ErrorCode::ReferenceError, "unknown vertex '" + std::string(id) + "'");
}

Quiver discrete_quiver(std::span<const std::string> vertices) {
  Quiver q;
  q.vertices.assign(vertices.begin(), vertices.end());
  return q;
}

Quiver underlying_quiver(const FinCategory& c) {
  Quiver q;
  for (Index x = 0; x < c.object_count(); ++x) q.vertices.push_back(c.object_id(x));
  for (Index m = 0; m < c.morphism_count(); ++m) {
    q.edges.push_back({c.morphism_id(m), c.src(m), c.tgt(m), {}});
  }
  return q;
}

bool has_directed_cycle(const Quiver& q) {
  // Kahn's algorithm: a cycle remains iff some vertex is never freed.
  std::vector<std::size_t> indegree(q.vertices.size(), 0);
  std::vector<std::vector<Index>> succ(q.vertices.size());
  for (const auto& e : q.edges) {
    succ[e.src].push_back(e.tgt);
    ++indegree[e.tgt];
  }
  std::deque<Index> ready;
  for (Index v = 0; v < indegree.size(); ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::size_t freed = 0;
  while (!ready.empty()) {
    Index v = ready.front();
    ready.pop_front();
    ++freed;
    for (Index w : succ[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  return freed != q.vertices.size();
}

FinCategory free_category(const Quiver& q, std::optional<std::size_t> bound) {
  const bool cyclic = has_directed_cycle(q);
  if (cyclic && !bound) {
    throw Error(ErrorCode::UnboundedHomSet, "free category on a cyclic quiver needs a bound");
  }
  FinCategory c;
  for (const auto& v : q.vertices) c.add_object_with_identity(v);

  std::vector<std::vector<Index>> out(q.vertices.size());
  for (Index e = 0; e < q.edges.size(); ++e) out[q.edges[e].src].push_back(e);

  std::map<std::vector<Index>, Index> by_path;
  std::vector<std::vector<Index>> paths(c.morphism_count());
  std::vector<std::vector<Index>> frontier;
  for (Index e = 0; e < q.edges.size(); ++e) frontier.push_back({e});

  bool truncated = false;
  std::size_t length = 1;
  while (!frontier.empty()) {
    if (bound && length > *bound) {
      truncated = true;
      break;
    }
    std::vector<std::vector<Index>> next;
    for (auto& path : frontier) {
      std::string id;
      for (Index e : path) {
        if (!id.empty()) id += ';';
        id += q.edges[e].id;
      }
      Index m = c.add_morphism(id, q.edges[path.front()].src, q.edges[path.back()].tgt);
      by_path.emplace(path, m);
      paths.push_back(path);
      for (Index e : out[q.edges[path.back()].tgt]) {
        auto longer = path;
        longer.push_back(e);
        next.push_back(std::move(longer));
      }
    }
    frontier = std::move(next);
    ++length;
  }

  c.fill_identity_composites();
  for (Index f = 0; f < c.morphism_count(); ++f) {
    if (paths[f].empty()) continue;
    for (Index g : c.outgoing(c.tgt(f))) {
      if (paths[g].empty()) continue;
      auto joined = paths[f];
      joined.insert(joined.end(), paths[g].begin(), paths[g].end());
      auto it = by_path.find(joined);
      if (it != by_path.end()) c.set_composite(g, f, it->second);
    }
  }
  c.set_closed(!truncated);
  return c;
}

Quiver quiver_pushout(const Quiver& base, const Quiver& extra) {
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(base.vertices) != sorted(extra.vertices)) {
    throw Error(ErrorCode::VertexMismatch, "pushout legs disagree on the vertex set");
  }
  Quiver result;
  result.vertices = base.vertices;
  for (const auto& e : base.edges) result.edges.push_back({e.id, e.src, e.tgt, "base"});
  for (const auto& e : extra.edges) {
    result.edges.push_back({e.id, result.vertex_index(extra.vertices[e.src]),
                            result.vertex_index(extra.vertices[e.tgt]), "extra"});
  }
  return result;
}

Index compose_path(const FinCategory& c, std::span<const Index> path, std::optional<Index> start) {
  if (path.empty()) {
    if (!start) throw Error(ErrorCode::InvalidArgument, "empty path without a start object");
    return c.identity(*start);
  }
  if (start && c.src(path.front()) != *start) {
    throw Error(ErrorCode::NotComposable, "path does not start at '" + c.object_id(*start) + "'");
  }
  Index acc = path.front();
  for (std::size_t i = 1; i < path.size(); ++i) acc = c.compose_checked(path[i], acc);
  return acc;
}

// ---------------------------------------------------------------------------
// Functors

bool operator==(const CatFunctor& a, const CatFunctor& b) {
  auto same = [](const CategoryPtr& x, const CategoryPtr& y) {
    return x == y || (x && y && *x == *y);
  };
  return same(a.dom, b.dom) && same(a.cod, b.cod) && a.object_map == b.object_map &&
         a.morphism_map == b.morphism_map;
}

std::vector<std::string> validate_functor(const CatFunctor& f) {
  std::vector<std::string> violations;
  const auto& dom = *f.dom;
  const auto& cod = *f.cod;
  if (f.object_map.size() != dom.object_count() || f.morphism_map.size() != dom.morphism_count()) {
    violations.emplace_back("functor tables do not cover the domain");
    return violations;
  }
  for (Index x = 0; x < dom.object_count(); ++x) {
    if (f.object_map[x] >= cod.object_count()) {
      violations.push_back("object '" + dom.object_id(x) + "' maps outside the codomain");
    }
  }
  for (Index m = 0; m < dom.morphism_count(); ++m) {
    if (f.morphism_map[m] >= cod.morphism_count()) {
      violations.push_back("morphism '" + dom.morphism_id(m) + "' maps outside the codomain");
    }
  }
  if (!violations.empty()) return violations;

  for (Index m = 0; m < dom.morphism_count(); ++m) {
    Index fm = f.morphism_map[m];
    if (cod.src(fm) != f.object_map[dom.src(m)] || cod.tgt(fm) != f.object_map[dom.tgt(m)]) {
      violations.push_back("morphism '" + dom.morphism_id(m) + "' endpoints not preserved");
    }
  }
  for (Index x = 0; x < dom.object_count(); ++x) {
    if (dom.identity(x) == kNoIndex) continue;
    if (f.morphism_map[dom.identity(x)] != cod.identity(f.object_map[x])) {
      violations.push_back("identity of '" + dom.object_id(x) + "' not preserved");
    }
  }
  for (const auto& [g, h, gh] : dom.composition_table()) {
    auto image = cod.compose(f.morphism_map[g], f.morphism_map[h]);
    if (!image || *image != f.morphism_map[gh]) {
      violations.push_back("composite " + dom.morphism_id(g) + "∘" + dom.morphism_id(h) +
                           " not preserved");
    }
  }
  return violations;
}

CatFunctor identity_functor(const CategoryPtr& c) {
  CatFunctor f{c, c, {}, {}};
  for (Index x = 0; x < c->object_count(); ++x) f.object_map.push_back(x);
  for (Index m = 0; m < c->morphism_count(); ++m) f.morphism_map.push_back(m);
  return f;
}

CatFunctor compose_functors(const CatFunctor& g, const CatFunctor& f) {
  if (!(*f.cod == *g.dom)) {
    throw Error(ErrorCode::BaseMismatch, "functors are not composable");
  }
  CatFunctor gf{f.dom, g.cod, {}, {}};
  for (Index x : f.object_map) gf.object_map.push_back(g.object_map.at(x));
  for (Index m : f.morphism_map) gf.morphism_map.push_back(g.morphism_map.at(m));
  return gf;
}

// ---------------------------------------------------------------------------
// Set-valued functors

std::optional<Index> SetFunctor::find_element(Index object, std::string_view element) const {
  const auto& v = values.at(object);
  for (Index i = 0; i < v.size(); ++i) {
    if (v[i] == element) return i;
  }
  return std::nullopt;
}

bool operator==(const SetFunctor& a, const SetFunctor& b) {
  bool same_base = a.base == b.base || (a.base && b.base && *a.base == *b.base);
  return same_base && a.values == b.values && a.actions == b.actions;
}

std::vector<std::string> validate_setfunctor(const SetFunctor& f) {
  std::vector<std::string> violations;
  const auto& c = *f.base;
  if (f.values.size() != c.object_count() || f.actions.size() != c.morphism_count()) {
    violations.emplace_back("set functor tables do not cover the base");
    return violations;
  }
  for (Index x = 0; x < c.object_count(); ++x) {
    auto sorted = f.values[x];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      violations.push_back("value at '" + c.object_id(x) + "' has duplicate elements");
    }
  }
  for (Index m = 0; m < c.morphism_count(); ++m) {
    const auto& action = f.actions[m];
    if (action.size() != f.values[c.src(m)].size()) {
      violations.push_back("action of '" + c.morphism_id(m) + "' is not total");
      continue;
    }
    for (Index image : action) {
      if (image >= f.values[c.tgt(m)].size()) {
        violations.push_back("action of '" + c.morphism_id(m) + "' leaves its codomain");
        break;
      }
    }
  }
  if (!violations.empty()) return violations;

  for (Index x = 0; x < c.object_count(); ++x) {
    Index id = c.identity(x);
    if (id == kNoIndex) continue;
    for (Index i = 0; i < f.actions[id].size(); ++i) {
      if (f.actions[id][i] != i) {
        violations.push_back("identity of '" + c.object_id(x) + "' acts non-trivially");
        break;
      }
    }
  }
  for (const auto& [g, h, gh] : c.composition_table()) {
    const auto& ah = f.actions[h];
    for (Index i = 0; i < ah.size(); ++i) {
      if (f.actions[g][ah[i]] != f.actions[gh][i]) {
        violations.push_back("action of " + c.morphism_id(g) + "∘" + c.morphism_id(h) +
                             " is not the composite of the actions");
        break;
      }
    }
  }
  return violations;
}

SetFunctor restrict_along(const SetFunctor& f, const CatFunctor& along) {
  if (!(*along.cod == *f.base)) {
    throw Error(ErrorCode::BaseMismatch, "restriction along a functor into a different base");
  }
  SetFunctor r{along.dom, {}, {}};
  for (Index x : along.object_map) r.values.push_back(f.values.at(x));
  for (Index m : along.morphism_map) r.actions.push_back(f.actions.at(m));
  return r;
}

SetFunctor pullback_opposite(const SetFunctor& presheaf, const CatFunctor& diagram) {
  if (!(opposite(*diagram.cod) == *presheaf.base)) {
    throw Error(ErrorCode::BaseMismatch, "diagram does not land in the presheaf's language");
  }
  SetFunctor r{share(opposite(*diagram.dom)), {}, {}};
  for (Index x : diagram.object_map) r.values.push_back(presheaf.values.at(x));
  for (Index m : diagram.morphism_map) r.actions.push_back(presheaf.actions.at(m));
  return r;
}

std::optional<NaturalIso> natural_iso_check(const SetFunctor& f, const SetFunctor& g) {
  if (!(*f.base == *g.base)) {
    throw Error(ErrorCode::BaseMismatch, "natural_iso_check on functors over different bases");
  }
  const auto& c = *f.base;
  const std::size_t n = c.object_count();
  for (Index x = 0; x < n; ++x) {
    if (f.values[x].size() != g.values[x].size()) return std::nullopt;
  }

  // Assign (object, element) slots in order; after each assignment check
  // every action constraint whose both ends are now decided.
  std::vector<std::pair<Index, Index>> slots;
  for (Index x = 0; x < n; ++x) {
    for (Index i = 0; i < f.values[x].size(); ++i) slots.emplace_back(x, i);
  }
  NaturalIso sigma(n);
  std::vector<std::vector<bool>> used(n);
  for (Index x = 0; x < n; ++x) {
    sigma[x].assign(f.values[x].size(), kNoIndex);
    used[x].assign(f.values[x].size(), false);
  }

  auto consistent = [&](Index x, Index i) {
    Index image = sigma[x][i];
    for (Index m : c.outgoing(x)) {
      Index y = c.tgt(m);
      Index fi = f.actions[m][i];
      if (sigma[y][fi] != kNoIndex && g.actions[m][image] != sigma[y][fi]) return false;
    }
    for (Index m : c.incoming(x)) {
      Index w = c.src(m);
      for (Index k = 0; k < f.values[w].size(); ++k) {
        if (f.actions[m][k] != i || sigma[w][k] == kNoIndex) continue;
        if (g.actions[m][sigma[w][k]] != image) return false;
      }
    }
    return true;
  };

  std::function<bool(std::size_t)> search = [&](std::size_t depth) {
    if (depth == slots.size()) return true;
    auto [x, i] = slots[depth];
    for (Index j = 0; j < g.values[x].size(); ++j) {
      if (used[x][j]) continue;
      sigma[x][i] = j;
      used[x][j] = true;
      if (consistent(x, i) && search(depth + 1)) return true;
      used[x][j] = false;
      sigma[x][i] = kNoIndex;
    }
    return false;
  };
  if (!search(0)) return std::nullopt;
  return sigma;
}

}  // namespace fiblang
