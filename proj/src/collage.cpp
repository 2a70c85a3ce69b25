#include "fiblang/collage.hpp"

#include <algorithm>
#include <deque>

#include "fiblang/error.hpp"

namespace fiblang {

namespace {

/// Q re-indexed onto C's object order; VertexMismatch if the sets differ.
Quiver align_quiver(const FinCategory& c, const Quiver& q) {
  std::vector<std::string> objects;
  for (Index x = 0; x < c.object_count(); ++x) objects.push_back(c.object_id(x));
  auto a = objects;
  auto b = q.vertices;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) {
    throw Error(ErrorCode::VertexMismatch, "quiver vertices differ from the category's objects");
  }
  Quiver aligned;
  aligned.vertices = std::move(objects);
  for (const auto& e : q.edges) {
    aligned.edges.push_back(
        {e.id, c.object_index(q.vertices[e.src]), c.object_index(q.vertices[e.tgt]), e.tag});
  }
  return aligned;
}

bool reaches(const std::vector<std::vector<Index>>& succ, Index from, Index to) {
  std::vector<bool> seen(succ.size(), false);
  std::deque<Index> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    Index v = queue.front();
    queue.pop_front();
    if (v == to) return true;
    for (Index w : succ[v]) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  return false;
}

}  // namespace

bool collage_is_finite(const FinCategory& c, const Quiver& q) {
  Quiver aligned = align_quiver(c, q);
  std::vector<std::vector<Index>> succ(c.object_count());
  for (Index m = 0; m < c.morphism_count(); ++m) {
    if (!c.is_identity(m)) succ[c.src(m)].push_back(c.tgt(m));
  }
  for (const auto& e : aligned.edges) succ[e.src].push_back(e.tgt);
  for (const auto& e : aligned.edges) {
    if (reaches(succ, e.tgt, e.src)) return false;
  }
  return true;
}

Word normalize_word(const FinCategory& c, const Quiver& q, std::span<const Letter> letters,
                    std::optional<Index> start) {
  if (letters.empty()) {
    if (!start) throw Error(ErrorCode::InvalidArgument, "empty word without a start object");
    return Word{{c.identity(*start)}, {}};
  }
  auto endpoint_src = [&](const Letter& l) {
    return l.kind == Letter::Kind::Base ? c.src(l.index) : q.edges.at(l.index).src;
  };
  Index origin = endpoint_src(letters.front());
  if (start && *start != origin) {
    throw Error(ErrorCode::NotComposable, "word does not start at '" + c.object_id(*start) + "'");
  }
  Word w;
  Index pending = c.identity(origin);
  for (const auto& l : letters) {
    if (l.kind == Letter::Kind::Base) {
      pending = c.compose_checked(l.index, pending);
    } else {
      const auto& e = q.edges.at(l.index);
      if (e.src != c.tgt(pending)) {
        throw Error(ErrorCode::NotComposable, "edge '" + e.id + "' does not continue the word");
      }
      w.base.push_back(pending);
      w.edges.push_back(l.index);
      pending = c.identity(e.tgt);
    }
  }
  w.base.push_back(pending);
  return w;
}

std::optional<Index> CollageCategory::find_word(const Word& w) const {
  auto it = lookup_.find(w);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Word CollageCategory::compose(const Word& g, const Word& f) const {
  if (tgt(f) != src(g)) {
    throw Error(ErrorCode::NotComposable, word_id(g) + " after " + word_id(f));
  }
  if (bound_ && !closed() && f.edge_count() + g.edge_count() > *bound_) {
    throw Error(ErrorCode::BoundExceeded, word_id(g) + " after " + word_id(f));
  }
  Word gf;
  gf.base.assign(f.base.begin(), f.base.end() - 1);
  gf.base.push_back(base_->compose_checked(g.base.front(), f.base.back()));
  gf.base.insert(gf.base.end(), g.base.begin() + 1, g.base.end());
  gf.edges = f.edges;
  gf.edges.insert(gf.edges.end(), g.edges.begin(), g.edges.end());
  return gf;
}

std::string CollageCategory::word_id(const Word& w) const {
  if (w.edges.empty()) return base_->morphism_id(w.base.front());
  std::string id = "[" + base_->morphism_id(w.base[0]);
  for (std::size_t i = 0; i < w.edges.size(); ++i) {
    id += "|" + quiver_.edges[w.edges[i]].id + "|" + base_->morphism_id(w.base[i + 1]);
  }
  return id + "]";
}

CollageCategory fp_collage(CategoryPtr c_ptr, const Quiver& q, std::optional<std::size_t> bound) {
  const auto& c = *c_ptr;
  CollageCategory collage;
  collage.base_ = c_ptr;
  collage.quiver_ = align_quiver(c, q);
  collage.bound_ = bound;
  const auto& edges = collage.quiver_.edges;

  if (!collage_is_finite(c, collage.quiver_) && !bound) {
    throw Error(ErrorCode::UnboundedHomSet, "collage has a cycle through a free edge; give a bound");
  }

  std::vector<std::vector<Index>> edges_from(c.object_count());
  for (Index e = 0; e < edges.size(); ++e) edges_from[edges[e].src].push_back(e);

  // Level k holds the words with exactly k edges, in a fixed order.
  std::vector<Word> level;
  for (Index m = 0; m < c.morphism_count(); ++m) level.push_back(Word{{m}, {}});
  bool truncated = false;
  std::size_t k = 0;
  while (!level.empty()) {
    for (auto& w : level) {
      collage.lookup_.emplace(w, collage.words_.size());
      collage.words_.push_back(w);
    }
    std::vector<Word> next;
    for (const auto& w : level) {
      for (Index e : edges_from[c.tgt(w.base.back())]) {
        for (Index m : c.outgoing(edges[e].tgt)) {
          Word longer = w;
          longer.edges.push_back(e);
          longer.base.push_back(m);
          next.push_back(std::move(longer));
        }
      }
    }
    ++k;
    if (bound && k > *bound && !next.empty()) {
      truncated = true;
      break;
    }
    level = std::move(next);
  }

  FinCategory cat;
  for (Index x = 0; x < c.object_count(); ++x) cat.add_object(c.object_id(x));
  for (const auto& w : collage.words_) {
    cat.add_morphism(collage.word_id(w), collage.src(w), collage.tgt(w));
  }
  for (Index x = 0; x < c.object_count(); ++x) cat.set_identity(x, c.identity(x));
  cat.set_closed(!truncated);

  std::vector<std::vector<Index>> words_from(c.object_count());
  for (Index i = 0; i < collage.words_.size(); ++i) {
    words_from[collage.src(collage.words_[i])].push_back(i);
  }
  for (Index i = 0; i < collage.words_.size(); ++i) {
    const Word& f = collage.words_[i];
    for (Index j : words_from[collage.tgt(f)]) {
      const Word& g = collage.words_[j];
      if (truncated && f.edge_count() + g.edge_count() > *bound) continue;
      Word gf;
      gf.base.assign(f.base.begin(), f.base.end() - 1);
      gf.base.push_back(c.compose_checked(g.base.front(), f.base.back()));
      gf.base.insert(gf.base.end(), g.base.begin() + 1, g.base.end());
      gf.edges = f.edges;
      gf.edges.insert(gf.edges.end(), g.edges.begin(), g.edges.end());
      cat.set_composite(j, i, collage.lookup_.at(gf));
    }
  }
  collage.category_ = share(std::move(cat));
  return collage;
}

CatFunctor canonical_functor(const CollageCategory& collage) {
  const auto& c = collage.base();
  CatFunctor k{collage.base_ptr(), collage.category(), {}, {}};
  for (Index x = 0; x < c.object_count(); ++x) k.object_map.push_back(x);
  for (Index m = 0; m < c.morphism_count(); ++m) {
    k.morphism_map.push_back(*collage.find_word(Word{{m}, {}}));
  }
  return k;
}

SetFunctor extend_set_functor(const CollageCategory& collage, const SetFunctor& m,
                              const std::map<Index, std::vector<Index>>& edge_actions) {
  if (!(*m.base == collage.base())) {
    throw Error(ErrorCode::BaseMismatch, "set functor is not defined on the collage's base");
  }
  const auto& edges = collage.quiver().edges;
  for (Index e = 0; e < edges.size(); ++e) {
    auto it = edge_actions.find(e);
    if (it == edge_actions.end()) {
      throw Error(ErrorCode::MissingEdgeAction, "no action for edge '" + edges[e].id + "'");
    }
    const auto& action = it->second;
    bool fits = action.size() == m.values.at(edges[e].src).size() &&
                std::all_of(action.begin(), action.end(),
                            [&](Index y) { return y < m.values.at(edges[e].tgt).size(); });
    if (!fits) {
      throw Error(ErrorCode::MissingEdgeAction,
                  "action for edge '" + edges[e].id + "' is not a function between its end values");
    }
  }

  SetFunctor t{collage.category(), m.values, {}};
  for (const auto& w : collage.words()) {
    std::vector<Index> action = m.actions[w.base[0]];
    for (std::size_t i = 0; i < w.edges.size(); ++i) {
      const auto& along_edge = edge_actions.at(w.edges[i]);
      const auto& after = m.actions[w.base[i + 1]];
      for (auto& y : action) y = after[along_edge[y]];
    }
    t.actions.push_back(std::move(action));
  }
  return t;
}

}  // namespace fiblang
