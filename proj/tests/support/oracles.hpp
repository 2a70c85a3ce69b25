#pragma once

// Brute-force reference computations written without the library's
// algorithms: full product enumeration for limits, explicit comma
// categories with a plain DFS for connected components, path counting for
// free categories, and pointwise checks of iso witnesses.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fiblang/fibration.hpp"
#include "fiblang/fincat.hpp"
#include "fiblang/speaker.hpp"

namespace oracle {

using fiblang::CatFunctor;
using fiblang::FinCategory;
using fiblang::Index;
using fiblang::SetFunctor;

/// Compatible families, as element-id tuples in shape-object order sorted
/// by object id, enumerated over the full product.
inline std::set<std::vector<std::string>> limit(const SetFunctor& d) {
  const auto& shape = *d.base;
  std::vector<Index> order(shape.object_count());
  for (Index i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return shape.object_id(a) < shape.object_id(b); });

  std::set<std::vector<std::string>> out;
  std::vector<Index> pick(shape.object_count(), 0);
  for (Index a = 0; a < shape.object_count(); ++a)
    if (d.values[a].empty()) return out;
  for (;;) {
    bool ok = true;
    for (Index m = 0; m < shape.morphism_count() && ok; ++m) {
      ok = d.actions[m][pick[shape.src(m)]] == pick[shape.tgt(m)];
    }
    if (ok) {
      std::vector<std::string> tuple;
      for (Index a : order) tuple.push_back(d.values[a][pick[a]]);
      out.insert(std::move(tuple));
    }
    Index a = 0;
    while (a < pick.size() && ++pick[a] == d.values[a].size()) pick[a++] = 0;
    if (a == pick.size()) break;
  }
  return out;
}

inline std::size_t product_size(const SetFunctor& d) {
  std::size_t n = 1;
  for (const auto& v : d.values) n *= v.size();
  return n;
}

/// Number of paths of length >= 1 in an acyclic quiver.
inline std::size_t path_count(const fiblang::Quiver& q) {
  std::map<Index, std::size_t> memo;
  std::function<std::size_t(Index)> from = [&](Index v) -> std::size_t {
    if (auto it = memo.find(v); it != memo.end()) return it->second;
    std::size_t n = 0;
    for (const auto& e : q.edges)
      if (e.src == v) n += 1 + from(e.tgt);
    return memo[v] = n;
  };
  std::size_t total = 0;
  for (Index v = 0; v < q.vertices.size(); ++v) total += from(v);
  return total;
}

/// Paths of length 1..bound in any quiver.
inline std::size_t bounded_path_count(const fiblang::Quiver& q, std::size_t bound) {
  std::vector<std::size_t> ending(q.vertices.size(), 1);  // length-0 paths
  std::size_t total = 0;
  for (std::size_t len = 1; len <= bound; ++len) {
    std::vector<std::size_t> next(q.vertices.size(), 0);
    for (const auto& e : q.edges) next[e.tgt] += ending[e.src];
    for (auto n : next) total += n;
    ending = std::move(next);
  }
  return total;
}

/// Blocks of the undirected graph on n vertices, by DFS.
inline std::vector<std::size_t> components(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::size_t> label(n, static_cast<std::size_t>(-1));
  std::size_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] != static_cast<std::size_t>(-1)) continue;
    std::vector<std::size_t> stack{s};
    label[s] = next;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto w : adj[v]) {
        if (label[w] == static_cast<std::size_t>(-1)) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

/// A presheaf by element names: fibres per object id and, per language
/// morphism f : A -> B, the graph fibre(B) -> fibre(A).
struct NamedPresheaf {
  std::map<std::string, std::set<std::string>> fibres;
  std::map<std::string, std::map<std::string, std::string>> actions;
  friend bool operator==(const NamedPresheaf&, const NamedPresheaf&) = default;
};

inline NamedPresheaf named(const fiblang::Speaker& s) {
  NamedPresheaf out;
  const auto& lang = s.language();
  const auto& m = s.meaning();
  for (Index x = 0; x < lang.object_count(); ++x) {
    out.fibres[lang.object_id(x)] = {m.values[x].begin(), m.values[x].end()};
  }
  for (Index f = 0; f < lang.morphism_count(); ++f) {
    auto& graph = out.actions[lang.morphism_id(f)];
    const auto& from = m.values[lang.tgt(f)];
    const auto& to = m.values[lang.src(f)];
    for (Index i = 0; i < from.size(); ++i) graph[from[i]] = to[m.actions[f][i]];
  }
  return out;
}

/// Acquisition by example recomputed from scratch: the category of elements
/// of the learner's presheaf plus the example objects over `target`, every
/// comma category L ↓ T spelled out, components by DFS, then the naming
/// rule (a block containing some (d, id_L) takes the least element name of
/// those d; otherwise prefix + least "(d,f)" label).
inline NamedPresheaf acquisition(const fiblang::Speaker& learner, Index target, const std::vector<std::string>& examples,
                                 const std::string& prefix,
                                 const std::map<std::string, std::string>* merge = nullptr) {
  const auto& lang = learner.language();
  const auto& m = learner.meaning();
  struct Obj {
    std::string id;
    std::string name;
    Index over;
  };
  std::vector<Obj> objects;
  std::map<std::pair<Index, std::string>, std::size_t> slot;
  auto add = [&](Index l, const std::string& x) {
    slot[{l, x}] = objects.size();
    objects.push_back({lang.object_id(l) + ":" + x, x, l});
  };
  for (Index l = 0; l < lang.object_count(); ++l) {
    if (merge && l == target) continue;
    for (const auto& x : m.values[l]) add(l, x);
  }
  std::map<std::string, std::size_t> example_slot;
  for (const auto& s : examples) {
    example_slot[s] = objects.size();
    objects.push_back({lang.object_id(target) + ":" + s, s, target});
  }
  auto where = [&](Index l, const std::string& x) {
    if (merge && l == target) return example_slot.at(merge->at(x));
    return slot.at({l, x});
  };
  // Total arrows: for f : A -> B and x' over B, (A, P(f)x') -> (B, x') over f.
  struct Arrow {
    std::size_t src, tgt;
    Index over;
  };
  std::vector<Arrow> arrows;
  for (Index f = 0; f < lang.morphism_count(); ++f) {
    Index a = lang.src(f);
    Index b = lang.tgt(f);
    for (Index i = 0; i < m.values[b].size(); ++i) {
      arrows.push_back({where(a, m.values[a][m.actions[f][i]]), where(b, m.values[b][i]), f});
    }
  }

  NamedPresheaf out;
  std::vector<std::map<std::pair<std::size_t, Index>, std::string>> element_of(lang.object_count());
  for (Index l = 0; l < lang.object_count(); ++l) {
    std::vector<std::pair<std::size_t, Index>> comma;
    std::map<std::pair<std::size_t, Index>, std::size_t> index;
    for (std::size_t d = 0; d < objects.size(); ++d) {
      for (Index u = 0; u < lang.morphism_count(); ++u) {
        if (lang.src(u) == l && lang.tgt(u) == objects[d].over) {
          index[{d, u}] = comma.size();
          comma.emplace_back(d, u);
        }
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t o = 0; o < comma.size(); ++o) {
      auto [d, u] = comma[o];
      for (const auto& a : arrows) {
        if (a.src != d) continue;
        edges.emplace_back(o, index.at({a.tgt, *lang.compose(a.over, u)}));
      }
    }
    auto label = components(comma.size(), edges);
    std::map<std::size_t, std::vector<std::size_t>> blocks;
    for (std::size_t o = 0; o < comma.size(); ++o) blocks[label[o]].push_back(o);
    std::set<std::string> taken;
    std::vector<std::pair<std::string, std::vector<std::size_t>>> sorted_blocks;
    for (auto& [_, block] : blocks) {
      std::string least;
      for (auto o : block) {
        auto id = "(" + objects[comma[o].first].id + "," + lang.morphism_id(comma[o].second) + ")";
        if (least.empty() || id < least) least = id;
      }
      sorted_blocks.emplace_back(least, block);
    }
    std::sort(sorted_blocks.begin(), sorted_blocks.end());
    for (auto& [least, block] : sorted_blocks) {
      std::string best;
      for (auto o : block) {
        if (comma[o].second == lang.identity(l)) {
          const auto& n = objects[comma[o].first].name;
          if (best.empty() || n < best) best = n;
        }
      }
      std::string name = best.empty() ? prefix + least : best;
      if (!taken.insert(name).second) {
        name = prefix + least;
        taken.insert(name);
      }
      out.fibres[lang.object_id(l)].insert(name);
      for (auto o : block) element_of[l][comma[o]] = name;
    }
    out.fibres[lang.object_id(l)];
  }
  for (Index u = 0; u < lang.morphism_count(); ++u) {
    Index to = lang.src(u);
    Index from = lang.tgt(u);
    auto& graph = out.actions[lang.morphism_id(u)];
    for (const auto& [key, name] : element_of[from]) {
      auto [d, f] = key;
      graph[name] = element_of[to].at({d, *lang.compose(f, u)});
    }
  }
  return out;
}

/// Pointwise check that `iso` is a natural isomorphism F => G.
inline bool is_natural_iso(const SetFunctor& f, const SetFunctor& g, const fiblang::NaturalIso& iso) {
  const auto& c = *f.base;
  if (iso.size() != c.object_count()) return false;
  for (Index x = 0; x < c.object_count(); ++x) {
    if (iso[x].size() != f.values[x].size() || f.values[x].size() != g.values[x].size()) return false;
    std::set<Index> image(iso[x].begin(), iso[x].end());
    if (image.size() != iso[x].size()) return false;
    for (Index y : iso[x])
      if (y >= g.values[x].size()) return false;
  }
  for (Index m = 0; m < c.morphism_count(); ++m) {
    for (Index i = 0; i < f.values[c.src(m)].size(); ++i) {
      if (iso[c.tgt(m)][f.actions[m][i]] != g.actions[m][iso[c.src(m)][i]]) return false;
    }
  }
  return true;
}

/// h : total(p) -> total(q) is an isomorphism of categories over the base.
inline bool is_iso_over_base(const CatFunctor& h, const fiblang::Fibration& p, const fiblang::Fibration& q) {
  const auto& e = p.total();
  const auto& f = q.total();
  if (e.object_count() != f.object_count() || e.morphism_count() != f.morphism_count()) return false;
  if (std::set<Index>(h.object_map.begin(), h.object_map.end()).size() != e.object_count()) return false;
  if (std::set<Index>(h.morphism_map.begin(), h.morphism_map.end()).size() != e.morphism_count()) return false;
  for (Index x = 0; x < e.object_count(); ++x)
    if (q.projection().object_map[h.object_map[x]] != p.projection().object_map[x]) return false;
  for (Index m = 0; m < e.morphism_count(); ++m) {
    Index hm = h.morphism_map[m];
    if (f.src(hm) != h.object_map[e.src(m)] || f.tgt(hm) != h.object_map[e.tgt(m)]) return false;
    if (q.projection().morphism_map[hm] != p.projection().morphism_map[m]) return false;
  }
  for (auto [g, k, gk] : e.composition_table())
    if (f.compose(h.morphism_map[g], h.morphism_map[k]) != h.morphism_map[gk]) return false;
  return true;
}

}  // namespace oracle
