#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "fiblang/error.hpp"
#include "fiblang/fincat.hpp"
#include "fiblang/union_find.hpp"

namespace fiblang {

std::vector<Index> LimitCone::leg(Index a) const {
  std::vector<Index> projection;
  projection.reserve(tuples.size());
  for (const auto& t : tuples) projection.push_back(t.at(a));
  return projection;
}

LimitCone set_limit(const SetFunctor& diagram) {
  const auto& shape = *diagram.base;
  const std::size_t n = shape.object_count();

  LimitCone cone;
  cone.component_order.resize(n);
  std::iota(cone.component_order.begin(), cone.component_order.end(), Index{0});
  std::sort(cone.component_order.begin(), cone.component_order.end(),
            [&](Index a, Index b) { return shape.object_id(a) < shape.object_id(b); });

  // Depth-first over the product in component order, pruning as soon as a
  // shape morphism between two decided components disagrees.
  std::vector<Index> position(n);
  for (Index k = 0; k < n; ++k) position[cone.component_order[k]] = k;

  std::vector<Index> current(n, kNoIndex);
  auto compatible = [&](Index a) {
    for (Index m : shape.outgoing(a)) {
      Index b = shape.tgt(m);
      if (position[b] > position[a]) continue;
      if (diagram.actions[m][current[a]] != current[b]) return false;
    }
    for (Index m : shape.incoming(a)) {
      Index b = shape.src(m);
      if (position[b] >= position[a]) continue;
      if (diagram.actions[m][current[b]] != current[a]) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> extend = [&](std::size_t depth) {
    if (depth == n) {
      cone.tuples.push_back(current);
      return;
    }
    Index a = cone.component_order[depth];
    for (Index x = 0; x < diagram.values[a].size(); ++x) {
      current[a] = x;
      if (compatible(a)) extend(depth + 1);
    }
    current[a] = kNoIndex;
  };
  extend(0);

  auto names = [&](const std::vector<Index>& t) {
    std::vector<std::string> out;
    out.reserve(n);
    for (Index a : cone.component_order) out.push_back(diagram.values[a][t[a]]);
    return out;
  };
  std::sort(cone.tuples.begin(), cone.tuples.end(),
            [&](const auto& s, const auto& t) { return names(s) < names(t); });

  for (const auto& t : cone.tuples) {
    std::string id = "(";
    bool first = true;
    for (const auto& part : names(t)) {
      if (!first) id += ',';
      id += part;
      first = false;
    }
    id += ')';
    cone.ids.push_back(std::move(id));
  }
  return cone;
}

CommaCategory comma_category(Index l, const CatFunctor& p) {
  const auto& dom = *p.dom;
  const auto& cod = *p.cod;
  CommaCategory comma;
  auto& c = comma.category;

  std::map<std::pair<Index, Index>, Index> object_of;
  for (Index d = 0; d < dom.object_count(); ++d) {
    for (Index f : cod.hom(l, p.object_map[d])) {
      Index o = c.add_object("(" + dom.object_id(d) + "," + cod.morphism_id(f) + ")");
      object_of.emplace(std::pair{d, f}, o);
      comma.labels.emplace_back(d, f);
    }
  }

  // Morphism g out of comma object o is stored under (o, g).
  std::map<std::pair<Index, Index>, Index> morphism_of;
  for (Index o = 0; o < c.object_count(); ++o) {
    auto [d1, f1] = comma.labels[o];
    for (Index g : dom.outgoing(d1)) {
      Index f2 = cod.compose_checked(p.morphism_map[g], f1);
      Index target = object_of.at({dom.tgt(g), f2});
      Index m = c.add_morphism(dom.morphism_id(g) + "@" + c.object_id(o), o, target);
      morphism_of.emplace(std::pair{o, g}, m);
      if (dom.is_identity(g)) c.set_identity(o, m);
    }
  }
  for (const auto& [key, m] : morphism_of) {
    auto [o, g] = key;
    Index mid = c.tgt(m);
    Index d_mid = comma.labels[mid].first;
    for (Index h : dom.outgoing(d_mid)) {
      if (auto hg = dom.compose(h, g)) {
        c.set_composite(morphism_of.at({mid, h}), m, morphism_of.at({o, *hg}));
      }
    }
  }
  c.set_closed(dom.closed() && cod.closed());
  return comma;
}

std::vector<std::vector<Index>> connected_components(const FinCategory& c) {
  UnionFind uf(c.object_count());
  for (Index m = 0; m < c.morphism_count(); ++m) uf.unite(c.src(m), c.tgt(m));

  std::map<Index, std::vector<Index>> by_root;
  for (Index x = 0; x < c.object_count(); ++x) by_root[uf.find(x)].push_back(x);

  std::vector<std::vector<Index>> blocks;
  for (auto& [root, block] : by_root) {
    std::sort(block.begin(), block.end(),
              [&](Index a, Index b) { return c.object_id(a) < c.object_id(b); });
    blocks.push_back(std::move(block));
  }
  std::sort(blocks.begin(), blocks.end(), [&](const auto& a, const auto& b) {
    return c.object_id(a.front()) < c.object_id(b.front());
  });
  return blocks;
}

}  // namespace fiblang
