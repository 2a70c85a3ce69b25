#include "fiblang/fibration.hpp"

#include <algorithm>
#include <functional>

#include "fiblang/error.hpp"
#include "fiblang/union_find.hpp"

namespace fiblang {

FibrationCheck is_discrete_fibration(const CatFunctor& p) {
  const auto& total = *p.dom;
  const auto& base = *p.cod;
  FibrationCheck check;
  check.lifts.resize(total.object_count());
  for (Index e = 0; e < total.object_count(); ++e) {
    Index over = p.object_map[e];
    std::map<Index, std::size_t> count;
    for (Index h : total.incoming(e)) {
      Index f = p.morphism_map[h];
      ++count[f];
      check.lifts[e][f] = h;
    }
    for (Index f : base.incoming(over)) {
      std::size_t k = count.contains(f) ? count[f] : 0;
      if (k != 1) {
        check.counterexample = FibrationCheck::Counterexample{e, f, k};
        check.lifts.clear();
        return check;
      }
    }
  }
  check.is_fibration = true;
  return check;
}

Fibration::Fibration(CatFunctor projection) : projection_(std::move(projection)) {
  auto check = is_discrete_fibration(projection_);
  if (!check.is_fibration) {
    const auto& ce = *check.counterexample;
    throw Error(ErrorCode::NotAFibration,
                std::to_string(ce.lift_count) + " lifts of '" + base().morphism_id(ce.base_morphism) +
                    "' at '" + total().object_id(ce.total_object) + "'");
  }
  lifts_ = std::move(check.lifts);
}

Fibre fibre(const CatFunctor& p, Index base_object) {
  const auto& total = *p.dom;
  const auto& base = *p.cod;
  Fibre result;
  for (Index e = 0; e < total.object_count(); ++e) {
    if (p.object_map[e] == base_object) result.objects.push_back(e);
  }
  Index id = base.identity(base_object);
  for (Index m = 0; m < total.morphism_count(); ++m) {
    if (p.morphism_map[m] == id) result.morphisms.push_back(m);
  }
  return result;
}

Fibre fibre(const Fibration& p, Index base_object) { return fibre(p.projection(), base_object); }

Fibration grothendieck(const SetFunctor& presheaf) {
  return grothendieck(presheaf, share(opposite(*presheaf.base)));
}

Fibration grothendieck(const SetFunctor& presheaf, const CategoryPtr& language) {
  const auto& lang = *language;
  if (!(opposite(lang) == *presheaf.base)) {
    throw Error(ErrorCode::BaseMismatch, "presheaf is not defined on the opposite of the language");
  }
  FinCategory total;
  std::vector<Index> first_object(lang.object_count());
  std::vector<Index> object_map;
  for (Index l = 0; l < lang.object_count(); ++l) {
    first_object[l] = total.object_count();
    for (const auto& x : presheaf.values[l]) {
      total.add_object(lang.object_id(l) + ":" + x);
      object_map.push_back(l);
    }
  }

  // lift_of[f][k]: the lift of f at the k-th element over tgt(f).
  std::vector<std::vector<Index>> lift_of(lang.morphism_count());
  std::vector<Index> morphism_map;
  for (Index f = 0; f < lang.morphism_count(); ++f) {
    Index s = lang.src(f);
    Index t = lang.tgt(f);
    // In the stored orientation f acts value(t) -> value(s).
    const auto& action = presheaf.actions[f];
    for (Index k = 0; k < presheaf.values[t].size(); ++k) {
      Index target = first_object[t] + k;
      Index source = first_object[s] + action[k];
      Index h = total.add_morphism(lang.morphism_id(f) + "@" + total.object_id(target), source, target);
      lift_of[f].push_back(h);
      morphism_map.push_back(f);
      if (lang.is_identity(f)) total.set_identity(target, h);
    }
  }
  for (const auto& [g, f, gf] : lang.composition_table()) {
    // (g at x'') after (f at x') where x' = P(g)(x'').
    for (Index k = 0; k < lift_of[g].size(); ++k) {
      Index mid = presheaf.actions[g][k];
      total.set_composite(lift_of[g][k], lift_of[f][mid], lift_of[gf][k]);
    }
  }
  total.set_closed(lang.closed());
  return Fibration(CatFunctor{share(std::move(total)), language, std::move(object_map),
                              std::move(morphism_map)});
}

SetFunctor to_presheaf(const Fibration& p) {
  const auto& base = p.base();
  const auto& total = p.total();
  SetFunctor presheaf{share(opposite(base)), {}, {}};
  std::vector<Index> position(total.object_count());
  presheaf.values.resize(base.object_count());
  for (Index e = 0; e < total.object_count(); ++e) {
    auto& v = presheaf.values[p.projection().object_map[e]];
    position[e] = v.size();
    v.push_back(total.object_id(e));
  }
  for (Index f = 0; f < base.morphism_count(); ++f) {
    auto over = fibre(p.projection(), base.tgt(f)).objects;
    std::vector<Index> action;
    action.reserve(over.size());
    for (Index e : over) action.push_back(position[total.src(p.lift(e, f))]);
    presheaf.actions.push_back(std::move(action));
  }
  return presheaf;
}

SetFunctor to_presheaf(const CatFunctor& p) { return to_presheaf(Fibration(p)); }

ReindexMap reindexing(const Fibration& p, Index base_morphism) {
  ReindexMap r;
  r.base_morphism = base_morphism;
  for (Index e : fibre(p, p.base().tgt(base_morphism)).objects) {
    r.function.emplace(e, p.total().src(p.lift(e, base_morphism)));
  }
  return r;
}

std::vector<std::string> validate_fibration_morphism(const CatFunctor& h, const Fibration& p,
                                                     const Fibration& q) {
  std::vector<std::string> violations;
  if (!(p.base() == q.base())) {
    violations.emplace_back("fibrations live over different bases");
    return violations;
  }
  if (!(*h.dom == p.total()) || !(*h.cod == q.total())) {
    violations.emplace_back("functor does not go between the total categories");
    return violations;
  }
  violations = validate_functor(h);
  if (!violations.empty()) return violations;
  const auto& pp = p.projection();
  const auto& qp = q.projection();
  for (Index e = 0; e < p.total().object_count(); ++e) {
    if (qp.object_map[h.object_map[e]] != pp.object_map[e]) {
      violations.push_back("object '" + p.total().object_id(e) + "' moves to another fibre");
    }
  }
  for (Index m = 0; m < p.total().morphism_count(); ++m) {
    if (qp.morphism_map[h.morphism_map[m]] != pp.morphism_map[m]) {
      violations.push_back("morphism '" + p.total().morphism_id(m) + "' changes its projection");
    }
  }
  return violations;
}

std::optional<CatFunctor> fibration_iso(const Fibration& p, const Fibration& q) {
  if (!(p.base() == q.base())) return std::nullopt;
  const auto& base = p.base();
  const auto& pt = p.total();
  const auto& qt = q.total();
  if (pt.object_count() != qt.object_count() || pt.morphism_count() != qt.morphism_count()) {
    return std::nullopt;
  }
  std::vector<Fibre> pf, qf;
  for (Index l = 0; l < base.object_count(); ++l) {
    pf.push_back(fibre(p, l));
    qf.push_back(fibre(q, l));
    if (pf.back().objects.size() != qf.back().objects.size()) return std::nullopt;
  }

  // A morphism of discrete fibrations is fixed by its object part, and it
  // must send the lift of f at E to the lift of f at h(E).
  std::vector<Index> image(pt.object_count(), kNoIndex);
  std::vector<bool> used(qt.object_count(), false);
  auto consistent = [&](Index e) {
    Index l = p.projection().object_map[e];
    for (Index f : base.incoming(l)) {
      Index s = pt.src(p.lift(e, f));
      if (image[s] != kNoIndex && qt.src(q.lift(image[e], f)) != image[s]) return false;
    }
    for (Index h : pt.outgoing(e)) {
      Index t = pt.tgt(h);
      if (image[t] == kNoIndex) continue;
      Index f = p.projection().morphism_map[h];
      if (qt.src(q.lift(image[t], f)) != image[e]) return false;
    }
    return true;
  };
  std::vector<Index> order;
  for (Index l = 0; l < base.object_count(); ++l) {
    order.insert(order.end(), pf[l].objects.begin(), pf[l].objects.end());
  }
  std::function<bool(std::size_t)> search = [&](std::size_t depth) {
    if (depth == order.size()) return true;
    Index e = order[depth];
    for (Index candidate : qf[p.projection().object_map[e]].objects) {
      if (used[candidate]) continue;
      image[e] = candidate;
      used[candidate] = true;
      if (consistent(e) && search(depth + 1)) return true;
      used[candidate] = false;
      image[e] = kNoIndex;
    }
    return false;
  };
  if (!search(0)) return std::nullopt;

  CatFunctor h{p.total_ptr(), q.total_ptr(), image, {}};
  for (Index m = 0; m < pt.morphism_count(); ++m) {
    h.morphism_map.push_back(q.lift(image[pt.tgt(m)], p.projection().morphism_map[m]));
  }
  if (!validate_fibration_morphism(h, p, q).empty()) return std::nullopt;
  return h;
}

FunctorGraph functor_graph(const CatFunctor& p) {
  FunctorGraph g;
  const auto& dom = *p.dom;
  for (Index d = 0; d < dom.object_count(); ++d) g.object_ids.push_back(dom.object_id(d));
  for (Index m = 0; m < dom.morphism_count(); ++m) g.arrows.push_back({dom.src(m), dom.tgt(m)});
  g.object_map = p.object_map;
  g.arrow_map = p.morphism_map;
  return g;
}

ComponentPresheaf component_presheaf(const FunctorGraph& graph, const CategoryPtr& base_ptr) {
  const auto& base = *base_ptr;
  const std::size_t n = base.object_count();
  ComponentPresheaf out;
  out.presheaf.base = share(opposite(base));
  out.presheaf.values.resize(n);
  out.members.resize(n);

  std::vector<std::vector<Index>> outgoing(graph.object_ids.size());
  for (Index a = 0; a < graph.arrows.size(); ++a) outgoing[graph.arrows[a].src].push_back(a);

  // component_of[L][(d, f)] = element index of the block containing (d, f).
  std::vector<std::map<std::pair<Index, Index>, Index>> component_of(n);
  for (Index l = 0; l < n; ++l) {
    std::vector<std::pair<Index, Index>> objects;
    std::map<std::pair<Index, Index>, Index> slot;
    for (Index d = 0; d < graph.object_ids.size(); ++d) {
      for (Index f : base.hom(l, graph.object_map[d])) {
        slot.emplace(std::pair{d, f}, objects.size());
        objects.emplace_back(d, f);
      }
    }
    UnionFind uf(objects.size());
    for (Index o = 0; o < objects.size(); ++o) {
      auto [d1, f1] = objects[o];
      for (Index a : outgoing[d1]) {
        Index f2 = base.compose_checked(graph.arrow_map[a], f1);
        uf.unite(o, slot.at({graph.arrows[a].tgt, f2}));
      }
    }
    auto name = [&](Index o) {
      return "(" + graph.object_ids[objects[o].first] + "," + base.morphism_id(objects[o].second) + ")";
    };
    std::map<Index, std::vector<Index>> blocks;
    for (Index o = 0; o < objects.size(); ++o) blocks[uf.find(o)].push_back(o);
    std::vector<std::pair<std::string, std::vector<Index>>> named;
    for (auto& [root, block] : blocks) {
      std::sort(block.begin(), block.end(), [&](Index a, Index b) { return name(a) < name(b); });
      named.emplace_back(name(block.front()), std::move(block));
    }
    std::sort(named.begin(), named.end());
    for (auto& [id, block] : named) {
      Index k = out.presheaf.values[l].size();
      out.presheaf.values[l].push_back(id);
      std::vector<std::pair<Index, Index>> member_labels;
      for (Index o : block) {
        component_of[l].emplace(objects[o], k);
        member_labels.push_back(objects[o]);
      }
      out.members[l].push_back(std::move(member_labels));
    }
  }

  // u : L' -> L sends [d, f] over L to [d, f∘u] over L'.
  for (Index u = 0; u < base.morphism_count(); ++u) {
    Index from = base.tgt(u);
    Index to = base.src(u);
    std::vector<Index> action;
    for (const auto& block : out.members[from]) {
      auto [d, f] = block.front();
      action.push_back(component_of[to].at({d, base.compose_checked(f, u)}));
    }
    out.presheaf.actions.push_back(std::move(action));
  }
  return out;
}

Factorization comprehensive_factorization(const CatFunctor& p) {
  auto components = component_presheaf(functor_graph(p), p.cod);
  Fibration fib = grothendieck(components.presheaf, p.cod);

  const auto& dom = *p.dom;
  const auto& base = *p.cod;
  // Offsets of each fibre inside the total category, matching grothendieck's layout.
  std::vector<Index> first_object(base.object_count());
  Index offset = 0;
  for (Index l = 0; l < base.object_count(); ++l) {
    first_object[l] = offset;
    offset += components.presheaf.values[l].size();
  }
  auto element_of = [&](Index d) {
    Index l = p.object_map[d];
    const auto& blocks = components.members[l];
    for (Index k = 0; k < blocks.size(); ++k) {
      for (auto [dd, f] : blocks[k]) {
        if (dd == d && f == base.identity(l)) return k;
      }
    }
    throw Error(ErrorCode::InvalidArgument, "comma object (d, id) missing");
  };

  CatFunctor first{p.dom, fib.total_ptr(), {}, {}};
  for (Index d = 0; d < dom.object_count(); ++d) {
    first.object_map.push_back(first_object[p.object_map[d]] + element_of(d));
  }
  for (Index g = 0; g < dom.morphism_count(); ++g) {
    first.morphism_map.push_back(fib.lift(first.object_map[dom.tgt(g)], p.morphism_map[g]));
  }
  return Factorization{std::move(first), std::move(fib), std::move(components.presheaf)};
}

}  // namespace fiblang
