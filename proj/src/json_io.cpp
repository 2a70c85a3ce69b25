#include "fiblang/json_io.hpp"

#include <set>

#include "fiblang/error.hpp"

namespace fiblang::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ReferenceError, what); }

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) bad(where + ": missing \"" + key + "\"");
  return j.at(key);
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where + ": expected a string");
  return j.get<std::string>();
}

Index object_ref(const FinCategory& c, const json& j, const std::string& where) {
  auto id = str(j, where);
  auto x = c.find_object(id);
  if (!x) bad(where + ": unknown object '" + id + "'");
  return *x;
}

Index morphism_ref(const FinCategory& c, const json& j, const std::string& where) {
  auto id = str(j, where);
  auto m = c.find_morphism(id);
  if (!m) bad(where + ": unknown morphism '" + id + "'");
  return *m;
}

Index element_ref(const SetFunctor& f, Index x, const json& j, const std::string& where) {
  auto id = str(j, where);
  auto e = f.find_element(x, id);
  if (!e) bad(where + ": '" + id + "' is not an element of " + f.base->object_id(x));
  return *e;
}

CategoryPtr category_ptr(const json& j) { return share(category_from_json(j)); }

}  // namespace

json to_json(const FinCategory& c) {
  json objects = json::array();
  for (Index x = 0; x < c.object_count(); ++x) {
    json o = {{"id", c.object_id(x)}};
    if (c.identity(x) != kNoIndex) o["identity"] = c.morphism_id(c.identity(x));
    objects.push_back(std::move(o));
  }
  json morphisms = json::array();
  for (Index m = 0; m < c.morphism_count(); ++m) {
    morphisms.push_back(
        {{"id", c.morphism_id(m)}, {"src", c.object_id(c.src(m))}, {"tgt", c.object_id(c.tgt(m))}});
  }
  json compose = json::array();
  for (auto [g, f, gf] : c.composition_table()) {
    compose.push_back({c.morphism_id(g), c.morphism_id(f), c.morphism_id(gf)});
  }
  return {{"objects", std::move(objects)},
          {"morphisms", std::move(morphisms)},
          {"compose", std::move(compose)},
          {"closed", c.closed()}};
}

FinCategory category_from_json(const json& j) {
  FinCategory c;
  std::vector<std::string> identity_ids;
  for (const auto& o : field(j, "objects", "category")) {
    if (o.is_string()) {
      auto id = o.get<std::string>();
      c.add_object(id);
      identity_ids.push_back("id_" + id);
    } else {
      auto id = str(field(o, "id", "category object"), "category object");
      c.add_object(id);
      identity_ids.push_back(o.contains("identity") ? str(o.at("identity"), "identity of " + id) : "id_" + id);
    }
  }
  if (j.contains("morphisms")) {
    for (const auto& m : j.at("morphisms")) {
      auto id = str(field(m, "id", "morphism"), "morphism");
      Index s = object_ref(c, field(m, "src", "morphism " + id), "morphism " + id);
      Index t = object_ref(c, field(m, "tgt", "morphism " + id), "morphism " + id);
      if (c.find_morphism(id)) bad("morphism '" + id + "' declared twice");
      c.add_morphism(id, s, t);
    }
  }
  for (Index x = 0; x < c.object_count(); ++x) {
    auto m = c.find_morphism(identity_ids[x]);
    if (!m) m = c.add_morphism(identity_ids[x], x, x);
    if (c.src(*m) != x || c.tgt(*m) != x) bad("identity '" + identity_ids[x] + "' is not an endomorphism");
    c.set_identity(x, *m);
  }
  if (j.contains("compose")) {
    for (const auto& t : j.at("compose")) {
      if (!t.is_array() || t.size() != 3) bad("compose entries are [g, f, g∘f] triples");
      Index g = morphism_ref(c, t[0], "compose");
      Index f = morphism_ref(c, t[1], "compose");
      Index gf = morphism_ref(c, t[2], "compose");
      c.set_composite(g, f, gf);
    }
  }
  c.fill_identity_composites();
  if (j.contains("closed")) c.set_closed(j.at("closed").get<bool>());
  return c;
}

json to_json(const Quiver& q) {
  json edges = json::array();
  for (const auto& e : q.edges) {
    json ej = {{"id", e.id}, {"src", q.vertices.at(e.src)}, {"tgt", q.vertices.at(e.tgt)}};
    if (!e.tag.empty()) ej["tag"] = e.tag;
    edges.push_back(std::move(ej));
  }
  return {{"vertices", q.vertices}, {"edges", std::move(edges)}};
}

Quiver quiver_from_json(const json& j) {
  Quiver q;
  q.vertices = field(j, "vertices", "quiver").get<std::vector<std::string>>();
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      Quiver::Edge edge;
      edge.id = str(field(e, "id", "edge"), "edge");
      edge.src = q.vertex_index(str(field(e, "src", "edge " + edge.id), "edge " + edge.id));
      edge.tgt = q.vertex_index(str(field(e, "tgt", "edge " + edge.id), "edge " + edge.id));
      if (e.contains("tag")) edge.tag = e.at("tag").get<std::string>();
      q.edges.push_back(std::move(edge));
    }
  }
  return q;
}

json to_json(const CatFunctor& f) {
  json objects = json::object();
  for (Index x = 0; x < f.dom->object_count(); ++x) {
    objects[f.dom->object_id(x)] = f.cod->object_id(f.object_map[x]);
  }
  json morphisms = json::object();
  for (Index m = 0; m < f.dom->morphism_count(); ++m) {
    morphisms[f.dom->morphism_id(m)] = f.cod->morphism_id(f.morphism_map[m]);
  }
  return {{"dom", to_json(*f.dom)}, {"cod", to_json(*f.cod)}, {"objects", std::move(objects)},
          {"morphisms", std::move(morphisms)}};
}

CatFunctor functor_from_json(const json& j) {
  CatFunctor f;
  f.dom = category_ptr(field(j, "dom", "functor"));
  f.cod = category_ptr(field(j, "cod", "functor"));
  const auto& objects = field(j, "objects", "functor");
  const auto& morphisms = field(j, "morphisms", "functor");
  for (Index x = 0; x < f.dom->object_count(); ++x) {
    const auto& id = f.dom->object_id(x);
    f.object_map.push_back(object_ref(*f.cod, field(objects, id.c_str(), "functor objects"), "functor"));
  }
  for (Index m = 0; m < f.dom->morphism_count(); ++m) {
    const auto& id = f.dom->morphism_id(m);
    f.morphism_map.push_back(
        morphism_ref(*f.cod, field(morphisms, id.c_str(), "functor morphisms"), "functor"));
  }
  auto problems = validate_functor(f);
  if (!problems.empty()) throw Error(ErrorCode::InvalidArgument, "invalid functor: " + problems.front());
  return f;
}

namespace {

json values_json(const SetFunctor& f) {
  json values = json::object();
  for (Index x = 0; x < f.base->object_count(); ++x) values[f.base->object_id(x)] = f.values[x];
  return values;
}

json actions_json(const SetFunctor& f) {
  json actions = json::object();
  for (Index m = 0; m < f.base->morphism_count(); ++m) {
    json graph = json::object();
    const auto& from = f.values[f.base->src(m)];
    const auto& to = f.values[f.base->tgt(m)];
    for (Index i = 0; i < from.size(); ++i) graph[from[i]] = to[f.actions[m][i]];
    actions[f.base->morphism_id(m)] = std::move(graph);
  }
  return actions;
}

std::vector<std::vector<std::string>> read_values(const FinCategory& c, const json& values) {
  if (!values.is_object()) bad("values must map objects to element lists");
  std::vector<std::vector<std::string>> out(c.object_count());
  for (auto it = values.begin(); it != values.end(); ++it) {
    Index x = object_ref(c, it.key(), "values");
    out[x] = it.value().get<std::vector<std::string>>();
    std::set<std::string> unique(out[x].begin(), out[x].end());
    if (unique.size() != out[x].size()) bad("values of " + it.key() + " repeat an element");
  }
  return out;
}

}  // namespace

json to_json(const SetFunctor& f) {
  return {{"base", to_json(*f.base)}, {"values", values_json(f)}, {"actions", actions_json(f)}};
}

SetFunctor setfunctor_from_json(const json& j) {
  SetFunctor f;
  f.base = category_ptr(field(j, "base", "set functor"));
  f.values = read_values(*f.base, field(j, "values", "set functor"));
  const auto& actions = field(j, "actions", "set functor");
  f.actions.resize(f.base->morphism_count());
  for (Index m = 0; m < f.base->morphism_count(); ++m) {
    const auto& id = f.base->morphism_id(m);
    Index s = f.base->src(m);
    Index t = f.base->tgt(m);
    const auto* graph = actions.contains(id) ? &actions.at(id) : nullptr;
    if (!graph && f.base->is_identity(m)) {
      for (Index i = 0; i < f.values[s].size(); ++i) f.actions[m].push_back(i);
      continue;
    }
    if (!graph) bad("no action for morphism '" + id + "'");
    for (const auto& x : f.values[s]) {
      f.actions[m].push_back(element_ref(f, t, field(*graph, x.c_str(), "action of " + id), "action of " + id));
    }
  }
  auto problems = validate_setfunctor(f);
  if (!problems.empty()) throw Error(ErrorCode::InvalidArgument, "invalid set functor: " + problems.front());
  return f;
}

json to_json(const Fibration& p) { return to_json(p.projection()); }

Fibration fibration_from_json(const json& j) { return Fibration(functor_from_json(j)); }

json to_json(const LimitCone& cone, const SetFunctor& diagram) {
  const auto& shape = *diagram.base;
  json legs = json::object();
  for (Index a : cone.component_order) {
    json leg = json::object();
    auto projection = cone.leg(a);
    for (Index k = 0; k < cone.size(); ++k) leg[cone.ids[k]] = diagram.values[a][projection[k]];
    legs[shape.object_id(a)] = std::move(leg);
  }
  json order = json::array();
  for (Index a : cone.component_order) order.push_back(shape.object_id(a));
  return {{"components", std::move(order)}, {"apex", cone.ids}, {"legs", std::move(legs)}};
}

json to_json(const CollageCategory& collage, const Word& w) {
  json out = json::array();
  for (std::size_t i = 0; i < w.base.size(); ++i) {
    out.push_back({{"base", collage.base().morphism_id(w.base[i])}});
    if (i < w.edges.size()) out.push_back({{"edge", collage.quiver().edges.at(w.edges[i]).id}});
  }
  return out;
}

Word word_from_json(const CollageCategory& collage, const json& j) {
  std::vector<Letter> letters;
  for (const auto& item : j) {
    if (item.contains("base")) {
      letters.push_back({Letter::Kind::Base, morphism_ref(collage.base(), item.at("base"), "word")});
    } else if (item.contains("edge")) {
      auto id = str(item.at("edge"), "word");
      const auto& edges = collage.quiver().edges;
      auto it = std::find_if(edges.begin(), edges.end(), [&](const auto& e) { return e.id == id; });
      if (it == edges.end()) bad("word: unknown edge '" + id + "'");
      letters.push_back({Letter::Kind::Edge, static_cast<Index>(it - edges.begin())});
    } else {
      bad("word letters are {\"base\": id} or {\"edge\": id}");
    }
  }
  if (letters.empty()) bad("word: empty letter list");
  return normalize_word(collage.base(), collage.quiver(), letters);
}

SetFunctor presheaf_from_tables(const CategoryPtr& language, const json& fibres, const json& actions) {
  SetFunctor f;
  f.base = share(opposite(*language));
  f.values = read_values(*language, fibres);
  const auto& lang = *language;
  std::vector<std::optional<std::vector<Index>>> known(lang.morphism_count());
  for (Index m = 0; m < lang.morphism_count(); ++m) {
    // m : A -> B acts fibre(B) -> fibre(A).
    Index from = lang.tgt(m);
    Index to = lang.src(m);
    const auto& id = lang.morphism_id(m);
    if (actions.is_object() && actions.contains(id)) {
      const auto& graph = actions.at(id);
      std::vector<Index> table;
      for (const auto& x : f.values[from]) {
        table.push_back(element_ref(f, to, field(graph, x.c_str(), "action of " + id), "action of " + id));
      }
      known[m] = std::move(table);
    } else if (f.values[from].empty()) {
      known[m] = std::vector<Index>{};
    } else if (lang.is_identity(m)) {
      std::vector<Index> table(f.values[from].size());
      for (Index i = 0; i < table.size(); ++i) table[i] = i;
      known[m] = std::move(table);
    }
  }
  if (actions.is_object()) {
    for (auto it = actions.begin(); it != actions.end(); ++it) morphism_ref(lang, it.key(), "actions");
  }
  // Derive composites: P(g∘f) = P(f) ∘ P(g).
  auto table = lang.composition_table();
  for (bool changed = true; changed;) {
    changed = false;
    for (auto [g, h, gh] : table) {
      if (known[gh] || !known[g] || !known[h]) continue;
      std::vector<Index> composite;
      for (Index i : *known[g]) composite.push_back((*known[h])[i]);
      known[gh] = std::move(composite);
      changed = true;
    }
  }
  f.actions.resize(lang.morphism_count());
  for (Index m = 0; m < lang.morphism_count(); ++m) {
    if (!known[m]) bad("no action given or derivable for morphism '" + lang.morphism_id(m) + "'");
    f.actions[m] = std::move(*known[m]);
  }
  auto problems = validate_setfunctor(f);
  if (!problems.empty()) throw Error(ErrorCode::InvalidArgument, "invalid meaning: " + problems.front());
  return f;
}

json to_json(const Speaker& s) {
  // Actions written in language orientation, i.e. fibre(tgt) -> fibre(src).
  const auto& m = s.meaning();
  return {{"name", s.name()},
          {"language", to_json(s.language())},
          {"fibres", values_json(m)},
          {"actions", actions_json(m)},
          {"learned", s.learned_morphisms()}};
}

Speaker speaker_from_json(const json& j) {
  auto name = str(field(j, "name", "speaker"), "speaker");
  auto language = category_ptr(field(j, "language", "speaker " + name));
  auto meaning = presheaf_from_tables(language, field(j, "fibres", "speaker " + name),
                                      j.contains("actions") ? j.at("actions") : json::object());
  std::set<std::string> learned;
  if (j.contains("learned")) learned = j.at("learned").get<std::set<std::string>>();
  return Speaker(std::move(name), std::move(language), std::move(meaning), std::move(learned));
}

json to_json(const ExplanationCheck& check) {
  return {{"valid", check.valid},
          {"exact", check.exact},
          {"vacuous", check.vacuous},
          {"apex", check.limit.ids},
          {"apex_size", check.limit.size()},
          {"embedded", check.embedded},
          {"problems", check.problems}};
}

json to_json(const AcquisitionReport& report) {
  json fibres = json::object();
  for (const auto& [id, d] : report.fibres) fibres[id] = {{"before", d.before}, {"after", d.after}};
  json edges = json::array();
  for (const auto& [id, from, to] : report.quiver_edges) edges.push_back({{"id", id}, {"src", from}, {"tgt", to}});
  json morphisms = json::array();
  for (const auto& m : report.new_morphisms) {
    morphisms.push_back({{"id", m.id}, {"src", m.src}, {"tgt", m.tgt}, {"edges", m.edges}});
  }
  json out = {{"learner", report.learner},
              {"target", report.target},
              {"outcome", std::string(to_string(report.outcome))},
              {"fibres", std::move(fibres)},
              {"apex", report.apex},
              {"quiver_edges", std::move(edges)},
              {"new_morphisms", std::move(morphisms)}};
  if (report.restriction_matches_prior) out["restriction_matches_prior"] = *report.restriction_matches_prior;
  return out;
}

pregroup::Lexicon lexicon_from_json(const json& j) {
  pregroup::Lexicon lex;
  auto basics = field(j, "basic", "lexicon").get<std::set<std::string>>();
  std::vector<std::pair<std::string, std::string>> leq;
  if (j.contains("order")) {
    for (const auto& p : j.at("order")) {
      if (!p.is_array() || p.size() != 2) bad("lexicon order entries are [a, b] pairs meaning a <= b");
      leq.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
  }
  lex.order = pregroup::Order(std::move(basics), leq);
  if (j.contains("z_max")) lex.z_max = j.at("z_max").get<int>();
  lex.sentence = pregroup::parse_type(j.value("sentence", std::string("s")), &lex.order);
  for (auto it = field(j, "words", "lexicon").begin(); it != j.at("words").end(); ++it) {
    std::vector<pregroup::Type> types;
    if (it.value().is_string()) {
      types.push_back(pregroup::parse_type(it.value().get<std::string>(), &lex.order));
    } else {
      for (const auto& t : it.value()) types.push_back(pregroup::parse_type(t.get<std::string>(), &lex.order));
    }
    lex.entries.emplace(it.key(), std::move(types));
  }
  pregroup::validate_lexicon(lex);
  return lex;
}

}  // namespace fiblang::io
