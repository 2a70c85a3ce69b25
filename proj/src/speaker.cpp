#include "fiblang/speaker.hpp"

#include <algorithm>

#include "fiblang/error.hpp"

namespace fiblang {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ", ";
    out += p;
  }
  return out;
}

void require_valid(const SetFunctor& meaning, const FinCategory& language) {
  if (!(*meaning.base == opposite(language))) {
    throw Error(ErrorCode::BaseMismatch, "meaning must be a functor on the opposite of the language");
  }
  auto violations = validate_setfunctor(meaning);
  if (!violations.empty()) {
    throw Error(ErrorCode::InvalidArgument, "invalid meaning: " + join(violations));
  }
}

/// Renames the component presheaf's elements: a block with a (d, id)
/// witness takes the least clean name of its witnesses, anything else the
/// prefixed representative id.
SetFunctor rename_components(const ComponentPresheaf& cp, const FinCategory& language,
                             const std::vector<std::string>& clean, const std::string& prefix) {
  SetFunctor renamed = cp.presheaf;
  for (Index l = 0; l < language.object_count(); ++l) {
    std::set<std::string> taken;
    for (Index k = 0; k < cp.members[l].size(); ++k) {
      std::optional<std::string> best;
      for (auto [d, f] : cp.members[l][k]) {
        if (f != language.identity(l)) continue;
        if (!best || clean[d] < *best) best = clean[d];
      }
      std::string name = best ? *best : prefix + cp.presheaf.values[l][k];
      if (!taken.insert(name).second) {
        name = prefix + cp.presheaf.values[l][k];
        taken.insert(name);
      }
      renamed.values[l][k] = std::move(name);
    }
  }
  return renamed;
}

std::map<std::string, AcquisitionReport::FibreDelta> fibre_deltas(const Speaker& before,
                                                                  const Speaker& after) {
  std::map<std::string, AcquisitionReport::FibreDelta> deltas;
  const auto& lang = after.language();
  for (Index l = 0; l < lang.object_count(); ++l) {
    AcquisitionReport::FibreDelta d;
    d.after = after.fibre(l).size();
    if (auto old = before.language().find_object(lang.object_id(l))) d.before = before.fibre(*old).size();
    deltas.emplace(lang.object_id(l), d);
  }
  return deltas;
}

/// The learner's category of elements as a graph with the element name of
/// each total object.
struct TotalGraph {
  FunctorGraph graph;
  std::vector<std::string> clean;
  std::vector<Index> element_of;  // total object -> index inside its fibre
};

TotalGraph total_graph(const Speaker& s) {
  const auto& fib = s.fibration();
  TotalGraph tg;
  tg.graph = functor_graph(fib.projection());
  std::vector<std::size_t> seen(s.language().object_count(), 0);
  for (Index e = 0; e < fib.total().object_count(); ++e) {
    Index l = fib.projection().object_map[e];
    tg.element_of.push_back(seen[l]);
    tg.clean.push_back(s.fibre(l)[seen[l]++]);
  }
  return tg;
}

void check_examples(const std::vector<std::string>& examples) {
  if (examples.empty()) throw Error(ErrorCode::EmptyExample, "the example set is empty");
  auto sorted = examples;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::InvalidArgument, "the example set has repeated elements");
  }
}

AcquisitionResult factor_and_report(const Speaker& learner, Index target, const TotalGraph& tg,
                                    const AcquisitionOptions& options) {
  auto cp = component_presheaf(tg.graph, learner.language_ptr());
  auto meaning = rename_components(cp, learner.language(), tg.clean, options.id_prefix);
  Speaker after(learner.name(), learner.language_ptr(), std::move(meaning), learner.learned_morphisms());

  AcquisitionReport report;
  report.learner = learner.name();
  report.target = learner.language().object_id(target);
  report.outcome = Outcome::Learned;
  report.fibres = fibre_deltas(learner, after);
  return AcquisitionResult{std::move(after), std::move(report)};
}

}  // namespace

// ---------------------------------------------------------------------------

Speaker::Speaker(std::string name, CategoryPtr language, SetFunctor meaning,
                 std::set<std::string> learned_morphisms)
    : name_(std::move(name)),
      language_(std::move(language)),
      meaning_((require_valid(meaning, *language_), std::move(meaning))),
      fibration_(grothendieck(meaning_, language_)),
      learned_(std::move(learned_morphisms)) {}

Speaker Speaker::renamed(std::string name) const {
  Speaker copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

bool operator==(const Speaker& a, const Speaker& b) {
  return a.name_ == b.name_ && *a.language_ == *b.language_ && a.meaning_ == b.meaning_ &&
         a.learned_ == b.learned_;
}

std::string_view to_string(Outcome o) { return o == Outcome::Learned ? "learned" : "no-sense"; }

// ---------------------------------------------------------------------------
// Explanations

ExplanationCheck validate_explanation(const Speaker& p, const Explanation& e) {
  if (!e.diagram.cod || !(*e.diagram.cod == p.language()) || e.target >= p.language().object_count()) {
    throw Error(ErrorCode::DiagramOutsideLanguage,
                "explanation does not live in the language of '" + p.name() + "'");
  }
  ExplanationCheck check;
  check.problems = validate_functor(e.diagram);
  if (!check.problems.empty()) return check;

  check.limit = set_limit(pullback_opposite(p.meaning(), e.diagram));
  check.vacuous = check.limit.size() == 0;
  const auto& fibre = p.fibre(e.target);
  std::set<std::string> fibre_set(fibre.begin(), fibre.end());

  std::set<std::string> hit;
  bool ok = true;
  for (const auto& id : check.limit.ids) {
    std::string image = id;
    if (e.embedding) {
      auto it = e.embedding->find(id);
      if (it == e.embedding->end()) {
        check.problems.push_back("embedding misses apex element " + id);
        ok = false;
        continue;
      }
      image = it->second;
    }
    if (!fibre_set.contains(image)) {
      check.problems.push_back(id + " is not sent into the fibre over '" +
                               p.language().object_id(e.target) + "'");
      ok = false;
    } else if (!hit.insert(image).second) {
      check.problems.push_back("embedding is not injective at " + image);
      ok = false;
    }
    check.embedded.push_back(std::move(image));
  }
  check.valid = ok;
  check.exact = ok && hit.size() == fibre_set.size();
  return check;
}

Explanation tautological_explanation(const Speaker& p, Index target) {
  auto shape = share(terminal_category());
  Explanation e;
  e.diagram = CatFunctor{shape, p.language_ptr(), {target}, {p.language().identity(target)}};
  e.target = target;
  std::map<std::string, std::string> embedding;
  for (const auto& x : p.fibre(target)) embedding.emplace("(" + x + ")", x);
  e.embedding = std::move(embedding);
  return e;
}

// ---------------------------------------------------------------------------
// Acquisition by example

AcquisitionResult acquire_by_example(const Speaker& learner, Index target,
                                     const std::vector<std::string>& examples, const Speaker* teacher,
                                     const AcquisitionOptions& options) {
  const auto& lang = learner.language();
  const std::string& target_id = lang.object_id(target);
  if (!learner.fibre(target).empty()) {
    throw Error(ErrorCode::FibreNotEmpty, "'" + learner.name() + "' already has meaning for '" +
                                              target_id + "'; use the merged acquisition");
  }
  check_examples(examples);
  if (teacher) {
    if (!(teacher->language() == lang)) {
      throw Error(ErrorCode::LanguageMismatch, "teacher and learner speak different languages");
    }
    const auto& tf = teacher->fibre(target);
    for (const auto& s : examples) {
      if (std::find(tf.begin(), tf.end(), s) == tf.end()) {
        throw Error(ErrorCode::ExampleNotInTeacherFibre,
                    "'" + s + "' is not in the fibre of '" + teacher->name() + "' over '" + target_id + "'");
      }
    }
  }

  TotalGraph tg = total_graph(learner);
  for (const auto& s : examples) {
    tg.graph.object_ids.push_back(target_id + ":" + s);
    tg.graph.object_map.push_back(target);
    tg.clean.push_back(s);
  }
  return factor_and_report(learner, target, tg, options);
}

AcquisitionResult acquire_by_example_merged(const Speaker& learner, Index target,
                                            const std::vector<std::string>& examples,
                                            const std::map<std::string, std::string>& merge,
                                            const AcquisitionOptions& options) {
  const auto& lang = learner.language();
  const std::string& target_id = lang.object_id(target);
  check_examples(examples);
  const auto& current = learner.fibre(target);
  for (const auto& [x, s] : merge) {
    if (std::find(current.begin(), current.end(), x) == current.end()) {
      throw Error(ErrorCode::InvalidArgument, "merge map mentions '" + x + "' outside the fibre");
    }
    if (std::find(examples.begin(), examples.end(), s) == examples.end()) {
      throw Error(ErrorCode::InvalidArgument, "merge map sends '" + x + "' outside the examples");
    }
  }
  for (const auto& x : current) {
    if (!merge.contains(x)) {
      throw Error(ErrorCode::InvalidArgument, "merge map is not total: '" + x + "' is unmapped");
    }
  }

  TotalGraph tg = total_graph(learner);
  const auto& proj = learner.fibration().projection();
  const std::size_t total_objects = tg.graph.object_ids.size();

  // Quotient: (total ⊔ S) / x ~ merge(x) for x over the target.
  std::vector<Index> remap(total_objects, kNoIndex);
  FunctorGraph quotient;
  std::vector<std::string> clean;
  for (Index e = 0; e < total_objects; ++e) {
    if (proj.object_map[e] == target) continue;
    remap[e] = quotient.object_ids.size();
    quotient.object_ids.push_back(tg.graph.object_ids[e]);
    quotient.object_map.push_back(tg.graph.object_map[e]);
    clean.push_back(tg.clean[e]);
  }
  std::map<std::string, Index> example_slot;
  for (const auto& s : examples) {
    example_slot[s] = quotient.object_ids.size();
    quotient.object_ids.push_back(target_id + ":" + s);
    quotient.object_map.push_back(target);
    clean.push_back(s);
  }
  for (Index e = 0; e < total_objects; ++e) {
    if (proj.object_map[e] == target) remap[e] = example_slot.at(merge.at(tg.clean[e]));
  }
  for (Index a = 0; a < tg.graph.arrows.size(); ++a) {
    quotient.arrows.push_back({remap[tg.graph.arrows[a].src], remap[tg.graph.arrows[a].tgt]});
    quotient.arrow_map.push_back(tg.graph.arrow_map[a]);
  }
  TotalGraph merged{std::move(quotient), std::move(clean), {}};
  return factor_and_report(learner, target, merged, options);
}

// ---------------------------------------------------------------------------
// Acquisition by paraphrasis

AcquisitionResult acquire_by_paraphrasis(const Speaker& teacher, const Speaker& learner, Index target,
                                         const Explanation& e, const ParaphrasisOptions& options) {
  const auto& lang = learner.language();
  if (!(teacher.language() == lang)) {
    throw Error(ErrorCode::LanguageMismatch, "teacher and learner speak different languages");
  }
  if (e.target != target) {
    throw Error(ErrorCode::InvalidExplanation, "explanation is about a different object");
  }
  auto teacher_check = validate_explanation(teacher, e);
  if (!teacher_check.valid || teacher_check.vacuous) {
    throw Error(ErrorCode::InvalidExplanation,
                "not a non-vacuous explanation for '" + teacher.name() + "': " + join(teacher_check.problems));
  }
  const std::string& target_id = lang.object_id(target);
  if (!learner.fibre(target).empty()) {
    throw Error(ErrorCode::FibreNotEmpty, "'" + learner.name() + "' already has meaning for '" + target_id + "'");
  }

  AcquisitionReport report;
  report.learner = learner.name();
  report.target = target_id;

  LimitCone cone = set_limit(pullback_opposite(learner.meaning(), e.diagram));
  for (const auto& id : cone.ids) report.apex.push_back(options.id_prefix + id);
  if (cone.size() == 0) {
    report.outcome = Outcome::NoSense;
    report.fibres = fibre_deltas(learner, learner);
    return AcquisitionResult{learner, std::move(report)};
  }

  // Everything below lives in the meaning orientation C = opposite(L).
  const CategoryPtr& c_ptr = learner.meaning().base;
  const auto& c = *c_ptr;
  const auto& shape = e.shape();

  SetFunctor extended{c_ptr, learner.meaning().values, {}};
  extended.values[target] = report.apex;
  std::vector<std::string> unforced;
  for (Index k = 0; k < c.morphism_count(); ++k) {
    Index s = c.src(k);
    Index t = c.tgt(k);
    if (s != target && t != target) {
      extended.actions.push_back(learner.meaning().actions[k]);
    } else if (s != target) {
      // Into the target slot: the old value at s was forced empty.
      extended.actions.push_back({});
    } else if (c.is_identity(k)) {
      std::vector<Index> id(cone.size());
      for (Index i = 0; i < id.size(); ++i) id[i] = i;
      extended.actions.push_back(std::move(id));
    } else {
      auto it = options.edge_overrides.find(c.morphism_id(k));
      if (it == options.edge_overrides.end()) {
        unforced.push_back(c.morphism_id(k));
        extended.actions.push_back({});
        continue;
      }
      std::vector<Index> action;
      for (const auto& id : cone.ids) {
        auto img = it->second.find(id);
        std::optional<Index> y;
        if (img != it->second.end()) y = extended.find_element(t, img->second);
        if (!y) {
          throw Error(ErrorCode::InvalidOverride,
                      "override for '" + c.morphism_id(k) + "' does not map " + id + " into its codomain");
        }
        action.push_back(*y);
      }
      extended.actions.push_back(std::move(action));
    }
  }
  if (!unforced.empty()) {
    throw Error(ErrorCode::UnforcedActionAtL,
                "meaning of pre-existing morphisms into '" + target_id + "' is not determined: " + join(unforced));
  }
  auto violations = validate_setfunctor(extended);
  if (!violations.empty()) {
    throw Error(ErrorCode::InvalidOverride, "overrides break functoriality: " + join(violations));
  }

  Quiver q;
  for (Index x = 0; x < c.object_count(); ++x) q.vertices.push_back(c.object_id(x));
  std::map<Index, std::vector<Index>> legs;
  for (Index a : cone.component_order) {
    Index to = e.diagram.object_map[a];
    std::string edge_id = options.id_prefix + "leg:" + shape.object_id(a);
    legs.emplace(q.edges.size(), cone.leg(a));
    report.quiver_edges.emplace_back(edge_id, target_id, lang.object_id(to));
    q.edges.push_back({std::move(edge_id), target, to, {}});
  }

  CollageCategory collage = fp_collage(c_ptr, q, options.bound);
  SetFunctor t = extend_set_functor(collage, extended, legs);
  auto language = share(opposite(*collage.category()));

  std::set<std::string> learned = learner.learned_morphisms();
  for (Index w = c.morphism_count(); w < collage.words().size(); ++w) {
    const auto& word = collage.words()[w];
    AcquisitionReport::NewMorphism nm;
    nm.id = language->morphism_id(w);
    nm.src = language->object_id(language->src(w));
    nm.tgt = language->object_id(language->tgt(w));
    for (Index edge : word.edges) nm.edges.push_back(collage.quiver().edges[edge].id);
    learned.insert(nm.id);
    report.new_morphisms.push_back(std::move(nm));
  }

  // Restriction along K agrees with the old meaning away from the target.
  SetFunctor restricted = restrict_along(t, canonical_functor(collage));
  bool matches = true;
  for (Index x = 0; x < c.object_count(); ++x) {
    if (x != target && restricted.values[x] != learner.meaning().values[x]) matches = false;
  }
  for (Index k = 0; k < c.morphism_count(); ++k) {
    if (c.src(k) == target || c.tgt(k) == target) continue;
    if (restricted.actions[k] != learner.meaning().actions[k]) matches = false;
  }
  report.restriction_matches_prior = matches;

  Speaker after(learner.name(), std::move(language), std::move(t), std::move(learned));
  report.outcome = Outcome::Learned;
  report.fibres = fibre_deltas(learner, after);
  return AcquisitionResult{std::move(after), std::move(report)};
}

}  // namespace fiblang
