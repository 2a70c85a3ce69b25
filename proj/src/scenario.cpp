#include "fiblang/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fiblang/dot.hpp"
#include "fiblang/error.hpp"
#include "fiblang/json_io.hpp"
#include "fiblang/pregroup.hpp"

namespace fiblang {

using nlohmann::json;

namespace {

using Store = std::map<std::string, Speaker>;

[[noreturn]] void ref_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ReferenceError, path + ": " + what);
}

/// Re-throws library errors raised while reading a declaration with its path.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.message());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ReferenceError, path + ": " + e.what());
  }
}

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) ref_error(path, std::string("missing \"") + key + "\"");
  return j.at(key);
}

std::string need_string(const json& j, const char* key, const std::string& path) {
  const auto& v = need(j, key, path);
  if (!v.is_string()) ref_error(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const json& j, const char* key, const std::string& path) {
  const auto& v = need(j, key, path);
  if (!v.is_array()) ref_error(path + "/" + key, "expected a list of strings");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) ref_error(path + "/" + key, "expected a list of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

FinCategory build_category(const json& decl) {
  if (!decl.contains("pregroup")) return io::category_from_json(decl);
  auto lex = io::lexicon_from_json(decl.at("pregroup"));
  std::vector<pregroup::Phrase> phrases;
  for (const auto& p : decl.value("phrases", json::array())) {
    if (p.is_string()) {
      phrases.push_back({pregroup::Phrase::Kind::Type, p.get<std::string>()});
    } else if (p.contains("words")) {
      phrases.push_back({pregroup::Phrase::Kind::Words, p.at("words").get<std::string>()});
    } else {
      phrases.push_back({pregroup::Phrase::Kind::Type, p.at("type").get<std::string>()});
    }
  }
  return pregroup::language_category_from_lexicon(lex, phrases);
}

CatFunctor resolve_diagram(const json& decl, const CategoryPtr& language, const std::string& path) {
  auto shape = share(at_path(path + "/shape", [&] { return io::category_from_json(need(decl, "shape", path)); }));
  const auto& objects = need(decl, "objects", path);
  json morphisms = decl.value("morphisms", json::object());
  CatFunctor d{shape, language, {}, {}};
  for (Index a = 0; a < shape->object_count(); ++a) {
    const auto& id = shape->object_id(a);
    if (!objects.contains(id)) ref_error(path + "/objects", "shape object '" + id + "' is not mapped");
    auto target = objects.at(id).get<std::string>();
    auto x = language->find_object(target);
    if (!x) throw Error(ErrorCode::DiagramOutsideLanguage, path + "/objects/" + id + ": '" + target + "' is not in the language");
    d.object_map.push_back(*x);
  }
  for (Index m = 0; m < shape->morphism_count(); ++m) {
    const auto& id = shape->morphism_id(m);
    if (!morphisms.contains(id)) {
      if (shape->is_identity(m)) {
        d.morphism_map.push_back(language->identity(d.object_map[shape->src(m)]));
        continue;
      }
      ref_error(path + "/morphisms", "shape morphism '" + id + "' is not mapped");
    }
    auto target = morphisms.at(id).get<std::string>();
    auto f = language->find_morphism(target);
    if (!f) throw Error(ErrorCode::DiagramOutsideLanguage, path + "/morphisms/" + id + ": '" + target + "' is not in the language");
    d.morphism_map.push_back(*f);
  }
  auto problems = validate_functor(d);
  if (!problems.empty()) throw Error(ErrorCode::InvalidExplanation, path + ": " + problems.front());
  return d;
}

const std::set<std::string> kEventKinds{"example", "merged-example", "paraphrasis", "validate-explanation"};
const std::set<std::string> kAssertionKinds{"fibre-size",  "morphism-count", "new-morphisms", "outcome",
                                            "apex-size",   "explanation",    "iso",           "unchanged",
                                            "report"};

}  // namespace

// ---------------------------------------------------------------------------
// Loading

Scenario Scenario::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ReferenceError, path.string() + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_text(buffer.str(), path.string());
}

Scenario Scenario::from_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw Error(ErrorCode::ParseError,
                origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
  return from_json(j);
}

Scenario Scenario::from_json(const json& j) {
  if (!j.is_object()) ref_error("/", "a scenario is a JSON object");
  Scenario s;
  s.name_ = j.value("name", std::string());

  const json categories = j.value("categories", json::object());
  const json speakers = j.value("speakers", json::object());
  const json explanations = j.value("explanations", json::object());
  const json events = j.value("events", json::array());
  const json assertions = j.value("assertions", json::array());

  for (const auto& [name, decl] : categories.items()) {
    std::string path = "/categories/" + name;
    auto c = at_path(path, [&] { return build_category(decl); });
    auto problems = validate_category(c);
    if (!problems.empty()) ref_error(path, "not a category: " + problems.front());
    s.categories_.emplace(name, share(std::move(c)));
  }

  for (const auto& [name, decl] : speakers.items()) {
    std::string path = "/speakers/" + name;
    const auto& lang_ref = need(decl, "language", path);
    CategoryPtr language;
    if (lang_ref.is_string()) {
      auto it = s.categories_.find(lang_ref.get<std::string>());
      if (it == s.categories_.end()) {
        ref_error(path + "/language", "undeclared category '" + lang_ref.get<std::string>() + "'");
      }
      language = it->second;
    } else {
      language = share(at_path(path + "/language", [&] { return io::category_from_json(lang_ref); }));
    }
    auto meaning = at_path(path, [&] {
      return io::presheaf_from_tables(language, decl.value("fibres", json::object()),
                                      decl.value("actions", json::object()));
    });
    s.speakers_.emplace(name, at_path(path, [&] { return Speaker(name, language, std::move(meaning)); }));
  }

  // Names a speaker binding may have at some point of the run.
  std::set<std::string> bound_names;
  for (const auto& [name, _] : s.speakers_) bound_names.insert(name);
  for (const auto& ev : events) {
    if (ev.is_object() && ev.contains("into") && ev.at("into").is_string()) bound_names.insert(ev.at("into"));
  }

  for (const auto& [name, decl] : explanations.items()) {
    std::string path = "/explanations/" + name;
    if (decl.contains("tautological")) {
      const auto& t = decl.at("tautological");
      auto speaker = need_string(t, "speaker", path + "/tautological");
      need_string(t, "target", path + "/tautological");
      if (!bound_names.contains(speaker)) ref_error(path + "/tautological/speaker", "undeclared speaker '" + speaker + "'");
    } else {
      auto target = need_string(decl, "target", path);
      need(decl, "shape", path);
      need(decl, "objects", path);
      if (decl.contains("language")) {
        auto lang_name = decl.at("language").get<std::string>();
        auto it = s.categories_.find(lang_name);
        if (it == s.categories_.end()) ref_error(path + "/language", "undeclared category '" + lang_name + "'");
        resolve_diagram(decl, it->second, path);
        if (!it->second->find_object(target)) ref_error(path + "/target", "'" + target + "' is not in " + lang_name);
      }
    }
    s.explanations_.emplace(name, decl);
  }

  std::set<std::string> known;
  for (const auto& [name, _] : s.speakers_) known.insert(name);
  auto need_speaker = [&](const json& ev, const char* key, const std::string& path) {
    auto name = need_string(ev, key, path);
    if (!known.contains(name)) ref_error(path + "/" + key, "undeclared speaker '" + name + "'");
    return name;
  };
  auto need_explanation = [&](const json& ev, const std::string& path) {
    auto name = need_string(ev, "explanation", path);
    if (!s.explanations_.contains(name)) ref_error(path + "/explanation", "undeclared explanation '" + name + "'");
    return name;
  };

  std::set<std::string> ids;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    std::string path = "/events/" + std::to_string(i);
    auto kind = need_string(ev, "kind", path);
    if (!kEventKinds.contains(kind)) ref_error(path + "/kind", "unknown event kind '" + kind + "'");
    std::string id = ev.contains("id") ? need_string(ev, "id", path) : "e" + std::to_string(i + 1);
    if (!ids.insert(id).second) ref_error(path + "/id", "duplicate event id '" + id + "'");
    if (kind == "example" || kind == "merged-example") {
      need_speaker(ev, "learner", path);
      need_string(ev, "target", path);
      string_list(ev, "examples", path);
      if (ev.contains("teacher")) need_speaker(ev, "teacher", path);
      if (kind == "merged-example") need(ev, "merge", path);
    } else if (kind == "paraphrasis") {
      need_speaker(ev, "teacher", path);
      need_speaker(ev, "learner", path);
      need_explanation(ev, path);
    } else {
      need_speaker(ev, "speaker", path);
      need_explanation(ev, path);
    }
    if (ev.contains("into")) known.insert(need_string(ev, "into", path));
    s.events_.push_back(ev);
    s.event_ids_.push_back(id);
  }

  for (std::size_t i = 0; i < assertions.size(); ++i) {
    const auto& a = assertions[i];
    std::string path = "/assertions/" + std::to_string(i);
    auto kind = need_string(a, "kind", path);
    if (!kAssertionKinds.contains(kind)) ref_error(path + "/kind", "unknown assertion kind '" + kind + "'");
    if (a.contains("speaker")) need_speaker(a, "speaker", path);
    if (a.contains("other")) need_speaker(a, "other", path);
    if (a.contains("event")) {
      auto id = need_string(a, "event", path);
      if (!ids.contains(id)) ref_error(path + "/event", "unknown event '" + id + "'");
    }
    s.assertions_.push_back(a);
  }
  return s;
}

Explanation Scenario::explanation(const std::string& name, const Speaker& utterer, const Store& store) const {
  auto it = explanations_.find(name);
  if (it == explanations_.end()) throw Error(ErrorCode::ReferenceError, "undeclared explanation '" + name + "'");
  const auto& decl = it->second;
  std::string path = "/explanations/" + name;
  if (decl.contains("tautological")) {
    const auto& t = decl.at("tautological");
    auto owner = store.find(t.at("speaker").get<std::string>());
    if (owner == store.end()) ref_error(path, "speaker '" + t.at("speaker").get<std::string>() + "' is not bound");
    const auto& p = owner->second;
    auto target = t.at("target").get<std::string>();
    return tautological_explanation(p, at_path(path, [&] { return p.language().object_index(target); }));
  }
  Explanation e;
  e.diagram = resolve_diagram(decl, utterer.language_ptr(), path);
  auto target = decl.at("target").get<std::string>();
  auto t = utterer.language().find_object(target);
  if (!t) throw Error(ErrorCode::DiagramOutsideLanguage, path + "/target: '" + target + "' is not in the language");
  e.target = *t;
  if (decl.contains("embedding")) e.embedding = decl.at("embedding").get<std::map<std::string, std::string>>();
  return e;
}

namespace {

struct Runner {
  const Scenario& s;
  const RunOptions& options;
  ScenarioRun run;
  std::map<std::string, std::size_t> event_index;

  const Speaker& speaker(const Store& store, const std::string& name) {
    auto it = store.find(name);
    if (it == store.end()) throw Error(ErrorCode::ReferenceError, "speaker '" + name + "' is not bound yet");
    return it->second;
  }

  Index object(const Speaker& p, const std::string& id) { return p.language().object_index(id); }

  json execute(const json& ev, const std::string& id, Store& store) {
    auto kind = ev.at("kind").get<std::string>();
    json entry = {{"id", id}, {"kind", kind}};
    AcquisitionOptions base;
    base.id_prefix = id + "/";

    if (kind == "validate-explanation") {
      const auto& p = speaker(store, ev.at("speaker"));
      auto name = ev.at("explanation").get<std::string>();
      auto check = validate_explanation(p, s.explanation(name, p, store));
      entry["speaker"] = p.name();
      entry["explanation"] = name;
      entry["check"] = io::to_json(check);
      return entry;
    }

    const auto& learner = speaker(store, ev.at("learner"));
    std::string into = ev.value("into", learner.name());
    std::optional<AcquisitionResult> result;
    if (kind == "example") {
      auto examples = ev.at("examples").get<std::vector<std::string>>();
      const Speaker* teacher = ev.contains("teacher") ? &speaker(store, ev.at("teacher")) : nullptr;
      result = acquire_by_example(learner, object(learner, ev.at("target")), examples, teacher, base);
    } else if (kind == "merged-example") {
      auto examples = ev.at("examples").get<std::vector<std::string>>();
      auto merge = ev.at("merge").get<std::map<std::string, std::string>>();
      result = acquire_by_example_merged(learner, object(learner, ev.at("target")), examples, merge, base);
    } else {
      const auto& teacher = speaker(store, ev.at("teacher"));
      auto name = ev.at("explanation").get<std::string>();
      auto e = s.explanation(name, teacher, store);
      Index target = ev.contains("target") ? object(learner, ev.at("target")) : e.target;
      ParaphrasisOptions po;
      po.id_prefix = base.id_prefix;
      po.bound = ev.contains("bound") ? std::optional<std::size_t>(ev.at("bound").get<std::size_t>()) : options.bound;
      if (ev.contains("overrides")) {
        po.edge_overrides = ev.at("overrides").get<std::map<std::string, std::map<std::string, std::string>>>();
      }
      result = acquire_by_paraphrasis(teacher, learner, target, e, po);
      entry["teacher"] = teacher.name();
      entry["explanation"] = name;
    }
    entry["report"] = io::to_json(result->report);
    entry["into"] = into;
    store.insert_or_assign(into, result->speaker.renamed(into));
    return entry;
  }

  // --- assertions ---------------------------------------------------------

  const Store* stage_of(const json& a, const char* key) {
    if (!a.contains(key)) return &run.stages.back();
    auto k = a.at(key).get<std::size_t>();
    if (k >= run.stages.size()) return nullptr;
    return &run.stages[k];
  }

  const json* event_entry(const json& a) {
    auto it = event_index.find(a.at("event").get<std::string>());
    if (it == event_index.end() || it->second >= run.report["events"].size()) return nullptr;
    return &run.report["events"][it->second];
  }

  bool compare_size(const json& a, std::size_t actual, std::string& detail) {
    if (a.contains("equals")) {
      auto want = a.at("equals").get<std::size_t>();
      detail += "expected " + std::to_string(want) + ", got " + std::to_string(actual);
      return actual == want;
    }
    auto want = a.at("at_least").get<std::size_t>();
    detail += "expected at least " + std::to_string(want) + ", got " + std::to_string(actual);
    return actual >= want;
  }

  bool check(const json& a, std::string& detail) {
    auto kind = a.at("kind").get<std::string>();
    if (kind == "fibre-size" || kind == "morphism-count") {
      const Store* store = stage_of(a, "stage");
      if (!store) return detail = "stage not reached", false;
      const auto& p = speaker(*store, a.at("speaker"));
      if (kind == "fibre-size") {
        auto object = a.at("object").get<std::string>();
        auto x = p.language().find_object(object);
        if (!x) return detail = "'" + object + "' is not in the language of " + p.name(), false;
        detail = "fibre of " + p.name() + " over " + object + ": ";
        return compare_size(a, p.fibre(*x).size(), detail);
      }
      std::size_t count = 0;
      bool skip_identities = a.value("non_identity", false);
      for (Index m = 0; m < p.language().morphism_count(); ++m) {
        if (!skip_identities || !p.language().is_identity(m)) ++count;
      }
      detail = "morphisms in the language of " + p.name() + ": ";
      return compare_size(a, count, detail);
    }
    if (kind == "iso" || kind == "unchanged") {
      const Store* here = stage_of(a, kind == "iso" ? "stage" : "against");
      const Store* there = stage_of(a, kind == "iso" ? "other_stage" : "stage");
      if (!here || !there) return detail = "stage not reached", false;
      const auto& p = speaker(*here, a.at("speaker"));
      const auto& q = speaker(*there, a.value("other", a.at("speaker").get<std::string>()));
      if (kind == "unchanged") {
        detail = p.name() + (p == q ? " unchanged" : " changed");
        return p == q;
      }
      if (!(p.language() == q.language())) return detail = "languages differ", false;
      bool iso = fibration_iso(p.fibration(), q.fibration()).has_value();
      detail = iso ? "isomorphic over the language" : "no isomorphism over the language";
      return iso;
    }
    const json* entry = event_entry(a);
    if (!entry) return detail = "event did not run", false;
    if (kind == "report") {
      json::json_pointer ptr(a.at("pointer").get<std::string>());
      if (!entry->contains(ptr)) return detail = "no value at " + ptr.to_string(), false;
      const auto& got = entry->at(ptr);
      detail = ptr.to_string() + " = " + got.dump();
      return got == a.at("equals");
    }
    if (kind == "explanation") {
      if (!entry->contains("check")) return detail = "event is not an explanation check", false;
      const auto& c = entry->at("check");
      bool ok = true;
      for (const char* flag : {"valid", "exact", "vacuous"}) {
        if (!a.contains(flag)) continue;
        bool got = c.at(flag).get<bool>();
        detail += std::string(detail.empty() ? "" : ", ") + flag + "=" + (got ? "true" : "false");
        ok = ok && got == a.at(flag).get<bool>();
      }
      if (a.contains("apex_size")) {
        auto got = c.at("apex_size").get<std::size_t>();
        detail += std::string(detail.empty() ? "" : ", ") + "apex_size=" + std::to_string(got);
        ok = ok && got == a.at("apex_size").get<std::size_t>();
      }
      return ok;
    }
    if (kind == "apex-size") {
      const json& apex = entry->contains("check") ? entry->at("check").at("apex") : entry->at("report").at("apex");
      detail = "apex size: ";
      return compare_size(a, apex.size(), detail);
    }
    if (!entry->contains("report")) return detail = "event is not an acquisition", false;
    const auto& r = entry->at("report");
    if (kind == "outcome") {
      auto got = r.at("outcome").get<std::string>();
      detail = "outcome " + got;
      return got == a.at("equals").get<std::string>();
    }
    detail = "new morphisms: ";
    return compare_size(a, r.at("new_morphisms").size(), detail);
  }

  void go() {
    Store store = s.speakers();
    run.stages.push_back(store);
    run.report["scenario"] = s.name();
    run.report["events"] = json::array();
    for (std::size_t i = 0; i < s.events().size(); ++i) {
      const auto& id = s.event_ids()[i];
      event_index.emplace(id, i);
      try {
        run.report["events"].push_back(execute(s.events()[i], id, store));
      } catch (const Error& e) {
        run.report["events"].push_back({{"id", id},
                                        {"kind", s.events()[i].at("kind")},
                                        {"error", {{"code", std::string(to_string(e.code()))}, {"message", e.message()}}}});
        run.failure = "event " + id + " failed: " + e.what();
        break;
      }
      run.stages.push_back(store);
    }

    run.report["assertions"] = json::array();
    if (!run.failure) {
      for (std::size_t i = 0; i < s.assertions().size(); ++i) {
        const auto& a = s.assertions()[i];
        std::string label = a.value("name", a.at("kind").get<std::string>());
        std::string detail;
        bool ok = false;
        try {
          ok = check(a, detail);
        } catch (const std::exception& e) {
          detail = e.what();
        }
        run.report["assertions"].push_back({{"index", i}, {"name", label}, {"passed", ok}, {"detail", detail}});
        if (!ok && !run.failure) run.failure = "assertion " + std::to_string(i) + " (" + label + ") failed: " + detail;
      }
    }

    json speakers = json::object();
    for (const auto& [name, p] : run.stages.back()) speakers[name] = io::to_json(p);
    run.report["speakers"] = std::move(speakers);
    run.passed = !run.failure;
    run.report["passed"] = run.passed;
    run.report["failure"] = run.failure ? json(*run.failure) : json(nullptr);
  }
};

const Store& store_at(const ScenarioRun& run, const Scenario& s, std::optional<std::size_t> stage) {
  std::size_t k = stage.value_or(s.events().size());
  if (k >= run.stages.size()) {
    throw Error(ErrorCode::ReferenceError, "stage " + std::to_string(k) + " is not available" +
                                               (run.failure ? " (" + *run.failure + ")" : std::string()));
  }
  return run.stages[k];
}

const Speaker& speaker_in(const Store& store, const std::string& name) {
  auto it = store.find(name);
  if (it == store.end()) throw Error(ErrorCode::ReferenceError, "no speaker '" + name + "' at that stage");
  return it->second;
}

}  // namespace

ScenarioRun run_scenario(const Scenario& s, const RunOptions& options) {
  Runner r{s, options, {}, {}};
  r.go();
  return std::move(r.run);
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

json validate_scenario(const Scenario& s) {
  json speakers = json::object();
  for (const auto& [name, p] : s.speakers()) {
    json fibres = json::object();
    for (Index x = 0; x < p.language().object_count(); ++x) fibres[p.language().object_id(x)] = p.fibre(x).size();
    speakers[name] = {{"objects", p.language().object_count()},
                      {"morphisms", p.language().morphism_count()},
                      {"fibres", std::move(fibres)}};
  }
  json categories = json::object();
  for (const auto& [name, c] : s.categories()) {
    categories[name] = {{"objects", c->object_count()}, {"morphisms", c->morphism_count()}};
  }
  return {{"scenario", s.name()},
          {"valid", true},
          {"categories", std::move(categories)},
          {"speakers", std::move(speakers)},
          {"explanations", s.explanations().size()},
          {"events", s.event_ids()},
          {"assertions", s.assertions().size()}};
}

std::string export_dot(const Scenario& s, const std::string& speaker, DotView view,
                       std::optional<std::size_t> stage, const RunOptions& options) {
  auto run = run_scenario(s, options);
  const auto& p = speaker_in(store_at(run, s, stage), speaker);
  return view == DotView::Language ? language_dot(p) : total_dot(p);
}

json explain(const Scenario& s, const std::string& speaker, const std::string& explanation,
             std::optional<std::size_t> stage, const RunOptions& options) {
  if (!s.explanations().contains(explanation)) {
    throw Error(ErrorCode::ReferenceError, "undeclared explanation '" + explanation + "'");
  }
  auto run = run_scenario(s, options);
  const auto& store = store_at(run, s, stage);
  const auto& p = speaker_in(store, speaker);
  auto check = validate_explanation(p, s.explanation(explanation, p, store));
  json out = io::to_json(check);
  out["speaker"] = speaker;
  out["explanation"] = explanation;
  return out;
}

}  // namespace fiblang
