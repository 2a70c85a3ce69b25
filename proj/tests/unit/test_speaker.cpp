#include "helpers.hpp"

#include "fiblang/speaker.hpp"

using namespace fx;

namespace {

CategoryPtr words(std::vector<std::string> objects, json morphisms = json::array()) {
  return share(category({{"objects", objects}, {"morphisms", morphisms}}));
}

/// Discrete shape on `names`, sent to the language objects of the same names.
Explanation discrete_explanation(const Speaker& s, const std::vector<std::string>& names, const std::string& target,
                                 std::optional<std::map<std::string, std::string>> embedding = std::nullopt) {
  auto shape = share(discrete_category(names));
  CatFunctor d{shape, s.language_ptr(), {}, {}};
  for (const auto& n : names) {
    Index l = s.language().object_index(n);
    d.object_map.push_back(l);
    d.morphism_map.push_back(s.language().identity(l));
  }
  return Explanation{d, s.language().object_index(target), std::move(embedding)};
}

std::vector<std::string> fibre_of(const Speaker& s, const std::string& l) { return sorted(s.fibre(l)); }

}  // namespace

TEST_SUITE("speaker") {

TEST_CASE("explanations of a product") {
  auto lang = words({"cat", "evil", "black", "feline"});
  auto narrator = speaker("n", lang,
                          {{"evil", {"e1", "e2"}}, {"black", {"b1"}}, {"feline", {"f1", "f2"}},
                           {"cat", {"c11", "c12", "c21", "c22"}}});
  std::map<std::string, std::string> embed{{"(b1,e1,f1)", "c11"}, {"(b1,e1,f2)", "c12"},
                                           {"(b1,e2,f1)", "c21"}, {"(b1,e2,f2)", "c22"}};
  auto e = discrete_explanation(narrator, {"evil", "black", "feline"}, "cat", embed);
  auto check = validate_explanation(narrator, e);
  CHECK(check.valid);
  CHECK(check.exact);
  CHECK_FALSE(check.vacuous);
  CHECK(check.limit.size() == 4);

  auto more = speaker("m", lang,
                      {{"evil", {"e1", "e2"}}, {"black", {"b1"}}, {"feline", {"f1", "f2"}},
                       {"cat", {"c11", "c12", "c21", "c22", "c33"}}});
  auto loose = validate_explanation(more, discrete_explanation(more, {"evil", "black", "feline"}, "cat", embed));
  CHECK(loose.valid);
  CHECK_FALSE(loose.exact);

  auto missing = embed;
  missing.erase("(b1,e2,f2)");
  auto partial = validate_explanation(narrator, discrete_explanation(narrator, {"evil", "black", "feline"}, "cat", missing));
  CHECK_FALSE(partial.valid);
  CHECK_FALSE(partial.problems.empty());
}

TEST_CASE("an empty factor makes the explanation vacuous but valid") {
  auto lang = words({"cat", "evil", "black"});
  auto s = speaker("s", lang, {{"evil", {"e1"}}, {"cat", {"c"}}});
  auto check = validate_explanation(s, discrete_explanation(s, {"evil", "black"}, "cat"));
  CHECK(check.valid);
  CHECK(check.vacuous);
  CHECK(check.limit.size() == 0);
}

TEST_CASE("a diagram in another language is refused") {
  auto s = speaker("s", words({"cat"}), {{"cat", {"c"}}});
  auto other = speaker("t", words({"cat", "dog"}), {{"cat", {"c"}}});
  auto e = tautological_explanation(other, 0);
  CHECK(code_of([&] { validate_explanation(s, e); }) == ErrorCode::DiagramOutsideLanguage);
}

TEST_CASE("tautological explanations are exact") {
  auto lang = words({"a", "b", "c"});
  auto s = speaker("s", lang, {{"a", {"x"}}, {"c", {"1", "2", "3", "4", "5"}}});
  auto one = validate_explanation(s, tautological_explanation(s, 0));
  CHECK(one.exact);
  CHECK(one.limit.ids == std::vector<std::string>{"(x)"});
  auto none = validate_explanation(s, tautological_explanation(s, 1));
  CHECK(none.exact);
  CHECK(none.vacuous);
  auto five = validate_explanation(s, tautological_explanation(s, 2));
  CHECK(five.exact);
  CHECK(five.limit.size() == 5);
}

TEST_CASE("look, a cat") {
  auto lang = words({"cat", "dog", "animal"}, json::array({{{"id", "dog-is-animal"}, {"src", "dog"}, {"tgt", "animal"}}}));
  auto bob = speaker("bob", lang, {{"dog", {"rex"}}, {"animal", {"rex", "tom"}}}, {{"dog-is-animal", {{"rex", "rex"}, {"tom", "rex"}}}});
  auto r = acquire_by_example(bob, lang->object_index("cat"), {"felix"});
  CHECK(r.speaker.fibre("cat") == std::vector<std::string>{"felix"});
  CHECK(fibre_of(r.speaker, "dog") == fibre_of(bob, "dog"));
  CHECK(fibre_of(r.speaker, "animal") == fibre_of(bob, "animal"));
  CHECK(r.report.fibres.at("cat").before == 0);
  CHECK(r.report.fibres.at("cat").after == 1);

  auto two = acquire_by_example(bob, lang->object_index("cat"), {"s1", "s2"});
  CHECK(fibre_of(two.speaker, "cat") == std::vector<std::string>{"s1", "s2"});
  CHECK(is_discrete_fibration(two.speaker.fibration().projection()).is_fibration);
}

TEST_CASE("an example propagates along the morphisms out of its object") {
  auto lang = words({"dog", "animal"}, json::array({{{"id", "dog-is-animal"}, {"src", "dog"}, {"tgt", "animal"}}}));
  auto learner = speaker("l", lang, json::object());
  auto r = acquire_by_example(learner, lang->object_index("animal"), {"rex"});
  CHECK(r.speaker.fibre("animal") == std::vector<std::string>{"rex"});
  REQUIRE(r.speaker.fibre("dog").size() == 1);
  auto r2 = acquire_by_example(learner, lang->object_index("dog"), {"fido"});
  CHECK(r2.speaker.fibre("dog") == std::vector<std::string>{"fido"});
  CHECK(r2.speaker.fibre("animal").empty());
}

TEST_CASE("acquisition by example errors") {
  auto lang = words({"cat", "dog"});
  auto alice = speaker("alice", lang, {{"cat", {"felix", "tom"}}});
  auto bob = speaker("bob", lang, json::object());
  Index cat = lang->object_index("cat");
  CHECK(code_of([&] { acquire_by_example(alice, cat, {"x"}); }) == ErrorCode::FibreNotEmpty);
  CHECK(code_of([&] { acquire_by_example(bob, cat, {}); }) == ErrorCode::EmptyExample);
  CHECK(code_of([&] { acquire_by_example(bob, cat, {"x"}, &alice); }) == ErrorCode::ExampleNotInTeacherFibre);
  CHECK(acquire_by_example(bob, cat, {"felix"}, &alice).speaker.fibre("cat").size() == 1);
  auto stranger = speaker("s", words({"cat"}), json::object());
  CHECK(code_of([&] { acquire_by_example(bob, cat, {"felix"}, &stranger); }) == ErrorCode::LanguageMismatch);
}

TEST_CASE("merged acquisition") {
  auto lang = words({"cat", "dog"});
  Index cat = lang->object_index("cat");
  auto empty = speaker("e", lang, {{"dog", {"rex"}}});
  auto plain = acquire_by_example(empty, cat, {"a", "b"});
  auto merged = acquire_by_example_merged(empty, cat, {"a", "b"}, {});
  CHECK(merged.speaker == plain.speaker);

  auto one = speaker("o", lang, {{"cat", {"x"}}});
  auto same = acquire_by_example_merged(one, cat, {"s"}, {{"x", "s"}});
  CHECK(same.speaker.fibre("cat").size() == 1);
  auto grown = acquire_by_example_merged(one, cat, {"s", "t"}, {{"x", "s"}});
  CHECK(grown.speaker.fibre("cat").size() == 2);

  CHECK(code_of([&] { acquire_by_example_merged(one, cat, {"s"}, {}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { acquire_by_example_merged(one, cat, {"s"}, {{"x", "nope"}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { acquire_by_example_merged(one, cat, {}, {}); }) == ErrorCode::EmptyExample);
}

TEST_CASE("adopting a cat by paraphrasis") {
  auto lang = words({"cat", "feline", "black", "cursed"});
  json shared = {{"feline", {"tiger", "lynx"}}, {"black", {"noir"}}, {"cursed", {"curse"}}};
  json with_cat = shared;
  with_cat["cat"] = {"(noir,curse,lynx)", "(noir,curse,tiger)"};
  auto alice = speaker("alice", lang, with_cat);
  auto bob = speaker("bob", lang, shared);
  Index cat = lang->object_index("cat");
  auto e = discrete_explanation(alice, {"black", "cursed", "feline"}, "cat");
  REQUIRE(validate_explanation(alice, e).exact);

  auto r = acquire_by_paraphrasis(alice, bob, cat, e);
  const auto& after = r.speaker;
  CHECK(r.report.outcome == Outcome::Learned);
  CHECK(after.fibre("cat").size() == 2);
  CHECK(r.report.new_morphisms.size() == 3);
  CHECK(after.learned_morphisms().size() == 3);
  CHECK(r.report.restriction_matches_prior == true);
  for (const auto& x : {"feline", "black", "cursed"}) CHECK(fibre_of(after, x) == fibre_of(bob, x));

  // Each new morphism X -> cat acts as the projection of the apex onto X.
  auto cone = set_limit(pullback_opposite(bob.meaning(), e.diagram));
  const auto& l2 = after.language();
  for (const auto& nm : r.report.new_morphisms) {
    CHECK(nm.tgt == "cat");
    CHECK(nm.edges.size() == 1);
    Index m = l2.morphism_index(nm.id);
    Index shape_obj = e.shape().object_index(nm.src);
    auto leg = cone.leg(shape_obj);
    const auto& action = after.meaning().actions[m];
    REQUIRE(action.size() == leg.size());
    for (Index i = 0; i < leg.size(); ++i)
      CHECK(after.fibre(nm.src)[action[i]] == bob.fibre(nm.src)[leg[i]]);
  }
  CHECK(validate_category(l2).empty());
}

TEST_CASE("a bare word makes no sense") {
  auto lang = words({"cat", "feline"});
  auto alice = speaker("alice", lang, {{"cat", {"salem"}}});
  auto carol = speaker("carol", lang, {{"feline", {"ocelot"}}});
  Index cat = lang->object_index("cat");
  auto r = acquire_by_paraphrasis(alice, carol, cat, tautological_explanation(alice, cat));
  CHECK(r.report.outcome == Outcome::NoSense);
  CHECK(r.speaker == carol);
  CHECK(r.report.new_morphisms.empty());
}

TEST_CASE("paraphrasis errors and overrides") {
  auto lang = words({"cat", "feline"}, json::array({{{"id", "kind"}, {"src", "feline"}, {"tgt", "cat"}}}));
  Index cat = lang->object_index("cat");
  auto alice = speaker("alice", lang, {{"feline", {"tiger", "lynx"}}, {"cat", {"(lynx)", "(tiger)"}}},
                       {{"kind", {{"(lynx)", "lynx"}, {"(tiger)", "tiger"}}}});
  auto bob = speaker("bob", lang, {{"feline", {"tiger", "lynx"}}});
  auto e = discrete_explanation(alice, {"feline"}, "cat");
  REQUIRE(validate_explanation(alice, e).exact);

  CHECK(code_of([&] { acquire_by_paraphrasis(alice, bob, cat, e); }) == ErrorCode::UnforcedActionAtL);

  ParaphrasisOptions ok;
  ok.edge_overrides["kind"] = {{"(lynx)", "lynx"}, {"(tiger)", "tiger"}};
  auto r = acquire_by_paraphrasis(alice, bob, cat, e, ok);
  CHECK(r.speaker.fibre("cat").size() == 2);

  ParaphrasisOptions bad;
  bad.edge_overrides["kind"] = {{"(lynx)", "puma"}, {"(tiger)", "tiger"}};
  CHECK(code_of([&] { acquire_by_paraphrasis(alice, bob, cat, e, bad); }) == ErrorCode::InvalidOverride);

  CHECK(code_of([&] { acquire_by_paraphrasis(alice, alice, cat, e, ok); }) == ErrorCode::FibreNotEmpty);
  auto other = speaker("o", words({"cat", "feline"}), json::object());
  CHECK(code_of([&] { acquire_by_paraphrasis(other, bob, cat, e); }) == ErrorCode::LanguageMismatch);
  auto mute = speaker("mute", lang, {{"feline", {"tiger"}}});
  CHECK(code_of([&] { acquire_by_paraphrasis(mute, bob, cat, e, ok); }) == ErrorCode::InvalidExplanation);
}

TEST_CASE("prefixes apply to synthesized ids") {
  auto lang = words({"cat", "feline"});
  auto alice = speaker("alice", lang, {{"feline", {"lynx"}}, {"cat", {"(lynx)"}}});
  auto bob = speaker("bob", lang, {{"feline", {"lynx"}}});
  Index cat = lang->object_index("cat");
  ParaphrasisOptions opts;
  opts.id_prefix = "ev/";
  auto r = acquire_by_paraphrasis(alice, bob, cat, discrete_explanation(alice, {"feline"}, "cat"), opts);
  CHECK(r.speaker.fibre("cat") == std::vector<std::string>{"ev/(lynx)"});
  CHECK(r.speaker.fibre("feline") == std::vector<std::string>{"lynx"});
}

}  // TEST_SUITE
