#include <set>

#include "helpers.hpp"

using namespace fx;

TEST_SUITE("fincat") {

TEST_CASE("terminal category satisfies every law") {
  CHECK(validate_category(terminal_category()).empty());
}

TEST_CASE("chain with composite is a category") {
  CHECK(validate_category(chain3()).empty());
}

TEST_CASE("one corrupted composite gives exactly one associativity violation") {
  FinCategory c;
  for (auto x : {"A", "B", "C", "D"}) c.add_object_with_identity(x);
  Index f = c.add_morphism("f", 0, 1);
  Index g = c.add_morphism("g", 1, 2);
  Index h = c.add_morphism("h", 2, 3);
  Index gf = c.add_morphism("gf", 0, 2);
  Index hg = c.add_morphism("hg", 1, 3);
  Index hgf = c.add_morphism("hgf", 0, 3);
  Index x = c.add_morphism("x", 0, 3);
  c.fill_identity_composites();
  c.set_composite(g, f, gf);
  c.set_composite(h, g, hg);
  c.set_composite(hg, f, hgf);
  c.set_composite(h, gf, hgf);
  REQUIRE(validate_category(c).empty());
  c.set_composite(h, gf, x);
  CHECK(validate_category(c).size() == 1);
}

TEST_CASE("missing identity is reported") {
  FinCategory c;
  c.add_object("A");
  CHECK_FALSE(validate_category(c).empty());
}

TEST_CASE("opposite") {
  std::vector<std::string> objs{"A", "B", "C"};
  auto d = discrete_category(objs);
  CHECK(opposite(d) == d);

  auto a = arrow_category();
  auto op = opposite(a);
  Index f = *op.find_morphism("f");
  CHECK(op.object_id(op.src(f)) == "B");
  CHECK(op.object_id(op.tgt(f)) == "A");
  CHECK(opposite(op) == a);

  auto c = chain3();
  auto cop = opposite(c);
  CHECK(validate_category(cop).empty());
  CHECK(cop.compose(*cop.find_morphism("f"), *cop.find_morphism("g")) == cop.find_morphism("gf"));
  CHECK(opposite(cop) == c);
}

TEST_CASE("discrete quivers") {
  std::vector<std::string> none;
  CHECK(discrete_quiver(none).vertices.empty());
  std::vector<std::string> ab{"A", "B"};
  auto q = discrete_quiver(ab);
  CHECK(q.vertices == ab);
  CHECK(q.edges.empty());
}

TEST_CASE("underlying quiver counts every morphism") {
  auto t = underlying_quiver(terminal_category());
  CHECK(t.vertices.size() == 1);
  CHECK(t.edges.size() == 1);
  auto a = underlying_quiver(arrow_category());
  CHECK(a.vertices.size() == 2);
  CHECK(a.edges.size() == 3);
  auto tri = underlying_quiver(chain3());
  CHECK(tri.vertices.size() == 3);
  CHECK(tri.edges.size() == 6);
}

TEST_CASE("free category") {
  Quiver one;
  one.vertices = {"A"};
  auto t = free_category(one);
  CHECK(t.object_count() == 1);
  CHECK(t.morphism_count() == 1);
  CHECK(validate_category(t).empty());

  Quiver q;
  q.vertices = {"A", "B", "C"};
  q.edges = {{"f", 0, 1, {}}, {"g", 1, 2, {}}};
  auto c = free_category(q);
  CHECK(c.object_count() == 3);
  CHECK(c.morphism_count() == 6);
  CHECK(validate_category(c).empty());
  CHECK(c.compose(*c.find_morphism("g"), *c.find_morphism("f")) == c.find_morphism("f;g"));

  Quiver loop;
  loop.vertices = {"A"};
  loop.edges = {{"l", 0, 0, {}}};
  CHECK(code_of([&] { free_category(loop); }) == ErrorCode::UnboundedHomSet);
  auto bounded = free_category(loop, 3);
  CHECK_FALSE(bounded.closed());
  CHECK(bounded.morphism_count() == 4);  // id, l, l;l, l;l;l
  CHECK(validate_category(bounded).size() == 1);
}

TEST_CASE("quiver pushout") {
  Quiver base;
  base.vertices = {"A", "B"};
  base.edges = {{"a", 0, 1, {}}, {"b", 1, 0, {}}, {"c", 0, 0, {}}};
  Quiver extra;
  extra.vertices = {"A", "B"};
  extra.edges = {{"x", 0, 1, {}}, {"y", 1, 1, {}}};
  auto p = quiver_pushout(base, extra);
  CHECK(p.edges.size() == 5);

  auto with_discrete = quiver_pushout(base, discrete_quiver(base.vertices));
  REQUIRE(with_discrete.edges.size() == base.edges.size());
  for (std::size_t i = 0; i < base.edges.size(); ++i) {
    CHECK(with_discrete.edges[i].id == base.edges[i].id);
    CHECK(with_discrete.edges[i].tag == "base");
  }

  auto swapped = quiver_pushout(extra, base);
  auto key = [](const Quiver& q, bool swap) {
    std::multiset<std::tuple<std::string, Index, Index, std::string>> out;
    for (const auto& e : q.edges) {
      std::string tag = e.tag;
      if (swap) tag = tag == "base" ? "extra" : "base";
      out.insert({e.id, e.src, e.tgt, tag});
    }
    return out;
  };
  CHECK(key(p, false) == key(swapped, true));

  Quiver other;
  other.vertices = {"A", "C"};
  CHECK(code_of([&] { quiver_pushout(base, other); }) == ErrorCode::VertexMismatch);
}

TEST_CASE("compose_path") {
  auto c = chain3();
  Index f = *c.find_morphism("f");
  Index g = *c.find_morphism("g");
  std::vector<Index> empty;
  CHECK(compose_path(c, empty, 0) == c.identity(0));
  std::vector<Index> just_f{f};
  CHECK(compose_path(c, just_f) == f);
  std::vector<Index> fg{f, g};
  CHECK(compose_path(c, fg) == *c.compose(g, f));
  std::vector<Index> gf{g, f};
  CHECK(code_of([&] { compose_path(c, gf); }) == ErrorCode::NotComposable);
}

TEST_CASE("comma categories") {
  auto t = share(terminal_category());
  auto id = identity_functor(t);
  auto comma = comma_category(0, id);
  CHECK(comma.category.object_count() == 1);
  CHECK(comma.category.morphism_count() == 1);

  auto empty = share(FinCategory{});
  CatFunctor from_empty{empty, t, {}, {}};
  auto none = comma_category(0, from_empty);
  CHECK(none.category.object_count() == 0);
  CHECK(none.category.morphism_count() == 0);

  // A discrete fibration with a fibre of size 2 over B: at least two (e, id_B) objects.
  auto lang = share(arrow_category());
  auto s = speaker("s", lang, {{"A", {"a"}}, {"B", {"b0", "b1"}}}, {{"f", {{"b0", "a"}, {"b1", "a"}}}});
  Index b = lang->object_index("B");
  auto over_b = comma_category(b, s.fibration().projection());
  std::size_t with_identity = 0;
  for (auto [d, f] : over_b.labels)
    if (f == lang->identity(b)) ++with_identity;
  CHECK(with_identity >= 2);
}

TEST_CASE("connected components") {
  std::vector<std::string> objs{"P", "Q", "R"};
  auto blocks = connected_components(discrete_category(objs));
  CHECK(blocks.size() == 3);
  CHECK(connected_components(arrow_category()).size() == 1);

  FinCategory c;
  for (auto x : {"A", "B", "C", "D"}) c.add_object_with_identity(x);
  c.add_morphism("ab", 0, 1);
  c.add_morphism("cb", 2, 1);
  c.fill_identity_composites();
  auto comps = connected_components(c);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<Index>{0, 1, 2});
  CHECK(comps[1] == std::vector<Index>{3});
}

TEST_CASE("set limits") {
  SetFunctor point{share(terminal_category()), {{"x", "y", "z"}}, {{0, 1, 2}}};
  CHECK(set_limit(point).size() == 3);

  std::vector<std::string> ab{"a", "b"};
  auto d = share(discrete_category(ab));
  SetFunctor product{d, {{"a1", "a2"}, {"b1", "b2", "b3"}}, {{0, 1}, {0, 1, 2}}};
  CHECK(set_limit(product).size() == 6);

  FinCategory cospan;
  for (auto x : {"a", "b", "c"}) cospan.add_object_with_identity(x);
  cospan.add_morphism("u", 0, 2);
  cospan.add_morphism("v", 1, 2);
  cospan.fill_identity_composites();
  SetFunctor pull{share(cospan), {{"x1", "x2"}, {"y1"}, {"z1", "z2"}}, {}};
  pull.actions = {{0, 1}, {0}, {0, 1}, {0, 1}, {0}};
  REQUIRE(validate_setfunctor(pull).empty());
  auto cone = set_limit(pull);
  REQUIRE(cone.size() == 1);
  CHECK(cone.ids[0] == "(x1,y1,z1)");

  SetFunctor empty{d, {{"a1"}, {}}, {{0}, {}}};
  CHECK(set_limit(empty).size() == 0);
}

TEST_CASE("natural isomorphisms") {
  auto a = share(arrow_category());
  SetFunctor f{a, {{"p", "q"}, {"r"}}, {{0, 1}, {0}, {0, 0}}};
  REQUIRE(validate_setfunctor(f).empty());
  auto self = natural_iso_check(f, f);
  REQUIRE(self);
  CHECK((*self)[0] == std::vector<Index>{0, 1});
  CHECK((*self)[1] == std::vector<Index>{0});

  SetFunctor smaller{a, {{"p"}, {"r"}}, {{0}, {0}, {0}}};
  CHECK_FALSE(natural_iso_check(f, smaller));

  SetFunctor one{a, {{"s"}, {"t"}}, {{0}, {0}, {0}}};
  CHECK(natural_iso_check(smaller, one));

  auto b = share(chain3());
  SetFunctor elsewhere{b, {{"x"}, {"y"}, {"z"}}, {{0}, {0}, {0}, {0}, {0}, {0}}};
  CHECK(code_of([&] { natural_iso_check(one, elsewhere); }) == ErrorCode::BaseMismatch);
}

TEST_CASE("functor validation and composition") {
  auto a = share(arrow_category());
  auto id = identity_functor(a);
  CHECK(validate_functor(id).empty());
  CHECK(compose_functors(id, id) == id);
  CatFunctor bad = id;
  bad.morphism_map[a->morphism_index("f")] = a->identity(0);
  CHECK_FALSE(validate_functor(bad).empty());
}

}  // TEST_SUITE
