#pragma once

// Small fixtures shared by the unit suites.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "fiblang/error.hpp"
#include "fiblang/fincat.hpp"
#include "fiblang/json_io.hpp"
#include "fiblang/speaker.hpp"

namespace fx {

using namespace fiblang;
using nlohmann::json;

/// A -f-> B.
inline FinCategory arrow_category() {
  FinCategory c;
  c.add_object_with_identity("A");
  c.add_object_with_identity("B");
  c.add_morphism("f", 0, 1);
  c.fill_identity_composites();
  return c;
}

/// A -f-> B -g-> C with gf.
inline FinCategory chain3() {
  FinCategory c;
  for (auto x : {"A", "B", "C"}) c.add_object_with_identity(x);
  Index f = c.add_morphism("f", 0, 1);
  Index g = c.add_morphism("g", 1, 2);
  Index gf = c.add_morphism("gf", 0, 2);
  c.fill_identity_composites();
  c.set_composite(g, f, gf);
  return c;
}

/// Category from the shorthand JSON accepted by scenario files.
inline FinCategory category(const json& j) { return io::category_from_json(j); }

inline Speaker speaker(const std::string& name, const CategoryPtr& lang, const json& fibres,
                       const json& actions = json::object()) {
  return Speaker(name, lang, io::presheaf_from_tables(lang, fibres, actions));
}

inline ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no fiblang::Error thrown");
  return ErrorCode::InvalidArgument;
}

inline std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace fx
