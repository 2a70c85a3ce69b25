#pragma once

// JSON (de)serialization. Writers emit the canonical form: identifiers as
// strings, composition as an explicit (g, f, g∘f) triple list, Set-functor
// actions as explicit graphs, object keys sorted. Readers accept the
// canonical form and, for hand-authored files, a shorthand where identity
// morphisms and their composites may be omitted.

#include <json.hpp>

#include "fiblang/collage.hpp"
#include "fiblang/fibration.hpp"
#include "fiblang/fincat.hpp"
#include "fiblang/pregroup.hpp"
#include "fiblang/speaker.hpp"

namespace fiblang::io {

using nlohmann::json;

json to_json(const FinCategory& c);
FinCategory category_from_json(const json& j);

json to_json(const Quiver& q);
Quiver quiver_from_json(const json& j);

/// Embeds domain and codomain.
json to_json(const CatFunctor& f);
CatFunctor functor_from_json(const json& j);

json to_json(const SetFunctor& f);
SetFunctor setfunctor_from_json(const json& j);

/// A fibration is stored as its projection; the lift table is rebuilt and
/// checked on load (NotAFibration).
json to_json(const Fibration& p);
Fibration fibration_from_json(const json& j);

json to_json(const LimitCone& cone, const SetFunctor& diagram);

/// Alternating [{"base": id}, {"edge": id}, ...].
json to_json(const CollageCategory& collage, const Word& w);
Word word_from_json(const CollageCategory& collage, const json& j);

/// Presheaf tables over `language`: "fibres" maps objects to element
/// lists, "actions" maps a morphism f : A -> B to its graph fibre(B) ->
/// fibre(A). Identity actions and actions of composites that can be
/// derived from their factors may be omitted.
SetFunctor presheaf_from_tables(const CategoryPtr& language, const json& fibres, const json& actions);

json to_json(const Speaker& s);
Speaker speaker_from_json(const json& j);

json to_json(const ExplanationCheck& check);
json to_json(const AcquisitionReport& report);

pregroup::Lexicon lexicon_from_json(const json& j);

}  // namespace fiblang::io
