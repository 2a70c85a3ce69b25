#pragma once

// Speakers of a language category and the ways they acquire vocabulary:
// by example, by example merged with prior meaning, and by paraphrasis of
// an explanation uttered by another speaker.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fiblang/collage.hpp"
#include "fiblang/fibration.hpp"
#include "fiblang/fincat.hpp"

namespace fiblang {

/// A language L with a meaning presheaf, stored as a SetFunctor on
/// opposite(L); fibration() is its category of elements.
class Speaker {
 public:
  /// Validates the meaning and builds the cached fibration.
  Speaker(std::string name, CategoryPtr language, SetFunctor meaning,
          std::set<std::string> learned_morphisms = {});

  const std::string& name() const { return name_; }
  const FinCategory& language() const { return *language_; }
  const CategoryPtr& language_ptr() const { return language_; }
  const SetFunctor& meaning() const { return meaning_; }
  const Fibration& fibration() const { return fibration_; }
  /// Language morphisms added by paraphrasis (not part of the original grammar).
  const std::set<std::string>& learned_morphisms() const { return learned_; }

  const std::vector<std::string>& fibre(Index object) const { return meaning_.values.at(object); }
  const std::vector<std::string>& fibre(std::string_view object) const {
    return fibre(language_->object_index(object));
  }

  Speaker renamed(std::string name) const;

  /// Structural equality of name, language, meaning and learned set.
  friend bool operator==(const Speaker& a, const Speaker& b);

 private:
  std::string name_;
  CategoryPtr language_;
  SetFunctor meaning_;
  Fibration fibration_;
  std::set<std::string> learned_;
};

/// A finite diagram A -> L explaining the object `target`. The embedding,
/// when present, names a fibre element for each limit tuple id.
struct Explanation {
  CatFunctor diagram;
  Index target = kNoIndex;
  std::optional<std::map<std::string, std::string>> embedding;

  const FinCategory& shape() const { return *diagram.dom; }
};

struct ExplanationCheck {
  bool valid = false;
  bool exact = false;
  bool vacuous = false;
  /// The limit of the meaning over A^op, i.e. meaning ∘ D^op.
  LimitCone limit;
  /// Fibre element assigned to each apex tuple (when an embedding exists).
  std::vector<std::string> embedded;
  std::vector<std::string> problems;
};

/// DiagramOutsideLanguage if the diagram does not land in p's language.
/// Without an explicit embedding, apex tuple ids are matched by name
/// against fibre(target).
ExplanationCheck validate_explanation(const Speaker& p, const Explanation& e);

/// Terminal shape picking `target`, embedding "(x)" |-> x.
Explanation tautological_explanation(const Speaker& p, Index target);

enum class Outcome { Learned, NoSense };
std::string_view to_string(Outcome o);

struct AcquisitionReport {
  struct FibreDelta {
    std::size_t before = 0;
    std::size_t after = 0;
  };
  struct NewMorphism {
    std::string id;
    std::string src;  // in the new language
    std::string tgt;
    std::vector<std::string> edges;  // Q-edges the word passes through
  };

  std::string learner;
  std::string target;
  Outcome outcome = Outcome::Learned;
  /// Keyed by object id; objects new to the language report before = 0.
  std::map<std::string, FibreDelta> fibres;
  std::vector<std::string> apex;
  /// One per cone leg: (edge id, L, leg target), in quiver orientation.
  std::vector<std::tuple<std::string, std::string, std::string>> quiver_edges;
  std::vector<NewMorphism> new_morphisms;
  /// Restriction of the new meaning along K equals the old one away from the target.
  std::optional<bool> restriction_matches_prior;
};

struct AcquisitionResult {
  Speaker speaker;
  AcquisitionReport report;
};

struct AcquisitionOptions {
  /// Prepended to element ids the engine synthesizes (limit tuples,
  /// components without a (d, id) witness).
  std::string id_prefix;
};

/// Fresh fibre over `target` from the example set. FibreNotEmpty,
/// EmptyExample, ExampleNotInTeacherFibre, LanguageMismatch.
AcquisitionResult acquire_by_example(const Speaker& learner, Index target,
                                     const std::vector<std::string>& examples,
                                     const Speaker* teacher = nullptr,
                                     const AcquisitionOptions& options = {});

/// Pushout of the learner's fibre over `target` with the example set
/// along `merge` (total on the current fibre, valued in the examples).
AcquisitionResult acquire_by_example_merged(const Speaker& learner, Index target,
                                            const std::vector<std::string>& examples,
                                            const std::map<std::string, std::string>& merge,
                                            const AcquisitionOptions& options = {});

struct ParaphrasisOptions : AcquisitionOptions {
  /// For each pre-existing language morphism X -> target (by id): a
  /// function from apex tuple ids (unprefixed) to elements of fibre(X).
  std::map<std::string, std::map<std::string, std::string>> edge_overrides;
  std::optional<std::size_t> bound;
};

/// The learner computes its own limit of the teacher's explanation; if it
/// is empty the outcome is NoSense and the learner is returned unchanged.
/// Otherwise the language becomes the opposite of opposite(L) ≀ Q with one
/// free edge per cone leg, and the meaning is the extension along the legs.
AcquisitionResult acquire_by_paraphrasis(const Speaker& teacher, const Speaker& learner,
                                         Index target, const Explanation& e,
                                         const ParaphrasisOptions& options = {});

}  // namespace fiblang
