#pragma once

// Declarative scenarios: categories (explicit or generated from a pregroup
// lexicon), speakers, explanations, an ordered list of acquisition events
// and assertions over the resulting speakers and event reports.
//
// Errors in the file itself (syntax, unknown references, invalid
// declarations) surface as fiblang::Error with ParseError or
// ReferenceError and map to exit code 2; failures while running events
// or assertions map to exit code 1.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fiblang/speaker.hpp"

namespace fiblang {

class Scenario {
 public:
  /// ParseError carries line:col of the offending byte.
  static Scenario from_file(const std::filesystem::path& path);
  static Scenario from_text(const std::string& text, const std::string& origin = "<scenario>");
  /// Builds categories and speakers and checks every reference.
  static Scenario from_json(const nlohmann::json& j);

  const std::string& name() const { return name_; }
  const std::map<std::string, CategoryPtr>& categories() const { return categories_; }
  /// Declared speakers, i.e. stage 0.
  const std::map<std::string, Speaker>& speakers() const { return speakers_; }
  const std::map<std::string, nlohmann::json>& explanations() const { return explanations_; }
  const std::vector<nlohmann::json>& events() const { return events_; }
  const std::vector<std::string>& event_ids() const { return event_ids_; }
  const std::vector<nlohmann::json>& assertions() const { return assertions_; }

  /// Resolves a declared explanation in the language of the speaker who
  /// utters it; tautological ones are built from their named speaker in
  /// `store`.
  Explanation explanation(const std::string& name, const Speaker& utterer,
                          const std::map<std::string, Speaker>& store) const;

 private:
  std::string name_;
  std::map<std::string, CategoryPtr> categories_;
  std::map<std::string, Speaker> speakers_;
  std::map<std::string, nlohmann::json> explanations_;
  std::vector<nlohmann::json> events_;
  std::vector<std::string> event_ids_;
  std::vector<nlohmann::json> assertions_;
};

struct RunOptions {
  /// Edge-count bound handed to every paraphrasis without its own.
  std::optional<std::size_t> bound;
};

struct ScenarioRun {
  nlohmann::json report;
  /// stages[k] is the speaker store after k events.
  std::vector<std::map<std::string, Speaker>> stages;
  bool passed = false;
  std::optional<std::string> failure;
  int exit_code() const { return passed ? 0 : 1; }
};

ScenarioRun run_scenario(const Scenario& s, const RunOptions& options = {});

/// Canonical text of a report: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const nlohmann::json& j);

/// Summary of the structural checks (all of which already ran on load).
nlohmann::json validate_scenario(const Scenario& s);

enum class DotView { Language, Total };

/// Stage k = after k events; nullopt = after all events. Stages beyond an
/// event failure are unavailable (ReferenceError).
std::string export_dot(const Scenario& s, const std::string& speaker, DotView view,
                       std::optional<std::size_t> stage = std::nullopt, const RunOptions& options = {});

/// validate_explanation of a declared explanation against a speaker at a stage.
nlohmann::json explain(const Scenario& s, const std::string& speaker, const std::string& explanation,
                       std::optional<std::size_t> stage = std::nullopt, const RunOptions& options = {});

}  // namespace fiblang
