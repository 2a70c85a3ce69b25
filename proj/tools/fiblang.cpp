// fiblang: run, validate and inspect scenario files.
//
// Exit codes: 0 pass, 1 assertion or event failure, 2 bad input.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fiblang/error.hpp"
#include "fiblang/scenario.hpp"

namespace {

int write_out(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return 2;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speakers, explanations and vocabulary acquisition over finite categories"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string report_path;
  std::size_t bound = 0;
  std::optional<std::size_t> stage;
  std::string speaker;
  std::string explanation;
  std::string view = "language";

  auto* run = app.add_subcommand("run", "execute events and assertions, print the JSON report");
  auto* validate = app.add_subcommand("validate", "check a scenario without running events");
  auto* dot = app.add_subcommand("export-dot", "print a speaker's language or total category as DOT");
  auto* explain = app.add_subcommand("explain", "validate an explanation against a speaker");

  for (auto* sub : {run, validate, dot, explain}) {
    sub->add_option("scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--report", report_path, "write output here instead of stdout");
  }
  for (auto* sub : {run, dot, explain}) {
    sub->add_option("--bound", bound, "edge-count bound for infinite collages");
  }
  for (auto* sub : {dot, explain}) {
    sub->add_option("--stage", stage, "state after this many events (default: all)");
    sub->add_option("--speaker", speaker, "speaker name")->required();
  }
  dot->add_option("--view", view, "language or total")->check(CLI::IsMember({"language", "total"}));
  explain->add_option("--explanation", explanation, "declared explanation name")->required();

  CLI11_PARSE(app, argc, argv);

  fiblang::RunOptions options;
  if (bound > 0) options.bound = bound;

  std::optional<fiblang::Scenario> scenario;
  try {
    scenario = fiblang::Scenario::from_file(scenario_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*run) {
      auto result = fiblang::run_scenario(*scenario, options);
      if (int rc = write_out(fiblang::canonical_dump(result.report), report_path)) return rc;
      if (result.failure) std::cerr << "FAIL: " << *result.failure << "\n";
      return result.exit_code();
    }
    if (*validate) return write_out(fiblang::canonical_dump(fiblang::validate_scenario(*scenario)), report_path);
    if (*dot) {
      auto v = view == "total" ? fiblang::DotView::Total : fiblang::DotView::Language;
      return write_out(fiblang::export_dot(*scenario, speaker, v, stage, options), report_path);
    }
    auto out = fiblang::explain(*scenario, speaker, explanation, stage, options);
    return write_out(fiblang::canonical_dump(out), report_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
