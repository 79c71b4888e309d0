#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "porcheck/parser.hpp"
#include "porcheck/twin.hpp"

namespace porcheck {

struct RunConfig {
  std::uint32_t recipe_depth = 2;
  std::uint32_t max_trace_len = 6;
  bool por = true;
  bool collapse = true;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t state_budget = 2'000'000;
  std::size_t trace_budget = 5'000'000;
};

enum class Verdict { BoundedEquivalent, NotEquivalent, Inconclusive };
std::string verdict_name(Verdict v);
std::optional<Verdict> verdict_from_name(const std::string& s);
int exit_code(Verdict v);

struct Report {
  std::string file;
  std::string query;  // "equiv" or "include"
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;  // why a run was inconclusive

  std::vector<std::string> witness;  // observable actions
  std::string witness_side;          // side holding the unmatched frame
  std::string offender_frame;
  std::vector<std::string> target_frames;
  std::string distinguishing_m;  // recipe pair separating offender and first target
  std::string distinguishing_n;

  std::optional<std::size_t> naive_trace_count;
  std::optional<std::size_t> por_trace_count;
  std::optional<double> reduction_ratio;  // naive / por
  bool complete = true;                   // no execution was cut by max_trace_len
  std::size_t states_visited = 0;
  double millis = 0;

  bool por = true;
  bool collapse = true;
  std::uint32_t recipe_depth = 0;
  std::uint32_t max_trace_len = 0;
  std::uint64_t seed = 0;

  // Not serialized: the witness as actions, for replay.
  ConcreteTrace witness_trace;
};

Report run_check(const Model& model, const RunConfig& cfg, const std::string& file = "");
// Throws ParseError for malformed input and std::runtime_error for I/O.
Report cmd_check(const std::string& path, const RunConfig& cfg);

// One line per symbolic trace; por selects sleep-set traces over naive ones.
std::vector<std::string> trace_listing(const Model& model, const RunConfig& cfg, bool por);

// Replays the witness from the initial twin state and checks the end state is bad.
bool replay_witness(const Model& model, const Report& r);

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);
std::string csv_header();
std::string csv_row(const Report& r);
std::string format_text(const Report& r);

}  // namespace porcheck
