#pragma once

#include <string>
#include <vector>

#include "porcheck/parser.hpp"

namespace porcheck {

struct GoldenResult {
  std::string name;
  bool ok = false;
  std::string detail;  // observed values, or the first mismatch
};

// Parses one embedded corpus file; throws std::out_of_range for unknown names.
Model corpus_model(const std::string& file);

// Challenge/response: the honest run reaches the success branch and the
// process is bounded-equivalent to itself with fewer reduced traces.
GoldenResult golden_challenge_response();
// Ghost pair: s1 and s2 are left-bad, s2 is not bad once ghosts are ignored.
GoldenResult golden_ghosts();
// Input domains: 2 successors with W = {w_{c,0}}, 4 with W = {w_{c,0}, w_{d,0}}.
GoldenResult golden_input_domains();
// Input/output commutation verdicts.
GoldenResult golden_commutation();
// Stubborn set {A0, A1, A2, A3}, persistent set of both root inputs, and the
// singleton variant with an extra output.
GoldenResult golden_stubborn();
// A3 falls asleep after A0 and is then blocked.
GoldenResult golden_sleep();
// Flawed BAC is not equivalent with the test w(c,1) = nonce_err; the fixed
// variant is bounded-equivalent.
GoldenResult golden_bac(bool fixed);
// Two parallel outputs give 1 reduced trace vs 2; private authentication has
// fewer reduced than naive traces.
GoldenResult golden_reduction_strength();

std::vector<GoldenResult> run_golden_suite();

}  // namespace porcheck
