#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "porcheck/check.hpp"
#include "porcheck/kernel.hpp"
#include "porcheck/por.hpp"

namespace porcheck {

// Tally of one property over many cases; keeps the first failure for reports.
struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0 && cases > 0; }
  void pass() { ++cases; }
  void fail(const std::string& why);
  // Adds the counts of another result into this one.
  void merge(const SuiteResult& other);
};

// ---------------------------------------------------------------- generators

enum class RandomTheory { EncDecHash, HashInverse };

struct ProtocolParams {
  RandomTheory theory = RandomTheory::EncDecHash;
  std::uint32_t max_prefixes = 6;  // per side
  std::uint32_t max_inputs = 2;    // per side
  double mutate = 0.5;             // chance that the right side differs from the left
};

// A DSL model text over channels c, d, constants a, b and names n, m with a
// query `equiv L R`.
std::string random_protocol(std::uint64_t seed, const ProtocolParams& p = {});
// Recipe depth used with each random theory: 1 for enc/dec/h, 2 for h/f/g.
std::uint32_t random_protocol_depth(RandomTheory t);
// The params of the i-th pair of a suite: alternating theories.
ProtocolParams suite_params(std::uint64_t i);

// Random closed term over the theory's signature and the given atoms.
Term random_term(std::uint64_t seed, const Theory& th, const std::vector<Term>& atoms,
                 std::uint32_t depth);

// ---------------------------------------------------------------- reduction

struct ReductionOutcome {
  bool naive_bad = false;
  bool por_bad = false;             // collapse on
  bool por_bad_no_collapse = false;
  bool naive_left_bad = false;
  bool por_left_bad = false;
  std::size_t naive_traces = 0;
  std::size_t por_traces = 0;
  std::size_t por_traces_no_collapse = 0;
  bool complete = true;
  bool budget_exceeded = false;

  bool agree() const {
    return naive_bad == por_bad && por_bad == por_bad_no_collapse &&
           naive_left_bad == por_left_bad;
  }
};

// Naive twin exploration against sleep-set-restricted exploration, with and
// without collapse, at the given bounds.
ReductionOutcome compare_reduction(const Model& m, std::uint32_t depth, std::uint32_t maxlen,
                                   const CollapseOptions& copts = {});

// Verdicts of run_check across {por on/off} × {collapse on/off}; fails on any
// disagreement or a witness that does not replay.
void check_verdict_invariance(const Model& m, const RunConfig& cfg, const std::string& label,
                              SuiteResult& out);

// ---------------------------------------------------------------- properties

SuiteResult normalize_idempotence_suite(const Theory& th, std::uint64_t seed, std::size_t n);
// Symmetric verdicts, and every distinguishing pair separates exactly one frame.
SuiteResult static_symmetry_suite(const Theory& th, std::uint64_t seed, std::size_t n,
                                  std::uint32_t depth);

// Walks concrete executions alongside symbolic ones and checks that each
// concrete step is matched by a symbolic successor and an extended solution.
void check_completeness(const Model& m, std::uint32_t depth, std::uint32_t maxlen,
                        SuiteResult& out);
// Symbolically executable outputs are concretely enabled under every solution;
// executable inputs accept every basis recipe.
void check_weak_soundness(const Model& m, std::uint32_t depth, std::uint32_t maxlen,
                          SuiteResult& out);
// Twin transitions are functions: recomputation from a reordered copy of the
// state agrees, domains grow by exactly the emitted handle and ages never drop.
void check_twin_determinism(const Model& m, std::uint32_t depth, std::uint32_t maxlen,
                            SuiteResult& out);
// ⇔ee implies concrete commutation and ⇔de implies that a disabled action
// stays disabled, on sampled solutions.
void check_independence_soundness(const Model& m, std::uint32_t depth, std::uint32_t maxlen,
                                  SuiteResult& out);
// Recomputes the stubborn closure: every X-avoiding EC execution ends with an
// action independent of all of X.
void check_stubborn_closure(const Model& m, std::uint32_t maxlen, SuiteResult& out);

// Distinct conditionals over outputs must collapse to distinct processes.
SuiteResult delta_injectivity_suite(std::uint64_t seed, std::size_t n, const CollapseOptions& copts);

// ---------------------------------------------------------------- kernel

struct KernelSuite {
  SuiteResult independence{"greatest independence = per-triple clauses"};
  SuiteResult persistent{"persistent-trace finals = naive finals"};
  SuiteResult sleep{"sleep-set finals = naive finals"};
  SuiteResult stubborn{"stubborn ∩ E(s) is persistent"};
  SuiteResult trace_class{"trace classes share their end state"};

  bool ok() const {
    return independence.ok() && persistent.ok() && sleep.ok() && stubborn.ok() &&
           trace_class.ok();
  }
};

KernelSuite run_kernel_suite(std::uint64_t seed, std::size_t count);

}  // namespace porcheck
