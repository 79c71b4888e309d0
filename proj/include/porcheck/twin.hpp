#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "porcheck/semantics.hpp"

namespace porcheck {

// ⟨|A ≈ B|⟩: both sides are canonical sets of configurations.
struct TwinState {
  std::vector<Configuration> left;
  std::vector<Configuration> right;

  HandleSet domain() const;
  std::uint32_t age() const;
  std::size_t hash() const;
  std::string str() const;

  friend bool operator==(const TwinState&, const TwinState&) = default;
};

enum class Side { None, Left, Right };
std::string side_name(Side s);

TwinState initial_twin(const Configuration& a0, const Configuration& b0, const Theory& th);

// Ghosts can be suppressed only for diagnostics; the verdict path keeps them.
std::optional<TwinState> twin_step(const TwinState& s, const ConcreteAction& alpha,
                                   const Theory& th, bool with_ghosts = true);

// A^{≥i}: alive configurations plus ghosts dead at age ≥ i.
std::vector<Configuration> alive_at(const std::vector<Configuration>& side, std::uint32_t i);

struct FailedTarget {
  Configuration target;
  // Recipes separating the offender from the target on the common domain;
  // invalid when the domains are not comparable.
  Term m;
  Term n;
};

struct BadVerdict {
  Side side = Side::None;
  Configuration offender;
  std::vector<FailedTarget> failures;
  bool bad() const { return side != Side::None; }
};

struct BadnessOptions {
  bool ignore_ghosts = false;
  // Compare alive configurations against B^{≥age(s)} instead of the alive
  // configurations of the current domain.
  bool age_bounded_alive = false;
};

BadVerdict is_bad(const TwinState& s, std::uint32_t depth, const Theory& th,
                  BadnessOptions opts = {});
// Only the given side is examined.
BadVerdict is_side_bad(const TwinState& s, Side side, std::uint32_t depth, const Theory& th,
                       BadnessOptions opts = {});

// Observable actions enabled in s over the recipe basis.
std::vector<ConcreteAction> enabled_actions(const TwinState& s, std::uint32_t depth,
                                            const Theory& th);

struct ExploreResult {
  bool bad_reachable = false;
  bool bad_final_reachable = false;
  bool left_bad_reachable = false;
  bool left_bad_final_reachable = false;
  bool budget_exceeded = false;
  std::size_t states_visited = 0;
  std::size_t transitions = 0;
  std::size_t final_states = 0;
  // First bad state in breadth-first order.
  ConcreteTrace witness;
  BadVerdict witness_verdict;
  // First left-bad state, for inclusion queries.
  ConcreteTrace left_witness;
  BadVerdict left_witness_verdict;
};

ExploreResult explore_twin_naive(const TwinState& s0, std::uint32_t depth, std::uint32_t maxlen,
                                 const Theory& th, std::size_t state_budget = 2'000'000);

}  // namespace porcheck

template <>
struct std::hash<porcheck::TwinState> {
  std::size_t operator()(const porcheck::TwinState& s) const { return s.hash(); }
};
