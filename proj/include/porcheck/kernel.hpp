#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <vector>

namespace porcheck::kernel {

using State = std::uint32_t;
using Action = std::uint32_t;
using Trace = std::vector<Action>;
using ActionSet = std::vector<Action>;  // sorted, duplicate-free

// Finite action-deterministic LTS; delta(s, a) is kNone when a is disabled.
class ExplicitLTS {
 public:
  static constexpr State kNone = UINT32_MAX;

  ExplicitLTS(std::uint32_t states, std::uint32_t actions);

  std::uint32_t state_count() const { return states_; }
  std::uint32_t action_count() const { return actions_; }

  // Overwrites any previous transition for (s, a).
  void set(State s, Action a, State t);
  void remove(State s, Action a);
  State delta(State s, Action a) const { return delta_[s * actions_ + a]; }
  bool enabled(State s, Action a) const { return delta(s, a) != kNone; }
  ActionSet enabled_set(State s) const;
  bool is_final(State s) const { return enabled_set(s).empty(); }

  // kNone when some action is disabled on the way.
  State run(State s, const Trace& w) const;

  std::set<State> reachable(State s0) const;
  std::set<State> reachable_finals(State s0) const;

 private:
  std::uint32_t states_;
  std::uint32_t actions_;
  std::vector<State> delta_;
};

// α ↔_s β for every (α, s, β); symmetric and irreflexive.
class IndependenceRelation {
 public:
  IndependenceRelation(std::uint32_t states, std::uint32_t actions);
  bool indep(Action a, State s, Action b) const { return bits_[index(a, s, b)]; }
  void set(Action a, State s, Action b, bool v);
  std::size_t size() const;

  friend bool operator==(const IndependenceRelation&, const IndependenceRelation&) = default;

 private:
  std::size_t index(Action a, State s, Action b) const {
    return (static_cast<std::size_t>(s) * actions_ + a) * actions_ + b;
  }
  std::uint32_t actions_;
  std::vector<bool> bits_;
};

// Both independence clauses for (α, s, β) in this one direction.
bool independence_clauses_hold(const ExplicitLTS& l, Action a, State s, Action b);

// Greatest fixpoint starting from all symmetric irreflexive triples.
IndependenceRelation greatest_independence(const ExplicitLTS& l);

// Throws std::invalid_argument unless t ⊆ E(s).
bool is_persistent(const ActionSet& t, State s, const ExplicitLTS& l,
                   const IndependenceRelation& ind);

// Least conditional stubborn set containing seed; throws std::invalid_argument
// when seed is not enabled in s.
ActionSet conditional_stubborn(const ExplicitLTS& l, const IndependenceRelation& ind, State s,
                               Action seed);
// T ∩ E(s), asserted persistent; throws std::logic_error otherwise.
ActionSet stubborn_to_persistent(const ActionSet& t, State s, const ExplicitLTS& l,
                                 const IndependenceRelation& ind);

using PsetAssignment = std::function<ActionSet(State)>;

// Stubborn set from the smallest enabled action, intersected with E(s).
PsetAssignment stubborn_assignment(const ExplicitLTS& l, const IndependenceRelation& ind);

// Final states reachable through persistent traces only.
std::set<State> persistent_finals(const ExplicitLTS& l, State s0, const PsetAssignment& pset);

struct SleepResult {
  std::set<State> finals;
  std::size_t final_executions = 0;    // distinct (state, sleep) pairs reached with a final state
  std::size_t blocked_executions = 0;  // non-final pairs whose persistent actions are all asleep
  std::size_t pairs_visited = 0;
};

// Sleep-set executions from (s0, ∅); rank gives the total order on actions
// (rank[a] < rank[b] means a < b).
SleepResult sleep_explore(const ExplicitLTS& l, State s0, const IndependenceRelation& ind,
                          const PsetAssignment& pset, const std::vector<std::uint32_t>& rank);

// Number of maximal paths from s0 to final states; only for acyclic LTSs.
std::size_t count_final_paths(const ExplicitLTS& l, State s0);
bool is_acyclic(const ExplicitLTS& l, State s0);

// [w]_s; throws std::invalid_argument when w is not executable from s and
// std::logic_error when a member reaches another end state.
std::set<Trace> trace_class(const Trace& w, State s, const ExplicitLTS& l,
                            const IndependenceRelation& ind);

struct RandomLtsParams {
  std::uint32_t max_states = 30;
  std::uint32_t max_actions = 6;
  double perturbation = 0.15;  // chance per state of one random edit
  bool allow_cycles = true;
};

// Reachable product of 2-3 small automata over partly shared alphabets, with
// random edits; state 0 is initial and every state is reachable from it.
ExplicitLTS random_lts(std::uint64_t seed, const RandomLtsParams& p = {});

}  // namespace porcheck::kernel
