#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "porcheck/symbolic.hpp"
#include "porcheck/twin.hpp"

namespace porcheck {

using SymbolicTrace = std::vector<SymbolicAction>;
std::string trace_str(const SymbolicTrace& tr);

// (S, Z)
struct SleepPair {
  SymbolicState state;
  std::vector<SymbolicAction> sleep;  // sorted
};

struct CollapseOptions {
  // Negative control for the self-test: fuse with a ternary Δ that forgets
  // the right-hand side of the test.
  bool corrupt_delta = false;
};

// Pushes conditionals below same-skeleton prefixes, fusing output terms with
// Δ, and drops conditionals whose branches are both null.
Process collapse(Process p, const CollapseOptions& opts = {});
SymbolicState collapse(const SymbolicState& s, const CollapseOptions& opts = {});

// Prefix tree of symbolic action sequences.
class ActionTrie {
 public:
  ActionTrie() : nodes_(1) {}
  void insert(const SymbolicTrace& tr);
  std::size_t leaf_count() const;
  // Root-to-leaf sequences in insertion order of first children.
  std::vector<SymbolicTrace> leaves() const;
  std::size_t size() const { return nodes_.size(); }

  const std::vector<std::pair<SymbolicAction, std::uint32_t>>& children(std::uint32_t n) const {
    return nodes_[n].children;
  }

 private:
  struct Node {
    std::vector<std::pair<SymbolicAction, std::uint32_t>> children;
  };
  std::vector<Node> nodes_;
};

struct EngineOptions {
  // Stubborn computations beyond this many visited states fall back to EC(S),
  // which is always stubborn.
  std::size_t stubborn_ceiling = 20000;
  CollapseOptions collapse;
};

// Per-run symbolic POR machinery with memoized successors and dependencies.
class Engine {
 public:
  using StateId = std::uint32_t;

  explicit Engine(const Theory& th, EngineOptions opts = {});

  StateId intern(const SymbolicState& s);
  const SymbolicState& state(StateId id) const { return states_[id]; }
  std::size_t state_count() const { return states_.size(); }

  // Index-mismatched actions have no successors.
  const std::vector<StateId>& successors(StateId s, const SymbolicAction& a);
  bool executable(StateId s, const SymbolicAction& a) { return !successors(s, a).empty(); }
  const std::vector<SymbolicAction>& enabled_cover(StateId s);

  // Both throw std::invalid_argument when a required action is not executable.
  bool indep_ee(StateId s, const SymbolicAction& a, const SymbolicAction& b);
  bool indep_de(StateId s, const SymbolicAction& a, const SymbolicAction& b);
  bool indep(StateId s, const SymbolicAction& a, const SymbolicAction& b);

  std::vector<SymbolicAction> stubborn_from_seed(StateId s, const SymbolicAction& seed);
  // T⁺(S); throws std::invalid_argument on an empty enabled cover.
  std::vector<SymbolicAction> compute_stubborn(StateId s);
  std::vector<SymbolicAction> persistent_of(StateId s);

  StateId collapsed(StateId s);

  // Successor sleep pairs by A, one per symbolic successor; empty when A is
  // not persistent or is asleep. With use_collapse the persistent set and the
  // sleep update are computed on S^c.
  std::vector<SleepPair> sleep_step(const SleepPair& p, const SymbolicAction& a,
                                    bool use_collapse = false);

  std::size_t stubborn_fallbacks() const { return fallbacks_; }

 private:
  struct ActKey {
    StateId s;
    SymbolicAction a;
    bool operator==(const ActKey&) const = default;
  };
  struct ActKeyHash {
    std::size_t operator()(const ActKey& k) const {
      return hash_combine(k.s, SymbolicActionHash{}(k.a));
    }
  };
  struct PairKey {
    StateId s;
    SymbolicAction a;
    SymbolicAction b;
    bool operator==(const PairKey&) const = default;
  };
  struct PairKeyHash {
    std::size_t operator()(const PairKey& k) const {
      return hash_combine(hash_combine(k.s, SymbolicActionHash{}(k.a)),
                          SymbolicActionHash{}(k.b));
    }
  };

  std::vector<SymbolicAction> sleep_update(StateId view, const std::vector<SymbolicAction>& z,
                                           const SymbolicAction& a);

  const Theory& th_;
  EngineOptions opts_;
  std::vector<SymbolicState> states_;
  std::unordered_map<SymbolicState, StateId> ids_;
  std::unordered_map<ActKey, std::vector<StateId>, ActKeyHash> succ_;
  std::unordered_map<StateId, std::vector<SymbolicAction>> ec_;
  std::unordered_map<StateId, std::vector<SymbolicAction>> stubborn_;
  std::unordered_map<StateId, StateId> collapsed_;
  std::unordered_map<PairKey, bool, PairKeyHash> ee_;
  std::unordered_map<PairKey, bool, PairKeyHash> de_;
  std::size_t fallbacks_ = 0;
};

struct TraceSetResult {
  ActionTrie trie;
  std::size_t executions = 0;  // maximal executions explored, before deduplication
  bool truncated = false;      // some execution was cut at the length bound
  bool budget_exceeded = false;
  std::size_t trace_count() const { return trie.leaf_count(); }
};

// Maximal sleep-set executions from (S0, ∅) up to maxlen.
TraceSetResult reduced_trace_set(Engine& eng, const SymbolicState& s0, std::uint32_t maxlen,
                                 bool use_collapse, std::size_t budget = 5'000'000);
// Every maximal execution over enabled covers, without reduction.
TraceSetResult naive_trace_set(Engine& eng, const SymbolicState& s0, std::uint32_t maxlen,
                               std::size_t budget = 5'000'000);

// Twin exploration restricted to concretizations of the trie's sequences:
// outputs map to themselves and inputs to every basis recipe.
ExploreResult explore_twin_restricted(const ActionTrie& trie, const TwinState& s0,
                                      std::uint32_t depth, const Theory& th,
                                      std::size_t state_budget = 2'000'000);

}  // namespace porcheck
