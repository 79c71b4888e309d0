#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "porcheck/process.hpp"
#include "porcheck/theory.hpp"

namespace porcheck {

// (P; φ) with P a multiset of processes, or the ghost (⊥_j; φ).
struct Configuration {
  std::vector<Process> procs;  // canonical sorted multiset
  std::int32_t ghost = -1;     // death age when ≥ 0
  Frame frame;

  static Configuration alive(std::vector<Process> procs, Frame frame);
  static Configuration dead(std::uint32_t age, Frame frame);

  bool is_ghost() const { return ghost >= 0; }
  std::uint32_t age() const { return static_cast<std::uint32_t>(ghost); }
  bool quiescent() const;
  HandleSet domain() const { return frame.domain(); }

  std::size_t hash() const;
  std::string str() const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.ghost == b.ghost && a.frame == b.frame && a.procs == b.procs;
  }
  friend std::strong_ordering operator<=>(const Configuration& a, const Configuration& b);
};

void canonicalize(std::vector<Process>& multiset);
// Sorts and removes duplicates.
void canonicalize(std::vector<Configuration>& set);

struct ConcreteAction {
  enum class Kind : std::uint8_t { In, Out, Tau };
  Kind kind = Kind::Tau;
  Channel channel;
  Term recipe;              // In
  std::uint32_t index = 0;  // Out: handle w_{c,index}

  static ConcreteAction in(Channel c, Term recipe) { return {Kind::In, c, recipe, 0}; }
  static ConcreteAction out(Channel c, std::uint32_t i) { return {Kind::Out, c, {}, i}; }
  static ConcreteAction tau() { return {}; }

  bool observable() const { return kind != Kind::Tau; }
  Handle handle() const { return Handle{channel, index}; }
  std::string str() const;

  friend bool operator==(const ConcreteAction&, const ConcreteAction&) = default;
};

using ConcreteTrace = std::vector<ConcreteAction>;
ConcreteTrace obs(const ConcreteTrace& tr);
std::string trace_str(const ConcreteTrace& tr);

// All single-step successors of an alive configuration.
std::vector<Configuration> concrete_step(const Configuration& k, const ConcreteAction& alpha,
                                         const Theory& th);

// Quiescent configurations reachable by τ*.
std::vector<Configuration> tau_closure(const Configuration& k, const Theory& th);

// Ways of resolving one process to a multiset of prefixes by τ steps.
std::vector<std::vector<Process>> resolve_concrete(Process p, const Theory& th);

bool action_deterministic(const Configuration& k, const Theory& th, std::uint32_t depth,
                          std::uint32_t maxlen);

struct InclusionVerdict {
  bool included = true;
  ConcreteTrace trace;  // observable witness trace
  Frame frame;          // the unmatched frame reached by A0
};

// Direct bounded check of trace inclusion A0 ⊑ B0 over the recipe basis.
InclusionVerdict trace_inclusion_naive(const Configuration& a0, const Configuration& b0,
                                       const Theory& th, std::uint32_t depth,
                                       std::uint32_t maxlen);

}  // namespace porcheck

template <>
struct std::hash<porcheck::Configuration> {
  std::size_t operator()(const porcheck::Configuration& k) const { return k.hash(); }
};
