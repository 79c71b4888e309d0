#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "porcheck/semantics.hpp"
#include "porcheck/twin.hpp"

namespace porcheck {

struct Skeleton {
  enum class Kind : std::uint8_t { In, Out };
  Kind kind;
  Channel channel;

  // In < Out, then channel name.
  friend std::strong_ordering operator<=>(const Skeleton& a, const Skeleton& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    return a.channel <=> b.channel;
  }
  friend bool operator==(const Skeleton&, const Skeleton&) = default;
};

// out(c, w_{c,i}) or in(c, X^{c,i}, W).
struct SymbolicAction {
  using Kind = Skeleton::Kind;
  Kind kind = Kind::Out;
  Channel channel;
  std::uint32_t index = 0;
  HandleSet domain;  // W, inputs only

  static SymbolicAction in(Channel c, std::uint32_t i, HandleSet w) {
    return {Kind::In, c, i, make_handle_set(std::move(w))};
  }
  static SymbolicAction out(Channel c, std::uint32_t i) { return {Kind::Out, c, i, {}}; }

  bool is_input() const { return kind == Kind::In; }
  Skeleton skeleton() const { return {kind, channel}; }
  Handle handle() const { return {channel, index}; }
  std::string str() const;

  friend bool operator==(const SymbolicAction&, const SymbolicAction&) = default;
  friend std::strong_ordering operator<=>(const SymbolicAction& a, const SymbolicAction& b);
};

struct SymbolicActionHash {
  std::size_t operator()(const SymbolicAction& a) const;
};

// Eq(u,v) or Neq(u,v); sides are normalized and ordered structurally.
struct Literal {
  bool positive = true;
  Term lhs;
  Term rhs;

  Literal negated() const { return {!positive, lhs, rhs}; }
  std::string str() const;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b);
};

// Sorted, duplicate-free conjunction of literals; ⊤ is empty.
using ConstraintSet = std::vector<Literal>;

enum class LiteralStatus { True, False, Open };

// Normalizes u, v and decides ground literals outright.
LiteralStatus make_literal(bool positive, Term u, Term v, const Theory& th, Literal& out);
// Adds a canonical literal; false when its negation is already present.
bool add_literal(ConstraintSet& c, const Literal& lit);
// True when the union of both sets holds a literal and its negation.
bool immediately_contradicts(const ConstraintSet& a, const ConstraintSet& b);

// ⟨A ≈ B⟩_C^I
struct SymbolicState {
  std::vector<Configuration> left;
  std::vector<Configuration> right;
  ConstraintSet constraints;
  std::vector<std::pair<Channel, std::uint32_t>> counters;  // sorted, non-zero only

  std::uint32_t input_counter(Channel c) const;
  HandleSet domain() const;
  std::uint32_t age() const;
  std::size_t hash() const;
  std::string str() const;

  friend bool operator==(const SymbolicState&, const SymbolicState&) = default;
  friend std::strong_ordering operator<=>(const SymbolicState& a, const SymbolicState& b);
};

enum class ExpansionOrder { Forward, Reverse };

class IndexMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The closed initial state; top-level conditionals of closed processes are
// decided by evaluation.
SymbolicState initial_symbolic(const Configuration& a0, const Configuration& b0, const Theory& th);

// Successors of S by A. Throws IndexMismatch when A's index disagrees with S.
std::vector<SymbolicState> symb_step(const SymbolicState& s, const SymbolicAction& a,
                                     const Theory& th,
                                     ExpansionOrder order = ExpansionOrder::Forward);
// Same, but an index mismatch simply yields no successor.
std::vector<SymbolicState> symb_successors(const SymbolicState& s, const SymbolicAction& a,
                                           const Theory& th);

// Executable actions with inputs fixed to W = dom(S), in skeleton order.
std::vector<SymbolicAction> enabled_cover(const SymbolicState& s, const Theory& th);

// Candidate actions of S (index-correct) on every offered skeleton, for the given W.
std::vector<SymbolicAction> offered_actions(const SymbolicState& s, const HandleSet& w);

struct SecondOrderVar {
  Channel channel;
  std::uint32_t index;
  friend bool operator==(const SecondOrderVar&, const SecondOrderVar&) = default;
  friend std::strong_ordering operator<=>(const SecondOrderVar& a, const SecondOrderVar& b) {
    if (auto c = a.channel <=> b.channel; c != 0) return c;
    return a.index <=> b.index;
  }
};

using SecondOrderSubst = std::map<SecondOrderVar, Term>;

// λθ, memoized per first-order variable.
class Lambda {
 public:
  Lambda(const SecondOrderSubst& theta, const Theory& th) : theta_(theta), th_(th) {}

  // Throws std::invalid_argument when θ lacks the variable or its recipe
  // reaches outside the variable's frame.
  Term of(Term fo_var);
  Term apply(Term t);
  Frame apply(Frame f);
  Process apply(Process p);

 private:
  const SecondOrderSubst& theta_;
  const Theory& th_;
  std::unordered_map<Term, Term> memo_;
};

Term lambda_of(const SecondOrderSubst& theta, Term fo_var, const Theory& th);
bool is_solution(const SecondOrderSubst& theta, const SymbolicState& s, const Theory& th);
TwinState concretize_state(const SymbolicState& s, const SecondOrderSubst& theta,
                           const Theory& th);

// Concrete action denoted by A under recipe R (inputs) or directly (outputs).
ConcreteAction concretize_action(const SymbolicAction& a, Term recipe = {});

}  // namespace porcheck

template <>
struct std::hash<porcheck::SymbolicState> {
  std::size_t operator()(const porcheck::SymbolicState& s) const { return s.hash(); }
};
