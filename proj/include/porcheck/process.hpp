#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "porcheck/term.hpp"

namespace porcheck {

class Theory;

enum class ProcKind : std::uint8_t { Null, In, Out, If, Par, Choice };

struct ProcNode;

// Hash-consed process term.
class Process {
 public:
  Process();  // 0

  static Process null() { return Process(); }
  static Process in(Channel c, Term var, Process cont);
  static Process out(Channel c, Term msg, Process cont);
  static Process cond(Term u, Term v, Process then_branch, Process else_branch);
  static Process par(Process l, Process r);
  static Process choice(Process l, Process r);

  ProcKind kind() const;
  bool is_null() const { return kind() == ProcKind::Null; }
  // Starts with an input or output prefix.
  bool is_prefix() const { return kind() == ProcKind::In || kind() == ProcKind::Out; }

  Channel channel() const;  // In, Out
  Term var() const;         // In
  Term message() const;     // Out
  Term lhs() const;         // If
  Term rhs() const;         // If
  Process cont() const;     // In, Out
  Process left() const;     // If (then), Par, Choice
  Process right() const;    // If (else), Par, Choice

  // Number of input/output prefixes in the syntax tree.
  std::size_t prefix_count() const;
  std::vector<Term> free_vars() const;
  bool closed() const { return free_vars().empty(); }

  std::size_t hash() const;
  const ProcNode* node() const { return node_; }
  std::string str() const;

  friend bool operator==(Process a, Process b) { return a.node_ == b.node_; }

 private:
  explicit Process(const ProcNode* n) : node_(n) {}
  const ProcNode* node_;
  friend Process intern_process(ProcNode&&);
};

std::strong_ordering compare(Process a, Process b);

struct ProcNode {
  ProcKind kind;
  Channel channel;
  Term a;  // In: bound variable, Out: message, If: lhs
  Term b;  // If: rhs
  const ProcNode* l = nullptr;
  const ProcNode* r = nullptr;
  std::size_t hash = 0;
};

// Capture-avoiding in the only sense needed here: substitution stops below
// an input that rebinds x. Terms are normalized under `th` when given.
Process substitute(Process p, Term x, Term value, const Theory* th);
// Applies a term transformation to every term position of p.
Process map_terms(Process p, const std::function<Term(Term)>& f);

}  // namespace porcheck

template <>
struct std::hash<porcheck::Process> {
  std::size_t operator()(porcheck::Process p) const { return p.hash(); }
};
