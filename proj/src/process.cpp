#include "porcheck/process.hpp"

#include <algorithm>

#include "porcheck/intern.hpp"
#include "porcheck/theory.hpp"

namespace porcheck {

namespace {

struct ProcHash {
  std::size_t operator()(const ProcNode& n) const { return n.hash; }
};

struct ProcEq {
  bool operator()(const ProcNode& x, const ProcNode& y) const {
    return x.kind == y.kind && x.channel == y.channel && x.a == y.a && x.b == y.b &&
           x.l == y.l && x.r == y.r;
  }
};

detail::Interner<ProcNode, ProcHash, ProcEq>& proc_table() {
  static detail::Interner<ProcNode, ProcHash, ProcEq> table;
  return table;
}

}  // namespace

Process intern_process(ProcNode&& node) {
  std::size_t h = static_cast<std::size_t>(node.kind) * 0x2545f491u;
  h = hash_combine(h, node.channel.hash());
  h = hash_combine(h, node.a.hash());
  h = hash_combine(h, node.b.hash());
  h = hash_combine(h, node.l ? node.l->hash : 0);
  h = hash_combine(h, node.r ? node.r->hash : 0);
  node.hash = h;
  return Process(proc_table().intern(std::move(node)));
}

Process::Process() {
  static const ProcNode* const null_node = intern_process(ProcNode{ProcKind::Null}).node_;
  node_ = null_node;
}

Process Process::in(Channel c, Term var, Process cont) {
  if (!var.is_var()) throw std::invalid_argument("input binder must be a variable");
  return intern_process(ProcNode{ProcKind::In, c, var, {}, cont.node_, nullptr});
}

Process Process::out(Channel c, Term msg, Process cont) {
  return intern_process(ProcNode{ProcKind::Out, c, msg, {}, cont.node_, nullptr});
}

Process Process::cond(Term u, Term v, Process then_branch, Process else_branch) {
  return intern_process(ProcNode{ProcKind::If, {}, u, v, then_branch.node_, else_branch.node_});
}

Process Process::par(Process l, Process r) {
  return intern_process(ProcNode{ProcKind::Par, {}, {}, {}, l.node_, r.node_});
}

Process Process::choice(Process l, Process r) {
  return intern_process(ProcNode{ProcKind::Choice, {}, {}, {}, l.node_, r.node_});
}

ProcKind Process::kind() const { return node_->kind; }
Channel Process::channel() const { return node_->channel; }
Term Process::var() const { return node_->a; }
Term Process::message() const { return node_->a; }
Term Process::lhs() const { return node_->a; }
Term Process::rhs() const { return node_->b; }
Process Process::cont() const { return Process(node_->l); }
Process Process::left() const { return Process(node_->l); }
Process Process::right() const { return Process(node_->r); }
std::size_t Process::hash() const { return node_->hash; }

std::size_t Process::prefix_count() const {
  switch (kind()) {
    case ProcKind::Null:
      return 0;
    case ProcKind::In:
    case ProcKind::Out:
      return 1 + cont().prefix_count();
    default:
      return left().prefix_count() + right().prefix_count();
  }
}

namespace {

void free_vars_rec(Process p, std::vector<Term>& bound, std::vector<Term>& out) {
  auto note = [&](Term t) {
    std::vector<Term> vs;
    collect_vars(t, vs);
    for (Term v : vs)
      if (std::find(bound.begin(), bound.end(), v) == bound.end() &&
          std::find(out.begin(), out.end(), v) == out.end())
        out.push_back(v);
  };
  switch (p.kind()) {
    case ProcKind::Null:
      return;
    case ProcKind::In:
      bound.push_back(p.var());
      free_vars_rec(p.cont(), bound, out);
      bound.pop_back();
      return;
    case ProcKind::Out:
      note(p.message());
      free_vars_rec(p.cont(), bound, out);
      return;
    case ProcKind::If:
      note(p.lhs());
      note(p.rhs());
      [[fallthrough]];
    case ProcKind::Par:
    case ProcKind::Choice:
      free_vars_rec(p.left(), bound, out);
      free_vars_rec(p.right(), bound, out);
      return;
  }
}

}  // namespace

std::vector<Term> Process::free_vars() const {
  std::vector<Term> bound, out;
  free_vars_rec(*this, bound, out);
  return out;
}

std::string Process::str() const {
  switch (kind()) {
    case ProcKind::Null:
      return "0";
    case ProcKind::In:
    case ProcKind::Out: {
      std::string head = (kind() == ProcKind::In ? "in(" : "out(") + channel().name() + ", " +
                         node_->a.str() + ")";
      if (cont().is_null()) return head;
      return head + "." + cont().str();
    }
    case ProcKind::If:
      return "if " + lhs().str() + " = " + rhs().str() + " then " + left().str() + " else " +
             right().str();
    case ProcKind::Par:
      return "(" + left().str() + " | " + right().str() + ")";
    case ProcKind::Choice:
      return "(" + left().str() + " + " + right().str() + ")";
  }
  return "?";
}

std::strong_ordering compare(Process a, Process b) {
  if (a == b) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case ProcKind::Null:
      return std::strong_ordering::equal;
    case ProcKind::In:
    case ProcKind::Out:
      if (auto c = a.channel() <=> b.channel(); c != 0) return c;
      if (auto c = compare(a.node()->a, b.node()->a); c != 0) return c;
      return compare(a.cont(), b.cont());
    case ProcKind::If:
      if (auto c = compare(a.lhs(), b.lhs()); c != 0) return c;
      if (auto c = compare(a.rhs(), b.rhs()); c != 0) return c;
      [[fallthrough]];
    default:
      if (auto c = compare(a.left(), b.left()); c != 0) return c;
      return compare(a.right(), b.right());
  }
}

Process substitute(Process p, Term x, Term value, const Theory* th) {
  auto fix = [&](Term t) {
    Term s = substitute(t, VarSubst{{x, value}});
    return th ? th->normalize(s) : s;
  };
  switch (p.kind()) {
    case ProcKind::Null:
      return p;
    case ProcKind::In:
      if (p.var() == x) return p;
      return Process::in(p.channel(), p.var(), substitute(p.cont(), x, value, th));
    case ProcKind::Out:
      return Process::out(p.channel(), fix(p.message()), substitute(p.cont(), x, value, th));
    case ProcKind::If:
      return Process::cond(fix(p.lhs()), fix(p.rhs()), substitute(p.left(), x, value, th),
                           substitute(p.right(), x, value, th));
    case ProcKind::Par:
      return Process::par(substitute(p.left(), x, value, th), substitute(p.right(), x, value, th));
    case ProcKind::Choice:
      return Process::choice(substitute(p.left(), x, value, th),
                             substitute(p.right(), x, value, th));
  }
  return p;
}

Process map_terms(Process p, const std::function<Term(Term)>& f) {
  switch (p.kind()) {
    case ProcKind::Null:
      return p;
    case ProcKind::In:
      return Process::in(p.channel(), p.var(), map_terms(p.cont(), f));
    case ProcKind::Out:
      return Process::out(p.channel(), f(p.message()), map_terms(p.cont(), f));
    case ProcKind::If:
      return Process::cond(f(p.lhs()), f(p.rhs()), map_terms(p.left(), f),
                           map_terms(p.right(), f));
    case ProcKind::Par:
      return Process::par(map_terms(p.left(), f), map_terms(p.right(), f));
    case ProcKind::Choice:
      return Process::choice(map_terms(p.left(), f), map_terms(p.right(), f));
  }
  return p;
}

}  // namespace porcheck
