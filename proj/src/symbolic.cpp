#include "porcheck/symbolic.hpp"

#include <algorithm>
#include <set>

namespace porcheck {

// ---------------------------------------------------------------- actions

std::string SymbolicAction::str() const {
  if (kind == Kind::Out)
    return "out(" + channel.name() + ", " + Handle{channel, index}.str() + ")";
  return "in(" + channel.name() + ", X(" + channel.name() + "," + std::to_string(index) + "), " +
         handle_set_str(domain) + ")";
}

std::strong_ordering operator<=>(const SymbolicAction& a, const SymbolicAction& b) {
  if (auto c = a.skeleton() <=> b.skeleton(); c != 0) return c;
  if (auto c = a.index <=> b.index; c != 0) return c;
  return std::lexicographical_compare_three_way(a.domain.begin(), a.domain.end(),
                                                b.domain.begin(), b.domain.end());
}

std::size_t SymbolicActionHash::operator()(const SymbolicAction& a) const {
  std::size_t h = hash_combine(static_cast<std::size_t>(a.kind), a.channel.hash());
  h = hash_combine(h, a.index);
  for (const auto& w : a.domain) h = hash_combine(hash_combine(h, w.channel.hash()), w.index);
  return h;
}

ConcreteAction concretize_action(const SymbolicAction& a, Term recipe) {
  if (a.is_input()) return ConcreteAction::in(a.channel, recipe);
  return ConcreteAction::out(a.channel, a.index);
}

// ---------------------------------------------------------------- literals

std::string Literal::str() const {
  return lhs.str() + (positive ? " = " : " != ") + rhs.str();
}

std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
  if (auto c = compare(a.lhs, b.lhs); c != 0) return c;
  if (auto c = compare(a.rhs, b.rhs); c != 0) return c;
  return a.positive <=> b.positive;
}

LiteralStatus make_literal(bool positive, Term u, Term v, const Theory& th, Literal& out) {
  u = th.normalize(u);
  v = th.normalize(v);
  if (u == v) return positive ? LiteralStatus::True : LiteralStatus::False;
  // Distinct normal forms of ground terms are distinct modulo E.
  if (u.ground() && v.ground()) return positive ? LiteralStatus::False : LiteralStatus::True;
  if (compare(v, u) < 0) std::swap(u, v);
  out = Literal{positive, u, v};
  return LiteralStatus::Open;
}

bool add_literal(ConstraintSet& c, const Literal& lit) {
  auto neg = std::lower_bound(c.begin(), c.end(), lit.negated());
  if (neg != c.end() && *neg == lit.negated()) return false;
  auto pos = std::lower_bound(c.begin(), c.end(), lit);
  if (pos == c.end() || !(*pos == lit)) c.insert(pos, lit);
  return true;
}

bool immediately_contradicts(const ConstraintSet& a, const ConstraintSet& b) {
  ConstraintSet all = a;
  for (const auto& l : b)
    if (!add_literal(all, l)) return true;
  for (const auto& l : a) {
    auto it = std::lower_bound(a.begin(), a.end(), l.negated());
    if (it != a.end() && *it == l.negated()) return true;
  }
  return false;
}

// ---------------------------------------------------------------- states

std::uint32_t SymbolicState::input_counter(Channel c) const {
  for (const auto& [ch, n] : counters)
    if (ch == c) return n;
  return 0;
}

HandleSet SymbolicState::domain() const {
  for (const auto* side : {&left, &right})
    for (const auto& k : *side)
      if (!k.is_ghost()) return k.domain();
  HandleSet best;
  for (const auto* side : {&left, &right})
    for (const auto& k : *side)
      if (k.frame.size() > best.size()) best = k.domain();
  return best;
}

std::uint32_t SymbolicState::age() const {
  std::uint32_t a = 0;
  for (const auto* side : {&left, &right})
    for (const auto& k : *side)
      if (k.is_ghost()) a = std::max(a, k.age() + 1);
  return a;
}

std::size_t SymbolicState::hash() const {
  std::size_t h = left.size();
  for (const auto& k : left) h = hash_combine(h, k.hash());
  h = hash_combine(h, 0x5eed);
  for (const auto& k : right) h = hash_combine(h, k.hash());
  for (const auto& l : constraints)
    h = hash_combine(hash_combine(hash_combine(h, l.positive), l.lhs.hash()), l.rhs.hash());
  for (const auto& [c, n] : counters) h = hash_combine(hash_combine(h, c.hash()), n);
  return h;
}

std::string SymbolicState::str() const {
  auto side = [](const std::vector<Configuration>& ks) {
    std::string out = "{";
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (i) out += ", ";
      out += ks[i].str();
    }
    return out + "}";
  };
  std::string c;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (i) c += " & ";
    c += constraints[i].str();
  }
  std::string ctr;
  for (const auto& [ch, n] : counters) {
    if (!ctr.empty()) ctr += ",";
    ctr += ch.name() + ":" + std::to_string(n);
  }
  return "<" + side(left) + " ≈ " + side(right) + ">_{" + (c.empty() ? "T" : c) + "}^{" + ctr +
         "}";
}

std::strong_ordering operator<=>(const SymbolicState& a, const SymbolicState& b) {
  auto cmp_vec = [](const auto& x, const auto& y) {
    return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
  };
  if (auto c = cmp_vec(a.left, b.left); c != 0) return c;
  if (auto c = cmp_vec(a.right, b.right); c != 0) return c;
  if (auto c = cmp_vec(a.constraints, b.constraints); c != 0) return c;
  return cmp_vec(a.counters, b.counters);
}

// ---------------------------------------------------------------- expansion

namespace {

struct Outcome {
  ConstraintSet lits;
  std::vector<std::vector<Process>> variants;  // alternative multisets
};

bool merge_into(ConstraintSet& acc, const ConstraintSet& extra) {
  for (const auto& l : extra)
    if (!add_literal(acc, l)) return false;
  return true;
}

// Ways of resolving a process to prefixes, each guarded by its literals.
// Choices stay grouped inside one outcome, since they split configurations
// rather than states.
std::vector<Outcome> resolve_symbolic(Process p, const Theory& th, ExpansionOrder order) {
  switch (p.kind()) {
    case ProcKind::Null:
      return {Outcome{{}, {{}}}};
    case ProcKind::In:
    case ProcKind::Out:
      return {Outcome{{}, {{p}}}};
    case ProcKind::If: {
      std::vector<Outcome> out;
      auto branch = [&](bool positive, Process q) {
        Literal lit;
        auto st = make_literal(positive, p.lhs(), p.rhs(), th, lit);
        if (st == LiteralStatus::False) return;
        for (auto& o : resolve_symbolic(q, th, order)) {
          if (st == LiteralStatus::Open && !add_literal(o.lits, lit)) continue;
          out.push_back(std::move(o));
        }
      };
      if (order == ExpansionOrder::Forward) {
        branch(true, p.left());
        branch(false, p.right());
      } else {
        branch(false, p.right());
        branch(true, p.left());
      }
      return out;
    }
    case ProcKind::Choice:
    case ProcKind::Par: {
      Process first = p.left(), second = p.right();
      if (order == ExpansionOrder::Reverse) std::swap(first, second);
      auto l = resolve_symbolic(first, th, order);
      auto r = resolve_symbolic(second, th, order);
      std::vector<Outcome> out;
      for (const auto& x : l)
        for (const auto& y : r) {
          Outcome o{x.lits, {}};
          if (!merge_into(o.lits, y.lits)) continue;
          if (p.kind() == ProcKind::Choice) {
            o.variants = x.variants;
            o.variants.insert(o.variants.end(), y.variants.begin(), y.variants.end());
          } else {
            for (const auto& mx : x.variants)
              for (const auto& my : y.variants) {
                auto m = mx;
                m.insert(m.end(), my.begin(), my.end());
                o.variants.push_back(std::move(m));
              }
          }
          out.push_back(std::move(o));
        }
      return out;
    }
  }
  return {};
}

// Outcomes for a whole configuration: the product over its processes.
std::vector<Outcome> resolve_config(const Configuration& k, const Theory& th,
                                    ExpansionOrder order) {
  std::vector<Outcome> acc{Outcome{{}, {{}}}};
  std::vector<Process> procs = k.procs;
  if (order == ExpansionOrder::Reverse) std::reverse(procs.begin(), procs.end());
  for (Process p : procs) {
    auto options = resolve_symbolic(p, th, order);
    std::vector<Outcome> next;
    for (const auto& a : acc)
      for (const auto& o : options) {
        Outcome n{a.lits, {}};
        if (!merge_into(n.lits, o.lits)) continue;
        for (const auto& ma : a.variants)
          for (const auto& mo : o.variants) {
            auto m = ma;
            m.insert(m.end(), mo.begin(), mo.end());
            n.variants.push_back(std::move(m));
          }
        next.push_back(std::move(n));
      }
    acc = std::move(next);
  }
  return acc;
}

struct PreItem {
  bool left;
  Configuration config;  // not necessarily quiescent
};

std::vector<SymbolicState> expand(const std::vector<PreItem>& items, const ConstraintSet& base,
                                  const std::vector<std::pair<Channel, std::uint32_t>>& counters,
                                  const Theory& th, ExpansionOrder order) {
  std::vector<Configuration> ghosts_l, ghosts_r;
  std::vector<std::pair<bool, const Configuration*>> alive;
  for (const auto& it : items) {
    if (it.config.is_ghost())
      (it.left ? ghosts_l : ghosts_r).push_back(it.config);
    else
      alive.emplace_back(it.left, &it.config);
  }
  if (order == ExpansionOrder::Reverse) std::reverse(alive.begin(), alive.end());
  std::vector<std::vector<Outcome>> options;
  options.reserve(alive.size());
  for (const auto& [l, k] : alive) options.push_back(resolve_config(*k, th, order));

  std::vector<SymbolicState> out;
  std::vector<Configuration> cur_l = ghosts_l, cur_r = ghosts_r;
  auto rec = [&](auto&& self, std::size_t idx, const ConstraintSet& lits) -> void {
    if (idx == alive.size()) {
      SymbolicState s{cur_l, cur_r, lits, counters};
      canonicalize(s.left);
      canonicalize(s.right);
      out.push_back(std::move(s));
      return;
    }
    auto& side = alive[idx].first ? cur_l : cur_r;
    const Frame frame = alive[idx].second->frame;
    for (const auto& o : options[idx]) {
      ConstraintSet next = lits;
      if (!merge_into(next, o.lits)) continue;
      const std::size_t mark = side.size();
      for (const auto& m : o.variants) side.push_back(Configuration::alive(m, frame));
      self(self, idx + 1, next);
      side.resize(mark);
    }
  };
  rec(rec, 0, base);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

SymbolicState initial_symbolic(const Configuration& a0, const Configuration& b0,
                               const Theory& th) {
  if (a0.domain() != b0.domain())
    throw std::invalid_argument("initial configurations have different frame domains");
  std::vector<PreItem> items{{true, a0}, {false, b0}};
  auto states = expand(items, {}, {}, th, ExpansionOrder::Forward);
  // Closed processes carry only ground tests, which expansion decides; a single
  // state remains, possibly with several configurations per side.
  if (states.size() != 1)
    throw std::invalid_argument("initial processes must be closed");
  return states.front();
}

std::vector<SymbolicState> symb_step(const SymbolicState& s, const SymbolicAction& a,
                                     const Theory& th, ExpansionOrder order) {
  const HandleSet dom = s.domain();
  if (a.is_input()) {
    if (a.index != s.input_counter(a.channel))
      throw IndexMismatch("input index " + std::to_string(a.index) + " on " + a.channel.name() +
                          " differs from the counter");
  } else if (a.index != next_output_index(a.channel, dom)) {
    throw IndexMismatch("output index " + std::to_string(a.index) + " on " + a.channel.name() +
                        " is not the next free handle");
  }
  const std::uint32_t n = s.age();
  const Handle h{a.channel, a.index};
  bool moved = false;
  std::vector<PreItem> items;
  auto step_side = [&](const std::vector<Configuration>& side, bool left) {
    for (const auto& k : side) {
      if (k.is_ghost()) {
        items.push_back({left, k});
        continue;
      }
      bool able = false;
      for (std::size_t i = 0; i < k.procs.size(); ++i) {
        Process p = k.procs[i];
        if (!p.is_prefix() || p.channel() != a.channel) continue;
        if ((p.kind() == ProcKind::In) != a.is_input()) continue;
        std::vector<Process> rest = k.procs;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        Configuration next;
        if (a.is_input()) {
          Term x = Term::fo_var(a.channel, a.index, k.frame.restrict(a.domain));
          rest.push_back(substitute(p.cont(), p.var(), x, &th));
          next.frame = k.frame;
        } else {
          rest.push_back(p.cont());
          next.frame = k.frame.extend(h, th.normalize(p.message()));
        }
        next.procs = std::move(rest);
        items.push_back({left, std::move(next)});
        able = true;
      }
      if (able)
        moved = true;
      else
        items.push_back({left, Configuration::dead(n, k.frame)});
    }
  };
  step_side(s.left, true);
  step_side(s.right, false);
  if (!moved) return {};

  auto counters = s.counters;
  if (a.is_input()) {
    auto it = std::find_if(counters.begin(), counters.end(),
                           [&](const auto& e) { return e.first == a.channel; });
    if (it == counters.end()) {
      counters.emplace_back(a.channel, 1);
      std::sort(counters.begin(), counters.end());
    } else {
      ++it->second;
    }
  }
  return expand(items, s.constraints, counters, th, order);
}

std::vector<SymbolicState> symb_successors(const SymbolicState& s, const SymbolicAction& a,
                                           const Theory& th) {
  try {
    return symb_step(s, a, th);
  } catch (const IndexMismatch&) {
    return {};
  }
}

std::vector<SymbolicAction> offered_actions(const SymbolicState& s, const HandleSet& w) {
  std::set<Skeleton> skels;
  for (const auto* side : {&s.left, &s.right})
    for (const auto& k : *side) {
      if (k.is_ghost()) continue;
      for (Process p : k.procs)
        if (p.is_prefix())
          skels.insert({p.kind() == ProcKind::In ? Skeleton::Kind::In : Skeleton::Kind::Out,
                        p.channel()});
    }
  const HandleSet dom = s.domain();
  std::vector<SymbolicAction> out;
  for (const auto& sk : skels) {
    if (sk.kind == Skeleton::Kind::In)
      out.push_back(SymbolicAction::in(sk.channel, s.input_counter(sk.channel), w));
    else
      out.push_back(SymbolicAction::out(sk.channel, next_output_index(sk.channel, dom)));
  }
  return out;
}

std::vector<SymbolicAction> enabled_cover(const SymbolicState& s, const Theory& th) {
  std::vector<SymbolicAction> out;
  for (auto& a : offered_actions(s, s.domain()))
    if (!symb_step(s, a, th).empty()) out.push_back(std::move(a));
  return out;
}

// ---------------------------------------------------------------- λθ

Term Lambda::of(Term x) {
  if (auto it = memo_.find(x); it != memo_.end()) return it->second;
  const Handle hv = x.handle_value();
  auto it = theta_.find(SecondOrderVar{hv.channel, hv.index});
  if (it == theta_.end())
    throw std::invalid_argument("no recipe for X(" + hv.channel.name() + "," +
                                std::to_string(hv.index) + ")");
  Frame phi = apply(x.fo_frame());
  Term v = th_.apply_recipe(it->second, phi);
  memo_.emplace(x, v);
  return v;
}

Term Lambda::apply(Term t) {
  if (!t.has_fo_var()) return t;
  auto rec = [&](auto&& self, Term u) -> Term {
    if (!u.has_fo_var()) return u;
    if (u.is_fo_var()) return of(u);
    std::vector<Term> args;
    args.reserve(u.args().size());
    for (Term a : u.args()) args.push_back(self(self, a));
    return Term::app(u.symbol(), std::move(args));
  };
  return th_.normalize(rec(rec, t));
}

Frame Lambda::apply(Frame f) {
  if (!f.has_fo_var()) return f;
  std::vector<std::pair<Handle, Term>> es;
  for (const auto& [h, t] : f.entries()) es.emplace_back(h, apply(t));
  return Frame::from_entries(std::move(es));
}

Process Lambda::apply(Process p) {
  return map_terms(p, [this](Term t) { return apply(t); });
}

Term lambda_of(const SecondOrderSubst& theta, Term fo_var, const Theory& th) {
  Lambda l(theta, th);
  return l.of(fo_var);
}

namespace {

void check_theta_domain(const SecondOrderSubst& theta, const SymbolicState& s) {
  std::size_t expected = 0;
  for (const auto& [c, n] : s.counters) {
    expected += n;
    for (std::uint32_t i = 0; i < n; ++i)
      if (!theta.count(SecondOrderVar{c, i}))
        throw std::invalid_argument("θ lacks X(" + c.name() + "," + std::to_string(i) + ")");
  }
  if (theta.size() != expected)
    throw std::invalid_argument("θ binds variables beyond the input counters");
}

}  // namespace

bool is_solution(const SecondOrderSubst& theta, const SymbolicState& s, const Theory& th) {
  check_theta_domain(theta, s);
  Lambda l(theta, th);
  try {
    for (const auto& lit : s.constraints) {
      const bool eq = l.apply(lit.lhs) == l.apply(lit.rhs);
      if (eq != lit.positive) return false;
    }
  } catch (const std::invalid_argument&) {
    return false;
  }
  return true;
}

TwinState concretize_state(const SymbolicState& s, const SecondOrderSubst& theta,
                           const Theory& th) {
  if (!is_solution(theta, s, th)) throw std::invalid_argument("θ is not a solution of the state");
  Lambda l(theta, th);
  auto side = [&](const std::vector<Configuration>& ks) {
    std::vector<Configuration> out;
    for (const auto& k : ks) {
      if (k.is_ghost()) {
        out.push_back(Configuration::dead(k.age(), l.apply(k.frame)));
        continue;
      }
      std::vector<Process> procs;
      for (Process p : k.procs) procs.push_back(l.apply(p));
      out.push_back(Configuration::alive(std::move(procs), l.apply(k.frame)));
    }
    canonicalize(out);
    return out;
  };
  return TwinState{side(s.left), side(s.right)};
}

}  // namespace porcheck
