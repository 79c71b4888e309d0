#include "porcheck/por.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_set>

namespace porcheck {

std::string trace_str(const SymbolicTrace& tr) {
  std::string out;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (i) out += " . ";
    out += tr[i].str();
  }
  return out.empty() ? "ε" : out;
}

// ---------------------------------------------------------------- collapse

namespace {

bool binds(Process p, Term x) {
  switch (p.kind()) {
    case ProcKind::Null:
      return false;
    case ProcKind::In:
      return p.var() == x || binds(p.cont(), x);
    case ProcKind::Out:
      return binds(p.cont(), x);
    default:
      return binds(p.left(), x) || binds(p.right(), x);
  }
}

bool mentions(Term t, Term x) {
  std::vector<Term> vs;
  collect_vars(t, vs);
  return std::find(vs.begin(), vs.end(), x) != vs.end();
}

Process collapse_cond(Term u, Term v, Process p, Process q, const CollapseOptions& opts) {
  if (p.is_null() && q.is_null()) return Process::null();
  if (p.kind() == q.kind() && p.is_prefix() && p.channel() == q.channel()) {
    if (p.kind() == ProcKind::Out) {
      Term fused = opts.corrupt_delta
                       ? Term::app(Symbol::get("Δ", 3), {p.message(), q.message(), u})
                       : Term::app(Symbol::delta(), {p.message(), q.message(), u, v});
      return Process::out(p.channel(), fused, collapse_cond(u, v, p.cont(), q.cont(), opts));
    }
    const Term x = p.var();
    Process qc = q.cont();
    bool ok = !mentions(u, x) && !mentions(v, x);
    if (ok && q.var() != x) {
      const auto fv = qc.free_vars();
      ok = std::find(fv.begin(), fv.end(), x) == fv.end() && !binds(qc, x);
      if (ok) qc = substitute(qc, q.var(), x, nullptr);
    }
    if (ok) return Process::in(p.channel(), x, collapse_cond(u, v, p.cont(), qc, opts));
  }
  return Process::cond(u, v, p, q);
}

}  // namespace

Process collapse(Process p, const CollapseOptions& opts) {
  switch (p.kind()) {
    case ProcKind::Null:
      return p;
    case ProcKind::In:
      return Process::in(p.channel(), p.var(), collapse(p.cont(), opts));
    case ProcKind::Out:
      return Process::out(p.channel(), p.message(), collapse(p.cont(), opts));
    case ProcKind::If:
      return collapse_cond(p.lhs(), p.rhs(), collapse(p.left(), opts), collapse(p.right(), opts),
                           opts);
    case ProcKind::Par:
      return Process::par(collapse(p.left(), opts), collapse(p.right(), opts));
    case ProcKind::Choice:
      return Process::choice(collapse(p.left(), opts), collapse(p.right(), opts));
  }
  return p;
}

SymbolicState collapse(const SymbolicState& s, const CollapseOptions& opts) {
  SymbolicState out = s;
  for (auto* side : {&out.left, &out.right}) {
    for (auto& k : *side) {
      if (k.is_ghost()) continue;
      for (auto& p : k.procs) p = collapse(p, opts);
      canonicalize(k.procs);
    }
    canonicalize(*side);
  }
  return out;
}

// ---------------------------------------------------------------- trie

void ActionTrie::insert(const SymbolicTrace& tr) {
  std::uint32_t n = 0;
  for (const auto& a : tr) {
    auto& ch = nodes_[n].children;
    auto it = std::find_if(ch.begin(), ch.end(), [&](const auto& e) { return e.first == a; });
    if (it != ch.end()) {
      n = it->second;
      continue;
    }
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_[n].children.emplace_back(a, id);
    nodes_.emplace_back();
    n = id;
  }
}

std::size_t ActionTrie::leaf_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes_) n += node.children.empty() ? 1 : 0;
  return n;
}

std::vector<SymbolicTrace> ActionTrie::leaves() const {
  std::vector<SymbolicTrace> out;
  SymbolicTrace cur;
  auto rec = [&](auto&& self, std::uint32_t n) -> void {
    if (nodes_[n].children.empty()) {
      out.push_back(cur);
      return;
    }
    for (const auto& [a, c] : nodes_[n].children) {
      cur.push_back(a);
      self(self, c);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

// ---------------------------------------------------------------- engine

Engine::Engine(const Theory& th, EngineOptions opts) : th_(th), opts_(opts) {}

Engine::StateId Engine::intern(const SymbolicState& s) {
  if (auto it = ids_.find(s); it != ids_.end()) return it->second;
  const auto id = static_cast<StateId>(states_.size());
  states_.push_back(s);
  ids_.emplace(s, id);
  return id;
}

const std::vector<Engine::StateId>& Engine::successors(StateId s, const SymbolicAction& a) {
  ActKey key{s, a};
  if (auto it = succ_.find(key); it != succ_.end()) return it->second;
  std::vector<StateId> ids;
  for (const auto& n : symb_successors(states_[s], a, th_)) ids.push_back(intern(n));
  return succ_.emplace(std::move(key), std::move(ids)).first->second;
}

const std::vector<SymbolicAction>& Engine::enabled_cover(StateId s) {
  if (auto it = ec_.find(s); it != ec_.end()) return it->second;
  std::vector<SymbolicAction> out;
  for (auto& a : offered_actions(states_[s], states_[s].domain()))
    if (executable(s, a)) out.push_back(std::move(a));
  return ec_.emplace(s, std::move(out)).first->second;
}

bool Engine::indep_ee(StateId s, const SymbolicAction& a, const SymbolicAction& b) {
  if (!executable(s, a) || !executable(s, b))
    throw std::invalid_argument("enabled independence needs executable actions");
  PairKey key{s, a, b};
  if (auto it = ee_.find(key); it != ee_.end()) return it->second;
  auto decide = [&]() {
    if (a.skeleton() == b.skeleton()) return false;
    std::vector<StateId> ab, ba;
    for (StateId sa : std::vector<StateId>(successors(s, a))) {
      const auto& next = successors(sa, b);
      if (next.empty()) return false;
      ab.insert(ab.end(), next.begin(), next.end());
    }
    for (StateId sb : std::vector<StateId>(successors(s, b))) {
      const auto& next = successors(sb, a);
      if (next.empty()) return false;
      ba.insert(ba.end(), next.begin(), next.end());
    }
    for (StateId x : ab)
      for (StateId y : ba)
        if (x != y && !immediately_contradicts(states_[x].constraints, states_[y].constraints))
          return false;
    return true;
  };
  const bool r = decide();
  ee_.emplace(key, r);
  ee_.emplace(PairKey{s, b, a}, r);
  return r;
}

bool Engine::indep_de(StateId s, const SymbolicAction& a, const SymbolicAction& b) {
  if (!executable(s, b)) throw std::invalid_argument("disabled independence needs B executable");
  PairKey key{s, a, b};
  if (auto it = de_.find(key); it != de_.end()) return it->second;
  auto decide = [&]() {
    bool never = true;
    for (StateId sb : std::vector<StateId>(successors(s, b)))
      if (executable(sb, a)) {
        never = false;
        break;
      }
    if (never) return true;
    if (!executable(s, a)) return false;
    const bool enabling = a.is_input() && !b.is_input() && handle_set_contains(a.domain, b.handle());
    return !enabling;
  };
  const bool r = decide();
  de_.emplace(key, r);
  return r;
}

bool Engine::indep(StateId s, const SymbolicAction& a, const SymbolicAction& b) {
  if (!indep_de(s, a, b)) return false;
  return !executable(s, a) || indep_ee(s, a, b);
}

std::vector<SymbolicAction> Engine::stubborn_from_seed(StateId s, const SymbolicAction& seed) {
  std::vector<SymbolicAction> x{seed};
  auto in_x = [&](const SymbolicAction& b) { return std::find(x.begin(), x.end(), b) != x.end(); };
  std::size_t visited_total = 0;
  // Breadth-first over X-avoiding executions, restarted after each addition
  // since a larger X cuts explorations short.
  for (;;) {
    std::optional<SymbolicAction> added;
    std::deque<StateId> queue{s};
    std::unordered_set<StateId> seen{s};
    while (!queue.empty() && !added) {
      const StateId cur = queue.front();
      queue.pop_front();
      if (++visited_total > opts_.stubborn_ceiling) {
        ++fallbacks_;
        return enabled_cover(s);
      }
      const auto ec = enabled_cover(cur);
      for (const auto& b : ec) {
        if (in_x(b)) continue;
        for (const auto& a : x)
          if (!indep(cur, a, b)) {
            added = b;
            break;
          }
        if (added) break;
        for (StateId n : successors(cur, b))
          if (seen.insert(n).second) queue.push_back(n);
      }
    }
    if (!added) break;
    x.push_back(*added);
  }
  std::sort(x.begin(), x.end());
  return x;
}

std::vector<SymbolicAction> Engine::compute_stubborn(StateId s) {
  if (auto it = stubborn_.find(s); it != stubborn_.end()) return it->second;
  const auto ec = enabled_cover(s);
  if (ec.empty()) throw std::invalid_argument("stubborn set of a state with empty enabled cover");
  std::vector<SymbolicAction> best;
  for (const auto& seed : ec) {
    auto x = stubborn_from_seed(s, seed);
    if (best.empty() || x.size() < best.size()) best = std::move(x);
    if (best.size() == 1) break;
  }
  stubborn_.emplace(s, best);
  return best;
}

std::vector<SymbolicAction> Engine::persistent_of(StateId s) {
  const auto t = compute_stubborn(s);
  std::vector<SymbolicAction> out;
  for (const auto& a : enabled_cover(s))
    if (std::find(t.begin(), t.end(), a) != t.end()) out.push_back(a);
  return out;
}

Engine::StateId Engine::collapsed(StateId s) {
  if (auto it = collapsed_.find(s); it != collapsed_.end()) return it->second;
  const StateId c = intern(collapse(states_[s], opts_.collapse));
  collapsed_.emplace(s, c);
  return c;
}

std::vector<SymbolicAction> Engine::sleep_update(StateId view, const std::vector<SymbolicAction>& z,
                                                 const SymbolicAction& a) {
  std::vector<SymbolicAction> out;
  for (const auto& b : z)
    if (executable(view, b) && indep_ee(view, b, a)) out.push_back(b);
  for (const auto& b : persistent_of(view))
    if (b.skeleton() < a.skeleton() && indep_ee(view, b, a)) out.push_back(b);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SleepPair> Engine::sleep_step(const SleepPair& p, const SymbolicAction& a,
                                          bool use_collapse) {
  if (std::find(p.sleep.begin(), p.sleep.end(), a) != p.sleep.end()) return {};
  const StateId s = intern(p.state);
  const StateId view = use_collapse ? collapsed(s) : s;
  if (enabled_cover(view).empty()) return {};
  const auto pers = persistent_of(view);
  if (std::find(pers.begin(), pers.end(), a) == pers.end()) return {};
  const auto z = sleep_update(view, p.sleep, a);
  std::vector<SleepPair> out;
  for (StateId n : successors(s, a)) out.push_back(SleepPair{states_[n], z});
  return out;
}

// ---------------------------------------------------------------- trace sets

TraceSetResult reduced_trace_set(Engine& eng, const SymbolicState& s0, std::uint32_t maxlen,
                                 bool use_collapse, std::size_t budget) {
  TraceSetResult res;
  SymbolicTrace cur;
  std::size_t steps = 0;
  auto rec = [&](auto&& self, Engine::StateId s, const std::vector<SymbolicAction>& z) -> void {
    if (res.budget_exceeded) return;
    if (++steps > budget) {
      res.budget_exceeded = true;
      return;
    }
    const Engine::StateId view = use_collapse ? eng.collapsed(s) : s;
    if (eng.enabled_cover(view).empty()) {
      ++res.executions;
      res.trie.insert(cur);
      return;
    }
    if (cur.size() >= maxlen) {
      res.truncated = true;
      ++res.executions;
      res.trie.insert(cur);
      return;
    }
    bool moved = false;
    for (const auto& a : eng.persistent_of(view)) {
      if (std::find(z.begin(), z.end(), a) != z.end()) continue;
      auto next = eng.sleep_step(SleepPair{eng.state(s), z}, a, use_collapse);
      for (const auto& np : next) {
        moved = true;
        cur.push_back(a);
        self(self, eng.intern(np.state), np.sleep);
        cur.pop_back();
      }
    }
    if (!moved) {
      ++res.executions;
      res.trie.insert(cur);
    }
  };
  rec(rec, eng.intern(s0), {});
  return res;
}

TraceSetResult naive_trace_set(Engine& eng, const SymbolicState& s0, std::uint32_t maxlen,
                               std::size_t budget) {
  TraceSetResult res;
  SymbolicTrace cur;
  std::size_t steps = 0;
  auto rec = [&](auto&& self, Engine::StateId s) -> void {
    if (res.budget_exceeded) return;
    if (++steps > budget) {
      res.budget_exceeded = true;
      return;
    }
    const auto ec = eng.enabled_cover(s);
    if (ec.empty() || cur.size() >= maxlen) {
      res.truncated = res.truncated || !ec.empty();
      ++res.executions;
      res.trie.insert(cur);
      return;
    }
    for (const auto& a : ec)
      for (Engine::StateId n : std::vector<Engine::StateId>(eng.successors(s, a))) {
        cur.push_back(a);
        self(self, n);
        cur.pop_back();
      }
  };
  rec(rec, eng.intern(s0));
  return res;
}

// ---------------------------------------------------------------- concretization

ExploreResult explore_twin_restricted(const ActionTrie& trie, const TwinState& s0,
                                      std::uint32_t depth, const Theory& th,
                                      std::size_t state_budget) {
  ExploreResult res;
  struct Key {
    std::uint32_t node;
    TwinState state;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const { return hash_combine(k.node, k.state.hash()); }
  };
  std::unordered_set<Key, KeyHash> seen;
  std::unordered_set<TwinState> distinct;
  ConcreteTrace path;

  auto rec = [&](auto&& self, std::uint32_t node, const TwinState& s) -> void {
    if (!seen.insert(Key{node, s}).second) return;
    distinct.insert(s);
    if (seen.size() > state_budget) {
      res.budget_exceeded = true;
      return;
    }
    const auto& kids = trie.children(node);
    BadVerdict left = is_side_bad(s, Side::Left, depth, th);
    BadVerdict verdict = left.bad() ? left : is_side_bad(s, Side::Right, depth, th);
    if (verdict.bad()) {
      if (!res.bad_reachable) {
        res.witness = path;
        res.witness_verdict = verdict;
      }
      res.bad_reachable = true;
      res.bad_final_reachable = res.bad_final_reachable || kids.empty();
    }
    if (left.bad()) {
      if (!res.left_bad_reachable) {
        res.left_witness = path;
        res.left_witness_verdict = left;
      }
      res.left_bad_reachable = true;
    }
    if (kids.empty()) ++res.final_states;
    for (const auto& [a, child] : kids) {
      std::vector<ConcreteAction> alphas;
      if (a.is_input()) {
        std::vector<Frame> frames;
        for (const auto* side : {&s.left, &s.right})
          for (const auto& k : *side)
            if (!k.is_ghost() && std::find(frames.begin(), frames.end(), k.frame) == frames.end())
              frames.push_back(k.frame);
        for (Term r : th.recipe_basis(frames, s.domain(), depth))
          alphas.push_back(concretize_action(a, r));
      } else {
        alphas.push_back(concretize_action(a));
      }
      for (const auto& alpha : alphas) {
        auto next = twin_step(s, alpha, th);
        if (!next) continue;
        ++res.transitions;
        path.push_back(alpha);
        self(self, child, *next);
        path.pop_back();
        if (res.budget_exceeded) return;
      }
    }
  };
  rec(rec, 0, s0);
  res.states_visited = distinct.size();
  return res;
}

}  // namespace porcheck
