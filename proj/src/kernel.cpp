#include "porcheck/kernel.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <tuple>

namespace porcheck::kernel {

// ---------------------------------------------------------------- ExplicitLTS

ExplicitLTS::ExplicitLTS(std::uint32_t states, std::uint32_t actions)
    : states_(states), actions_(actions), delta_(std::size_t{states} * actions, kNone) {}

void ExplicitLTS::set(State s, Action a, State t) {
  if (s >= states_ || t >= states_ || a >= actions_)
    throw std::out_of_range("transition outside the LTS");
  delta_[s * actions_ + a] = t;
}

void ExplicitLTS::remove(State s, Action a) { delta_[s * actions_ + a] = kNone; }

ActionSet ExplicitLTS::enabled_set(State s) const {
  ActionSet out;
  for (Action a = 0; a < actions_; ++a)
    if (enabled(s, a)) out.push_back(a);
  return out;
}

State ExplicitLTS::run(State s, const Trace& w) const {
  for (Action a : w) {
    if (s == kNone) break;
    s = delta(s, a);
  }
  return s;
}

std::set<State> ExplicitLTS::reachable(State s0) const {
  std::set<State> seen{s0};
  std::deque<State> todo{s0};
  while (!todo.empty()) {
    State s = todo.front();
    todo.pop_front();
    for (Action a = 0; a < actions_; ++a)
      if (State t = delta(s, a); t != kNone && seen.insert(t).second) todo.push_back(t);
  }
  return seen;
}

std::set<State> ExplicitLTS::reachable_finals(State s0) const {
  std::set<State> out;
  for (State s : reachable(s0))
    if (is_final(s)) out.insert(s);
  return out;
}

// ---------------------------------------------------------------- independence

IndependenceRelation::IndependenceRelation(std::uint32_t states, std::uint32_t actions)
    : actions_(actions), bits_(std::size_t{states} * actions * actions, false) {}

void IndependenceRelation::set(Action a, State s, Action b, bool v) {
  bits_[index(a, s, b)] = v;
  bits_[index(b, s, a)] = v;
}

std::size_t IndependenceRelation::size() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

bool independence_clauses_hold(const ExplicitLTS& l, Action a, State s, Action b) {
  const State sa = l.delta(s, a);
  if (sa != ExplicitLTS::kNone && l.enabled(s, b) != l.enabled(sa, b)) return false;
  const State sb = l.delta(s, b);
  if (sa != ExplicitLTS::kNone && sb != ExplicitLTS::kNone) {
    const State ab = l.delta(sa, b);
    const State ba = l.delta(sb, a);
    if (ab == ExplicitLTS::kNone || ab != ba) return false;
  }
  return true;
}

IndependenceRelation greatest_independence(const ExplicitLTS& l) {
  const auto n = l.state_count();
  const auto k = l.action_count();
  IndependenceRelation ind(n, k);
  for (State s = 0; s < n; ++s)
    for (Action a = 0; a < k; ++a)
      for (Action b = a + 1; b < k; ++b) ind.set(a, s, b, true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (State s = 0; s < n; ++s)
      for (Action a = 0; a < k; ++a)
        for (Action b = a + 1; b < k; ++b)
          if (ind.indep(a, s, b) && (!independence_clauses_hold(l, a, s, b) ||
                                     !independence_clauses_hold(l, b, s, a))) {
            ind.set(a, s, b, false);
            changed = true;
          }
  }
  return ind;
}

// ---------------------------------------------------------------- persistent / stubborn

namespace {

bool contains(const ActionSet& t, Action a) { return std::binary_search(t.begin(), t.end(), a); }

// States reachable from s through actions outside t, s included, in BFS order.
std::vector<State> avoiding_reach(const ExplicitLTS& l, State s, const ActionSet& t) {
  std::vector<State> order{s};
  std::set<State> seen{s};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Action a = 0; a < l.action_count(); ++a) {
      if (contains(t, a)) continue;
      if (State n = l.delta(order[i], a); n != ExplicitLTS::kNone && seen.insert(n).second)
        order.push_back(n);
    }
  return order;
}

}  // namespace

bool is_persistent(const ActionSet& t, State s, const ExplicitLTS& l,
                   const IndependenceRelation& ind) {
  for (Action a : t)
    if (!l.enabled(s, a)) throw std::invalid_argument("persistent candidate not within E(s)");
  for (State r : avoiding_reach(l, s, t))
    for (Action b : l.enabled_set(r)) {
      if (contains(t, b)) continue;
      for (Action a : t)
        if (!ind.indep(b, r, a)) return false;
    }
  return true;
}

ActionSet conditional_stubborn(const ExplicitLTS& l, const IndependenceRelation& ind, State s,
                               Action seed) {
  if (seed >= l.action_count() || !l.enabled(s, seed))
    throw std::invalid_argument("stubborn seed not enabled");
  ActionSet t{seed};
  while (true) {
    std::optional<Action> add;
    for (State r : avoiding_reach(l, s, t)) {
      for (Action b : l.enabled_set(r)) {
        if (contains(t, b)) continue;
        for (Action a : t)
          if (!ind.indep(a, r, b)) {
            add = b;
            break;
          }
        if (add) break;
      }
      if (add) break;
    }
    if (!add) return t;
    t.insert(std::lower_bound(t.begin(), t.end(), *add), *add);
  }
}

ActionSet stubborn_to_persistent(const ActionSet& t, State s, const ExplicitLTS& l,
                                 const IndependenceRelation& ind) {
  ActionSet out;
  for (Action a : t)
    if (l.enabled(s, a)) out.push_back(a);
  if (out.empty() || !is_persistent(out, s, l, ind))
    throw std::logic_error("stubborn set restricted to E(s) is not persistent");
  return out;
}

PsetAssignment stubborn_assignment(const ExplicitLTS& l, const IndependenceRelation& ind) {
  return [&l, &ind](State s) -> ActionSet {
    ActionSet e = l.enabled_set(s);
    if (e.empty()) return {};
    return stubborn_to_persistent(conditional_stubborn(l, ind, s, e.front()), s, l, ind);
  };
}

std::set<State> persistent_finals(const ExplicitLTS& l, State s0, const PsetAssignment& pset) {
  std::set<State> seen{s0}, finals;
  std::deque<State> todo{s0};
  while (!todo.empty()) {
    State s = todo.front();
    todo.pop_front();
    if (l.is_final(s)) finals.insert(s);
    for (Action a : pset(s))
      if (State t = l.delta(s, a); t != ExplicitLTS::kNone && seen.insert(t).second)
        todo.push_back(t);
  }
  return finals;
}

// ---------------------------------------------------------------- sleep sets

SleepResult sleep_explore(const ExplicitLTS& l, State s0, const IndependenceRelation& ind,
                          const PsetAssignment& pset, const std::vector<std::uint32_t>& rank) {
  if (rank.size() != l.action_count()) throw std::invalid_argument("rank must cover every action");
  SleepResult res;
  std::set<std::pair<State, ActionSet>> seen;
  std::vector<std::pair<State, ActionSet>> stack{{s0, {}}};
  seen.insert(stack.back());
  while (!stack.empty()) {
    auto [s, z] = std::move(stack.back());
    stack.pop_back();
    ++res.pairs_visited;
    const ActionSet p = pset(s);
    if (p.empty()) {
      res.finals.insert(s);
      ++res.final_executions;
      continue;
    }
    bool moved = false;
    for (Action a : p) {
      if (contains(z, a)) continue;
      moved = true;
      ActionSet z2;
      for (Action b : z)
        if (ind.indep(a, s, b)) z2.push_back(b);
      for (Action b : p)
        if (rank[b] < rank[a] && ind.indep(a, s, b)) z2.push_back(b);
      std::sort(z2.begin(), z2.end());
      z2.erase(std::unique(z2.begin(), z2.end()), z2.end());
      std::pair<State, ActionSet> next{l.delta(s, a), std::move(z2)};
      if (seen.insert(next).second) stack.push_back(std::move(next));
    }
    if (!moved) ++res.blocked_executions;
  }
  return res;
}

bool is_acyclic(const ExplicitLTS& l, State s0) {
  // 0 unvisited, 1 on stack, 2 done
  std::vector<int> mark(l.state_count(), 0);
  std::vector<std::pair<State, Action>> stack{{s0, 0}};
  mark[s0] = 1;
  while (!stack.empty()) {
    auto& [s, a] = stack.back();
    if (a == l.action_count()) {
      mark[s] = 2;
      stack.pop_back();
      continue;
    }
    const State t = l.delta(s, a++);
    if (t == ExplicitLTS::kNone) continue;
    if (mark[t] == 1) return false;
    if (mark[t] == 0) {
      mark[t] = 1;
      stack.emplace_back(t, 0);
    }
  }
  return true;
}

std::size_t count_final_paths(const ExplicitLTS& l, State s0) {
  if (!is_acyclic(l, s0)) throw std::invalid_argument("path counting needs an acyclic LTS");
  std::map<State, std::size_t> memo;
  std::function<std::size_t(State)> go = [&](State s) -> std::size_t {
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    std::size_t n = 0;
    const ActionSet e = l.enabled_set(s);
    if (e.empty()) n = 1;
    for (Action a : e) n += go(l.delta(s, a));
    memo.emplace(s, n);
    return n;
  };
  return go(s0);
}

// ---------------------------------------------------------------- trace classes

std::set<Trace> trace_class(const Trace& w, State s, const ExplicitLTS& l,
                            const IndependenceRelation& ind) {
  const State end = l.run(s, w);
  if (end == ExplicitLTS::kNone) throw std::invalid_argument("trace not executable");
  std::set<Trace> cls{w};
  std::deque<Trace> todo{w};
  while (!todo.empty()) {
    Trace u = std::move(todo.front());
    todo.pop_front();
    State cur = s;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
      if (u[i] != u[i + 1] && ind.indep(u[i], cur, u[i + 1])) {
        Trace v = u;
        std::swap(v[i], v[i + 1]);
        if (cls.insert(v).second) todo.push_back(std::move(v));
      }
      cur = l.delta(cur, u[i]);
    }
  }
  for (const Trace& u : cls)
    if (l.run(s, u) != end) throw std::logic_error("trace class member reaches another state");
  return cls;
}

// ---------------------------------------------------------------- random LTSs

ExplicitLTS random_lts(std::uint64_t seed, const RandomLtsParams& p) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
  };
  auto chance = [&](double q) { return std::bernoulli_distribution(q)(rng); };

  const std::uint32_t comps = uniform(2, 3);
  const std::uint32_t actions = uniform(comps, std::max<std::uint32_t>(comps, p.max_actions));
  // owners[a]: components that synchronize on a
  std::vector<std::vector<std::uint32_t>> owners(actions);
  for (Action a = 0; a < actions; ++a) {
    // The first actions give every component at least one of its own.
    owners[a].push_back(a < comps ? a : uniform(0, comps - 1));
    if (chance(0.25)) {
      std::uint32_t other = uniform(0, comps - 1);
      if (other != owners[a][0]) owners[a].push_back(other);
    }
  }
  // local[c][q][a]: successor local state, or UINT32_MAX
  std::vector<std::uint32_t> sizes(comps);
  std::vector<std::vector<std::vector<std::uint32_t>>> local(comps);
  for (std::uint32_t c = 0; c < comps; ++c) {
    sizes[c] = uniform(2, 5);
    local[c].assign(sizes[c], std::vector<std::uint32_t>(actions, UINT32_MAX));
    std::vector<Action> own;
    for (Action a = 0; a < actions; ++a)
      if (std::find(owners[a].begin(), owners[a].end(), c) != owners[a].end()) own.push_back(a);
    for (std::uint32_t q = 0; q < sizes[c]; ++q) {
      for (Action a : own) {
        if (!chance(0.55)) continue;
        if (p.allow_cycles)
          local[c][q][a] = uniform(0, sizes[c] - 1);
        else if (q + 1 < sizes[c])
          local[c][q][a] = uniform(q + 1, sizes[c] - 1);
      }
      // A spine q -> q+1 keeps every local state reachable.
      if (q + 1 < sizes[c]) local[c][q][own[uniform(0, own.size() - 1)]] = q + 1;
    }
  }

  using Vec = std::vector<std::uint32_t>;
  std::map<Vec, State> ids;
  std::vector<Vec> vecs;
  std::vector<std::tuple<State, Action, Vec>> edges;
  ids.emplace(Vec(comps, 0), 0);
  vecs.emplace_back(comps, 0);
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    for (Action a = 0; a < actions; ++a) {
      Vec next = vecs[i];
      bool ok = true;
      for (std::uint32_t c : owners[a]) {
        const std::uint32_t q = local[c][vecs[i][c]][a];
        if (q == UINT32_MAX) {
          ok = false;
          break;
        }
        next[c] = q;
      }
      if (!ok) continue;
      if (!ids.count(next)) {
        if (vecs.size() >= p.max_states) continue;
        ids.emplace(next, static_cast<State>(vecs.size()));
        vecs.push_back(next);
      }
      edges.emplace_back(static_cast<State>(i), a, next);
    }
  }

  const auto n = static_cast<std::uint32_t>(vecs.size());
  ExplicitLTS raw(n, actions);
  for (const auto& [s, a, v] : edges) raw.set(s, a, ids.at(v));
  // Level = sum of local indices; acyclic products strictly increase it.
  auto level = [&](State s) {
    std::uint32_t sum = 0;
    for (auto q : vecs[s]) sum += q;
    return sum;
  };
  for (State s = 0; s < n; ++s) {
    if (!chance(p.perturbation)) continue;
    const Action a = uniform(0, actions - 1);
    switch (uniform(0, 2)) {
      case 0:
        raw.remove(s, a);
        break;
      default: {
        const State t = uniform(0, n - 1);
        if (p.allow_cycles || level(t) > level(s)) raw.set(s, a, t);
        break;
      }
    }
  }

  // Keep the part reachable from state 0, renumbered in BFS order.
  std::map<State, State> renum;
  std::vector<State> order{0};
  renum.emplace(0, 0);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Action a = 0; a < actions; ++a)
      if (State t = raw.delta(order[i], a); t != ExplicitLTS::kNone && !renum.count(t)) {
        renum.emplace(t, static_cast<State>(order.size()));
        order.push_back(t);
      }
  ExplicitLTS out(static_cast<std::uint32_t>(order.size()), actions);
  for (State s : order)
    for (Action a = 0; a < actions; ++a)
      if (State t = raw.delta(s, a); t != ExplicitLTS::kNone) out.set(renum.at(s), a, renum.at(t));
  return out;
}

}  // namespace porcheck::kernel
