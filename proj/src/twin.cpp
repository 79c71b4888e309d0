#include "porcheck/twin.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace porcheck {

HandleSet TwinState::domain() const {
  for (const auto* side : {&left, &right})
    for (const auto& k : *side)
      if (!k.is_ghost()) return k.domain();
  HandleSet best;
  for (const auto* side : {&left, &right})
    for (const auto& k : *side)
      if (k.frame.size() > best.size()) best = k.domain();
  return best;
}

std::uint32_t TwinState::age() const {
  std::uint32_t a = 0;
  for (const auto* side : {&left, &right})
    for (const auto& k : *side)
      if (k.is_ghost()) a = std::max(a, k.age() + 1);
  return a;
}

std::size_t TwinState::hash() const {
  std::size_t h = left.size();
  for (const auto& k : left) h = hash_combine(h, k.hash());
  h = hash_combine(h, 0xabcdef);
  for (const auto& k : right) h = hash_combine(h, k.hash());
  return h;
}

std::string TwinState::str() const {
  auto side = [](const std::vector<Configuration>& ks) {
    std::string out = "{";
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (i) out += ", ";
      out += ks[i].str();
    }
    return out + "}";
  };
  return "<|" + side(left) + " ≈ " + side(right) + "|>";
}

std::string side_name(Side s) {
  switch (s) {
    case Side::Left:
      return "left";
    case Side::Right:
      return "right";
    default:
      return "none";
  }
}

TwinState initial_twin(const Configuration& a0, const Configuration& b0, const Theory& th) {
  if (a0.domain() != b0.domain())
    throw std::invalid_argument("initial configurations have different frame domains");
  return TwinState{tau_closure(a0, th), tau_closure(b0, th)};
}

std::optional<TwinState> twin_step(const TwinState& s, const ConcreteAction& alpha,
                                   const Theory& th, bool with_ghosts) {
  if (!alpha.observable()) throw std::invalid_argument("twin transitions are observable");
  const std::uint32_t n = s.age();
  bool moved = false;
  auto step_side = [&](const std::vector<Configuration>& side) {
    std::vector<Configuration> out;
    for (const auto& k : side) {
      if (k.is_ghost()) {
        out.push_back(k);
        continue;
      }
      auto succ = concrete_step(k, alpha, th);
      if (succ.empty()) {
        if (with_ghosts) out.push_back(Configuration::dead(n, k.frame));
        continue;
      }
      moved = true;
      for (const auto& x : succ) {
        auto q = tau_closure(x, th);
        out.insert(out.end(), q.begin(), q.end());
      }
    }
    canonicalize(out);
    return out;
  };
  TwinState next{step_side(s.left), step_side(s.right)};
  if (!moved) return std::nullopt;
  return next;
}

std::vector<Configuration> alive_at(const std::vector<Configuration>& side, std::uint32_t i) {
  std::vector<Configuration> out;
  for (const auto& k : side)
    if (!k.is_ghost() || k.age() >= i) out.push_back(k);
  return out;
}

BadVerdict is_side_bad(const TwinState& s, Side which, std::uint32_t depth, const Theory& th,
                       BadnessOptions opts) {
  const auto& mine = which == Side::Left ? s.left : s.right;
  const auto& other = which == Side::Left ? s.right : s.left;
  const HandleSet dom = s.domain();
  const std::uint32_t age = s.age();
  for (const auto& k : mine) {
    std::vector<Configuration> targets;
    if (k.is_ghost()) {
      if (opts.ignore_ghosts) continue;
      targets = alive_at(other, k.age());
    } else if (opts.age_bounded_alive) {
      targets = alive_at(other, age);
    } else {
      for (const auto& t : other)
        if (!t.is_ghost() && t.domain() == dom) targets.push_back(t);
    }
    if (opts.ignore_ghosts)
      targets.erase(std::remove_if(targets.begin(), targets.end(),
                                   [](const Configuration& t) { return t.is_ghost(); }),
                    targets.end());
    bool covered = std::any_of(targets.begin(), targets.end(), [&](const Configuration& t) {
      return th.frame_ext_leq(k.frame, t.frame, depth);
    });
    if (covered) continue;
    BadVerdict v{which, k, {}};
    const HandleSet kd = k.domain();
    for (const auto& t : targets) {
      FailedTarget f{t, {}, {}};
      if (handle_set_subset(kd, t.domain())) {
        auto sv = th.static_equiv(k.frame, t.frame.restrict(kd), depth);
        f.m = sv.m;
        f.n = sv.n;
      }
      v.failures.push_back(std::move(f));
    }
    return v;
  }
  return {};
}

BadVerdict is_bad(const TwinState& s, std::uint32_t depth, const Theory& th, BadnessOptions opts) {
  if (auto v = is_side_bad(s, Side::Left, depth, th, opts); v.bad()) return v;
  return is_side_bad(s, Side::Right, depth, th, opts);
}

std::vector<ConcreteAction> enabled_actions(const TwinState& s, std::uint32_t depth,
                                            const Theory& th) {
  std::vector<Channel> ins, outs;
  std::vector<Frame> frames;
  for (const auto* side : {&s.left, &s.right})
    for (const auto& k : *side) {
      if (k.is_ghost()) continue;
      if (std::find(frames.begin(), frames.end(), k.frame) == frames.end())
        frames.push_back(k.frame);
      for (Process p : k.procs) {
        auto& bucket = p.kind() == ProcKind::In ? ins : outs;
        if (p.is_prefix() && std::find(bucket.begin(), bucket.end(), p.channel()) == bucket.end())
          bucket.push_back(p.channel());
      }
    }
  std::sort(ins.begin(), ins.end());
  std::sort(outs.begin(), outs.end());
  const HandleSet dom = s.domain();
  std::vector<ConcreteAction> out;
  if (!ins.empty()) {
    auto basis = th.recipe_basis(frames, dom, depth);
    for (Channel c : ins)
      for (Term r : basis) out.push_back(ConcreteAction::in(c, r));
  }
  for (Channel c : outs) out.push_back(ConcreteAction::out(c, next_output_index(c, dom)));
  return out;
}

ExploreResult explore_twin_naive(const TwinState& s0, std::uint32_t depth, std::uint32_t maxlen,
                                 const Theory& th, std::size_t state_budget) {
  struct Node {
    TwinState state;
    std::int64_t parent;
    ConcreteAction via;
    std::uint32_t len;
  };
  ExploreResult res;
  std::vector<Node> nodes;
  std::unordered_map<TwinState, std::size_t> index;
  nodes.push_back(Node{s0, -1, {}, 0});
  index.emplace(s0, 0);

  auto trace_to = [&](std::size_t i) {
    ConcreteTrace tr;
    for (std::int64_t j = static_cast<std::int64_t>(i); nodes[j].parent >= 0; j = nodes[j].parent)
      tr.push_back(nodes[j].via);
    std::reverse(tr.begin(), tr.end());
    return tr;
  };

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TwinState cur = nodes[i].state;
    const std::uint32_t len = nodes[i].len;
    auto actions = enabled_actions(cur, depth, th);
    const bool final_state = actions.empty();
    res.final_states += final_state ? 1 : 0;

    BadVerdict left = is_side_bad(cur, Side::Left, depth, th);
    BadVerdict verdict = left.bad() ? left : is_side_bad(cur, Side::Right, depth, th);
    if (verdict.bad()) {
      if (!res.bad_reachable) {
        res.witness = trace_to(i);
        res.witness_verdict = verdict;
      }
      res.bad_reachable = true;
      res.bad_final_reachable = res.bad_final_reachable || final_state;
    }
    if (left.bad()) {
      if (!res.left_bad_reachable) {
        res.left_witness = trace_to(i);
        res.left_witness_verdict = left;
      }
      res.left_bad_reachable = true;
      res.left_bad_final_reachable = res.left_bad_final_reachable || final_state;
    }
    if (len >= maxlen) continue;
    for (const auto& a : actions) {
      auto next = twin_step(cur, a, th);
      if (!next) continue;
      ++res.transitions;
      if (index.count(*next)) continue;
      if (nodes.size() >= state_budget) {
        res.budget_exceeded = true;
        continue;
      }
      index.emplace(*next, nodes.size());
      nodes.push_back(Node{std::move(*next), static_cast<std::int64_t>(i), a, len + 1});
    }
  }
  res.states_visited = nodes.size();
  return res;
}

}  // namespace porcheck
