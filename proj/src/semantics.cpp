#include "porcheck/semantics.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>
#include <unordered_set>

namespace porcheck {

// ---------------------------------------------------------------- Configuration

Configuration Configuration::alive(std::vector<Process> procs, Frame frame) {
  canonicalize(procs);
  return Configuration{std::move(procs), -1, frame};
}

Configuration Configuration::dead(std::uint32_t age, Frame frame) {
  return Configuration{{}, static_cast<std::int32_t>(age), frame};
}

bool Configuration::quiescent() const {
  return std::all_of(procs.begin(), procs.end(), [](Process p) { return p.is_prefix(); });
}

std::size_t Configuration::hash() const {
  std::size_t h = hash_combine(static_cast<std::size_t>(ghost + 1), frame.hash());
  for (Process p : procs) h = hash_combine(h, p.hash());
  return h;
}

std::string Configuration::str() const {
  if (is_ghost()) return "(⊥_" + std::to_string(ghost) + "; " + frame.str() + ")";
  std::string body;
  if (procs.empty()) body = "0";
  for (std::size_t i = 0; i < procs.size(); ++i) {
    if (i) body += ", ";
    body += procs[i].str();
  }
  return "({" + body + "}; " + frame.str() + ")";
}

std::strong_ordering operator<=>(const Configuration& a, const Configuration& b) {
  if (auto c = a.ghost <=> b.ghost; c != 0) return c;
  if (auto c = compare(a.frame, b.frame); c != 0) return c;
  for (std::size_t i = 0; i < a.procs.size() && i < b.procs.size(); ++i)
    if (auto c = compare(a.procs[i], b.procs[i]); c != 0) return c;
  return a.procs.size() <=> b.procs.size();
}

void canonicalize(std::vector<Process>& multiset) {
  std::sort(multiset.begin(), multiset.end(),
            [](Process x, Process y) { return compare(x, y) < 0; });
}

void canonicalize(std::vector<Configuration>& set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

// ---------------------------------------------------------------- actions

std::string ConcreteAction::str() const {
  switch (kind) {
    case Kind::In:
      return "in(" + channel.name() + ", " + recipe.str() + ")";
    case Kind::Out:
      return "out(" + channel.name() + ", " + handle().str() + ")";
    case Kind::Tau:
      return "tau";
  }
  return "?";
}

ConcreteTrace obs(const ConcreteTrace& tr) {
  ConcreteTrace out;
  for (const auto& a : tr)
    if (a.observable()) out.push_back(a);
  return out;
}

std::string trace_str(const ConcreteTrace& tr) {
  std::string out;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (i) out += " . ";
    out += tr[i].str();
  }
  return out.empty() ? "ε" : out;
}

// ---------------------------------------------------------------- transitions

namespace {

std::vector<Process> without(const std::vector<Process>& procs, std::size_t i) {
  std::vector<Process> rest;
  rest.reserve(procs.size());
  for (std::size_t j = 0; j < procs.size(); ++j)
    if (j != i) rest.push_back(procs[j]);
  return rest;
}

}  // namespace

std::vector<Configuration> concrete_step(const Configuration& k, const ConcreteAction& alpha,
                                         const Theory& th) {
  std::vector<Configuration> out;
  if (k.is_ghost()) return out;
  const auto& ps = k.procs;
  switch (alpha.kind) {
    case ConcreteAction::Kind::In: {
      if (!handle_set_subset(recipe_vars(alpha.recipe), k.domain())) return out;
      Term m = th.apply_recipe(alpha.recipe, k.frame);
      for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i].kind() != ProcKind::In || !(ps[i].channel() == alpha.channel)) continue;
        auto rest = without(ps, i);
        rest.push_back(substitute(ps[i].cont(), ps[i].var(), m, &th));
        out.push_back(Configuration::alive(std::move(rest), k.frame));
      }
      break;
    }
    case ConcreteAction::Kind::Out: {
      if (alpha.index != next_output_index(alpha.channel, k.domain())) return out;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i].kind() != ProcKind::Out || !(ps[i].channel() == alpha.channel)) continue;
        auto rest = without(ps, i);
        rest.push_back(ps[i].cont());
        out.push_back(Configuration::alive(
            std::move(rest), k.frame.extend(alpha.handle(), th.normalize(ps[i].message()))));
      }
      break;
    }
    case ConcreteAction::Kind::Tau: {
      for (std::size_t i = 0; i < ps.size(); ++i) {
        Process p = ps[i];
        auto rest = without(ps, i);
        auto emit = [&](std::vector<Process> extra) {
          auto procs = rest;
          procs.insert(procs.end(), extra.begin(), extra.end());
          out.push_back(Configuration::alive(std::move(procs), k.frame));
        };
        switch (p.kind()) {
          case ProcKind::If:
            emit({th.eq_mod_e(p.lhs(), p.rhs()) ? p.left() : p.right()});
            break;
          case ProcKind::Choice:
            emit({p.left()});
            emit({p.right()});
            break;
          case ProcKind::Par:
            emit({p.left(), p.right()});
            break;
          case ProcKind::Null:
            emit({});
            break;
          default:
            break;
        }
      }
      break;
    }
  }
  canonicalize(out);
  return out;
}

std::vector<std::vector<Process>> resolve_concrete(Process p, const Theory& th) {
  switch (p.kind()) {
    case ProcKind::Null:
      return {{}};
    case ProcKind::In:
    case ProcKind::Out:
      return {{p}};
    case ProcKind::If:
      return resolve_concrete(th.eq_mod_e(p.lhs(), p.rhs()) ? p.left() : p.right(), th);
    case ProcKind::Choice: {
      auto l = resolve_concrete(p.left(), th);
      auto r = resolve_concrete(p.right(), th);
      l.insert(l.end(), r.begin(), r.end());
      return l;
    }
    case ProcKind::Par: {
      auto l = resolve_concrete(p.left(), th);
      auto r = resolve_concrete(p.right(), th);
      std::vector<std::vector<Process>> out;
      for (const auto& x : l)
        for (const auto& y : r) {
          auto m = x;
          m.insert(m.end(), y.begin(), y.end());
          out.push_back(std::move(m));
        }
      return out;
    }
  }
  return {};
}

std::vector<Configuration> tau_closure(const Configuration& k, const Theory& th) {
  if (k.is_ghost()) return {};
  std::vector<std::vector<Process>> acc{{}};
  for (Process p : k.procs) {
    auto options = resolve_concrete(p, th);
    std::vector<std::vector<Process>> next;
    for (const auto& a : acc)
      for (const auto& o : options) {
        auto m = a;
        m.insert(m.end(), o.begin(), o.end());
        next.push_back(std::move(m));
      }
    acc = std::move(next);
  }
  std::vector<Configuration> out;
  for (auto& m : acc) out.push_back(Configuration::alive(std::move(m), k.frame));
  canonicalize(out);
  return out;
}

// ---------------------------------------------------------------- diagnostics

namespace {

bool offers_conflict(const Configuration& k) {
  std::set<std::pair<int, std::string>> seen;
  for (Process p : k.procs) {
    if (!p.is_prefix()) continue;
    if (!seen.emplace(static_cast<int>(p.kind()), p.channel().name()).second) return true;
  }
  return false;
}

std::vector<Channel> offered_channels(const std::vector<Configuration>& ks, ProcKind kind) {
  std::vector<Channel> out;
  for (const auto& k : ks)
    for (Process p : k.procs)
      if (p.kind() == kind && std::find(out.begin(), out.end(), p.channel()) == out.end())
        out.push_back(p.channel());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool action_deterministic(const Configuration& k, const Theory& th, std::uint32_t depth,
                          std::uint32_t maxlen) {
  std::deque<std::pair<Configuration, std::uint32_t>> queue{{k, 0}};
  std::unordered_set<Configuration> seen{k};
  while (!queue.empty()) {
    auto [cur, len] = queue.front();
    queue.pop_front();
    if (offers_conflict(cur)) return false;
    std::vector<ConcreteAction> actions{ConcreteAction::tau()};
    if (len < maxlen) {
      for (Channel c : offered_channels({cur}, ProcKind::Out))
        actions.push_back(ConcreteAction::out(c, next_output_index(c, cur.domain())));
      auto ins = offered_channels({cur}, ProcKind::In);
      if (!ins.empty())
        for (Term r : th.recipe_basis({cur.frame}, cur.domain(), depth))
          for (Channel c : ins) actions.push_back(ConcreteAction::in(c, r));
    }
    for (const auto& a : actions)
      for (auto& next : concrete_step(cur, a, th))
        if (seen.insert(next).second) queue.emplace_back(next, len + (a.observable() ? 1 : 0));
  }
  return true;
}

namespace {

struct InclusionSearch {
  const Theory& th;
  std::uint32_t depth;
  std::uint32_t maxlen;
  std::set<std::tuple<std::size_t, std::vector<Configuration>, std::vector<Configuration>>> visited;
  ConcreteTrace trace;
  InclusionVerdict result;

  static std::vector<Configuration> after(const std::vector<Configuration>& ks,
                                          const ConcreteAction& a, const Theory& th) {
    std::vector<Configuration> out;
    for (const auto& k : ks)
      for (const auto& s : concrete_step(k, a, th)) {
        auto q = tau_closure(s, th);
        out.insert(out.end(), q.begin(), q.end());
      }
    canonicalize(out);
    return out;
  }

  bool run(const std::vector<Configuration>& as, const std::vector<Configuration>& bs) {
    if (!visited.emplace(trace.size(), as, bs).second) return true;
    for (const auto& a : as) {
      bool matched = std::any_of(bs.begin(), bs.end(), [&](const Configuration& b) {
        return th.static_equiv(a.frame, b.frame, depth).equivalent;
      });
      if (!matched) {
        result = InclusionVerdict{false, trace, a.frame};
        return false;
      }
    }
    if (trace.size() >= maxlen || as.empty()) return true;
    const HandleSet dom = as.front().domain();
    // Recipes with equal values in every frame lead to equal successors.
    std::vector<Frame> frames;
    for (const auto* side : {&as, &bs})
      for (const auto& k : *side) frames.push_back(k.frame);
    const std::vector<Term> basis = th.recipe_basis(frames, dom, depth);
    std::vector<ConcreteAction> actions;
    for (Channel c : offered_channels(as, ProcKind::In))
      for (Term r : basis) actions.push_back(ConcreteAction::in(c, r));
    for (Channel c : offered_channels(as, ProcKind::Out))
      actions.push_back(ConcreteAction::out(c, next_output_index(c, dom)));
    for (const auto& act : actions) {
      auto as2 = after(as, act, th);
      if (as2.empty()) continue;
      auto bs2 = after(bs, act, th);
      trace.push_back(act);
      bool ok = run(as2, bs2);
      trace.pop_back();
      if (!ok) return false;
    }
    return true;
  }
};

}  // namespace

InclusionVerdict trace_inclusion_naive(const Configuration& a0, const Configuration& b0,
                                       const Theory& th, std::uint32_t depth,
                                       std::uint32_t maxlen) {
  if (a0.domain() != b0.domain())
    throw std::invalid_argument("trace inclusion between configurations of different domains");
  InclusionSearch search{th, depth, maxlen, {}, {}, {}};
  search.run(tau_closure(a0, th), tau_closure(b0, th));
  return search.result;
}

}  // namespace porcheck
