#include <doctest.h>

#include <stdexcept>

#include "porcheck/kernel.hpp"

using namespace porcheck::kernel;

namespace {

constexpr Action a = 0, b = 1, c = 2;

// 0 -a-> 1 -b-> 3 and 0 -b-> 2 -a-> 3.
ExplicitLTS diamond() {
  ExplicitLTS l(4, 2);
  l.set(0, a, 1);
  l.set(0, b, 2);
  l.set(1, b, 3);
  l.set(2, a, 3);
  return l;
}

// b disables a: 0 -a-> 1, 0 -b-> 2, nothing else.
ExplicitLTS violator() {
  ExplicitLTS l(3, 2);
  l.set(0, a, 1);
  l.set(0, b, 2);
  return l;
}

PsetAssignment everything(const ExplicitLTS& l) {
  return [&l](State s) { return l.enabled_set(s); };
}

std::vector<std::uint32_t> identity_rank(std::uint32_t n) {
  std::vector<std::uint32_t> r(n);
  for (std::uint32_t i = 0; i < n; ++i) r[i] = i;
  return r;
}

}  // namespace

TEST_SUITE("kernel-por") {
  TEST_CASE("greatest_independence") {
    const ExplicitLTS d = diamond();
    const IndependenceRelation ind = greatest_independence(d);
    CHECK(ind.indep(a, 0, b));
    CHECK(ind.indep(b, 0, a));
    CHECK_FALSE(ind.indep(a, 0, a));

    // a enables b.
    ExplicitLTS chain(3, 2);
    chain.set(0, a, 1);
    chain.set(1, b, 2);
    CHECK_FALSE(greatest_independence(chain).indep(a, 0, b));
    CHECK_FALSE(greatest_independence(violator()).indep(a, 0, b));
  }

  TEST_CASE("greatest_independence equals per-triple clauses") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      RandomLtsParams p;
      p.max_states = 20;
      const ExplicitLTS l = random_lts(seed, p);
      const IndependenceRelation ind = greatest_independence(l);
      for (State s = 0; s < l.state_count(); ++s)
        for (Action x = 0; x < l.action_count(); ++x)
          for (Action y = 0; y < l.action_count(); ++y)
            CHECK(ind.indep(x, s, y) == (x != y && independence_clauses_hold(l, x, s, y) &&
                                         independence_clauses_hold(l, y, s, x)));
    }
  }

  TEST_CASE("is_persistent") {
    const ExplicitLTS d = diamond();
    const IndependenceRelation ind = greatest_independence(d);
    CHECK(is_persistent(d.enabled_set(0), 0, d, ind));
    CHECK(is_persistent({a}, 0, d, ind));
    CHECK_THROWS_AS(is_persistent({c}, 0, d, ind), std::invalid_argument);

    const ExplicitLTS v = violator();
    const IndependenceRelation vi = greatest_independence(v);
    CHECK_FALSE(is_persistent({a}, 0, v, vi));
    CHECK(is_persistent({a, b}, 0, v, vi));
  }

  TEST_CASE("conditional_stubborn") {
    const ExplicitLTS d = diamond();
    const IndependenceRelation ind = greatest_independence(d);
    CHECK(conditional_stubborn(d, ind, 0, a) == ActionSet{a});
    const ExplicitLTS v = violator();
    const IndependenceRelation vi = greatest_independence(v);
    CHECK(conditional_stubborn(v, vi, 0, a) == ActionSet{a, b});
    CHECK_THROWS_AS(conditional_stubborn(v, vi, 1, a), std::invalid_argument);
    CHECK(stubborn_to_persistent({a, b}, 0, v, vi) == ActionSet{a, b});
  }

  TEST_CASE("persistent_finals") {
    const ExplicitLTS v = violator();
    const IndependenceRelation vi = greatest_independence(v);
    CHECK(persistent_finals(v, 0, stubborn_assignment(v, vi)) == v.reachable_finals(0));
    // Negative control: a non-persistent assignment loses a final state.
    const PsetAssignment only_a = [&v](State s) {
      const ActionSet e = v.enabled_set(s);
      return e.empty() ? e : ActionSet{e[0]};
    };
    CHECK(persistent_finals(v, 0, only_a) != v.reachable_finals(0));
  }

  TEST_CASE("sleep_explore") {
    const ExplicitLTS d = diamond();
    const IndependenceRelation ind = greatest_independence(d);
    const SleepResult r = sleep_explore(d, 0, ind, everything(d), identity_rank(2));
    CHECK(r.finals == std::set<State>{3});
    CHECK(r.final_executions == 1);
    CHECK(count_final_paths(d, 0) == 2);

    ExplicitLTS chain(4, 3);
    chain.set(0, a, 1);
    chain.set(1, b, 2);
    chain.set(2, c, 3);
    const IndependenceRelation ci = greatest_independence(chain);
    const SleepResult rc = sleep_explore(chain, 0, ci, everything(chain), identity_rank(3));
    CHECK(rc.finals == chain.reachable_finals(0));
    CHECK(rc.final_executions == count_final_paths(chain, 0));
  }

  TEST_CASE("sleep_explore handles cycles") {
    // 0 -a-> 1 -a-> 0, 0 -b-> 2.
    ExplicitLTS l(3, 2);
    l.set(0, a, 1);
    l.set(1, a, 0);
    l.set(0, b, 2);
    CHECK_FALSE(is_acyclic(l, 0));
    const IndependenceRelation ind = greatest_independence(l);
    const SleepResult r = sleep_explore(l, 0, ind, stubborn_assignment(l, ind), identity_rank(2));
    CHECK(r.finals == l.reachable_finals(0));
  }

  TEST_CASE("trace_class") {
    const ExplicitLTS d = diamond();
    const IndependenceRelation ind = greatest_independence(d);
    CHECK(trace_class({a, b}, 0, d, ind) == std::set<Trace>{{a, b}, {b, a}});
    CHECK(trace_class({a}, 0, d, ind) == std::set<Trace>{{a}});
    CHECK_THROWS_AS(trace_class({a, a}, 0, d, ind), std::invalid_argument);
    const ExplicitLTS v = violator();
    CHECK(trace_class({a}, 0, v, greatest_independence(v)) == std::set<Trace>{{a}});
  }

  TEST_CASE("random_lts respects its bounds") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      RandomLtsParams p;
      p.allow_cycles = seed % 2 == 0;
      const ExplicitLTS l = random_lts(seed, p);
      CHECK(l.state_count() <= p.max_states);
      CHECK(l.action_count() <= p.max_actions);
      CHECK(l.reachable(0).size() == l.state_count());
      if (!p.allow_cycles) CHECK(is_acyclic(l, 0));
    }
    CHECK(random_lts(7).state_count() == random_lts(7).state_count());
  }
}
