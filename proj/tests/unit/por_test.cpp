#include <doctest.h>

#include <algorithm>

#include "porcheck/golden.hpp"
#include "porcheck/por.hpp"
#include "util.hpp"

using namespace porcheck;
using namespace porcheck::test;

namespace {

SymbolicState initial_of(const Model& m) {
  return initial_symbolic(m.query->left_config(), m.query->right_config(), *m.theory);
}

using Actions = std::vector<SymbolicAction>;

Actions sorted(Actions v) {
  std::sort(v.begin(), v.end());
  return v;
}

const SymbolicAction A0 = SymbolicAction::in(ch("c"), 0, {});
const SymbolicAction A1 = SymbolicAction::in(ch("c"), 0, {hd("d", 0)});
const SymbolicAction A2 = SymbolicAction::out(ch("d"), 0);
const SymbolicAction A3 = SymbolicAction::in(ch("d"), 0, {});

const char* kSequential = R"(
const a, b;
channels c, d;
process S = out(c, a).in(d, x).out(c, x);
query equiv S S;
)";

}  // namespace

TEST_SUITE("por-engine") {
  TEST_CASE("indep_ee") {
    const Model m5 = corpus_model("example5_commute.por");
    Engine e5(*m5.theory);
    const auto s5 = e5.intern(initial_of(m5));
    CHECK(e5.indep_ee(s5, A0, A2));

    const Model two = corpus_model("two_outputs.por");
    Engine e2(*two.theory);
    const auto s2 = e2.intern(initial_of(two));
    const auto oc = SymbolicAction::out(ch("c"), 0);
    const auto od = SymbolicAction::out(ch("d"), 0);
    CHECK(e2.indep_ee(s2, oc, od));
    // Oracle: both orders reach the same canonical states.
    const auto cd = e2.successors(e2.successors(s2, oc).at(0), od);
    const auto dc = e2.successors(e2.successors(s2, od).at(0), oc);
    CHECK(cd == dc);
  }

  TEST_CASE("indep_de") {
    const Model m5 = corpus_model("example5_commute.por");
    Engine e5(*m5.theory);
    const auto s5 = e5.intern(initial_of(m5));
    CHECK(e5.indep_de(s5, A0, A2));
    CHECK_FALSE(e5.indep_de(s5, A1, A2));

    // A never becomes executable after B and is not executable in S.
    const Model two = corpus_model("two_outputs.por");
    Engine e2(*two.theory);
    const auto s2 = e2.intern(initial_of(two));
    CHECK(e2.indep_de(s2, A0, SymbolicAction::out(ch("d"), 0)));
  }

  TEST_CASE("indep on Example 6 states") {
    const Model m = corpus_model("example6_stubborn.por");
    Engine eng(*m.theory);
    const auto s = eng.intern(initial_of(m));
    CHECK(eng.indep(s, A0, A3));
    // Same skeleton, both executable.
    CHECK_FALSE(eng.indep(s, A0, A1));

    const auto s1 = eng.successors(s, A3).at(0);
    const auto s2 = eng.successors(s1, A2).at(0);
    CHECK(eng.executable(s2, A1));
    CHECK_FALSE(eng.indep(s2, A1, A0));
  }

  TEST_CASE("compute_stubborn and persistent_of") {
    const Model m = corpus_model("example6_stubborn.por");
    Engine eng(*m.theory);
    const auto s = eng.intern(initial_of(m));
    CHECK(sorted(eng.stubborn_from_seed(s, A0)) == sorted({A0, A1, A2, A3}));
    CHECK(sorted(eng.persistent_of(s)) == sorted({A0, A3}));

    const Model seq = parse_model(kSequential);
    Engine es(*seq.theory);
    const auto ss = es.intern(initial_of(seq));
    CHECK(es.compute_stubborn(ss).size() == 1);
    CHECK(es.persistent_of(ss).size() == 1);

    const Model two = corpus_model("two_outputs.por");
    Engine e2(*two.theory);
    CHECK(e2.persistent_of(e2.intern(initial_of(two))).size() == 1);

    const Model v = corpus_model("example6_singleton.por");
    Engine ev(*v.theory);
    const auto sv = ev.intern(initial_of(v));
    CHECK(ev.stubborn_from_seed(sv, SymbolicAction::out(ch("e"), 0)) ==
          Actions{SymbolicAction::out(ch("e"), 0)});
  }

  TEST_CASE("sleep_step") {
    const Model m = corpus_model("example7_sleep.por");
    Engine eng(*m.theory);
    const SymbolicState s = initial_of(m);
    const auto a0 = SymbolicAction::in(ch("e"), 0, {});
    const auto a3 = SymbolicAction::in(ch("d"), 0, {});
    REQUIRE(a3 < a0);
    const auto next = eng.sleep_step({s, {}}, a0);
    REQUIRE(next.size() == 1);
    CHECK(next[0].sleep == Actions{a3});
    CHECK(eng.sleep_step(next[0], a3).empty());
    CHECK(eng.sleep_step({s, {a0}}, a0).empty());
  }

  TEST_CASE("collapse") {
    const Channel c = ch("c");
    const Term u = Term::fo_var(c, 0, Frame());
    const Term t1 = cst("t1"), t2 = cst("t2"), v = cst("v");
    const Process p1 = Process::out(ch("d"), t1, Process());
    const Process p2 = Process::in(ch("d"), var("y"), Process());
    const Process in = Process::cond(u, v, Process::out(c, t1, p1), Process::out(c, t2, p2));
    const Process want =
        Process::out(c, Term::app(Symbol::delta(), {t1, t2, u, v}), Process::cond(u, v, p1, p2));
    CHECK(collapse(in) == want);

    const Process plain = Process::out(c, t1, Process::in(c, var("x"), Process()));
    CHECK(collapse(plain) == plain);

    // Unified error messages: all three outputs share out(c, ·).
    const Model bac = corpus_model("bac_fixed.por");
    const Process guard = bac.process("Ksame").cont().cont();
    REQUIRE(guard.kind() == ProcKind::If);
    const Process inner = guard.left();
    const Term fused = Term::app(
        Symbol::delta(),
        {Term::app(Symbol::delta(),
                   {inner.left().message(), inner.right().message(), inner.lhs(), inner.rhs()}),
         guard.right().message(), guard.lhs(), guard.rhs()});
    CHECK(collapse(guard) == Process::out(c, fused, Process()));

    CollapseOptions corrupt;
    corrupt.corrupt_delta = true;
    CHECK(collapse(in, corrupt) != want);
  }

  TEST_CASE("reduced_trace_set") {
    const Model two = corpus_model("two_outputs.por");
    Engine e2(*two.theory);
    const auto r2 = reduced_trace_set(e2, initial_of(two), 2, true);
    CHECK(r2.trace_count() == 1);
    CHECK(naive_trace_set(e2, initial_of(two), 2).trace_count() == 2);

    const Model m6 = corpus_model("example6_stubborn.por");
    Engine e6(*m6.theory);
    const auto r6 = reduced_trace_set(e6, initial_of(m6), 6, true);
    Actions roots;
    for (const auto& [a, child] : r6.trie.children(0)) roots.push_back(a);
    CHECK(sorted(roots) == sorted({A0, A3}));

    const Model seq = parse_model(kSequential);
    Engine es(*seq.theory);
    CHECK(reduced_trace_set(es, initial_of(seq), 6, true).trace_count() ==
          naive_trace_set(es, initial_of(seq), 6).trace_count());
  }

  TEST_CASE("ActionTrie counts leaves") {
    ActionTrie t;
    t.insert({A0, A2});
    t.insert({A0, A3});
    t.insert({A0, A2});
    t.insert({A3});
    CHECK(t.leaf_count() == 3);
    CHECK(t.leaves().size() == 3);
  }
}
