#include <doctest.h>

#include <algorithm>

#include "porcheck/golden.hpp"
#include "porcheck/twin.hpp"
#include "util.hpp"

using namespace porcheck;
using namespace porcheck::test;

namespace {

bool has_config(const std::vector<Configuration>& side, const Configuration& k) {
  return std::find(side.begin(), side.end(), k) != side.end();
}

struct Ghosts {
  Model m = corpus_model("example3_ghosts.por");
  const Theory& th = *m.theory;
  TwinState s0 = initial_twin(m.query->left_config(), m.query->right_config(), th);
  TwinState s1 = *twin_step(s0, ConcreteAction::out(ch("c"), 0), th);
  TwinState s2 = *twin_step(s1, ConcreteAction::out(ch("d"), 0), th);
};

}  // namespace

TEST_SUITE("equivalence-lts") {
  TEST_CASE("initial_twin") {
    Signature sig;
    const Theory th(sig);
    const Configuration nil = Configuration::alive({Process()}, Frame());
    const TwinState s = initial_twin(nil, nil, th);
    CHECK(s.left.size() == 1);
    CHECK(s.right.size() == 1);
    CHECK_FALSE(s.left[0].is_ghost());

    Ghosts g;
    CHECK(g.s0.left.size() == 2);
    CHECK(g.s0.right.size() == 2);
    const Configuration shared = Configuration::alive(
        {Process::out(ch("c"), nm("n"), Process::out(ch("d"), nm("n2"), Process()))}, Frame());
    CHECK(has_config(g.s0.left, shared));
    CHECK(has_config(g.s0.right, shared));
  }

  TEST_CASE("twin_step keeps ghosts") {
    Ghosts g;
    const Configuration a_done = Configuration::alive({}, frame({{hd("c", 0), cst("a")}}));
    const Configuration b_done = Configuration::alive({}, frame({{hd("c", 0), cst("b")}}));
    const Configuration rest = Configuration::alive(
        {Process::out(ch("d"), nm("n2"), Process())}, frame({{hd("c", 0), nm("n")}}));
    CHECK(g.s1.left.size() == 2);
    CHECK(has_config(g.s1.left, a_done));
    CHECK(has_config(g.s1.left, rest));
    CHECK(has_config(g.s1.right, b_done));
    CHECK(has_config(g.s1.right, rest));

    CHECK(has_config(g.s2.left, Configuration::dead(0, frame({{hd("c", 0), cst("a")}}))));
    CHECK(has_config(g.s2.right, Configuration::dead(0, frame({{hd("c", 0), cst("b")}}))));
    CHECK(g.s2.domain() == make_handle_set({hd("c", 0), hd("d", 0)}));
    CHECK(g.s2.age() == 1);

    const auto no_ghosts = twin_step(g.s1, ConcreteAction::out(ch("d"), 0), g.th, false);
    REQUIRE(no_ghosts);
    CHECK(std::none_of(no_ghosts->left.begin(), no_ghosts->left.end(),
                       [](const Configuration& k) { return k.is_ghost(); }));
  }

  TEST_CASE("twin_step rejects unusable recipes") {
    const Model m = corpus_model("example4_inputs.por");
    const TwinState s = initial_twin(m.query->left_config(), m.query->right_config(), *m.theory);
    CHECK_FALSE(twin_step(s, ConcreteAction::in(ch("c"), w("e", 3)), *m.theory));
    CHECK(twin_step(s, ConcreteAction::in(ch("c"), w("d", 0)), *m.theory));
    CHECK_FALSE(twin_step(s, ConcreteAction::out(ch("c"), 0), *m.theory));
  }

  TEST_CASE("alive_at") {
    Ghosts g;
    CHECK(alive_at(g.s2.right, 0) == g.s2.right);
    const auto r1 = alive_at(g.s2.right, 1);
    REQUIRE(r1.size() == 1);
    CHECK_FALSE(r1[0].is_ghost());
    CHECK(r1[0].frame == frame({{hd("c", 0), nm("n")}, {hd("d", 0), nm("n2")}}));
    CHECK(alive_at(g.s1.left, 5) == g.s1.left);
  }

  TEST_CASE("is_bad") {
    Ghosts g;
    const BadVerdict v1 = is_side_bad(g.s1, Side::Left, 2, g.th);
    CHECK(v1.bad());
    CHECK(is_side_bad(g.s1, Side::Right, 2, g.th).bad());
    CHECK(is_side_bad(g.s2, Side::Left, 2, g.th).bad());
    BadnessOptions diag;
    diag.ignore_ghosts = true;
    CHECK_FALSE(is_bad(g.s2, 2, g.th, diag).bad());
    CHECK_FALSE(is_bad(g.s0, 2, g.th).bad());

    const Frame phi = frame({{hd("c", 0), cst("a")}});
    const Configuration k = Configuration::alive({}, phi);
    CHECK_FALSE(is_bad(TwinState{{k}, {k}}, 2, g.th).bad());
  }

  TEST_CASE("explore_twin_naive") {
    Ghosts g;
    const ExploreResult r1 = explore_twin_naive(g.s0, 2, 1, g.th);
    CHECK(r1.bad_reachable);
    CHECK(r1.witness.size() == 1);
    const ExploreResult r2 = explore_twin_naive(g.s0, 2, 2, g.th);
    CHECK(r2.bad_final_reachable);

    const Model self = corpus_model("example1_challenge.por");
    const TwinState t0 =
        initial_twin(self.query->left_config(), self.query->right_config(), *self.theory);
    CHECK_FALSE(explore_twin_naive(t0, 1, 6, *self.theory).bad_reachable);

    const Model bac = corpus_model("bac_flawed.por");
    const TwinState b0 =
        initial_twin(bac.query->left_config(), bac.query->right_config(), *bac.theory);
    const ExploreResult rb = explore_twin_naive(b0, 2, 5, *bac.theory);
    CHECK(rb.left_bad_reachable);
  }
}
