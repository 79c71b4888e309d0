#include <doctest.h>

#include <algorithm>

#include "porcheck/golden.hpp"
#include "porcheck/symbolic.hpp"
#include "util.hpp"

using namespace porcheck;
using namespace porcheck::test;

namespace {

SymbolicState initial_of(const Model& m) {
  return initial_symbolic(m.query->left_config(), m.query->right_config(), *m.theory);
}

SecondOrderSubst theta(std::vector<std::pair<SecondOrderVar, Term>> entries) {
  return SecondOrderSubst(entries.begin(), entries.end());
}

std::size_t live_procs(const std::vector<Configuration>& side) {
  std::size_t n = 0;
  for (const auto& k : side) n += k.is_ghost() ? 0 : k.procs.size();
  return n;
}

}  // namespace

TEST_SUITE("symbolic-lts") {
  TEST_CASE("lambda_of") {
    Signature sig;
    sig.add(Symbol::get("a", 0));
    sig.add(Symbol::get("h", 1));
    const Theory th(sig);
    const auto x0 = Term::fo_var(ch("c"), 0, Frame());
    CHECK(lambda_of(theta({{{ch("c"), 0}, cst("a")}}), x0, th) == cst("a"));

    const Frame psi = frame({{hd("d", 0), fn("enc", {nm("n"), nm("k")})}});
    const auto xd = Term::fo_var(ch("c"), 0, psi);
    CHECK(lambda_of(theta({{{ch("c"), 0}, w("d", 0)}}), xd, th) == fn("enc", {nm("n"), nm("k")}));

    // x^{c,1}_φ where φ itself mentions x^{c,0}_ψ with ψ ⊊ φ.
    const Frame phi = psi.extend(hd("e", 0), fn("h", {xd}));
    const auto x1 = Term::fo_var(ch("c"), 1, phi);
    const auto th2 = theta({{{ch("c"), 0}, w("d", 0)}, {{ch("c"), 1}, w("e", 0)}});
    CHECK(lambda_of(th2, x1, th) == fn("h", {fn("enc", {nm("n"), nm("k")})}));

    // A recipe reaching outside the variable's frame is rejected.
    CHECK_THROWS_AS(lambda_of(theta({{{ch("c"), 0}, w("e", 0)}}), xd, th), std::invalid_argument);
  }

  TEST_CASE("symb_step on input domains") {
    const Model m = corpus_model("example4_inputs.por");
    const Theory& th = *m.theory;
    const SymbolicState s = initial_of(m);
    const auto small = symb_step(s, SymbolicAction::in(ch("c"), 0, {hd("c", 0)}), th);
    REQUIRE(small.size() == 2);
    for (const auto& t : small) {
      REQUIRE(t.constraints.size() == 1);
      CHECK(live_procs(t.left) == live_procs(t.right));
    }
    CHECK(small[0].constraints[0].positive != small[1].constraints[0].positive);

    const auto large = symb_step(s, SymbolicAction::in(ch("c"), 0, {hd("c", 0), hd("d", 0)}), th);
    CHECK(large.size() == 4);
    const auto mixed = std::count_if(large.begin(), large.end(), [](const SymbolicState& t) {
      return live_procs(t.left) != live_procs(t.right);
    });
    CHECK(mixed == 2);

    CHECK(symb_step(s, SymbolicAction::out(ch("e"), 0), th).empty());
    CHECK_THROWS_AS(symb_step(s, SymbolicAction::in(ch("c"), 1, {}), th), IndexMismatch);
    CHECK(symb_successors(s, SymbolicAction::in(ch("c"), 1, {}), th).empty());
  }

  TEST_CASE("is_solution") {
    const Model m = corpus_model("example4_inputs.por");
    const Theory& th = *m.theory;
    const SymbolicState s = initial_of(m);
    CHECK(is_solution({}, s, th));
    const auto next = symb_step(s, SymbolicAction::in(ch("c"), 0, {hd("c", 0)}), th);
    const auto then_state = std::find_if(next.begin(), next.end(), [](const SymbolicState& t) {
      return t.constraints.at(0).positive;
    });
    REQUIRE(then_state != next.end());
    CHECK(is_solution(theta({{{ch("c"), 0}, cst("t")}}), *then_state, th));
    CHECK_FALSE(is_solution(theta({{{ch("c"), 0}, w("c", 0)}}), *then_state, th));
    CHECK_FALSE(is_solution(theta({{{ch("c"), 0}, cst("ok")}}), *then_state, th));
  }

  TEST_CASE("enabled_cover") {
    const Model m5 = corpus_model("example5_commute.por");
    CHECK(enabled_cover(initial_of(m5), *m5.theory) ==
          std::vector<SymbolicAction>{SymbolicAction::in(ch("c"), 0, {}),
                                      SymbolicAction::out(ch("d"), 0)});
    const Model m6 = corpus_model("example6_stubborn.por");
    CHECK(enabled_cover(initial_of(m6), *m6.theory) ==
          std::vector<SymbolicAction>{SymbolicAction::in(ch("c"), 0, {}),
                                      SymbolicAction::in(ch("d"), 0, {})});

    const Frame phi = frame({{hd("c", 0), cst("a")}});
    SymbolicState g;
    g.left = {Configuration::dead(0, phi),
              Configuration::alive({Process::out(ch("c"), cst("t"), Process())}, phi)};
    g.right = g.left;
    canonicalize(g.left);
    canonicalize(g.right);
    Signature sig;
    sig.add(Symbol::get("a", 0));
    sig.add(Symbol::get("t", 0));
    CHECK(enabled_cover(g, Theory(sig)) ==
          std::vector<SymbolicAction>{SymbolicAction::out(ch("c"), 1)});
  }

  TEST_CASE("concretize_state") {
    const Model m3 = corpus_model("example3_ghosts.por");
    const SymbolicState s3 = initial_of(m3);
    CHECK(concretize_state(s3, {}, *m3.theory) ==
          initial_twin(m3.query->left_config(), m3.query->right_config(), *m3.theory));

    // Then/then successor with a t-producing recipe: out(c, ok) on both sides.
    const Model m4 = corpus_model("example4_inputs.por");
    const auto next = symb_step(initial_of(m4), SymbolicAction::in(ch("c"), 0, {hd("c", 0)}),
                                *m4.theory);
    const auto then_state = std::find_if(next.begin(), next.end(), [](const SymbolicState& t) {
      return t.constraints.at(0).positive;
    });
    REQUIRE(then_state != next.end());
    const TwinState c = concretize_state(*then_state, theta({{{ch("c"), 0}, cst("t")}}), *m4.theory);
    const Process ok = Process::out(ch("c"), cst("ok"), Process());
    for (const auto* side : {&c.left, &c.right}) {
      REQUIRE(side->size() == 1);
      CHECK(side->at(0).procs == std::vector<Process>{ok});
    }

    // Ghost frames are rewritten like alive ones.
    const auto x = Term::fo_var(ch("c"), 0, Frame());
    const Frame phi = frame({{hd("d", 0), fn("h", {x})}});
    SymbolicState g;
    g.left = {Configuration::dead(0, phi), Configuration::alive({}, phi)};
    g.right = {Configuration::alive({}, phi)};
    g.counters = {{ch("c"), 1}};
    Signature sig;
    sig.add(Symbol::get("a", 0));
    sig.add(Symbol::get("h", 1));
    const TwinState cg = concretize_state(g, theta({{{ch("c"), 0}, cst("a")}}), Theory(sig));
    const Frame want = frame({{hd("d", 0), fn("h", {cst("a")})}});
    CHECK(std::count(cg.left.begin(), cg.left.end(), Configuration::dead(0, want)) == 1);
    CHECK(std::count(cg.left.begin(), cg.left.end(), Configuration::alive({}, want)) == 1);
  }

  TEST_CASE("literals") {
    Signature sig;
    sig.add(Symbol::get("a", 0));
    sig.add(Symbol::get("b", 0));
    const Theory th(sig);
    Literal lit;
    CHECK(make_literal(true, cst("a"), cst("a"), th, lit) == LiteralStatus::True);
    CHECK(make_literal(true, cst("a"), cst("b"), th, lit) == LiteralStatus::False);
    const auto x = Term::fo_var(ch("c"), 0, Frame());
    REQUIRE(make_literal(true, x, cst("a"), th, lit) == LiteralStatus::Open);
    ConstraintSet cs;
    CHECK(add_literal(cs, lit));
    CHECK(add_literal(cs, lit));
    CHECK(cs.size() == 1);
    CHECK_FALSE(add_literal(cs, lit.negated()));
    CHECK(immediately_contradicts(cs, {lit.negated()}));
  }
}
