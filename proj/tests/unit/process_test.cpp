#include <doctest.h>

#include "porcheck/golden.hpp"
#include "porcheck/semantics.hpp"
#include "util.hpp"

using namespace porcheck;
using namespace porcheck::test;

namespace {

const char* kChallenge = R"(
theory { sig enc/2, dec/2, h/1; rule dec(enc(x, y), y) -> x; }
const ok, ko, a, b;
names n, k;
channels c, d;
process Challenge =
    out(c, enc(n, k)).in(c, x).if x = enc(h(n), k) then out(c, ok) else out(c, ko)
  | in(d, y).out(d, enc(h(dec(y, k)), k));
process Z = 0;
process Sum = out(c, a) + out(d, b);
process Refl = if a = a then out(c, a) else 0;
process Diff = out(c, a) | out(d, b);
process Same = out(c, a) | out(c, b);
)";

Configuration config(const Model& m, const std::string& p) {
  return Configuration::alive({m.process(p)}, Frame());
}

}  // namespace

TEST_SUITE("process-calculus") {
  TEST_CASE("parse the challenge/response process") {
    const Model m = parse_model(kChallenge);
    const Process p = m.process("Challenge");
    REQUIRE(p.kind() == ProcKind::Par);
    CHECK(p.left().kind() == ProcKind::Out);
    CHECK(p.left().message() == fn("enc", {nm("n"), nm("k")}));
    CHECK(p.left().cont().kind() == ProcKind::In);
    CHECK(p.right().kind() == ProcKind::In);
    CHECK(p.prefix_count() == 6);
    CHECK(p.closed());
    CHECK(m.process("Z").is_null());
  }

  TEST_CASE("parse nested conditionals") {
    const Model m = corpus_model("bac_flawed.por");
    const Process p = m.process("Ksame");
    const Process guard = p.cont().cont();
    REQUIRE(guard.kind() == ProcKind::If);
    CHECK(guard.left().kind() == ProcKind::If);
    CHECK(guard.right().kind() == ProcKind::Out);
    CHECK(guard.right().message() == cst("mac_err"));
    CHECK(m.query->kind == Query::Kind::Include);
    CHECK(m.query->left_frame.size() == 1);
  }

  TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(parse_model("channels c;\nprocess P = out(c, );"), ParseError);
    CHECK_THROWS_AS(parse_model("channels c;\nprocess P = out(e, a);"), ParseError);
    try {
      parse_model("channels c;\nprocess P = in(c x);");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
    }
  }

  TEST_CASE("concrete_step") {
    const Model m = parse_model(kChallenge);
    const Theory& th = *m.theory;
    const Configuration k0 = tau_closure(config(m, "Challenge"), th).at(0);
    const auto next = concrete_step(k0, ConcreteAction::out(ch("c"), 0), th);
    REQUIRE(next.size() == 1);
    CHECK(next[0].frame == frame({{hd("c", 0), fn("enc", {nm("n"), nm("k")})}}));
    CHECK(concrete_step(Configuration::dead(0, Frame()), ConcreteAction::out(ch("c"), 0), th)
              .empty());
    CHECK(concrete_step(k0, ConcreteAction::out(ch("c"), 1), th).empty());

    const auto sum = concrete_step(config(m, "Sum"), ConcreteAction::tau(), th);
    CHECK(sum.size() == 2);
  }

  TEST_CASE("tau_closure") {
    const Model m = parse_model(kChallenge);
    const Theory& th = *m.theory;
    const Configuration q = Configuration::alive({m.process("Diff").left()}, Frame());
    CHECK(tau_closure(q, th) == std::vector<Configuration>{q});
    const auto refl = tau_closure(config(m, "Refl"), th);
    REQUIRE(refl.size() == 1);
    CHECK(refl[0].procs == std::vector<Process>{Process::out(ch("c"), cst("a"), Process())});

    // After the responder reads w(c,0) it resolves deterministically; after
    // the initiator reads w(d,0) the conditional picks the then-branch.
    Configuration k = tau_closure(config(m, "Challenge"), th).at(0);
    const ConcreteTrace steps = {ConcreteAction::out(ch("c"), 0),
                                 ConcreteAction::in(ch("d"), w("c", 0)),
                                 ConcreteAction::out(ch("d"), 0)};
    for (const auto& a : steps) k = tau_closure(concrete_step(k, a, th).at(0), th).at(0);
    const auto last = concrete_step(k, ConcreteAction::in(ch("c"), w("d", 0)), th);
    REQUIRE(last.size() == 1);
    const auto closed = tau_closure(last[0], th);
    REQUIRE(closed.size() == 1);
    CHECK(closed[0].procs == std::vector<Process>{Process::out(ch("c"), cst("ok"), Process())});
  }

  TEST_CASE("obs") {
    CHECK(obs({ConcreteAction::tau()}).empty());
    CHECK(obs({}).empty());
    const ConcreteTrace honest = {ConcreteAction::out(ch("c"), 0), ConcreteAction::tau(),
                                  ConcreteAction::in(ch("d"), w("c", 0)), ConcreteAction::tau(),
                                  ConcreteAction::out(ch("d"), 0), ConcreteAction::tau(),
                                  ConcreteAction::in(ch("c"), w("d", 0)), ConcreteAction::tau()};
    CHECK(trace_str(obs(honest)) ==
          "out(c, w(c,0)) . in(d, w(c,0)) . out(d, w(d,0)) . in(c, w(d,0))");
  }

  TEST_CASE("action_deterministic") {
    const Model m = parse_model(kChallenge);
    CHECK(action_deterministic(config(m, "Diff"), *m.theory, 1, 4));
    CHECK_FALSE(action_deterministic(config(m, "Same"), *m.theory, 1, 4));

    const Model bac = corpus_model("bac_flawed.por");
    const Configuration two = Configuration::alive(
        {bac.process("Ksame"), bac.process("Kdiff")}, bac.query->left_frame);
    CHECK_FALSE(action_deterministic(two, *bac.theory, 1, 2));
  }

  TEST_CASE("trace_inclusion_naive") {
    const Model m = parse_model(kChallenge);
    const auto self = trace_inclusion_naive(config(m, "Challenge"), config(m, "Challenge"),
                                            *m.theory, 1, 4);
    CHECK(self.included);

    const Model bac = corpus_model("bac_flawed.por");
    const auto flawed = trace_inclusion_naive(bac.query->left_config(),
                                              bac.query->right_config(), *bac.theory, 2, 5);
    REQUIRE_FALSE(flawed.included);
    CHECK(flawed.frame.lookup(hd("c", 1)) == cst("nonce_err"));

    // Depth 3 is out of reach for exhaustive recipe enumeration on these frames.
    const Model fixed = corpus_model("bac_fixed.por");
    CHECK(trace_inclusion_naive(fixed.query->left_config(), fixed.query->right_config(),
                                *fixed.theory, 2, 5)
              .included);
  }
}
