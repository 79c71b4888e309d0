#include <doctest.h>

#include <algorithm>
#include <set>

#include "util.hpp"

using namespace porcheck;
using namespace porcheck::test;

TEST_SUITE("term-algebra") {
  TEST_CASE("hash-consing gives pointer equality") {
    CHECK(fn("enc", {nm("n"), nm("k")}) == fn("enc", {nm("n"), nm("k")}));
    CHECK(fn("enc", {nm("n"), nm("k")}) != fn("enc", {nm("k"), nm("n")}));
    CHECK(w("c", 0) == Term::handle(hd("c", 0)));
    CHECK(frame({{hd("c", 0), nm("n")}}) == Frame().extend(hd("c", 0), nm("n")));
  }

  TEST_CASE("normalize") {
    const Theory th = enc_theory();
    CHECK(th.normalize(fn("dec", {fn("enc", {nm("n"), nm("k")}), nm("k")})) == nm("n"));
    CHECK(th.normalize(nm("n")) == nm("n"));
    // Wrong key: already a normal form.
    const Term stuck = fn("dec", {fn("enc", {nm("n"), nm("k")}), nm("k2")});
    CHECK(th.normalize(stuck) == stuck);
    // Innermost redexes first.
    const Term nested =
        fn("h", {fn("dec", {fn("enc", {fn("dec", {fn("enc", {nm("n"), nm("k")}), nm("k")}),
                                        nm("k")}),
                             nm("k")})});
    CHECK(th.normalize(nested) == fn("h", {nm("n")}));

    Signature sig;
    sig.add(Symbol::get("pair", 2));
    sig.add(Symbol::get("proj1", 1));
    sig.add(Symbol::get("enc", 2));
    const Theory pairs(sig, {{fn("proj1", {fn("pair", {var("x"), var("y")})}), var("x")}});
    const Term e = fn("enc", {cst("a"), nm("k")});
    CHECK(pairs.normalize(fn("proj1", {fn("pair", {e, cst("b")})})) == e);
  }

  TEST_CASE("normalize is idempotent on a sample") {
    const Theory th = enc_theory({"a"});
    const std::vector<Term> sample = {
        fn("dec", {fn("dec", {fn("enc", {fn("enc", {cst("a"), nm("k")}), nm("k2")}), nm("k2")}),
                   nm("k")}),
        fn("enc", {fn("dec", {nm("n"), nm("k")}), fn("h", {cst("a")})}),
    };
    for (Term t : sample) CHECK(th.normalize(th.normalize(t)) == th.normalize(t));
  }

  TEST_CASE("eq_mod_e") {
    const Theory th = enc_theory();
    CHECK(th.eq_mod_e(fn("dec", {fn("enc", {nm("n"), nm("k")}), nm("k")}), nm("n")));
    CHECK(th.eq_mod_e(nm("n"), nm("n")));
    CHECK_FALSE(th.eq_mod_e(fn("enc", {nm("n"), nm("k")}), fn("enc", {nm("n"), nm("k2")})));
  }

  TEST_CASE("apply_recipe") {
    const Theory th = enc_theory({"k_pub"});
    const Frame phi = frame({{hd("c", 0), fn("enc", {nm("n"), nm("k")})}});
    CHECK(th.apply_recipe(w("c", 0), phi) == fn("enc", {nm("n"), nm("k")}));
    CHECK(th.apply_recipe(fn("h", {w("c", 0)}), phi) == fn("h", {fn("enc", {nm("n"), nm("k")})}));
    const Frame pub = frame({{hd("c", 0), fn("enc", {nm("m"), cst("k_pub")})}});
    CHECK(th.apply_recipe(fn("dec", {w("c", 0), cst("k_pub")}), pub) == nm("m"));
    CHECK_THROWS_AS(th.apply_recipe(w("d", 0), phi), std::invalid_argument);
  }

  TEST_CASE("next_output_index") {
    CHECK(next_output_index(ch("c"), {}) == 0);
    CHECK(next_output_index(ch("c"), {hd("c", 0)}) == 1);
    CHECK(next_output_index(ch("c"), {hd("d", 0)}) == 0);
    CHECK(next_output_index(ch("c"), make_handle_set({hd("c", 1), hd("c", 0)})) == 2);
  }

  TEST_CASE("enumerate_recipes") {
    Signature with_a;
    with_a.add(Symbol::get("a", 0));
    const Theory ta(with_a);
    CHECK(ta.enumerate_recipes({}, 0) == std::vector<Term>{cst("a")});
    const auto r0 = ta.enumerate_recipes({hd("c", 0)}, 0);
    CHECK(std::set<Term, decltype(&term_less)>(r0.begin(), r0.end(), &term_less) ==
          std::set<Term, decltype(&term_less)>({w("c", 0), cst("a")}, &term_less));

    Signature only_h;
    only_h.add(Symbol::get("h", 1));
    const Theory th(only_h);
    const auto r1 = th.enumerate_recipes({hd("c", 0)}, 1);
    CHECK(r1.size() == 2);
    CHECK(std::count(r1.begin(), r1.end(), w("c", 0)) == 1);
    CHECK(std::count(r1.begin(), r1.end(), fn("h", {w("c", 0)})) == 1);
  }

  TEST_CASE("enumerate_recipes matches a brute-force count") {
    // Depth-d recipes over W ∪ constants with one binary and one unary symbol:
    // N(0) = |W| + |consts|, N(d) = N(0) + N(d-1) + N(d-1)^2.
    const Theory th = enc_theory({"a"});
    const HandleSet wset = {hd("c", 0)};
    std::size_t n = 2;
    CHECK(th.enumerate_recipes(wset, 0).size() == n);
    n = 2 + n + 2 * n * n;  // enc and dec are both binary
    CHECK(th.enumerate_recipes(wset, 1).size() == n);
    const auto& r = th.enumerate_recipes(wset, 1);
    CHECK(std::all_of(r.begin(), r.end(), [](Term t) { return is_recipe(t) && t.depth() <= 1; }));
  }

  TEST_CASE("static_equiv") {
    Signature sig;
    for (const char* c : {"nonce_err", "mac_err", "a", "b"}) sig.add(Symbol::get(c, 0));
    const Theory th(sig);
    const Frame phi = frame({{hd("c", 0), nm("nP")}, {hd("c", 1), cst("nonce_err")}});
    const Frame psi = frame({{hd("c", 0), nm("nP")}, {hd("c", 1), cst("mac_err")}});
    CHECK(th.static_equiv(phi, phi, 2).equivalent);
    const StaticVerdict v = th.static_equiv(phi, psi, 2);
    REQUIRE_FALSE(v.equivalent);
    const std::set<std::string> pair{v.m.str(), v.n.str()};
    CHECK(pair == std::set<std::string>{"w(c,1)", "nonce_err"});
    // Exactly one frame satisfies the test.
    CHECK((th.apply_recipe(v.m, phi) == th.apply_recipe(v.n, phi)) !=
          (th.apply_recipe(v.m, psi) == th.apply_recipe(v.n, psi)));

    const StaticVerdict ab =
        th.static_equiv(frame({{hd("c", 0), cst("a")}}), frame({{hd("c", 0), cst("b")}}), 1);
    REQUIRE_FALSE(ab.equivalent);
    CHECK(std::set<std::string>{ab.m.str(), ab.n.str()} == std::set<std::string>{"w(c,0)", "a"});

    // Two fresh names are indistinguishable.
    CHECK(th.static_equiv(frame({{hd("c", 0), nm("n")}}), frame({{hd("c", 0), nm("m")}}), 2)
              .equivalent);
  }

  TEST_CASE("frame_ext_leq") {
    Signature sig;
    sig.add(Symbol::get("a", 0));
    sig.add(Symbol::get("b", 0));
    const Theory th(sig);
    const Frame phi = frame({{hd("c", 0), cst("a")}});
    const Frame psi = frame({{hd("c", 0), cst("b")}, {hd("d", 0), cst("a")}});
    CHECK(th.frame_ext_leq(phi, phi, 1));
    CHECK(th.frame_ext_leq(Frame(), psi, 1));
    // Oracle: restrict to dom(φ), then compare statically.
    const bool expected = th.static_equiv(phi, psi.restrict(phi.domain()), 1).equivalent;
    CHECK(th.frame_ext_leq(phi, psi, 1) == expected);
    CHECK_FALSE(th.frame_ext_leq(phi, psi, 1));
    CHECK_FALSE(th.frame_ext_leq(psi, phi, 1));
  }

  TEST_CASE("signature and rule validation") {
    Signature sig;
    sig.add(Symbol::get("h", 1));
    CHECK_THROWS(sig.add(Symbol::get("h", 1)));
    CHECK_THROWS(sig.add(Symbol::delta()));
    CHECK_THROWS(validate_rule({var("x"), var("x")}));
    CHECK_THROWS(validate_rule({fn("h", {var("x")}), var("y")}));
    CHECK_NOTHROW(validate_rule({fn("h", {var("x")}), var("x")}));
  }

  TEST_CASE("recipe_vars") {
    CHECK(recipe_vars(fn("enc", {w("c", 0), fn("h", {w("d", 1)})})) ==
          make_handle_set({hd("d", 1), hd("c", 0)}));
    CHECK(recipe_vars(cst("a")).empty());
  }
}
