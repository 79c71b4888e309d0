#include "porcheck/golden.hpp"

#include <algorithm>
#include <sstream>

#include "porcheck/check.hpp"
#include "porcheck/corpus.hpp"
#include "porcheck/por.hpp"
#include "porcheck/symbolic.hpp"

namespace porcheck {

Model corpus_model(const std::string& file) { return parse_model(embedded_corpus().at(file)); }

namespace {

using Actions = std::vector<SymbolicAction>;

Actions sorted(Actions v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::string actions_str(const Actions& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].str();
  return out + "}";
}

SymbolicState initial_of(const Model& m) {
  return initial_symbolic(m.query->left_config(), m.query->right_config(), *m.theory);
}

Channel ch(const char* name) { return Channel::named(name); }

GoldenResult finish(GoldenResult r, bool ok, const std::string& detail) {
  r.ok = ok;
  r.detail = detail;
  return r;
}

}  // namespace

GoldenResult golden_challenge_response() {
  GoldenResult r{"challenge/response run and self-equivalence"};
  const Model m = corpus_model("example1_challenge.por");
  const Theory& th = *m.theory;
  const Configuration k0 = m.query->left_config();
  TwinState s = initial_twin(k0, k0, th);
  const Channel c = ch("c"), d = ch("d");
  const ConcreteTrace trace = {ConcreteAction::out(c, 0), ConcreteAction::in(d, Term::handle(c, 0)),
                               ConcreteAction::out(d, 0), ConcreteAction::in(c, Term::handle(d, 0))};
  for (const auto& a : trace) {
    auto next = twin_step(s, a, th);
    if (!next) return finish(r, false, "honest trace blocked at " + a.str());
    s = *next;
  }
  bool success = false;
  std::string frame;
  for (const auto& k : s.left) {
    if (k.is_ghost()) continue;
    frame = k.frame.str();
    const auto w = k.frame.lookup(Handle{d, 0});
    const bool answer = w && w->str() == "enc(h(n), k)";
    const bool ok_out = k.procs.size() == 1 && k.procs[0].str().rfind("out(c, ok)", 0) == 0;
    success = success || (answer && ok_out);
  }
  RunConfig cfg;
  cfg.recipe_depth = 1;
  const Report rep = run_check(m, cfg);
  const bool eq = rep.verdict == Verdict::BoundedEquivalent;
  const bool fewer = rep.por_trace_count && rep.naive_trace_count &&
                     *rep.por_trace_count < *rep.naive_trace_count;
  std::ostringstream os;
  os << "success branch " << (success ? "reached" : "missed") << " with frame " << frame
     << "; verdict " << verdict_name(rep.verdict) << ", traces "
     << rep.por_trace_count.value_or(0) << "/" << rep.naive_trace_count.value_or(0);
  return finish(r, success && eq && fewer, os.str());
}

GoldenResult golden_ghosts() {
  GoldenResult r{"ghost pair badness"};
  const Model m = corpus_model("example3_ghosts.por");
  const Theory& th = *m.theory;
  const TwinState s0 = initial_twin(m.query->left_config(), m.query->right_config(), th);
  auto s1 = twin_step(s0, ConcreteAction::out(ch("c"), 0), th);
  if (!s1) return finish(r, false, "out(c) blocked");
  auto s2 = twin_step(*s1, ConcreteAction::out(ch("d"), 0), th);
  if (!s2) return finish(r, false, "out(d) blocked");
  const std::uint32_t depth = 2;
  const bool s1_bad = is_side_bad(*s1, Side::Left, depth, th).bad();
  const bool s2_bad = is_side_bad(*s2, Side::Left, depth, th).bad();
  BadnessOptions no_ghosts;
  no_ghosts.ignore_ghosts = true;
  const bool s2_bad_without = is_bad(*s2, depth, th, no_ghosts).bad();
  const Report rep = run_check(m, RunConfig{});
  const bool witness_ok = rep.verdict == Verdict::NotEquivalent && rep.witness.size() == 1;
  std::ostringstream os;
  os << "s1 left-bad " << s1_bad << ", s2 left-bad " << s2_bad << ", s2 bad without ghosts "
     << s2_bad_without << ", witness length " << rep.witness.size();
  return finish(r, s1_bad && s2_bad && !s2_bad_without && witness_ok, os.str());
}

GoldenResult golden_input_domains() {
  GoldenResult r{"input domains and successor counts"};
  const Model m = corpus_model("example4_inputs.por");
  const Theory& th = *m.theory;
  const SymbolicState s = initial_of(m);
  const Channel c = ch("c"), d = ch("d");
  const auto small = symb_step(s, SymbolicAction::in(c, 0, {Handle{c, 0}}), th);
  const auto large = symb_step(s, SymbolicAction::in(c, 0, {Handle{c, 0}, Handle{d, 0}}), th);
  bool mixed = false;
  for (const auto& t : large) {
    auto procs = [](const std::vector<Configuration>& side) {
      std::size_t n = 0;
      for (const auto& k : side) n += k.is_ghost() ? 0 : k.procs.size();
      return n;
    };
    bool pos = false, neg = false;
    for (const auto& lit : t.constraints) (lit.positive ? pos : neg) = true;
    mixed = mixed || (procs(t.left) != procs(t.right) && pos && neg);
  }
  std::ostringstream os;
  os << small.size() << " successors with W = {w(c,0)}, " << large.size()
     << " with W = {w(c,0), w(d,0)}, mixed-constraint successor " << (mixed ? "present" : "absent");
  return finish(r, small.size() == 2 && large.size() == 4 && mixed, os.str());
}

GoldenResult golden_commutation() {
  GoldenResult r{"input/output independence verdicts"};
  const Model m = corpus_model("example5_commute.por");
  Engine eng(*m.theory);
  const auto s = eng.intern(initial_of(m));
  const Channel c = ch("c"), d = ch("d");
  const auto in_empty = SymbolicAction::in(c, 0, {});
  const auto in_wd = SymbolicAction::in(c, 0, {Handle{d, 0}});
  const auto out_d = SymbolicAction::out(d, 0);
  const bool ee = eng.indep_ee(s, in_empty, out_d);
  const bool de_empty = eng.indep_de(s, in_empty, out_d);
  const bool de_wd = eng.indep_de(s, in_wd, out_d);
  std::ostringstream os;
  os << "ee " << ee << ", de(W=∅) " << de_empty << ", de(W={w(d,0)}) " << de_wd;
  return finish(r, ee && de_empty && !de_wd, os.str());
}

GoldenResult golden_stubborn() {
  GoldenResult r{"stubborn and persistent sets"};
  const Channel c = ch("c"), d = ch("d"), e = ch("e");
  const auto a0 = SymbolicAction::in(c, 0, {});
  const auto a1 = SymbolicAction::in(c, 0, {Handle{d, 0}});
  const auto a2 = SymbolicAction::out(d, 0);
  const auto a3 = SymbolicAction::in(d, 0, {});

  const Model m = corpus_model("example6_stubborn.por");
  Engine eng(*m.theory);
  const auto s = eng.intern(initial_of(m));
  const Actions stub = sorted(eng.stubborn_from_seed(s, a0));
  const Actions pers = sorted(eng.persistent_of(s));

  const Model mv = corpus_model("example6_singleton.por");
  Engine engv(*mv.theory);
  const auto sv = engv.intern(initial_of(mv));
  const Actions single = engv.stubborn_from_seed(sv, SymbolicAction::out(e, 0));
  const Actions pers_v = engv.persistent_of(sv);

  const bool ok = stub == sorted({a0, a1, a2, a3}) && pers == sorted({a0, a3}) &&
                  single.size() == 1 && pers_v.size() == 1;
  return finish(r, ok,
                "T+ from A0 = " + actions_str(stub) + ", persistent = " + actions_str(pers) +
                    ", with out(e): T+ = " + actions_str(single) + ", persistent = " +
                    actions_str(pers_v));
}

GoldenResult golden_sleep() {
  GoldenResult r{"sleep sets block a commuted input"};
  const Model m = corpus_model("example7_sleep.por");
  Engine eng(*m.theory);
  const SymbolicState s = initial_of(m);
  const auto a0 = SymbolicAction::in(ch("e"), 0, {});
  const auto a3 = SymbolicAction::in(ch("d"), 0, {});
  const auto next = eng.sleep_step(SleepPair{s, {}}, a0);
  bool ok = !next.empty() && a3.skeleton() < a0.skeleton();
  std::string detail = std::to_string(next.size()) + " successors by " + a0.str();
  for (const auto& p : next) {
    const bool asleep = p.sleep == Actions{a3};
    const bool blocked = eng.sleep_step(p, a3).empty();
    const Actions pers = eng.persistent_of(eng.intern(p.state));
    const bool both = std::any_of(pers.begin(), pers.end(), [](const auto& a) { return a.channel == Channel::named("e") && a.is_input(); }) &&
                      std::any_of(pers.begin(), pers.end(), [](const auto& a) { return a.channel == Channel::named("d") && a.is_input(); });
    ok = ok && asleep && blocked && both;
    detail += "; sleep " + actions_str(p.sleep) + (blocked ? ", A3 blocked" : ", A3 allowed") +
              ", persistent " + actions_str(pers);
  }
  return finish(r, ok, detail);
}

GoldenResult golden_bac(bool fixed) {
  GoldenResult r{fixed ? "BAC with a single error message" : "BAC replay attack"};
  const Model m = corpus_model(fixed ? "bac_fixed.por" : "bac_flawed.por");
  RunConfig cfg;
  cfg.recipe_depth = 2;
  cfg.max_trace_len = 5;
  const Report rep = run_check(m, cfg);
  std::ostringstream os;
  os << verdict_name(rep.verdict) << " in " << static_cast<long>(rep.millis) << " ms";
  if (fixed) return finish(r, rep.verdict == Verdict::BoundedEquivalent, os.str());
  const bool test = (rep.distinguishing_m == "w(c,1)" && rep.distinguishing_n == "nonce_err") ||
                    (rep.distinguishing_n == "w(c,1)" && rep.distinguishing_m == "nonce_err");
  const bool replay = replay_witness(m, rep);
  os << ", test " << rep.distinguishing_m << " = " << rep.distinguishing_n << ", witness";
  for (const auto& a : rep.witness) os << " " << a;
  return finish(r, rep.verdict == Verdict::NotEquivalent && test && replay, os.str());
}

GoldenResult golden_reduction_strength() {
  GoldenResult r{"reduction strength"};
  RunConfig cfg;
  const Report two = run_check(corpus_model("two_outputs.por"), cfg);
  const Report pa = run_check(corpus_model("private_auth.por"), cfg);
  const auto count = [](const std::optional<std::size_t>& c) { return c.value_or(0); };
  const bool ok = count(two.por_trace_count) == 1 && count(two.naive_trace_count) == 2 &&
                  pa.por_trace_count && pa.naive_trace_count &&
                  *pa.por_trace_count < *pa.naive_trace_count;
  std::ostringstream os;
  os << "two outputs " << count(two.por_trace_count) << "/" << count(two.naive_trace_count)
     << ", private authentication " << count(pa.por_trace_count) << "/"
     << count(pa.naive_trace_count);
  if (pa.reduction_ratio) os << " (ratio " << *pa.reduction_ratio << ")";
  return finish(r, ok, os.str());
}

std::vector<GoldenResult> run_golden_suite() {
  std::vector<GoldenResult> out;
  auto guarded = [&](const char* name, auto&& f) {
    try {
      out.push_back(f());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded("challenge/response", golden_challenge_response);
  guarded("ghosts", golden_ghosts);
  guarded("input domains", golden_input_domains);
  guarded("commutation", golden_commutation);
  guarded("stubborn", golden_stubborn);
  guarded("sleep", golden_sleep);
  guarded("BAC", [] { return golden_bac(false); });
  guarded("BAC fixed", [] { return golden_bac(true); });
  guarded("reduction strength", golden_reduction_strength);
  return out;
}

}  // namespace porcheck
