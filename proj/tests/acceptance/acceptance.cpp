// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "porcheck/check.hpp"
#include "porcheck/corpus.hpp"
#include "porcheck/golden.hpp"
#include "porcheck/oracles.hpp"
#include "porcheck/selftest.hpp"

using namespace porcheck;

namespace {

const std::filesystem::path kCorpus = PORCHECK_CORPUS_DIR;
bool g_all_ok = true;

struct Outcome {
  bool ok;
  std::string detail;
};

void criterion(const std::string& name, double limit_s, const std::function<Outcome()>& f) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < limit_s;
  const bool ok = o.ok && in_time;
  g_all_ok = g_all_ok && ok;
  std::ostringstream os;
  os.precision(3);
  os << (ok ? "PASS " : "FAIL ") << name << " [" << secs << " s, limit " << limit_s << " s";
  if (!in_time) os << ", too slow";
  os << "]: " << o.detail;
  std::cout << os.str() << std::endl;
}

Outcome golden(GoldenResult (*f)()) {
  const GoldenResult g = f();
  return {g.ok, g.detail};
}

Outcome bac(bool fixed) {
  RunConfig cfg;
  cfg.recipe_depth = 2;
  cfg.max_trace_len = 5;
  const auto path = kCorpus / (fixed ? "bac_fixed.por" : "bac_flawed.por");
  const Report r = cmd_check(path.string(), cfg);
  std::string detail = verdict_name(r.verdict);
  if (fixed) return {r.verdict == Verdict::BoundedEquivalent, detail};
  const bool test = (r.distinguishing_m == "w(c,1)" && r.distinguishing_n == "nonce_err") ||
                    (r.distinguishing_m == "nonce_err" && r.distinguishing_n == "w(c,1)");
  const bool replay = replay_witness(parse_model_file(path.string()), r);
  detail += ", test " + r.distinguishing_m + " = " + r.distinguishing_n + ", witness";
  for (const auto& a : r.witness) detail += " " + a;
  detail += replay ? ", replays" : ", does not replay";
  return {r.verdict == Verdict::NotEquivalent && test && replay, detail};
}

constexpr std::size_t kProtocols = 200;
constexpr std::uint64_t kSeed = 20260;

Model protocol(std::size_t i) { return parse_model(random_protocol(kSeed + i, suite_params(i))); }

Outcome reduction_soundness() {
  SuiteResult s{"reduction"};
  std::size_t bad = 0, left_bad = 0, complete = 0, naive = 0, por = 0;
  for (std::size_t i = 0; i < kProtocols; ++i) {
    const Model m = protocol(i);
    const ReductionOutcome r = compare_reduction(m, random_protocol_depth(suite_params(i).theory), 6);
    const std::string label = "protocol " + std::to_string(i);
    bad += r.naive_bad;
    left_bad += r.naive_left_bad;
    complete += r.complete;
    naive += r.naive_traces;
    por += r.por_traces;
    if (r.budget_exceeded)
      s.fail(label + ": budget exceeded");
    else if (r.naive_bad != r.por_bad || r.naive_left_bad != r.por_left_bad)
      s.fail(label + ": naive bad " + std::to_string(r.naive_bad) + ", reduced bad " +
             std::to_string(r.por_bad));
    else
      s.pass();
  }
  std::ostringstream os;
  os << s.cases << "/" << kProtocols << " agree, " << bad << " reach a bad state (" << left_bad
     << " left-bad), " << complete << " complete within length 6, traces " << por << " reduced vs "
     << naive << " naive";
  if (!s.ok()) os << "; first mismatch: " << s.first_failure;
  return {s.ok() && s.cases == kProtocols, os.str()};
}

Outcome collapse_preservation() {
  SuiteResult corpus{"corpus"};
  for (const auto& [file, text] : embedded_corpus()) {
    const Model m = parse_model(text);
    RunConfig cfg;
    if (file.rfind("bac_", 0) == 0) cfg.max_trace_len = 5;
    check_verdict_invariance(m, cfg, file, corpus);
  }
  SuiteResult random{"random"};
  std::size_t bad_checked = 0;
  for (std::size_t i = 0; i < kProtocols; ++i) {
    const Model m = protocol(i);
    const std::uint32_t depth = random_protocol_depth(suite_params(i).theory);
    const ReductionOutcome r = compare_reduction(m, depth, 6);
    const std::string label = "protocol " + std::to_string(i);
    if (r.por_bad != r.por_bad_no_collapse)
      random.fail(label + ": bad-reachability differs with collapse off");
    else
      random.pass();
    RunConfig cfg;
    cfg.recipe_depth = depth;
    check_verdict_invariance(m, cfg, label, random);
    bad_checked += r.naive_bad;
  }
  std::ostringstream os;
  os << "corpus " << corpus.cases << " runs, " << corpus.failures << " mismatches; random "
     << random.cases << " checks, " << random.failures << " mismatches (" << bad_checked
     << " non-equivalent pairs)";
  if (!corpus.ok()) os << "; " << corpus.first_failure;
  if (!random.ok()) os << "; " << random.first_failure;
  return {corpus.ok() && random.ok(), os.str()};
}

Outcome kernel_suite() {
  const KernelSuite k = run_kernel_suite(kSeed, 500);
  std::ostringstream os;
  bool ok = k.ok();
  for (const auto* s : {&k.independence, &k.persistent, &k.sleep, &k.stubborn, &k.trace_class}) {
    os << s->name << " " << s->cases - s->failures << "/" << s->cases << "; ";
    ok = ok && s->cases >= 500;
    if (s->failures) os << "(" << s->first_failure << ") ";
  }
  return {ok, os.str()};
}

Outcome reduction_strength() {
  RunConfig cfg;
  const Report two = cmd_check((kCorpus / "two_outputs.por").string(), cfg);
  const Report pa = cmd_check((kCorpus / "private_auth.por").string(), cfg);
  const auto n = [](const std::optional<std::size_t>& c) { return c.value_or(0); };
  std::ostringstream os;
  os << "two outputs " << n(two.por_trace_count) << " reduced vs " << n(two.naive_trace_count)
     << " naive; private authentication " << n(pa.por_trace_count) << " vs "
     << n(pa.naive_trace_count);
  if (pa.reduction_ratio) os << ", ratio " << *pa.reduction_ratio;
  const bool ok = n(two.por_trace_count) == 1 && n(two.naive_trace_count) == 2 &&
                  pa.por_trace_count && pa.naive_trace_count &&
                  *pa.por_trace_count < *pa.naive_trace_count;
  return {ok, os.str()};
}

Outcome property_suites() {
  std::ostringstream log;
  SelftestOptions opts;
  opts.seed = 1;
  const bool ok = run_selftest(opts, log);
  std::size_t pass = 0, fail = 0;
  std::string first_fail;
  std::istringstream in(log.str());
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("PASS ", 0) == 0) ++pass;
    if (line.rfind("FAIL ", 0) == 0 && fail++ == 0) first_fail = line;
  }
  std::string detail = "porcheck selftest: " + std::to_string(pass) + " checks passed, " +
                       std::to_string(fail) + " failed";
  if (fail) detail += "; " + first_fail;
  return {ok, detail};
}

}  // namespace

int main() {
  criterion("Example 6 stubborn and persistent sets", 1, [] { return golden(golden_stubborn); });
  criterion("Example 4 input-domain successor counts", 1,
            [] { return golden(golden_input_domains); });
  criterion("Example 5 independence verdicts", 1, [] { return golden(golden_commutation); });
  criterion("Example 3 ghost badness", 1, [] { return golden(golden_ghosts); });
  criterion("BAC flawed variant is not equivalent", 60, [] { return bac(false); });
  criterion("BAC fixed variant is bounded-equivalent", 60, [] { return bac(true); });
  criterion("naive bad iff reduced bad on random protocols", 600, reduction_soundness);
  criterion("collapse preserves verdicts on corpus and random protocols", 600,
            collapse_preservation);
  criterion("kernel suite on random explicit LTSs", 300, kernel_suite);
  criterion("reduction strength", 60, reduction_strength);
  criterion("property suites via selftest", 600, property_suites);
  std::cout << (g_all_ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED") << std::endl;
  return g_all_ok ? 0 : 1;
}
