#include "porcheck/selftest.hpp"

#include <chrono>
#include <string>

#include "porcheck/corpus.hpp"
#include "porcheck/golden.hpp"
#include "porcheck/oracles.hpp"

namespace porcheck {

namespace {

class Printer {
 public:
  explicit Printer(std::ostream& out) : out_(out) {}

  void line(bool ok, const std::string& name, const std::string& detail) {
    all_ok_ = all_ok_ && ok;
    out_ << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) out_ << ": " << detail;
    out_ << std::endl;
  }

  void suite(const SuiteResult& r) {
    std::string detail = std::to_string(r.cases) + " cases";
    if (r.failures) detail += ", " + std::to_string(r.failures) + " failures, first: " + r.first_failure;
    line(r.ok(), r.name, detail);
  }

  bool ok() const { return all_ok_; }

 private:
  std::ostream& out_;
  bool all_ok_ = true;
};

Model random_model(std::uint64_t seed, std::uint64_t i) {
  return parse_model(random_protocol(seed * 1'000'003 + i, suite_params(i)));
}

}  // namespace

bool run_selftest(const SelftestOptions& opts, std::ostream& out) {
  Printer p(out);
  const auto start = std::chrono::steady_clock::now();

  for (const auto& g : run_golden_suite()) p.line(g.ok, "golden " + g.name, g.detail);

  const std::size_t n_terms = opts.quick ? 200 : 1000;
  for (RandomTheory t : {RandomTheory::EncDecHash, RandomTheory::HashInverse}) {
    ProtocolParams pp;
    pp.theory = t;
    const Model m = parse_model(random_protocol(opts.seed, pp));
    const std::string tag = t == RandomTheory::EncDecHash ? " (enc/dec/h)" : " (h/f/g)";
    auto idem = normalize_idempotence_suite(*m.theory, opts.seed, n_terms);
    idem.name += tag;
    p.suite(idem);
    auto sym = static_symmetry_suite(*m.theory, opts.seed, n_terms / 4, random_protocol_depth(t));
    sym.name += tag;
    p.suite(sym);
  }

  // Symbolic properties over the small corpus files and random protocols.
  SuiteResult completeness{"symbolic completeness"};
  SuiteResult soundness{"weak soundness"};
  SuiteResult determinism{"twin determinism"};
  SuiteResult independence{"independence soundness"};
  SuiteResult closure{"stubborn closure"};
  const std::uint32_t maxlen = 4;
  auto properties = [&](const Model& m, std::uint32_t depth) {
    check_completeness(m, depth, maxlen, completeness);
    check_weak_soundness(m, depth, maxlen, soundness);
    check_twin_determinism(m, depth, maxlen, determinism);
    check_independence_soundness(m, depth, maxlen, independence);
    check_stubborn_closure(m, maxlen, closure);
  };
  for (const auto& [file, text] : embedded_corpus()) {
    if (file.rfind("bac_", 0) == 0 || file == "example1_challenge.por") continue;
    properties(parse_model(text), 1);
  }
  const std::size_t n_protocols = opts.quick ? 20 : 100;
  for (std::size_t i = 0; i < n_protocols; ++i)
    properties(random_model(opts.seed, i), random_protocol_depth(suite_params(i).theory));
  for (const auto* s : {&completeness, &soundness, &determinism, &independence, &closure})
    p.suite(*s);

  SuiteResult reduction{"naive bad iff reduced bad"};
  SuiteResult invariance{"verdict invariance across POR and collapse"};
  for (std::size_t i = 0; i < n_protocols; ++i) {
    const Model m = random_model(opts.seed + 1, i);
    const std::uint32_t depth = random_protocol_depth(suite_params(i).theory);
    CollapseOptions copts;
    copts.corrupt_delta = opts.corrupt_delta;
    const ReductionOutcome r = compare_reduction(m, depth, 6, copts);
    const std::string label = "protocol " + std::to_string(i);
    if (r.budget_exceeded)
      reduction.fail(label + ": budget exceeded");
    else if (!r.agree())
      reduction.fail(label + ": naive " + std::to_string(r.naive_bad) + ", reduced " +
                     std::to_string(r.por_bad) + ", without collapse " +
                     std::to_string(r.por_bad_no_collapse));
    else if (r.por_traces > r.naive_traces)
      reduction.fail(label + ": more reduced traces than naive ones");
    else
      reduction.pass();
    if (i % 5 == 0) {
      RunConfig cfg;
      cfg.recipe_depth = depth;
      check_verdict_invariance(m, cfg, label, invariance);
    }
  }
  p.suite(reduction);
  p.suite(invariance);

  const KernelSuite k = run_kernel_suite(opts.seed, opts.quick ? 100 : 500);
  for (const auto* s : {&k.independence, &k.persistent, &k.sleep, &k.stubborn, &k.trace_class})
    p.suite(*s);

  CollapseOptions copts;
  copts.corrupt_delta = opts.corrupt_delta;
  p.suite(delta_injectivity_suite(opts.seed, opts.quick ? 100 : 400, copts));

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << (p.ok() ? "selftest passed" : "selftest FAILED") << " in " << secs << " s" << std::endl;
  return p.ok();
}

}  // namespace porcheck
