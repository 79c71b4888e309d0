#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "porcheck/check.hpp"
#include "porcheck/corpus.hpp"
#include "porcheck/golden.hpp"
#include "porcheck/oracles.hpp"

using namespace porcheck;

namespace {

const std::filesystem::path kCorpus = PORCHECK_CORPUS_DIR;

std::string path(const char* file) { return (kCorpus / file).string(); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("cmd_check verdicts") {
    const Report ghosts = cmd_check(path("example3_ghosts.por"), RunConfig{});
    CHECK(ghosts.verdict == Verdict::NotEquivalent);
    CHECK(ghosts.witness.size() == 1);
    CHECK(exit_code(ghosts.verdict) == 1);
    CHECK(replay_witness(parse_model_file(path("example3_ghosts.por")), ghosts));

    RunConfig bac;
    bac.max_trace_len = 5;
    const Report flawed = cmd_check(path("bac_flawed.por"), bac);
    CHECK(flawed.verdict == Verdict::NotEquivalent);
    CHECK(flawed.query == "include");
    const std::set<std::string> test{flawed.distinguishing_m, flawed.distinguishing_n};
    CHECK(test == std::set<std::string>{"w(c,1)", "nonce_err"});

    const Report self = cmd_check(path("private_auth.por"), RunConfig{});
    CHECK(self.verdict == Verdict::BoundedEquivalent);
    CHECK(exit_code(self.verdict) == 0);
    REQUIRE(self.reduction_ratio);
    CHECK(*self.reduction_ratio >= 1.0);
    CHECK(*self.por_trace_count <= *self.naive_trace_count);
  }

  TEST_CASE("cmd_check errors") {
    CHECK_THROWS_AS(cmd_check(path("missing.por"), RunConfig{}), std::runtime_error);
    const auto bad = std::filesystem::temp_directory_path() / "porcheck_bad.por";
    std::ofstream(bad) << "channels c;\nprocess P = out(c, ;\n";
    CHECK_THROWS_AS(cmd_check(bad.string(), RunConfig{}), ParseError);
    std::filesystem::remove(bad);
  }

  TEST_CASE("tight budgets give Inconclusive") {
    RunConfig cfg;
    cfg.state_budget = 3;
    cfg.trace_budget = 3;
    const Report r = run_check(corpus_model("example6_singleton.por"), cfg);
    CHECK(r.verdict == Verdict::Inconclusive);
    CHECK(exit_code(r.verdict) == 2);
    CHECK_FALSE(r.reason.empty());
  }

  TEST_CASE("trace listings") {
    RunConfig cfg;
    const Model two = corpus_model("two_outputs.por");
    CHECK(trace_listing(two, cfg, true).size() == 1);
    CHECK(trace_listing(two, cfg, false).size() == 2);

    const Model seq = parse_model(
        "const a; channels c, d;\nprocess S = out(c, a).in(d, x).out(c, x);\nquery equiv S S;");
    CHECK(trace_listing(seq, cfg, true).size() == trace_listing(seq, cfg, false).size());

    const auto six = trace_listing(corpus_model("example6_stubborn.por"), cfg, true);
    bool starts_c = false, starts_d = false;
    for (const auto& line : six) {
      starts_c = starts_c || line.rfind("in(c, X(c,0), {})", 0) == 0;
      starts_d = starts_d || line.rfind("in(d, X(d,0), {})", 0) == 0;
    }
    CHECK(starts_c);
    CHECK(starts_d);
    CHECK(trace_listing(two, cfg, true) == trace_listing(two, cfg, true));
  }

  TEST_CASE("JSON round-trip") {
    const Report r = run_check(corpus_model("example3_ghosts.por"), RunConfig{}, "ghosts.por");
    const nlohmann::json j = to_json(r);
    const nlohmann::json again = to_json(report_from_json(j));
    CHECK(j == again);
    CHECK(nlohmann::json::parse(j.dump()) == j);
    CHECK(j.at("verdict") == "NotEquivalent");
  }

  TEST_CASE("CSV schema") {
    CHECK(csv_header() ==
          "file,por,collapse,recipe_depth,max_trace_len,naive_traces,por_traces,ratio,verdict,"
          "millis");
    const Report r = run_check(corpus_model("two_outputs.por"), RunConfig{}, "two,outputs.por");
    const std::string row = csv_row(r);
    CHECK(row.rfind("\"two,outputs.por\",", 0) == 0);
    CHECK(row.find("BoundedEquivalent") != std::string::npos);
  }

  TEST_CASE("verdict invariance on quick corpus files") {
    SuiteResult s{"invariance"};
    for (const auto& [file, text] : embedded_corpus()) {
      if (file == "example1_challenge.por" || file.rfind("bac_", 0) == 0) continue;
      check_verdict_invariance(parse_model(text), RunConfig{}, file, s);
    }
    CHECK_MESSAGE(s.ok(), s.first_failure);
  }

  TEST_CASE("verdict names") {
    for (Verdict v : {Verdict::BoundedEquivalent, Verdict::NotEquivalent, Verdict::Inconclusive})
      CHECK(verdict_from_name(verdict_name(v)) == v);
    CHECK_FALSE(verdict_from_name("Maybe"));
  }
}
