#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "porcheck/check.hpp"
#include "porcheck/selftest.hpp"

using namespace porcheck;

namespace {

void add_bounds(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--recipe-depth", cfg.recipe_depth, "Maximal recipe nesting depth")
      ->default_val(cfg.recipe_depth);
  cmd->add_option("--max-len", cfg.max_trace_len, "Maximal number of observable actions")
      ->default_val(cfg.max_trace_len);
  cmd->add_flag("!--no-collapse", cfg.collapse,
                "Compute stubborn and sleep sets on the uncollapsed states");
}

int run_check_cmd(const std::string& file, const RunConfig& cfg, const std::string& json_path,
                  const std::string& csv_path) {
  Report r = cmd_check(file, cfg);
  std::cout << format_text(r);
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) throw std::runtime_error("cannot write " + json_path);
    out << to_json(r).dump(2) << "\n";
  }
  if (!csv_path.empty()) {
    std::ifstream probe(csv_path);
    const bool fresh = !probe.good() || probe.peek() == std::ifstream::traits_type::eof();
    probe.close();
    std::ofstream out(csv_path, std::ios::app);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    if (fresh) out << csv_header() << "\n";
    out << csv_row(r) << "\n";
  }
  return exit_code(r.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded trace-equivalence checker with symbolic partial-order reduction"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string file, json_path, csv_path;
  auto* check = app.add_subcommand("check", "Decide bounded trace equivalence or inclusion");
  check->add_option("FILE", file, "Protocol file")->required();
  check->add_flag("!--no-por", cfg.por, "Explore every interleaving instead of sleep-set traces");
  add_bounds(check, cfg);
  check->add_option("--json", json_path, "Write the report as JSON");
  check->add_option("--csv", csv_path, "Append a statistics row to a CSV file");
  check->add_option("--jobs", cfg.jobs, "Worker threads (the engine currently runs on one)")
      ->default_val(cfg.jobs)
      ->check(CLI::PositiveNumber);
  check->add_option("--seed", cfg.seed, "Seed recorded in the report")->default_val(cfg.seed);

  bool por_traces = false, naive_traces = false;
  std::string traces_file;
  RunConfig tcfg;
  auto* traces = app.add_subcommand("traces", "List maximal symbolic traces");
  traces->add_option("FILE", traces_file, "Protocol file")->required();
  auto* por_flag = traces->add_flag("--por", por_traces, "Sleep-set traces");
  auto* naive_flag = traces->add_flag("--naive", naive_traces, "Every interleaving");
  por_flag->excludes(naive_flag);
  add_bounds(traces, tcfg);

  SelftestOptions st;
  auto* selftest = app.add_subcommand("selftest", "Run the golden examples and oracle suites");
  selftest->add_option("--seed", st.seed, "Base seed of the random suites")->default_val(st.seed);
  selftest->add_flag("--quick", st.quick, "Smaller random suites");
  selftest->add_flag("--corrupt-delta", st.corrupt_delta,
                     "Negative control: use a Δ of the wrong arity in collapse checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return run_check_cmd(file, cfg, json_path, csv_path);
    if (traces->parsed()) {
      if (!por_traces && !naive_traces) {
        std::cerr << "traces: pass --por or --naive\n";
        return 2;
      }
      for (const auto& line : trace_listing(parse_model_file(traces_file), tcfg, por_traces))
        std::cout << line << "\n";
      return 0;
    }
    if (selftest->parsed()) return run_selftest(st, std::cout) ? 0 : 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
