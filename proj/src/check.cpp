#include "porcheck/check.hpp"

#include <chrono>
#include <sstream>

#include "porcheck/por.hpp"
#include "porcheck/symbolic.hpp"

namespace porcheck {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::BoundedEquivalent:
      return "BoundedEquivalent";
    case Verdict::NotEquivalent:
      return "NotEquivalent";
    default:
      return "Inconclusive";
  }
}

std::optional<Verdict> verdict_from_name(const std::string& s) {
  for (Verdict v : {Verdict::BoundedEquivalent, Verdict::NotEquivalent, Verdict::Inconclusive})
    if (verdict_name(v) == s) return v;
  return std::nullopt;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::BoundedEquivalent:
      return 0;
    case Verdict::NotEquivalent:
      return 1;
    default:
      return 2;
  }
}

namespace {

const Query& require_query(const Model& model) {
  if (!model.query) throw std::invalid_argument("the model has no query");
  return *model.query;
}

void record_witness(Report& r, const ConcreteTrace& tr, const BadVerdict& v) {
  r.witness_trace = tr;
  r.witness.clear();
  for (const auto& a : tr) r.witness.push_back(a.str());
  r.witness_side = side_name(v.side);
  r.offender_frame = v.offender.frame.str();
  r.target_frames.clear();
  for (const auto& f : v.failures) r.target_frames.push_back(f.target.frame.str());
  for (const auto& f : v.failures)
    if (f.m.valid()) {
      r.distinguishing_m = f.m.str();
      r.distinguishing_n = f.n.str();
      break;
    }
}

}  // namespace

Report run_check(const Model& model, const RunConfig& cfg, const std::string& file) {
  const auto start = std::chrono::steady_clock::now();
  const Query& q = require_query(model);
  const Theory& th = *model.theory;
  Report r;
  r.file = file;
  r.query = q.kind == Query::Kind::Equiv ? "equiv" : "include";
  r.por = cfg.por;
  r.collapse = cfg.collapse;
  r.recipe_depth = cfg.recipe_depth;
  r.max_trace_len = cfg.max_trace_len;
  r.seed = cfg.seed;

  const bool left_only = q.kind == Query::Kind::Include;
  try {
    const Configuration a0 = q.left_config();
    const Configuration b0 = q.right_config();
    const TwinState s0 = initial_twin(a0, b0, th);
    const SymbolicState sym0 = initial_symbolic(a0, b0, th);

    Engine eng(th);
    auto naive = naive_trace_set(eng, sym0, cfg.max_trace_len, cfg.trace_budget);
    if (!naive.budget_exceeded) r.naive_trace_count = naive.trace_count();
    r.complete = !naive.truncated;

    ExploreResult ex;
    if (cfg.por) {
      auto reduced = reduced_trace_set(eng, sym0, cfg.max_trace_len, cfg.collapse, cfg.trace_budget);
      if (reduced.budget_exceeded) {
        r.verdict = Verdict::Inconclusive;
        r.reason = "symbolic trace budget exceeded";
        r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return r;
      }
      r.por_trace_count = reduced.trace_count();
      r.complete = r.complete && !reduced.truncated;
      ex = explore_twin_restricted(reduced.trie, s0, cfg.recipe_depth, th, cfg.state_budget);
    } else {
      ex = explore_twin_naive(s0, cfg.recipe_depth, cfg.max_trace_len, th, cfg.state_budget);
    }
    if (r.naive_trace_count && r.por_trace_count && *r.por_trace_count > 0)
      r.reduction_ratio =
          static_cast<double>(*r.naive_trace_count) / static_cast<double>(*r.por_trace_count);
    r.states_visited = ex.states_visited;

    const bool bad = left_only ? ex.left_bad_reachable : ex.bad_reachable;
    if (bad) {
      r.verdict = Verdict::NotEquivalent;
      if (left_only)
        record_witness(r, ex.left_witness, ex.left_witness_verdict);
      else
        record_witness(r, ex.witness, ex.witness_verdict);
    } else if (ex.budget_exceeded) {
      r.verdict = Verdict::Inconclusive;
      r.reason = "state budget exceeded";
    } else {
      r.verdict = Verdict::BoundedEquivalent;
    }
  } catch (const RewriteBudgetExceeded& e) {
    r.verdict = Verdict::Inconclusive;
    r.reason = e.what();
  }
  r.millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Report cmd_check(const std::string& path, const RunConfig& cfg) {
  return run_check(parse_model_file(path), cfg, path);
}

std::vector<std::string> trace_listing(const Model& model, const RunConfig& cfg, bool por) {
  const Query& q = require_query(model);
  const Theory& th = *model.theory;
  Engine eng(th);
  const SymbolicState s0 = initial_symbolic(q.left_config(), q.right_config(), th);
  auto set = por ? reduced_trace_set(eng, s0, cfg.max_trace_len, cfg.collapse, cfg.trace_budget)
                 : naive_trace_set(eng, s0, cfg.max_trace_len, cfg.trace_budget);
  if (set.budget_exceeded) throw std::runtime_error("symbolic trace budget exceeded");
  std::vector<std::string> out;
  for (const auto& tr : set.trie.leaves()) out.push_back(trace_str(tr));
  return out;
}

bool replay_witness(const Model& model, const Report& r) {
  if (r.verdict != Verdict::NotEquivalent) return false;
  const Query& q = require_query(model);
  const Theory& th = *model.theory;
  TwinState s = initial_twin(q.left_config(), q.right_config(), th);
  for (const auto& a : r.witness_trace) {
    auto next = twin_step(s, a, th);
    if (!next) return false;
    s = std::move(*next);
  }
  if (q.kind == Query::Kind::Include)
    return is_side_bad(s, Side::Left, r.recipe_depth, th).bad();
  return is_bad(s, r.recipe_depth, th).bad();
}

// ---------------------------------------------------------------- output

namespace {

template <class T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> get_opt(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["file"] = r.file;
  j["query"] = r.query;
  j["verdict"] = verdict_name(r.verdict);
  j["reason"] = r.reason;
  j["witness"] = r.witness;
  j["witness_side"] = r.witness_side;
  j["offender_frame"] = r.offender_frame;
  j["target_frames"] = r.target_frames;
  j["distinguishing"] = {{"m", r.distinguishing_m}, {"n", r.distinguishing_n}};
  j["naive_trace_count"] = opt(r.naive_trace_count);
  j["por_trace_count"] = opt(r.por_trace_count);
  j["reduction_ratio"] = opt(r.reduction_ratio);
  j["complete"] = r.complete;
  j["states_visited"] = r.states_visited;
  j["millis"] = r.millis;
  j["config"] = {{"por", r.por},
                 {"collapse", r.collapse},
                 {"recipe_depth", r.recipe_depth},
                 {"max_trace_len", r.max_trace_len},
                 {"seed", r.seed}};
  return j;
}

Report report_from_json(const nlohmann::json& j) {
  Report r;
  r.file = j.at("file").get<std::string>();
  r.query = j.at("query").get<std::string>();
  auto v = verdict_from_name(j.at("verdict").get<std::string>());
  if (!v) throw std::invalid_argument("unknown verdict in report");
  r.verdict = *v;
  r.reason = j.at("reason").get<std::string>();
  r.witness = j.at("witness").get<std::vector<std::string>>();
  r.witness_side = j.at("witness_side").get<std::string>();
  r.offender_frame = j.at("offender_frame").get<std::string>();
  r.target_frames = j.at("target_frames").get<std::vector<std::string>>();
  r.distinguishing_m = j.at("distinguishing").at("m").get<std::string>();
  r.distinguishing_n = j.at("distinguishing").at("n").get<std::string>();
  r.naive_trace_count = get_opt<std::size_t>(j, "naive_trace_count");
  r.por_trace_count = get_opt<std::size_t>(j, "por_trace_count");
  r.reduction_ratio = get_opt<double>(j, "reduction_ratio");
  r.complete = j.at("complete").get<bool>();
  r.states_visited = j.at("states_visited").get<std::size_t>();
  r.millis = j.at("millis").get<double>();
  const auto& c = j.at("config");
  r.por = c.at("por").get<bool>();
  r.collapse = c.at("collapse").get<bool>();
  r.recipe_depth = c.at("recipe_depth").get<std::uint32_t>();
  r.max_trace_len = c.at("max_trace_len").get<std::uint32_t>();
  r.seed = c.at("seed").get<std::uint64_t>();
  return r;
}

std::string csv_header() {
  return "file,por,collapse,recipe_depth,max_trace_len,naive_traces,por_traces,ratio,verdict,millis";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string csv_row(const Report& r) {
  std::ostringstream os;
  auto count = [](const std::optional<std::size_t>& c) {
    return c ? std::to_string(*c) : std::string();
  };
  os << csv_field(r.file) << ',' << (r.por ? 1 : 0) << ',' << (r.collapse ? 1 : 0) << ','
     << r.recipe_depth << ',' << r.max_trace_len << ',' << count(r.naive_trace_count) << ','
     << count(r.por_trace_count) << ',';
  if (r.reduction_ratio) os << *r.reduction_ratio;
  os << ',' << verdict_name(r.verdict) << ',' << r.millis;
  return os.str();
}

std::string format_text(const Report& r) {
  std::ostringstream os;
  os << "verdict: " << verdict_name(r.verdict);
  if (!r.reason.empty()) os << " (" << r.reason << ")";
  os << "\n";
  if (r.verdict == Verdict::NotEquivalent) {
    os << "witness (" << r.witness.size() << " actions):";
    for (const auto& a : r.witness) os << " " << a;
    os << "\n";
    os << "unmatched " << r.witness_side << " frame: " << r.offender_frame << "\n";
    for (const auto& f : r.target_frames) os << "  vs " << f << "\n";
    if (!r.distinguishing_m.empty())
      os << "distinguishing test: " << r.distinguishing_m << " = " << r.distinguishing_n << "\n";
  }
  auto count = [](const std::optional<std::size_t>& c) {
    return c ? std::to_string(*c) : std::string("n/a");
  };
  os << "naive traces: " << count(r.naive_trace_count)
     << ", por traces: " << count(r.por_trace_count);
  if (r.reduction_ratio) os << ", ratio: " << *r.reduction_ratio;
  os << "\n";
  if (!r.complete) os << "note: some executions were cut at max length " << r.max_trace_len << "\n";
  os << "states visited: " << r.states_visited << ", time: " << r.millis << " ms\n";
  return os.str();
}

}  // namespace porcheck
