#include "cli.hpp"

#include "c1p/grammar.hpp"
#include "c1p/guarded_analysis.hpp"
#include "c1p/model_io.hpp"
#include "c1p/oracle.hpp"
#include "c1p/presburger.hpp"
#include "c1p/zero_analysis.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <sstream>

namespace c1p::cli {

namespace {

using nlohmann::json;

struct Outcome {
  std::string verdict;
  std::string text;  // printed in plain mode; defaults to the verdict
  json payload = json::object();
  int code = 0;
};

// Problems with the command line or the model: exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string file;
  std::string k = "0";
  std::string mode = "cover";
  bool json = false;
  bool force_guarded = false;
  std::size_t node_budget = GuardedOptions{}.node_budget;
  std::size_t max_steps = 14;
  std::size_t max_stack = 7;
};

C1pvassModel load(const std::string& path) {
  auto parsed = load_model_file(path);
  if (auto* errors = std::get_if<std::vector<ParseError>>(&parsed)) throw UsageError(format_errors(*errors));
  auto model = std::get<C1pvassModel>(std::move(parsed));
  require_valid(model);
  return model;
}

Rational parse_k(const std::string& text) {
  auto k = parse_rational(text);
  if (!k || *k < 0) throw UsageError("k must be a nonnegative integer or fraction p/q, got '" + text + "'");
  return *k;
}

bool guarded(const Options& o, const C1pvassModel& m) { return o.force_guarded || !m.all_guards_zero(); }

json interval_json(const RationalInterval& i) {
  if (i.empty) return nullptr;
  return {{"lo", i.lo ? json(to_string(*i.lo)) : json(nullptr)},
          {"hi", i.hi ? json(to_string(*i.hi)) : json(nullptr)},
          {"lo_closed", i.lo_closed},
          {"hi_closed", i.hi_closed}};
}

Outcome yes_no(bool answer) { return {answer ? "YES" : "NO", "", json::object(), answer ? 0 : 1}; }

Outcome check(const Options& o, OracleMode mode) {
  auto model = load(o.file);
  const Rational k = parse_k(o.k);
  const bool np = guarded(o, model);
  bool answer = false;
  if (np) {
    if (!is_integer(k)) throw UsageError("guarded queries need an integer k");
    GuardedOptions go{o.node_budget};
    answer = mode == OracleMode::Cover ? decide_cover_guarded(model, k, go) : decide_reach_guarded(model, k, go);
  } else {
    answer = mode == OracleMode::Cover ? decide_cover_k(model, k) : decide_reach_k(model, k);
  }
  Outcome out = yes_no(answer);
  out.payload = {{"k", to_string(k)}, {"pipeline", np ? "guarded" : "zero"}};
  return out;
}

Outcome bound(const Options& o) {
  auto model = load(o.file);
  if (guarded(o, model)) {
    const bool bounded = decide_bounded_guarded(model, {o.node_budget});
    return {bounded ? "BOUNDED" : "UNBOUNDED", "", {{"pipeline", "guarded"}}, bounded ? 0 : 1};
  }
  ZeroAnalysis za(model);
  if (!za.bounded()) return {"UNBOUNDED", "", {{"pipeline", "zero"}}, 1};
  if (!za.cover_zero()) return {"BOUNDED", "BOUNDED (no accepting run)", {{"pipeline", "zero"}, {"b", nullptr}}, 0};
  auto report = za.tight_bound();
  const std::string right = report.right_closed ? "closed" : "open";
  return {"BOUNDED",
          "BOUNDED b=" + report.b.str() + " right=" + right,
          {{"pipeline", "zero"}, {"b", report.b.str()}, {"right", right}},
          0};
}

Outcome interval(const Options& o) {
  auto model = load(o.file);
  if (!model.all_guards_zero()) throw UsageError("interval needs a model whose guards are all 0");
  auto i = reachable_interval(model);
  if (i.empty) return {"EMPTY", "", {{"interval", nullptr}}, 0};
  return {"INTERVAL", "INTERVAL " + to_string(i), {{"interval", interval_json(i)}}, 0};
}

Pda emitted_pda(const Options& o, const C1pvassModel& model) {
  if (o.mode != "cover" && o.mode != "reach") throw UsageError("mode must be cover or reach");
  if (!guarded(o, model)) return o.mode == "cover" ? build_cover_zero_pda(model) : build_reach_zero_pda(model);
  auto prepared = prepare_guarded_model(model);
  if (o.mode == "reach") return build_reach_slices(prepared).pda;
  std::optional<BigInt> target;
  if (o.k != "none") {
    const Rational k = parse_k(o.k);
    if (!is_integer(k)) throw UsageError("guarded queries need an integer k");
    target = numerator(k);
  }
  return build_cover_slices(prepared, target).pda;
}

Outcome emit(const Options& o, const std::string& what) {
  auto model = load(o.file);
  std::ostringstream text;
  if (what == "pda") {
    print_pda(text, emitted_pda(o, model));
  } else if (what == "cnf") {
    print_cnf(text, to_cnf(pda_to_cfg(emitted_pda(o, model))));
  } else {
    if (o.mode != "cover" && o.mode != "reach") throw UsageError("mode must be cover or reach");
    const Rational k = parse_k(o.k == "none" ? "0" : o.k);
    if (!is_integer(k)) throw UsageError("guarded queries need an integer k");
    print_smtlib(text, o.mode == "cover" ? cover_query(model, k) : reach_query(model, k));
  }
  std::string body = text.str();
  if (!body.empty() && body.back() == '\n') body.pop_back();
  return {"OK", body, {{"text", text.str()}}, 0};
}

std::string stack_text(const std::vector<std::string>& stack) {
  std::string s = "[";
  for (std::size_t i = 0; i < stack.size(); ++i) s += (i ? " " : "") + stack[i];
  return s + "]";
}

Outcome oracle(const Options& o) {
  auto model = load(o.file);
  OracleQuery q;
  if (o.mode == "reach") {
    q.mode = OracleMode::Reach;
  } else if (o.mode == "cover") {
    q.mode = OracleMode::Cover;
  } else if (o.mode == "cover-any") {
    q.mode = OracleMode::CoverAny;
  } else {
    throw UsageError("mode must be reach, cover or cover-any");
  }
  q.k = parse_k(o.k);
  q.max_steps = o.max_steps;
  q.max_stack = o.max_stack;
  auto found = search(model, q);
  if (!found.witness) return {"NO-WITNESS-WITHIN-BUDGET", "", {{"nodes", found.nodes}}, 1};
  std::string text = "WITNESS steps=" + std::to_string(found.witness->transitions.size());
  json path = json::array();
  for (const auto& step : found.witness->steps) {
    text += "\n" + step.state + " " + stack_text(step.stack) + " " + to_string(step.interval);
    path.push_back({{"state", step.state}, {"stack", step.stack}, {"interval", interval_json(step.interval)}});
  }
  return {"WITNESS", text, {{"path", path}, {"transitions", found.witness->transitions}}, 0};
}

Outcome validate_file(const Options& o) {
  auto parsed = load_model_file(o.file);
  std::vector<std::string> problems;
  if (auto* errors = std::get_if<std::vector<ParseError>>(&parsed)) {
    std::string all = format_errors(*errors);
    if (!all.empty() && all.back() == '\n') all.pop_back();
    problems.push_back(all);
  } else {
    for (const auto& d : validate(std::get<C1pvassModel>(parsed))) problems.push_back(d.message);
  }
  if (problems.empty()) return {"VALID", "", {{"diagnostics", json::array()}}, 0};
  std::string text = "INVALID";
  for (const auto& p : problems) text += "\n" + p;
  return {"INVALID", text, {{"diagnostics", problems}}, 2};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision procedures for continuous one-dimensional pushdown VASS", "c1p"};
  app.require_subcommand(1);
  Options o;
  std::function<Outcome()> action;

  auto common = [&](CLI::App* sub) {
    sub->add_option("FILE", o.file, "model file")->required();
    sub->add_flag("--json", o.json, "print a JSON envelope");
    sub->add_flag("--force-guarded", o.force_guarded, "use the guarded pipeline even when all guards are 0");
    sub->add_option("--node-budget", o.node_budget, "solver node budget for guarded queries");
  };

  auto* check_cmd = app.add_subcommand("check", "answer a reachability, coverability or boundedness query");
  check_cmd->require_subcommand(1);
  for (auto [name, mode] : {std::pair{"cover", OracleMode::Cover}, std::pair{"reach", OracleMode::Reach}}) {
    auto* sub = check_cmd->add_subcommand(name, std::string(name) + " the value k at the final state");
    sub->add_option("-k", o.k, "nonnegative integer or fraction p/q")->required();
    common(sub);
    sub->callback([&, mode] { action = [&, mode] { return check(o, mode); }; });
  }
  auto* bound_cmd = check_cmd->add_subcommand("bound", "is the set of reachable values bounded");
  common(bound_cmd);
  bound_cmd->callback([&] { action = [&] { return bound(o); }; });

  auto* interval_cmd = app.add_subcommand("interval", "reachable values of a model without guards");
  common(interval_cmd);
  interval_cmd->callback([&] { action = [&] { return interval(o); }; });

  auto* emit_cmd = app.add_subcommand("emit", "print an intermediate artifact");
  emit_cmd->require_subcommand(1);
  for (const char* what : {"pda", "cnf", "parikh"}) {
    auto* sub = emit_cmd->add_subcommand(what);
    sub->add_option("--mode", o.mode, "cover or reach")->capture_default_str();
    sub->add_option("-k", o.k, "target value (cover slices omit it unless given)");
    common(sub);
    std::string w = what;
    sub->callback([&, w] { action = [&, w] { return emit(o, w); }; });
  }
  emit_cmd->preparse_callback([&](std::size_t) { o.k = "none"; });

  auto* oracle_cmd = app.add_subcommand("oracle", "search for a witness run within budgets");
  oracle_cmd->add_option("--mode", o.mode, "reach, cover or cover-any")->capture_default_str();
  oracle_cmd->add_option("-k", o.k, "target value");
  oracle_cmd->add_option("--max-steps", o.max_steps)->capture_default_str();
  oracle_cmd->add_option("--max-stack", o.max_stack)->capture_default_str();
  common(oracle_cmd);
  oracle_cmd->callback([&] { action = [&] { return oracle(o); }; });

  auto* validate_cmd = app.add_subcommand("validate", "check a model file");
  common(validate_cmd);
  validate_cmd->callback([&] { action = [&] { return validate_file(o); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome result;
  try {
    result = action();
  } catch (const ResourceExceeded& e) {
    result = {"RESOURCE-EXCEEDED", "", {{"reason", e.what()}}, 3};
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  const auto micros =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();

  if (o.json) {
    out << json{{"verdict", result.verdict}, {"payload", result.payload}, {"micros", micros}}.dump() << '\n';
  } else {
    out << (result.text.empty() ? result.verdict : result.text) << '\n';
  }
  return result.code;
}

}  // namespace c1p::cli
