// Acceptance criteria 1-9: one PASS/FAIL line each, exit code 1 on any FAIL.

#include "c1p/grammar.hpp"
#include "c1p/guarded_analysis.hpp"
#include "c1p/oracle.hpp"
#include "c1p/presburger.hpp"
#include "c1p/zero_analysis.hpp"
#include "cli.hpp"
#include "support.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace c1p;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string path_of(const std::string& name) { return std::string(C1P_FIXTURE_DIR) + "/" + name; }

std::string cli_out(std::vector<std::string> args) {
  std::ostringstream out, err;
  c1p::cli::run(args, out, err);
  std::string s = out.str();
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s.empty() ? "error: " + err.str() : s;
}

// Collects failed expectations as "what: got X, want Y".
struct Expect {
  std::vector<std::string> failures;

  void operator()(const std::string& what, const std::string& got, const std::string& want) {
    if (got != want) failures.push_back(what + ": got " + got + ", want " + want);
  }
  Verdict verdict(const std::string& ok) const {
    if (failures.empty()) return {true, ok};
    std::string all;
    for (const auto& f : failures) all += (all.empty() ? "" : "; ") + f;
    return {false, all};
  }
};

Verdict fig1() {
  Expect expect;
  const auto file = path_of("fig1.c1p");
  for (int k = 0; k <= 4; ++k) {
    expect("cover " + std::to_string(k), cli_out({"check", "cover", "-k", std::to_string(k), file}), "NO");
    expect("reach " + std::to_string(k), cli_out({"check", "reach", "-k", std::to_string(k), file}), "NO");
  }
  expect("bound", cli_out({"check", "bound", file}), "BOUNDED");

  auto zeroed = std::filesystem::temp_directory_path() / "c1p_acceptance_fig1_zeroed.c1p";
  std::ofstream(zeroed) << serialize_model(erase_guards(c1p::test::fixture("fig1.c1p")));
  expect("zeroed cover 4", cli_out({"check", "cover", "-k", "4", zeroed.string()}), "YES");
  expect("zeroed cover 4 (guarded pipeline)", cli_out({"check", "cover", "-k", "4", zeroed.string(), "--force-guarded"}),
         "YES");
  expect("zeroed bound", cli_out({"check", "bound", zeroed.string()}), "UNBOUNDED");
  expect("zeroed bound (guarded pipeline)", cli_out({"check", "bound", zeroed.string(), "--force-guarded"}), "UNBOUNDED");
  return expect.verdict("cover/reach 0..4 NO, BOUNDED; zeroed cover 4 YES, UNBOUNDED");
}

Verdict example_4_2() {
  Expect expect;
  const auto file = path_of("example-4.2.c1p");
  expect("cover 1", cli_out({"check", "cover", "-k", "1", file}), "YES");
  expect("reach 1", cli_out({"check", "reach", "-k", "1", file}), "NO");
  return expect.verdict("cover 1 YES, reach 1 NO");
}

Verdict single_edge() {
  Expect expect;
  const auto file = path_of("single.c1p");
  expect("cover 0", cli_out({"check", "cover", "-k", "0", file}), "YES");
  expect("reach 0", cli_out({"check", "reach", "-k", "0", file}), "NO");
  expect("cover 0 (guarded pipeline)", cli_out({"check", "cover", "-k", "0", file, "--force-guarded"}), "YES");
  expect("reach 0 (guarded pipeline)", cli_out({"check", "reach", "-k", "0", file, "--force-guarded"}), "NO");
  return expect.verdict("cover 0 YES, reach 0 NO");
}

Verdict dnf_regression() {
  std::vector<Rational> ups;
  for (const char* x : {"1", "4/5", "-9/10", "-9/10", "1", "-1", "1"}) ups.push_back(*parse_rational(x));
  auto run = normalize_run({ups, {}});
  if (!run) return {false, "no normal form found"};
  std::string tags;
  for (std::size_t i = 0; i < run->tags.size(); ++i) tags += (i ? "," : "") + to_string(run->tags[i], ups[i]);
  Expect expect;
  expect("tags", tags, "+1,+1,-delta,-delta,+eps,-1,+eps");
  expect("nonzero pattern", dnf_nonzero_pattern_ok(run->tags, ups) ? "ok" : "violated", "ok");
  expect("fractional pattern", dnf_fractional_pattern_ok(run->tags, run->values, ups) ? "ok" : "violated", "ok");
  expect("floor domination", dnf_floor_domination_ok(ups, run->values) ? "ok" : "violated", "ok");
  Rational total = 0;
  for (const auto& v : run->values) total += v;
  expect("final value", to_string(total), "1");
  return expect.verdict(tags);
}

Verdict oracle_sweep() {
  std::mt19937_64 rng(2024);
  c1p::test::RandomModelOptions opts;
  opts.max_states = 6;
  opts.max_stack_symbols = 2;
  opts.max_update = 1;
  std::size_t queries = 0, witnesses = 0, disagreements = 0, exact_mismatches = 0;
  std::string first;
  for (int trial = 0; trial < 200; ++trial) {
    auto m = c1p::test::random_model(rng, opts);
    ZeroAnalysis za(m);
    for (const char* text : {"0", "1/2", "1", "2"}) {
      const Rational k = *parse_rational(text);
      for (auto mode : {OracleMode::Cover, OracleMode::Reach}) {
        ++queries;
        const bool answer = mode == OracleMode::Cover ? za.cover(k) : za.reach(k);
        const bool witness = search(m, {mode, k, 14, 7}).witness.has_value();
        witnesses += witness;
        if (witness && !answer) {
          ++disagreements;
          if (first.empty()) first = "model " + std::to_string(trial) + " k=" + text;
        }
        if (answer != decide_by_propagation(m, mode, k)) ++exact_mismatches;
      }
    }
  }
  std::ostringstream detail;
  detail << queries << " queries, " << witnesses << " oracle witnesses, " << disagreements << " disagreements, "
         << exact_mismatches << " mismatches with exact propagation";
  if (!first.empty()) detail << " (first: " << first << ")";
  return {disagreements == 0 && exact_mismatches == 0, detail.str()};
}

Verdict degeneration_sweep() {
  std::mt19937_64 rng(4242);
  c1p::test::RandomModelOptions opts;
  opts.max_states = 5;
  const auto dir = std::filesystem::temp_directory_path();
  std::size_t queries = 0, disagreements = 0, yes = 0;
  std::string first;
  for (int trial = 0; trial < 50; ++trial) {
    auto file = (dir / ("c1p_acceptance_degeneration_" + std::to_string(trial) + ".c1p")).string();
    std::ofstream(file) << serialize_model(c1p::test::random_model(rng, opts));
    for (const char* query : {"cover", "reach"}) {
      for (int k = 0; k <= 3; ++k) {
        ++queries;
        const auto zero = cli_out({"check", query, "-k", std::to_string(k), file});
        const auto np = cli_out({"check", query, "-k", std::to_string(k), file, "--force-guarded"});
        yes += zero == "YES";
        if (zero != np) {
          ++disagreements;
          if (first.empty()) first = "model " + std::to_string(trial) + " " + query + " " + std::to_string(k) + ": " + zero + " vs " + np;
        }
      }
    }
    std::filesystem::remove(file);
  }
  std::ostringstream detail;
  detail << queries << " query pairs (" << yes << " YES), " << disagreements << " disagreements";
  if (!first.empty()) detail << " (first: " << first << ")";
  return {disagreements == 0, detail.str()};
}

Verdict fixpoint_bound() {
  std::mt19937_64 rng(77);
  std::size_t grammars = 0, violations = 0, max_ratio_num = 0, max_ratio_den = 1;
  auto check = [&](const CnfGrammar& cnf) {
    if (is_empty(cnf.grammar) || !is_finite(cnf)) return;
    ++grammars;
    const auto w = longest_word_lengths(cnf);
    const std::size_t v = cnf.grammar.variables.size();
    if (w.iterations > v) ++violations;
    if (w.iterations * max_ratio_den > max_ratio_num * v) {
      max_ratio_num = w.iterations;
      max_ratio_den = v;
    }
  };
  for (int i = 0; i < 300; ++i) check(to_cnf(c1p::test::random_cfg(rng, 2 + i % 5, 2, 4 + i % 7)));
  c1p::test::RandomModelOptions opts;
  for (int i = 0; i < 200; ++i) {
    auto m = c1p::test::random_model(rng, opts);
    check(to_cnf(pda_to_cfg(build_unary_pda(m))));
  }
  std::ostringstream detail;
  detail << grammars << " finite grammars, " << violations << " violations, worst iterations/|V| = " << max_ratio_num
         << "/" << max_ratio_den;
  return {violations == 0 && grammars > 100, detail.str()};
}

Verdict parikh_round_trip() {
  std::mt19937_64 rng(88);
  using Parikh = std::vector<int>;
  std::size_t tested = 0, checks = 0, failures = 0;
  while (tested < 50) {
    Cfg g = prune(c1p::test::random_cfg(rng, 4, 2, 7));
    if (is_empty(g)) continue;
    ++tested;
    const Formula phi = parikh_formula(g);
    std::set<Parikh> images;
    for (const auto& w : c1p::test::grammar_words(g, 6)) {
      Parikh p(g.terminals.size(), 0);
      for (int a : w) ++p[a];
      images.insert(p);
    }
    // Every vector of norm at most 6: SAT exactly for the images of short words.
    Parikh p(g.terminals.size(), 0);
    std::function<void(std::size_t, int)> visit = [&](std::size_t i, int left) {
      if (i == p.size()) {
        std::vector<Formula> parts{phi};
        for (std::size_t t = 0; t < p.size(); ++t) {
          parts.push_back(eq(LinearExpr::var(count_variable(g.terminals[t])), LinearExpr::num(p[t])));
        }
        ++checks;
        auto r = solve(Formula::conj(std::move(parts)));
        if ((r.status == SolveStatus::Sat) != images.contains(p)) ++failures;
        return;
      }
      for (int c = 0; c <= left; ++c) {
        p[i] = c;
        visit(i + 1, left - c);
      }
      p[i] = 0;
    };
    visit(0, 6);
  }
  std::ostringstream detail;
  detail << tested << " grammars, " << checks << " vectors, " << failures << " failures";
  return {failures == 0, detail.str()};
}

Verdict intervals() {
  Expect expect;
  // Each fixture is a single path, so propagation along it is the whole set.
  struct Case {
    const char* file;
    const char* want;
    std::vector<std::size_t> path;
  };
  for (const Case& c : {Case{"chain2.c1p", "(0,2]", {0, 1}}, Case{"chain.c1p", "[0,1)", {0, 1}}, Case{"single.c1p", "(0,1]", {0}}}) {
    const auto m = c1p::test::fixture(c.file);
    expect(std::string(c.file) + " procedure", to_string(reachable_interval(m)), c.want);
    expect(std::string(c.file) + " oracle", to_string(propagate(m, c.path)), c.want);
    expect(std::string(c.file) + " cli", cli_out({"interval", path_of(c.file)}), std::string("INTERVAL ") + c.want);
  }
  return expect.verdict("chain2 (0,2], chain [0,1), single (0,1]");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0 for none
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "fig1 fixture", 5, fig1},
      {2, "example 4.2 fixture", 5, example_4_2},
      {3, "single +1 edge", 0, single_edge},
      {4, "dense normal form regression", 0, dnf_regression},
      {5, "oracle agreement sweep", 120, oracle_sweep},
      {6, "guarded degeneration sweep", 300, degeneration_sweep},
      {7, "fixpoint iteration bound", 0, fixpoint_bound},
      {8, "Parikh formula round trip", 120, parikh_round_trip},
      {9, "interval correctness", 0, intervals},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
      v.pass = false;
      v.detail += "; over the time limit";
    }
    all = all && v.pass;
    std::cout << "criterion " << c.id << " " << (v.pass ? "PASS" : "FAIL") << "  " << c.name << ": " << v.detail << " ["
              << std::fixed << std::setprecision(2) << seconds << " s";
    if (c.limit_seconds > 0) std::cout << " / limit " << std::setprecision(0) << c.limit_seconds << " s";
    std::cout << "]" << std::endl;
  }
  return all ? 0 : 1;
}
