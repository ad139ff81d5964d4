#pragma once

// Ground truth by exact propagation of the attainable counter set along
// concrete paths, plus a dense-normal-form normalizer for scaled runs.

#include "c1p/interval.hpp"
#include "c1p/model.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace c1p {

class InvalidPath : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct OracleStep {
  std::string state;
  std::vector<std::string> stack;  // bottom first
  RationalInterval interval;
};

struct OracleRun {
  std::vector<std::size_t> transitions;  // indices into model.transitions
  std::vector<OracleStep> steps;         // one more than transitions
};

// Attainable counter values after following `path` (transition indices) from
// the initial configuration. Throws InvalidPath when the path is not
// connected or not stack-valid.
RationalInterval propagate(const C1pvassModel& model, const std::vector<std::size_t>& path);

// Same, with the configuration after every prefix.
OracleRun trace(const C1pvassModel& model, const std::vector<std::size_t>& path);

enum class OracleMode { Reach, Cover, CoverAny };

struct OracleQuery {
  OracleMode mode = OracleMode::Reach;
  Rational k = 0;
  std::size_t max_steps = 14;
  std::size_t max_stack = 7;
};

struct SearchResult {
  std::optional<OracleRun> witness;  // nullopt means no witness within budget
  std::size_t nodes = 0;
};

bool accepts(const OracleQuery& query, const RationalInterval& at_final);

// Depth-first search over stack-valid paths within the budgets, successors in
// transition declaration order.
SearchResult search(const C1pvassModel& model, const OracleQuery& query);

// Exact decision by running the propagation rules symbolically inside a
// product PDA. The interval endpoints are integers bounded by the largest
// guard (and k), so the product is finite; its size grows with the guard
// values, so this is meant for small guards. Throws std::length_error when
// the product would exceed `max_states`.
bool decide_by_propagation(const C1pvassModel& model, OracleMode mode, const Rational& k,
                           std::size_t max_states = 200000);

// --- Dense normal form -------------------------------------------------------

enum class DnfTag {
  Full,         // scaled by 1
  Epsilon,      // small positive update
  Delta,        // small negative update
  Zero,         // a +0 transition
  FullLessDelta,    // +1 scaled to 1 - delta
  FullLessEpsilon,  // -1 scaled to 1 - epsilon
};

std::string to_string(DnfTag tag, const Rational& update_sign);

struct DnfScaledRun {
  std::vector<DnfTag> tags;
  std::vector<Rational> values;  // concrete scaled updates realizing the tags
  Rational positive_sum, negative_sum;        // P and N of the input run
  BigInt int_positive, int_negative;          // floor(P) and ceil(N)
  Rational frac_positive, frac_negative;      // P - floor(P) and ceil(N) - N
};

struct ScaledRun {
  std::vector<Rational> updates;       // the scaled update of every step
  std::vector<std::int64_t> guards;    // guard of the state after each step; empty means all 0
};

// Retags the run so that it satisfies the dense normal form conditions.
// Plain tags are tried first; composite tags are only used when no plain
// tagging exists. Throws std::invalid_argument when the run does not end at
// an integer or violates a guard. Returns nullopt when no tagging exists.
std::optional<DnfScaledRun> normalize_run(const ScaledRun& run);

// Individual condition checks, exposed for tests.
bool dnf_nonzero_pattern_ok(const std::vector<DnfTag>& tags, const std::vector<Rational>& updates);
bool dnf_fractional_pattern_ok(const std::vector<DnfTag>& tags, const std::vector<Rational>& values,
                               const std::vector<Rational>& updates);
bool dnf_floor_domination_ok(const std::vector<Rational>& original, const std::vector<Rational>& normalized);

}  // namespace c1p
