#pragma once

// Coverability, reachability and boundedness for models with lower-bound
// guards: slice PDAs whose accepted words, filtered by a Presburger formula
// over their Parikh images, correspond to the accepting runs.

#include "c1p/model.hpp"
#include "c1p/numeric.hpp"
#include "c1p/presburger.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace c1p {

struct GuardLadder {
  std::vector<BigInt> levels;              // 0 = l_0 < l_1 < ... < l_m
  std::map<std::string, int> state_level;  // index of each state's guard

  static GuardLadder of(const C1pvassModel& model);
  void insert(const std::string& state, const BigInt& guard);
  int top() const { return static_cast<int>(levels.size()) - 1; }  // m
};

// a: +1 inside a slice, a': +1 entering the next slice, b: -1.
// The reachability PDA adds ahat (+1 entering the next slice after some -1),
// b' and bhat (-1 leaving a level of the suffix ladder before or after the
// last +1), and end letters e, e+ naming the suffix block of the final state.
enum class LetterKind { A, APrime, AHat, B, BPrime, BHat, End, EndPlus };

struct SliceLetter {
  LetterKind kind = LetterKind::A;
  int index = 0;

  std::string name() const;  // "a0", "a0'", "a0^", "b0", "b0'", "b0^", "e0", "e0+"
};

struct SlicePda {
  Pda pda;
  GuardLadder ladder;
  // Per PDA state: the original state and block tag, empty for the fresh
  // entry and exit states. Names of block states are "<orig>@<block>".
  std::vector<std::string> origin;
  std::vector<std::string> block;
};

// Validates, flattens updates and merges finals.
C1pvassModel prepare_guarded_model(const C1pvassModel& model);

// Name of the fresh final of guard k that a cover query places behind the
// final state via +0.
inline constexpr std::string_view kCoverTarget = "$target";

// Four blocks per slice: G_i (+0), G_i+ (+0, +1), B_{i-1}- (+0, -1) and R_i
// (all updates). Blocks of slice i hold the states with guard <= l_i, except
// B_{i-1}- which holds those with guard <= l_{i-1}. Expects a prepared model.
// With a target k the final state is kCoverTarget with guard k.
SlicePda build_cover_slices(const C1pvassModel& prepared, const std::optional<BigInt>& target = std::nullopt);

// The cover blocks over the +1 counts (prefix ladder) crossed with their
// time-reversed mirror over k plus the -1 counts still to come (suffix
// ladder: H_i, H_i+, C_{i-1}-, S_i). Block tags read "<prefix>|<suffix>".
SlicePda build_reach_slices(const C1pvassModel& prepared);

// For every level k >= 1: a' of slice k-1 unused, or enough increments
// before it with no decrement, or strictly more with some decrement.
Formula cover_formula(const GuardLadder& ladder);

// Prefix and suffix ladder conditions, end letters compatible with k, and
// k at most the number of increments (strictly when a decrement occurs).
Formula reach_formula(const GuardLadder& ladder, const BigInt& k);

// True iff the quotient of the PDA by blocks has no cycle besides
// self-loops.
bool blocks_acyclic(const SlicePda& slices);

class ResourceExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GuardedOptions {
  std::size_t node_budget = 1'000'000;
};

// Complete query formulas: the condition conjoined with the Parikh formula
// of the slice grammar; FALSE when the slice language is empty.
Formula cover_query(const C1pvassModel& model, const Rational& k);
Formula reach_query(const C1pvassModel& model, const Rational& k);

// k must be a nonnegative integer (std::invalid_argument otherwise). Throw
// ResourceExceeded when the solver runs out of nodes.
bool decide_cover_guarded(const C1pvassModel& model, const Rational& k, const GuardedOptions& options = {});
bool decide_reach_guarded(const C1pvassModel& model, const Rational& k, const GuardedOptions& options = {});

// A value K such that the model covers K iff it is unbounded:
// l_m + 2^(|V|+1) + 2 with |V| the variable count of the Chomsky normal
// form of its cover slice grammar.
BigInt boundedness_threshold(const C1pvassModel& model);

// True iff bounded.
bool decide_bounded_guarded(const C1pvassModel& model, const GuardedOptions& options = {});

}  // namespace c1p
