#pragma once

// Polynomial-time decisions for models whose guards are all 0.

#include "c1p/grammar.hpp"
#include "c1p/interval.hpp"
#include "c1p/model.hpp"

#include <memory>
#include <mutex>
#include <optional>

namespace c1p {

struct BoundReport {
  bool bounded = false;
  BigInt b = 0;              // meaningful iff bounded
  bool right_closed = false;  // meaningful iff bounded
};

// Flattens updates and merges finals; throws ModelError if a guard is
// nonzero. Every builder below applies this first.
C1pvassModel prepare_zero_model(const C1pvassModel& model);

// Two counter-free copies: P0 keeps only +0 transitions, P1 keeps all;
// positive updates cross from P0 to P1. Reads nothing.
Pda build_cover_zero_pda(const C1pvassModel& model);

// Adds a third copy P0' entered by -1 transitions out of P1, holding only
// +0 transitions. Finals are the final copies in P0 and P0'.
Pda build_reach_zero_pda(const C1pvassModel& model);

// The cover PDA with every +1 transition reading the letter "a".
Pda build_unary_pda(const C1pvassModel& model);

// As build_unary_pda, without the -1 transitions.
Pda build_unary_pda_without_decrements(const C1pvassModel& model);

// Lazily computed, thread-safe decisions for one model. Derived grammars
// are computed at most once.
class ZeroAnalysis {
 public:
  explicit ZeroAnalysis(const C1pvassModel& model);

  bool cover_zero() const;
  bool reach_zero() const;
  bool bounded() const;
  BoundReport tight_bound() const;  // throws GrammarError if unbounded or empty
  RationalInterval interval() const;
  bool cover(const Rational& k) const;
  bool reach(const Rational& k) const;

  const C1pvassModel& model() const { return model_; }
  const CnfGrammar& unary_cnf() const;

 private:
  C1pvassModel model_;
  mutable std::mutex mutex_;
  mutable std::optional<bool> cover_zero_, reach_zero_;
  mutable std::optional<CnfGrammar> unary_cnf_;
  mutable std::optional<BoundReport> bound_;
};

bool decide_cover_zero(const C1pvassModel& model);
bool decide_reach_zero(const C1pvassModel& model);
bool decide_bounded_zero(const C1pvassModel& model);
BoundReport tight_bound(const C1pvassModel& model);
RationalInterval reachable_interval(const C1pvassModel& model);
bool decide_cover_k(const C1pvassModel& model, const Rational& k);
bool decide_reach_k(const C1pvassModel& model, const Rational& k);

}  // namespace c1p
