#include "c1p/zero_analysis.hpp"

namespace c1p {

C1pvassModel prepare_zero_model(const C1pvassModel& model) {
  require_valid(model);
  if (!model.all_guards_zero()) throw ModelError("zero-guard analysis needs all guards 0");
  return single_final(flatten_updates(model));
}

namespace {

// Lays out one copy of the states per suffix and returns the state index of
// (copy, original state).
class CopyLayout {
 public:
  CopyLayout(Pda& pda, const C1pvassModel& model, const std::vector<std::string>& suffixes) {
    for (const auto& g : model.stack_alphabet) pda.add_stack_symbol(g);
    for (std::size_t c = 0; c < suffixes.size(); ++c) {
      for (std::size_t s = 0; s < model.states.size(); ++s) {
        index_[{c, model.states[s]}] = pda.add_state(model.states[s] + suffixes[c]);
      }
    }
  }

  int at(std::size_t copy, const std::string& state) const { return index_.at({copy, state}); }

 private:
  std::map<std::pair<std::size_t, std::string>, int> index_;
};

void add_copy_edge(Pda& pda, const CopyLayout& layout, const Transition& t, std::size_t from, std::size_t to,
                   int letter) {
  PdaTransition pt{layout.at(from, t.src), layout.at(to, t.dst), letter, t.stack.kind, -1};
  if (t.stack.kind != StackKind::None) pt.symbol = pda.stack_symbol_index(t.stack.symbol);
  pda.transitions.push_back(pt);
}

Pda cover_pda(const C1pvassModel& m, bool unary, bool with_decrements) {
  Pda pda;
  CopyLayout layout(pda, m, {"^0", "^1"});
  int a = unary ? pda.add_letter("a") : kEpsilon;
  pda.initial = layout.at(0, m.initial);
  const std::string& f = *m.finals.begin();
  pda.finals = {layout.at(0, f), layout.at(1, f)};
  for (const auto& t : m.transitions) {
    if (t.update == 0) {
      add_copy_edge(pda, layout, t, 0, 0, kEpsilon);
      add_copy_edge(pda, layout, t, 1, 1, kEpsilon);
    } else if (t.update > 0) {
      add_copy_edge(pda, layout, t, 0, 1, a);
      add_copy_edge(pda, layout, t, 1, 1, a);
    } else if (with_decrements) {
      add_copy_edge(pda, layout, t, 1, 1, kEpsilon);
    }
  }
  return pda;
}

bool pda_nonempty(const Pda& pda) { return !is_empty(pda_to_cfg(pda)); }

}  // namespace

Pda build_cover_zero_pda(const C1pvassModel& model) {
  return cover_pda(prepare_zero_model(model), false, true);
}

Pda build_unary_pda(const C1pvassModel& model) { return cover_pda(prepare_zero_model(model), true, true); }

Pda build_unary_pda_without_decrements(const C1pvassModel& model) {
  return cover_pda(prepare_zero_model(model), true, false);
}

Pda build_reach_zero_pda(const C1pvassModel& model) {
  C1pvassModel m = prepare_zero_model(model);
  Pda pda;
  CopyLayout layout(pda, m, {"^0", "^1", "^0'"});
  pda.initial = layout.at(0, m.initial);
  const std::string& f = *m.finals.begin();
  pda.finals = {layout.at(0, f), layout.at(2, f)};
  for (const auto& t : m.transitions) {
    if (t.update == 0) {
      for (std::size_t c = 0; c < 3; ++c) add_copy_edge(pda, layout, t, c, c, kEpsilon);
    } else if (t.update > 0) {
      add_copy_edge(pda, layout, t, 0, 1, kEpsilon);
      add_copy_edge(pda, layout, t, 1, 1, kEpsilon);
    } else {
      add_copy_edge(pda, layout, t, 1, 1, kEpsilon);
      add_copy_edge(pda, layout, t, 1, 2, kEpsilon);
    }
  }
  return pda;
}

// ---------------------------------------------------------------------------

ZeroAnalysis::ZeroAnalysis(const C1pvassModel& model) : model_(prepare_zero_model(model)) {}

bool ZeroAnalysis::cover_zero() const {
  std::lock_guard lock(mutex_);
  if (!cover_zero_) cover_zero_ = pda_nonempty(cover_pda(model_, false, true));
  return *cover_zero_;
}

bool ZeroAnalysis::reach_zero() const {
  {
    std::lock_guard lock(mutex_);
    if (reach_zero_) return *reach_zero_;
  }
  bool value = pda_nonempty(build_reach_zero_pda(model_));
  std::lock_guard lock(mutex_);
  reach_zero_ = value;
  return value;
}

const CnfGrammar& ZeroAnalysis::unary_cnf() const {
  std::lock_guard lock(mutex_);
  if (!unary_cnf_) unary_cnf_ = to_cnf(pda_to_cfg(cover_pda(model_, true, true)));
  return *unary_cnf_;
}

bool ZeroAnalysis::bounded() const {
  if (!cover_zero()) return true;
  return is_finite(unary_cnf());
}

BoundReport ZeroAnalysis::tight_bound() const {
  {
    std::lock_guard lock(mutex_);
    if (bound_) return *bound_;
  }
  BoundReport report;
  if (!cover_zero()) throw GrammarError("tight bound of a model without accepting runs");
  const CnfGrammar& cnf = unary_cnf();
  if (!is_finite(cnf)) throw GrammarError("tight bound of an unbounded model");
  report.bounded = true;
  report.b = longest_word_lengths(cnf).lengths[cnf.grammar.start];
  CnfGrammar no_dec = to_cnf(pda_to_cfg(cover_pda(model_, true, false)));
  report.right_closed = !is_empty(no_dec.grammar) && derives_word_of_length(no_dec, report.b);
  std::lock_guard lock(mutex_);
  bound_ = report;
  return report;
}

RationalInterval ZeroAnalysis::interval() const {
  if (!cover_zero()) return RationalInterval::none();
  bool zero = reach_zero();
  if (!bounded()) return RationalInterval::make(Rational(0), zero, std::nullopt, false);
  BoundReport bound = tight_bound();
  if (bound.b == 0) return RationalInterval::point(Rational(0));
  return RationalInterval::make(Rational(0), zero, Rational(bound.b), bound.right_closed);
}

bool ZeroAnalysis::cover(const Rational& k) const {
  if (k < 0) throw ModelError("k must be nonnegative");
  if (k == 0) return cover_zero();
  return interval().reaches_at_least(k);
}

bool ZeroAnalysis::reach(const Rational& k) const {
  if (k < 0) throw ModelError("k must be nonnegative");
  if (k == 0) return reach_zero();
  return cover(k);
}

bool decide_cover_zero(const C1pvassModel& model) { return ZeroAnalysis(model).cover_zero(); }
bool decide_reach_zero(const C1pvassModel& model) { return ZeroAnalysis(model).reach_zero(); }
bool decide_bounded_zero(const C1pvassModel& model) { return ZeroAnalysis(model).bounded(); }
BoundReport tight_bound(const C1pvassModel& model) { return ZeroAnalysis(model).tight_bound(); }
RationalInterval reachable_interval(const C1pvassModel& model) { return ZeroAnalysis(model).interval(); }
bool decide_cover_k(const C1pvassModel& model, const Rational& k) { return ZeroAnalysis(model).cover(k); }
bool decide_reach_k(const C1pvassModel& model, const Rational& k) { return ZeroAnalysis(model).reach(k); }

}  // namespace c1p
