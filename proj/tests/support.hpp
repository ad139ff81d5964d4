#pragma once

#include "c1p/grammar.hpp"
#include "c1p/model.hpp"
#include "c1p/model_io.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace c1p::test {

C1pvassModel fixture(const std::string& name);
C1pvassModel model_from_text(const std::string& text);

struct RandomModelOptions {
  int max_states = 6;
  int max_stack_symbols = 2;
  int max_update = 1;  // updates drawn from [-max_update, max_update]
  int max_guard = 0;
  int max_guard_levels = 2;  // distinct nonzero guard values
  double edge_probability = 0.3;
};

C1pvassModel random_model(std::mt19937_64& rng, const RandomModelOptions& opts);

struct RandomPdaOptions {
  int max_states = 4;
  int max_stack_symbols = 2;
  int letters = 2;
  int max_transitions = 8;
};

Pda random_pda(std::mt19937_64& rng, const RandomPdaOptions& opts);

using Word = std::vector<int>;

// Accepted words of length <= max_len, by breadth-first search over
// configurations with the stack capped at max_depth.
std::set<Word> pda_words(const Pda& pda, std::size_t max_len, std::size_t max_depth);

// Words of length <= max_len derivable from the start variable, by a
// fixpoint over per-variable word sets.
std::set<Word> grammar_words(const Cfg& g, std::size_t max_len);

Cfg random_cfg(std::mt19937_64& rng, int variables, int terminals, int productions);

// Grammar built from rules like {"S", {"a", "S", "b"}}; names that appear as
// a head are variables, everything else is a terminal. First head is start.
Cfg make_cfg(const std::vector<std::pair<std::string, std::vector<std::string>>>& rules);

}  // namespace c1p::test
