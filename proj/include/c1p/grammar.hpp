#pragma once

// Context-free grammars derived from pushdown automata, Chomsky normal form,
// and the emptiness / finiteness / word-length analyses built on them.

#include "c1p/model.hpp"
#include "c1p/numeric.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace c1p {

struct GrammarSymbol {
  bool terminal = false;
  int index = 0;

  static GrammarSymbol var(int i) { return {false, i}; }
  static GrammarSymbol term(int i) { return {true, i}; }
  bool operator==(const GrammarSymbol&) const = default;
  auto operator<=>(const GrammarSymbol&) const = default;
};

struct Production {
  int head = 0;
  std::vector<GrammarSymbol> body;  // empty body is the epsilon rule

  bool operator==(const Production&) const = default;
};

struct Cfg {
  std::vector<std::string> variables;
  std::vector<std::string> terminals;
  std::vector<Production> productions;
  int start = 0;

  int add_variable(std::string name);
  int add_terminal(std::string name);  // returns existing index if present
  int terminal_index(const std::string& name) const;
  std::size_t size() const;  // total symbols over all productions plus their count
};

// A grammar whose rules all have the shape A -> B C, A -> a, or S -> eps,
// where S never occurs in a body. `pruned` records that every variable is
// reachable from S and productive.
struct CnfGrammar {
  Cfg grammar;
  bool pruned = false;
};

struct WordLengthMap {
  std::vector<BigInt> lengths;  // indexed like grammar.variables
  std::size_t iterations = 0;   // rounds in which some value changed
};

class GrammarError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// --- PDA preprocessing ------------------------------------------------------

// Removes states that are unreachable from the initial state or cannot reach
// a final state in the stack-free transition graph.
Pda trim(const Pda& pda);

// Removes transitions that read nothing and leave the stack alone, adding
// their closure in front of every remaining transition. Language preserving.
Pda eliminate_silent_moves(const Pda& pda);

// --- Grammar construction and normalization ---------------------------------

// Triple construction after draining the stack: a fresh sink reachable from
// every final state pops any symbol, and the start variable derives exactly
// the words read on runs from the initial state into the sink with an empty
// stack. Only productive triples are materialized.
Cfg pda_to_cfg(const Pda& pda);

std::vector<bool> productive_variables(const Cfg& g);
std::vector<bool> reachable_variables(const Cfg& g);

// Drops non-productive variables first, then unreachable ones. The start
// variable is always kept.
Cfg prune(const Cfg& g);

CnfGrammar to_cnf(const Cfg& g);

bool is_empty(const Cfg& g);

// True iff the variable dependency graph is acyclic. Requires g.pruned.
bool is_finite(const CnfGrammar& g);

// Longest word derivable from each variable. Requires a pruned grammar with
// a finite language.
WordLengthMap longest_word_lengths(const CnfGrammar& g);

// Shortest word derivable from each variable; nullopt for unproductive ones.
std::vector<std::optional<BigInt>> shortest_word_lengths(const Cfg& g);

// Whether the start variable derives some word of exactly `length` letters,
// by a length-set fixpoint over bitsets truncated at `length`. Throws when
// `length` exceeds `max_length` (the bitsets would not fit).
bool derives_word_of_length(const CnfGrammar& g, const BigInt& length,
                            std::size_t max_length = std::size_t{1} << 20);

// Header lines for the alphabets, initial and final states, then one line
// per state and per transition ("trans p q a0 push:A", "@eps" for no
// letter), in index order.
void print_pda(std::ostream& out, const Pda& pda);

// One rule per line, "A -> B C", "A -> a", "S -> @eps", sorted by head
// then body.
void print_cnf(std::ostream& out, const CnfGrammar& g);

std::string production_to_string(const Cfg& g, const Production& p);

}  // namespace c1p
