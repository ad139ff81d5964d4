#pragma once

// Core data types: continuous one-dimensional pushdown VASS with lower-bound
// guards, plain pushdown automata, and the model-level normalizations
// (update flattening, single final state, guard erasure).

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace c1p {

// The bottom-of-stack symbol is implicit. This name is reserved so that a
// programmatically built model that tries to push or pop it is reported by
// validate(); the file format cannot spell it.
inline constexpr std::string_view kBottomSymbol = "$bottom";

// Fresh names introduced by the normalizations start with this character,
// which the model file format rejects.
inline constexpr char kFreshPrefix = '$';

enum class StackKind : std::uint8_t { None, Push, Pop };

struct StackOp {
  StackKind kind = StackKind::None;
  std::string symbol;

  static StackOp none() { return {}; }
  static StackOp push(std::string s) { return {StackKind::Push, std::move(s)}; }
  static StackOp pop(std::string s) { return {StackKind::Pop, std::move(s)}; }

  bool operator==(const StackOp&) const = default;
};

struct Transition {
  std::string src;
  std::string dst;
  std::int64_t update = 0;
  StackOp stack;

  bool operator==(const Transition&) const = default;
};

struct C1pvassModel {
  std::vector<std::string> states;  // declaration order
  std::map<std::string, std::int64_t> lower_bound;
  std::string initial;
  std::set<std::string> finals;
  std::set<std::string> stack_alphabet;
  std::vector<Transition> transitions;

  std::int64_t guard(const std::string& state) const;
  bool has_state(const std::string& state) const;
  bool all_guards_zero() const;
  bool updates_flat() const;  // every update in {-1, 0, +1}

  // Adds a state with the given guard; throws if the name is taken.
  void add_state(const std::string& name, std::int64_t guard = 0);
};

struct Diagnostic {
  std::string message;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reports every violated well-formedness condition. Empty means valid.
std::vector<Diagnostic> validate(const C1pvassModel& model);

// Throws ModelError listing the diagnostics when the model is invalid.
void require_valid(const C1pvassModel& model);

// Stack symbols encoding |n| for the update gadget: bit i-1 of |n| set
// yields symbol "$a<i>". Ordered most significant first (push order).
std::vector<std::string> binary_update_symbols(std::int64_t n);

// Rewrites every update with |n| >= 2 through a shared pop-loop gadget so
// that all updates lie in {-1, 0, +1}.
C1pvassModel flatten_updates(const C1pvassModel& model);

// Ensures exactly one final state, adding "$final" behind the old finals
// when there are several.
C1pvassModel single_final(const C1pvassModel& model);

// Same model with every guard set to 0.
C1pvassModel erase_guards(const C1pvassModel& model);

// Encoding size used as |A| in bound computations: total transitions plus
// states plus the bit lengths of all numeric constants.
std::size_t encoding_size(const C1pvassModel& model);

// ---------------------------------------------------------------------------
// Pushdown automata. States, letters and stack symbols are indices into the
// name tables; the bottom symbol is implicit and never appears in a table.

inline constexpr int kEpsilon = -1;

struct PdaTransition {
  int src = 0;
  int dst = 0;
  int letter = kEpsilon;
  StackKind op = StackKind::None;
  int symbol = -1;  // index into stack_alphabet when op != None

  bool operator==(const PdaTransition&) const = default;
};

struct Pda {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::vector<std::string> stack_alphabet;
  int initial = 0;
  std::vector<int> finals;
  std::vector<PdaTransition> transitions;

  int add_state(std::string name);
  int add_letter(std::string name);  // returns existing index if present
  int add_stack_symbol(std::string name);
  int letter_index(std::string_view name) const;  // -1 when absent
  int stack_symbol_index(std::string_view name) const;
  bool is_final(int state) const;
};

// Structural checks: indices in range, finals/initial valid.
std::vector<Diagnostic> validate(const Pda& pda);

// The PDA obtained by dropping the counter; it reads nothing.
Pda underlying_pda(const C1pvassModel& model);

struct ParikhVector {
  std::map<std::string, std::uint64_t> counts;

  bool operator==(const ParikhVector&) const = default;
  auto operator<=>(const ParikhVector&) const = default;
};

// Parikh image of a word given as letter indices of `pda`.
ParikhVector parikh_image(const Pda& pda, const std::vector<int>& word);

}  // namespace c1p
