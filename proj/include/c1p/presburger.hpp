#pragma once

// Existential Presburger formulas over nonnegative integer variables, a
// satisfiability procedure, and the Parikh-image formula of a grammar.

#include "c1p/grammar.hpp"
#include "c1p/numeric.hpp"

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace c1p {

enum class Relation { Eq, Le, Lt, Ge, Gt };

// sum(terms) rel constant; terms sorted by name, no zero coefficients.
struct LinearAtom {
  std::vector<std::pair<std::string, BigInt>> terms;
  Relation rel = Relation::Eq;
  BigInt constant = 0;

  bool operator==(const LinearAtom&) const = default;
};

struct Formula {
  enum class Kind { And, Or, Atom };
  Kind kind = Kind::And;
  std::vector<Formula> children;
  LinearAtom atom;

  static Formula truth() { return {}; }
  static Formula falsity() { return {Kind::Or, {}, {}}; }
  static Formula of(LinearAtom a) { return {Kind::Atom, {}, std::move(a)}; }
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);

  bool operator==(const Formula&) const = default;
};

// Affine expression used to build atoms.
struct LinearExpr {
  std::map<std::string, BigInt> coeffs;
  BigInt constant = 0;

  static LinearExpr var(const std::string& name, const BigInt& coeff = 1);
  static LinearExpr num(const BigInt& value);
  LinearExpr& operator+=(const LinearExpr& other);
  LinearExpr& operator-=(const LinearExpr& other);
};

LinearExpr operator+(LinearExpr a, const LinearExpr& b);
LinearExpr operator-(LinearExpr a, const LinearExpr& b);
LinearExpr operator*(const BigInt& c, LinearExpr a);
LinearExpr sum(const std::vector<std::string>& names);

Formula compare(const LinearExpr& lhs, Relation rel, const LinearExpr& rhs);
inline Formula eq(const LinearExpr& l, const LinearExpr& r) { return compare(l, Relation::Eq, r); }
inline Formula le(const LinearExpr& l, const LinearExpr& r) { return compare(l, Relation::Le, r); }
inline Formula lt(const LinearExpr& l, const LinearExpr& r) { return compare(l, Relation::Lt, r); }
inline Formula ge(const LinearExpr& l, const LinearExpr& r) { return compare(l, Relation::Ge, r); }
inline Formula gt(const LinearExpr& l, const LinearExpr& r) { return compare(l, Relation::Gt, r); }

using Assignment = std::map<std::string, BigInt>;

std::set<std::string> variables(const Formula& f);

// Variables missing from `a` read as 0.
bool evaluate(const Formula& f, const Assignment& a);
bool evaluate(const LinearAtom& atom, const Assignment& a);

enum class SolveStatus { Sat, Unsat, ResourceExceeded };

struct SolveOptions {
  std::size_t node_budget = 1'000'000;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unsat;
  Assignment model;  // total on variables(f) when Sat
  std::size_t nodes = 0;
};

// Depth-first choice of disjuncts violated by the current candidate, with an
// exact branch-and-bound integer feasibility check for every conjunction.
SolveResult solve(const Formula& f, const SolveOptions& options = {});

std::string to_string(SolveStatus s);

// --- Parikh images -------------------------------------------------------------

// Name of the letter-count variable of a terminal.
std::string count_variable(const std::string& terminal);

// Formula whose models, projected to the count variables, are exactly the
// Parikh images of L(g). Auxiliary variables start with '$'. Throws
// std::invalid_argument for grammars with useless variables or an empty
// language.
Formula parikh_formula(const Cfg& g);

// Decides parikh_formula(g) && phi. Starts from the flow equations alone and
// adds a connectivity cut whenever a candidate uses productions unreachable
// from the start variable; the model returned satisfies the full formula.
SolveResult solve_parikh(const Cfg& g, const Formula& phi, const SolveOptions& options = {});

// Parikh-preserving simplification: drops variables that only derive the
// empty word, bypasses unit and single-rule variables, and merges rules
// that are equal up to body order. The result is pruned.
Cfg simplify_for_parikh(const Cfg& g);

// --- Output --------------------------------------------------------------------

std::string to_string(const Formula& f);

// QF_LIA script declaring every variable nonnegative and asserting f.
void print_smtlib(std::ostream& out, const Formula& f);

}  // namespace c1p
