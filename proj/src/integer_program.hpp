#pragma once

// Exact integer feasibility for small linear systems over nonnegative
// variables: dense two-phase simplex on rationals plus depth-first
// branch-and-bound.

#include "c1p/numeric.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace c1p::detail {

enum class RowKind { Le, Eq, Ge };

struct Row {
  std::vector<std::pair<int, BigInt>> coeffs;  // (column, coefficient), columns distinct
  RowKind kind = RowKind::Le;
  BigInt rhs = 0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded() : std::runtime_error("node budget exceeded") {}
};

class NodeCounter {
 public:
  explicit NodeCounter(std::size_t budget) : budget_(budget) {}
  void tick() {
    if (++used_ > budget_) throw BudgetExceeded();
  }
  std::size_t used() const { return used_; }

 private:
  std::size_t budget_;
  std::size_t used_ = 0;
};

// Minimizes the sum of all variables; nullopt when infeasible.
std::optional<std::vector<Rational>> solve_lp(int num_vars, const std::vector<Row>& rows);

// Papadimitriou's bound n(ma)^(2m+1) on the smallest solution of the system
// in equality form, where m counts rows, n columns including slacks, and a
// is the largest absolute coefficient or right-hand side.
BigInt small_solution_bound(int num_vars, const std::vector<Row>& rows);

// Some nonnegative integer solution, or nullopt. Every LP solved counts as
// one node.
std::optional<std::vector<BigInt>> solve_integer(int num_vars, const std::vector<Row>& rows,
                                                 NodeCounter& counter);

}  // namespace c1p::detail
