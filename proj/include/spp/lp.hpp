#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spp/valuation.hpp"

namespace spp::lp {

// Row of the form sum(coef * y[col]) <= rhs.
struct Constraint {
  std::vector<std::pair<std::size_t, Rational>> terms;
  Rational rhs;
  std::string label;
};

// Column of the revenue LP: y_buyer(support row).
struct ColumnKey {
  std::size_t buyer = 0;
  std::size_t row = 0;
};

// maximize objective . y  subject to rows, y >= 0.
struct LinearProgram {
  std::size_t num_columns = 0;
  std::vector<Rational> objective;
  std::vector<Constraint> rows;
  std::vector<ColumnKey> keys;  // empty for hand-built programs
  std::size_t buyers = 0;       // column of (i, row) is row * buyers + i

  std::size_t column(std::size_t buyer, std::size_t row) const { return row * buyers + buyer; }
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

std::string to_string(Status status);

struct LpSolution {
  Status status = Status::kOptimal;
  std::vector<Rational> y;
  Rational value;
};

// One unit-demand row per (i, v_{-i}) and one supply row per support vector.
LinearProgram build_revenue_lp(const valuation::Instance& instance);

// Exact two-phase primal simplex on a dense tableau with Bland's rule.
LpSolution solve_simplex(const LinearProgram& lp);

// Optimal solution for k = n: y = 1 at the smallest maximizer of
// v_i * Pr[v' >= v_i] in every context. Throws std::invalid_argument if k < n.
LpSolution closed_form_unlimited(const valuation::Instance& instance);

Rational revenue_upper_bound(const valuation::Instance& instance);

// First violated constraint, or nullopt.
std::optional<std::string> check_feasible(const LinearProgram& lp, const std::vector<Rational>& y);

Rational objective_value(const LinearProgram& lp, const std::vector<Rational>& y);

// Plain-text dump: objective line, then one constraint per line.
void write_lp(std::ostream& out, const LinearProgram& lp);

}  // namespace spp::lp
