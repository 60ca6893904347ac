#include "spp/lp.hpp"

#include <ostream>
#include <stdexcept>

namespace spp::lp {

using valuation::ConditionalTable;
using valuation::Instance;

std::string to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "unknown";
}

LinearProgram build_revenue_lp(const Instance& instance) {
  const auto& pi = instance.pi;
  const std::size_t n = pi.n();
  ConditionalTable table(pi);
  LinearProgram lp;
  lp.buyers = n;
  lp.num_columns = n * pi.size();
  lp.objective.assign(lp.num_columns, Rational(0));
  lp.keys.resize(lp.num_columns);
  for (std::size_t row = 0; row < pi.size(); ++row) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ctx = table.context_of(i, row);
      const Rational& vi = pi.support(row)[i];
      std::size_t col = lp.column(i, row);
      lp.keys[col] = {i, row};
      lp.objective[col] = ctx.weight * ctx.conditional.mass_at_least(vi) * vi;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& ctx : table.contexts(i)) {
      Constraint c;
      c.rhs = 1;
      c.label = "demand[" + std::to_string(i) + "," + valuation::format_valuation(ctx.others) + "]";
      for (std::size_t row : ctx.rows) c.terms.emplace_back(lp.column(i, row), Rational(1));
      lp.rows.push_back(std::move(c));
    }
  }
  for (std::size_t row = 0; row < pi.size(); ++row) {
    Constraint c;
    c.rhs = static_cast<unsigned long>(instance.k);
    c.label = "supply" + valuation::format_valuation(pi.support(row));
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ctx = table.context_of(i, row);
      std::size_t slot = table.slot_of(i, row);
      for (std::size_t s = 0; s <= slot; ++s) c.terms.emplace_back(lp.column(i, ctx.rows[s]), Rational(1));
    }
    lp.rows.push_back(std::move(c));
  }
  return lp;
}

Rational objective_value(const LinearProgram& lp, const std::vector<Rational>& y) {
  Rational total(0);
  for (std::size_t col = 0; col < lp.num_columns; ++col) total += lp.objective[col] * y[col];
  return total;
}

std::optional<std::string> check_feasible(const LinearProgram& lp, const std::vector<Rational>& y) {
  if (y.size() != lp.num_columns) return "solution has the wrong number of columns";
  for (std::size_t col = 0; col < y.size(); ++col) {
    if (y[col] < 0) return "column " + std::to_string(col) + " is negative";
  }
  for (const auto& c : lp.rows) {
    Rational lhs(0);
    for (const auto& [col, coef] : c.terms) lhs += coef * y[col];
    if (lhs > c.rhs) return "row " + c.label + " has lhs " + spp::to_string(lhs) + " > " + spp::to_string(c.rhs);
  }
  return std::nullopt;
}

LpSolution closed_form_unlimited(const Instance& instance) {
  if (instance.k != instance.n) {
    throw std::invalid_argument("closed_form_unlimited requires k = n");
  }
  const auto& pi = instance.pi;
  ConditionalTable table(pi);
  LpSolution sol;
  sol.status = Status::kOptimal;
  sol.value = 0;
  const std::size_t n = pi.n();
  sol.y.assign(n * pi.size(), Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& ctx : table.contexts(i)) {
      std::size_t best = 0;
      Rational best_revenue(-1);
      for (std::size_t s = 0; s < ctx.rows.size(); ++s) {
        const Rational& v = ctx.conditional.values()[s];
        Rational revenue = v * ctx.conditional.mass_at_least(v);
        if (revenue > best_revenue) {
          best_revenue = revenue;
          best = s;
        }
      }
      sol.y[ctx.rows[best] * n + i] = 1;
      sol.value += ctx.weight * best_revenue;
    }
  }
  return sol;
}

Rational revenue_upper_bound(const Instance& instance) {
  if (instance.k == instance.n) return closed_form_unlimited(instance).value;
  LpSolution sol = solve_simplex(build_revenue_lp(instance));
  if (sol.status != Status::kOptimal) {
    throw std::logic_error("revenue LP reported status " + to_string(sol.status));
  }
  return sol.value;
}

void write_lp(std::ostream& out, const LinearProgram& lp) {
  auto name = [&](std::size_t col) {
    if (lp.keys.empty()) return "y" + std::to_string(col);
    return "y[" + std::to_string(lp.keys[col].buyer) + "," + std::to_string(lp.keys[col].row) + "]";
  };
  out << "maximize:";
  bool any = false;
  for (std::size_t col = 0; col < lp.num_columns; ++col) {
    if (lp.objective[col] == 0) continue;
    out << (any ? " + " : " ") << spp::to_string(lp.objective[col]) << " " << name(col);
    any = true;
  }
  if (!any) out << " 0";
  out << "\n";
  for (const auto& c : lp.rows) {
    out << c.label << ":";
    for (std::size_t t = 0; t < c.terms.size(); ++t) {
      out << (t ? " + " : " ") << spp::to_string(c.terms[t].second) << " " << name(c.terms[t].first);
    }
    out << " <= " << spp::to_string(c.rhs) << "\n";
  }
  out << "bounds: all >= 0\n";
}

}  // namespace spp::lp
