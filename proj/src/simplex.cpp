#include <algorithm>
#include <limits>

#include "spp/lp.hpp"

namespace spp::lp {

namespace {

class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp) : structural_(lp.num_columns), m_(lp.rows.size()) {
    std::size_t artificial = 0;
    for (const auto& c : lp.rows) {
      if (sgn(c.rhs) < 0) ++artificial;
    }
    first_artificial_ = structural_ + m_;
    width_ = first_artificial_ + artificial;
    rows_.assign(m_, std::vector<Rational>(width_ + 1, Rational(0)));
    basis_.resize(m_);
    std::size_t next_art = first_artificial_;
    for (std::size_t r = 0; r < m_; ++r) {
      const auto& c = lp.rows[r];
      const bool flip = sgn(c.rhs) < 0;
      auto& row = rows_[r];
      for (const auto& [col, coef] : c.terms) {
        if (flip) row[col] -= coef; else row[col] += coef;
      }
      row[structural_ + r] = flip ? -1 : 1;
      row[width_] = flip ? Rational(-c.rhs) : c.rhs;
      if (flip) {
        row[next_art] = 1;
        basis_[r] = next_art++;
      } else {
        basis_[r] = structural_ + r;
      }
    }
  }

  bool has_artificial() const { return width_ > first_artificial_; }

  // Phase 1 objective: maximize -(sum of artificials).
  void load_phase_one() {
    obj_.assign(width_ + 1, Rational(0));
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      for (std::size_t j = 0; j <= width_; ++j) {
        if (j >= first_artificial_ && j < width_) continue;
        obj_[j] += rows_[r][j];
      }
    }
  }

  void load_phase_two(const std::vector<Rational>& c) {
    obj_.assign(width_ + 1, Rational(0));
    for (std::size_t j = 0; j < structural_; ++j) obj_[j] = c[j];
    for (std::size_t r = 0; r < m_; ++r) {
      std::size_t b = basis_[r];
      if (b >= structural_ || sgn(c[b]) == 0) continue;
      const Rational cb = c[b];
      for (std::size_t j = 0; j <= width_; ++j) {
        if (sgn(rows_[r][j]) != 0) obj_[j] -= cb * rows_[r][j];
      }
    }
  }

  // Runs Bland's rule to optimality; false if unbounded.
  bool optimize(bool allow_artificial) {
    const std::size_t limit = allow_artificial ? width_ : first_artificial_;
    while (true) {
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (sgn(obj_[j]) > 0) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return true;
      std::size_t leave = m_;
      Rational best;
      for (std::size_t r = 0; r < m_; ++r) {
        if (sgn(rows_[r][enter]) <= 0) continue;
        Rational t = rows_[r][width_] / rows_[r][enter];
        if (leave == m_ || t < best || (t == best && basis_[r] < basis_[leave])) {
          best = t;
          leave = r;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

  // Pivots basic artificials out where possible after phase 1.
  void expel_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (sgn(rows_[r][j]) != 0) {
          pivot(r, j);
          break;
        }
      }
    }
  }

  Rational value() const { return Rational(-obj_[width_]); }

  std::vector<Rational> primal() const {
    std::vector<Rational> y(structural_, Rational(0));
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < structural_) y[basis_[r]] = rows_[r][width_];
    }
    return y;
  }

 private:
  void pivot(std::size_t r, std::size_t j) {
    auto& prow = rows_[r];
    const Rational inv = 1 / prow[j];
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c <= width_; ++c) {
      if (sgn(prow[c]) != 0) {
        prow[c] *= inv;
        nz.push_back(c);
      }
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (sgn(row[j]) == 0) return;
      const Rational f = row[j];
      for (std::size_t c : nz) row[c] -= f * prow[c];
    };
    for (std::size_t other = 0; other < m_; ++other) {
      if (other != r) eliminate(rows_[other]);
    }
    eliminate(obj_);
    basis_[r] = j;
  }

  std::size_t structural_;
  std::size_t m_;
  std::size_t first_artificial_ = 0;
  std::size_t width_ = 0;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> obj_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve_simplex(const LinearProgram& lp) {
  Tableau t(lp);
  LpSolution sol;
  if (t.has_artificial()) {
    t.load_phase_one();
    t.optimize(true);
    if (sgn(t.value()) < 0) {
      sol.status = Status::kInfeasible;
      return sol;
    }
    t.expel_artificials();
  }
  t.load_phase_two(lp.objective);
  if (!t.optimize(false)) {
    sol.status = Status::kUnbounded;
    return sol;
  }
  sol.status = Status::kOptimal;
  sol.y = t.primal();
  sol.value = objective_value(lp, sol.y);
  return sol;
}

}  // namespace spp::lp
