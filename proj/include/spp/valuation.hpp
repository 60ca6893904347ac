#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spp/rational.hpp"

namespace spp::valuation {

// One value per buyer. Buyers are 0-based throughout the library.
using Valuation = std::vector<Rational>;

std::string format_valuation(const Valuation& v);

// v with coordinate i removed.
Valuation drop(const Valuation& v, std::size_t i);

// v restricted to the (sorted) coordinates in coords.
Valuation restrict(const Valuation& v, const std::vector<std::size_t>& coords);

// k-th largest coordinate, k is 1-based.
Rational kth_largest(const Valuation& v, std::size_t k);

// Sum of the k largest coordinates.
Rational top_k_sum(const Valuation& v, std::size_t k);

// Distribution over the values of a single buyer; values strictly ascending.
class ScalarDistribution {
 public:
  ScalarDistribution() = default;

  // Merges repeated values. Throws std::invalid_argument unless the masses are
  // positive, the values non-negative, and the masses sum to 1.
  static ScalarDistribution make(std::vector<std::pair<Rational, Rational>> value_mass);
  static ScalarDistribution point(const Rational& value);
  static ScalarDistribution uniform(const std::vector<Rational>& values);

  const std::vector<Rational>& values() const { return values_; }
  const std::vector<Rational>& masses() const { return masses_; }
  std::size_t size() const { return values_.size(); }

  Rational mass_at_least(const Rational& x) const;

  bool operator==(const ScalarDistribution& other) const = default;

 private:
  std::vector<Rational> values_;
  std::vector<Rational> masses_;
};

// Returns the first violated invariant, or nullopt when the data describes a
// valid joint distribution. Ordering is not checked; make() canonicalizes it.
std::optional<std::string> validate(std::size_t n, const std::vector<Valuation>& support,
                                    const std::vector<Rational>& mass);

class JointDistribution {
 public:
  // Sorts the support lexicographically. Throws std::invalid_argument with the
  // validate() message on bad input.
  static JointDistribution make(std::size_t n, std::vector<Valuation> support,
                                std::vector<Rational> mass);

  // Merges repeated vectors by summing their masses.
  static JointDistribution from_outcomes(std::size_t n,
                                         std::vector<std::pair<Valuation, Rational>> outcomes);

  std::size_t n() const { return n_; }
  std::size_t size() const { return support_.size(); }
  const std::vector<Valuation>& support() const { return support_; }
  const std::vector<Rational>& mass() const { return mass_; }
  const Valuation& support(std::size_t row) const { return support_[row]; }
  const Rational& mass(std::size_t row) const { return mass_[row]; }

  std::optional<std::size_t> find(const Valuation& v) const;
  Rational probability(const Valuation& v) const;

  // Distinct values of coordinate i over the support, ascending.
  std::vector<Rational> coordinate_values(std::size_t i) const;

  bool operator==(const JointDistribution& other) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Valuation> support_;
  std::vector<Rational> mass_;
};

std::optional<std::string> validate(const JointDistribution& pi);

struct Instance {
  std::size_t n = 0;
  JointDistribution pi;
  std::size_t k = 0;

  // Throws std::invalid_argument unless 1 <= k <= n = pi.n().
  static Instance make(JointDistribution pi, std::size_t k);
};

// Projection onto coords (nonempty, distinct, in range); the result has
// coords.size() buyers, in ascending coordinate order.
JointDistribution marginal(const JointDistribution& pi, std::vector<std::size_t> coords);

using Assignment = std::vector<std::pair<std::size_t, Rational>>;

// Distribution of coordinate i given the partial assignment. Throws
// std::domain_error when the conditioning event has zero mass.
ScalarDistribution conditional(const JointDistribution& pi, std::size_t i,
                               const Assignment& fixed);

// For each buyer, groups the support by v_{-i}.
struct Context {
  Valuation others;
  Rational weight;  // marginal mass of others
  ScalarDistribution conditional;
  std::vector<std::size_t> rows;  // support rows, parallel to conditional.values()
};

class ConditionalTable {
 public:
  explicit ConditionalTable(const JointDistribution& pi);

  std::size_t n() const { return contexts_.size(); }
  const std::vector<Context>& contexts(std::size_t i) const { return contexts_[i]; }
  const Context& context_of(std::size_t i, std::size_t row) const {
    return contexts_[i][row_context_[i][row]];
  }
  // Position of the row inside its context's value list.
  std::size_t slot_of(std::size_t i, std::size_t row) const { return row_slot_[i][row]; }
  const Context* find(std::size_t i, const Valuation& others) const;

 private:
  std::vector<std::vector<Context>> contexts_;
  std::vector<std::map<Valuation, std::size_t>> index_;
  std::vector<std::vector<std::size_t>> row_context_;
  std::vector<std::vector<std::size_t>> row_slot_;
};

struct BuyerStats {
  Rational v_max;
  Rational v_min;
  std::optional<Rational> r;  // nullopt: infinite
};

struct KthOrderStats {
  std::size_t k = 0;
  Rational v_max;  // largest k-th largest coordinate over the support
  Rational v_min;  // smallest k-th largest coordinate over the support
  std::optional<Rational> r;
};

struct SupportStats {
  Rational v_max;
  Rational v_min_of_max;
  std::optional<Rational> r;
  std::vector<BuyerStats> per_buyer;
  std::optional<KthOrderStats> kth_order;
};

SupportStats support_stats(const JointDistribution& pi, std::optional<std::size_t> k = {});

}  // namespace spp::valuation
