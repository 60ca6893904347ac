#pragma once

#include <stdexcept>
#include <vector>

#include "spp/mechanisms.hpp"
#include "spp/poisson_binomial.hpp"
#include "spp/policy.hpp"
#include "spp/valuation.hpp"

namespace spp::eval {

using mech::DirectMechanismTable;
using mech::Policy;
using mech::TableEntry;
using valuation::Instance;
using valuation::JointDistribution;
using valuation::Valuation;

// Largest n for which enhanced policies are evaluated by enumerating all 2^n
// query partitions.
inline constexpr std::size_t kEnumerationThreshold = 12;

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Expected allocation and payment of every buyer when the bids are truthful
// and equal to v.
TableEntry expected_outcome(const Policy& policy, const Valuation& v);

Rational exact_expected_revenue(const Policy& policy, const JointDistribution& pi);

// Expected sum of the k largest values.
Rational expected_osw(const JointDistribution& pi, std::size_t k);

enum class TableCoverage { kSupport, kProduct };

// Expected-form table of a policy run on reported bids. Blind policies are
// marked zero off the support, where they terminate.
DirectMechanismTable expected_form_table(const Policy& policy, const JointDistribution& pi,
                                         TableCoverage coverage = TableCoverage::kSupport);

struct PricedRevenue {
  Rational price;
  Rational revenue;
};

// Best single price offered to every buyer in order, searched over all support
// values; smallest price on ties.
PricedRevenue best_fixed_price(const Instance& instance);

}  // namespace spp::eval
