#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spp/dependence.hpp"
#include "spp/lp.hpp"
#include "spp/policy.hpp"
#include "spp/valuation.hpp"

namespace spp::mech {

using valuation::DependenceCertificate;
using valuation::Instance;
using valuation::JointDistribution;
using valuation::ScalarDistribution;

// The construction's preconditions fail on this instance (zero minimum value,
// failed separation check).
class UnsupportedInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MonopolyPrice {
  Rational price;
  Rational revenue;
};

// argmax over the support of p * Pr[v >= p], smallest maximizer on ties.
MonopolyPrice monopoly_price(const ScalarDistribution& cond);

// {low * base^j : j = 0 .. max(0, L - 1)} with L the smallest integer such
// that base^L >= ratio.
std::vector<Rational> bucket_prices(const Rational& low, const Rational& ratio, const Rational& base = 2);

// Explicit lower/upper value window replacing the support minimum/maximum.
struct PriceWindow {
  Rational low;
  Rational high;
};

PostedPricePolicy build_bucketed_spp_unit(const JointDistribution& pi,
                                          std::optional<PriceWindow> window = {});

PostedPricePolicy build_bucketed_spp_unlimited(const JointDistribution& pi);

PostedPricePolicy build_bucketed_spp_klimited(const JointDistribution& pi, std::size_t k,
                                              bool well_separated = false);

// First support row whose k-th largest value is shared by two buyers.
std::optional<std::size_t> separation_violation(const JointDistribution& pi, std::size_t k);

// Smallest ratio larger than 1 between two positive values of one support
// vector; 2 when no such pair exists.
Rational separation_ratio(const JointDistribution& pi);

// Monopoly price of every conditional, offered with probability 1. Requires k = n.
BlindOfferPolicy build_blind_unlimited(const Instance& instance);

// Offers price p to buyer i with probability y*_i(p, v_{-i}) / 2. Throws
// std::invalid_argument if y* is not a feasible point of the revenue LP.
BlindOfferPolicy build_blind_k(const Instance& instance, const lp::LpSolution& y_star);

// reach[i][row]: probability that buyer i draws from its menu when the bids are
// support row `row` and everyone accepts iff the price is at most its bid.
std::vector<std::vector<Rational>> offer_probabilities(const BlindOfferPolicy& policy,
                                                       const JointDistribution& pi);

// Throttles every buyer so that its offer probability is the minimum over its
// own conditionally possible bids.
BlindOfferPolicy make_dsic(const BlindOfferPolicy& policy, const JointDistribution& pi);

// 0 for d = 0, 1/2 for d = 1, 1 - 1/d otherwise.
Rational default_query_probability(std::size_t d);

// Throws std::invalid_argument when q is outside [0, 1], the base is
// throttled, or a base menu is not a function of v_{S_i}.
EnhancedPolicy build_enhanced(const BlindOfferPolicy& base, const DependenceCertificate& cert,
                              std::optional<Rational> q = {});

struct TableEntry {
  std::vector<Rational> x;
  std::vector<Rational> p;
};

// Expected allocation and payment per bid profile.
struct DirectMechanismTable {
  std::size_t n = 0;
  std::size_t k = 0;
  std::map<Valuation, TableEntry> entries;
  // Profiles missing from entries allocate nothing and charge nothing.
  bool zero_off_support = false;
  TableEntry off_support;

  // nullptr when the profile is neither present nor covered by zero_off_support.
  const TableEntry* find(const Valuation& bids) const;
  void set_zero_off_support();
};

std::optional<std::string> check_table(const DirectMechanismTable& table);

// Allocates to everyone; prices follow the three-case rule of the modular
// construction, charging 0 in the fallback case. Defined on every profile of
// the marginal supports.
DirectMechanismTable build_modular_full_surplus(std::size_t n, unsigned m, const Rational& eps);

// Allocates to everyone and charges each buyer its own bid, on every profile
// of the marginal supports.
DirectMechanismTable build_pay_your_bid(const JointDistribution& pi);

// Profiles of the product of marginal supports, in lexicographic order.
std::vector<Valuation> product_profiles(const JointDistribution& pi);

}  // namespace spp::mech
