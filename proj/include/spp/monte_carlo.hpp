#pragma once

#include <cstdint>
#include <vector>

#include "spp/policy.hpp"
#include "spp/valuation.hpp"

namespace spp::eval {

struct McEstimate {
  double mean = 0;
  double half_width_95 = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

// Revenue of each trial; trial t draws v and the policy's randomness from
// CounterRng(seed, t). The parallel and serial versions return identical values.
std::vector<double> trial_revenues(const mech::Policy& policy, const valuation::JointDistribution& pi,
                                   std::size_t trials, std::uint64_t seed);
std::vector<double> trial_revenues_serial(const mech::Policy& policy, const valuation::JointDistribution& pi,
                                          std::size_t trials, std::uint64_t seed);

// Mean and normal-approximation 95% half-width, reduced in trial order.
McEstimate summarize(const std::vector<double>& revenues, std::uint64_t seed);

McEstimate monte_carlo_revenue(const mech::Policy& policy, const valuation::JointDistribution& pi,
                               std::size_t trials, std::uint64_t seed);
McEstimate monte_carlo_revenue_serial(const mech::Policy& policy, const valuation::JointDistribution& pi,
                                      std::size_t trials, std::uint64_t seed);

}  // namespace spp::eval
