#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spp/valuation.hpp"

namespace spp::valuation {

// Single buyer, uniform on {1/a : a in [m]}, k = 1.
Instance gen_harmonic(unsigned m);

// Two buyers with equal values, uniform on {(1/a, 1/a) : a in [m]}.
Instance gen_correlated_pair(unsigned m, std::size_t k);

// A uniformly drawn buyer i* holds 1/((sum of the others' c_j mod m) + 1),
// every other buyer j holds c_j * eps with c_j uniform on [m]. k = n.
// Requires 0 < eps < 1/(n m^2).
Instance gen_modular(std::size_t n, unsigned m, const Rational& eps);

// Distribution of one non-expert buyer's value given the expert's value.
using Channel = std::function<ScalarDistribution(const Rational& expert_value)>;

// expert_value + noise, noise drawn independently from the given distribution.
Channel additive_noise(ScalarDistribution noise);

// Fixed distribution for each expert value (missing keys are an error).
Channel lookup_channel(std::map<Rational, ScalarDistribution> table);

// Expert value drawn from value_dist; channels[j] gives the value of the j-th
// non-expert buyer (in index order), independently given the expert value.
Instance gen_expert_noise(std::size_t n, const ScalarDistribution& value_dist,
                          const std::vector<Channel>& channels, std::size_t expert,
                          std::optional<std::size_t> k = {});

// Independent buyers with the given marginals.
Instance gen_product(const std::vector<ScalarDistribution>& marginals, std::size_t k);

// support_size distinct vectors over value_grid^n with random positive masses,
// a deterministic function of the arguments.
Instance gen_random(std::size_t n, std::size_t support_size,
                    const std::vector<Rational>& value_grid, std::size_t k, std::uint64_t seed);

}  // namespace spp::valuation
