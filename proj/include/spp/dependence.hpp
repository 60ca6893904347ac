#pragma once

#include <optional>
#include <vector>

#include "spp/valuation.hpp"

namespace spp::valuation {

struct DependenceCertificate {
  std::size_t d = 0;
  // sets[i] is a sorted subset of the other buyers with |sets[i]| = d.
  std::vector<std::vector<std::size_t>> sets;
};

// True iff for every v_{-i} in the support, buyer i's conditional given v_S
// equals the conditional given v_{-i}.
bool determines(const JointDistribution& pi, const ConditionalTable& table, std::size_t i,
                const std::vector<std::size_t>& S);

bool verify_certificate(const JointDistribution& pi, const DependenceCertificate& cert);

// Smallest d <= d_max (default n-1) with a witnessing family, found by trying
// the size-d subsets of each buyer in lexicographic order.
std::optional<DependenceCertificate> dependence_dimension(const JointDistribution& pi,
                                                          std::optional<std::size_t> d_max = {});

}  // namespace spp::valuation
