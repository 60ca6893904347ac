#pragma once

#include <algorithm>
#include <vector>

#include "spp/generators.hpp"
#include "spp/policy.hpp"

namespace fixtures {

using spp::ratio;
using spp::Rational;
using spp::valuation::Instance;
using spp::valuation::ScalarDistribution;

inline std::vector<Rational> grid() {
  return {ratio(1, 4), ratio(1, 2), Rational(1), ratio(3, 2), Rational(2), Rational(3)};
}

// 25 random k = n instances with n <= 4 and at most 40 support vectors.
inline std::vector<Instance> random_unlimited() {
  std::vector<Instance> out;
  for (unsigned t = 0; t < 25; ++t) {
    std::size_t n = 1 + t % 4;
    std::size_t cap = 1;
    for (std::size_t i = 0; i < n; ++i) cap *= grid().size();
    std::size_t size = std::min<std::size_t>(1 + (t * 7) % 40, cap);
    out.push_back(spp::valuation::gen_random(n, size, grid(), n, 1000 + t));
  }
  return out;
}

// 25 random k < n instances with 2 <= n <= 4.
inline std::vector<Instance> random_limited() {
  std::vector<Instance> out;
  for (unsigned t = 0; t < 25; ++t) {
    std::size_t n = 2 + t % 3;
    std::size_t k = 1 + t % (n - 1);
    std::size_t size = 2 + (t * 11) % 30;
    out.push_back(spp::valuation::gen_random(n, size, grid(), k, 2000 + t));
  }
  return out;
}

// Expert buyer 0 uniform on {1, 2}; buyers 1 and 2 see it plus noise {0, 1/10}.
inline Instance expert_noise(std::size_t k = 3) {
  auto noise = ScalarDistribution::uniform({Rational(0), ratio(1, 10)});
  return spp::valuation::gen_expert_noise(3, ScalarDistribution::uniform({Rational(1), Rational(2)}),
                                          {spp::valuation::additive_noise(noise), spp::valuation::additive_noise(noise)},
                                          0, k);
}

// v0, v1 independent uniform on {1, 2}; v2 and v3 equal v0 + v1 plus independent
// noise {0, 1/10}. Buyer 0 needs {1, 2}, so the dependence dimension is 2.
inline Instance two_dimensional(std::size_t k = 4) {
  std::vector<std::pair<spp::valuation::Valuation, Rational>> outcomes;
  const std::vector<Rational> base{Rational(1), Rational(2)};
  const std::vector<Rational> noise{Rational(0), ratio(1, 10)};
  for (const auto& a : base)
    for (const auto& b : base)
      for (const auto& e2 : noise)
        for (const auto& e3 : noise) outcomes.push_back({{a, b, a + b + e2, a + b + e3}, ratio(1, 16)});
  return Instance::make(spp::valuation::JointDistribution::from_outcomes(4, std::move(outcomes)), k);
}

struct HandPolicy {
  spp::valuation::JointDistribution pi;
  spp::mech::BlindOfferPolicy policy;
};

// Two buyers, k = 1. Buyer 1's menu depends on b_2, so buyer 2's reach does too.
inline HandPolicy two_buyer_hand() {
  using spp::mech::normalize_menu;
  auto pi = spp::valuation::JointDistribution::make(
      2, {{Rational(1), Rational(1)}, {Rational(2), Rational(1)}, {Rational(1), Rational(2)}, {Rational(2), Rational(2)}},
      {ratio(1, 4), ratio(1, 8), ratio(1, 8), ratio(1, 2)});
  spp::mech::BlindOfferPolicy policy;
  policy.kind = "hand";
  policy.n = 2;
  policy.k = 1;
  policy.order = {0, 1};
  policy.menus.resize(2);
  policy.menus[0][{Rational(1)}] = normalize_menu({{Rational(1), ratio(1, 4)}}, ratio(3, 4));
  policy.menus[0][{Rational(2)}] = normalize_menu({{Rational(1), ratio(1, 2)}}, ratio(1, 2));
  policy.menus[1][{Rational(1)}] = normalize_menu({{Rational(1), ratio(1, 2)}}, ratio(1, 2));
  policy.menus[1][{Rational(2)}] = normalize_menu({{Rational(2), ratio(1, 2)}}, ratio(1, 2));
  policy.support.insert(pi.support().begin(), pi.support().end());
  return {pi, policy};
}

}  // namespace fixtures
