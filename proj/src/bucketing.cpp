#include <algorithm>

#include "spp/mechanisms.hpp"

namespace spp::mech {

using valuation::kth_largest;
using valuation::support_stats;

MonopolyPrice monopoly_price(const ScalarDistribution& cond) {
  MonopolyPrice best{Rational(0), Rational(-1)};
  for (const auto& p : cond.values()) {
    Rational revenue = p * cond.mass_at_least(p);
    if (revenue > best.revenue) best = {p, revenue};
  }
  return best;
}

std::vector<Rational> bucket_prices(const Rational& low, const Rational& ratio, const Rational& base) {
  unsigned levels = ratio <= 1 ? 0 : ceil_log(ratio, base);
  unsigned top = levels == 0 ? 0 : levels - 1;
  std::vector<Rational> prices;
  Rational p = low;
  for (unsigned j = 0; j <= top; ++j) {
    prices.push_back(p);
    p *= base;
  }
  return prices;
}

namespace {

PostedPricePolicy common_price_policy(std::string kind, std::size_t n, std::size_t k,
                                      const std::vector<Rational>& prices) {
  PostedPricePolicy policy;
  policy.kind = std::move(kind);
  policy.n = n;
  policy.k = k;
  policy.order = index_order(n);
  Rational weight = ratio(1, static_cast<long>(prices.size()));
  for (const auto& p : prices) {
    policy.scenarios.push_back({weight, std::vector<Menu>(n, deterministic_menu(p))});
  }
  return policy;
}

}  // namespace

PostedPricePolicy build_bucketed_spp_unit(const JointDistribution& pi, std::optional<PriceWindow> window) {
  Rational low;
  Rational spread;
  if (window) {
    if (window->low <= 0 || window->high < window->low) {
      throw std::invalid_argument("price window needs 0 < low <= high");
    }
    low = window->low;
    spread = window->high / window->low;
  } else {
    auto stats = support_stats(pi);
    if (!stats.r) {
      throw UnsupportedInstance("smallest coordinate-wise maximum is 0; supply a price window");
    }
    low = stats.v_min_of_max;
    spread = *stats.r;
  }
  return common_price_policy("bucketed_unit", pi.n(), 1, bucket_prices(low, spread));
}

PostedPricePolicy build_bucketed_spp_unlimited(const JointDistribution& pi) {
  auto stats = support_stats(pi);
  PostedPricePolicy policy;
  policy.kind = "bucketed_unlimited";
  policy.n = pi.n();
  policy.k = pi.n();
  policy.order = index_order(pi.n());
  PriceScenario scenario{Rational(1), {}};
  for (std::size_t i = 0; i < pi.n(); ++i) {
    const auto& b = stats.per_buyer[i];
    if (!b.r) throw UnsupportedInstance("buyer " + std::to_string(i) + " has minimum value 0");
    scenario.menus.push_back(uniform_menu(bucket_prices(b.v_min, *b.r)));
  }
  policy.scenarios.push_back(std::move(scenario));
  return policy;
}

std::optional<std::size_t> separation_violation(const JointDistribution& pi, std::size_t k) {
  for (std::size_t row = 0; row < pi.size(); ++row) {
    const auto& v = pi.support(row);
    Rational x = kth_largest(v, k);
    if (std::count(v.begin(), v.end(), x) > 1) return row;
  }
  return std::nullopt;
}

Rational separation_ratio(const JointDistribution& pi) {
  std::optional<Rational> best;
  for (const auto& v : pi.support()) {
    for (const auto& a : v) {
      for (const auto& b : v) {
        if (sgn(b) <= 0 || a <= b) continue;
        Rational q = a / b;
        if (!best || q < *best) best = q;
      }
    }
  }
  return best.value_or(Rational(2));
}

PostedPricePolicy build_bucketed_spp_klimited(const JointDistribution& pi, std::size_t k, bool well_separated) {
  auto stats = support_stats(pi, k);
  const auto& kth = *stats.kth_order;
  if (!kth.r) throw UnsupportedInstance("smallest k-th largest value is 0");
  if (!well_separated) {
    return common_price_policy("bucketed_klimited", pi.n(), k, bucket_prices(kth.v_min, *kth.r));
  }
  if (auto row = separation_violation(pi, k)) {
    throw UnsupportedInstance("support vector " + valuation::format_valuation(pi.support(*row)) +
                              " is not k-well-separated");
  }
  const Rational delta = separation_ratio(pi);
  PostedPricePolicy policy;
  policy.kind = "bucketed_klimited_separated";
  policy.n = pi.n();
  policy.k = k;
  policy.order = index_order(pi.n());
  auto prices = bucket_prices(kth.v_min, *kth.r, delta);
  Rational weight = ratio(1, static_cast<long>(prices.size()));
  for (const auto& p : prices) {
    PriceScenario scenario{weight, {}};
    for (std::size_t i = 0; i < pi.n(); ++i) {
      const auto& b = stats.per_buyer[i];
      if (!b.r) throw UnsupportedInstance("buyer " + std::to_string(i) + " has minimum value 0");
      unsigned lo = p >= b.v_min ? floor_log(p / b.v_min, delta) : 0;
      unsigned hi_levels = ceil_log(*b.r, delta);
      unsigned hi = std::max(lo, hi_levels == 0 ? 0u : hi_levels - 1);
      std::vector<Rational> grid;
      for (unsigned l = lo; l <= hi; ++l) grid.push_back(b.v_min * pow(delta, l));
      scenario.menus.push_back(uniform_menu(grid));
    }
    policy.scenarios.push_back(std::move(scenario));
  }
  return policy;
}

}  // namespace spp::mech
