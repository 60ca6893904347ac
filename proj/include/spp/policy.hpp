#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "spp/valuation.hpp"

namespace spp::mech {

using valuation::Valuation;

struct Offer {
  Rational price;
  Rational mass;
  bool operator==(const Offer&) const = default;
};

// Price lottery for one buyer; offers sorted by price, offer masses plus
// skip_mass sum to 1.
struct Menu {
  std::vector<Offer> offers;
  Rational skip_mass;

  Rational offer_mass() const;
  // Pr[price <= value] and E[price * 1[price <= value]].
  Rational acceptance(const Rational& value) const;
  Rational revenue(const Rational& value) const;
  bool operator==(const Menu&) const = default;
};

Menu deterministic_menu(const Rational& price);
Menu uniform_menu(const std::vector<Rational>& prices);

// Sorts offers, merges equal prices, and checks normalization.
Menu normalize_menu(std::vector<Offer> offers, const Rational& skip_mass);

std::optional<std::string> check_menu(const Menu& menu);

// One draw of the shared randomness of a posted-price policy: every buyer then
// draws independently from its own menu.
struct PriceScenario {
  Rational weight;
  std::vector<Menu> menus;  // indexed by buyer
};

// Non-adaptive sequential posted prices; offers stop after k acceptances.
struct PostedPricePolicy {
  std::string kind;
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> order;
  std::vector<PriceScenario> scenarios;  // weights sum to 1
};

PostedPricePolicy fixed_price_policy(std::size_t n, std::size_t k, const Rational& price);

// Deterministic sequential prices that may depend on the accept/reject
// history of earlier buyers. A missing history entry means skip.
struct AdaptivePricePolicy {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> order;
  std::map<std::vector<bool>, Rational> prices;
};

// Offers to buyer i are drawn from a menu keyed by the others' bids only.
struct BlindOfferPolicy {
  std::string kind;
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> order;
  std::vector<std::map<Valuation, Menu>> menus;  // per buyer, keyed by v_{-i}
  // Probability of proceeding to the menu once buyer i is reached, keyed by
  // the full bid profile; absent entries mean 1.
  std::vector<std::map<Valuation, Rational>> throttle;
  std::set<Valuation> support;

  const Menu* menu_for(std::size_t i, const Valuation& bids) const;
  Rational keep(std::size_t i, const Valuation& bids) const;
  bool on_support(const Valuation& bids) const { return support.count(bids) > 0; }
};

// Each buyer is queried with probability q, otherwise offer-eligible. An
// eligible buyer whose dependence set was fully queried is offered the menu
// keyed by the queried values v_{S_i}; everyone else is skipped.
struct EnhancedPolicy {
  Rational q;
  std::vector<std::vector<std::size_t>> sets;
  BlindOfferPolicy base;
  std::vector<std::map<Valuation, Menu>> menus;  // per buyer, keyed by v_{S_i}

  std::size_t n() const { return base.n; }
  std::size_t k() const { return base.k; }
};

using Policy = std::variant<PostedPricePolicy, AdaptivePricePolicy, BlindOfferPolicy, EnhancedPolicy>;

std::string policy_kind(const Policy& policy);
std::size_t policy_buyers(const Policy& policy);

std::vector<std::size_t> index_order(std::size_t n);

}  // namespace spp::mech
