#include "spp/policy.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace spp::mech {

Rational Menu::offer_mass() const {
  Rational total(0);
  for (const auto& o : offers) total += o.mass;
  return total;
}

Rational Menu::acceptance(const Rational& value) const {
  Rational total(0);
  for (const auto& o : offers) {
    if (o.price <= value) total += o.mass;
  }
  return total;
}

Rational Menu::revenue(const Rational& value) const {
  Rational total(0);
  for (const auto& o : offers) {
    if (o.price <= value) total += o.mass * o.price;
  }
  return total;
}

Menu deterministic_menu(const Rational& price) { return Menu{{Offer{price, Rational(1)}}, Rational(0)}; }

Menu uniform_menu(const std::vector<Rational>& prices) {
  if (prices.empty()) throw std::invalid_argument("uniform_menu: no prices");
  std::vector<Offer> offers;
  Rational each = ratio(1, static_cast<long>(prices.size()));
  for (const auto& p : prices) offers.push_back({p, each});
  return normalize_menu(std::move(offers), Rational(0));
}

Menu normalize_menu(std::vector<Offer> offers, const Rational& skip_mass) {
  std::sort(offers.begin(), offers.end(), [](const Offer& a, const Offer& b) { return a.price < b.price; });
  Menu menu;
  menu.skip_mass = skip_mass;
  for (auto& o : offers) {
    if (sgn(o.mass) == 0) continue;
    if (!menu.offers.empty() && menu.offers.back().price == o.price) {
      menu.offers.back().mass += o.mass;
    } else {
      menu.offers.push_back(std::move(o));
    }
  }
  if (auto problem = check_menu(menu)) throw std::invalid_argument(*problem);
  return menu;
}

std::optional<std::string> check_menu(const Menu& menu) {
  if (menu.skip_mass < 0) return "negative skip mass";
  Rational total = menu.skip_mass;
  for (std::size_t t = 0; t < menu.offers.size(); ++t) {
    const auto& o = menu.offers[t];
    if (o.mass <= 0) return "offer at price " + to_string(o.price) + " has non-positive mass";
    if (o.price < 0) return "negative price " + to_string(o.price);
    if (t > 0 && !(menu.offers[t - 1].price < o.price)) return "offers not strictly sorted by price";
    total += o.mass;
  }
  if (total != 1) return "menu masses sum to " + to_string(total);
  return std::nullopt;
}

PostedPricePolicy fixed_price_policy(std::size_t n, std::size_t k, const Rational& price) {
  PostedPricePolicy policy;
  policy.kind = "fixed_price";
  policy.n = n;
  policy.k = k;
  policy.order = index_order(n);
  policy.scenarios.push_back({Rational(1), std::vector<Menu>(n, deterministic_menu(price))});
  return policy;
}

const Menu* BlindOfferPolicy::menu_for(std::size_t i, const Valuation& bids) const {
  auto it = menus[i].find(valuation::drop(bids, i));
  return it == menus[i].end() ? nullptr : &it->second;
}

Rational BlindOfferPolicy::keep(std::size_t i, const Valuation& bids) const {
  if (throttle.empty()) return Rational(1);
  auto it = throttle[i].find(bids);
  return it == throttle[i].end() ? Rational(1) : it->second;
}

std::string policy_kind(const Policy& policy) {
  struct Visitor {
    std::string operator()(const PostedPricePolicy& p) const { return p.kind; }
    std::string operator()(const AdaptivePricePolicy&) const { return "adaptive_price"; }
    std::string operator()(const BlindOfferPolicy& p) const { return p.kind; }
    std::string operator()(const EnhancedPolicy&) const { return "enhanced"; }
  };
  return std::visit(Visitor{}, policy);
}

std::size_t policy_buyers(const Policy& policy) {
  struct Visitor {
    std::size_t operator()(const PostedPricePolicy& p) const { return p.n; }
    std::size_t operator()(const AdaptivePricePolicy& p) const { return p.n; }
    std::size_t operator()(const BlindOfferPolicy& p) const { return p.n; }
    std::size_t operator()(const EnhancedPolicy& p) const { return p.n(); }
  };
  return std::visit(Visitor{}, policy);
}

std::vector<std::size_t> index_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

}  // namespace spp::mech
