#include <algorithm>

#include "spp/mechanisms.hpp"
#include "spp/poisson_binomial.hpp"

namespace spp::mech {

using valuation::ConditionalTable;

namespace {

BlindOfferPolicy empty_blind(std::string kind, const Instance& instance) {
  BlindOfferPolicy policy;
  policy.kind = std::move(kind);
  policy.n = instance.n;
  policy.k = instance.k;
  policy.order = index_order(instance.n);
  policy.menus.resize(instance.n);
  policy.support.insert(instance.pi.support().begin(), instance.pi.support().end());
  return policy;
}

}  // namespace

BlindOfferPolicy build_blind_unlimited(const Instance& instance) {
  if (instance.k != instance.n) throw std::invalid_argument("build_blind_unlimited requires k = n");
  BlindOfferPolicy policy = empty_blind("blind_unlimited", instance);
  ConditionalTable table(instance.pi);
  for (std::size_t i = 0; i < instance.n; ++i) {
    for (const auto& ctx : table.contexts(i)) {
      policy.menus[i].emplace(ctx.others, deterministic_menu(monopoly_price(ctx.conditional).price));
    }
  }
  return policy;
}

BlindOfferPolicy build_blind_k(const Instance& instance, const lp::LpSolution& y_star) {
  if (y_star.status != lp::Status::kOptimal) {
    throw std::invalid_argument("build_blind_k: LP solution is not optimal");
  }
  auto program = lp::build_revenue_lp(instance);
  if (auto problem = lp::check_feasible(program, y_star.y)) {
    throw std::invalid_argument("build_blind_k: y* infeasible: " + *problem);
  }
  BlindOfferPolicy policy = empty_blind("blind_k", instance);
  ConditionalTable table(instance.pi);
  for (std::size_t i = 0; i < instance.n; ++i) {
    for (const auto& ctx : table.contexts(i)) {
      std::vector<Offer> offers;
      Rational offered(0);
      for (std::size_t s = 0; s < ctx.rows.size(); ++s) {
        const Rational& y = y_star.y[program.column(i, ctx.rows[s])];
        if (sgn(y) == 0) continue;
        Rational mass = y / 2;
        offered += mass;
        offers.push_back({ctx.conditional.values()[s], mass});
      }
      policy.menus[i].emplace(ctx.others, normalize_menu(std::move(offers), 1 - offered));
    }
  }
  return policy;
}

std::vector<std::vector<Rational>> offer_probabilities(const BlindOfferPolicy& policy,
                                                       const JointDistribution& pi) {
  std::vector<std::vector<Rational>> reach(policy.n, std::vector<Rational>(pi.size(), Rational(0)));
  for (std::size_t row = 0; row < pi.size(); ++row) {
    const auto& b = pi.support(row);
    AcceptanceCounter<Rational> counter(policy.k);
    for (std::size_t i : policy.order) {
      const Menu* menu = policy.menu_for(i, b);
      if (!menu) throw std::invalid_argument("policy has no menu for buyer " + std::to_string(i) +
                                             " at " + valuation::format_valuation(b));
      Rational offered = counter.below_cap() * policy.keep(i, b);
      reach[i][row] = offered;
      counter.add(Rational(policy.keep(i, b) * menu->acceptance(b[i])));
    }
  }
  return reach;
}

BlindOfferPolicy make_dsic(const BlindOfferPolicy& policy, const JointDistribution& pi) {
  if (policy.k >= policy.n) return policy;
  BlindOfferPolicy out = policy;
  out.kind = policy.kind + "_dsic";
  out.throttle.resize(out.n);
  ConditionalTable table(pi);
  // Buyers are equalized in order; later buyers see the throttled predecessors.
  for (std::size_t pos = 0; pos < out.order.size(); ++pos) {
    const std::size_t i = out.order[pos];
    auto reach = offer_probabilities(out, pi);
    for (const auto& ctx : table.contexts(i)) {
      Rational lowest = reach[i][ctx.rows.front()];
      for (std::size_t row : ctx.rows) lowest = std::min(lowest, reach[i][row]);
      for (std::size_t row : ctx.rows) {
        const Rational& current = reach[i][row];
        if (sgn(current) == 0 || current == lowest) continue;
        const auto& b = pi.support(row);
        out.throttle[i][b] = out.keep(i, b) * lowest / current;
      }
    }
  }
  return out;
}

}  // namespace spp::mech
