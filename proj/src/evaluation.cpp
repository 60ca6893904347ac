#include "spp/evaluation.hpp"

#include <algorithm>
#include <set>

namespace spp::eval {

using mech::AdaptivePricePolicy;
using mech::BlindOfferPolicy;
using mech::EnhancedPolicy;
using mech::Menu;
using mech::PostedPricePolicy;

namespace {

struct Accumulator {
  explicit Accumulator(std::size_t n) {
    entry.x.assign(n, Rational(0));
    entry.p.assign(n, Rational(0));
  }
  TableEntry entry;
};

// Adds weight * E[x], weight * E[p] for independent per-buyer menus visited in
// order until k acceptances. menus[i] == nullptr means buyer i is skipped.
void add_sequential(Accumulator& acc, const Rational& weight, const std::vector<const Menu*>& menus,
                    const std::vector<Rational>* keep, const std::vector<std::size_t>& order,
                    std::size_t k, const Valuation& v) {
  AcceptanceCounter<Rational> counter(k);
  for (std::size_t i : order) {
    const Menu* menu = menus[i];
    if (!menu) continue;
    Rational reach = counter.below_cap();
    if (sgn(reach) == 0) break;
    Rational scale = keep ? Rational((*keep)[i] * weight) : weight;
    Rational accept = menu->acceptance(v[i]);
    if (keep) accept *= (*keep)[i];
    acc.entry.x[i] += scale * reach * menu->acceptance(v[i]);
    acc.entry.p[i] += scale * reach * menu->revenue(v[i]);
    counter.add(accept);
  }
}

TableEntry outcome_posted(const PostedPricePolicy& policy, const Valuation& v) {
  Accumulator acc(policy.n);
  std::vector<const Menu*> menus(policy.n);
  for (const auto& s : policy.scenarios) {
    for (std::size_t i = 0; i < policy.n; ++i) menus[i] = &s.menus[i];
    add_sequential(acc, s.weight, menus, nullptr, policy.order, policy.k, v);
  }
  return acc.entry;
}

TableEntry outcome_adaptive(const AdaptivePricePolicy& policy, const Valuation& v) {
  Accumulator acc(policy.n);
  std::vector<bool> history;
  std::size_t sold = 0;
  for (std::size_t i : policy.order) {
    if (sold == policy.k) break;
    auto it = policy.prices.find(history);
    bool accepted = it != policy.prices.end() && it->second <= v[i];
    if (accepted) {
      acc.entry.x[i] = 1;
      acc.entry.p[i] = it->second;
      ++sold;
    }
    history.push_back(accepted);
  }
  return acc.entry;
}

TableEntry outcome_blind(const BlindOfferPolicy& policy, const Valuation& v) {
  Accumulator acc(policy.n);
  if (!policy.on_support(v)) return acc.entry;
  std::vector<const Menu*> menus(policy.n);
  std::vector<Rational> keep(policy.n);
  for (std::size_t i = 0; i < policy.n; ++i) {
    menus[i] = policy.menu_for(i, v);
    keep[i] = policy.keep(i, v);
  }
  add_sequential(acc, Rational(1), menus, &keep, policy.order, policy.k, v);
  return acc.entry;
}

TableEntry outcome_enhanced(const EnhancedPolicy& policy, const Valuation& v) {
  const std::size_t n = policy.n();
  if (n > kEnumerationThreshold) {
    throw CapacityError("enhanced policy with n=" + std::to_string(n) + " exceeds the exact enumeration limit of " +
                        std::to_string(kEnumerationThreshold) + " buyers; use monte_carlo_revenue instead");
  }
  Accumulator acc(n);
  std::vector<const Menu*> offered(n);
  std::vector<const Menu*> keyed(n, nullptr);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = policy.menus[i].find(valuation::restrict(v, policy.sets[i]));
    if (it != policy.menus[i].end()) keyed[i] = &it->second;
  }
  const Rational qc = 1 - policy.q;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Rational weight(1);
    for (std::size_t i = 0; i < n; ++i) weight *= ((mask >> i) & 1) ? policy.q : qc;
    if (sgn(weight) == 0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      offered[i] = nullptr;
      if ((mask >> i) & 1) continue;
      bool ready = std::all_of(policy.sets[i].begin(), policy.sets[i].end(),
                               [&](std::size_t j) { return ((mask >> j) & 1) != 0; });
      if (ready) offered[i] = keyed[i];
    }
    add_sequential(acc, weight, offered, nullptr, policy.base.order, policy.k(), v);
  }
  return acc.entry;
}

}  // namespace

TableEntry expected_outcome(const Policy& policy, const Valuation& v) {
  struct Visitor {
    const Valuation& v;
    TableEntry operator()(const PostedPricePolicy& p) const { return outcome_posted(p, v); }
    TableEntry operator()(const AdaptivePricePolicy& p) const { return outcome_adaptive(p, v); }
    TableEntry operator()(const BlindOfferPolicy& p) const { return outcome_blind(p, v); }
    TableEntry operator()(const EnhancedPolicy& p) const { return outcome_enhanced(p, v); }
  };
  return std::visit(Visitor{v}, policy);
}

Rational exact_expected_revenue(const Policy& policy, const JointDistribution& pi) {
  if (mech::policy_buyers(policy) != pi.n()) throw std::invalid_argument("policy and distribution disagree on n");
  Rational total(0);
  for (std::size_t row = 0; row < pi.size(); ++row) {
    TableEntry e = expected_outcome(policy, pi.support(row));
    Rational revenue(0);
    for (const auto& p : e.p) revenue += p;
    total += pi.mass(row) * revenue;
  }
  return total;
}

Rational expected_osw(const JointDistribution& pi, std::size_t k) {
  if (k < 1 || k > pi.n()) throw std::invalid_argument("expected_osw: k out of range");
  Rational total(0);
  for (std::size_t row = 0; row < pi.size(); ++row) {
    total += pi.mass(row) * valuation::top_k_sum(pi.support(row), k);
  }
  return total;
}

DirectMechanismTable expected_form_table(const Policy& policy, const JointDistribution& pi,
                                         TableCoverage coverage) {
  DirectMechanismTable table;
  table.n = pi.n();
  struct KVisitor {
    std::size_t operator()(const PostedPricePolicy& p) const { return p.k; }
    std::size_t operator()(const AdaptivePricePolicy& p) const { return p.k; }
    std::size_t operator()(const BlindOfferPolicy& p) const { return p.k; }
    std::size_t operator()(const EnhancedPolicy& p) const { return p.k(); }
  };
  table.k = std::visit(KVisitor{}, policy);
  const auto profiles = coverage == TableCoverage::kSupport ? pi.support() : mech::product_profiles(pi);
  for (const auto& bids : profiles) table.entries.emplace(bids, expected_outcome(policy, bids));
  if (std::holds_alternative<BlindOfferPolicy>(policy)) table.set_zero_off_support();
  return table;
}

PricedRevenue best_fixed_price(const Instance& instance) {
  std::set<Rational> candidates;
  for (const auto& v : instance.pi.support()) candidates.insert(v.begin(), v.end());
  PricedRevenue best{Rational(0), Rational(-1)};
  for (const auto& p : candidates) {
    Rational revenue = exact_expected_revenue(mech::fixed_price_policy(instance.n, instance.k, p), instance.pi);
    if (revenue > best.revenue) best = {p, revenue};
  }
  return best;
}

}  // namespace spp::eval
