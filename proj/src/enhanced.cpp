#include "spp/mechanisms.hpp"

namespace spp::mech {

Rational default_query_probability(std::size_t d) {
  if (d == 0) return Rational(0);
  if (d == 1) return ratio(1, 2);
  return 1 - ratio(1, static_cast<long>(d));
}

EnhancedPolicy build_enhanced(const BlindOfferPolicy& base, const DependenceCertificate& cert,
                              std::optional<Rational> q) {
  Rational prob = q.value_or(default_query_probability(cert.d));
  if (prob < 0 || prob > 1) throw std::invalid_argument("query probability " + to_string(prob) + " outside [0, 1]");
  if (cert.sets.size() != base.n) throw std::invalid_argument("certificate size does not match the policy");
  for (const auto& t : base.throttle) {
    if (!t.empty()) throw std::invalid_argument("build_enhanced needs an unthrottled base policy");
  }
  EnhancedPolicy policy;
  policy.q = prob;
  policy.sets = cert.sets;
  policy.base = base;
  policy.menus.resize(base.n);
  for (std::size_t i = 0; i < base.n; ++i) {
    // Position of buyer j inside v_{-i}.
    std::vector<std::size_t> positions;
    for (std::size_t j : cert.sets[i]) positions.push_back(j < i ? j : j - 1);
    for (const auto& [others, menu] : base.menus[i]) {
      Valuation key = valuation::restrict(others, positions);
      auto [it, inserted] = policy.menus[i].try_emplace(key, menu);
      if (!inserted && !(it->second == menu)) {
        throw std::invalid_argument("base menu of buyer " + std::to_string(i) +
                                    " is not determined by the values of its dependence set");
      }
    }
  }
  return policy;
}

}  // namespace spp::mech
