#include "spp/dependence.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace spp::valuation {

bool determines(const JointDistribution& pi, const ConditionalTable& table, std::size_t i,
                const std::vector<std::size_t>& S) {
  std::map<Valuation, std::map<Rational, Rational>> groups;
  std::map<Valuation, Rational> totals;
  for (std::size_t row = 0; row < pi.size(); ++row) {
    Valuation key = restrict(pi.support(row), S);
    groups[key][pi.support(row)[i]] += pi.mass(row);
    totals[key] += pi.mass(row);
  }
  std::map<Valuation, ScalarDistribution> by_key;
  for (auto& [key, acc] : groups) {
    std::vector<std::pair<Rational, Rational>> vm;
    for (auto& [value, mass] : acc) vm.emplace_back(value, mass / totals[key]);
    by_key.emplace(key, ScalarDistribution::make(std::move(vm)));
  }
  for (const auto& ctx : table.contexts(i)) {
    Valuation key = restrict(pi.support(ctx.rows.front()), S);
    if (!(by_key.at(key) == ctx.conditional)) return false;
  }
  return true;
}

bool verify_certificate(const JointDistribution& pi, const DependenceCertificate& cert) {
  if (cert.sets.size() != pi.n()) return false;
  ConditionalTable table(pi);
  for (std::size_t i = 0; i < pi.n(); ++i) {
    const auto& S = cert.sets[i];
    if (S.size() != cert.d || !std::is_sorted(S.begin(), S.end())) return false;
    if (std::adjacent_find(S.begin(), S.end()) != S.end()) return false;
    for (std::size_t j : S) {
      if (j == i || j >= pi.n()) return false;
    }
    if (!determines(pi, table, i, S)) return false;
  }
  return true;
}

namespace {

// Advances a sorted combination of pool positions; false when exhausted.
bool next_combination(std::vector<std::size_t>& pos, std::size_t pool) {
  const std::size_t d = pos.size();
  for (std::size_t t = d; t-- > 0;) {
    if (pos[t] < pool - d + t) {
      ++pos[t];
      for (std::size_t u = t + 1; u < d; ++u) pos[u] = pos[u - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<DependenceCertificate> dependence_dimension(const JointDistribution& pi,
                                                          std::optional<std::size_t> d_max) {
  const std::size_t n = pi.n();
  const std::size_t limit = std::min(d_max.value_or(n - 1), n - 1);
  ConditionalTable table(pi);
  for (std::size_t d = 0; d <= limit; ++d) {
    DependenceCertificate cert;
    cert.d = d;
    bool all = true;
    for (std::size_t i = 0; i < n && all; ++i) {
      std::vector<std::size_t> pool;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) pool.push_back(j);
      }
      std::vector<std::size_t> pos(d);
      for (std::size_t t = 0; t < d; ++t) pos[t] = t;
      bool found = false;
      do {
        std::vector<std::size_t> S;
        for (std::size_t t : pos) S.push_back(pool[t]);
        if (determines(pi, table, i, S)) {
          cert.sets.push_back(std::move(S));
          found = true;
          break;
        }
      } while (d > 0 && next_combination(pos, pool.size()));
      all = found;
    }
    if (all) return cert;
  }
  return std::nullopt;
}

}  // namespace spp::valuation
