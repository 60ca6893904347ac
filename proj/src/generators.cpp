#include "spp/generators.hpp"

#include <random>
#include <set>
#include <stdexcept>

namespace spp::valuation {

Instance gen_harmonic(unsigned m) {
  if (m == 0) throw std::invalid_argument("gen_harmonic: m must be positive");
  std::vector<Valuation> support;
  std::vector<Rational> mass;
  for (unsigned a = 1; a <= m; ++a) {
    support.push_back({ratio(1, a)});
    mass.push_back(ratio(1, m));
  }
  return Instance::make(JointDistribution::make(1, std::move(support), std::move(mass)), 1);
}

Instance gen_correlated_pair(unsigned m, std::size_t k) {
  if (m == 0) throw std::invalid_argument("gen_correlated_pair: m must be positive");
  std::vector<Valuation> support;
  std::vector<Rational> mass;
  for (unsigned a = 1; a <= m; ++a) {
    support.push_back({ratio(1, a), ratio(1, a)});
    mass.push_back(ratio(1, m));
  }
  return Instance::make(JointDistribution::make(2, std::move(support), std::move(mass)), k);
}

Instance gen_modular(std::size_t n, unsigned m, const Rational& eps) {
  if (n < 2) throw std::invalid_argument("gen_modular: n must be at least 2");
  if (m == 0) throw std::invalid_argument("gen_modular: m must be positive");
  Rational limit = ratio(1, static_cast<long>(n * m * m));
  if (eps <= 0 || eps >= limit) {
    throw std::invalid_argument("gen_modular: eps=" + to_string(eps) + " violates 0 < eps < 1/(n m^2) = " +
                                to_string(limit));
  }
  Rational each = ratio(1, static_cast<long>(n));
  for (std::size_t j = 1; j < n; ++j) each /= m;
  std::vector<std::pair<Valuation, Rational>> outcomes;
  for (std::size_t star = 0; star < n; ++star) {
    std::vector<unsigned> c(n - 1, 1);
    while (true) {
      Valuation v(n);
      unsigned total = 0;
      for (std::size_t j = 0, t = 0; j < n; ++j) {
        if (j == star) continue;
        v[j] = eps * c[t];
        total += c[t];
        ++t;
      }
      v[star] = ratio(1, static_cast<long>(total % m) + 1);
      outcomes.emplace_back(std::move(v), each);
      std::size_t pos = 0;
      while (pos < c.size() && c[pos] == m) c[pos++] = 1;
      if (pos == c.size()) break;
      ++c[pos];
    }
  }
  return Instance::make(JointDistribution::from_outcomes(n, std::move(outcomes)), n);
}

Channel additive_noise(ScalarDistribution noise) {
  return [noise = std::move(noise)](const Rational& expert_value) {
    std::vector<std::pair<Rational, Rational>> vm;
    for (std::size_t j = 0; j < noise.size(); ++j) {
      vm.emplace_back(expert_value + noise.values()[j], noise.masses()[j]);
    }
    return ScalarDistribution::make(std::move(vm));
  };
}

Channel lookup_channel(std::map<Rational, ScalarDistribution> table) {
  return [table = std::move(table)](const Rational& expert_value) {
    auto it = table.find(expert_value);
    if (it == table.end()) {
      throw std::invalid_argument("channel has no entry for expert value " + to_string(expert_value));
    }
    return it->second;
  };
}

Instance gen_expert_noise(std::size_t n, const ScalarDistribution& value_dist,
                          const std::vector<Channel>& channels, std::size_t expert,
                          std::optional<std::size_t> k) {
  if (n < 2) throw std::invalid_argument("gen_expert_noise: n must be at least 2");
  if (expert >= n) throw std::invalid_argument("gen_expert_noise: expert index out of range");
  if (channels.size() != n - 1) {
    throw std::invalid_argument("gen_expert_noise: expected one channel per non-expert buyer");
  }
  if (value_dist.size() == 0) throw std::invalid_argument("gen_expert_noise: empty value distribution");
  std::vector<std::pair<Valuation, Rational>> outcomes;
  for (std::size_t e = 0; e < value_dist.size(); ++e) {
    const Rational& x = value_dist.values()[e];
    std::vector<ScalarDistribution> others;
    for (const auto& ch : channels) others.push_back(ch(x));
    std::vector<std::size_t> idx(n - 1, 0);
    while (true) {
      Valuation v(n);
      Rational mass = value_dist.masses()[e];
      v[expert] = x;
      for (std::size_t j = 0, t = 0; j < n; ++j) {
        if (j == expert) continue;
        v[j] = others[t].values()[idx[t]];
        mass *= others[t].masses()[idx[t]];
        ++t;
      }
      outcomes.emplace_back(std::move(v), mass);
      std::size_t pos = 0;
      while (pos < idx.size() && idx[pos] + 1 == others[pos].size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
      ++idx[pos];
    }
  }
  return Instance::make(JointDistribution::from_outcomes(n, std::move(outcomes)), k.value_or(n));
}

Instance gen_product(const std::vector<ScalarDistribution>& marginals, std::size_t k) {
  const std::size_t n = marginals.size();
  if (n == 0) throw std::invalid_argument("gen_product: no marginals");
  std::vector<std::pair<Valuation, Rational>> outcomes;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Valuation v(n);
    Rational mass(1);
    for (std::size_t i = 0; i < n; ++i) {
      if (marginals[i].size() == 0) throw std::invalid_argument("gen_product: empty marginal");
      v[i] = marginals[i].values()[idx[i]];
      mass *= marginals[i].masses()[idx[i]];
    }
    outcomes.emplace_back(std::move(v), mass);
    std::size_t pos = 0;
    while (pos < n && idx[pos] + 1 == marginals[pos].size()) idx[pos++] = 0;
    if (pos == n) break;
    ++idx[pos];
  }
  return Instance::make(JointDistribution::from_outcomes(n, std::move(outcomes)), k);
}

Instance gen_random(std::size_t n, std::size_t support_size,
                    const std::vector<Rational>& value_grid, std::size_t k, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_random: n must be positive");
  if (support_size == 0) throw std::invalid_argument("gen_random: support_size must be positive");
  std::set<Rational> grid(value_grid.begin(), value_grid.end());
  if (grid.empty()) throw std::invalid_argument("gen_random: empty value grid");
  double capacity = 1;
  for (std::size_t i = 0; i < n; ++i) capacity *= static_cast<double>(grid.size());
  if (capacity < static_cast<double>(support_size)) {
    throw std::invalid_argument("gen_random: grid too small for the requested support size");
  }
  std::vector<Rational> values(grid.begin(), grid.end());
  // mt19937_64 output is fixed by the standard; the modulo mapping below keeps
  // the stream portable across standard libraries.
  std::mt19937_64 rng(seed);
  std::set<Valuation> chosen;
  std::vector<Valuation> support;
  while (support.size() < support_size) {
    Valuation v(n);
    for (auto& x : v) x = values[rng() % values.size()];
    if (chosen.insert(v).second) support.push_back(std::move(v));
  }
  std::vector<Rational> weights;
  Rational total(0);
  for (std::size_t row = 0; row < support_size; ++row) {
    weights.emplace_back(static_cast<unsigned long>(1 + rng() % 16));
    total += weights.back();
  }
  for (auto& w : weights) w /= total;
  return Instance::make(JointDistribution::make(n, std::move(support), std::move(weights)), k);
}

}  // namespace spp::valuation
