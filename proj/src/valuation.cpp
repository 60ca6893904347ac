#include "spp/valuation.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace spp::valuation {

std::string format_valuation(const Valuation& v) {
  std::string out = "(";
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j) out += ", ";
    out += to_string(v[j]);
  }
  return out + ")";
}

Valuation drop(const Valuation& v, std::size_t i) {
  Valuation out;
  out.reserve(v.size() - 1);
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j != i) out.push_back(v[j]);
  }
  return out;
}

Valuation restrict(const Valuation& v, const std::vector<std::size_t>& coords) {
  Valuation out;
  out.reserve(coords.size());
  for (std::size_t j : coords) out.push_back(v[j]);
  return out;
}

Rational kth_largest(const Valuation& v, std::size_t k) {
  if (k == 0 || k > v.size()) throw std::invalid_argument("kth_largest: k out of range");
  Valuation sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<Rational>());
  return sorted[k - 1];
}

Rational top_k_sum(const Valuation& v, std::size_t k) {
  Valuation sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<Rational>());
  Rational total(0);
  for (std::size_t j = 0; j < k && j < sorted.size(); ++j) total += sorted[j];
  return total;
}

ScalarDistribution ScalarDistribution::make(std::vector<std::pair<Rational, Rational>> value_mass) {
  std::sort(value_mass.begin(), value_mass.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  ScalarDistribution d;
  Rational total(0);
  for (auto& [value, mass] : value_mass) {
    if (value < 0) throw std::invalid_argument("negative value " + to_string(value));
    if (mass <= 0) throw std::invalid_argument("non-positive mass " + to_string(mass));
    total += mass;
    if (!d.values_.empty() && d.values_.back() == value) {
      d.masses_.back() += mass;
    } else {
      d.values_.push_back(value);
      d.masses_.push_back(mass);
    }
  }
  if (total != 1) throw std::invalid_argument("masses sum to " + to_string(total));
  return d;
}

ScalarDistribution ScalarDistribution::point(const Rational& value) {
  return make({{value, Rational(1)}});
}

ScalarDistribution ScalarDistribution::uniform(const std::vector<Rational>& values) {
  if (values.empty()) throw std::invalid_argument("uniform over an empty set");
  std::vector<std::pair<Rational, Rational>> vm;
  Rational each = ratio(1, static_cast<long>(values.size()));
  for (const auto& v : values) vm.emplace_back(v, each);
  return make(std::move(vm));
}

Rational ScalarDistribution::mass_at_least(const Rational& x) const {
  Rational total(0);
  for (std::size_t j = 0; j < values_.size(); ++j) {
    if (values_[j] >= x) total += masses_[j];
  }
  return total;
}

std::optional<std::string> validate(std::size_t n, const std::vector<Valuation>& support,
                                    const std::vector<Rational>& mass) {
  if (n == 0) return "n must be positive";
  if (support.size() != mass.size()) {
    return "support has " + std::to_string(support.size()) + " rows but mass has " +
           std::to_string(mass.size());
  }
  if (support.empty()) return "empty support";
  for (std::size_t row = 0; row < support.size(); ++row) {
    if (support[row].size() != n) {
      return "support vector " + std::to_string(row) + " has length " +
             std::to_string(support[row].size()) + ", expected " + std::to_string(n);
    }
    for (const auto& x : support[row]) {
      if (x < 0) return "negative valuation in support vector " + format_valuation(support[row]);
    }
    if (mass[row] <= 0) {
      return "mass of support vector " + format_valuation(support[row]) + " is not positive";
    }
  }
  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
  for (std::size_t j = 1; j < order.size(); ++j) {
    if (support[order[j - 1]] == support[order[j]]) {
      return "duplicate support vector " + format_valuation(support[order[j]]);
    }
  }
  Rational total = spp::sum(mass);
  if (total != 1) return "masses sum to " + to_string(total);
  return std::nullopt;
}

std::optional<std::string> validate(const JointDistribution& pi) {
  auto problem = validate(pi.n(), pi.support(), pi.mass());
  if (problem) return problem;
  if (!std::is_sorted(pi.support().begin(), pi.support().end())) {
    return "support is not in canonical order";
  }
  return std::nullopt;
}

JointDistribution JointDistribution::make(std::size_t n, std::vector<Valuation> support,
                                          std::vector<Rational> mass) {
  if (auto problem = validate(n, support, mass)) throw std::invalid_argument(*problem);
  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
  JointDistribution pi;
  pi.n_ = n;
  pi.support_.reserve(order.size());
  pi.mass_.reserve(order.size());
  for (std::size_t row : order) {
    pi.support_.push_back(std::move(support[row]));
    pi.mass_.push_back(std::move(mass[row]));
  }
  return pi;
}

JointDistribution JointDistribution::from_outcomes(
    std::size_t n, std::vector<std::pair<Valuation, Rational>> outcomes) {
  std::map<Valuation, Rational> merged;
  for (auto& [v, m] : outcomes) {
    if (m <= 0) throw std::invalid_argument("outcome mass must be positive");
    auto [it, inserted] = merged.try_emplace(std::move(v), m);
    if (!inserted) it->second += m;
  }
  std::vector<Valuation> support;
  std::vector<Rational> mass;
  for (auto& [v, m] : merged) {
    support.push_back(v);
    mass.push_back(m);
  }
  return make(n, std::move(support), std::move(mass));
}

std::optional<std::size_t> JointDistribution::find(const Valuation& v) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), v);
  if (it == support_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - support_.begin());
}

Rational JointDistribution::probability(const Valuation& v) const {
  auto row = find(v);
  return row ? mass_[*row] : Rational(0);
}

std::vector<Rational> JointDistribution::coordinate_values(std::size_t i) const {
  std::vector<Rational> values;
  values.reserve(support_.size());
  for (const auto& v : support_) values.push_back(v[i]);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

Instance Instance::make(JointDistribution pi, std::size_t k) {
  if (k < 1 || k > pi.n()) {
    throw std::invalid_argument("supply k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(pi.n()) + "]");
  }
  Instance inst;
  inst.n = pi.n();
  inst.k = k;
  inst.pi = std::move(pi);
  return inst;
}

JointDistribution marginal(const JointDistribution& pi, std::vector<std::size_t> coords) {
  if (coords.empty()) throw std::invalid_argument("marginal over an empty coordinate set");
  std::sort(coords.begin(), coords.end());
  if (std::adjacent_find(coords.begin(), coords.end()) != coords.end()) {
    throw std::invalid_argument("marginal coordinates must be distinct");
  }
  if (coords.back() >= pi.n()) throw std::invalid_argument("marginal coordinate out of range");
  std::vector<std::pair<Valuation, Rational>> outcomes;
  outcomes.reserve(pi.size());
  for (std::size_t row = 0; row < pi.size(); ++row) {
    outcomes.emplace_back(restrict(pi.support(row), coords), pi.mass(row));
  }
  return JointDistribution::from_outcomes(coords.size(), std::move(outcomes));
}

ScalarDistribution conditional(const JointDistribution& pi, std::size_t i,
                               const Assignment& fixed) {
  if (i >= pi.n()) throw std::invalid_argument("buyer index out of range");
  for (const auto& [j, value] : fixed) {
    if (j >= pi.n() || j == i) throw std::invalid_argument("bad conditioning coordinate");
  }
  std::map<Rational, Rational> acc;
  Rational total(0);
  for (std::size_t row = 0; row < pi.size(); ++row) {
    const auto& v = pi.support(row);
    bool match = std::all_of(fixed.begin(), fixed.end(),
                             [&](const auto& f) { return v[f.first] == f.second; });
    if (!match) continue;
    acc[v[i]] += pi.mass(row);
    total += pi.mass(row);
  }
  if (total == 0) {
    std::string text;
    for (const auto& [j, value] : fixed) {
      if (!text.empty()) text += ", ";
      text += "v" + std::to_string(j) + "=" + to_string(value);
    }
    throw std::domain_error("conditioning event {" + text + "} has zero mass");
  }
  std::vector<std::pair<Rational, Rational>> vm;
  for (auto& [value, mass] : acc) vm.emplace_back(value, mass / total);
  return ScalarDistribution::make(std::move(vm));
}

ConditionalTable::ConditionalTable(const JointDistribution& pi)
    : contexts_(pi.n()),
      index_(pi.n()),
      row_context_(pi.n(), std::vector<std::size_t>(pi.size())),
      row_slot_(pi.n(), std::vector<std::size_t>(pi.size())) {
  for (std::size_t i = 0; i < pi.n(); ++i) {
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t row = 0; row < pi.size(); ++row) {
      Valuation others = drop(pi.support(row), i);
      auto [it, inserted] = index_[i].try_emplace(std::move(others), groups.size());
      if (inserted) groups.emplace_back();
      groups[it->second].push_back(row);
    }
    contexts_[i].resize(groups.size());
    for (auto& [others, c] : index_[i]) contexts_[i][c].others = others;
    for (std::size_t c = 0; c < groups.size(); ++c) {
      Context& ctx = contexts_[i][c];
      auto& rows = groups[c];
      std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
        return pi.support(a)[i] < pi.support(b)[i];
      });
      ctx.weight = 0;
      for (std::size_t row : rows) ctx.weight += pi.mass(row);
      std::vector<std::pair<Rational, Rational>> vm;
      for (std::size_t s = 0; s < rows.size(); ++s) {
        vm.emplace_back(pi.support(rows[s])[i], pi.mass(rows[s]) / ctx.weight);
        row_context_[i][rows[s]] = c;
        row_slot_[i][rows[s]] = s;
      }
      ctx.conditional = ScalarDistribution::make(std::move(vm));
      ctx.rows = rows;
    }
  }
}

const Context* ConditionalTable::find(std::size_t i, const Valuation& others) const {
  auto it = index_[i].find(others);
  return it == index_[i].end() ? nullptr : &contexts_[i][it->second];
}

namespace {

std::optional<Rational> guarded_ratio(const Rational& top, const Rational& bottom) {
  if (bottom == 0) return std::nullopt;
  return Rational(top / bottom);
}

}  // namespace

SupportStats support_stats(const JointDistribution& pi, std::optional<std::size_t> k) {
  SupportStats stats;
  const std::size_t n = pi.n();
  stats.per_buyer.resize(n);
  bool first = true;
  for (const auto& v : pi.support()) {
    Rational top = *std::max_element(v.begin(), v.end());
    if (first) {
      stats.v_max = top;
      stats.v_min_of_max = top;
      for (std::size_t i = 0; i < n; ++i) stats.per_buyer[i].v_max = stats.per_buyer[i].v_min = v[i];
      first = false;
      continue;
    }
    if (top > stats.v_max) stats.v_max = top;
    if (top < stats.v_min_of_max) stats.v_min_of_max = top;
    for (std::size_t i = 0; i < n; ++i) {
      if (v[i] > stats.per_buyer[i].v_max) stats.per_buyer[i].v_max = v[i];
      if (v[i] < stats.per_buyer[i].v_min) stats.per_buyer[i].v_min = v[i];
    }
  }
  stats.r = guarded_ratio(stats.v_max, stats.v_min_of_max);
  for (auto& b : stats.per_buyer) b.r = guarded_ratio(b.v_max, b.v_min);
  if (k) {
    if (*k < 1 || *k > n) throw std::invalid_argument("support_stats: k out of range");
    KthOrderStats kth;
    kth.k = *k;
    for (std::size_t row = 0; row < pi.size(); ++row) {
      Rational x = kth_largest(pi.support(row), *k);
      if (row == 0 || x > kth.v_max) kth.v_max = x;
      if (row == 0 || x < kth.v_min) kth.v_min = x;
    }
    kth.r = guarded_ratio(kth.v_max, kth.v_min);
    stats.kth_order = kth;
  }
  return stats;
}

}  // namespace spp::valuation
