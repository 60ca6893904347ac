#include "spp/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spp/simulate.hpp"

namespace spp::eval {

namespace {

class Sampler {
 public:
  explicit Sampler(const valuation::JointDistribution& pi) : pi_(pi) {
    Rational total(0);
    for (const auto& m : pi.mass()) {
      total += m;
      cumulative_.push_back(total);
    }
  }

  const valuation::Valuation& draw(CounterRng& rng) const {
    Rational u = rng.unit();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t row = std::min<std::size_t>(it - cumulative_.begin(), pi_.size() - 1);
    return pi_.support(row);
  }

 private:
  const valuation::JointDistribution& pi_;
  std::vector<Rational> cumulative_;
};

double one_trial(const mech::Policy& policy, const Sampler& sampler, std::uint64_t seed, std::size_t t) {
  CounterRng rng(seed, t);
  const auto& v = sampler.draw(rng);
  return to_double(mech::run_mechanism(policy, v, rng).revenue());
}

void check_trials(std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("monte_carlo_revenue needs at least one trial");
}

}  // namespace

std::vector<double> trial_revenues(const mech::Policy& policy, const valuation::JointDistribution& pi,
                                   std::size_t trials, std::uint64_t seed) {
  check_trials(trials);
  Sampler sampler(pi);
  std::vector<double> out(trials);
  const long count = static_cast<long>(trials);
#pragma omp parallel for schedule(static)
  for (long t = 0; t < count; ++t) {
    out[static_cast<std::size_t>(t)] = one_trial(policy, sampler, seed, static_cast<std::size_t>(t));
  }
  return out;
}

std::vector<double> trial_revenues_serial(const mech::Policy& policy, const valuation::JointDistribution& pi,
                                          std::size_t trials, std::uint64_t seed) {
  check_trials(trials);
  Sampler sampler(pi);
  std::vector<double> out(trials);
  for (std::size_t t = 0; t < trials; ++t) out[t] = one_trial(policy, sampler, seed, t);
  return out;
}

McEstimate summarize(const std::vector<double>& revenues, std::uint64_t seed) {
  McEstimate est;
  est.trials = revenues.size();
  est.seed = seed;
  if (revenues.empty()) return est;
  double total = 0;
  for (double r : revenues) total += r;
  est.mean = total / static_cast<double>(revenues.size());
  if (revenues.size() > 1) {
    double ss = 0;
    for (double r : revenues) ss += (r - est.mean) * (r - est.mean);
    double variance = ss / static_cast<double>(revenues.size() - 1);
    est.half_width_95 = 1.959963984540054 * std::sqrt(variance / static_cast<double>(revenues.size()));
  }
  return est;
}

McEstimate monte_carlo_revenue(const mech::Policy& policy, const valuation::JointDistribution& pi,
                               std::size_t trials, std::uint64_t seed) {
  return summarize(trial_revenues(policy, pi, trials, seed), seed);
}

McEstimate monte_carlo_revenue_serial(const mech::Policy& policy, const valuation::JointDistribution& pi,
                                      std::size_t trials, std::uint64_t seed) {
  return summarize(trial_revenues_serial(policy, pi, trials, seed), seed);
}

}  // namespace spp::eval
