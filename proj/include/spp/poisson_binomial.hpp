#pragma once

#include <cstddef>
#include <vector>

namespace spp {

// Distribution of the number of successes among independent Bernoulli trials,
// truncated at cap: tracks Pr[count = c] for c < cap only.
template <class T>
class AcceptanceCounter {
 public:
  explicit AcceptanceCounter(std::size_t cap) : pmf_(cap, T(0)) {
    if (cap > 0) pmf_[0] = T(1);
  }

  // Pr[count < cap].
  T below_cap() const {
    T total(0);
    for (const auto& p : pmf_) total += p;
    return total;
  }

  void add(const T& z) {
    const T miss = T(1) - z;
    for (std::size_t c = pmf_.size(); c-- > 0;) {
      T next = pmf_[c] * miss;
      if (c > 0) next += pmf_[c - 1] * z;
      pmf_[c] = next;
    }
  }

  const std::vector<T>& pmf() const { return pmf_; }

 private:
  std::vector<T> pmf_;
};

// Pr[sum of independent Bernoulli(z_i) < k].
template <class T>
T poisson_binomial_tail(const std::vector<T>& z, std::size_t k) {
  AcceptanceCounter<T> counter(k);
  for (const auto& p : z) counter.add(p);
  return counter.below_cap();
}

// Full distribution Pr[sum = c] for c = 0..|z|.
template <class T>
std::vector<T> poisson_binomial_pmf(const std::vector<T>& z) {
  AcceptanceCounter<T> counter(z.size() + 1);
  for (const auto& p : z) counter.add(p);
  return counter.pmf();
}

}  // namespace spp
