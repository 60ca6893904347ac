#include "spp/simulate.hpp"

#include <stdexcept>

namespace spp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterRng::next() {
  return splitmix64(key_ + 0xd1b54a32d192ed03ULL * ++counter_);
}

Rational CounterRng::unit() {
  mpz_class num;
  std::uint64_t bits = next();
  mpz_import(num.get_mpz_t(), 1, 1, sizeof bits, 0, 0, &bits);
  Rational u{num, mpz_class(1) << 64};
  u.canonicalize();
  return u;
}

}  // namespace spp

namespace spp::mech {

Rational Outcome::revenue() const {
  Rational total(0);
  for (const auto& price : p) total += price;
  return total;
}

namespace {

// Index of the drawn offer, or -1 for skip.
long draw(const Menu& menu, CounterRng& rng) {
  Rational u = rng.unit();
  Rational cumulative(0);
  for (std::size_t t = 0; t < menu.offers.size(); ++t) {
    cumulative += menu.offers[t].mass;
    if (u < cumulative) return static_cast<long>(t);
  }
  return -1;
}

bool bernoulli(const Rational& p, CounterRng& rng) {
  if (p >= 1) return true;
  if (sgn(p) <= 0) return false;
  return rng.unit() < p;
}

class Run {
 public:
  Run(std::size_t n, std::size_t k, const Valuation& v) : k_(k), v_(v) {
    out_.x.assign(n, 0);
    out_.p.assign(n, Rational(0));
  }

  bool supply_left() const { return sold_ < k_; }

  void skip(std::size_t i) { out_.transcript.push_back({TranscriptEntry::Kind::kSkip, i, {}, false, {}}); }

  void query(std::size_t i) {
    out_.transcript.push_back({TranscriptEntry::Kind::kQuery, i, {}, false, v_[i]});
  }

  bool offer(std::size_t i, const Rational& price) {
    bool accepted = price <= v_[i];
    out_.transcript.push_back({TranscriptEntry::Kind::kOffer, i, price, accepted, {}});
    if (accepted) {
      out_.x[i] = 1;
      out_.p[i] = price;
      ++sold_;
    }
    return accepted;
  }

  void offer_from(std::size_t i, const Menu& menu, CounterRng& rng) {
    long t = draw(menu, rng);
    if (t < 0) skip(i); else offer(i, menu.offers[static_cast<std::size_t>(t)].price);
  }

  Outcome take() { return std::move(out_); }

 private:
  std::size_t k_;
  const Valuation& v_;
  std::size_t sold_ = 0;
  Outcome out_;
};

Outcome run_posted(const PostedPricePolicy& policy, const Valuation& v, CounterRng& rng) {
  Run run(policy.n, policy.k, v);
  Rational u = rng.unit();
  Rational cumulative(0);
  const PriceScenario* scenario = &policy.scenarios.back();
  for (const auto& s : policy.scenarios) {
    cumulative += s.weight;
    if (u < cumulative) {
      scenario = &s;
      break;
    }
  }
  for (std::size_t i : policy.order) {
    if (!run.supply_left()) break;
    run.offer_from(i, scenario->menus[i], rng);
  }
  return run.take();
}

Outcome run_adaptive(const AdaptivePricePolicy& policy, const Valuation& v) {
  Run run(policy.n, policy.k, v);
  std::vector<bool> history;
  for (std::size_t i : policy.order) {
    if (!run.supply_left()) break;
    auto it = policy.prices.find(history);
    if (it == policy.prices.end()) {
      run.skip(i);
      history.push_back(false);
    } else {
      history.push_back(run.offer(i, it->second));
    }
  }
  return run.take();
}

Outcome run_blind(const BlindOfferPolicy& policy, const Valuation& v, CounterRng& rng) {
  Run run(policy.n, policy.k, v);
  if (!policy.on_support(v)) return run.take();
  for (std::size_t i : policy.order) {
    if (!run.supply_left()) break;
    const Menu* menu = policy.menu_for(i, v);
    if (!menu || !bernoulli(policy.keep(i, v), rng)) {
      run.skip(i);
      continue;
    }
    run.offer_from(i, *menu, rng);
  }
  return run.take();
}

Outcome run_enhanced(const EnhancedPolicy& policy, const Valuation& v, CounterRng& rng) {
  const std::size_t n = policy.n();
  Run run(n, policy.k(), v);
  std::vector<bool> queried(n);
  for (std::size_t i : policy.base.order) queried[i] = bernoulli(policy.q, rng);
  for (std::size_t i : policy.base.order) {
    if (queried[i]) run.query(i);
  }
  for (std::size_t i : policy.base.order) {
    if (queried[i]) continue;
    if (!run.supply_left()) break;
    bool ready = true;
    for (std::size_t j : policy.sets[i]) ready = ready && queried[j];
    if (!ready) {
      run.skip(i);
      continue;
    }
    auto it = policy.menus[i].find(valuation::restrict(v, policy.sets[i]));
    if (it == policy.menus[i].end()) {
      run.skip(i);
      continue;
    }
    run.offer_from(i, it->second, rng);
  }
  return run.take();
}

}  // namespace

Outcome run_mechanism(const Policy& policy, const Valuation& v, CounterRng& rng) {
  if (v.size() != policy_buyers(policy)) throw std::invalid_argument("valuation has the wrong arity");
  struct Visitor {
    const Valuation& v;
    CounterRng& rng;
    Outcome operator()(const PostedPricePolicy& p) const { return run_posted(p, v, rng); }
    Outcome operator()(const AdaptivePricePolicy& p) const { return run_adaptive(p, v); }
    Outcome operator()(const BlindOfferPolicy& p) const { return run_blind(p, v, rng); }
    Outcome operator()(const EnhancedPolicy& p) const { return run_enhanced(p, v, rng); }
  };
  return std::visit(Visitor{v, rng}, policy);
}

Outcome run_mechanism(const Policy& policy, const Valuation& v, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  return run_mechanism(policy, v, rng);
}

std::string transcript_record(const TranscriptEntry& entry) {
  std::string out = "{\"buyer\":" + std::to_string(entry.buyer) + ",\"kind\":";
  switch (entry.kind) {
    case TranscriptEntry::Kind::kOffer:
      out += "\"offer\",\"price\":\"" + to_string(entry.price) + "\",\"accepted\":" +
             (entry.accepted ? "true" : "false");
      break;
    case TranscriptEntry::Kind::kQuery:
      out += "\"query\",\"reported\":\"" + to_string(entry.reported) + "\"";
      break;
    case TranscriptEntry::Kind::kSkip:
      out += "\"skip\"";
      break;
  }
  return out + "}";
}

}  // namespace spp::mech
