#include <optional>
#include <set>

#include "spp/generators.hpp"
#include "spp/mechanisms.hpp"

namespace spp::mech {

const TableEntry* DirectMechanismTable::find(const Valuation& bids) const {
  auto it = entries.find(bids);
  if (it != entries.end()) return &it->second;
  return zero_off_support ? &off_support : nullptr;
}

void DirectMechanismTable::set_zero_off_support() {
  zero_off_support = true;
  off_support.x.assign(n, Rational(0));
  off_support.p.assign(n, Rational(0));
}

std::optional<std::string> check_table(const DirectMechanismTable& table) {
  for (const auto& [bids, e] : table.entries) {
    if (bids.size() != table.n || e.x.size() != table.n || e.p.size() != table.n) {
      return "entry " + valuation::format_valuation(bids) + " has the wrong arity";
    }
    Rational total(0);
    for (const auto& x : e.x) {
      if (x < 0 || x > 1) return "allocation outside [0, 1] at " + valuation::format_valuation(bids);
      total += x;
    }
    if (total > static_cast<unsigned long>(table.k)) {
      return "allocation exceeds supply at " + valuation::format_valuation(bids);
    }
  }
  return std::nullopt;
}

std::vector<Valuation> product_profiles(const JointDistribution& pi) {
  std::vector<std::vector<Rational>> values;
  for (std::size_t i = 0; i < pi.n(); ++i) values.push_back(pi.coordinate_values(i));
  std::vector<Valuation> out;
  std::vector<std::size_t> idx(pi.n(), 0);
  while (true) {
    Valuation v(pi.n());
    for (std::size_t i = 0; i < pi.n(); ++i) v[i] = values[i][idx[i]];
    out.push_back(std::move(v));
    std::size_t pos = pi.n();
    while (pos-- > 0) {
      if (++idx[pos] < values[pos].size()) break;
      idx[pos] = 0;
    }
    if (pos == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

namespace {

// c with b = c * eps and c a positive integer, if any.
std::optional<mpz_class> multiple_of(const Rational& b, const Rational& eps) {
  Rational c = b / eps;
  if (c.get_den() != 1 || sgn(c) <= 0) return std::nullopt;
  return c.get_num();
}

// t in [0, m) with b = 1/(t + 1), if any.
std::optional<unsigned long> reciprocal_index(const Rational& b, unsigned m) {
  if (sgn(b) <= 0 || b.get_num() != 1) return std::nullopt;
  const mpz_class& den = b.get_den();
  if (den < 1 || den > m) return std::nullopt;
  return den.get_ui() - 1;
}

Rational modular_price(const Valuation& b, std::size_t i, unsigned m, const Rational& eps) {
  const std::size_t n = b.size();
  const Rational threshold = ratio(1, m);
  bool all_small = true;
  mpz_class total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    if (b[j] >= threshold) all_small = false;
  }
  if (all_small) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      auto c = multiple_of(b[j], eps);
      if (!c) return Rational(0);
      total += *c;
    }
    mpz_class r = total % m;
    return Rational(mpz_class(1), r + 1);
  }
  std::set<unsigned long> candidates;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    auto t = reciprocal_index(b[j], m);
    if (!t) continue;
    mpz_class rest = 0;
    bool ok = true;
    for (std::size_t l = 0; l < n && ok; ++l) {
      if (l == i || l == j) continue;
      auto c = multiple_of(b[l], eps);
      if (!c) ok = false; else rest += *c;
    }
    if (!ok) continue;
    // c_i in [1, m] with (c_i + rest) mod m = t.
    mpz_class ci = (mpz_class(*t) - rest) % m;
    if (ci <= 0) ci += m;
    candidates.insert(ci.get_ui());
  }
  if (candidates.size() == 1) return eps * *candidates.begin();
  return Rational(0);
}

}  // namespace

DirectMechanismTable build_modular_full_surplus(std::size_t n, unsigned m, const Rational& eps) {
  auto instance = valuation::gen_modular(n, m, eps);
  DirectMechanismTable table;
  table.n = n;
  table.k = n;
  for (auto& bids : product_profiles(instance.pi)) {
    TableEntry e;
    e.x.assign(n, Rational(1));
    for (std::size_t i = 0; i < n; ++i) e.p.push_back(modular_price(bids, i, m, eps));
    table.entries.emplace(std::move(bids), std::move(e));
  }
  return table;
}

DirectMechanismTable build_pay_your_bid(const JointDistribution& pi) {
  DirectMechanismTable table;
  table.n = pi.n();
  table.k = pi.n();
  for (auto& bids : product_profiles(pi)) {
    TableEntry e;
    e.x.assign(pi.n(), Rational(1));
    e.p = bids;
    table.entries.emplace(std::move(bids), std::move(e));
  }
  return table;
}

}  // namespace spp::mech
