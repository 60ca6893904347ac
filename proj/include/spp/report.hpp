#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spp/monte_carlo.hpp"
#include "spp/policy.hpp"
#include "spp/valuation.hpp"

namespace spp::eval {

struct RevenueReport {
  std::string instance_id;
  std::string mechanism_id;
  std::optional<Rational> exact_revenue;
  std::optional<McEstimate> mc;
  Rational osw;
  Rational lp_bound;
  std::optional<Rational> ratio_lp;   // exact, when the revenue is exact
  std::optional<Rational> ratio_osw;
  double ratio_lp_decimal = 0;
  double ratio_osw_decimal = 0;

  double revenue_decimal() const;
};

struct ReportSet {
  std::string instance_id;
  Rational osw;
  Rational lp_bound;
  std::vector<RevenueReport> rows;
};

struct NamedPolicy {
  std::string id;
  mech::Policy policy;
};

struct ReportOptions {
  bool monte_carlo = false;  // force Monte Carlo even when exact evaluation works
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
};

// Exact revenue where possible, Monte Carlo when exact evaluation refuses.
ReportSet ratio_report(const std::string& instance_id, const valuation::Instance& instance,
                       const std::vector<NamedPolicy>& policies, const ReportOptions& options = {});

// Decimal columns use 12 significant digits; *_exact columns hold p/q.
void write_csv(std::ostream& out, const ReportSet& report);

}  // namespace spp::eval
