#include "spp/report.hpp"

#include <cstdio>
#include <ostream>

#include "spp/evaluation.hpp"
#include "spp/lp.hpp"

namespace spp::eval {

double RevenueReport::revenue_decimal() const {
  if (exact_revenue) return to_double(*exact_revenue);
  return mc ? mc->mean : 0.0;
}

namespace {

double safe_ratio(double num, const Rational& den) { return sgn(den) == 0 ? 0.0 : num / to_double(den); }

std::string decimal(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", x);
  return buffer;
}

}  // namespace

ReportSet ratio_report(const std::string& instance_id, const valuation::Instance& instance,
                       const std::vector<NamedPolicy>& policies, const ReportOptions& options) {
  ReportSet set;
  set.instance_id = instance_id;
  set.osw = expected_osw(instance.pi, instance.k);
  set.lp_bound = lp::revenue_upper_bound(instance);
  for (const auto& named : policies) {
    RevenueReport row;
    row.instance_id = instance_id;
    row.mechanism_id = named.id;
    row.osw = set.osw;
    row.lp_bound = set.lp_bound;
    bool exact = !options.monte_carlo;
    if (exact) {
      try {
        row.exact_revenue = exact_expected_revenue(named.policy, instance.pi);
      } catch (const CapacityError&) {
        exact = false;
      }
    }
    if (!exact) row.mc = monte_carlo_revenue(named.policy, instance.pi, options.trials, options.seed);
    if (row.exact_revenue) {
      if (sgn(set.lp_bound) != 0) row.ratio_lp = *row.exact_revenue / set.lp_bound;
      if (sgn(set.osw) != 0) row.ratio_osw = *row.exact_revenue / set.osw;
    }
    row.ratio_lp_decimal = row.ratio_lp ? to_double(*row.ratio_lp) : safe_ratio(row.revenue_decimal(), set.lp_bound);
    row.ratio_osw_decimal = row.ratio_osw ? to_double(*row.ratio_osw) : safe_ratio(row.revenue_decimal(), set.osw);
    set.rows.push_back(std::move(row));
  }
  return set;
}

void write_csv(std::ostream& out, const ReportSet& report) {
  out << "instance,policy,revenue,revenue_exact,mc_half_width,mc_trials,mc_seed,osw,osw_exact,lp_bound,"
         "lp_bound_exact,ratio_lp,ratio_lp_exact,ratio_osw,ratio_osw_exact\n";
  for (const auto& r : report.rows) {
    out << r.instance_id << ',' << r.mechanism_id << ',' << decimal(r.revenue_decimal()) << ','
        << (r.exact_revenue ? to_string(*r.exact_revenue) : "") << ','
        << (r.mc ? decimal(r.mc->half_width_95) : "") << ',' << (r.mc ? std::to_string(r.mc->trials) : "") << ','
        << (r.mc ? std::to_string(r.mc->seed) : "") << ',' << to_decimal(r.osw) << ',' << to_string(r.osw) << ','
        << to_decimal(r.lp_bound) << ',' << to_string(r.lp_bound) << ',' << decimal(r.ratio_lp_decimal) << ','
        << (r.ratio_lp ? to_string(*r.ratio_lp) : "") << ',' << decimal(r.ratio_osw_decimal) << ','
        << (r.ratio_osw ? to_string(*r.ratio_osw) : "") << '\n';
  }
  if (report.rows.empty()) {
    out << report.instance_id << ",,,,,,," << to_decimal(report.osw) << ',' << to_string(report.osw) << ','
        << to_decimal(report.lp_bound) << ',' << to_string(report.lp_bound) << ",,,,\n";
  }
}

}  // namespace spp::eval
