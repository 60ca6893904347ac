#include "spp/audit.hpp"

namespace spp::eval {

using mech::DirectMechanismTable;
using mech::TableEntry;
using valuation::ConditionalTable;
using valuation::JointDistribution;
using valuation::Valuation;

std::string to_string(FindingKind kind) {
  switch (kind) {
    case FindingKind::kDsic: return "dsic-violation";
    case FindingKind::kIr: return "ir-violation";
    case FindingKind::kMonotonicity: return "monotonicity-violation";
    case FindingKind::kPriceBound: return "price-bound-violation";
  }
  return "unknown";
}

namespace {

const TableEntry& lookup(const DirectMechanismTable& table, const Valuation& bids) {
  const TableEntry* e = table.find(bids);
  if (!e) throw CoverageError("table has no entry for profile " + valuation::format_valuation(bids));
  return *e;
}

Rational utility(const DirectMechanismTable& table, const Valuation& bids, std::size_t i, const Rational& value) {
  const TableEntry& e = lookup(table, bids);
  return e.x[i] * value - e.p[i];
}

Valuation with(Valuation v, std::size_t i, const Rational& value) {
  v[i] = value;
  return v;
}

// Utility gain of buyer i with true value v_i from reporting s_i instead,
// others reporting s_{-i}.
Rational dsic_gain(const DirectMechanismTable& table, const Valuation& s, std::size_t i, const Rational& vi) {
  return utility(table, s, i, vi) - utility(table, with(s, i, vi), i, vi);
}

void check_deviation(std::vector<AuditFinding>& out, const DirectMechanismTable& table, const Valuation& s,
                     std::size_t i, const Rational& vi) {
  Rational gain = dsic_gain(table, s, i, vi);
  if (sgn(gain) > 0) out.push_back({FindingKind::kDsic, i, with(s, i, vi), s, gain});
}

// One unit of work per deviation profile (full scope) or per (buyer, context)
// pair (conditional scope); findings are concatenated in unit order.
struct DsicPlan {
  std::vector<Valuation> profiles;
  std::vector<std::vector<Rational>> own_values;
  std::vector<std::pair<std::size_t, const valuation::Context*>> contexts;
  std::size_t units() const { return profiles.empty() ? contexts.size() : profiles.size(); }
};

DsicPlan plan(const JointDistribution& pi, const ConditionalTable& ct, DeviationScope scope) {
  DsicPlan p;
  if (scope == DeviationScope::kFull) {
    p.profiles = mech::product_profiles(pi);
    for (std::size_t i = 0; i < pi.n(); ++i) p.own_values.push_back(pi.coordinate_values(i));
  } else {
    for (std::size_t i = 0; i < pi.n(); ++i) {
      for (const auto& ctx : ct.contexts(i)) p.contexts.emplace_back(i, &ctx);
    }
  }
  return p;
}

std::vector<AuditFinding> run_unit(const DsicPlan& p, std::size_t u, const DirectMechanismTable& table,
                                   const JointDistribution& pi) {
  std::vector<AuditFinding> out;
  if (!p.profiles.empty()) {
    const Valuation& s = p.profiles[u];
    for (std::size_t i = 0; i < pi.n(); ++i) {
      for (const auto& vi : p.own_values[i]) check_deviation(out, table, s, i, vi);
    }
    return out;
  }
  const auto [i, ctx] = p.contexts[u];
  for (std::size_t dev : ctx->rows) {
    for (const auto& vi : ctx->conditional.values()) check_deviation(out, table, pi.support(dev), i, vi);
  }
  return out;
}

}  // namespace

std::vector<AuditFinding> audit_dsic(const DirectMechanismTable& table, const JointDistribution& pi,
                                     DeviationScope scope) {
  ConditionalTable ct(pi);
  DsicPlan p = plan(pi, ct, scope);
  const long units = static_cast<long>(p.units());
  std::vector<std::vector<AuditFinding>> parts(p.units());
  std::string coverage_problem;
#pragma omp parallel for schedule(dynamic, 16)
  for (long u = 0; u < units; ++u) {
    try {
      parts[static_cast<std::size_t>(u)] = run_unit(p, static_cast<std::size_t>(u), table, pi);
    } catch (const CoverageError& e) {
#pragma omp critical(spp_audit_coverage)
      if (coverage_problem.empty()) coverage_problem = e.what();
    }
  }
  if (!coverage_problem.empty()) throw CoverageError(coverage_problem);
  std::vector<AuditFinding> out;
  for (auto& part : parts) {
    for (auto& f : part) out.push_back(std::move(f));
  }
  return out;
}

std::vector<AuditFinding> audit_dsic_serial(const DirectMechanismTable& table, const JointDistribution& pi,
                                            DeviationScope scope) {
  ConditionalTable ct(pi);
  DsicPlan p = plan(pi, ct, scope);
  std::vector<AuditFinding> out;
  for (std::size_t u = 0; u < p.units(); ++u) {
    for (auto& f : run_unit(p, u, table, pi)) out.push_back(std::move(f));
  }
  return out;
}

std::vector<AuditFinding> audit_expost_ir(const DirectMechanismTable& table, const JointDistribution& pi) {
  std::vector<AuditFinding> out;
  for (const auto& s : pi.support()) {
    for (std::size_t i = 0; i < pi.n(); ++i) {
      Rational u = utility(table, s, i, s[i]);
      if (sgn(u) < 0) out.push_back({FindingKind::kIr, i, s, std::nullopt, Rational(-u)});
    }
  }
  return out;
}

std::vector<AuditFinding> audit_monotone_allocation(const DirectMechanismTable& table, const JointDistribution& pi) {
  ConditionalTable ct(pi);
  std::vector<AuditFinding> out;
  for (std::size_t i = 0; i < pi.n(); ++i) {
    for (const auto& ctx : ct.contexts(i)) {
      for (std::size_t a = 0; a < ctx.rows.size(); ++a) {
        const Valuation& low = pi.support(ctx.rows[a]);
        const Rational& x_low = lookup(table, low).x[i];
        for (std::size_t b = a + 1; b < ctx.rows.size(); ++b) {
          const Valuation& high = pi.support(ctx.rows[b]);
          Rational drop = x_low - lookup(table, high).x[i];
          if (sgn(drop) > 0) out.push_back({FindingKind::kMonotonicity, i, low, high, drop});
        }
      }
    }
  }
  return out;
}

namespace {

// v_i x_i(v) - sum over lower conditional values v' of (succ(v') - v') x_i(v').
Rational price_bound(const DirectMechanismTable& table, const JointDistribution& pi, const valuation::Context& ctx,
                     std::size_t i, std::size_t slot) {
  const auto& values = ctx.conditional.values();
  Rational bound = values[slot] * lookup(table, pi.support(ctx.rows[slot])).x[i];
  for (std::size_t t = 0; t < slot; ++t) {
    bound -= (values[t + 1] - values[t]) * lookup(table, pi.support(ctx.rows[t])).x[i];
  }
  return bound;
}

}  // namespace

std::vector<AuditFinding> audit_price_bound(const DirectMechanismTable& table, const JointDistribution& pi) {
  ConditionalTable ct(pi);
  std::vector<AuditFinding> out;
  for (std::size_t i = 0; i < pi.n(); ++i) {
    for (const auto& ctx : ct.contexts(i)) {
      for (std::size_t slot = 0; slot < ctx.rows.size(); ++slot) {
        const Valuation& v = pi.support(ctx.rows[slot]);
        Rational gap = lookup(table, v).p[i] - price_bound(table, pi, ctx, i, slot);
        if (sgn(gap) > 0) out.push_back({FindingKind::kPriceBound, i, v, std::nullopt, gap});
      }
    }
  }
  return out;
}

bool reverify(const AuditFinding& f, const DirectMechanismTable& table, const JointDistribution& pi) {
  const std::size_t i = f.buyer;
  switch (f.kind) {
    case FindingKind::kDsic: {
      if (!f.deviation) return false;
      const Rational& vi = f.truthful[i];
      Rational gain = utility(table, *f.deviation, i, vi) - utility(table, f.truthful, i, vi);
      return gain == f.gap && sgn(gain) > 0;
    }
    case FindingKind::kIr: {
      Rational u = utility(table, f.truthful, i, f.truthful[i]);
      return -u == f.gap && sgn(u) < 0;
    }
    case FindingKind::kMonotonicity: {
      if (!f.deviation) return false;
      Rational drop = lookup(table, f.truthful).x[i] - lookup(table, *f.deviation).x[i];
      return drop == f.gap && sgn(drop) > 0;
    }
    case FindingKind::kPriceBound: {
      ConditionalTable ct(pi);
      auto row = pi.find(f.truthful);
      if (!row) return false;
      const auto& ctx = ct.context_of(i, *row);
      Rational gap = lookup(table, f.truthful).p[i] - price_bound(table, pi, ctx, i, ct.slot_of(i, *row));
      return gap == f.gap && sgn(gap) > 0;
    }
  }
  return false;
}

}  // namespace spp::eval
