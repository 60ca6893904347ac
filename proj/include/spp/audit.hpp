#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spp/mechanisms.hpp"
#include "spp/valuation.hpp"

namespace spp::eval {

enum class FindingKind { kDsic, kIr, kMonotonicity, kPriceBound };

std::string to_string(FindingKind kind);

struct AuditFinding {
  FindingKind kind = FindingKind::kDsic;
  std::size_t buyer = 0;
  valuation::Valuation truthful;
  // dsic: the deviating profile; monotonicity: the profile with the higher
  // own value. Empty otherwise.
  std::optional<valuation::Valuation> deviation;
  // Amount by which the inequality fails; always positive.
  Rational gap;
};

// A profile the audit needs is absent from the table.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DeviationScope {
  // Others' reports range over the product of marginal supports, true values
  // and deviations over the buyer's marginal support.
  kFull,
  // Others' reports range over supp(pi_{-i}); true value and deviation over
  // the conditional support given those reports.
  kConditional,
};

std::vector<AuditFinding> audit_dsic(const mech::DirectMechanismTable& table, const valuation::JointDistribution& pi,
                                     DeviationScope scope = DeviationScope::kFull);
std::vector<AuditFinding> audit_dsic_serial(const mech::DirectMechanismTable& table,
                                            const valuation::JointDistribution& pi,
                                            DeviationScope scope = DeviationScope::kFull);

std::vector<AuditFinding> audit_expost_ir(const mech::DirectMechanismTable& table,
                                          const valuation::JointDistribution& pi);

std::vector<AuditFinding> audit_monotone_allocation(const mech::DirectMechanismTable& table,
                                                    const valuation::JointDistribution& pi);

std::vector<AuditFinding> audit_price_bound(const mech::DirectMechanismTable& table,
                                            const valuation::JointDistribution& pi);

// Recomputes both sides of the violated inequality; true iff the stored gap
// is reproduced exactly.
bool reverify(const AuditFinding& finding, const mech::DirectMechanismTable& table,
              const valuation::JointDistribution& pi);

}  // namespace spp::eval
