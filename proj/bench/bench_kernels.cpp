#include <benchmark/benchmark.h>

#include <map>

#include "spp/audit.hpp"
#include "spp/generators.hpp"
#include "spp/lp.hpp"
#include "spp/mechanisms.hpp"
#include "spp/monte_carlo.hpp"

namespace {

using namespace spp;

const valuation::Instance& mc_instance() {
  static const auto inst = valuation::gen_random(4, 200, {ratio(1, 2), Rational(1), Rational(2), Rational(3)}, 2, 42);
  return inst;
}

const mech::Policy& mc_policy() {
  static const mech::Policy policy = mech::make_dsic(
      mech::build_blind_k(mc_instance(), lp::solve_simplex(lp::build_revenue_lp(mc_instance()))), mc_instance().pi);
  return policy;
}

template <bool kParallel>
void BM_MonteCarlo(benchmark::State& state) {
  const auto trials = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto estimate = kParallel ? eval::monte_carlo_revenue(mc_policy(), mc_instance().pi, trials, 7)
                              : eval::monte_carlo_revenue_serial(mc_policy(), mc_instance().pi, trials, 7);
    benchmark::DoNotOptimize(estimate);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(trials));
}

struct AuditCase {
  valuation::Instance instance;
  mech::DirectMechanismTable table;
};

const AuditCase& audit_case(unsigned m) {
  static std::map<unsigned, AuditCase> cases;
  auto it = cases.find(m);
  if (it == cases.end()) {
    Rational eps = 1 / Rational(static_cast<unsigned long>(4 * m * m));
    it = cases.emplace(m, AuditCase{valuation::gen_modular(3, m, eps), mech::build_modular_full_surplus(3, m, eps)})
             .first;
  }
  return it->second;
}

template <bool kParallel>
void BM_AuditDsic(benchmark::State& state) {
  const auto& c = audit_case(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) {
    auto findings = kParallel ? eval::audit_dsic(c.table, c.instance.pi) : eval::audit_dsic_serial(c.table, c.instance.pi);
    benchmark::DoNotOptimize(findings);
  }
}

}  // namespace

BENCHMARK(BM_MonteCarlo<false>)->Name("monte_carlo/serial")->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo<true>)->Name("monte_carlo/parallel")->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AuditDsic<false>)->Name("audit_dsic/serial")->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AuditDsic<true>)->Name("audit_dsic/parallel")->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
