#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "spp/audit.hpp"
#include "spp/dependence.hpp"
#include "spp/evaluation.hpp"
#include "spp/generators.hpp"
#include "spp/io.hpp"
#include "spp/lp.hpp"
#include "spp/mechanisms.hpp"
#include "spp/simulate.hpp"

using namespace spp;
using namespace spp::mech;
using spp::valuation::gen_correlated_pair;
using spp::valuation::gen_harmonic;
using spp::valuation::gen_modular;
using spp::valuation::gen_product;
using spp::valuation::Instance;
using spp::valuation::JointDistribution;

namespace {

Rational q(long a, long b = 1) { return ratio(a, b); }

JointDistribution uniform_points(std::size_t n, std::vector<Valuation> support) {
  std::vector<Rational> mass(support.size(), q(1, static_cast<long>(support.size())));
  return JointDistribution::make(n, std::move(support), std::move(mass));
}

BlindOfferPolicy blind_k(const Instance& inst) {
  return build_blind_k(inst, lp::solve_simplex(lp::build_revenue_lp(inst)));
}

}  // namespace

TEST(MonopolyPrice, Examples) {
  auto point = monopoly_price(ScalarDistribution::point(q(5)));
  EXPECT_EQ(point.price, 5);
  EXPECT_EQ(point.revenue, 5);
  auto harmonic = monopoly_price(ScalarDistribution::uniform({q(1), q(1, 2), q(1, 3), q(1, 4)}));
  EXPECT_EQ(harmonic.price, q(1, 4));
  EXPECT_EQ(harmonic.revenue, q(1, 4));
  auto two = monopoly_price(ScalarDistribution::uniform({q(1), q(2)}));
  EXPECT_EQ(two.price, 1);
  EXPECT_EQ(two.revenue, 1);
}

TEST(BucketPrices, Sets) {
  EXPECT_EQ(bucket_prices(q(3), q(1)), std::vector<Rational>{q(3)});
  EXPECT_EQ(bucket_prices(q(1), q(4)), (std::vector<Rational>{q(1), q(2)}));
  EXPECT_EQ(bucket_prices(q(1), q(5)), (std::vector<Rational>{q(1), q(2), q(4)}));
  EXPECT_EQ(bucket_prices(q(1), q(2)), std::vector<Rational>{q(1)});
  EXPECT_EQ(bucket_prices(q(1), q(9), q(3)), (std::vector<Rational>{q(1), q(3)}));
}

TEST(BucketedUnit, Examples) {
  auto point = build_bucketed_spp_unit(JointDistribution::make(2, {{q(2), q(3)}}, {q(1)}));
  ASSERT_EQ(point.scenarios.size(), 1u);
  EXPECT_EQ(point.scenarios[0].menus[0], deterministic_menu(q(3)));

  auto pi = uniform_points(1, {{q(1)}, {q(4)}});
  auto policy = build_bucketed_spp_unit(pi);
  ASSERT_EQ(policy.scenarios.size(), 2u);
  EXPECT_EQ(policy.scenarios[1].menus[0], deterministic_menu(q(2)));
  EXPECT_EQ(eval::exact_expected_revenue(policy, pi), 1);

  auto pair = gen_correlated_pair(4, 1);
  Rational revenue = eval::exact_expected_revenue(build_bucketed_spp_unit(pair.pi), pair.pi);
  EXPECT_GE(revenue, eval::expected_osw(pair.pi, 1) / (2 * 2));

  auto zero = uniform_points(1, {{q(0)}, {q(1)}});
  EXPECT_THROW(build_bucketed_spp_unit(zero), UnsupportedInstance);
  auto windowed = build_bucketed_spp_unit(zero, PriceWindow{q(1, 2), q(1)});
  EXPECT_EQ(windowed.scenarios.size(), 1u);
}

TEST(BucketedUnlimited, Examples) {
  auto points = JointDistribution::make(2, {{q(2), q(3)}}, {q(1)});
  EXPECT_EQ(eval::exact_expected_revenue(build_bucketed_spp_unlimited(points), points), 5);

  auto u14 = ScalarDistribution::uniform({q(1), q(4)});
  auto one = gen_product({u14}, 1).pi;
  EXPECT_EQ(build_bucketed_spp_unlimited(one).scenarios[0].menus[0], uniform_menu({q(1), q(2)}));
  EXPECT_EQ(eval::exact_expected_revenue(build_bucketed_spp_unlimited(one), one), 1);

  auto iid = gen_product({u14, u14}, 2).pi;
  EXPECT_EQ(eval::exact_expected_revenue(build_bucketed_spp_unlimited(iid), iid), 2);
  EXPECT_EQ(eval::expected_osw(iid, 2), 5);

  EXPECT_THROW(build_bucketed_spp_unlimited(uniform_points(2, {{q(0), q(1)}, {q(1), q(1)}})), UnsupportedInstance);
}

TEST(BucketedLimited, Examples) {
  auto pair = gen_correlated_pair(8, 1);
  auto unit = build_bucketed_spp_unit(pair.pi);
  auto limited = build_bucketed_spp_klimited(pair.pi, 1);
  ASSERT_EQ(unit.scenarios.size(), limited.scenarios.size());
  EXPECT_EQ(eval::exact_expected_revenue(unit, pair.pi), eval::exact_expected_revenue(limited, pair.pi));

  auto sym = uniform_points(2, {{q(1), q(4)}, {q(4), q(1)}});
  auto policy = build_bucketed_spp_klimited(sym, 2);
  ASSERT_EQ(policy.scenarios.size(), 1u);
  EXPECT_EQ(policy.scenarios[0].menus[0], deterministic_menu(q(1)));
  EXPECT_EQ(eval::exact_expected_revenue(policy, sym), 2);

  EXPECT_THROW(build_bucketed_spp_klimited(uniform_points(2, {{q(0), q(1)}, {q(1), q(1)}}), 2), UnsupportedInstance);
}

TEST(BucketedLimited, WellSeparated) {
  auto tied = uniform_points(2, {{q(1), q(1)}, {q(2), q(4)}});
  EXPECT_EQ(separation_violation(tied, 1), 0u);
  EXPECT_THROW(build_bucketed_spp_klimited(tied, 1, true), UnsupportedInstance);

  auto pi = uniform_points(3, {{q(1), q(2), q(8)}, {q(4), q(2), q(1)}, {q(8), q(4), q(2)}});
  EXPECT_FALSE(separation_violation(pi, 2));
  EXPECT_EQ(separation_ratio(pi), 2);
  auto policy = build_bucketed_spp_klimited(pi, 2, true);
  for (const auto& s : policy.scenarios) {
    ASSERT_EQ(s.menus.size(), 3u);
    for (const auto& m : s.menus) EXPECT_FALSE(check_menu(m));
  }
  Rational revenue = eval::exact_expected_revenue(policy, pi);
  EXPECT_EQ(revenue, oracle::expected_revenue(policy, pi));
  EXPECT_GT(revenue, 0);
}

TEST(BlindUnlimited, ProductIsPerMarginalMonopoly) {
  auto a = ScalarDistribution::uniform({q(1), q(2), q(3)});
  auto b = ScalarDistribution::make({{q(1), q(1, 4)}, {q(4), q(3, 4)}});
  auto inst = gen_product({a, b}, 2);
  auto policy = build_blind_unlimited(inst);
  for (const auto& [key, menu] : policy.menus[0]) EXPECT_EQ(menu, deterministic_menu(monopoly_price(a).price));
  for (const auto& [key, menu] : policy.menus[1]) EXPECT_EQ(menu, deterministic_menu(monopoly_price(b).price));
  EXPECT_THROW(build_blind_unlimited(gen_correlated_pair(3, 1)), std::invalid_argument);
}

TEST(BlindUnlimited, FullSurplusOnPerfectCorrelation) {
  for (unsigned m : {1u, 4u, 16u}) {
    auto inst = gen_correlated_pair(m, 2);
    Rational revenue = eval::exact_expected_revenue(build_blind_unlimited(inst), inst.pi);
    EXPECT_EQ(revenue, eval::expected_osw(inst.pi, 2));
    EXPECT_EQ(revenue, lp::revenue_upper_bound(inst));
  }
}

TEST(BlindUnlimited, ModularMatchesBound) {
  auto inst = gen_modular(3, 4, q(1, 100));
  EXPECT_EQ(eval::exact_expected_revenue(build_blind_unlimited(inst), inst.pi), lp::revenue_upper_bound(inst));
}

TEST(BlindK, ClosedFormHalvesTheMonopolyOffer) {
  auto inst = gen_correlated_pair(4, 2);
  auto policy = build_blind_k(inst, lp::closed_form_unlimited(inst));
  for (std::size_t i = 0; i < 2; ++i) {
    for (const auto& [others, menu] : policy.menus[i]) {
      ASSERT_EQ(menu.offers.size(), 1u);
      EXPECT_EQ(menu.offers[0].price, others[0]);
      EXPECT_EQ(menu.offers[0].mass, q(1, 2));
      EXPECT_EQ(menu.skip_mass, q(1, 2));
    }
  }
}

TEST(BlindK, HarmonicRevenue) {
  auto inst = gen_harmonic(4);
  auto policy = blind_k(inst);
  ASSERT_EQ(policy.menus[0].size(), 1u);
  const Menu& menu = policy.menus[0].begin()->second;
  EXPECT_EQ(menu.offer_mass(), q(1, 2));
  EXPECT_EQ(eval::exact_expected_revenue(policy, inst.pi), q(1, 8));
}

TEST(BlindK, MenusNormalizedWithHalfSkip) {
  for (const auto& inst : fixtures::random_limited()) {
    auto policy = blind_k(inst);
    for (const auto& per_buyer : policy.menus) {
      for (const auto& [others, menu] : per_buyer) {
        EXPECT_FALSE(check_menu(menu));
        EXPECT_GE(menu.skip_mass, q(1, 2));
      }
    }
  }
}

TEST(BlindK, RejectsInfeasibleSolution) {
  auto inst = gen_correlated_pair(3, 1);
  auto sol = lp::solve_simplex(lp::build_revenue_lp(inst));
  for (auto& y : sol.y) y = 1;
  EXPECT_THROW(build_blind_k(inst, sol), std::invalid_argument);
}

TEST(Blindness, MenusNeverKeyOnOwnValue) {
  for (const auto& inst : fixtures::random_limited()) {
    auto policy = blind_k(inst);
    auto json = io::policy_json(policy);
    ASSERT_EQ(json["menus"].size(), inst.n);
    for (std::size_t i = 0; i < inst.n; ++i) {
      for (const auto& entry : json["menus"][i]) EXPECT_EQ(entry["context"].size(), inst.n - 1);
    }
    // Changing only b_i never changes buyer i's menu.
    for (const auto& v : inst.pi.support()) {
      for (std::size_t i = 0; i < inst.n; ++i) {
        for (const auto& w : inst.pi.support()) {
          if (valuation::drop(v, i) == valuation::drop(w, i)) EXPECT_EQ(policy.menu_for(i, v), policy.menu_for(i, w));
        }
      }
    }
  }
}

TEST(MakeDsic, UnlimitedSupplyUnchanged) {
  auto inst = gen_correlated_pair(4, 2);
  auto policy = build_blind_unlimited(inst);
  auto out = make_dsic(policy, inst.pi);
  EXPECT_EQ(out.kind, policy.kind);
  EXPECT_TRUE(out.throttle.empty());
}

TEST(MakeDsic, TwoBuyerReachBecomesBidIndependent) {
  auto [pi, policy] = fixtures::two_buyer_hand();
  auto before = offer_probabilities(policy, pi);
  auto row = [&](long a, long b) { return *pi.find({q(a), q(b)}); };
  EXPECT_NE(before[1][row(1, 1)], before[1][row(1, 2)]);
  // Buyer 2 at value 2 facing b_1 = 1 gains by reporting 1: reach 1/2 -> 3/4.
  auto untransformed = eval::audit_dsic(eval::expected_form_table(policy, pi), pi, eval::DeviationScope::kConditional);
  ASSERT_FALSE(untransformed.empty());
  EXPECT_EQ(untransformed.front().buyer, 1u);

  auto fixed = make_dsic(policy, pi);
  auto after = offer_probabilities(fixed, pi);
  EXPECT_EQ(after[1][row(1, 1)], after[1][row(1, 2)]);
  EXPECT_EQ(after[1][row(2, 1)], after[1][row(2, 2)]);
  EXPECT_EQ(after[0][row(1, 1)], after[0][row(2, 1)]);
  auto table = eval::expected_form_table(fixed, pi);
  EXPECT_TRUE(eval::audit_dsic(table, pi, eval::DeviationScope::kConditional).empty());
}

TEST(MakeDsic, ReachConstantOnConditionalSupport) {
  for (const auto& inst : fixtures::random_limited()) {
    auto policy = make_dsic(blind_k(inst), inst.pi);
    auto reach = offer_probabilities(policy, inst.pi);
    valuation::ConditionalTable table(inst.pi);
    for (std::size_t i = 0; i < inst.n; ++i) {
      for (const auto& ctx : table.contexts(i)) {
        for (std::size_t r : ctx.rows) EXPECT_EQ(reach[i][r], reach[i][ctx.rows.front()]);
      }
    }
  }
}

TEST(Enhanced, DefaultQueryProbability) {
  EXPECT_EQ(default_query_probability(0), 0);
  EXPECT_EQ(default_query_probability(1), q(1, 2));
  EXPECT_EQ(default_query_probability(2), q(1, 2));
  EXPECT_EQ(default_query_probability(4), q(3, 4));
}

TEST(Enhanced, IndependentWithoutQueriesMatchesBase) {
  auto inst = gen_product({ScalarDistribution::uniform({q(1), q(2)}), ScalarDistribution::uniform({q(1), q(3)}),
                           ScalarDistribution::uniform({q(2), q(3)})},
                          3);
  auto base = build_blind_unlimited(inst);
  auto cert = *valuation::dependence_dimension(inst.pi);
  ASSERT_EQ(cert.d, 0u);
  auto enhanced = build_enhanced(base, cert);
  EXPECT_EQ(enhanced.q, 0);
  EXPECT_EQ(eval::exact_expected_revenue(enhanced, inst.pi), eval::exact_expected_revenue(base, inst.pi));
}

TEST(Enhanced, ArgumentChecks) {
  auto inst = fixtures::expert_noise();
  auto base = build_blind_unlimited(inst);
  auto cert = *valuation::dependence_dimension(inst.pi);
  EXPECT_THROW(build_enhanced(base, cert, q(3, 2)), std::invalid_argument);
  EXPECT_THROW(build_enhanced(base, cert, q(-1, 2)), std::invalid_argument);
  // A certificate with empty sets claims menus ignore everyone.
  valuation::DependenceCertificate wrong{0, {{}, {}, {}}};
  EXPECT_THROW(build_enhanced(base, wrong, q(0)), std::invalid_argument);
}

TEST(Enhanced, TranscriptQueriesAreNeverOffered) {
  auto inst = fixtures::expert_noise();
  auto policy = build_enhanced(build_blind_unlimited(inst), *valuation::dependence_dimension(inst.pi));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto& v = inst.pi.support(seed % inst.pi.size());
    auto outcome = run_mechanism(policy, v, seed);
    std::vector<int> queried(3, 0);
    for (const auto& e : outcome.transcript) {
      if (e.kind == TranscriptEntry::Kind::kQuery) {
        queried[e.buyer] = 1;
        EXPECT_EQ(e.reported, v[e.buyer]);
      }
      if (e.kind == TranscriptEntry::Kind::kOffer) {
        EXPECT_FALSE(queried[e.buyer]);
        for (std::size_t j : policy.sets[e.buyer]) EXPECT_TRUE(queried[j]);
      }
    }
  }
}

TEST(ModularTable, TruthfulPaymentsEqualValues) {
  const Rational eps = q(1, 100);
  auto inst = gen_modular(3, 4, eps);
  auto table = build_modular_full_surplus(3, 4, eps);
  EXPECT_EQ(table.entries.size(), 512u);
  for (const auto& v : inst.pi.support()) {
    const auto* e = table.find(v);
    ASSERT_NE(e, nullptr);
    EXPECT_EQ(e->p, v) << valuation::format_valuation(v);
  }
  // i* = buyer 0 with (c_1, c_2) = (3, 2).
  const auto* e = table.find({q(1, 2), 3 * eps, 2 * eps});
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->p[0], q(1, 2));
  Rational osw(0);
  for (const auto& [v, mass] : oracle::modular_outcomes(3, 4, eps)) osw += mass * (v[0] + v[1] + v[2]);
  EXPECT_EQ(eval::expected_osw(inst.pi, 3), osw);
  // c_j is uniform on {1..m}, so each small buyer contributes (m+1) eps / 2.
  EXPECT_EQ(osw, q(2) * 5 * eps / 2 + harmonic_number(4) / 4);
  EXPECT_EQ(eval::exact_expected_revenue(build_blind_unlimited(inst), inst.pi), osw);
}

TEST(ModularTable, AuditsPass) {
  const Rational eps = q(1, 100);
  auto inst = gen_modular(3, 4, eps);
  auto table = build_modular_full_surplus(3, 4, eps);
  EXPECT_FALSE(check_table(table));
  EXPECT_TRUE(eval::audit_dsic(table, inst.pi).empty());
  EXPECT_TRUE(eval::audit_expost_ir(table, inst.pi).empty());
  EXPECT_TRUE(eval::audit_monotone_allocation(table, inst.pi).empty());
  EXPECT_TRUE(eval::audit_price_bound(table, inst.pi).empty());
}

TEST(PayYourBid, UnderbiddingIsFound) {
  auto inst = gen_correlated_pair(2, 2);
  auto table = build_pay_your_bid(inst.pi);
  auto findings = eval::audit_dsic(table, inst.pi);
  ASSERT_FALSE(findings.empty());
  for (const auto& f : findings) {
    EXPECT_EQ(f.kind, eval::FindingKind::kDsic);
    EXPECT_LT((*f.deviation)[f.buyer], f.truthful[f.buyer]);
    EXPECT_TRUE(eval::reverify(f, table, inst.pi));
  }
  EXPECT_TRUE(eval::audit_expost_ir(table, inst.pi).empty());
}

TEST(RunMechanism, CorrelatedPairBothAccept) {
  auto inst = gen_correlated_pair(4, 2);
  auto policy = build_blind_unlimited(inst);
  auto outcome = run_mechanism(policy, {q(1, 3), q(1, 3)}, 5);
  ASSERT_EQ(outcome.transcript.size(), 2u);
  for (const auto& e : outcome.transcript) {
    EXPECT_EQ(e.kind, TranscriptEntry::Kind::kOffer);
    EXPECT_EQ(e.price, q(1, 3));
    EXPECT_TRUE(e.accepted);
  }
  EXPECT_EQ(outcome.revenue(), q(2, 3));
}

TEST(RunMechanism, OffSupportTerminates) {
  auto inst = gen_correlated_pair(4, 2);
  auto outcome = run_mechanism(build_blind_unlimited(inst), {q(1), q(1, 2)}, 1);
  EXPECT_TRUE(outcome.transcript.empty());
  EXPECT_EQ(outcome.revenue(), 0);
}

TEST(RunMechanism, DeterministicPolicyOnPointMass) {
  auto policy = fixed_price_policy(2, 1, q(2));
  auto outcome = run_mechanism(policy, {q(1), q(3)}, 9);
  ASSERT_EQ(outcome.transcript.size(), 2u);
  EXPECT_FALSE(outcome.transcript[0].accepted);
  EXPECT_TRUE(outcome.transcript[1].accepted);
  EXPECT_EQ(outcome.x, (std::vector<int>{0, 1}));
  EXPECT_EQ(transcript_record(outcome.transcript[1]), R"({"buyer":1,"kind":"offer","price":"2","accepted":true})");
}

TEST(RunMechanism, SupplyRationalityAndDeterminism) {
  for (const auto& inst : fixtures::random_limited()) {
    std::vector<Policy> policies{blind_k(inst), build_bucketed_spp_klimited(inst.pi, inst.k)};
    policies.push_back(make_dsic(std::get<BlindOfferPolicy>(policies[0]), inst.pi));
    for (const auto& policy : policies) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto& v = inst.pi.support(seed % inst.pi.size());
        auto outcome = run_mechanism(policy, v, seed);
        int sold = 0;
        for (std::size_t i = 0; i < inst.n; ++i) {
          sold += outcome.x[i];
          if (sgn(outcome.p[i]) > 0) EXPECT_EQ(outcome.x[i], 1);
          if (outcome.x[i]) EXPECT_LE(outcome.p[i], v[i]);
        }
        EXPECT_LE(sold, static_cast<int>(inst.k));
        int accepted = 0;
        for (const auto& e : outcome.transcript) {
          if (e.kind != TranscriptEntry::Kind::kOffer) continue;
          EXPECT_LT(accepted, static_cast<int>(inst.k));
          EXPECT_EQ(e.accepted, e.price <= v[e.buyer]);
          accepted += e.accepted;
        }
        auto again = run_mechanism(policy, v, seed);
        EXPECT_EQ(again.x, outcome.x);
        EXPECT_EQ(again.p, outcome.p);
      }
    }
  }
}

TEST(PolicyIo, RoundTrip) {
  auto inst = fixtures::expert_noise(2);
  auto unlimited = fixtures::expert_noise();
  std::vector<Policy> policies{
      blind_k(inst),
      make_dsic(blind_k(inst), inst.pi),
      build_bucketed_spp_klimited(inst.pi, 2),
      build_enhanced(build_blind_unlimited(unlimited), *valuation::dependence_dimension(unlimited.pi)),
  };
  AdaptivePricePolicy adaptive{2, 1, {0, 1}, {{{}, q(1)}, {{false}, q(1, 2)}}};
  policies.push_back(adaptive);
  for (const auto& policy : policies) {
    auto json = io::policy_json(policy);
    auto back = io::parse_policy_json(json);
    EXPECT_EQ(io::policy_json(back).dump(), json.dump());
  }
  EXPECT_THROW(io::parse_policy_json(io::Json{{"type", "mystery"}}), std::invalid_argument);
}
