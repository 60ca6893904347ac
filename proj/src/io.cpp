#include "spp/io.hpp"

#include <stdexcept>

namespace spp::io {

using mech::AdaptivePricePolicy;
using mech::BlindOfferPolicy;
using mech::EnhancedPolicy;
using mech::Menu;
using mech::Offer;
using mech::PostedPricePolicy;
using valuation::Valuation;

Json rational_json(const Rational& r) { return to_string(r); }

Rational parse_rational_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(mpz_class(std::to_string(j.get<long long>())));
  throw std::invalid_argument("expected a rational string, got " + j.dump());
}

Json valuation_json(const Valuation& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(rational_json(x));
  return out;
}

Valuation parse_valuation_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of rationals");
  Valuation v;
  for (const auto& x : j) v.push_back(parse_rational_json(x));
  return v;
}

Json instance_json(const valuation::Instance& instance) {
  Json out;
  out["n"] = instance.n;
  out["k"] = instance.k;
  Json support = Json::array();
  Json mass = Json::array();
  for (std::size_t row = 0; row < instance.pi.size(); ++row) {
    support.push_back(valuation_json(instance.pi.support(row)));
    mass.push_back(rational_json(instance.pi.mass(row)));
  }
  out["support"] = std::move(support);
  out["mass"] = std::move(mass);
  return out;
}

valuation::Instance parse_instance_json(const Json& j) {
  std::size_t n = j.at("n").get<std::size_t>();
  std::size_t k = j.at("k").get<std::size_t>();
  std::vector<Valuation> support;
  for (const auto& row : j.at("support")) support.push_back(parse_valuation_json(row));
  std::vector<Rational> mass;
  for (const auto& m : j.at("mass")) mass.push_back(parse_rational_json(m));
  return valuation::Instance::make(valuation::JointDistribution::make(n, std::move(support), std::move(mass)), k);
}

std::string serialize_instance(const valuation::Instance& instance) { return instance_json(instance).dump() + "\n"; }

valuation::Instance parse_instance(std::string_view text) {
  return parse_instance_json(Json::parse(text.begin(), text.end()));
}

namespace {

Json ratio_json(const std::optional<Rational>& r) { return r ? rational_json(*r) : Json("inf"); }

Json menu_json(const Menu& menu) {
  Json offers = Json::array();
  for (const auto& o : menu.offers) offers.push_back({{"price", rational_json(o.price)}, {"mass", rational_json(o.mass)}});
  return {{"offers", offers}, {"skip", rational_json(menu.skip_mass)}};
}

Menu parse_menu(const Json& j) {
  std::vector<Offer> offers;
  for (const auto& o : j.at("offers")) offers.push_back({parse_rational_json(o.at("price")), parse_rational_json(o.at("mass"))});
  return mech::normalize_menu(std::move(offers), parse_rational_json(j.at("skip")));
}

Json keyed_menus_json(const std::vector<std::map<Valuation, Menu>>& menus) {
  Json out = Json::array();
  for (const auto& per_buyer : menus) {
    Json list = Json::array();
    for (const auto& [key, menu] : per_buyer) {
      Json entry = menu_json(menu);
      entry["context"] = valuation_json(key);
      list.push_back(std::move(entry));
    }
    out.push_back(std::move(list));
  }
  return out;
}

std::vector<std::map<Valuation, Menu>> parse_keyed_menus(const Json& j) {
  std::vector<std::map<Valuation, Menu>> out;
  for (const auto& list : j) {
    std::map<Valuation, Menu> per_buyer;
    for (const auto& entry : list) per_buyer.emplace(parse_valuation_json(entry.at("context")), parse_menu(entry));
    out.push_back(std::move(per_buyer));
  }
  return out;
}

Json blind_json(const BlindOfferPolicy& p) {
  Json out;
  out["type"] = "blind";
  out["kind"] = p.kind;
  out["n"] = p.n;
  out["k"] = p.k;
  out["order"] = p.order;
  out["menus"] = keyed_menus_json(p.menus);
  Json throttle = Json::array();
  for (const auto& per_buyer : p.throttle) {
    Json list = Json::array();
    for (const auto& [bids, keep] : per_buyer) list.push_back({{"bids", valuation_json(bids)}, {"keep", rational_json(keep)}});
    throttle.push_back(std::move(list));
  }
  out["throttle"] = std::move(throttle);
  Json support = Json::array();
  for (const auto& v : p.support) support.push_back(valuation_json(v));
  out["support"] = std::move(support);
  return out;
}

BlindOfferPolicy parse_blind(const Json& j) {
  BlindOfferPolicy p;
  p.kind = j.value("kind", std::string("blind"));
  p.n = j.at("n").get<std::size_t>();
  p.k = j.at("k").get<std::size_t>();
  p.order = j.at("order").get<std::vector<std::size_t>>();
  p.menus = parse_keyed_menus(j.at("menus"));
  for (const auto& list : j.at("throttle")) {
    std::map<Valuation, Rational> per_buyer;
    for (const auto& e : list) per_buyer.emplace(parse_valuation_json(e.at("bids")), parse_rational_json(e.at("keep")));
    p.throttle.push_back(std::move(per_buyer));
  }
  for (const auto& v : j.at("support")) p.support.insert(parse_valuation_json(v));
  if (p.menus.size() != p.n) throw std::invalid_argument("blind policy needs one menu list per buyer");
  return p;
}

}  // namespace

Json stats_json(const valuation::SupportStats& stats) {
  Json out;
  out["v_max"] = rational_json(stats.v_max);
  out["v_min_of_max"] = rational_json(stats.v_min_of_max);
  out["r"] = ratio_json(stats.r);
  Json buyers = Json::array();
  for (const auto& b : stats.per_buyer) {
    buyers.push_back({{"v_max", rational_json(b.v_max)}, {"v_min", rational_json(b.v_min)}, {"r", ratio_json(b.r)}});
  }
  out["per_buyer"] = std::move(buyers);
  if (stats.kth_order) {
    const auto& kth = *stats.kth_order;
    out["kth_order"] = {{"k", kth.k}, {"v_max", rational_json(kth.v_max)}, {"v_min", rational_json(kth.v_min)}, {"r", ratio_json(kth.r)}};
  }
  return out;
}

Json certificate_json(const valuation::DependenceCertificate& cert) {
  return {{"d", cert.d}, {"sets", cert.sets}};
}

Json policy_json(const mech::Policy& policy) {
  struct Visitor {
    Json operator()(const PostedPricePolicy& p) const {
      Json scenarios = Json::array();
      for (const auto& s : p.scenarios) {
        Json menus = Json::array();
        for (const auto& m : s.menus) menus.push_back(menu_json(m));
        scenarios.push_back({{"weight", rational_json(s.weight)}, {"menus", menus}});
      }
      return {{"type", "posted"}, {"kind", p.kind}, {"n", p.n}, {"k", p.k}, {"order", p.order}, {"scenarios", scenarios}};
    }
    Json operator()(const AdaptivePricePolicy& p) const {
      Json prices = Json::array();
      for (const auto& [history, price] : p.prices) {
        std::string h;
        for (bool b : history) h += b ? '1' : '0';
        prices.push_back({{"history", h}, {"price", rational_json(price)}});
      }
      return {{"type", "adaptive"}, {"n", p.n}, {"k", p.k}, {"order", p.order}, {"prices", prices}};
    }
    Json operator()(const BlindOfferPolicy& p) const { return blind_json(p); }
    Json operator()(const EnhancedPolicy& p) const {
      return {{"type", "enhanced"}, {"q", rational_json(p.q)}, {"sets", p.sets}, {"base", blind_json(p.base)},
              {"menus", keyed_menus_json(p.menus)}};
    }
  };
  return std::visit(Visitor{}, policy);
}

mech::Policy parse_policy_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "blind") return parse_blind(j);
  if (type == "posted") {
    PostedPricePolicy p;
    p.kind = j.value("kind", std::string("posted"));
    p.n = j.at("n").get<std::size_t>();
    p.k = j.at("k").get<std::size_t>();
    p.order = j.at("order").get<std::vector<std::size_t>>();
    for (const auto& s : j.at("scenarios")) {
      mech::PriceScenario scenario{parse_rational_json(s.at("weight")), {}};
      for (const auto& m : s.at("menus")) scenario.menus.push_back(parse_menu(m));
      p.scenarios.push_back(std::move(scenario));
    }
    return p;
  }
  if (type == "adaptive") {
    AdaptivePricePolicy p;
    p.n = j.at("n").get<std::size_t>();
    p.k = j.at("k").get<std::size_t>();
    p.order = j.at("order").get<std::vector<std::size_t>>();
    for (const auto& e : j.at("prices")) {
      std::vector<bool> history;
      for (char c : e.at("history").get<std::string>()) history.push_back(c == '1');
      p.prices.emplace(std::move(history), parse_rational_json(e.at("price")));
    }
    return p;
  }
  if (type == "enhanced") {
    EnhancedPolicy p;
    p.q = parse_rational_json(j.at("q"));
    p.sets = j.at("sets").get<std::vector<std::vector<std::size_t>>>();
    p.base = parse_blind(j.at("base"));
    p.menus = parse_keyed_menus(j.at("menus"));
    return p;
  }
  throw std::invalid_argument("unknown policy type '" + type + "' (known: adaptive, blind, enhanced, posted)");
}

Json table_json(const mech::DirectMechanismTable& table) {
  Json entries = Json::array();
  for (const auto& [bids, e] : table.entries) {
    entries.push_back({{"bids", valuation_json(bids)}, {"x", valuation_json(e.x)}, {"p", valuation_json(e.p)}});
  }
  return {{"n", table.n}, {"k", table.k}, {"zero_off_support", table.zero_off_support}, {"entries", entries}};
}

mech::DirectMechanismTable parse_table_json(const Json& j) {
  mech::DirectMechanismTable table;
  table.n = j.at("n").get<std::size_t>();
  table.k = j.at("k").get<std::size_t>();
  for (const auto& e : j.at("entries")) {
    table.entries.emplace(parse_valuation_json(e.at("bids")),
                          mech::TableEntry{parse_valuation_json(e.at("x")), parse_valuation_json(e.at("p"))});
  }
  if (j.value("zero_off_support", false)) table.set_zero_off_support();
  if (auto problem = mech::check_table(table)) throw std::invalid_argument(*problem);
  return table;
}

Json finding_json(const eval::AuditFinding& f) {
  Json out;
  out["kind"] = eval::to_string(f.kind);
  out["buyer"] = f.buyer;
  out["truthful"] = valuation_json(f.truthful);
  out["deviation"] = f.deviation ? valuation_json(*f.deviation) : Json(nullptr);
  out["gap"] = rational_json(f.gap);
  return out;
}

Json report_json(const eval::ReportSet& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row;
    row["policy"] = r.mechanism_id;
    row["exact_revenue"] = r.exact_revenue ? rational_json(*r.exact_revenue) : Json(nullptr);
    if (r.mc) {
      row["mc"] = {{"mean", r.mc->mean}, {"half_width_95", r.mc->half_width_95}, {"trials", r.mc->trials}, {"seed", r.mc->seed}};
    } else {
      row["mc"] = nullptr;
    }
    row["revenue"] = r.revenue_decimal();
    row["ratio_lp"] = r.ratio_lp ? rational_json(*r.ratio_lp) : Json(nullptr);
    row["ratio_lp_decimal"] = r.ratio_lp_decimal;
    row["ratio_osw"] = r.ratio_osw ? rational_json(*r.ratio_osw) : Json(nullptr);
    row["ratio_osw_decimal"] = r.ratio_osw_decimal;
    rows.push_back(std::move(row));
  }
  return {{"instance", report.instance_id}, {"osw", rational_json(report.osw)}, {"lp_bound", rational_json(report.lp_bound)},
          {"rows", rows}};
}

}  // namespace spp::io
