#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "spp/evaluation.hpp"
#include "spp/generators.hpp"
#include "spp/lp.hpp"

namespace spp::cli {

namespace {

struct Schema {
  std::vector<std::string> required;
  std::vector<std::string> optional;
};

const std::map<std::string, Schema>& generator_schemas() {
  static const std::map<std::string, Schema> schemas{
      {"correlated_pair", {{"m", "k"}, {}}},
      {"expert_noise", {{"n", "values", "noise"}, {"expert", "k"}}},
      {"harmonic", {{"m"}, {}}},
      {"modular", {{"n", "m", "eps"}, {}}},
      {"product", {{"marginals", "k"}, {}}},
      {"random", {{"n", "size", "grid", "k"}, {"seed"}}},
  };
  return schemas;
}

const std::map<std::string, Schema>& policy_schemas() {
  static const std::map<std::string, Schema> schemas{
      {"best_fixed_price", {{}, {}}},
      {"blind_k", {{}, {"dsic"}}},
      {"blind_unlimited", {{}, {}}},
      {"bucketed_klimited", {{}, {"well_separated"}}},
      {"bucketed_unit", {{}, {"low", "high"}}},
      {"bucketed_unlimited", {{}, {}}},
      {"enhanced", {{}, {"base", "q"}}},
      {"file", {{"path"}, {}}},
      {"fixed_price", {{"price"}, {}}},
  };
  return schemas;
}

const std::map<std::string, Schema>& table_schemas() {
  static const std::map<std::string, Schema> schemas{
      {"file", {{"path"}, {}}},
      {"modular_full_surplus", {{"n", "m", "eps"}, {}}},
      {"pay_your_bid", {{}, {}}},
      {"policy", {{"policy"}, {"coverage"}}},
  };
  return schemas;
}

std::vector<std::string> keys_of(const std::map<std::string, Schema>& schemas) {
  std::vector<std::string> out;
  for (const auto& [name, schema] : schemas) out.push_back(name);
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) out += (out.empty() ? "" : ", ") + item;
  return out;
}

void check_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const Json& j, const std::string& where, const std::vector<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "' (known: " + join(allowed) + ")");
    }
  }
}

// Splits {"<name_key>": name, ...params} and checks the params against the schema.
std::pair<std::string, Json> named_params(const Json& j, const std::string& where, const std::string& name_key,
                                          const std::map<std::string, Schema>& schemas, const char* what,
                                          const std::vector<std::string>& extra = {}) {
  check_object(j, where);
  if (!j.contains(name_key) || !j[name_key].is_string()) throw ConfigError(where + ": missing '" + name_key + "'");
  std::string name = j[name_key];
  auto it = schemas.find(name);
  if (it == schemas.end()) {
    throw ConfigError(where + ": unknown " + what + " '" + name + "' (known: " + join(keys_of(schemas)) + ")");
  }
  Json params = Json::object();
  for (const auto& [key, value] : j.items()) {
    if (key != name_key && std::find(extra.begin(), extra.end(), key) == extra.end()) params[key] = value;
  }
  std::vector<std::string> allowed = it->second.required;
  allowed.insert(allowed.end(), it->second.optional.begin(), it->second.optional.end());
  check_keys(params, where + " (" + name + ")", allowed);
  for (const auto& key : it->second.required) {
    if (!params.contains(key)) throw ConfigError(where + " (" + name + "): missing '" + key + "'");
  }
  return {name, params};
}

std::uint64_t get_unsigned(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError("'" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Rational get_rational(const Json& j, const std::string& key) {
  try {
    return io::parse_rational_json(j.at(key));
  } catch (const std::exception& e) {
    throw ConfigError("'" + key + "' must be a rational: " + e.what());
  }
}

bool get_bool(const Json& j, const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) throw ConfigError("'" + key + "' must be true or false");
  return j[key];
}

std::vector<Rational> get_rationals(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_array()) throw ConfigError("'" + key + "' must be a list of rationals");
  std::vector<Rational> out;
  for (const auto& x : v) out.push_back(io::parse_rational_json(x));
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& path) {
  std::filesystem::path p(path);
  return p.is_relative() && !base.empty() ? base / p : p;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

InstanceSpec parse_instance_spec(const Json& j) {
  InstanceSpec spec;
  if (j.is_object() && j.contains("file")) {
    check_keys(j, "instance", {"file"});
    if (!j["file"].is_string()) throw ConfigError("instance: 'file' must be a path");
    spec.file = j["file"].get<std::string>();
    return spec;
  }
  std::tie(spec.generator, spec.params) = named_params(j, "instance", "generator", generator_schemas(), "generator");
  return spec;
}

PolicySpec parse_policy_spec(const Json& j, const std::string& where) {
  PolicySpec spec;
  std::tie(spec.name, spec.params) = named_params(j, where, "name", policy_schemas(), "policy", {"id"});
  spec.id = j.contains("id") ? j["id"].get<std::string>() : spec.name;
  if (spec.name == "enhanced" && spec.params.contains("base")) {
    std::string base = spec.params["base"];
    if (base != "blind_unlimited" && base != "blind_k") {
      throw ConfigError(where + " (enhanced): unknown base '" + base + "' (known: blind_k, blind_unlimited)");
    }
  }
  return spec;
}

Metric parse_metric(const std::string& name) {
  if (name == "revenue") return Metric::kRevenue;
  if (name == "revenue_over_lp") return Metric::kRevenueOverLp;
  if (name == "revenue_over_osw") return Metric::kRevenueOverOsw;
  throw ConfigError("unknown metric '" + name + "' (known: revenue, revenue_over_lp, revenue_over_osw)");
}

}  // namespace

std::string metric_name(Metric metric) {
  switch (metric) {
    case Metric::kRevenue: return "revenue";
    case Metric::kRevenueOverLp: return "revenue_over_lp";
    case Metric::kRevenueOverOsw: return "revenue_over_osw";
  }
  return "";
}

std::string Assertion::describe() const {
  std::string out = policy + " " + metric_name(metric);
  if (at_least) out += " >= " + spp::to_string(*at_least);
  if (at_most) out += (at_least ? " and <= " : " <= ") + spp::to_string(*at_most);
  return out;
}

const std::vector<std::string>& known_generators() {
  static const auto names = keys_of(generator_schemas());
  return names;
}

const std::vector<std::string>& known_policies() {
  static const auto names = keys_of(policy_schemas());
  return names;
}

const std::vector<std::string>& known_tables() {
  static const auto names = keys_of(table_schemas());
  return names;
}

ExperimentConfig parse_config(const Json& j, const std::filesystem::path& base_dir) {
  check_object(j, "config");
  check_keys(j, "config", {"id", "instance", "policies", "evaluation", "assertions", "table", "scope", "sweep",
                           "dependence"});
  ExperimentConfig config;
  config.base_dir = base_dir;
  if (j.contains("id")) config.id = j["id"].get<std::string>();
  if (j.contains("instance")) config.instance = parse_instance_spec(j["instance"]);

  std::set<std::string> ids;
  if (j.contains("policies")) {
    if (!j["policies"].is_array()) throw ConfigError("policies: expected a list");
    for (std::size_t t = 0; t < j["policies"].size(); ++t) {
      auto spec = parse_policy_spec(j["policies"][t], "policies[" + std::to_string(t) + "]");
      if (!ids.insert(spec.id).second) throw ConfigError("duplicate policy id '" + spec.id + "'");
      config.policies.push_back(std::move(spec));
    }
  }

  if (j.contains("evaluation")) {
    const Json& e = j["evaluation"];
    check_object(e, "evaluation");
    check_keys(e, "evaluation", {"mode", "trials", "seed"});
    std::string mode = e.value("mode", "exact");
    if (mode != "exact" && mode != "mc") throw ConfigError("evaluation: unknown mode '" + mode + "' (known: exact, mc)");
    config.evaluation.monte_carlo = mode == "mc";
    if (e.contains("trials")) config.evaluation.trials = get_unsigned(e, "trials");
    if (e.contains("seed")) config.evaluation.seed = get_unsigned(e, "seed");
    if (config.evaluation.trials == 0) throw ConfigError("evaluation: trials must be positive");
  }

  if (j.contains("assertions")) {
    if (!j["assertions"].is_array()) throw ConfigError("assertions: expected a list");
    for (const auto& a : j["assertions"]) {
      check_object(a, "assertion");
      check_keys(a, "assertion", {"policy", "metric", "at_least", "at_most"});
      Assertion assertion;
      assertion.policy = a.at("policy").get<std::string>();
      if (!ids.count(assertion.policy)) {
        throw ConfigError("assertion names unknown policy id '" + assertion.policy + "'");
      }
      assertion.metric = parse_metric(a.value("metric", "revenue"));
      if (a.contains("at_least")) assertion.at_least = get_rational(a, "at_least");
      if (a.contains("at_most")) assertion.at_most = get_rational(a, "at_most");
      if (!assertion.at_least && !assertion.at_most) throw ConfigError("assertion needs at_least or at_most");
      config.assertions.push_back(std::move(assertion));
    }
  }

  if (j.contains("table")) {
    const Json& t = j["table"];
    TableSpec spec;
    std::tie(spec.builder, spec.params) = named_params(t, "table", "builder", table_schemas(), "table builder");
    if (spec.builder == "file") spec.file = spec.params["path"].get<std::string>();
    if (spec.builder == "policy") {
      parse_policy_spec(spec.params["policy"], "table.policy");
      std::string coverage = spec.params.value("coverage", "support");
      if (coverage != "support" && coverage != "product") {
        throw ConfigError("table: unknown coverage '" + coverage + "' (known: product, support)");
      }
    }
    config.table = std::move(spec);
  }

  if (j.contains("scope")) {
    std::string scope = j["scope"];
    if (scope == "full") {
      config.scope = eval::DeviationScope::kFull;
    } else if (scope == "conditional") {
      config.scope = eval::DeviationScope::kConditional;
    } else {
      throw ConfigError("unknown scope '" + scope + "' (known: conditional, full)");
    }
  }

  if (j.contains("sweep")) {
    const Json& s = j["sweep"];
    check_object(s, "sweep");
    check_keys(s, "sweep", {"parameter", "values"});
    SweepSpec sweep;
    sweep.parameter = s.at("parameter").get<std::string>();
    if (!s.at("values").is_array() || s["values"].empty()) throw ConfigError("sweep: values must be a nonempty list");
    for (const auto& v : s["values"]) sweep.values.push_back(v);
    if (!config.instance || !config.instance->file.empty()) throw ConfigError("sweep: needs a generator instance");
    const auto& schema = generator_schemas().at(config.instance->generator);
    std::vector<std::string> allowed = schema.required;
    allowed.insert(allowed.end(), schema.optional.begin(), schema.optional.end());
    if (std::find(allowed.begin(), allowed.end(), sweep.parameter) == allowed.end()) {
      throw ConfigError("sweep: generator '" + config.instance->generator + "' has no parameter '" + sweep.parameter +
                        "' (known: " + join(allowed) + ")");
    }
    config.sweep = std::move(sweep);
  }

  config.dependence = get_bool(j, "dependence", false);
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_json_file(path), path.parent_path());
}

valuation::Instance build_instance(const InstanceSpec& spec, const std::filesystem::path& base_dir,
                                   std::uint64_t seed) {
  if (!spec.file.empty()) {
    auto path = resolve(base_dir, spec.file.string());
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open instance file '" + path.string() + "'");
    std::stringstream text;
    text << in.rdbuf();
    return io::parse_instance(text.str());
  }
  const Json& p = spec.params;
  const std::string& g = spec.generator;
  if (g == "harmonic") return valuation::gen_harmonic(static_cast<unsigned>(get_unsigned(p, "m")));
  if (g == "correlated_pair") {
    return valuation::gen_correlated_pair(static_cast<unsigned>(get_unsigned(p, "m")), get_unsigned(p, "k"));
  }
  if (g == "modular") {
    return valuation::gen_modular(get_unsigned(p, "n"), static_cast<unsigned>(get_unsigned(p, "m")),
                                  get_rational(p, "eps"));
  }
  if (g == "expert_noise") {
    std::size_t n = get_unsigned(p, "n");
    auto values = valuation::ScalarDistribution::uniform(get_rationals(p, "values"));
    auto noise = valuation::ScalarDistribution::uniform(get_rationals(p, "noise"));
    std::vector<valuation::Channel> channels(n == 0 ? 0 : n - 1, valuation::additive_noise(noise));
    std::optional<std::size_t> k;
    if (p.contains("k")) k = get_unsigned(p, "k");
    return valuation::gen_expert_noise(n, values, channels, p.contains("expert") ? get_unsigned(p, "expert") : 0, k);
  }
  if (g == "product") {
    std::vector<valuation::ScalarDistribution> marginals;
    if (!p["marginals"].is_array()) throw ConfigError("'marginals' must be a list of value lists");
    for (const auto& values : p["marginals"]) {
      std::vector<Rational> row;
      for (const auto& x : values) row.push_back(io::parse_rational_json(x));
      marginals.push_back(valuation::ScalarDistribution::uniform(row));
    }
    return valuation::gen_product(marginals, get_unsigned(p, "k"));
  }
  if (g == "random") {
    return valuation::gen_random(get_unsigned(p, "n"), get_unsigned(p, "size"), get_rationals(p, "grid"),
                                 get_unsigned(p, "k"), p.contains("seed") ? get_unsigned(p, "seed") : seed);
  }
  throw ConfigError("unknown generator '" + g + "' (known: " + join(known_generators()) + ")");
}

mech::Policy build_policy(const PolicySpec& spec, const valuation::Instance& instance,
                          const std::filesystem::path& base_dir) {
  const Json& p = spec.params;
  const std::string& name = spec.name;
  auto blind_k = [&] { return mech::build_blind_k(instance, lp::solve_simplex(lp::build_revenue_lp(instance))); };
  if (name == "blind_unlimited") return mech::build_blind_unlimited(instance);
  if (name == "blind_k") {
    auto policy = blind_k();
    return get_bool(p, "dsic", false) ? mech::make_dsic(policy, instance.pi) : policy;
  }
  if (name == "fixed_price") return mech::fixed_price_policy(instance.n, instance.k, get_rational(p, "price"));
  if (name == "best_fixed_price") {
    return mech::fixed_price_policy(instance.n, instance.k, eval::best_fixed_price(instance).price);
  }
  if (name == "bucketed_unit") {
    std::optional<mech::PriceWindow> window;
    if (p.contains("low") || p.contains("high")) {
      if (!p.contains("low") || !p.contains("high")) throw ConfigError("bucketed_unit: give both low and high");
      window = mech::PriceWindow{get_rational(p, "low"), get_rational(p, "high")};
    }
    return mech::build_bucketed_spp_unit(instance.pi, window);
  }
  if (name == "bucketed_unlimited") return mech::build_bucketed_spp_unlimited(instance.pi);
  if (name == "bucketed_klimited") {
    return mech::build_bucketed_spp_klimited(instance.pi, instance.k, get_bool(p, "well_separated", false));
  }
  if (name == "enhanced") {
    auto cert = valuation::dependence_dimension(instance.pi);
    if (!cert) throw ConfigError("enhanced: no dependence certificate for this instance");
    auto base = p.value("base", "blind_unlimited") == "blind_k" ? blind_k() : mech::build_blind_unlimited(instance);
    std::optional<Rational> q;
    if (p.contains("q")) q = get_rational(p, "q");
    return mech::build_enhanced(base, *cert, q);
  }
  if (name == "file") return io::parse_policy_json(read_json_file(resolve(base_dir, p["path"].get<std::string>())));
  throw ConfigError("unknown policy '" + name + "' (known: " + join(known_policies()) + ")");
}

std::optional<valuation::Instance> implied_instance(const TableSpec& spec) {
  if (spec.builder != "modular_full_surplus") return std::nullopt;
  return valuation::gen_modular(get_unsigned(spec.params, "n"), static_cast<unsigned>(get_unsigned(spec.params, "m")),
                                get_rational(spec.params, "eps"));
}

mech::DirectMechanismTable build_table(const TableSpec& spec, const valuation::Instance& instance,
                                       const std::filesystem::path& base_dir) {
  const Json& p = spec.params;
  if (spec.builder == "modular_full_surplus") {
    return mech::build_modular_full_surplus(get_unsigned(p, "n"), static_cast<unsigned>(get_unsigned(p, "m")),
                                            get_rational(p, "eps"));
  }
  if (spec.builder == "pay_your_bid") return mech::build_pay_your_bid(instance.pi);
  if (spec.builder == "policy") {
    auto policy = build_policy(parse_policy_spec(p["policy"], "table.policy"), instance, base_dir);
    auto coverage = p.value("coverage", "support") == "product" ? eval::TableCoverage::kProduct
                                                                : eval::TableCoverage::kSupport;
    return eval::expected_form_table(policy, instance.pi, coverage);
  }
  if (spec.builder == "file") return io::parse_table_json(read_json_file(resolve(base_dir, spec.file.string())));
  throw ConfigError("unknown table builder '" + spec.builder + "' (known: " + join(known_tables()) + ")");
}

}  // namespace spp::cli
