#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spp/io.hpp"
#include "spp/mechanisms.hpp"
#include "spp/valuation.hpp"

namespace spp::cli {

using io::Json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Either a generator with parameters or {"file": path}.
struct InstanceSpec {
  std::string generator;
  Json params = Json::object();
  std::filesystem::path file;
};

struct PolicySpec {
  std::string id;
  std::string name;
  Json params = Json::object();
};

enum class Metric { kRevenue, kRevenueOverLp, kRevenueOverOsw };

std::string metric_name(Metric metric);

struct Assertion {
  std::string policy;
  Metric metric = Metric::kRevenue;
  std::optional<Rational> at_least;
  std::optional<Rational> at_most;

  std::string describe() const;
};

struct EvaluationSpec {
  bool monte_carlo = false;
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
};

struct TableSpec {
  std::string builder;
  Json params = Json::object();
  std::filesystem::path file;
};

struct SweepSpec {
  std::string parameter;
  std::vector<Json> values;
};

struct ExperimentConfig {
  std::string id = "experiment";
  std::optional<InstanceSpec> instance;
  std::vector<PolicySpec> policies;
  EvaluationSpec evaluation;
  std::vector<Assertion> assertions;
  std::optional<TableSpec> table;
  eval::DeviationScope scope = eval::DeviationScope::kFull;
  std::optional<SweepSpec> sweep;
  bool dependence = false;
  std::filesystem::path base_dir;  // relative file paths resolve against this
};

const std::vector<std::string>& known_generators();
const std::vector<std::string>& known_policies();
const std::vector<std::string>& known_tables();

// Names, keys and shapes are checked here; parameter values are checked by
// the builders below.
ExperimentConfig parse_config(const Json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// seed is used by generators that take one and do not set it themselves.
valuation::Instance build_instance(const InstanceSpec& spec, const std::filesystem::path& base_dir,
                                   std::uint64_t seed);

mech::Policy build_policy(const PolicySpec& spec, const valuation::Instance& instance,
                          const std::filesystem::path& base_dir);

// The instance a table builder implies when the config gives none.
std::optional<valuation::Instance> implied_instance(const TableSpec& spec);

mech::DirectMechanismTable build_table(const TableSpec& spec, const valuation::Instance& instance,
                                       const std::filesystem::path& base_dir);

}  // namespace spp::cli
