#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "spp/dependence.hpp"
#include "spp/evaluation.hpp"
#include "spp/generators.hpp"

namespace spp::cli {

namespace {

namespace fs = std::filesystem;

struct Run {
  const ExperimentConfig& config;
  const Options& options;
  std::ostream& log;
  Json summary = Json::object();
  std::vector<std::string> outputs;
  std::vector<std::string> notes;

  std::uint64_t seed() const { return options.seed.value_or(config.evaluation.seed); }

  void write(const std::string& name, const std::string& text) {
    fs::path path = options.out / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    outputs.push_back(name);
    if (options.verbose) log << "wrote " << path.string() << '\n';
  }

  void note(const std::string& text) {
    notes.push_back(text);
    log << "note: " << text << '\n';
  }
};

std::string decimal(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", x);
  return buffer;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

valuation::Instance require_instance(const Run& run) {
  if (!run.config.instance) throw ConfigError("this command needs an 'instance'");
  return build_instance(*run.config.instance, run.config.base_dir, run.seed());
}

std::vector<eval::NamedPolicy> build_policies(const Run& run, const valuation::Instance& instance) {
  if (run.config.policies.empty()) throw ConfigError("this command needs at least one entry in 'policies'");
  std::vector<eval::NamedPolicy> out;
  for (const auto& spec : run.config.policies) {
    if (run.options.verbose) run.log << "building policy " << spec.id << '\n';
    out.push_back({spec.id, build_policy(spec, instance, run.config.base_dir)});
  }
  return out;
}

eval::ReportOptions report_options(const Run& run) {
  return {run.config.evaluation.monte_carlo, run.config.evaluation.trials, run.seed()};
}

void note_fallbacks(Run& run, const eval::ReportSet& set) {
  if (run.config.evaluation.monte_carlo) return;
  for (const auto& row : set.rows) {
    if (row.exact_revenue) continue;
    run.note(set.instance_id + "/" + row.mechanism_id +
             ": exact evaluation exceeds capacity (more than " + std::to_string(eval::kEnumerationThreshold) +
             " buyers to partition); reported a Monte Carlo estimate instead. Set evaluation.mode to \"mc\" to request "
             "it directly.");
  }
}

struct Checked {
  Json json;
  bool holds = true;
};

std::optional<Rational> exact_metric(const eval::RevenueReport& row, Metric metric) {
  switch (metric) {
    case Metric::kRevenue: return row.exact_revenue;
    case Metric::kRevenueOverLp: return row.ratio_lp;
    case Metric::kRevenueOverOsw: return row.ratio_osw;
  }
  return std::nullopt;
}

double decimal_metric(const eval::RevenueReport& row, Metric metric) {
  switch (metric) {
    case Metric::kRevenue: return row.revenue_decimal();
    case Metric::kRevenueOverLp: return row.ratio_lp_decimal;
    case Metric::kRevenueOverOsw: return row.ratio_osw_decimal;
  }
  return 0;
}

// Exact rows compare exactly; Monte Carlo rows compare the sample mean.
Checked check_assertion(const Assertion& a, const eval::RevenueReport& row) {
  Checked out;
  auto exact = exact_metric(row, a.metric);
  double value = decimal_metric(row, a.metric);
  bool has_ratio = a.metric == Metric::kRevenue || row.exact_revenue.has_value() == exact.has_value();
  if (exact) {
    if (a.at_least && *exact < *a.at_least) out.holds = false;
    if (a.at_most && *exact > *a.at_most) out.holds = false;
  } else if (!has_ratio) {
    out.holds = false;  // ratio against a zero benchmark
  } else {
    if (a.at_least && value < to_double(*a.at_least)) out.holds = false;
    if (a.at_most && value > to_double(*a.at_most)) out.holds = false;
  }
  out.json = {{"assertion", a.describe()},
              {"instance", row.instance_id},
              {"value", decimal(value)},
              {"value_exact", exact ? Json(to_string(*exact)) : Json(nullptr)},
              {"holds", out.holds}};
  return out;
}

// Returns true iff every assertion that names a row in the set held.
bool check_assertions(Run& run, const std::vector<eval::ReportSet>& sets, Json& results) {
  bool all = true;
  for (const auto& a : run.config.assertions) {
    for (const auto& set : sets) {
      for (const auto& row : set.rows) {
        if (row.mechanism_id != a.policy) continue;
        auto checked = check_assertion(a, row);
        if (!checked.holds) {
          all = false;
          run.log << "assertion failed: " << a.describe() << " on " << row.instance_id << " (value "
                  << checked.json["value"].get<std::string>() << ")\n";
        }
        results.push_back(std::move(checked.json));
      }
    }
  }
  return all;
}

int cmd_generate(Run& run) {
  auto instance = require_instance(run);
  run.write("instance.json", io::serialize_instance(instance));
  auto stats = valuation::support_stats(instance.pi, instance.k);
  run.summary["n"] = instance.n;
  run.summary["k"] = instance.k;
  run.summary["support_size"] = instance.pi.size();
  run.summary["stats"] = io::stats_json(stats);
  run.log << "instance: n=" << instance.n << " k=" << instance.k << " support=" << instance.pi.size()
          << " v_max=" << to_string(stats.v_max) << '\n';
  if (run.config.dependence) {
    auto cert = valuation::dependence_dimension(instance.pi);
    run.summary["dependence"] = cert ? io::certificate_json(*cert) : Json(nullptr);
    if (cert) run.log << "dependence dimension: " << cert->d << '\n';
  }
  return kOk;
}

int cmd_evaluate(Run& run) {
  auto instance = require_instance(run);
  auto policies = build_policies(run, instance);
  Json saved = Json::object();
  for (const auto& named : policies) saved[named.id] = io::policy_json(named.policy);
  run.write("policies.json", saved.dump(2) + "\n");

  auto set = eval::ratio_report(run.config.id, instance, policies, report_options(run));
  note_fallbacks(run, set);
  if (run.options.format == Format::kCsv) {
    std::ostringstream out;
    eval::write_csv(out, set);
    run.write("report.csv", out.str());
  } else {
    run.write("report.json", io::report_json(set).dump(2) + "\n");
  }
  for (const auto& row : set.rows) {
    run.log << row.mechanism_id << ": revenue " << decimal(row.revenue_decimal()) << ", ratio to LP "
            << decimal(row.ratio_lp_decimal) << ", ratio to OSW " << decimal(row.ratio_osw_decimal) << '\n';
  }
  run.summary["report"] = io::report_json(set);
  Json results = Json::array();
  bool ok = check_assertions(run, {set}, results);
  run.summary["assertions"] = results;
  return ok ? kOk : kFired;
}

std::string findings_csv(const std::vector<eval::AuditFinding>& findings) {
  std::string out = "kind,buyer,truthful,deviation,gap,gap_exact\n";
  for (const auto& f : findings) {
    out += eval::to_string(f.kind) + ',' + std::to_string(f.buyer) + ',' +
           csv_field(valuation::format_valuation(f.truthful)) + ',' +
           (f.deviation ? csv_field(valuation::format_valuation(*f.deviation)) : "") + ',' + to_decimal(f.gap) +
           ',' + to_string(f.gap) + '\n';
  }
  return out;
}

int cmd_audit(Run& run) {
  if (!run.config.table) throw ConfigError("audit needs a 'table'");
  std::optional<valuation::Instance> instance;
  if (run.config.instance) {
    instance = require_instance(run);
  } else {
    instance = implied_instance(*run.config.table);
    if (!instance) throw ConfigError("table builder '" + run.config.table->builder + "' needs an 'instance'");
  }
  auto table = build_table(*run.config.table, *instance, run.config.base_dir);
  if (auto problem = mech::check_table(table)) throw std::invalid_argument("malformed table: " + *problem);

  std::vector<eval::AuditFinding> findings;
  Json counts = Json::object();
  auto add = [&](const char* name, std::vector<eval::AuditFinding> found) {
    counts[name] = found.size();
    findings.insert(findings.end(), found.begin(), found.end());
  };
  add("dsic", eval::audit_dsic(table, instance->pi, run.config.scope));
  add("expost_ir", eval::audit_expost_ir(table, instance->pi));
  add("monotone_allocation", eval::audit_monotone_allocation(table, instance->pi));
  add("price_bound", eval::audit_price_bound(table, instance->pi));

  if (run.options.format == Format::kCsv) {
    run.write("findings.csv", findings_csv(findings));
  } else {
    Json list = Json::array();
    for (const auto& f : findings) list.push_back(io::finding_json(f));
    run.write("findings.json", list.dump(2) + "\n");
  }
  run.summary["table_entries"] = table.entries.size();
  run.summary["scope"] = run.config.scope == eval::DeviationScope::kFull ? "full" : "conditional";
  run.summary["findings"] = counts;
  for (const auto& [name, count] : counts.items()) run.log << name << ": " << count.get<std::size_t>() << " findings\n";
  return findings.empty() ? kOk : kFired;
}

std::string sweep_label(const Json& value) { return value.is_string() ? value.get<std::string>() : value.dump(); }

int cmd_report(Run& run) {
  if (!run.config.instance) throw ConfigError("report needs an 'instance'");
  std::vector<Json> values;
  std::string parameter;
  if (run.config.sweep) {
    parameter = run.config.sweep->parameter;
    values = run.config.sweep->values;
  } else {
    values.push_back(nullptr);
  }
  std::vector<eval::ReportSet> sets;
  std::vector<std::string> labels;
  for (const auto& value : values) {
    InstanceSpec spec = *run.config.instance;
    std::string id = run.config.id;
    std::string label;
    if (!value.is_null()) {
      spec.params[parameter] = value;
      label = sweep_label(value);
      id += " " + parameter + "=" + label;
    }
    if (run.options.verbose) run.log << "evaluating " << id << '\n';
    auto instance = build_instance(spec, run.config.base_dir, run.seed());
    sets.push_back(eval::ratio_report(id, instance, build_policies(run, instance), report_options(run)));
    labels.push_back(label);
    note_fallbacks(run, sets.back());
  }

  std::string key = parameter.empty() ? "point" : parameter;
  if (run.options.format == Format::kCsv) {
    std::string text;
    for (std::size_t t = 0; t < sets.size(); ++t) {
      std::ostringstream out;
      eval::write_csv(out, sets[t]);
      std::istringstream lines(out.str());
      std::string line;
      bool header = true;
      while (std::getline(lines, line)) {
        if (header) {
          if (t == 0) text += key + ',' + line + '\n';
          header = false;
          continue;
        }
        text += csv_field(labels[t]) + ',' + line + '\n';
      }
    }
    run.write("report.csv", text);
  } else {
    Json list = Json::array();
    for (std::size_t t = 0; t < sets.size(); ++t) {
      Json entry = io::report_json(sets[t]);
      entry[key] = labels[t];
      list.push_back(std::move(entry));
    }
    run.write("report.json", list.dump(2) + "\n");
  }

  std::string plot = "# " + key + " policy revenue osw ratio_osw lp_bound ratio_lp\n";
  for (std::size_t t = 0; t < sets.size(); ++t) {
    for (const auto& row : sets[t].rows) {
      plot += (labels[t].empty() ? "-" : labels[t]) + ' ' + row.mechanism_id + ' ' + decimal(row.revenue_decimal()) +
              ' ' + to_decimal(row.osw) + ' ' + decimal(row.ratio_osw_decimal) + ' ' + to_decimal(row.lp_bound) +
              ' ' + decimal(row.ratio_lp_decimal) + '\n';
    }
  }
  run.write("plot.dat", plot);

  Json rows = Json::array();
  for (std::size_t t = 0; t < sets.size(); ++t) {
    for (const auto& row : sets[t].rows) {
      rows.push_back({{key, labels[t]},
                      {"policy", row.mechanism_id},
                      {"revenue", decimal(row.revenue_decimal())},
                      {"osw", to_string(row.osw)},
                      {"ratio_osw", row.ratio_osw ? Json(to_string(*row.ratio_osw)) : Json(decimal(row.ratio_osw_decimal))}});
      run.log << (labels[t].empty() ? "" : key + "=" + labels[t] + " ") << row.mechanism_id << ": ratio to OSW "
              << decimal(row.ratio_osw_decimal) << '\n';
    }
  }
  run.summary["rows"] = rows;
  Json results = Json::array();
  bool ok = check_assertions(run, sets, results);
  run.summary["assertions"] = results;
  return ok ? kOk : kFired;
}

const std::map<std::string, std::function<int(Run&)>>& commands() {
  static const std::map<std::string, std::function<int(Run&)>> table{
      {"audit", cmd_audit}, {"evaluate", cmd_evaluate}, {"generate", cmd_generate}, {"report", cmd_report}};
  return table;
}

std::string status_of(int code) {
  switch (code) {
    case kOk: return "ok";
    case kFired: return "fired";
    case kConfigInvalid: return "config-error";
    default: return "error";
  }
}

void write_summary(const Options& options, const std::string& command, Json summary, int code,
                   const std::vector<std::string>& outputs, const std::vector<std::string>& notes,
                   const std::string& error, std::ostream& log) {
  Json out = {{"command", command}, {"status", status_of(code)}, {"exit_code", code}};
  if (!error.empty()) out["error"] = error;
  out["outputs"] = outputs;
  out["notes"] = notes;
  for (auto& [key, value] : summary.items()) out[key] = value;
  std::error_code ec;
  fs::create_directories(options.out, ec);
  std::ofstream file(options.out / "summary.json", std::ios::binary);
  if (!file) {
    log << "error: cannot write summary to '" << (options.out / "summary.json").string() << "'\n";
    return;
  }
  file << out.dump(2) << '\n';
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> names{"audit", "evaluate", "generate", "report"};
  return names;
}

int run_command(const std::string& command, const ExperimentConfig& config, const Options& options,
                std::ostream& log) {
  Run run{config, options, log, Json::object(), {}, {}};
  int code = kOk;
  std::string error;
  try {
    auto it = commands().find(command);
    if (it == commands().end()) throw ConfigError("unknown command '" + command + "'");
    fs::create_directories(options.out);
    code = it->second(run);
  } catch (const ConfigError& e) {
    code = kConfigInvalid;
    error = e.what();
  } catch (const eval::CapacityError& e) {
    code = kRuntimeError;
    error = std::string(e.what()) + " (hint: set evaluation.mode to \"mc\" for a Monte Carlo estimate)";
  } catch (const std::exception& e) {
    code = kRuntimeError;
    error = e.what();
  }
  if (!error.empty()) log << "error: " << error << '\n';
  write_summary(options, command, run.summary, code, run.outputs, run.notes, error, log);
  return code;
}

int run_command(const std::string& command, const Options& options, std::ostream& log) {
  ExperimentConfig config;
  try {
    config = load_config(options.config);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    write_summary(options, command, Json::object(), kConfigInvalid, {}, {}, e.what(), log);
    return kConfigInvalid;
  }
  return run_command(command, config, options, log);
}

}  // namespace spp::cli
