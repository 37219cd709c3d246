// Command-line front end. Talks to the library through the C interface only.

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "decisive/decisive.h"

namespace {

using json = nlohmann::ordered_json;

struct Options {
  std::string model_path;
  std::string eps;
  std::uint64_t budget = 1'000'000;
  std::vector<std::string> targets;
  std::string side;
  bool auto_total = false;
  bool auto_selfloop = false;
  std::uint64_t seed = 0;
  bool json_output = false;
  bool print_model = false;
  std::uint64_t bound = 20;
  std::uint64_t gap_cap = 16;
  std::uint64_t state_limit = 200'000;
  std::uint64_t runs = 10'000;
  std::uint64_t horizon = 1'000;
};

int report_error(decisive_status status) {
  std::cerr << "error [" << decisive_status_name(status) << "]: " << decisive_last_error() << "\n";
  return 1;
}

std::string scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void print_object(const json& obj, const std::string& indent) {
  for (const auto& [key, value] : obj.items()) {
    if (value.is_object()) {
      std::cout << indent << key << ":\n";
      print_object(value, indent + "  ");
    } else if (value.is_array()) {
      std::cout << indent << key << ":";
      for (const auto& item : value) std::cout << " [" << scalar(item) << "]";
      std::cout << "\n";
    } else {
      std::cout << indent << key << ": " << scalar(value) << "\n";
    }
  }
}

void print_human(const json& doc) {
  const json& model = doc["model"];
  std::cout << "model: " << scalar(model["kind"]) << " (" << scalar(model["states"]) << " states, "
            << scalar(model["transitions"]) << " transitions)\n";
  std::cout << "query: " << scalar(doc["query"]["kind"]) << "\n";
  for (const auto& [key, value] : doc["query"].items()) {
    if (key == "kind") continue;
    if (value.is_array()) {
      for (const auto& item : value) std::cout << "  " << key << ": " << scalar(item) << "\n";
    } else {
      std::cout << "  " << key << ": " << scalar(value) << "\n";
    }
  }
  std::cout << "result:\n";
  print_object(doc["result"], "  ");
  std::cout << "wall time: " << doc["timing"]["wall_ms"].get<double>() << " ms\n";
}

int run(decisive_query_kind kind, const Options& opt) {
  unsigned flags = 0;
  if (opt.auto_selfloop) flags |= DECISIVE_PARSE_AUTO_SELFLOOP;
  if (opt.auto_total) flags |= DECISIVE_PARSE_AUTO_TOTAL;

  decisive_model* model = nullptr;
  decisive_status status = decisive_model_load_file(opt.model_path.c_str(), flags, &model);
  if (status != DECISIVE_OK) return report_error(status);

  if (opt.print_model) {
    char* text = nullptr;
    status = decisive_model_print(model, &text);
    if (status != DECISIVE_OK) {
      decisive_model_free(model);
      return report_error(status);
    }
    std::cout << text;
    decisive_string_free(text);
    decisive_model_free(model);
    return 0;
  }

  decisive_query query;
  decisive_query_init(&query);
  query.kind = kind;
  if (opt.side == "one") query.side = DECISIVE_SIDE_ONE;
  if (opt.side == "zero") query.side = DECISIVE_SIDE_ZERO;
  if (!opt.eps.empty()) query.eps = opt.eps.c_str();
  query.budget = opt.budget;
  std::vector<const char*> targets;
  for (const auto& t : opt.targets) targets.push_back(t.c_str());
  query.targets = targets.data();
  query.num_targets = targets.size();
  query.seed = opt.seed;
  query.bound = opt.bound;
  query.gap_cap = opt.gap_cap;
  query.state_limit = opt.state_limit;
  query.runs = opt.runs;
  query.horizon = opt.horizon;

  char* report = nullptr;
  int exit_code = 1;
  status = decisive_run(model, &query, &report, &exit_code);
  decisive_model_free(model);
  if (status != DECISIVE_OK) return report_error(status);

  if (opt.json_output) {
    std::cout << report << "\n";
  } else {
    print_human(json::parse(report));
  }
  decisive_string_free(report);
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qualitative and approximate quantitative (repeated) reachability for PVASS, PLCS and PNTM models"};
  app.set_version_flag("--version", std::string(decisive_version()));
  app.require_subcommand(1);

  Options opt;
  const std::map<std::string, decisive_query_kind> kinds = {
      {"validate", DECISIVE_QUERY_VALIDATE},         {"qual-reach", DECISIVE_QUERY_QUAL_REACH},
      {"qual-repeat", DECISIVE_QUERY_QUAL_REPEAT},   {"approx-reach", DECISIVE_QUERY_APPROX_REACH},
      {"approx-repeat", DECISIVE_QUERY_APPROX_REPEAT}, {"certify", DECISIVE_QUERY_CERTIFY},
      {"oracle", DECISIVE_QUERY_ORACLE},             {"simulate", DECISIVE_QUERY_SIMULATE},
  };
  const std::map<std::string, std::string> help = {
      {"validate", "Parse and validate a model"},
      {"qual-reach", "Decide whether P(reach F) is 1 or 0"},
      {"qual-repeat", "Decide whether P(visit F infinitely often) is 1 or 0"},
      {"approx-reach", "Approximate P(reach F) within eps"},
      {"approx-repeat", "Approximate P(visit F infinitely often) within eps"},
      {"certify", "Print a decisiveness certificate"},
      {"oracle", "Exact probabilities on a bounded truncation"},
      {"simulate", "Monte Carlo estimate of P(reach F)"},
  };

  std::map<CLI::App*, decisive_query_kind> by_app;
  for (const auto& [name, kind] : kinds) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    by_app[sub] = kind;
    sub->add_option("model", opt.model_path, "Model file")->required()->check(CLI::ExistingFile);
    sub->add_option("--target", opt.targets, "Target clause, e.g. \"q s1\" or \"up s1 x>=2\" (repeatable)");
    sub->add_flag("--auto-total", opt.auto_total, "Complete missing pntm (state, read) rows with stay-put loops");
    sub->add_flag("--auto-selfloop", opt.auto_selfloop, "Repair deadlocking control states with nop self-loops");
    sub->add_flag("--json", opt.json_output, "Emit the JSON report");
    if (name == "validate") sub->add_flag("--print", opt.print_model, "Print the model in canonical form");
    if (name == "qual-reach" || name == "qual-repeat") {
      sub->add_option("--side", opt.side, "Probability side")->required()->check(CLI::IsMember({"one", "zero"}));
    }
    if (name == "approx-reach" || name == "approx-repeat") {
      sub->add_option("--eps", opt.eps, "Precision as a fraction, e.g. 1/100")->required();
      sub->add_option("--budget", opt.budget, "Maximum number of state expansions")->capture_default_str();
    }
    if (name == "oracle") {
      sub->add_option("--bound", opt.bound, "Counter / channel length / tape cell bound")->capture_default_str();
      sub->add_option("--gap-cap", opt.gap_cap, "pntm: cap on cell gaps")->capture_default_str();
      sub->add_option("--state-limit", opt.state_limit, "Maximum number of enumerated states")->capture_default_str();
    }
    if (name == "simulate") {
      sub->add_option("--runs", opt.runs, "Number of runs")->capture_default_str();
      sub->add_option("--horizon", opt.horizon, "Maximum run length")->capture_default_str();
      sub->add_option("--seed", opt.seed, "Seed for mt19937_64")->capture_default_str();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  for (const auto& [sub, kind] : by_app) {
    if (sub->parsed()) return run(kind, opt);
  }
  return 1;
}
