#include "pandora/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "pandora/errors.hpp"
#include "pandora/parallel.hpp"

namespace pandora {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> parts;
  std::string current;
  for (char ch : s) {
    if (ch == ',') {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  parts.push_back(trim(current));
  if (parts.size() == 1 && parts[0].empty()) parts.clear();
  return parts;
}

double parse_double(const std::string& text, std::string_view key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw DomainError("invalid number '" + text + "' for " + std::string(key));
  }
}

std::int64_t parse_int(const std::string& text, std::string_view key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw DomainError("invalid integer '" + text + "' for " + std::string(key));
  }
}

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || text.starts_with('-')) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw DomainError("invalid seed '" + text + "'");
  }
}

bool parse_bool(const std::string& text, std::string_view key) {
  if (text == "true" || text == "on" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "off" || text == "no" || text == "0") return false;
  throw DomainError("invalid flag value '" + text + "' for " + std::string(key));
}

std::optional<DiamondParams> parse_diamond(const std::string& text) {
  if (text.empty() || text == "none") return std::nullopt;
  const auto parts = split_list(text);
  if (parts.size() != 2) throw DomainError("diamond expects 'P,D', got '" + text + "'");
  return DiamondParams{parse_double(parts[0], "diamond p"), parse_double(parts[1], "diamond D")};
}

std::vector<std::int64_t> parse_grid(const std::string& text) {
  std::vector<std::int64_t> grid;
  for (const auto& part : split_list(text)) grid.push_back(parse_int(part, "rounds_grid"));
  return grid;
}

// Distinct values in order of first appearance.
template <class F>
std::vector<double> distinct(const std::vector<WorldConfig>& configs, F field) {
  std::vector<double> values;
  for (const auto& c : configs) {
    const double v = field(c);
    if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
  }
  return values;
}

std::vector<WorldConfig> expand(const WorldConfig& base, const std::vector<double>& costs,
                                const std::vector<double>& sigmas) {
  std::vector<WorldConfig> configs;
  for (double c : costs) {
    for (double s : sigmas) {
      WorldConfig w = base;
      w.cost = c;
      w.sigma = s;
      configs.push_back(w);
    }
  }
  return configs;
}

json config_to_json(const WorldConfig& c) {
  json j;
  j["sigma"] = c.sigma;
  j["cost"] = c.cost;
  j["rounds"] = c.rounds;
  j["model"] = std::string(to_string(c.model));
  j["diamond"] = c.diamond ? json{{"p", c.diamond->p}, {"D", c.diamond->jump}} : json(nullptr);
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  j["common_random_numbers"] = c.common_random_numbers;
  j["utility_convention"] = std::string(to_string(c.utility_convention));
  j["step_cap"] = c.step_cap;
  return j;
}

WorldConfig config_from_json(const json& j) {
  WorldConfig c;
  c.sigma = j.at("sigma").get<double>();
  c.cost = j.at("cost").get<double>();
  c.rounds = j.at("rounds").get<std::int64_t>();
  c.model = parse_information_model(j.at("model").get<std::string>());
  if (j.contains("diamond") && !j.at("diamond").is_null()) {
    c.diamond = DiamondParams{j.at("diamond").at("p").get<double>(),
                              j.at("diamond").at("D").get<double>()};
  }
  c.runs = j.at("runs").get<std::int64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.common_random_numbers = j.value("common_random_numbers", true);
  c.utility_convention =
      parse_utility_convention(j.value("utility_convention", std::string("outside-option")));
  c.step_cap = j.value("step_cap", kDefaultStepCap);
  return c;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

// ---------------------------------------------------------------------------

void ExperimentPreset::validate() const {
  if (name.empty()) throw DomainError("experiment name must not be empty");
  if (configs.empty()) throw DomainError("experiment has no world configurations");
  for (const auto& c : configs) c.validate();
  for (std::size_t i = 0; i < rounds_grid.size(); ++i) {
    if (rounds_grid[i] < 1) throw DomainError("rounds_grid entries must be >= 1");
    if (i > 0 && rounds_grid[i] <= rounds_grid[i - 1]) {
      throw DomainError("rounds_grid must be strictly increasing");
    }
  }
  for (const auto& c : configs) {
    if (grid_for(c).empty()) throw DomainError("rounds_grid has no checkpoint <= rounds");
  }
}

std::vector<std::int64_t> ExperimentPreset::grid_for(const WorldConfig& config) const {
  if (rounds_grid.empty()) return geometric_grid(config.rounds);
  std::vector<std::int64_t> grid;
  for (auto t : rounds_grid) {
    if (t <= config.rounds) grid.push_back(t);
  }
  return grid;
}

std::vector<std::string> preset_names() {
  return {"figure1-c01", "figure1-c02", "diamond-demo", "bounds-grid"};
}

ExperimentPreset builtin_preset(std::string_view name) {
  ExperimentPreset preset;
  preset.name = std::string(name);
  WorldConfig base;
  base.model = InformationModel::RevealedQuality;
  base.common_random_numbers = true;
  base.seed = 20190101;
  if (name == "figure1-c01" || name == "figure1-c02") {
    base.rounds = 100;
    base.runs = 100'000;
    const double cost = name == "figure1-c01" ? 0.1 : 0.2;
    preset.configs = expand(base, {cost}, {0.0, 0.25, 0.5, 0.75, 1.0});
    return preset;
  }
  if (name == "diamond-demo") {
    base.rounds = 5000;
    base.runs = 2000;
    base.diamond = DiamondParams{0.002, 100.0};
    preset.configs = expand(base, {0.3}, {0.0, 0.5, 1.0});
    return preset;
  }
  if (name == "bounds-grid") {
    base.rounds = 100'000;
    base.runs = 200;
    preset.configs = expand(base, {0.1, 0.2}, {0.25, 0.5, 0.75});
    preset.check_bounds = true;
    return preset;
  }
  throw DomainError("unknown preset '" + std::string(name) + "'");
}

ExperimentPreset parse_config_text(std::string_view text) {
  ExperimentPreset preset;
  preset.configs.clear();
  struct Section {
    WorldConfig base;
    std::vector<double> sigmas;
    std::vector<double> costs;
  };
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped != "[world]") {
        throw DomainError("line " + std::to_string(line_no) + ": unknown section " + stripped);
      }
      sections.push_back({});
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw DomainError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (sections.empty()) {
      if (key == "name") {
        preset.name = value;
      } else if (key == "output") {
        preset.output = value;
      } else if (key == "check_bounds") {
        preset.check_bounds = parse_bool(value, key);
      } else if (key == "rounds_grid") {
        preset.rounds_grid = parse_grid(value);
      } else {
        throw DomainError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
      }
      continue;
    }
    Section& s = sections.back();
    if (key == "sigma") {
      for (const auto& part : split_list(value)) s.sigmas.push_back(parse_double(part, key));
    } else if (key == "cost") {
      for (const auto& part : split_list(value)) s.costs.push_back(parse_double(part, key));
    } else if (key == "rounds") {
      s.base.rounds = parse_int(value, key);
    } else if (key == "runs") {
      s.base.runs = parse_int(value, key);
    } else if (key == "seed") {
      s.base.seed = parse_seed(value);
    } else if (key == "model") {
      s.base.model = parse_information_model(value);
    } else if (key == "diamond") {
      s.base.diamond = parse_diamond(value);
    } else if (key == "common_random_numbers") {
      s.base.common_random_numbers = parse_bool(value, key);
    } else if (key == "utility_convention") {
      s.base.utility_convention = parse_utility_convention(value);
    } else if (key == "step_cap") {
      s.base.step_cap = static_cast<std::size_t>(parse_int(value, key));
    } else {
      throw DomainError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  for (const Section& s : sections) {
    const auto sigmas = s.sigmas.empty() ? std::vector<double>{s.base.sigma} : s.sigmas;
    const auto costs = s.costs.empty() ? std::vector<double>{s.base.cost} : s.costs;
    for (auto& c : expand(s.base, costs, sigmas)) preset.configs.push_back(c);
  }
  return preset;
}

json to_sidecar_json(const ExperimentPreset& preset, double wall_time_seconds) {
  json j;
  j["name"] = preset.name;
  j["engine_version"] = std::string(kEngineVersion);
  j["wall_time_seconds"] = wall_time_seconds;
  j["output"] = preset.output.string();
  j["check_bounds"] = preset.check_bounds;
  j["rounds_grid"] = preset.rounds_grid;
  j["configs"] = json::array();
  for (const auto& c : preset.configs) j["configs"].push_back(config_to_json(c));
  return j;
}

ExperimentPreset from_sidecar_json(const json& sidecar) {
  try {
    ExperimentPreset preset;
    preset.name = sidecar.at("name").get<std::string>();
    preset.output = sidecar.value("output", std::string("."));
    preset.check_bounds = sidecar.value("check_bounds", false);
    preset.rounds_grid = sidecar.value("rounds_grid", std::vector<std::int64_t>{});
    for (const auto& c : sidecar.at("configs")) preset.configs.push_back(config_from_json(c));
    return preset;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed sidecar: ") + e.what());
  }
}

ExperimentPreset load_config_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw DomainError(std::string("invalid JSON config: ") + e.what());
    }
    return from_sidecar_json(j);
  }
  return parse_config_text(text);
}

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string curves_to_csv(const std::vector<WorldConfig>& configs,
                          const std::vector<std::vector<CurvePoint>>& curves) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const WorldConfig& c = configs[i];
    for (const CurvePoint& p : curves[i]) {
      out << format_number(p.sigma) << ',' << p.T << ',' << format_number(p.mean_avg_utility)
          << ',' << format_number(p.se_avg_utility) << ','
          << format_number(p.alt_convention_utility) << ',' << format_number(p.mean_max_quality)
          << ',' << format_number(p.se_max_quality) << ','
          << format_number(p.mean_items_explored) << ',' << p.runs << ',' << c.seed << ','
          << to_string(c.model) << ',' << format_number(c.cost) << ',';
      if (c.diamond) out << format_number(c.diamond->p) << ',' << format_number(c.diamond->jump);
      else out << ',';
      out << '\n';
    }
  }
  return out.str();
}

std::string bounds_to_csv(const std::vector<BoundReport>& reports) {
  std::ostringstream out;
  out << "name,bound_value,observed_value,satisfied,slack\n";
  for (const auto& r : reports) {
    out << '"' << r.name << "\"," << format_number(r.bound_value) << ','
        << format_number(r.observed_value) << ',' << (r.satisfied ? "true" : "false") << ','
        << format_number(r.slack) << '\n';
  }
  return out.str();
}

ExperimentResult run_experiment(const ExperimentPreset& preset, std::size_t workers) {
  preset.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  for (const auto& config : preset.configs) {
    result.curves.push_back(estimate_curve(config, preset.grid_for(config), workers));
  }
  if (preset.check_bounds) {
    for (std::size_t i = 0; i < preset.configs.size(); ++i) {
      for (auto& r : check_curve_bounds(preset.configs[i], result.curves[i])) {
        result.reports.push_back(std::move(r));
      }
    }
    for (auto& r : check_ordering_bounds(preset.configs, result.curves)) {
      result.reports.push_back(std::move(r));
    }
    for (const auto& r : result.reports) result.bounds_satisfied &= r.satisfied;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  fs::create_directories(preset.output);
  result.csv_path = preset.output / (preset.name + ".csv");
  result.sidecar_path = preset.output / (preset.name + ".json");
  write_file(result.csv_path, curves_to_csv(preset.configs, result.curves));
  write_file(result.sidecar_path, to_sidecar_json(preset, wall).dump(2) + "\n");
  if (preset.check_bounds) {
    result.bounds_path = preset.output / (preset.name + "_bounds.csv");
    write_file(*result.bounds_path, bounds_to_csv(result.reports));
  }
  return result;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo engine for sequential social search with Weitzman indices"};
  app.set_version_flag("--version", std::string(kEngineVersion));

  std::string preset_name;
  std::string config_path;
  std::vector<double> sigmas;
  std::optional<double> cost;
  std::optional<std::int64_t> rounds;
  std::string rounds_grid;
  std::optional<std::int64_t> runs;
  std::optional<std::uint64_t> seed;
  std::string model;
  std::string diamond;
  std::optional<bool> crn;
  std::string convention;
  std::size_t workers = default_worker_count();
  std::string output;
  std::string name;
  bool check_bounds = false;
  bool list_presets = false;

  app.add_option("--preset", preset_name, "Built-in preset")
      ->check(CLI::IsMember(preset_names()));
  app.add_option("--config", config_path, "Config file (key = value text or JSON sidecar)");
  app.add_option("--sigma", sigmas, "Diversity level; repeat for several");
  app.add_option("--cost", cost, "Search cost c");
  app.add_option("--rounds", rounds, "Number of rounds T");
  app.add_option("--rounds-grid", rounds_grid, "Comma-separated checkpoints");
  app.add_option("--runs", runs, "Independent replications");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--model", model, "revealed-quality or revealed-value");
  app.add_option("--diamond", diamond, "Diamond parameters P,D");
  app.add_flag("--crn,!--no-crn", crn, "Common random numbers across worlds");
  app.add_option("--utility-convention", convention, "outside-option or must-choose");
  app.add_option("--workers", workers, "Worker threads (env PANDORA_WORKERS)");
  app.add_option("--output", output, "Output directory");
  app.add_option("--name", name, "Experiment name (output file stem)");
  app.add_flag("--check-bounds", check_bounds, "Check results against closed-form bounds");
  app.add_flag("--list-presets", list_presets, "List built-in presets and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalidConfig;
  }

  if (list_presets) {
    for (const auto& n : preset_names()) out << n << '\n';
    return kExitOk;
  }

  ExperimentPreset preset;
  try {
    if (!preset_name.empty() && !config_path.empty()) {
      throw DomainError("--preset and --config are mutually exclusive");
    }
    if (!preset_name.empty()) {
      preset = builtin_preset(preset_name);
    } else if (!config_path.empty()) {
      preset = load_config_file(config_path);
    } else {
      preset.configs.push_back(WorldConfig{});
    }
    if (preset.configs.empty()) throw DomainError("experiment has no world configurations");

    if (!sigmas.empty() || cost) {
      const auto sigma_list = !sigmas.empty()
                                  ? sigmas
                                  : distinct(preset.configs, [](auto& c) { return c.sigma; });
      const auto cost_list =
          cost ? std::vector<double>{*cost}
               : distinct(preset.configs, [](auto& c) { return c.cost; });
      preset.configs = expand(preset.configs.front(), cost_list, sigma_list);
    }
    for (auto& c : preset.configs) {
      if (rounds) c.rounds = *rounds;
      if (runs) c.runs = *runs;
      if (seed) c.seed = *seed;
      if (!model.empty()) c.model = parse_information_model(model);
      if (!diamond.empty()) c.diamond = parse_diamond(diamond);
      if (crn) c.common_random_numbers = *crn;
      if (!convention.empty()) c.utility_convention = parse_utility_convention(convention);
    }
    if (!rounds_grid.empty()) preset.rounds_grid = parse_grid(rounds_grid);
    if (!output.empty()) preset.output = output;
    if (!name.empty()) preset.name = name;
    if (check_bounds) preset.check_bounds = true;
    preset.validate();
  } catch (const DomainError& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  }

  try {
    const ExperimentResult result = run_experiment(preset, workers);
    out << "wrote " << result.csv_path.string() << '\n';
    out << "wrote " << result.sidecar_path.string() << '\n';
    if (result.bounds_path) {
      out << "wrote " << result.bounds_path->string() << '\n';
      std::size_t failed = 0;
      for (const auto& r : result.reports) {
        if (!r.satisfied) {
          ++failed;
          err << "bound violated: " << r.name << " bound=" << format_number(r.bound_value)
              << " observed=" << format_number(r.observed_value) << '\n';
        }
      }
      out << result.reports.size() - failed << "/" << result.reports.size()
          << " bound reports satisfied\n";
      if (!result.bounds_satisfied) return kExitBoundsViolated;
    }
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntimeFailure;
  }
  return kExitOk;
}

}  // namespace pandora
