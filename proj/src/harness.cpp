#include "annealab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "annealab/collective.hpp"
#include "annealab/dynamics.hpp"
#include "annealab/errors.hpp"
#include "annealab/instance.hpp"
#include "annealab/spectrum.hpp"
#include "annealab/textio.hpp"

using nlohmann::json;

namespace annealab {

std::vector<double> GridSpec::values() const {
  if (points < 1) throw ConfigError("grid needs at least one point");
  if (points == 1) return {lo};
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) v[i] = lo + (hi - lo) * i / (points - 1);
  return v;
}

namespace {

const std::set<std::string> kExperiments = {
    "lambda_mu_map",  "mu_slices",     "delta_ef_sweep", "constraint_sweep",
    "p0_vs_maxqd",    "delta_ehc_scan", "hd_scan",       "size_scan"};

GridSpec grid_from(const json& j, const GridSpec& fallback) {
  GridSpec g = fallback;
  if (j.contains("lo")) g.lo = j.at("lo").get<double>();
  if (j.contains("hi")) g.hi = j.at("hi").get<double>();
  if (j.contains("points")) g.points = j.at("points").get<int>();
  return g;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.experiment = j.value("experiment", "");
    if (j.contains("problem")) {
      const json& p = j.at("problem");
      cfg.kind = p.value("kind", "");
      cfg.n = p.value("n", 0);
      cfg.c_target = p.value("c", 0);
      cfg.capacity = p.value("w", std::int64_t{1});
    }
    cfg.instance_count = j.value("instance_count", cfg.instance_count);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.grid_points = j.value("grid_points", cfg.grid_points);
    if (j.contains("tau_modes")) {
      cfg.tau_modes.clear();
      for (const auto& t : j.at("tau_modes")) {
        if (t.is_string())
          cfg.tau_modes.push_back(t.get<std::string>());
        else
          cfg.tau_modes.push_back(csv_num(t.get<double>()));
      }
    }
    if (j.contains("lambda")) {
      const json& l = j.at("lambda");
      if (l.is_string() && l.get<std::string>() == "calibrated") {
        cfg.lambda_calibrated = true;
      } else if (l.is_number()) {
        cfg.lambda_calibrated = false;
        cfg.lambda_value = l.get<double>();
      } else {
        throw ConfigError("lambda must be a number or \"calibrated\"");
      }
    }
    cfg.mu_target = j.value("mu_target", cfg.mu_target);
    cfg.lambda_root = j.value("lambda_root", cfg.lambda_root);
    cfg.lambda_lo = j.value("lambda_lo", cfg.lambda_lo);
    cfg.lambda_hi = j.value("lambda_hi", cfg.lambda_hi);
    if (j.contains("mu_factor_grid"))
      cfg.mu_factor_grid = grid_from(j.at("mu_factor_grid"), cfg.mu_factor_grid);
    if (j.contains("mu_factors"))
      cfg.mu_factors = j.at("mu_factors").get<std::vector<double>>();
    if (j.contains("lambda_grid")) cfg.lambda_grid = grid_from(j.at("lambda_grid"), cfg.lambda_grid);
    if (j.contains("mu_grid")) cfg.mu_grid = grid_from(j.at("mu_grid"), cfg.mu_grid);
    cfg.bin_width = j.value("bin_width", cfg.bin_width);
    if (j.contains("c_values")) cfg.c_values = j.at("c_values").get<std::vector<int>>();
    if (j.contains("w_values"))
      cfg.w_values = j.at("w_values").get<std::vector<std::int64_t>>();
    if (j.contains("sizes")) cfg.sizes = j.at("sizes").get<std::vector<int>>();
    cfg.j_fm = j.value("j_fm", cfg.j_fm);
    cfg.j_af = j.value("j_af", cfg.j_af);
    cfg.h_field = j.value("h", cfg.h_field);
    cfg.out_dir = j.value("out", cfg.out_dir);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  if (!kExperiments.count(cfg.experiment)) {
    std::string names;
    for (const auto& e : kExperiments) names += (names.empty() ? "" : ", ") + e;
    throw ConfigError("unknown experiment \"" + cfg.experiment + "\" (expected one of " +
                      names + ")");
  }
  if (cfg.grid_points < 2) throw ConfigError("grid_points must be at least 2");
  if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
  if (cfg.instance_count < 1) throw ConfigError("instance_count must be at least 1");
  if (!(cfg.bin_width > 0)) throw ConfigError("bin_width must be positive");
  if (cfg.lambda_root != "nearest_zero" && cfg.lambda_root != "lowest" &&
      cfg.lambda_root != "highest")
    throw ConfigError("lambda_root must be nearest_zero, lowest, or highest");
  for (const auto& mode : cfg.tau_modes) {
    if (mode == "static") continue;
    char* end = nullptr;
    const double tau = std::strtod(mode.c_str(), &end);
    if (end == mode.c_str() || *end != '\0' || !(tau > 0))
      throw ConfigError("tau mode must be \"static\" or a positive number, got \"" + mode +
                        "\"");
  }

  const bool needs_problem = cfg.experiment == "lambda_mu_map" || cfg.experiment == "mu_slices" ||
                             cfg.experiment == "delta_ef_sweep" ||
                             cfg.experiment == "constraint_sweep" ||
                             cfg.experiment == "p0_vs_maxqd";
  if (needs_problem) {
    if (cfg.kind != "gbp" && cfg.kind != "qkp")
      throw ConfigError(cfg.experiment + " needs problem.kind gbp or qkp");
    if (cfg.n < 1) throw ConfigError("problem.n must be positive");
    if (cfg.kind == "gbp" && (cfg.n + cfg.c_target) % 2 != 0)
      throw ConfigError("gbp parity: n + c must be even");
    if (cfg.kind == "qkp" && cfg.capacity < 1) throw ConfigError("problem.w must be >= 1");
  }
  if (cfg.experiment == "delta_ehc_scan" || cfg.experiment == "hd_scan") {
    if (cfg.n < 2) throw ConfigError(cfg.experiment + " needs problem.n >= 2");
  }
  if (cfg.experiment == "size_scan") {
    if (cfg.sizes.empty()) throw ConfigError("size_scan needs a non-empty sizes list");
    for (int n : cfg.sizes)
      if (n < 2) throw ConfigError("size_scan sizes must be >= 2");
  }
  if (cfg.experiment == "mu_slices" && cfg.mu_factors.empty())
    throw ConfigError("mu_slices needs a non-empty mu_factors list");
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const int workers = std::min<std::size_t>(std::max(threads, 1), count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> failures(workers);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        failures[w] = std::current_exception();
        next.store(count);  // drain remaining work
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
}

void write_result(const std::string& dir, const ExperimentResult& res) {
  std::filesystem::create_directories(dir);
  const auto emit = [&](const std::string& name, const std::string& body) {
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + dir + "/" + name);
    out << body;
  };
  std::string records = res.records_header + "\n";
  for (const auto& r : res.records) records += r + "\n";
  emit("records.csv", records);
  if (!res.bins.empty()) {
    std::string bins = res.bins_header + "\n";
    for (const auto& b : res.bins) bins += b + "\n";
    emit("bins.csv", bins);
  }
  emit("meta.json", res.meta_json + "\n");
  std::string log;
  for (const auto& line : res.log) log += line + "\n";
  emit("log.txt", log);
  for (const auto& [name, body] : res.extra_files) emit(name, body);
}

}  // namespace annealab
