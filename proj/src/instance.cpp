#include "annealab/instance.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "annealab/errors.hpp"
#include "annealab/rng.hpp"
#include "annealab/textio.hpp"

namespace annealab {

namespace {

// Flat index into the strict upper triangle (i<j, row-major).
inline std::size_t pair_index(int n, int i, int j) {
  return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
         (j - i - 1);
}

// Flat index into the inclusive upper triangle (i<=j, row-major).
inline std::size_t pair_index_incl(int n, int i, int j) {
  return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i - 1) / 2 +
         (j - i);
}

}  // namespace

double GbpInstance::weight(int i, int j) const { return weights[pair_index(n, i, j)]; }
double QkpInstance::profit(int i, int j) const { return profits[pair_index_incl(n, i, j)]; }
double IsingInstance::coupling(int i, int j) const { return couplings[pair_index(n, i, j)]; }

void GbpInstance::validate() const {
  if (n < 1) throw InfeasibleConfigError("gbp: n must be positive");
  if ((n + c_target) % 2 != 0)
    throw InfeasibleConfigError("gbp: n + c_target must be even, got n=" + std::to_string(n) +
                                " c_target=" + std::to_string(c_target));
  if (weights.size() != static_cast<std::size_t>(n) * (n - 1) / 2)
    throw InfeasibleConfigError("gbp: weight vector has wrong length");
}

void QkpInstance::validate() const {
  if (n < 1) throw InfeasibleConfigError("qkp: n must be positive");
  if (capacity < 1) throw InfeasibleConfigError("qkp: capacity must be >= 1");
  if (slack_bits != slack_bit_count(capacity))
    throw InfeasibleConfigError("qkp: slack_bits inconsistent with capacity");
  if (profits.size() != static_cast<std::size_t>(n) * (n + 1) / 2)
    throw InfeasibleConfigError("qkp: profit vector has wrong length");
  if (weights.size() != static_cast<std::size_t>(n))
    throw InfeasibleConfigError("qkp: weight vector has wrong length");
  for (auto w : weights)
    if (w < 0) throw InfeasibleConfigError("qkp: item weights must be non-negative");
}

void IsingInstance::validate() const {
  if (n < 1) throw InfeasibleConfigError("ising: n must be positive");
  if (couplings.size() != static_cast<std::size_t>(n) * (n - 1) / 2)
    throw InfeasibleConfigError("ising: coupling vector has wrong length");
  if (fields.size() != static_cast<std::size_t>(n))
    throw InfeasibleConfigError("ising: field vector has wrong length");
}

int slack_bit_count(std::int64_t capacity) {
  if (capacity < 1) throw InfeasibleConfigError("slack_bit_count: capacity must be >= 1");
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(capacity)));
}

GbpInstance generate_gbp(int n, int c_target, double mu, double lambda, std::uint64_t seed) {
  GbpInstance inst;
  inst.n = n;
  inst.c_target = c_target;
  inst.mu = mu;
  inst.lambda = lambda;
  inst.seed = seed;
  if (n >= 1) inst.weights.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  Rng rng(seed);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) inst.weights.push_back(rng.uniform(0.8, 1.2));
  inst.validate();
  return inst;
}

QkpInstance generate_qkp(int n, std::int64_t capacity, double mu, double lambda,
                         std::uint64_t seed) {
  QkpInstance inst;
  inst.n = n;
  inst.capacity = capacity;
  inst.mu = mu;
  inst.lambda = lambda;
  inst.seed = seed;
  inst.slack_bits = slack_bit_count(capacity);
  if (n >= 1) inst.profits.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  Rng rng(seed);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) inst.profits.push_back(rng.uniform(0.8, 1.2));
  inst.weights.assign(n, 1);
  inst.validate();
  return inst;
}

IsingInstance generate_ising(int n, IsingKind kind, std::uint64_t seed) {
  IsingInstance inst;
  inst.n = n;
  inst.kind = kind;
  inst.scale_by_n = true;
  inst.seed = seed;
  inst.couplings.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  Rng rng(seed);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      inst.couplings.push_back(kind == IsingKind::FM ? rng.uniform(0.0, 1.0)
                                                     : rng.uniform(-1.0, 0.0));
  inst.fields.reserve(n);
  for (int i = 0; i < n; ++i) inst.fields.push_back(rng.uniform(0.0, 2.0));
  inst.validate();
  return inst;
}

EnergyTerms evaluate_energy(const GbpInstance& inst, std::uint64_t z) {
  double cut = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < inst.n; ++i) {
    const int bi = static_cast<int>((z >> i) & 1u);
    for (int j = i + 1; j < inst.n; ++j, ++idx) {
      const int bj = static_cast<int>((z >> j) & 1u);
      if (bi != bj) cut += inst.weights[idx];  // (1 - s_i s_j)/2 = 1 iff bits differ
    }
  }
  EnergyTerms t;
  t.objective = cut / inst.n;
  const std::int64_t c = spin_sum(inst.n, z) - inst.c_target;
  t.constraint = static_cast<double>(c);
  t.energy = t.objective + 0.5 * inst.mu * t.constraint * t.constraint -
             inst.lambda * t.constraint;
  return t;
}

EnergyTerms evaluate_energy(const QkpInstance& inst, std::uint64_t z) {
  double gain = 0.0;
  std::size_t idx = 0;
  std::int64_t load = 0;
  for (int i = 0; i < inst.n; ++i) {
    const int xi = 1 - static_cast<int>((z >> i) & 1u);
    if (xi) load += inst.weights[i];
    for (int j = i; j < inst.n; ++j, ++idx) {
      if (!xi) continue;
      const int xj = 1 - static_cast<int>((z >> j) & 1u);
      if (xj) gain += inst.profits[idx];
    }
  }
  std::int64_t slack = 0;
  for (int d = 0; d < inst.slack_bits; ++d) {
    const int yd = 1 - static_cast<int>((z >> (inst.n + d)) & 1u);
    slack += static_cast<std::int64_t>(yd) << d;  // 2^{d-1} with d one-based
  }
  EnergyTerms t;
  t.objective = -gain / inst.n;
  const std::int64_t full = (std::int64_t{1} << inst.slack_bits) - 1;
  const std::int64_t c = slack - (full - inst.capacity) - load;
  t.constraint = static_cast<double>(c);
  t.energy = t.objective + 0.5 * inst.mu * t.constraint * t.constraint -
             inst.lambda * t.constraint;
  return t;
}

EnergyTerms evaluate_energy(const IsingInstance& inst, std::uint64_t z) {
  double pair_sum = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < inst.n; ++i) {
    const int si = 1 - 2 * static_cast<int>((z >> i) & 1u);
    for (int j = i + 1; j < inst.n; ++j, ++idx) {
      const int sj = 1 - 2 * static_cast<int>((z >> j) & 1u);
      pair_sum += inst.couplings[idx] * si * sj;
    }
  }
  double field_sum = 0.0;
  for (int i = 0; i < inst.n; ++i)
    field_sum += inst.fields[i] * (1 - 2 * static_cast<int>((z >> i) & 1u));
  EnergyTerms t;
  const double scale = inst.scale_by_n ? 1.0 / inst.n : 1.0;
  t.energy = -scale * pair_sum - field_sum;
  t.objective = t.energy;
  t.constraint = 0.0;
  return t;
}

EnergyTerms evaluate_energy(const GbpInstance& inst, const SpinConfiguration& c) {
  return evaluate_energy(inst, c.to_index());
}
EnergyTerms evaluate_energy(const QkpInstance& inst, const SpinConfiguration& c) {
  return evaluate_energy(inst, c.to_index());
}
EnergyTerms evaluate_energy(const IsingInstance& inst, const SpinConfiguration& c) {
  return evaluate_energy(inst, c.to_index());
}

std::string instance_label(const GbpInstance& inst) {
  return "gbp-n" + std::to_string(inst.n) + "-c" + std::to_string(inst.c_target) + "-s" +
         std::to_string(inst.seed);
}
std::string instance_label(const QkpInstance& inst) {
  return "qkp-n" + std::to_string(inst.n) + "-W" + std::to_string(inst.capacity) + "-s" +
         std::to_string(inst.seed);
}
std::string instance_label(const IsingInstance& inst) {
  return std::string("ising-") + (inst.kind == IsingKind::FM ? "fm" : "af") + "-n" +
         std::to_string(inst.n) + "-s" + std::to_string(inst.seed);
}

namespace {

void append_array(std::ostringstream& out, const char* key, const std::vector<double>& v) {
  out << "\"" << key << "\":[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ",";
    out << exact_num(v[i]);
  }
  out << "]";
}

void append_array(std::ostringstream& out, const char* key,
                  const std::vector<std::int64_t>& v) {
  out << "\"" << key << "\":[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ",";
    out << v[i];
  }
  out << "]";
}

}  // namespace

std::string to_json(const GbpInstance& inst) {
  std::ostringstream out;
  out << "{\"kind\":\"gbp\",\"n\":" << inst.n << ",\"c_target\":" << inst.c_target << ",";
  append_array(out, "weights", inst.weights);
  out << ",\"mu\":" << exact_num(inst.mu) << ",\"lambda\":" << exact_num(inst.lambda)
      << ",\"seed\":" << inst.seed << ",\"prng_id\":\"" << Rng::id() << "\"}";
  return out.str();
}

std::string to_json(const QkpInstance& inst) {
  std::ostringstream out;
  out << "{\"kind\":\"qkp\",\"n\":" << inst.n << ",\"capacity\":" << inst.capacity << ",";
  append_array(out, "profits", inst.profits);
  out << ",";
  append_array(out, "weights", inst.weights);
  out << ",\"slack_bits\":" << inst.slack_bits << ",\"mu\":" << exact_num(inst.mu)
      << ",\"lambda\":" << exact_num(inst.lambda) << ",\"seed\":" << inst.seed
      << ",\"prng_id\":\"" << Rng::id() << "\"}";
  return out.str();
}

std::string to_json(const IsingInstance& inst) {
  std::ostringstream out;
  out << "{\"kind\":\"ising\",\"model\":\"" << (inst.kind == IsingKind::FM ? "fm" : "af")
      << "\",\"n\":" << inst.n << ",\"scale_by_n\":" << (inst.scale_by_n ? "true" : "false")
      << ",";
  append_array(out, "couplings", inst.couplings);
  out << ",";
  append_array(out, "fields", inst.fields);
  out << ",\"seed\":" << inst.seed << ",\"prng_id\":\"" << Rng::id() << "\"}";
  return out.str();
}

namespace {

nlohmann::json parse_kind(const std::string& text, const char* kind) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("kind", "") != kind)
    throw DataError(std::string("instance json: expected kind '") + kind + "'");
  return j;
}

}  // namespace

GbpInstance gbp_from_json(const std::string& text) {
  nlohmann::json j = parse_kind(text, "gbp");
  GbpInstance inst;
  inst.n = j.at("n").get<int>();
  inst.c_target = j.at("c_target").get<int>();
  inst.weights = j.at("weights").get<std::vector<double>>();
  inst.mu = j.at("mu").get<double>();
  inst.lambda = j.at("lambda").get<double>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.validate();
  return inst;
}

QkpInstance qkp_from_json(const std::string& text) {
  nlohmann::json j = parse_kind(text, "qkp");
  QkpInstance inst;
  inst.n = j.at("n").get<int>();
  inst.capacity = j.at("capacity").get<std::int64_t>();
  inst.profits = j.at("profits").get<std::vector<double>>();
  inst.weights = j.at("weights").get<std::vector<std::int64_t>>();
  inst.slack_bits = j.at("slack_bits").get<int>();
  inst.mu = j.at("mu").get<double>();
  inst.lambda = j.at("lambda").get<double>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.validate();
  return inst;
}

IsingInstance ising_from_json(const std::string& text) {
  nlohmann::json j = parse_kind(text, "ising");
  IsingInstance inst;
  const std::string model = j.at("model").get<std::string>();
  if (model == "fm")
    inst.kind = IsingKind::FM;
  else if (model == "af")
    inst.kind = IsingKind::AF;
  else
    throw DataError("instance json: unknown ising model '" + model + "'");
  inst.n = j.at("n").get<int>();
  inst.scale_by_n = j.at("scale_by_n").get<bool>();
  inst.couplings = j.at("couplings").get<std::vector<double>>();
  inst.fields = j.at("fields").get<std::vector<double>>();
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.validate();
  return inst;
}

void save_instance(const std::string& path, const std::string& json_text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << json_text << "\n";
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace annealab
