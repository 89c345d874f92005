#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "annealab/spin.hpp"

namespace annealab {

// Energy split of one configuration: energy = objective + (mu/2)c^2 - lambda*c.
// The constraint residual is integer-valued for the constrained problems and
// identically zero for Ising instances.
struct EnergyTerms {
  double energy = 0.0;
  double objective = 0.0;
  double constraint = 0.0;
};

// Graph bipartitioning with a fixed imbalance target:
//   objective  f(s) = (1/n) * sum_{i<j} w_ij (1 - s_i s_j)/2
//   constraint c(s) = sum_i s_i - c_target
// (n + c_target) must be even, otherwise no configuration satisfies c = 0.
struct GbpInstance {
  int n = 0;
  int c_target = 0;
  std::vector<double> weights;  // w_ij for i<j, row-major (i outer)
  double mu = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;

  int spin_count() const { return n; }
  double weight(int i, int j) const;  // i < j
  void validate() const;
};

// Quadratic knapsack with a log-encoded slack register:
//   objective  f(x) = -(1/n) * sum_{i<=j} p_ij x_i x_j
//   constraint c(x,y) = sum_d 2^{d-1} y_d - (2^D - 1 - W) - sum_i w_i x_i
// Spin layout: x_1..x_n on bits 0..n-1, y_1..y_D on bits n..n+D-1.
struct QkpInstance {
  int n = 0;
  std::int64_t capacity = 0;            // W >= 1
  std::vector<double> profits;          // p_ij for i<=j, row-major (i outer)
  std::vector<std::int64_t> weights;    // w_i, all 1 for generated instances
  int slack_bits = 0;                   // D = bit_width(W)
  double mu = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;

  int spin_count() const { return n + slack_bits; }
  double profit(int i, int j) const;  // i <= j
  void validate() const;
};

enum class IsingKind { FM, AF };

// Random-field random-coupling Ising energy:
//   E(s) = -sum_{i<j} (J_ij / n?) s_i s_j - sum_i h_i s_i
// with the 1/n coupling scale active when scale_by_n is set.
struct IsingInstance {
  int n = 0;
  IsingKind kind = IsingKind::FM;
  bool scale_by_n = true;
  std::vector<double> couplings;  // J_ij for i<j, row-major (i outer)
  std::vector<double> fields;     // h_i
  std::uint64_t seed = 0;

  int spin_count() const { return n; }
  double coupling(int i, int j) const;  // i < j
  void validate() const;
};

// Smallest D with 2^D - 1 >= W, i.e. the width of W in bits.
int slack_bit_count(std::int64_t capacity);

// Draw order is part of the format: couplings/weights first in row-major
// pair order, then per-site fields, each one engine draw.
GbpInstance generate_gbp(int n, int c_target, double mu, double lambda, std::uint64_t seed);
QkpInstance generate_qkp(int n, std::int64_t capacity, double mu, double lambda,
                         std::uint64_t seed);
IsingInstance generate_ising(int n, IsingKind kind, std::uint64_t seed);

EnergyTerms evaluate_energy(const GbpInstance& inst, std::uint64_t z);
EnergyTerms evaluate_energy(const QkpInstance& inst, std::uint64_t z);
EnergyTerms evaluate_energy(const IsingInstance& inst, std::uint64_t z);

EnergyTerms evaluate_energy(const GbpInstance& inst, const SpinConfiguration& c);
EnergyTerms evaluate_energy(const QkpInstance& inst, const SpinConfiguration& c);
EnergyTerms evaluate_energy(const IsingInstance& inst, const SpinConfiguration& c);

// Short human-readable tag used in output files.
std::string instance_label(const GbpInstance& inst);
std::string instance_label(const QkpInstance& inst);
std::string instance_label(const IsingInstance& inst);

// JSON round-trip. Floating-point fields are written with 17 significant
// digits so that load(save(x)) reproduces x bit for bit.
std::string to_json(const GbpInstance& inst);
std::string to_json(const QkpInstance& inst);
std::string to_json(const IsingInstance& inst);

GbpInstance gbp_from_json(const std::string& text);
QkpInstance qkp_from_json(const std::string& text);
IsingInstance ising_from_json(const std::string& text);

void save_instance(const std::string& path, const std::string& json_text);
std::string load_text(const std::string& path);

}  // namespace annealab
