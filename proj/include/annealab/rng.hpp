#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace annealab {

// Portable deterministic random source. The engine (mt19937_64) is fully
// specified by the C++ standard; the [0,1) mapping below uses the top 53
// bits of one engine draw, so the stream of doubles is identical on every
// platform for a given seed. std::uniform_real_distribution is avoided on
// purpose: its output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // One engine draw -> double in [0,1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi). Consumes exactly one engine draw.
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t raw() { return eng_(); }

  static const std::string& id() {
    static const std::string v = "mt19937_64-u53";
    return v;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace annealab
