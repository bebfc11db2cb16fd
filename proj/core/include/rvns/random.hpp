#pragma once

#include <cstdint>
#include <random>

namespace rvns {

// Deterministic random source. The engine is std::mt19937_64 (fully
// specified by the standard); every distribution transform is implemented
// explicitly here instead of via std::*_distribution, whose output is
// implementation-defined. This keeps seeded streams byte-reproducible
// across standard libraries and compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller; generates pairs and caches the spare.
  double normal();
  // Laplace(0, scale) via inverse CDF.
  double laplace(double scale);
  // Chi-squared with df degrees of freedom, as a sum of squared normals.
  double chi_squared(int df);

  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Derives an independent stream seed from a base seed and a stream index
// (splitmix64 finalizer). Pipeline stages use this so that running stages
// separately with the derived seeds reproduces a combined run exactly.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace rvns
