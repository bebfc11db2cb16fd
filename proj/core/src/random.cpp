#include "rvns/random.hpp"

#include <cmath>
#include <stdexcept>

namespace rvns {

double Rng::uniform() {
  // Top 53 bits scaled to [0, 1).
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - uniform() lies in (0, 1], avoiding log(0).
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double Rng::laplace(double scale) {
  if (!(scale > 0.0)) {
    throw std::invalid_argument("laplace scale must be positive");
  }
  const double u = uniform() - 0.5;
  double t = 1.0 - 2.0 * std::abs(u);
  if (t < 1e-300) t = 1e-300;  // u == -0.5 happens with probability 2^-53
  const double magnitude = -scale * std::log(t);
  return u < 0.0 ? -magnitude : magnitude;
}

double Rng::chi_squared(int df) {
  if (df < 1) {
    throw std::invalid_argument("chi-squared needs df >= 1");
  }
  double s = 0.0;
  for (int i = 0; i < df; ++i) {
    const double z = normal();
    s += z * z;
  }
  return s;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace rvns
