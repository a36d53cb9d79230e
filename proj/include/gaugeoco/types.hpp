#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gaugeoco {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Thrown when an argument violates an operation precondition (caller bug).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : UsageError {
  DimensionMismatch(int expected, int got)
      : UsageError("dimension mismatch: expected " + std::to_string(expected) +
                   ", got " + std::to_string(got)) {}
};

// Thrown when an internal invariant fails at runtime (bad parameters or a bug).
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by support() when no exact comparator is available for the body.
struct ApproxComparatorRequired : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

inline void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw UsageError(std::string(what) + " contains NaN/Inf");
  }
}

// Deterministic counter-style 64-bit generator (splitmix64 core). Cross-run
// reproducibility of every experiment hinges on this, so we do not rely on
// library distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Standard normal via Box-Muller; one spare cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 6.283185307179586476925286766559;
    spare_ = mag * std::sin(two_pi * u2);
    has_spare_ = true;
    return mag * std::cos(two_pi * u2);
  }

  Vector gaussian_vector(int d) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = next_gaussian();
    return v;
  }

  // Uniform direction on the unit sphere.
  Vector unit_vector(int d) {
    Vector v = gaussian_vector(d);
    double n = v.norm();
    while (n < 1e-12) {
      v = gaussian_vector(d);
      n = v.norm();
    }
    return v / n;
  }

  int next_int(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  bool next_bool() { return (next_u64() & 1ULL) != 0; }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stable stream derivation so parallel batches never share a generator.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  Rng r(base ^ (0x632be59bd9b4e019ULL + salt * 0x9e3779b97f4a7c15ULL));
  return r.next_u64();
}

}  // namespace gaugeoco
