#pragma once

#include <cstdint>
#include <random>

#include "sniep/kernels.hpp"

namespace sniep {

/// Seedable generator with a platform-independent output stream.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard.
/// The standard distributions are not (their algorithms are unspecified), so
/// uniform and normal variates are derived from raw engine output here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal via Box-Muller (cached second variate).
  double normal();

  /// n x m matrix of uniform(0,1) entries, filled column by column.
  Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols);
  Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for benchmark cell `index` derived from a base seed; distinct cells
/// get statistically independent streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace sniep
