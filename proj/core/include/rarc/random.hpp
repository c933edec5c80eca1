#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <limits>

namespace rarc {

/// Stream identifiers. Every consumer of randomness draws from its own
/// stream so that, e.g., changing the start point never perturbs the data.
enum class Stream : std::uint64_t {
  kInstance = 1,
  kPoint = 2,
  kTangent = 3,
};

/// SplitMix64 generator keyed by (seed, stream).
///
/// The i-th output is a fixed mixing function of key + i * gamma, so the
/// sequence is fully determined by the key and platform independent.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);
  CounterRng(std::uint64_t seed, Stream stream)
      : CounterRng(seed, static_cast<std::uint64_t>(stream)) {}

  result_type operator()();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform();
  /// Standard normal via the cosine branch of Box-Muller.
  double normal();

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t z);

/// i.i.d. standard normal entries, filled in column-major order.
Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                CounterRng& rng);

}  // namespace rarc
