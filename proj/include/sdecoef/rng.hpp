#pragma once

#include <cstdint>
#include <utility>

namespace sdecoef {

/// Counter-based random stream (Philox-2x64, 10 rounds).
///
/// Each (seed, stream_id) pair keys an independent stream: the generator is a
/// keyed bijection of the 128-bit counter space, and distinct stream ids use
/// disjoint counter blocks, so streams never overlap. Identical (seed,
/// stream_id) produce the identical bit sequence on every run and platform.
///
/// All distribution samplers below are built on the raw stream with explicit
/// algorithms (no std::<distribution>), so a stream's consumption pattern is
/// part of the reproducibility contract.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01();
  /// Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos();

  /// Standard normal (Box-Muller; the paired variate is cached).
  double normal();
  /// Exponential with unit rate.
  double exponential();
  /// Gamma with given shape, unit scale (Marsaglia-Tsang).
  double gamma(double shape);
  double chi_square(double dof);
  double student_t(double dof);
  /// Poisson count with the given mean (chunked multiplicative method).
  std::uint64_t poisson(double mean);

 private:
  std::pair<std::uint64_t, std::uint64_t> next_block();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t buffered_ = 0;
  bool has_buffered_ = false;
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

}  // namespace sdecoef
