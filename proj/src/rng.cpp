#include "sdecoef/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdecoef {

namespace {

// Philox-2x64 round constants (multiplier and Weyl key increment).
constexpr std::uint64_t kPhiloxMult = 0xD2B74407B1CE6E93ULL;
constexpr std::uint64_t kWeylStep = 0x9E3779B97F4A7C15ULL;

std::pair<std::uint64_t, std::uint64_t> philox2x64(std::uint64_t c0,
                                                   std::uint64_t c1,
                                                   std::uint64_t key) {
  for (int round = 0; round < 10; ++round) {
    const unsigned __int128 prod =
        static_cast<unsigned __int128>(kPhiloxMult) * c0;
    const auto hi = static_cast<std::uint64_t>(prod >> 64);
    const auto lo = static_cast<std::uint64_t>(prod);
    c0 = hi ^ key ^ c1;
    c1 = lo;
    key += kWeylStep;
  }
  return {c0, c1};
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id) {}

std::pair<std::uint64_t, std::uint64_t> RngStream::next_block() {
  // The stream id occupies the high counter word, so streams index disjoint
  // regions of the generator's counter space.
  const auto block = philox2x64(counter_, stream_, seed_);
  ++counter_;
  return block;
}

std::uint64_t RngStream::next_u64() {
  if (has_buffered_) {
    has_buffered_ = false;
    return buffered_;
  }
  const auto [first, second] = next_block();
  buffered_ = second;
  has_buffered_ = true;
  return first;
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform_pos()));
  const double angle = 2.0 * std::numbers::pi * uniform01();
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

double RngStream::exponential() { return -std::log(uniform_pos()); }

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) {
    throw std::invalid_argument("RngStream::gamma: shape must be positive");
  }
  if (shape < 1.0) {
    // Boost to shape + 1 and correct with a power of an independent uniform.
    const double boosted = gamma(shape + 1.0);
    return boosted * std::pow(uniform_pos(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) {
      return d * v;
    }
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

double RngStream::chi_square(double dof) {
  if (!(dof > 0.0)) {
    throw std::invalid_argument(
        "RngStream::chi_square: dof must be positive");
  }
  return 2.0 * gamma(0.5 * dof);
}

double RngStream::student_t(double dof) {
  if (!(dof > 0.0)) {
    throw std::invalid_argument("RngStream::student_t: dof must be positive");
  }
  return normal() / std::sqrt(chi_square(dof) / dof);
}

std::uint64_t RngStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument(
        "RngStream::poisson: mean must be finite and nonnegative");
  }
  // Multiplicative counting is exact but needs exp(-m) well above underflow,
  // so large means are split into independent chunks first.
  constexpr double kChunk = 30.0;
  const auto count_with_mean = [this](double m) {
    const double limit = std::exp(-m);
    std::uint64_t k = 0;
    double prod = 1.0;
    do {
      ++k;
      prod *= uniform01();
    } while (prod > limit);
    return k - 1;
  };
  std::uint64_t total = 0;
  double remaining = mean;
  while (remaining > kChunk) {
    total += count_with_mean(kChunk);
    remaining -= kChunk;
  }
  total += count_with_mean(remaining);
  return total;
}

}  // namespace sdecoef
