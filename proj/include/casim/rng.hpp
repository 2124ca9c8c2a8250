// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>

namespace casim {

// xoshiro256** seeded through splitmix64. Samplers are hand-rolled so a
// (seed, stream) pair yields the same sequence on every platform and
// standard library; replay digests depend on this.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view stream);

  std::uint64_t next_u64();
  double next_double();  // [0, 1)
  std::uint64_t uniform_u64(std::uint64_t n);  // [0, n), unbiased
  double uniform(double lo, double hi);
  double exponential(double mean);
  // Inverse-CDF sample of an exponential(raw_mean) conditioned on [lo, hi].
  double truncated_exponential(double raw_mean, double lo, double hi);
  std::uint64_t poisson(double mean);
  double normal(double mean, double stddev);

 private:
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Mean of an exponential(raw_mean) conditioned on [lo, hi].
double truncated_exp_mean(double raw_mean, double lo, double hi);

// Raw mean such that the [lo, hi]-truncated exponential has the target mean.
// Requires lo < target < (lo + hi) / 2.
double solve_truncated_exp_raw_mean(double target_mean, double lo, double hi);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 14695981039346656037ull);

}  // namespace casim
