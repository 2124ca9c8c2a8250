// SPDX-License-Identifier: Apache-2.0
#include "casim/rng.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace casim {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Rng::Rng(std::uint64_t seed, std::string_view stream) {
  std::uint64_t x = seed ^ fnv1a64(stream);
  for (auto& s : s_) s = splitmix64(x);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::uniform_u64(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_u64: n must be positive");
  const std::uint64_t limit = ~0ull - ~0ull % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

double Rng::exponential(double mean) {
  assert(mean > 0);
  return -mean * std::log1p(-next_double());
}

double Rng::truncated_exponential(double raw_mean, double lo, double hi) {
  assert(raw_mean > 0 && lo < hi);
  const double fa = std::exp(-lo / raw_mean);
  const double fb = std::exp(-hi / raw_mean);
  const double u = next_double();
  return -raw_mean * std::log(fa - u * (fa - fb));
}

std::uint64_t Rng::poisson(double mean) {
  assert(mean > 0 && mean < 500);  // Knuth's product method underflows past ~700
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= next_double();
  } while (p > limit);
  return k - 1;
}

double Rng::normal(double mean, double stddev) {
  if (have_spare_) {
    have_spare_ = false;
    return mean + stddev * spare_;
  }
  double u1, u2;
  do {
    u1 = next_double();
  } while (u1 <= 0.0);
  u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return mean + stddev * r * std::cos(theta);
}

double truncated_exp_mean(double raw_mean, double lo, double hi) {
  const double fa = std::exp(-lo / raw_mean);
  const double fb = std::exp(-hi / raw_mean);
  const double num = (lo + raw_mean) * fa - (hi + raw_mean) * fb;
  return num / (fa - fb);
}

double solve_truncated_exp_raw_mean(double target_mean, double lo, double hi) {
  if (!(target_mean > lo && target_mean < 0.5 * (lo + hi)))
    throw std::domain_error("truncated exponential mean target out of reachable range");
  double a = 1e-9 * (hi - lo);
  double b = hi;
  while (truncated_exp_mean(b, lo, hi) < target_mean) b *= 2;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    if (truncated_exp_mean(m, lo, hi) < target_mean)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

}  // namespace casim
