// SPDX-License-Identifier: Apache-2.0
#include "casim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "casim/radio.hpp"

namespace casim {

std::uint64_t burst_size_bits(std::uint64_t rate_bps, std::uint32_t duration_ms) {
  // ceil(rate * duration / 1000) in exact integer arithmetic
  const unsigned __int128 product =
      static_cast<unsigned __int128>(rate_bps) * duration_ms;
  return static_cast<std::uint64_t>((product + 999) / 1000);
}

std::vector<User> generate_population(int n_users, double cell_radius_m, Rng& rng) {
  if (n_users < 1) throw std::invalid_argument("population needs at least one user");
  if (cell_radius_m <= kMinUeEnbSeparationM)
    throw std::domain_error("cell radius must exceed the 35 m minimum separation");
  std::vector<User> users;
  users.reserve(n_users);
  for (int i = 0; i < n_users; ++i) {
    const double d = cell_radius_m * std::sqrt(rng.next_double());
    users.push_back(User{static_cast<UserId>(i), std::max(d, kMinUeEnbSeparationM),
                         UserType::LteA});
  }
  return users;
}

namespace {

int sample_qci(const std::array<double, 9>& weights, Rng& rng) {
  double total = 0;
  for (double w : weights) total += w;
  double x = rng.next_double() * total;
  for (int i = 0; i < 9; ++i) {
    x -= weights[i];
    if (x < 0) return i + 1;
  }
  return 9;
}

}  // namespace

std::vector<BurstSpec> generate_requests(const User& user, const TrafficParams& params,
                                         std::uint64_t horizon_ms, Rng& rng) {
  if (horizon_ms == 0) throw std::invalid_argument("simulation horizon must be positive");
  const double raw_rate_mean =
      params.rate_mean_is_post_truncation
          ? solve_truncated_exp_raw_mean(params.mean_rate_bps, params.rate_min_bps,
                                         params.rate_max_bps)
          : params.mean_rate_bps;

  std::uint64_t count;
  do {
    count = rng.poisson(params.mean_requests_per_user);
  } while (count < 1 || count > static_cast<std::uint64_t>(params.max_requests_per_user));

  std::vector<BurstSpec> bursts;
  bursts.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    BurstSpec b;
    b.user = user.id;
    b.arrival_us = rng.uniform_u64(horizon_ms * 1000);
    b.qci = sample_qci(params.qci_weights, rng);
    b.rate_bps = static_cast<std::uint64_t>(std::llround(
        rng.truncated_exponential(raw_rate_mean, params.rate_min_bps, params.rate_max_bps)));
    b.duration_ms = params.duration_min_ms + 1 +
                    static_cast<std::uint32_t>(rng.uniform_u64(
                        params.duration_max_ms - params.duration_min_ms));
    b.size_bits = burst_size_bits(b.rate_bps, b.duration_ms);
    bursts.push_back(b);
  }
  return bursts;
}

void write_replay(std::ostream& out, const std::vector<BurstSpec>& bursts) {
  out << "# id,user,qci,arrival_ms,rate_bps,duration_ms\n";
  char line[128];
  for (const auto& b : bursts) {
    std::snprintf(line, sizeof(line), "%u,%u,%d,%llu.%03llu,%llu,%u\n", b.id, b.user, b.qci,
                  static_cast<unsigned long long>(b.arrival_us / 1000),
                  static_cast<unsigned long long>(b.arrival_us % 1000),
                  static_cast<unsigned long long>(b.rate_bps), b.duration_ms);
    out << line;
  }
}

std::vector<BurstSpec> read_replay(std::istream& in) {
  std::vector<BurstSpec> bursts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    BurstSpec b;
    unsigned long long ms = 0, frac = 0, rate = 0;
    unsigned id = 0, user = 0, dur = 0;
    int qci = 0;
    if (std::sscanf(line.c_str(), "%u,%u,%d,%llu.%llu,%llu,%u", &id, &user, &qci, &ms, &frac,
                    &rate, &dur) != 7)
      throw std::runtime_error("replay line " + std::to_string(lineno) + ": malformed record");
    if (qci < 1 || qci > 9)
      throw std::runtime_error("replay line " + std::to_string(lineno) + ": qci out of range");
    if (rate == 0 || dur == 0)
      throw std::runtime_error("replay line " + std::to_string(lineno) +
                               ": rate and duration must be positive");
    b.id = id;
    b.user = user;
    b.qci = qci;
    b.arrival_us = ms * 1000 + frac;
    b.rate_bps = rate;
    b.duration_ms = dur;
    b.size_bits = burst_size_bits(b.rate_bps, b.duration_ms);
    bursts.push_back(b);
  }
  for (std::size_t i = 0; i < bursts.size(); ++i) {
    if (bursts[i].id != i)
      throw std::runtime_error("replay burst ids must be dense and in arrival order");
    if (i > 0 && bursts[i].arrival_us < bursts[i - 1].arrival_us)
      throw std::runtime_error("replay bursts must be sorted by arrival");
  }
  return bursts;
}

int QciQueues::check(int qci) {
  if (qci < 1 || qci > 9) throw std::domain_error("qci out of range 1..9");
  return qci - 1;
}

void QciQueues::enqueue(int qci, BurstId burst) {
  if (!members_.insert(burst).second)
    throw std::logic_error("burst " + std::to_string(burst) + " already queued");
  queues_[check(qci)].push_back(burst);
}

void QciQueues::requeue_front(int qci, BurstId burst) {
  if (!members_.insert(burst).second)
    throw std::logic_error("burst " + std::to_string(burst) + " already queued");
  queues_[check(qci)].push_front(burst);
}

void QciQueues::pop_front(int qci) {
  auto& q = queues_[check(qci)];
  if (q.empty()) throw std::logic_error("pop from empty QCI queue");
  members_.erase(q.front());
  q.pop_front();
}

void QciQueues::erase(int qci, BurstId burst) {
  auto& q = queues_[check(qci)];
  auto it = std::find(q.begin(), q.end(), burst);
  if (it == q.end()) return;
  q.erase(it);
  members_.erase(burst);
}

}  // namespace casim
