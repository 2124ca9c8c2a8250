// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <unordered_set>
#include <vector>

#include "casim/rng.hpp"
#include "casim/types.hpp"

namespace casim {

enum class UserType : std::uint8_t { LteA, LegacyLte };

struct User {
  UserId id = 0;
  double distance_m = 0;
  UserType type = UserType::LteA;
};

// One service request. Arrival is kept in whole microseconds so replay files
// round-trip exactly; size_bits is derived from rate and duration.
struct BurstSpec {
  BurstId id = 0;
  UserId user = 0;
  int qci = 9;
  std::uint64_t arrival_us = 0;
  std::uint64_t rate_bps = 0;
  std::uint32_t duration_ms = 0;
  std::uint64_t size_bits = 0;

  std::uint64_t arrival_frame() const { return arrival_us / 1000; }
};

std::uint64_t burst_size_bits(std::uint64_t rate_bps, std::uint32_t duration_ms);

struct TrafficParams {
  int n_users = 10;
  double mean_requests_per_user = 25.0;
  int max_requests_per_user = 100;  // 4x the mean
  double mean_rate_bps = 35e6;
  double rate_min_bps = 1e6;
  double rate_max_bps = 140e6;
  // When set, the pre-truncation exponential mean is calibrated so the
  // truncated distribution actually averages mean_rate_bps.
  bool rate_mean_is_post_truncation = true;
  std::uint32_t duration_min_ms = 100;  // exclusive
  std::uint32_t duration_max_ms = 2500;
  std::array<double, 9> qci_weights{1, 1, 1, 1, 1, 1, 1, 1, 1};
};

// Uniform placement over the cell disc (radial CDF ~ d^2), clamped to the
// minimum UE-eNB separation. Deterministic given the generator state.
std::vector<User> generate_population(int n_users, double cell_radius_m, Rng& rng);

std::vector<BurstSpec> generate_requests(const User& user, const TrafficParams& params,
                                         std::uint64_t horizon_ms, Rng& rng);

struct Workload {
  std::vector<User> users;
  std::vector<BurstSpec> bursts;  // sorted by (arrival_us, id); ids dense 0..n-1
};

// Replay files: one burst per line, "id,user,qci,arrival_ms,rate_bps,duration_ms".
void write_replay(std::ostream& out, const std::vector<BurstSpec>& bursts);
std::vector<BurstSpec> read_replay(std::istream& in);

// Nine FIFO queues of burst ids, one per QCI. Preempted bursts re-enter at
// the head of their queue.
class QciQueues {
 public:
  void enqueue(int qci, BurstId burst);        // throws std::logic_error on duplicates
  void requeue_front(int qci, BurstId burst);  // throws std::logic_error on duplicates
  void pop_front(int qci);
  bool contains(BurstId burst) const { return members_.count(burst) != 0; }
  const std::deque<BurstId>& at(int qci) const { return queues_[check(qci)]; }
  std::deque<BurstId>& at(int qci) { return queues_[check(qci)]; }
  void erase(int qci, BurstId burst);
  std::size_t total_size() const { return members_.size(); }

 private:
  static int check(int qci);
  std::array<std::deque<BurstId>, 9> queues_;
  std::unordered_set<BurstId> members_;
};

}  // namespace casim
