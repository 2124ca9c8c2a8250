// SPDX-License-Identifier: Apache-2.0
#include "casim/traffic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"

using namespace casim;

TEST_CASE("population placement") {
  Rng rng(42, "population");
  const auto users = generate_population(10, 26'000, rng);
  REQUIRE(users.size() == 10);
  for (const auto& u : users) {
    CHECK(u.distance_m >= 35.0);
    CHECK(u.distance_m <= 26'000.0);
    CHECK(u.type == UserType::LteA);
  }

  Rng again(42, "population");
  const auto repeat = generate_population(10, 26'000, again);
  for (std::size_t i = 0; i < users.size(); ++i)
    CHECK(users[i].distance_m == repeat[i].distance_m);

  // Degenerate band pins the user between the minimum separation and R.
  Rng tight(1, "population");
  const auto pinned = generate_population(1, 36, tight);
  CHECK(pinned[0].distance_m >= 35.0);
  CHECK(pinned[0].distance_m <= 36.0);

  CHECK_THROWS_AS(generate_population(0, 1000, rng), std::invalid_argument);
  CHECK_THROWS_AS(generate_population(5, 35, rng), std::domain_error);
}

TEST_CASE("area-uniform sampling has mean distance 2R/3") {
  Rng rng(7, "population");
  const double radius = 10'000;
  const auto users = generate_population(100'000, radius, rng);
  double sum = 0;
  for (const auto& u : users) sum += u.distance_m;
  const double mean = sum / static_cast<double>(users.size());
  CHECK(std::abs(mean - 2.0 * radius / 3.0) / (2.0 * radius / 3.0) < 0.02);
}

TEST_CASE("request generation honors the horizon and size invariant") {
  TrafficParams params;
  Rng rng(9, "traffic");
  const User user{0, 5'000, UserType::LteA};
  for (int i = 0; i < 50; ++i) {
    const auto bursts = generate_requests(user, params, 180'000, rng);
    CHECK(bursts.size() >= 1);
    CHECK(bursts.size() <= 100);
    for (const auto& b : bursts) {
      CHECK(b.arrival_us < 180'000'000ull);
      CHECK(b.qci >= 1);
      CHECK(b.qci <= 9);
      CHECK(b.rate_bps >= 1'000'000ull);
      CHECK(b.rate_bps <= 140'000'000ull);
      CHECK(b.duration_ms > 100);
      CHECK(b.duration_ms <= 2'500);
      const auto expected = (static_cast<unsigned __int128>(b.rate_bps) * b.duration_ms + 999) / 1000;
      CHECK(b.size_bits == static_cast<std::uint64_t>(expected));
    }
  }
}

TEST_CASE("near-degenerate parameter bands collapse the distributions") {
  TrafficParams params;
  params.duration_min_ms = 999;
  params.duration_max_ms = 1000;
  params.rate_min_bps = 4.99e6;
  params.rate_max_bps = 5.01e6;
  params.mean_rate_bps = 5.0e6;
  params.rate_mean_is_post_truncation = false;  // the band is the constraint here
  Rng rng(4, "traffic");
  const auto bursts = generate_requests({0, 1'000, UserType::LteA}, params, 10'000, rng);
  for (const auto& b : bursts) {
    CHECK(b.duration_ms == 1000);
    CHECK(std::abs(static_cast<double>(b.rate_bps) - 5e6) < 11'000);
  }
}

TEST_CASE("truncated exponential calibration recovers the target mean") {
  const double raw = solve_truncated_exp_raw_mean(35e6, 1e6, 140e6);
  CHECK(truncated_exp_mean(raw, 1e6, 140e6) == doctest::Approx(35e6).epsilon(1e-9));
  // The naive mean undershoots once the tail is cut.
  CHECK(truncated_exp_mean(35e6, 1e6, 140e6) < 35e6);

  Rng rng(12, "calibration");
  double sum = 0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) sum += rng.truncated_exponential(raw, 1e6, 140e6);
  CHECK(std::abs(sum / n - 35e6) / 35e6 < 0.01);
}

TEST_CASE("qci queues keep FIFO order per class") {
  QciQueues queues;
  queues.enqueue(3, 10);
  queues.enqueue(3, 11);
  queues.enqueue(5, 12);

  CHECK(queues.at(3).front() == 10);
  CHECK(queues.at(3).back() == 11);
  CHECK(queues.at(5).front() == 12);  // classes do not interleave
  CHECK(queues.total_size() == 3);

  CHECK_THROWS_AS(queues.enqueue(3, 10), std::logic_error);

  // A preempted burst resumes from the head of its class.
  queues.pop_front(3);
  queues.requeue_front(3, 10);
  CHECK(queues.at(3).front() == 10);
  CHECK(queues.at(3).back() == 11);

  queues.erase(3, 10);
  CHECK(!queues.contains(10));
  CHECK(queues.at(3).front() == 11);
}

TEST_CASE("replay files round-trip bit-exactly") {
  TrafficParams params;
  Rng rng(21, "traffic");
  std::vector<BurstSpec> bursts;
  for (UserId u = 0; u < 4; ++u) {
    auto reqs = generate_requests({u, 2'000, UserType::LteA}, params, 60'000, rng);
    bursts.insert(bursts.end(), reqs.begin(), reqs.end());
  }
  std::stable_sort(bursts.begin(), bursts.end(), [](const auto& a, const auto& b) {
    return a.arrival_us < b.arrival_us;
  });
  for (std::size_t i = 0; i < bursts.size(); ++i) bursts[i].id = static_cast<BurstId>(i);

  std::stringstream buffer;
  write_replay(buffer, bursts);
  const auto loaded = read_replay(buffer);
  REQUIRE(loaded.size() == bursts.size());
  for (std::size_t i = 0; i < bursts.size(); ++i) {
    CHECK(loaded[i].id == bursts[i].id);
    CHECK(loaded[i].user == bursts[i].user);
    CHECK(loaded[i].qci == bursts[i].qci);
    CHECK(loaded[i].arrival_us == bursts[i].arrival_us);
    CHECK(loaded[i].rate_bps == bursts[i].rate_bps);
    CHECK(loaded[i].duration_ms == bursts[i].duration_ms);
    CHECK(loaded[i].size_bits == bursts[i].size_bits);
  }

  std::stringstream bad("0,0,12,5.000,1000,200\n");
  CHECK_THROWS(read_replay(bad));
}
