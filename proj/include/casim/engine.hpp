// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "casim/config.hpp"
#include "casim/event.hpp"
#include "casim/metrics.hpp"
#include "casim/radio.hpp"
#include "casim/rng.hpp"
#include "casim/traffic.hpp"

namespace casim {

enum class Phase : std::uint8_t {
  Pending,            // generated, not yet arrived
  Queued,
  Active,
  PreemptedRequeued,  // resources taken away, waiting at the head of its queue
  Done,
  Expired,            // GBR service window ended with a shortfall
  Truncated,          // unfinished at the horizon
  Rejected,           // capacity-infeasible request
};

inline bool is_terminal(Phase p) { return p >= Phase::Done; }

struct BurstState {
  Phase phase = Phase::Pending;
  std::uint64_t served_bits = 0;
  std::int64_t first_alloc_frame = -1;
  std::int64_t last_alloc_frame = -1;
  std::uint64_t retire_frame = 0;
  std::uint32_t preempt_count = 0;
};

// Per-user link precomputation shared by all policies in a run.
struct UserRadio {
  std::vector<double> snr_db;                    // per cc
  std::vector<std::uint64_t> bits_per_prb_frame; // per cc, floor(rate * frame / 1000)
  std::vector<CcId> ranked_ccs;                  // descending SNR, ties by cc id
  std::vector<CcId> covered_ranked_ccs;          // ranked subset with snr >= snr_min
  CcId best_cc = 0;
};

struct SimEnv {
  SimConfig cfg;
  std::vector<User> users;
  std::vector<BurstSpec> bursts;  // sorted by (arrival, id), ids dense
  std::vector<UserRadio> radio;
  std::array<int, 9> qci_precedence{};

  const QciProfile& profile(int qci) const { return cfg.qci_table.lookup(qci); }
  bool gbr(int qci) const { return profile(qci).resource_type == ResourceType::Gbr; }
  std::uint64_t horizon_frames() const { return cfg.horizon_ms / cfg.frame_ms; }
  std::uint64_t arrival_frame(BurstId b) const { return bursts[b].arrival_frame(); }
  // GBR service window is [arrival, arrival + duration); elastic bursts run
  // to completion or horizon.
  std::uint64_t window_end_frame(BurstId b) const {
    return arrival_frame(b) + bursts[b].duration_ms;
  }
  std::uint64_t bits_per_frame(BurstId b, CcId cc) const {
    return radio[bursts[b].user].bits_per_prb_frame[cc];
  }
  bool accessible(UserId user, CcId cc) const {
    return users[user].type == UserType::LteA || cfg.ccs[cc].cc_class == CcClass::Shared;
  }
};

SimEnv build_env(SimConfig cfg, Workload workload);
Workload generate_workload(const SimConfig& cfg);

struct SimState {
  explicit SimState(const SimEnv& env);

  std::uint64_t frame = 0;
  std::vector<BurstState> bursts;
  PrbGrid grid;
  EventLog* log = nullptr;
  Rng sched_rng;

  std::uint64_t remaining_bits(const SimEnv& env, BurstId b) const {
    return env.bursts[b].size_bits - bursts[b].served_bits;
  }
};

// Policy hook points inside one frame. The engine injects arrivals, credits
// painted PRBs, and retires bursts; policies own queueing and placement.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  // Called once per newly arrived burst, in arrival order.
  virtual void on_arrival(const SimEnv& env, SimState& st, BurstId b) = 0;
  // Called after arrivals, before the grid is painted (QSCS re-optimization
  // and admission control live here).
  virtual void pre_schedule(const SimEnv& env, SimState& st) { (void)env, (void)st; }
  // Paint this frame's allocations into st.grid.
  virtual void fill_frame(const SimEnv& env, SimState& st) = 0;
  // Called when a burst reaches a terminal phase.
  virtual void on_retired(const SimEnv& env, SimState& st, BurstId b) {
    (void)env, (void)st, (void)b;
  }
};

std::unique_ptr<Scheduler> make_scheduler(SchedulerKind kind, const SimEnv& env);

struct RunOptions {
  std::vector<Event>* retain_events = nullptr;
  std::ostream* event_stream = nullptr;
  std::function<void(const Event&)> observer;
};

struct RunResult {
  MetricsReport metrics;
  std::uint64_t digest = 0;
  std::uint64_t event_count = 0;
};

MetricsContext make_metrics_context(const SimEnv& env);

RunResult run_simulation(const SimEnv& env, const RunOptions& opts = {});
RunResult run_simulation(const SimConfig& cfg, const RunOptions& opts = {});

}  // namespace casim
