// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <map>
#include <optional>
#include <unordered_set>
#include <vector>

#include "casim/engine.hpp"

namespace casim {

// Second scheduling level shared by SRUS and SBLS: grants this CC's free
// PRBs to the dispatched bursts in arrival order. The head burst takes PRBs
// until its remaining bits this frame are covered, then the next burst.
// Finished bursts are dropped from the queue as they are encountered.
void percc_fifo_fill(const SimEnv& env, SimState& st, CcId cc, std::deque<BurstId>& queue);

// One unified PRB pool over all CCs. Every free PRB, scanned in
// (cc, prb) order, goes to the backlogged burst whose user has the highest
// per-PRB rate on that CC; ties fall to the earliest arrival, then the
// lowest burst id. No QoS or QoC policy.
class JusScheduler : public Scheduler {
 public:
  explicit JusScheduler(const SimEnv& env);
  void on_arrival(const SimEnv& env, SimState& st, BurstId b) override;
  void fill_frame(const SimEnv& env, SimState& st) override;

 private:
  std::vector<BurstId> active_;  // arrival order
};

// Two-level scheme: a random dispatcher pins each user to one CC for its
// lifetime; an independent FIFO scheduler runs per CC.
class SrusScheduler : public Scheduler {
 public:
  explicit SrusScheduler(const SimEnv& env);
  void on_arrival(const SimEnv& env, SimState& st, BurstId b) override;
  void fill_frame(const SimEnv& env, SimState& st) override;

  CcId assign_user(const SimEnv& env, SimState& st, UserId user);
  std::optional<CcId> assigned_cc(UserId user) const;

 private:
  static constexpr CcId kUnassigned = 0xffff;
  std::vector<CcId> user_cc_;
  std::vector<std::deque<BurstId>> queues_;  // per cc, arrival order
};

// Two-level scheme dispatching at the burst level: circular dispatching
// rotates a global cursor per burst; least-load picks the CC minimizing
// outstanding dispatched bits relative to its PRB count.
class SblsScheduler : public Scheduler {
 public:
  enum class Dispatch { Circular, LeastLoad };
  SblsScheduler(const SimEnv& env, Dispatch policy);
  void on_arrival(const SimEnv& env, SimState& st, BurstId b) override;
  void fill_frame(const SimEnv& env, SimState& st) override;

  CcId dispatch(const SimEnv& env, SimState& st, BurstId b);
  std::optional<CcId> dispatched_cc(BurstId b) const;

 private:
  Dispatch policy_;
  std::size_t cursor_ = 0;
  std::vector<std::deque<BurstId>> queues_;
  std::vector<CcId> burst_cc_;
};

// QoS- and channel-aware scheme. GBR requests are admitted in priority
// order onto the user's SNR-ranked CCs with PRB reservations pinned for the
// service window, preempting lower-priority non-GBR holders when free PRBs
// run out. Non-GBR bursts are served elastically from the remaining PRBs.
// Holdings are re-optimized toward better-ranked CCs every frame.
class QscsScheduler : public Scheduler {
 public:
  explicit QscsScheduler(const SimEnv& env);
  void on_arrival(const SimEnv& env, SimState& st, BurstId b) override;
  void pre_schedule(const SimEnv& env, SimState& st) override;
  void fill_frame(const SimEnv& env, SimState& st) override;
  void on_retired(const SimEnv& env, SimState& st, BurstId b) override;

  struct AdmitOutcome {
    enum class Kind { Admitted, AdmittedWithPreemption, Queued, CapacityInfeasible };
    Kind kind = Kind::Queued;
    std::vector<BurstId> victims;
  };
  // Attempts to admit a GBR burst right now; commits reservations and
  // preemptions on success. The caller owns the burst's queue position.
  AdmitOutcome try_admit(const SimEnv& env, SimState& st, BurstId b);

  struct Migration {
    BurstId burst;
    CcId from;
    CcId to;
  };
  std::vector<Migration> reoptimize(const SimEnv& env, SimState& st);

  // Largest rate deliverable to this user with every PRB of its best CCs,
  // honoring the aggregation cap. Requests above it are capacity-infeasible.
  double attainable_bits_per_frame(const SimEnv& env, UserId user) const;

  const QciQueues& queues() const { return queues_; }
  bool has_hold(BurstId b) const { return holds_.count(b) != 0; }
  std::vector<std::pair<CcId, std::vector<std::uint16_t>>> hold_prbs(BurstId b) const;

 private:
  struct Hold {
    // (cc, sorted prb indices), ordered by the user's CC ranking
    std::vector<std::pair<CcId, std::vector<std::uint16_t>>> prbs;
    double required_bits_per_frame = 0;  // GBR pacing target
    bool reserved = false;
  };
  struct PlanEntry {
    CcId cc;
    std::vector<std::uint16_t> prbs;
  };

  struct PlanResult {
    std::vector<PlanEntry> entries;
    bool satisfied = false;
  };

  std::uint64_t capacity_bits_per_frame(const SimEnv& env, UserId user, const Hold& h) const;
  PlanResult plan_rate(const SimEnv& env, UserId user, double need_bits_per_frame,
                       const std::unordered_set<BurstId>& evictable, bool allow_partial) const;
  std::optional<BurstId> next_victim(const SimEnv& env, UserId claimant_user,
                                     const QciProfile& claimant,
                                     const std::unordered_set<BurstId>& chosen) const;
  void occupy(const SimEnv& env, BurstId b, Hold& hold, const std::vector<PlanEntry>& plan);
  void release_all(const SimEnv& env, BurstId b);
  void adjust_elastic(const SimEnv& env, SimState& st, BurstId b);
  int user_cc_count(const SimEnv& env, UserId user) const;

  std::vector<std::vector<BurstId>> occ_;  // persistent occupancy
  std::vector<int> occ_free_;
  std::map<BurstId, Hold> holds_;
  std::vector<std::vector<std::uint16_t>> user_cc_prbs_;  // [user][cc]
  std::vector<std::vector<std::size_t>> rank_pos_;        // [user][cc] -> rank index
  QciQueues queues_;
};

}  // namespace casim
