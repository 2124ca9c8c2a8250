// SPDX-License-Identifier: Apache-2.0
#include "casim/schedulers.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace casim;
using namespace casim::test;

namespace {

// One capped PRB-frame at 100 m carries exactly this many bits on any band.
constexpr std::uint64_t kCappedBits = 1080;

std::vector<Event> run_retained(const SimEnv& env) {
  std::vector<Event> events;
  RunOptions opts;
  opts.retain_events = &events;
  run_simulation(env, opts);
  return events;
}

void arrive(const SimEnv& env, SimState& st, Scheduler& sched, BurstId b) {
  st.bursts[b].phase = Phase::Queued;
  st.log->emit({EventKind::Arrived, st.frame, b});
  sched.on_arrival(env, st, b);
}

}  // namespace

TEST_CASE("JUS: empty queues produce no allocations") {
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4)},
                       .user_distances = {100},
                       .bursts = {},
                       .horizon_ms = 5,
                       .scheduler = SchedulerKind::Jus});
  const auto events = run_retained(env);
  CHECK(events.empty());
}

TEST_CASE("JUS: one burst draws PRBs from every carrier at once") {
  // 20 PRB-frames of demand against 12 PRBs across two CCs.
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4), make_cc(1, 1800, 1.4)},
                       .user_distances = {100},
                       .bursts = {burst(0, 0, 9, 0, 20 * kCappedBits)},
                       .horizon_ms = 10,
                       .scheduler = SchedulerKind::Jus});
  const auto events = run_retained(env);
  std::set<CcId> ccs_frame0;
  for (const auto& e : events)
    if (e.kind == EventKind::Allocated && e.frame == 0) ccs_frame0.insert(e.cc);
  CHECK(ccs_frame0 == std::set<CcId>{0, 1});
}

TEST_CASE("JUS: greedy max-rate with backlog-limited spillover") {
  // A at 100 m outranks B at 20 km on both same-band CCs. A's backlog spans
  // one CC only, so B picks up the other.
  const auto mk = [](std::uint64_t a_size) {
    return make_env({.ccs = {make_cc(0, 900, 1.4), make_cc(1, 900, 1.4)},
                     .user_distances = {100, 20'000},
                     .bursts = {burst(0, 0, 9, 0, a_size), burst(1, 1, 9, 0, 400 * kCappedBits)},
                     .horizon_ms = 1,
                     .scheduler = SchedulerKind::Jus});
  };

  auto events = run_retained(mk(6 * kCappedBits));
  std::map<BurstId, std::set<CcId>> by_burst;
  int a_prbs = 0;
  for (const auto& e : events)
    if (e.kind == EventKind::Allocated) {
      by_burst[e.burst].insert(e.cc);
      if (e.burst == 0) ++a_prbs;
    }
  CHECK(a_prbs == 6);
  CHECK(by_burst[0] == std::set<CcId>{0});
  CHECK(by_burst[1] == std::set<CcId>{1});  // leftover CC goes to B

  // With backlog spanning both carriers, A takes all twelve PRBs.
  events = run_retained(mk(12 * kCappedBits));
  int a_total = 0, b_total = 0;
  for (const auto& e : events)
    if (e.kind == EventKind::Allocated) (e.burst == 0 ? a_total : b_total) += 1;
  CHECK(a_total == 12);
  CHECK(b_total == 0);
}

TEST_CASE("SRUS: a lone carrier is the only assignment") {
  auto env = make_env({.ccs = {make_cc(0, 1800, 3)},
                       .user_distances = {5'000},
                       .bursts = {},
                       .scheduler = SchedulerKind::Srus});
  SimState st(env);
  EventLog log;
  st.log = &log;
  SrusScheduler sched(env);
  CHECK(sched.assign_user(env, st, 0) == 0);
}

TEST_CASE("SRUS: dispatcher is uniform over carriers and seed-stable") {
  constexpr int kUsers = 100'000;
  std::vector<double> distances(kUsers, 5'000.0);
  auto env = make_env({.ccs = preset_paper_6cc().ccs,
                       .user_distances = distances,
                       .bursts = {},
                       .scheduler = SchedulerKind::Srus});
  SimState st(env);
  EventLog log;
  st.log = &log;
  SrusScheduler sched(env);
  std::array<int, 6> counts{};
  for (UserId u = 0; u < kUsers; ++u) ++counts[sched.assign_user(env, st, u)];
  for (const int c : counts)
    CHECK(std::abs(static_cast<double>(c) / kUsers - 1.0 / 6.0) <= 0.03 * (1.0 / 6.0));

  SimState st2(env);
  st2.log = &log;
  SrusScheduler sched2(env);
  SimState st3(env);
  st3.log = &log;
  SrusScheduler sched3(env);
  for (UserId u = 0; u < 1'000; ++u)
    CHECK(sched2.assign_user(env, st2, u) == sched3.assign_user(env, st3, u));
}

TEST_CASE("SRUS: every allocation of a user lands on its assigned carrier") {
  SimConfig cfg = preset_shrunk();
  cfg.horizon_ms = 2'000;
  cfg.scheduler = SchedulerKind::Srus;
  cfg.seed = 11;
  const auto env = build_env(cfg, generate_workload(cfg));
  std::vector<Event> events;
  RunOptions opts;
  opts.retain_events = &events;
  run_simulation(env, opts);
  std::map<UserId, std::set<CcId>> per_user;
  for (const auto& e : events)
    if (e.kind == EventKind::Allocated) per_user[env.bursts[e.burst].user].insert(e.cc);
  CHECK(!per_user.empty());
  for (const auto& [user, ccs] : per_user) CHECK(ccs.size() == 1);
}

TEST_CASE("per-CC FIFO grants the head first, then the rest") {
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4)},
                       .user_distances = {100},
                       .bursts = {burst(0, 0, 9, 0, kCappedBits), burst(1, 0, 9, 0, 900 * kCappedBits)},
                       .horizon_ms = 1,
                       .scheduler = SchedulerKind::Srus});
  SimState st(env);
  EventLog log;
  st.log = &log;
  std::deque<BurstId> queue;

  SUBCASE("no bursts, no allocations") {
    percc_fifo_fill(env, st, 0, queue);
    for (int prb = 0; prb < 6; ++prb) CHECK(st.grid.is_free(0, prb));
  }

  SUBCASE("one-PRB head leaves the remainder to the next burst") {
    st.bursts[0].phase = Phase::Queued;
    st.bursts[1].phase = Phase::Queued;
    queue = {0, 1};
    percc_fifo_fill(env, st, 0, queue);
    CHECK(st.grid.at(0, 0) == 0);
    for (int prb = 1; prb < 6; ++prb) CHECK(st.grid.at(0, prb) == 1);
  }

  SUBCASE("an exhausted grid starves later bursts") {
    st.bursts[0].phase = Phase::Queued;
    st.bursts[1].phase = Phase::Queued;
    queue = {1, 0};
    percc_fifo_fill(env, st, 0, queue);
    for (int prb = 0; prb < 6; ++prb) CHECK(st.grid.at(0, prb) == 1);
  }
}

TEST_CASE("SBLS circular dispatching cycles regardless of the user") {
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4), make_cc(1, 1800, 1.4), make_cc(2, 2100, 1.4)},
                       .user_distances = {100, 5'000},
                       .bursts = {burst(0, 0, 9, 0, 1000), burst(1, 1, 9, 0, 1000),
                                  burst(2, 0, 9, 0, 1000), burst(3, 1, 9, 0, 1000)},
                       .horizon_ms = 1,
                       .scheduler = SchedulerKind::SblsCd});
  SimState st(env);
  EventLog log;
  st.log = &log;
  SblsScheduler sched(env, SblsScheduler::Dispatch::Circular);
  for (BurstId b = 0; b < 4; ++b) arrive(env, st, sched, b);
  CHECK(sched.dispatched_cc(0) == CcId{0});
  CHECK(sched.dispatched_cc(1) == CcId{1});
  CHECK(sched.dispatched_cc(2) == CcId{2});
  CHECK(sched.dispatched_cc(3) == CcId{0});
}

TEST_CASE("SBLS least-load weighs queued bits against bandwidth") {
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4), make_cc(1, 900, 5)},
                       .user_distances = {100},
                       .bursts = {burst(0, 0, 9, 0, 12'000'000), burst(1, 0, 9, 0, 40'000'000),
                                  burst(2, 0, 9, 0, 1'000)},
                       .horizon_ms = 1,
                       .scheduler = SchedulerKind::SblsLl});
  SimState st(env);
  EventLog log;
  st.log = &log;
  SblsScheduler sched(env, SblsScheduler::Dispatch::LeastLoad);
  // Empty carriers tie at zero load; the lowest id wins.
  arrive(env, st, sched, 0);
  CHECK(sched.dispatched_cc(0) == CcId{0});
  // 12 Mbit on 6 PRBs beats nothing on 25.
  arrive(env, st, sched, 1);
  CHECK(sched.dispatched_cc(1) == CcId{1});
  // 12/6 = 2.0 against 40/25 = 1.6: the wider carrier is less loaded.
  arrive(env, st, sched, 2);
  CHECK(sched.dispatched_cc(2) == CcId{1});
}

TEST_CASE("SBLS keeps each burst on one carrier, users may spread") {
  SimConfig cfg = preset_shrunk();
  cfg.horizon_ms = 2'000;
  cfg.scheduler = SchedulerKind::SblsCd;
  cfg.seed = 12;
  const auto env = build_env(cfg, generate_workload(cfg));
  std::vector<Event> events;
  RunOptions opts;
  opts.retain_events = &events;
  run_simulation(env, opts);
  std::map<BurstId, std::set<CcId>> per_burst;
  std::map<UserId, std::set<CcId>> per_user;
  for (const auto& e : events)
    if (e.kind == EventKind::Allocated) {
      per_burst[e.burst].insert(e.cc);
      per_user[env.bursts[e.burst].user].insert(e.cc);
    }
  CHECK(!per_burst.empty());
  for (const auto& [b, ccs] : per_burst) CHECK(ccs.size() == 1);
  bool any_user_spread = false;
  for (const auto& [u, ccs] : per_user) any_user_spread |= ccs.size() > 1;
  CHECK(any_user_spread);
}

TEST_CASE("QSCS admits a free-cell GBR request on its best carrier") {
  // 3.24 Mbps needs ceil(3240/1080) = 3 reserved PRBs.
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4), make_cc(1, 1800, 1.4)},
                       .user_distances = {100},
                       .bursts = {burst(0, 0, 2, 0, 3'240'000)},
                       .horizon_ms = 1'100,
                       .scheduler = SchedulerKind::Qscs});
  std::vector<Event> events;
  RunOptions opts;
  opts.retain_events = &events;
  const auto result = run_simulation(env, opts);

  std::set<std::pair<CcId, std::uint16_t>> slots;
  std::uint64_t last_alloc_frame = 0;
  for (const auto& e : events)
    if (e.kind == EventKind::Allocated) {
      slots.insert({e.cc, e.prb});
      last_alloc_frame = std::max(last_alloc_frame, e.frame);
    }
  // Exactly the reservation, every frame of the window until completion.
  CHECK(slots == std::set<std::pair<CcId, std::uint16_t>>{{0, 0}, {0, 1}, {0, 2}});
  CHECK(last_alloc_frame == 999);
  CHECK(result.metrics.n_completed == 1);
  CHECK(result.metrics.beta_qos == doctest::Approx(1.0));
}

TEST_CASE("QSCS preempts a lower-priority non-GBR holder when the cell is full") {
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4)},
                       .user_distances = {100, 100},
                       .bursts = {burst(0, 0, 7, 0, 100 * kCappedBits, 2'000),
                                  burst(1, 1, 2, 5, 3'240'000)},
                       .horizon_ms = 50,
                       .scheduler = SchedulerKind::Qscs});
  std::vector<Event> events;
  RunOptions opts;
  opts.retain_events = &events;
  run_simulation(env, opts);

  // Before the GBR arrival the elastic burst holds the whole carrier.
  int elastic_frame0 = 0;
  for (const auto& e : events)
    if (e.kind == EventKind::Allocated && e.frame == 0 && e.burst == 0) ++elastic_frame0;
  CHECK(elastic_frame0 == 6);

  const auto preempt = std::find_if(events.begin(), events.end(), [](const Event& e) {
    return e.kind == EventKind::Preempted;
  });
  REQUIRE(preempt != events.end());
  CHECK(preempt->frame == 5);
  CHECK(preempt->burst == 0);
  CHECK(preempt->other == 1);

  // Same frame: the claimant holds its 3 reserved PRBs and the victim
  // resumes from the head of its queue on the remaining 3.
  int claimant = 0, victim = 0;
  for (const auto& e : events)
    if (e.kind == EventKind::Allocated && e.frame == 5) (e.burst == 1 ? claimant : victim) += 1;
  CHECK(claimant == 3);
  CHECK(victim == 3);
}

TEST_CASE("QSCS leaves a weak claimant queued when nothing is preemptable") {
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4)},
                       .user_distances = {100, 100, 100},
                       .bursts = {burst(0, 0, 1, 0, 3'240'000),                    // GBR, 3 PRBs
                                  burst(1, 1, 8, 0, 200 * kCappedBits, 2'500),     // elastic pri 8
                                  burst(2, 2, 9, 3, 50 * kCappedBits, 2'500)},     // arrives last
                       .horizon_ms = 20,
                       .scheduler = SchedulerKind::Qscs});
  SimState st(env);
  EventLog log;
  st.log = &log;
  QscsScheduler sched(env);
  // Frames 0..2: the GBR reservation and the pri-8 elastic burst fill the CC.
  for (st.frame = 0; st.frame < 3; ++st.frame) {
    if (st.frame == 0) {
      arrive(env, st, sched, 0);
      arrive(env, st, sched, 1);
    }
    sched.pre_schedule(env, st);
    st.grid.clear();
    sched.fill_frame(env, st);
  }
  st.frame = 3;
  arrive(env, st, sched, 2);
  const auto outcome = sched.try_admit(env, st, 2);
  CHECK(outcome.kind == QscsScheduler::AdmitOutcome::Kind::Queued);
  CHECK(outcome.victims.empty());
}

TEST_CASE("QSCS rejects requests beyond the cell's attainable rate") {
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4)},
                       .user_distances = {100},
                       .bursts = {burst(0, 0, 2, 0, 10'000'000)},  // 6 PRBs give 6.48 Mbps
                       .horizon_ms = 20,
                       .scheduler = SchedulerKind::Qscs});
  std::vector<Event> events;
  RunOptions opts;
  opts.retain_events = &events;
  const auto result = run_simulation(env, opts);
  CHECK(result.metrics.n_rejected == 1);
  bool rejected = false, allocated = false;
  for (const auto& e : events) {
    rejected |= e.kind == EventKind::Rejected;
    allocated |= e.kind == EventKind::Allocated;
  }
  CHECK(rejected);
  CHECK(!allocated);
}

TEST_CASE("QSCS elastic service follows priority then queue order") {
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4)},
                       .user_distances = {100, 100},
                       .bursts = {burst(0, 0, 7, 0, 10 * 6 * kCappedBits),
                                  burst(1, 1, 7, 0, 10 * 6 * kCappedBits)},
                       .horizon_ms = 25,
                       .scheduler = SchedulerKind::Qscs});
  std::vector<Event> events;
  RunOptions opts;
  opts.retain_events = &events;
  run_simulation(env, opts);
  // Equal priority: the earlier-queued burst soaks the carrier first.
  for (const auto& e : events) {
    if (e.kind != EventKind::Allocated) continue;
    if (e.frame < 10) CHECK(e.burst == 0);
    if (e.frame > 10 && e.frame < 20) CHECK(e.burst == 1);
  }
}

TEST_CASE("QSCS re-optimization migrates toward freed better carriers") {
  // A qci-1 reservation pins the 900 MHz carrier for 200 ms, pushing the
  // qci-2 request onto 1800 MHz; when it clears, the request migrates back.
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4), make_cc(1, 1800, 1.4)},
                       .user_distances = {100, 100},
                       .bursts = {burst(0, 0, 1, 0, 6'480'000, 200),
                                  burst(1, 1, 2, 10, 3'240'000, 1'500)},
                       .horizon_ms = 600,
                       .scheduler = SchedulerKind::Qscs});
  std::vector<Event> events;
  RunOptions opts;
  opts.retain_events = &events;
  run_simulation(env, opts);

  std::vector<Event> migrations;
  for (const auto& e : events)
    if (e.kind == EventKind::Migrated) migrations.push_back(e);
  REQUIRE(migrations.size() == 1);  // then it sits on its best CC: no churn
  CHECK(migrations[0].burst == 1);
  CHECK(migrations[0].cc == 1);
  CHECK(migrations[0].cc_to == 0);
  CHECK(migrations[0].frame == 200);

  for (const auto& e : events) {
    if (e.kind != EventKind::Allocated || e.burst != 1) continue;
    if (e.frame < 200) CHECK(e.cc == 1);
    if (e.frame > 200) CHECK(e.cc == 0);
  }
}

TEST_CASE("QSCS never migrates onto a better carrier that lacks room") {
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4), make_cc(1, 1800, 1.4)},
                       .user_distances = {100, 100},
                       .bursts = {burst(0, 0, 1, 0, 5'400'000, 2'000),  // 5 of 6 PRBs on cc0
                                  burst(1, 1, 2, 10, 3'240'000, 1'500)},
                       .horizon_ms = 1'000,
                       .scheduler = SchedulerKind::Qscs});
  std::vector<Event> events;
  RunOptions opts;
  opts.retain_events = &events;
  run_simulation(env, opts);
  for (const auto& e : events) CHECK(e.kind != EventKind::Migrated);
}

TEST_CASE("QSCS aggregation stops at five carriers") {
  std::vector<ComponentCarrier> ccs;
  for (CcId i = 0; i < 6; ++i) ccs.push_back(make_cc(i, 900, 1.4));
  // 32.4 Mbps = 30 capped PRBs = exactly five 1.4 MHz carriers.
  auto env = make_env({.ccs = ccs,
                       .user_distances = {100},
                       .bursts = {burst(0, 0, 2, 0, 32'400'000)},
                       .horizon_ms = 1'050,
                       .scheduler = SchedulerKind::Qscs});
  std::vector<Event> events;
  RunOptions opts;
  opts.retain_events = &events;
  const auto result = run_simulation(env, opts);
  CHECK(result.metrics.n_completed == 1);
  std::map<std::uint64_t, std::set<CcId>> per_frame;
  for (const auto& e : events)
    if (e.kind == EventKind::Allocated) per_frame[e.frame].insert(e.cc);
  for (const auto& [frame, set] : per_frame) CHECK(set.size() == 5);

  // One more PRB-frame of rate cannot fit under the cap: rejected.
  auto over = make_env({.ccs = ccs,
                        .user_distances = {100},
                        .bursts = {burst(0, 0, 2, 0, 32'401'000)},
                        .horizon_ms = 10,
                        .scheduler = SchedulerKind::Qscs});
  CHECK(run_simulation(over).metrics.n_rejected == 1);
}

TEST_CASE("legacy users are confined to shared carriers") {
  auto env = make_env({.ccs = {make_cc(0, 900, 1.4, CcClass::LteAOnly),
                               make_cc(1, 1800, 1.4, CcClass::Shared)},
                       .user_distances = {100, 100},
                       .bursts = {burst(0, 0, 9, 0, 40 * kCappedBits),
                                  burst(1, 0, 2, 0, 2'000'000),
                                  burst(2, 1, 9, 0, 40 * kCappedBits)},
                       .horizon_ms = 30,
                       .scheduler = SchedulerKind::Jus});
  env.users[0].type = UserType::LegacyLte;

  SimState st(env);
  EventLog log;
  st.log = &log;
  SrusScheduler srus(env);
  for (int i = 0; i < 50; ++i) CHECK(srus.assign_user(env, st, 0) == 1);
  CHECK(env.accessible(1, 0));  // the LTE-A user still sees both

  SblsScheduler sbls(env, SblsScheduler::Dispatch::Circular);
  arrive(env, st, sbls, 0);
  arrive(env, st, sbls, 2);
  CHECK(sbls.dispatched_cc(0) == CcId{1});

  // JUS and QSCS never place the legacy user's bursts on the LTE-A-only CC.
  for (const auto kind : {SchedulerKind::Jus, SchedulerKind::Qscs}) {
    auto run_env = env;
    run_env.cfg.scheduler = kind;
    std::vector<Event> events;
    RunOptions opts;
    opts.retain_events = &events;
    run_simulation(run_env, opts);
    bool saw_user0 = false;
    for (const auto& e : events)
      if (e.kind == EventKind::Allocated && run_env.bursts[e.burst].user == 0) {
        saw_user0 = true;
        CHECK(e.cc == 1);
      }
    CHECK(saw_user0);
  }
}
