// SPDX-License-Identifier: Apache-2.0
#include "casim/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "casim/engine.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace casim;
using namespace casim::test;

namespace {

struct Fixture {
  std::vector<BurstSpec> bursts;
  MetricsContext ctx;

  explicit Fixture(std::vector<BurstSpec> specs) : bursts(std::move(specs)) {
    ctx.bursts = &bursts;
    ctx.best_cc_by_user = {0, 0};
    for (int q = 2; q <= 5; ++q) ctx.metric_qci[q - 1] = true;
  }
};

}  // namespace

TEST_CASE("qoe coefficient is the plain product with domain checks") {
  CHECK(qoe_coefficient(1.0, 1.0) == 1.0);
  CHECK(qoe_coefficient(0.0, 0.7) == 0.0);
  CHECK(qoe_coefficient(0.8, 0.9) == doctest::Approx(0.72));
  CHECK_THROWS_AS(qoe_coefficient(-0.1, 0.5), std::domain_error);
  CHECK_THROWS_AS(qoe_coefficient(0.5, 1.1), std::domain_error);

  Rng rng(2, "qoe");
  double prev = 0;
  for (int i = 0; i < 100; ++i) {
    const double x = static_cast<double>(i) / 100.0;
    const double v = qoe_coefficient(x, 0.5);
    CHECK(v >= prev);  // monotone in each argument
    prev = v;
  }
}

TEST_CASE("sojourn spans arrival to the last allocated resource block") {
  Fixture fx({burst(0, 0, 3, 0, 1'000)});

  SUBCASE("served within the arrival frame: one millisecond") {
    const std::vector<Event> events{{EventKind::Arrived, 4, 0},
                                    {EventKind::Allocated, 4, 0, 0, 0, 1'000},
                                    {EventKind::Done, 4, 0}};
    CHECK(sojourn_ms_from_events(events, 0, 4) == 1);
    fx.bursts[0].arrival_us = 4'000;
    const auto report = compute_metrics(fx.ctx, events);
    CHECK(report.sojourn_ms_by_qci.at(3) == doctest::Approx(1.0));
    CHECK(report.service_span_ms_by_qci.at(3) == doctest::Approx(1.0));
  }

  SUBCASE("queued five frames then served over three: eight milliseconds") {
    const std::vector<Event> events{{EventKind::Arrived, 0, 0},
                                    {EventKind::Allocated, 5, 0, 0, 0, 400},
                                    {EventKind::Allocated, 6, 0, 0, 0, 400},
                                    {EventKind::Allocated, 7, 0, 0, 0, 200},
                                    {EventKind::Done, 7, 0}};
    CHECK(sojourn_ms_from_events(events, 0, 0) == 8);
    const auto report = compute_metrics(fx.ctx, events);
    CHECK(report.sojourn_ms_by_qci.at(3) == doctest::Approx(8.0));
    CHECK(report.service_span_ms_by_qci.at(3) == doctest::Approx(3.0));
  }

  SUBCASE("a preemption gap stays inside the interval") {
    const std::vector<Event> events{{EventKind::Arrived, 0, 0},
                                    {EventKind::Allocated, 0, 0, 0, 0, 400},
                                    {EventKind::Preempted, 1, 0, 0, 0, 0, 0, 9},
                                    {EventKind::Allocated, 5, 0, 0, 0, 400},
                                    {EventKind::Allocated, 6, 0, 0, 0, 200},
                                    {EventKind::Done, 6, 0}};
    CHECK(sojourn_ms_from_events(events, 0, 0) == 7);
    const auto report = compute_metrics(fx.ctx, events);
    CHECK(report.sojourn_ms_by_qci.at(3) == doctest::Approx(7.0));
    CHECK(report.service_span_ms_by_qci.at(3) == doctest::Approx(7.0));
    CHECK(report.n_preemptions == 1);
  }

  SUBCASE("an expired burst departs at its window end") {
    const std::vector<Event> events{{EventKind::Arrived, 0, 0},
                                    {EventKind::Allocated, 1, 0, 0, 0, 400},
                                    {EventKind::Expired, 9, 0}};
    const auto report = compute_metrics(fx.ctx, events);
    CHECK(report.sojourn_ms_by_qci.at(3) == doctest::Approx(10.0));
    CHECK(report.n_expired == 1);
  }

  SUBCASE("truncated bursts are censored") {
    const std::vector<Event> events{{EventKind::Arrived, 0, 0},
                                    {EventKind::Allocated, 1, 0, 0, 0, 400},
                                    {EventKind::Truncated, 10, 0}};
    CHECK(!sojourn_ms_from_events(events, 0, 0).has_value());
    const auto report = compute_metrics(fx.ctx, events);
    CHECK(report.sojourn_ms_by_qci.empty());
    CHECK(report.n_truncated == 1);
  }
}

TEST_CASE("best-CC fraction counts PRB-frames on each user's ranking head") {
  Fixture fx({burst(0, 0, 3, 0, 1'000), burst(1, 1, 7, 0, 1'000)});
  const std::vector<Event> events{
      {EventKind::Arrived, 0, 0},
      {EventKind::Arrived, 0, 1},
      {EventKind::Allocated, 0, 0, 0, 0, 100},  // user 0 on its best CC
      {EventKind::Allocated, 0, 0, 0, 1, 100},
      {EventKind::Allocated, 0, 1, 1, 0, 100},  // user 1 off its best CC
      {EventKind::Allocated, 1, 1, 0, 0, 100},
  };
  CHECK(best_cc_fraction(fx.ctx, events) == doctest::Approx(0.75));

  // Single-carrier system: every allocation is on the best CC.
  Fixture single({burst(0, 0, 3, 0, 1'000)});
  const std::vector<Event> one{{EventKind::Arrived, 0, 0},
                               {EventKind::Allocated, 0, 0, 0, 0, 100}};
  CHECK(best_cc_fraction(single.ctx, one) == doctest::Approx(1.0));
  CHECK(!best_cc_fraction(single.ctx, {}).has_value());
}

TEST_CASE("GBR fulfillment averages served fractions over QCI 2..5") {
  Fixture fx({burst(0, 0, 2, 0, 1'000),    // size 1000 bits
              burst(1, 1, 4, 0, 1'000),    // size 1000 bits
              burst(2, 0, 7, 0, 1'000)});  // non-GBR: ignored by the metric
  const std::vector<Event> events{
      {EventKind::Arrived, 0, 0},
      {EventKind::Arrived, 0, 1},
      {EventKind::Arrived, 0, 2},
      {EventKind::Allocated, 0, 0, 0, 0, 1'000},
      {EventKind::Done, 0, 0},
      {EventKind::Allocated, 1, 1, 0, 1, 500},
      {EventKind::Expired, 3, 1},
  };
  CHECK(gbr_fulfillment(fx.ctx, events) == doctest::Approx(0.75));

  MetricsContext weighted = fx.ctx;
  weighted.bit_weighted = true;
  CHECK(gbr_fulfillment(weighted, events) == doctest::Approx(1'500.0 / 2'000.0));

  Fixture none({burst(0, 0, 7, 0, 1'000)});
  const std::vector<Event> only_elastic{{EventKind::Arrived, 0, 0}};
  CHECK(!gbr_fulfillment(none.ctx, only_elastic).has_value());
}

TEST_CASE("metrics are invariant under reordering within a frame") {
  SimConfig cfg = preset_shrunk();
  cfg.horizon_ms = 1'000;
  cfg.seed = 23;
  cfg.scheduler = SchedulerKind::Qscs;
  const auto env = build_env(cfg, generate_workload(cfg));
  std::vector<Event> events;
  RunOptions opts;
  opts.retain_events = &events;
  run_simulation(env, opts);
  REQUIRE(!events.empty());

  const auto ctx = make_metrics_context(env);
  const auto base = compute_metrics(ctx, events);

  std::vector<Event> shuffled = events;
  std::stable_sort(shuffled.begin(), shuffled.end(), [](const Event& a, const Event& b) {
    if (a.frame != b.frame) return a.frame < b.frame;
    return static_cast<int>(a.kind) > static_cast<int>(b.kind);  // reorder inside frames
  });
  const auto reordered = compute_metrics(ctx, shuffled);

  CHECK(base.sojourn_ms_by_qci == reordered.sojourn_ms_by_qci);
  CHECK(base.beta_opt_cc == reordered.beta_opt_cc);
  CHECK(base.beta_qos == reordered.beta_qos);
  CHECK(base.alpha_sch_qoe == reordered.alpha_sch_qoe);
  CHECK(base.total_allocations == reordered.total_allocations);
}

TEST_CASE("the QoE coefficient composes exactly in every report") {
  SimConfig cfg = preset_shrunk();
  cfg.horizon_ms = 1'000;
  for (const auto kind : {SchedulerKind::Jus, SchedulerKind::Qscs}) {
    cfg.scheduler = kind;
    const auto result = run_simulation(cfg);
    REQUIRE(result.metrics.beta_qos.has_value());
    REQUIRE(result.metrics.beta_opt_cc.has_value());
    CHECK(*result.metrics.alpha_sch_qoe ==
          *result.metrics.beta_qos * *result.metrics.beta_opt_cc);
  }
}

TEST_CASE("report serializes to json with null markers for missing data") {
  MetricsReport empty;
  const auto text = to_json(empty);
  CHECK(text.find("\"beta_opt_cc\":null") != std::string::npos);
  CHECK(text.find("\"no_data\":true") != std::string::npos);
}
