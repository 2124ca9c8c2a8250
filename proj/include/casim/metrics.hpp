// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "casim/event.hpp"
#include "casim/traffic.hpp"
#include "casim/types.hpp"

namespace casim {

// alpha = beta_qos * beta_opt_cc. Inputs must lie in [0, 1].
double qoe_coefficient(double beta_qos, double beta_opt_cc);

// Static inputs the metric computations need alongside the event stream.
struct MetricsContext {
  const std::vector<BurstSpec>* bursts = nullptr;
  std::vector<CcId> best_cc_by_user;      // head of each user's CC ranking
  std::array<bool, 9> metric_qci{};       // beta_qos population (default QCI 2..5)
  bool bit_weighted = false;
};

struct MetricsReport {
  // Arrival-to-departure sojourn over bursts that left the system before
  // the horizon: fully served bursts depart with their last allocated RB,
  // GBR bursts retired at their window end depart there. Horizon-truncated
  // and rejected bursts are excluded.
  std::map<int, double> sojourn_ms_by_qci;
  // Secondary column: first-to-last allocated resource block.
  std::map<int, double> service_span_ms_by_qci;
  std::map<int, std::uint64_t> completed_by_qci;

  std::optional<double> beta_opt_cc;
  std::optional<double> beta_qos;
  std::optional<double> alpha_sch_qoe;

  std::uint64_t n_arrived = 0;
  std::uint64_t n_completed = 0;
  std::uint64_t n_expired = 0;
  std::uint64_t n_truncated = 0;
  std::uint64_t n_rejected = 0;
  std::uint64_t n_preemptions = 0;
  std::uint64_t n_migrations = 0;
  std::uint64_t total_allocations = 0;
  std::uint64_t best_cc_allocations = 0;
  std::uint64_t served_bits = 0;
  std::uint64_t offered_bits = 0;

  bool no_data() const { return n_arrived == 0; }
};

// Streaming accumulator; all per-frame statistics are order-independent
// within a frame, so metrics are invariant under intra-frame reordering.
class MetricsCollector {
 public:
  explicit MetricsCollector(const MetricsContext& ctx);

  void on_event(const Event& e);
  MetricsReport finalize() const;

 private:
  struct PerBurst {
    std::uint64_t served = 0;
    std::int64_t first_alloc = -1;
    std::int64_t last_alloc = -1;
    std::uint64_t retire_frame = 0;
    bool arrived = false;
    bool completed = false;
    bool expired = false;
  };
  const MetricsContext& ctx_;
  std::vector<PerBurst> per_burst_;
  MetricsReport report_;
};

MetricsReport compute_metrics(const MetricsContext& ctx, std::span<const Event> events);

// Spec-level helpers over a recorded event stream.
std::optional<std::uint64_t> sojourn_ms_from_events(std::span<const Event> events, BurstId burst,
                                                    std::uint64_t arrival_frame);
std::optional<double> best_cc_fraction(const MetricsContext& ctx, std::span<const Event> events);
std::optional<double> gbr_fulfillment(const MetricsContext& ctx, std::span<const Event> events);

std::string to_json(const MetricsReport& report);

}  // namespace casim
