// SPDX-License-Identifier: Apache-2.0
#include "casim/metrics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace casim {

double qoe_coefficient(double beta_qos, double beta_opt_cc) {
  if (!(beta_qos >= 0.0 && beta_qos <= 1.0))
    throw std::domain_error("beta_qos outside [0, 1]");
  if (!(beta_opt_cc >= 0.0 && beta_opt_cc <= 1.0))
    throw std::domain_error("beta_opt_cc outside [0, 1]");
  return beta_qos * beta_opt_cc;
}

MetricsCollector::MetricsCollector(const MetricsContext& ctx) : ctx_(ctx) {
  per_burst_.resize(ctx.bursts->size());
}

void MetricsCollector::on_event(const Event& e) {
  switch (e.kind) {
    case EventKind::Arrived:
      per_burst_[e.burst].arrived = true;
      ++report_.n_arrived;
      report_.offered_bits += (*ctx_.bursts)[e.burst].size_bits;
      break;
    case EventKind::Allocated: {
      auto& b = per_burst_[e.burst];
      b.served += e.bits;
      const auto frame = static_cast<std::int64_t>(e.frame);
      if (b.first_alloc < 0 || frame < b.first_alloc) b.first_alloc = frame;
      if (frame > b.last_alloc) b.last_alloc = frame;
      ++report_.total_allocations;
      report_.served_bits += e.bits;
      const UserId user = (*ctx_.bursts)[e.burst].user;
      if (user < ctx_.best_cc_by_user.size() && ctx_.best_cc_by_user[user] == e.cc)
        ++report_.best_cc_allocations;
      break;
    }
    case EventKind::Preempted:
      ++report_.n_preemptions;
      break;
    case EventKind::Migrated:
      ++report_.n_migrations;
      break;
    case EventKind::Done:
      per_burst_[e.burst].completed = true;
      ++report_.n_completed;
      break;
    case EventKind::Expired:
      per_burst_[e.burst].expired = true;
      per_burst_[e.burst].retire_frame = e.frame;
      ++report_.n_expired;
      break;
    case EventKind::Truncated:
      ++report_.n_truncated;
      break;
    case EventKind::Rejected:
      ++report_.n_rejected;
      break;
  }
}

MetricsReport MetricsCollector::finalize() const {
  MetricsReport r = report_;
  std::map<int, double> sojourn_sum, span_sum;
  std::map<int, std::uint64_t> count, span_count;
  double fulfillment_sum = 0;
  std::uint64_t qualifying = 0;
  std::uint64_t q_served = 0, q_size = 0;

  for (std::size_t i = 0; i < per_burst_.size(); ++i) {
    const auto& b = per_burst_[i];
    if (!b.arrived) continue;
    const BurstSpec& spec = (*ctx_.bursts)[i];
    // Sojourn covers every burst that departed before the horizon. A fully
    // served burst departs at the end of the frame carrying its last
    // resource block, so one finished within its arrival frame sojourns
    // exactly one frame. A GBR burst retired at its window end departs
    // there, whatever it was allocated. Horizon-truncated and rejected
    // bursts are censored and excluded; the report carries their counts so
    // denominators stay auditable.
    if (b.completed || b.expired) {
      const double departure = b.completed ? static_cast<double>(b.last_alloc + 1)
                                           : static_cast<double>(b.retire_frame + 1);
      sojourn_sum[spec.qci] += departure - static_cast<double>(spec.arrival_frame());
      count[spec.qci] += 1;
      if (b.first_alloc >= 0) {
        span_sum[spec.qci] += static_cast<double>(b.last_alloc - b.first_alloc + 1);
        span_count[spec.qci] += 1;
      }
    }
    if (ctx_.metric_qci[spec.qci - 1]) {
      ++qualifying;
      const std::uint64_t served = std::min(b.served, spec.size_bits);
      fulfillment_sum += static_cast<double>(served) / static_cast<double>(spec.size_bits);
      q_served += served;
      q_size += spec.size_bits;
    }
  }

  for (const auto& [qci, n] : count) {
    r.sojourn_ms_by_qci[qci] = sojourn_sum[qci] / static_cast<double>(n);
    r.completed_by_qci[qci] = n;
  }
  for (const auto& [qci, n] : span_count)
    r.service_span_ms_by_qci[qci] = span_sum[qci] / static_cast<double>(n);
  if (r.total_allocations > 0)
    r.beta_opt_cc = static_cast<double>(r.best_cc_allocations) /
                    static_cast<double>(r.total_allocations);
  if (qualifying > 0)
    r.beta_qos = ctx_.bit_weighted
                     ? static_cast<double>(q_served) / static_cast<double>(q_size)
                     : fulfillment_sum / static_cast<double>(qualifying);
  if (r.beta_opt_cc && r.beta_qos)
    r.alpha_sch_qoe = qoe_coefficient(*r.beta_qos, *r.beta_opt_cc);
  return r;
}

MetricsReport compute_metrics(const MetricsContext& ctx, std::span<const Event> events) {
  MetricsCollector collector(ctx);
  for (const Event& e : events) collector.on_event(e);
  return collector.finalize();
}

std::optional<std::uint64_t> sojourn_ms_from_events(std::span<const Event> events, BurstId burst,
                                                    std::uint64_t arrival_frame) {
  std::int64_t last = -1;
  bool completed = false;
  for (const Event& e : events) {
    if (e.burst != burst) continue;
    if (e.kind == EventKind::Allocated)
      last = std::max(last, static_cast<std::int64_t>(e.frame));
    if (e.kind == EventKind::Done || e.kind == EventKind::Expired) completed = true;
    if (e.kind == EventKind::Truncated || e.kind == EventKind::Rejected)
      return std::nullopt;
  }
  if (!completed || last < 0) return std::nullopt;
  return static_cast<std::uint64_t>(last + 1) - arrival_frame;
}

std::optional<double> best_cc_fraction(const MetricsContext& ctx,
                                       std::span<const Event> events) {
  return compute_metrics(ctx, events).beta_opt_cc;
}

std::optional<double> gbr_fulfillment(const MetricsContext& ctx,
                                      std::span<const Event> events) {
  return compute_metrics(ctx, events).beta_qos;
}

namespace {

void append_qci_map(std::ostringstream& out, const char* name,
                    const std::map<int, double>& m) {
  out << "\"" << name << "\":{";
  bool first = true;
  for (const auto& [qci, v] : m) {
    if (!first) out << ",";
    first = false;
    out << "\"" << qci << "\":" << v;
  }
  out << "}";
}

void append_opt(std::ostringstream& out, const char* name, const std::optional<double>& v) {
  out << "\"" << name << "\":";
  if (v)
    out << *v;
  else
    out << "null";
}

}  // namespace

std::string to_json(const MetricsReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "{";
  append_qci_map(out, "sojourn_ms_by_qci", r.sojourn_ms_by_qci);
  out << ",";
  append_qci_map(out, "service_span_ms_by_qci", r.service_span_ms_by_qci);
  out << ",\"completed_by_qci\":{";
  bool first = true;
  for (const auto& [qci, n] : r.completed_by_qci) {
    if (!first) out << ",";
    first = false;
    out << "\"" << qci << "\":" << n;
  }
  out << "},";
  append_opt(out, "beta_opt_cc", r.beta_opt_cc);
  out << ",";
  append_opt(out, "beta_qos", r.beta_qos);
  out << ",";
  append_opt(out, "alpha_sch_qoe", r.alpha_sch_qoe);
  out << ",\"counts\":{"
      << "\"arrived\":" << r.n_arrived << ",\"completed\":" << r.n_completed
      << ",\"expired\":" << r.n_expired << ",\"truncated\":" << r.n_truncated
      << ",\"rejected\":" << r.n_rejected << ",\"preemptions\":" << r.n_preemptions
      << ",\"migrations\":" << r.n_migrations << "},"
      << "\"total_allocations\":" << r.total_allocations
      << ",\"best_cc_allocations\":" << r.best_cc_allocations
      << ",\"served_bits\":" << r.served_bits << ",\"offered_bits\":" << r.offered_bits
      << ",\"no_data\":" << (r.no_data() ? "true" : "false") << "}";
  return out.str();
}

}  // namespace casim
