// SPDX-License-Identifier: Apache-2.0
#include "casim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace casim {

Workload generate_workload(const SimConfig& cfg) {
  validate_config(cfg);
  Workload w;
  Rng pop_rng(cfg.seed, "population");
  Rng traffic_rng(cfg.seed, "traffic");
  if (cfg.traffic.n_users == 0) return w;
  w.users = generate_population(cfg.traffic.n_users, cfg.cell_radius_m, pop_rng);
  for (const User& u : w.users) {
    auto bursts = generate_requests(u, cfg.traffic, cfg.horizon_ms, traffic_rng);
    w.bursts.insert(w.bursts.end(), bursts.begin(), bursts.end());
  }
  std::stable_sort(w.bursts.begin(), w.bursts.end(), [](const BurstSpec& a, const BurstSpec& b) {
    if (a.arrival_us != b.arrival_us) return a.arrival_us < b.arrival_us;
    return a.user < b.user;
  });
  for (std::size_t i = 0; i < w.bursts.size(); ++i) w.bursts[i].id = static_cast<BurstId>(i);
  return w;
}

SimEnv build_env(SimConfig cfg, Workload workload) {
  validate_config(cfg);
  SimEnv env;
  env.cfg = std::move(cfg);
  env.users = std::move(workload.users);
  env.bursts = std::move(workload.bursts);

  for (std::size_t i = 0; i < env.bursts.size(); ++i) {
    const auto& b = env.bursts[i];
    if (b.id != i) throw std::invalid_argument("burst ids must be dense and in arrival order");
    if (i > 0 && b.arrival_us < env.bursts[i - 1].arrival_us)
      throw std::invalid_argument("bursts must be sorted by arrival");
    if (b.user >= env.users.size()) throw std::invalid_argument("burst references unknown user");
    if (b.arrival_frame() >= env.cfg.horizon_ms)
      throw std::invalid_argument("burst arrives past the simulation horizon");
  }

  // Optional frozen log-normal shadowing, one draw per (user, cc). With the
  // default sigma of 0 the SNR is a pure function of distance and band.
  Rng shadow_rng(env.cfg.seed, "shadowing");
  env.radio.reserve(env.users.size());
  for (const User& u : env.users) {
    UserRadio r;
    r.snr_db.reserve(env.cfg.ccs.size());
    r.bits_per_prb_frame.reserve(env.cfg.ccs.size());
    for (const auto& cc : env.cfg.ccs) {
      double snr = snr_db(u.distance_m, cc, env.cfg.link);
      if (env.cfg.link.shadowing_sigma_db > 0)
        snr += shadow_rng.normal(0.0, env.cfg.link.shadowing_sigma_db);
      r.snr_db.push_back(snr);
      const double rate = prb_rate_bps(snr, env.cfg.link);
      r.bits_per_prb_frame.push_back(static_cast<std::uint64_t>(
          std::floor(rate * env.cfg.frame_ms / 1000.0)));
    }
    std::vector<std::pair<double, CcId>> keyed;
    for (const auto& cc : env.cfg.ccs) keyed.emplace_back(r.snr_db[cc.id], cc.id);
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (const auto& [snr, id] : keyed) {
      r.ranked_ccs.push_back(id);
      if (snr >= env.cfg.link.snr_min_db) r.covered_ranked_ccs.push_back(id);
    }
    r.best_cc = r.ranked_ccs.front();
    env.radio.push_back(std::move(r));
  }
  env.qci_precedence = env.cfg.qci_table.precedence_order();
  return env;
}

SimState::SimState(const SimEnv& env)
    : bursts(env.bursts.size()), grid(env.cfg.ccs), sched_rng(env.cfg.seed, "scheduler") {}

MetricsContext make_metrics_context(const SimEnv& env) {
  MetricsContext ctx;
  ctx.bursts = &env.bursts;
  ctx.best_cc_by_user.reserve(env.users.size());
  for (const auto& r : env.radio) ctx.best_cc_by_user.push_back(r.best_cc);
  for (int q : env.cfg.metric_gbr_qcis) ctx.metric_qci[q - 1] = true;
  ctx.bit_weighted = env.cfg.beta_qos_bit_weighted;
  return ctx;
}

RunResult run_simulation(const SimEnv& env, const RunOptions& opts) {
  SimState st(env);
  EventLog log;
  if (opts.retain_events) log.set_retain(opts.retain_events);
  if (opts.event_stream) log.set_stream(opts.event_stream);
  const MetricsContext ctx = make_metrics_context(env);
  MetricsCollector collector(ctx);
  log.add_observer([&collector](const Event& e) { collector.on_event(e); });
  if (opts.observer) log.add_observer(opts.observer);
  st.log = &log;

  auto scheduler = make_scheduler(env.cfg.scheduler, env);

  std::vector<BurstId> live;
  std::size_t next_arrival = 0;
  const std::uint64_t horizon = env.horizon_frames();

  for (std::uint64_t frame = 0; frame < horizon; ++frame) {
    st.frame = frame;

    while (next_arrival < env.bursts.size() &&
           env.bursts[next_arrival].arrival_frame() == frame) {
      const BurstId b = env.bursts[next_arrival].id;
      st.bursts[b].phase = Phase::Queued;
      log.emit({EventKind::Arrived, frame, b});
      scheduler->on_arrival(env, st, b);
      if (!is_terminal(st.bursts[b].phase)) live.push_back(b);
      ++next_arrival;
    }

    scheduler->pre_schedule(env, st);

    st.grid.clear();
    scheduler->fill_frame(env, st);

    // Credit painted PRBs in (cc, prb) scan order; a burst's achieved bits
    // are capped by its remaining size.
    for (std::size_t cc = 0; cc < st.grid.cc_count(); ++cc) {
      const int prbs = st.grid.prb_count(cc);
      for (int prb = 0; prb < prbs; ++prb) {
        const BurstId b = st.grid.at(cc, prb);
        if (b == kNoBurst) continue;
        BurstState& bs = st.bursts[b];
        const std::uint64_t bits =
            std::min(env.bits_per_frame(b, static_cast<CcId>(cc)),
                     env.bursts[b].size_bits - bs.served_bits);
        bs.served_bits += bits;
        if (bs.first_alloc_frame < 0) bs.first_alloc_frame = static_cast<std::int64_t>(frame);
        bs.last_alloc_frame = static_cast<std::int64_t>(frame);
        if (bs.phase == Phase::Queued || bs.phase == Phase::PreemptedRequeued)
          bs.phase = Phase::Active;
        log.emit({EventKind::Allocated, frame, b, static_cast<CcId>(cc),
                  static_cast<std::uint16_t>(prb), bits});
      }
    }

    // Retire completed bursts, then GBR bursts whose window has closed.
    std::size_t kept = 0;
    for (std::size_t i = 0; i < live.size(); ++i) {
      const BurstId b = live[i];
      BurstState& bs = st.bursts[b];
      if (is_terminal(bs.phase)) continue;  // rejected or already retired
      const bool complete = bs.served_bits >= env.bursts[b].size_bits;
      const bool window_over =
          env.gbr(env.bursts[b].qci) && frame + 1 >= env.window_end_frame(b);
      if (complete || window_over) {
        bs.phase = complete ? Phase::Done : Phase::Expired;
        bs.retire_frame = frame;
        log.emit({complete ? EventKind::Done : EventKind::Expired, frame, b});
        scheduler->on_retired(env, st, b);
      } else {
        live[kept++] = b;
      }
    }
    live.resize(kept);
  }

  for (const BurstId b : live) {
    BurstState& bs = st.bursts[b];
    if (is_terminal(bs.phase)) continue;
    bs.phase = Phase::Truncated;
    bs.retire_frame = horizon;
    log.emit({EventKind::Truncated, horizon, b});
    scheduler->on_retired(env, st, b);
  }

  RunResult result;
  result.metrics = collector.finalize();
  result.digest = log.digest();
  result.event_count = log.count();
  return result;
}

RunResult run_simulation(const SimConfig& cfg, const RunOptions& opts) {
  return run_simulation(build_env(cfg, generate_workload(cfg)), opts);
}

}  // namespace casim
