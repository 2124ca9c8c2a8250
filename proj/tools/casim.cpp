// SPDX-License-Identifier: Apache-2.0
//
// casim - downlink carrier-aggregation scheduling simulator.
// Runs a (scheduler x seed) matrix over a shared per-seed workload and emits
// per-run reports, the fig6..fig9 CSV tables and replay files.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "casim/config.hpp"
#include "casim/engine.hpp"

namespace fs = std::filesystem;
using namespace casim;

namespace {

int g_log_level = 2;  // 0 error, 1 warn, 2 info, 3 debug
std::mutex g_io_mutex;

void init_log_level() {
  const char* env = std::getenv("CASIM_LOG_LEVEL");
  if (!env) return;
  const std::string v = env;
  if (v == "error") g_log_level = 0;
  else if (v == "warn") g_log_level = 1;
  else if (v == "info") g_log_level = 2;
  else if (v == "debug") g_log_level = 3;
  else std::cerr << "casim: ignoring unknown CASIM_LOG_LEVEL '" << v << "'\n";
}

void log_line(int level, const std::string& msg) {
  if (level > g_log_level) return;
  std::lock_guard<std::mutex> lock(g_io_mutex);
  std::cerr << msg << '\n';
}

// Atomic file write: temp file in the same directory, then rename.
void write_file_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string hex_digest(std::uint64_t digest) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

struct Cell {
  SchedulerKind scheduler;
  std::uint64_t seed;
  bool ok = false;
  std::string error;
  RunResult result;
};

std::string csv_double(std::optional<double> v) {
  if (!v) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", *v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  init_log_level();
  CLI::App app{"downlink carrier-aggregation scheduling simulator"};

  std::string config_path;
  std::string preset_name = "paper-6cc";
  std::vector<std::string> scheduler_names;
  std::vector<std::uint64_t> seeds;
  std::string out_dir = "out";
  bool emit_replay = false;
  bool emit_events = false;
  bool compare = false;
  unsigned jobs = 1;

  app.add_option("--config", config_path, "config file applied on top of the preset");
  app.add_option("--preset", preset_name, "scenario preset: paper-6cc or shrunk")
      ->capture_default_str();
  app.add_option("--scheduler", scheduler_names,
                 "scheduler to run (repeatable): JUS, SRUS, SBLS-CD, SBLS-LL, QSCS");
  app.add_option("--seed", seeds, "rng seed (repeatable)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_flag("--emit-replay", emit_replay, "write the per-seed workload replay files");
  app.add_flag("--emit-events", emit_events, "write per-run event logs (one line per event)");
  app.add_flag("--compare", compare,
               "run all five schedulers (unless --scheduler given) and write comparison.csv");
  app.add_option("--jobs", jobs, "max concurrent runs")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  SimConfig base;
  try {
    base = preset(preset_name);
    if (!config_path.empty()) base = load_config_file(config_path, base);
    validate_config(base);
  } catch (const std::exception& e) {
    std::cerr << "casim: config error: " << e.what() << '\n';
    return 2;
  }

  std::vector<SchedulerKind> schedulers;
  try {
    for (const auto& name : scheduler_names)
      schedulers.push_back(scheduler_kind_from_string(name));
  } catch (const std::exception& e) {
    std::cerr << "casim: " << e.what() << '\n';
    return 2;
  }
  if (schedulers.empty()) {
    if (compare)
      schedulers = {SchedulerKind::Jus, SchedulerKind::Srus, SchedulerKind::SblsCd,
                    SchedulerKind::SblsLl, SchedulerKind::Qscs};
    else
      schedulers = {base.scheduler};
  }
  if (seeds.empty()) seeds = {base.seed};

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "casim: cannot create output directory " << out_dir << '\n';
    return 2;
  }

  // One workload per seed, shared byte-identically by every scheduler.
  std::map<std::uint64_t, Workload> workloads;
  for (const std::uint64_t seed : seeds) {
    SimConfig cfg = base;
    cfg.seed = seed;
    workloads[seed] = generate_workload(cfg);
    if (emit_replay) {
      std::ostringstream ss;
      write_replay(ss, workloads[seed].bursts);
      write_file_atomic(fs::path(out_dir) / ("workload_s" + std::to_string(seed) + ".replay"),
                        ss.str());
    }
  }

  std::vector<Cell> cells;
  for (const auto kind : schedulers)
    for (const std::uint64_t seed : seeds) cells.push_back(Cell{kind, seed});

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      Cell& cell = cells[i];
      try {
        SimConfig cfg = base;
        cfg.scheduler = cell.scheduler;
        cfg.seed = cell.seed;
        const SimEnv env = build_env(cfg, workloads[cell.seed]);
        RunOptions opts;
        std::ostringstream events;
        if (emit_events) opts.event_stream = &events;
        cell.result = run_simulation(env, opts);
        if (emit_events) {
          const std::string name = std::string("events_") + to_string(cell.scheduler) + "_s" +
                                   std::to_string(cell.seed) + ".log";
          write_file_atomic(fs::path(out_dir) / name, events.str());
        }
        cell.ok = true;
        const auto& m = cell.result.metrics;
        std::ostringstream line;
        line << "[casim] " << to_string(cell.scheduler) << " seed=" << cell.seed
             << " digest=" << hex_digest(cell.result.digest) << " arrived=" << m.n_arrived
             << " completed=" << m.n_completed << " beta_opt_cc=" << csv_double(m.beta_opt_cc)
             << " beta_qos=" << csv_double(m.beta_qos)
             << " alpha=" << csv_double(m.alpha_sch_qoe);
        log_line(2, line.str());
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
        log_line(0, std::string("[casim] run failed: ") + to_string(cell.scheduler) + " seed=" +
                        std::to_string(cell.seed) + ": " + e.what());
      }
    }
  };
  {
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, cells.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t + 1 < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  // Per-run reports and the four figure tables.
  std::ostringstream fig6, fig7, fig8, fig9, manifest;
  fig6 << "scheduler,seed,qci,mean_sojourn_ms,n_completed\n";
  fig7 << "scheduler,seed,beta_opt_cc\n";
  fig8 << "scheduler,seed,beta_qos\n";
  fig9 << "scheduler,seed,alpha_sch_qoe\n";
  bool all_ok = true;
  for (const Cell& cell : cells) {
    const std::string name = to_string(cell.scheduler);
    if (!cell.ok) {
      all_ok = false;
      manifest << name << "," << cell.seed << ",failed: " << cell.error << '\n';
      continue;
    }
    manifest << name << "," << cell.seed << ",ok\n";
    const auto& m = cell.result.metrics;
    for (const auto& [qci, mean] : m.sojourn_ms_by_qci) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f", mean);
      fig6 << name << "," << cell.seed << "," << qci << "," << buf << ","
           << m.completed_by_qci.at(qci) << '\n';
    }
    fig7 << name << "," << cell.seed << "," << csv_double(m.beta_opt_cc) << '\n';
    fig8 << name << "," << cell.seed << "," << csv_double(m.beta_qos) << '\n';
    fig9 << name << "," << cell.seed << "," << csv_double(m.alpha_sch_qoe) << '\n';

    std::ostringstream report;
    report << "{\"scheduler\":\"" << name << "\",\"seed\":" << cell.seed << ",\"digest\":\""
           << hex_digest(cell.result.digest) << "\",\"events\":" << cell.result.event_count
           << ",\"metrics\":" << to_json(m) << "}\n";
    write_file_atomic(fs::path(out_dir) /
                          ("report_" + name + "_s" + std::to_string(cell.seed) + ".json"),
                      report.str());
  }
  write_file_atomic(fs::path(out_dir) / "fig6_sojourn.csv", fig6.str());
  write_file_atomic(fs::path(out_dir) / "fig7_bestcc.csv", fig7.str());
  write_file_atomic(fs::path(out_dir) / "fig8_gbr.csv", fig8.str());
  write_file_atomic(fs::path(out_dir) / "fig9_qoe.csv", fig9.str());
  write_file_atomic(fs::path(out_dir) / "MANIFEST", manifest.str());

  if (compare) {
    std::ostringstream cmp;
    cmp << "scheduler,mean_beta_opt_cc,mean_beta_qos,mean_alpha_sch_qoe,total_served_bits\n";
    for (const auto kind : schedulers) {
      double bcc = 0, bqos = 0, alpha = 0;
      std::uint64_t served = 0;
      int n = 0;
      for (const Cell& cell : cells) {
        if (cell.scheduler != kind || !cell.ok) continue;
        const auto& m = cell.result.metrics;
        bcc += m.beta_opt_cc.value_or(0);
        bqos += m.beta_qos.value_or(0);
        alpha += m.alpha_sch_qoe.value_or(0);
        served += m.served_bits;
        ++n;
      }
      if (n == 0) continue;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s,%.9g,%.9g,%.9g,%llu\n", to_string(kind), bcc / n,
                    bqos / n, alpha / n, static_cast<unsigned long long>(served));
      cmp << buf;
    }
    write_file_atomic(fs::path(out_dir) / "comparison.csv", cmp.str());
    std::cout << cmp.str();
  }

  return all_ok ? 0 : 1;
}
