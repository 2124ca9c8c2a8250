// SPDX-License-Identifier: Apache-2.0
#include "casim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace casim {

const char* to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::Jus: return "JUS";
    case SchedulerKind::Srus: return "SRUS";
    case SchedulerKind::SblsCd: return "SBLS-CD";
    case SchedulerKind::SblsLl: return "SBLS-LL";
    case SchedulerKind::Qscs: return "QSCS";
  }
  return "?";
}

SchedulerKind scheduler_kind_from_string(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(c)));
  if (s == "jus") return SchedulerKind::Jus;
  if (s == "srus") return SchedulerKind::Srus;
  if (s == "sbls-cd") return SchedulerKind::SblsCd;
  if (s == "sbls-ll") return SchedulerKind::SblsLl;
  if (s == "qscs") return SchedulerKind::Qscs;
  throw ConfigError("scheduler", "unknown scheduler '" + name +
                                     "' (expected JUS, SRUS, SBLS-CD, SBLS-LL or QSCS)");
}

namespace {

std::vector<ComponentCarrier> paper_cc_set() {
  return {
      make_cc(0, 900, 1.4),  make_cc(1, 900, 5),    make_cc(2, 1800, 1.4),
      make_cc(3, 1800, 1.4), make_cc(4, 1800, 3),   make_cc(5, 2100, 1.4),
  };
}

}  // namespace

SimConfig::SimConfig() : ccs(paper_cc_set()) {}

SimConfig preset_paper_6cc() { return SimConfig{}; }

SimConfig preset_shrunk() {
  SimConfig cfg;
  cfg.horizon_ms = 10'000;
  cfg.cell_radius_m = 26'000;
  cfg.link.shadowing_sigma_db = 8.0;  // per-user channel structure at desk scale
  cfg.traffic.n_users = 10;
  cfg.traffic.mean_requests_per_user = 38.0;
  cfg.traffic.max_requests_per_user = 152;
  cfg.traffic.mean_rate_bps = 0.7e6;
  cfg.traffic.rate_min_bps = 0.2e6;
  cfg.traffic.rate_max_bps = 3e6;
  return cfg;
}

SimConfig preset(const std::string& name) {
  if (name == "paper-6cc") return preset_paper_6cc();
  if (name == "shrunk") return preset_shrunk();
  throw ConfigError("preset", "unknown preset '" + name + "' (expected paper-6cc or shrunk)");
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size() || x < 0) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split_list(v))
    out.push_back(static_cast<int>(parse_u64(key, item)));
  return out;
}

struct RawConfig {
  // section -> key -> value, plus ordered cc/qci sub-sections
  std::map<std::string, std::map<std::string, std::string>> sections;
};

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::string section;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("", "line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("", "line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
    auto& sec = raw.sections[section];
    if (!sec.insert({key, value}).second)
      throw ConfigError(section.empty() ? key : section + "." + key, "duplicate key");
  }
  return raw;
}

CcClass parse_cc_class(const std::string& key, const std::string& v) {
  if (v == "shared") return CcClass::Shared;
  if (v == "ltea_only") return CcClass::LteAOnly;
  throw ConfigError(key, "expected shared or ltea_only, got '" + v + "'");
}

ResourceType parse_resource_type(const std::string& key, const std::string& v) {
  if (v == "gbr") return ResourceType::Gbr;
  if (v == "non_gbr") return ResourceType::NonGbr;
  throw ConfigError(key, "expected gbr or non_gbr, got '" + v + "'");
}

}  // namespace

SimConfig parse_config_text(const std::string& text, SimConfig base) {
  RawConfig raw = tokenize(text);
  SimConfig cfg = std::move(base);

  std::map<int, std::map<std::string, std::string>> cc_sections;
  std::map<int, std::map<std::string, std::string>> qci_sections;
  std::array<QciProfile, 9> qci_rows = cfg.qci_table.rows();

  for (auto& [section, keys] : raw.sections) {
    if (section.rfind("cc.", 0) == 0) {
      const int n = static_cast<int>(parse_u64(section, section.substr(3)));
      cc_sections[n] = keys;
      continue;
    }
    if (section.rfind("qci.", 0) == 0) {
      const int n = static_cast<int>(parse_u64(section, section.substr(4)));
      if (n < 1 || n > 9) throw ConfigError(section, "qci section index must be 1..9");
      qci_sections[n] = keys;
      continue;
    }
    for (auto& [key, value] : keys) {
      const std::string path = section.empty() ? key : section + "." + key;
      if (section == "sim") {
        if (key == "horizon_ms") cfg.horizon_ms = parse_u64(path, value);
        else if (key == "frame_ms") cfg.frame_ms = static_cast<std::uint32_t>(parse_u64(path, value));
        else if (key == "cell_radius_m") cfg.cell_radius_m = parse_double(path, value);
        else if (key == "subcarrier_spacing_khz")
          cfg.subcarrier_spacing_khz = static_cast<std::uint32_t>(parse_u64(path, value));
        else if (key == "seed") cfg.seed = parse_u64(path, value);
        else if (key == "scheduler") cfg.scheduler = scheduler_kind_from_string(value);
        else throw ConfigError(path, "unknown key");
      } else if (section == "radio") {
        if (key == "tx_power_per_prb_dbm") cfg.link.tx_power_per_prb_dbm = parse_double(path, value);
        else if (key == "noise_figure_db") cfg.link.noise_figure_db = parse_double(path, value);
        else if (key == "pathloss_exponent") cfg.link.pathloss_exponent = parse_double(path, value);
        else if (key == "snr_min_db") cfg.link.snr_min_db = parse_double(path, value);
        else if (key == "spectral_efficiency_cap")
          cfg.link.spectral_efficiency_cap_bps_per_hz = parse_double(path, value);
        else if (key == "shadowing_sigma_db") cfg.link.shadowing_sigma_db = parse_double(path, value);
        else throw ConfigError(path, "unknown key");
      } else if (section == "traffic") {
        if (key == "n_users") cfg.traffic.n_users = static_cast<int>(parse_u64(path, value));
        else if (key == "mean_requests_per_user")
          cfg.traffic.mean_requests_per_user = parse_double(path, value);
        else if (key == "max_requests_per_user")
          cfg.traffic.max_requests_per_user = static_cast<int>(parse_u64(path, value));
        else if (key == "mean_rate_mbps") cfg.traffic.mean_rate_bps = parse_double(path, value) * 1e6;
        else if (key == "rate_min_mbps") cfg.traffic.rate_min_bps = parse_double(path, value) * 1e6;
        else if (key == "rate_max_mbps") cfg.traffic.rate_max_bps = parse_double(path, value) * 1e6;
        else if (key == "rate_mean_is_post_truncation")
          cfg.traffic.rate_mean_is_post_truncation = parse_bool(path, value);
        else if (key == "duration_min_ms")
          cfg.traffic.duration_min_ms = static_cast<std::uint32_t>(parse_u64(path, value));
        else if (key == "duration_max_ms")
          cfg.traffic.duration_max_ms = static_cast<std::uint32_t>(parse_u64(path, value));
        else if (key == "qci_weights") {
          const auto items = split_list(value);
          if (items.size() != 9) throw ConfigError(path, "expected 9 comma-separated weights");
          for (int i = 0; i < 9; ++i) cfg.traffic.qci_weights[i] = parse_double(path, items[i]);
        } else throw ConfigError(path, "unknown key");
      } else if (section == "qos") {
        if (key == "gbr_qcis") {
          const auto qcis = parse_int_list(path, value);
          for (auto& row : qci_rows) row.resource_type = ResourceType::NonGbr;
          for (int q : qcis) {
            if (q < 1 || q > 9) throw ConfigError(path, "qci values must be 1..9");
            qci_rows[q - 1].resource_type = ResourceType::Gbr;
          }
        } else if (key == "metric_gbr_qcis") {
          cfg.metric_gbr_qcis = parse_int_list(path, value);
        } else if (key == "beta_qos_bit_weighted") {
          cfg.beta_qos_bit_weighted = parse_bool(path, value);
        } else throw ConfigError(path, "unknown key");
      } else if (section == "qscs") {
        if (key == "max_ccs_per_user")
          cfg.qscs.max_ccs_per_user = static_cast<int>(parse_u64(path, value));
        else if (key == "migration_hysteresis_ranks")
          cfg.qscs.migration_hysteresis_ranks = static_cast<int>(parse_u64(path, value));
        else throw ConfigError(path, "unknown key");
      } else {
        throw ConfigError(path, "unknown section '" + section + "'");
      }
    }
  }

  for (auto& [n, keys] : qci_sections) {
    QciProfile& row = qci_rows[n - 1];
    const std::string prefix = "qci." + std::to_string(n) + ".";
    for (auto& [key, value] : keys) {
      if (key == "resource_type") row.resource_type = parse_resource_type(prefix + key, value);
      else if (key == "priority") row.priority = static_cast<int>(parse_u64(prefix + key, value));
      else if (key == "pdb_ms") row.pdb_ms = static_cast<int>(parse_u64(prefix + key, value));
      else throw ConfigError(prefix + key, "unknown key");
    }
  }
  try {
    cfg.qci_table = QciTable(qci_rows);
  } catch (const std::exception& e) {
    throw ConfigError("qci", e.what());
  }

  if (!cc_sections.empty()) {
    std::vector<ComponentCarrier> ccs;
    CcId next_id = 0;
    for (auto& [n, keys] : cc_sections) {
      const std::string prefix = "cc." + std::to_string(n) + ".";
      double freq = 0, bw = 0;
      CcClass cls = CcClass::Shared;
      for (auto& [key, value] : keys) {
        if (key == "center_freq_mhz") freq = parse_double(prefix + key, value);
        else if (key == "bandwidth_mhz") bw = parse_double(prefix + key, value);
        else if (key == "class") cls = parse_cc_class(prefix + key, value);
        else throw ConfigError(prefix + key, "unknown key");
      }
      try {
        ccs.push_back(make_cc(next_id++, freq, bw, cls));
      } catch (const std::exception& e) {
        throw ConfigError("cc." + std::to_string(n), e.what());
      }
    }
    cfg.ccs = std::move(ccs);
  }

  validate_config(cfg);
  return cfg;
}

SimConfig load_config_file(const std::string& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

void validate_config(const SimConfig& cfg) {
  if (cfg.frame_ms != 1) throw ConfigError("sim.frame_ms", "frame duration is fixed at 1 ms");
  if (cfg.horizon_ms < 1) throw ConfigError("sim.horizon_ms", "horizon must be at least one frame");
  if (cfg.cell_radius_m <= kMinUeEnbSeparationM)
    throw ConfigError("sim.cell_radius_m", "cell radius must exceed the 35 m minimum separation");
  if (cfg.ccs.empty()) throw ConfigError("cc", "at least one component carrier is required");
  for (std::size_t i = 0; i < cfg.ccs.size(); ++i) {
    const auto& cc = cfg.ccs[i];
    const std::string prefix = "cc." + std::to_string(i);
    if (cc.id != static_cast<CcId>(i))
      throw ConfigError(prefix, "cc ids must be dense and ascending");
    if (cc.center_freq_mhz <= 0) throw ConfigError(prefix + ".center_freq_mhz", "must be positive");
    if (cc.prb_count != prb_count_for_bandwidth(cc.bandwidth_mhz))
      throw ConfigError(prefix + ".bandwidth_mhz", "prb count inconsistent with bandwidth");
  }
  if (cfg.link.pathloss_exponent < 2)
    throw ConfigError("radio.pathloss_exponent", "must be >= 2");
  if (cfg.link.spectral_efficiency_cap_bps_per_hz <= 0)
    throw ConfigError("radio.spectral_efficiency_cap", "must be positive");
  if (cfg.link.shadowing_sigma_db < 0)
    throw ConfigError("radio.shadowing_sigma_db", "must be >= 0");

  const auto& t = cfg.traffic;
  if (t.n_users < 0) throw ConfigError("traffic.n_users", "must be >= 0");
  if (t.mean_requests_per_user <= 0)
    throw ConfigError("traffic.mean_requests_per_user", "must be positive");
  if (t.max_requests_per_user < 1)
    throw ConfigError("traffic.max_requests_per_user", "must be >= 1");
  if (t.rate_min_bps <= 0) throw ConfigError("traffic.rate_min_mbps", "must be positive");
  if (t.rate_max_bps <= t.rate_min_bps)
    throw ConfigError("traffic.rate_max_mbps", "must exceed rate_min_mbps");
  if (t.mean_rate_bps <= 0) throw ConfigError("traffic.mean_rate_mbps", "must be positive");
  if (t.rate_mean_is_post_truncation &&
      !(t.mean_rate_bps > t.rate_min_bps &&
        t.mean_rate_bps < 0.5 * (t.rate_min_bps + t.rate_max_bps)))
    throw ConfigError("traffic.mean_rate_mbps",
                      "post-truncation mean must lie in (rate_min, (rate_min+rate_max)/2)");
  if (t.duration_max_ms <= t.duration_min_ms)
    throw ConfigError("traffic.duration_max_ms", "must exceed duration_min_ms");
  if (t.duration_max_ms > 2500)
    throw ConfigError("traffic.duration_max_ms", "requested services are capped at 2500 ms");
  double wsum = 0;
  for (double w : t.qci_weights) {
    if (w < 0) throw ConfigError("traffic.qci_weights", "weights must be >= 0");
    wsum += w;
  }
  if (wsum <= 0) throw ConfigError("traffic.qci_weights", "weights must not all be zero");

  for (int q : cfg.metric_gbr_qcis)
    if (q < 1 || q > 9) throw ConfigError("qos.metric_gbr_qcis", "qci values must be 1..9");
  if (cfg.qscs.max_ccs_per_user < 1)
    throw ConfigError("qscs.max_ccs_per_user", "must be >= 1");
  if (cfg.qscs.migration_hysteresis_ranks < 0)
    throw ConfigError("qscs.migration_hysteresis_ranks", "must be >= 0");
}

}  // namespace casim
