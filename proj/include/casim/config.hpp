// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "casim/qos.hpp"
#include "casim/radio.hpp"
#include "casim/traffic.hpp"
#include "casim/types.hpp"

namespace casim {

// Configuration failure naming the offending key.
struct ConfigError : std::runtime_error {
  ConfigError(std::string key_, const std::string& msg)
      : std::runtime_error(key_.empty() ? msg : key_ + ": " + msg), key(std::move(key_)) {}
  std::string key;
};

struct QscsParams {
  int max_ccs_per_user = 5;
  // Migrate only when the target CC ranks at least this many positions above
  // the worst currently held CC. 0 = migrate whenever strictly better.
  int migration_hysteresis_ranks = 0;
};

struct SimConfig {
  std::uint64_t horizon_ms = 180'000;
  std::uint32_t frame_ms = 1;
  double cell_radius_m = 15'000;
  std::uint32_t subcarrier_spacing_khz = 15;  // recorded for fidelity; nothing below
                                              // PRB granularity is simulated
  std::vector<ComponentCarrier> ccs;
  LinkBudget link;
  TrafficParams traffic;
  QciTable qci_table = QciTable::standard();
  std::vector<int> metric_gbr_qcis{2, 3, 4, 5};  // beta_qos population
  bool beta_qos_bit_weighted = false;
  QscsParams qscs;
  SchedulerKind scheduler = SchedulerKind::Qscs;
  std::uint64_t seed = 1;

  SimConfig();
};

// Six CCs over three bands: 900 MHz {1.4, 5}, 1800 MHz {1.4, 1.4, 3},
// 2100 MHz {1.4}; 3-minute horizon and the full-scale traffic averages.
SimConfig preset_paper_6cc();

// Same CC layout at desk scale: 10 s horizon with traffic scaled to keep the
// cell contended but not saturated.
SimConfig preset_shrunk();

SimConfig preset(const std::string& name);  // throws ConfigError on unknown names

// Key/value text with [section] headers; unknown sections or keys are errors.
SimConfig load_config_file(const std::string& path, SimConfig base);
SimConfig parse_config_text(const std::string& text, SimConfig base);

// Cross-field validation; throws ConfigError naming the field path.
void validate_config(const SimConfig& cfg);

}  // namespace casim
