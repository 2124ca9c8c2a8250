// SPDX-License-Identifier: Apache-2.0
#include "casim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace casim {

int prb_count_for_bandwidth(double bw_mhz) {
  static constexpr struct {
    double bw;
    int prbs;
  } table[] = {{1.4, 6}, {3, 15}, {5, 25}, {10, 50}, {15, 75}, {20, 100}};
  for (const auto& row : table)
    if (std::abs(bw_mhz - row.bw) < 1e-9) return row.prbs;
  throw std::domain_error("unsupported channel bandwidth " + std::to_string(bw_mhz) +
                          " MHz (must be one of 1.4, 3, 5, 10, 15, 20)");
}

ComponentCarrier make_cc(CcId id, double center_freq_mhz, double bandwidth_mhz,
                         CcClass cc_class) {
  if (center_freq_mhz <= 0)
    throw std::domain_error("carrier frequency must be positive");
  return ComponentCarrier{id, center_freq_mhz, bandwidth_mhz,
                          prb_count_for_bandwidth(bandwidth_mhz), cc_class};
}

double path_loss_db(double distance_m, double freq_mhz, const LinkBudget& lb) {
  if (distance_m < kMinUeEnbSeparationM)
    throw std::domain_error("distance " + std::to_string(distance_m) +
                            " m below minimum UE-eNB separation (35 m)");
  if (freq_mhz <= 0) throw std::domain_error("carrier frequency must be positive");
  return 32.45 + 20.0 * std::log10(freq_mhz) +
         10.0 * lb.pathloss_exponent * std::log10(distance_m / 1000.0);
}

double noise_power_dbm(const LinkBudget& lb) {
  return -174.0 + 10.0 * std::log10(kPrbBandwidthHz) + lb.noise_figure_db;
}

double snr_db(double distance_m, const ComponentCarrier& cc, const LinkBudget& lb) {
  return lb.tx_power_per_prb_dbm - path_loss_db(distance_m, cc.center_freq_mhz, lb) -
         noise_power_dbm(lb);
}

double prb_rate_bps(double snr_db, const LinkBudget& lb) {
  const double snr_linear = std::pow(10.0, snr_db / 10.0);
  const double se = std::min(std::log2(1.0 + snr_linear), lb.spectral_efficiency_cap_bps_per_hz);
  return kPrbBandwidthHz * se;
}

std::vector<CcId> rank_ccs_for_user(double distance_m,
                                    const std::vector<ComponentCarrier>& ccs,
                                    const LinkBudget& lb) {
  if (ccs.empty()) throw std::domain_error("cannot rank an empty CC list");
  std::vector<std::pair<double, CcId>> keyed;
  keyed.reserve(ccs.size());
  for (const auto& cc : ccs) keyed.emplace_back(snr_db(distance_m, cc, lb), cc.id);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<CcId> out;
  out.reserve(keyed.size());
  for (const auto& [snr, id] : keyed) out.push_back(id);
  return out;
}

double coverage_radius_m(const ComponentCarrier& cc, const LinkBudget& lb) {
  const double pl_max = lb.tx_power_per_prb_dbm - noise_power_dbm(lb) - lb.snr_min_db;
  const double exponent =
      (pl_max - 32.45 - 20.0 * std::log10(cc.center_freq_mhz)) / (10.0 * lb.pathloss_exponent);
  const double radius = 1000.0 * std::pow(10.0, exponent);
  return radius < kMinUeEnbSeparationM ? 0.0 : radius;
}

PrbGrid::PrbGrid(const std::vector<ComponentCarrier>& ccs) {
  slots_.reserve(ccs.size());
  free_.reserve(ccs.size());
  for (const auto& cc : ccs) {
    slots_.emplace_back(cc.prb_count, kNoBurst);
    free_.push_back(cc.prb_count);
  }
}

void PrbGrid::clear() {
  for (std::size_t cc = 0; cc < slots_.size(); ++cc) {
    std::fill(slots_[cc].begin(), slots_[cc].end(), kNoBurst);
    free_[cc] = static_cast<int>(slots_[cc].size());
  }
}

void PrbGrid::paint(std::size_t cc, std::size_t prb, BurstId burst) {
  BurstId& slot = slots_[cc][prb];
  if (slot != kNoBurst)
    throw std::logic_error("PRB (" + std::to_string(cc) + ", " + std::to_string(prb) +
                           ") already allocated to burst " + std::to_string(slot));
  slot = burst;
  --free_[cc];
}

}  // namespace casim
