// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "casim/types.hpp"

namespace casim {

inline constexpr double kPrbBandwidthHz = 180e3;
inline constexpr double kMinUeEnbSeparationM = 35.0;

enum class CcClass : std::uint8_t { Shared, LteAOnly };

struct ComponentCarrier {
  CcId id = 0;
  double center_freq_mhz = 0;
  double bandwidth_mhz = 0;
  int prb_count = 0;
  CcClass cc_class = CcClass::Shared;
};

// Standardized transmission bandwidth configuration; throws std::domain_error
// for bandwidths outside {1.4, 3, 5, 10, 15, 20} MHz.
int prb_count_for_bandwidth(double bw_mhz);

ComponentCarrier make_cc(CcId id, double center_freq_mhz, double bandwidth_mhz,
                         CcClass cc_class = CcClass::Shared);

// Deterministic log-distance link budget. The SNR seen by a user is a pure
// function of (distance, carrier frequency) unless shadowing_sigma_db > 0,
// in which case a per-(user, cc) log-normal term is frozen at setup.
struct LinkBudget {
  double tx_power_per_prb_dbm = 29.0;
  double noise_figure_db = 9.0;
  double pathloss_exponent = 3.5;
  double snr_min_db = 0.0;  // coverage threshold
  double spectral_efficiency_cap_bps_per_hz = 6.0;
  double shadowing_sigma_db = 0.0;
};

// PL = 32.45 + 20 log10(f_MHz) + 10 eta log10(d_km).
// Throws std::domain_error below the minimum UE-eNB separation.
double path_loss_db(double distance_m, double freq_mhz, const LinkBudget& lb);

// Thermal noise over one PRB: -174 dBm/Hz + 10 log10(180 kHz) + NF.
double noise_power_dbm(const LinkBudget& lb);

double snr_db(double distance_m, const ComponentCarrier& cc, const LinkBudget& lb);

// Truncated Shannon rate over one PRB: 180 kHz * min(log2(1 + snr), cap).
double prb_rate_bps(double snr_db, const LinkBudget& lb);

// CC ids ordered by descending SNR at this distance, ties by ascending id.
// The head of the list is the user's best CC.
std::vector<CcId> rank_ccs_for_user(double distance_m,
                                    const std::vector<ComponentCarrier>& ccs,
                                    const LinkBudget& lb);

// Largest distance with snr >= snr_min, by closed-form inversion of the path
// loss. Returns 0 when even the minimum separation is out of coverage.
double coverage_radius_m(const ComponentCarrier& cc, const LinkBudget& lb);

// Per-frame PRB occupancy across all CCs. A slot holds at most one burst.
class PrbGrid {
 public:
  explicit PrbGrid(const std::vector<ComponentCarrier>& ccs);

  void clear();
  std::size_t cc_count() const { return slots_.size(); }
  int prb_count(std::size_t cc) const { return static_cast<int>(slots_[cc].size()); }
  BurstId at(std::size_t cc, std::size_t prb) const { return slots_[cc][prb]; }
  bool is_free(std::size_t cc, std::size_t prb) const { return slots_[cc][prb] == kNoBurst; }
  int free_count(std::size_t cc) const { return free_[cc]; }

  // Throws std::logic_error when the slot is already taken (PRB exclusivity).
  void paint(std::size_t cc, std::size_t prb, BurstId burst);

 private:
  std::vector<std::vector<BurstId>> slots_;
  std::vector<int> free_;
};

}  // namespace casim
