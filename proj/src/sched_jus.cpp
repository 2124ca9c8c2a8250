// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "casim/schedulers.hpp"

namespace casim {

JusScheduler::JusScheduler(const SimEnv& env) { active_.reserve(env.bursts.size()); }

void JusScheduler::on_arrival(const SimEnv&, SimState&, BurstId b) { active_.push_back(b); }

void JusScheduler::fill_frame(const SimEnv& env, SimState& st) {
  std::erase_if(active_, [&st](BurstId b) { return is_terminal(st.bursts[b].phase); });
  if (active_.empty()) return;

  // Bits still wanted this frame, consumed as PRBs are handed out.
  std::vector<std::uint64_t> wanted(active_.size());
  for (std::size_t i = 0; i < active_.size(); ++i)
    wanted[i] = st.remaining_bits(env, active_[i]);

  std::vector<std::size_t> order(active_.size());
  for (std::size_t cc = 0; cc < st.grid.cc_count(); ++cc) {
    order.clear();
    for (std::size_t i = 0; i < active_.size(); ++i) {
      const BurstId b = active_[i];
      if (env.accessible(env.bursts[b].user, static_cast<CcId>(cc)) &&
          env.bits_per_frame(b, static_cast<CcId>(cc)) > 0)
        order.push_back(i);
    }
    // active_ is in arrival order, so a stable sort on rate keeps the
    // (arrival, id) tie-break.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return env.bits_per_frame(active_[a], static_cast<CcId>(cc)) >
             env.bits_per_frame(active_[b], static_cast<CcId>(cc));
    });

    std::size_t head = 0;
    const int prbs = st.grid.prb_count(cc);
    for (int prb = 0; prb < prbs; ++prb) {
      while (head < order.size() && wanted[order[head]] == 0) ++head;
      if (head == order.size()) break;
      const std::size_t i = order[head];
      const BurstId b = active_[i];
      st.grid.paint(cc, prb, b);
      const std::uint64_t bits = env.bits_per_frame(b, static_cast<CcId>(cc));
      wanted[i] -= std::min(bits, wanted[i]);
    }
  }
}

}  // namespace casim
