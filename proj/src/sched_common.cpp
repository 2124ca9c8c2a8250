// SPDX-License-Identifier: Apache-2.0
#include "casim/schedulers.hpp"

namespace casim {

void percc_fifo_fill(const SimEnv& env, SimState& st, CcId cc, std::deque<BurstId>& queue) {
  int prb = 0;
  const int prbs = st.grid.prb_count(cc);
  for (auto it = queue.begin(); it != queue.end() && prb < prbs;) {
    const BurstId b = *it;
    if (is_terminal(st.bursts[b].phase)) {
      it = queue.erase(it);
      continue;
    }
    const std::uint64_t bits = env.bits_per_frame(b, cc);
    if (bits == 0) {  // out of range on this CC; don't let it block the queue
      ++it;
      continue;
    }
    const std::uint64_t remaining = st.remaining_bits(env, b);
    std::uint64_t need = (remaining + bits - 1) / bits;
    while (need > 0 && prb < prbs) {
      st.grid.paint(cc, prb++, b);
      --need;
    }
    ++it;
  }
}

std::unique_ptr<Scheduler> make_scheduler(SchedulerKind kind, const SimEnv& env) {
  switch (kind) {
    case SchedulerKind::Jus:
      return std::make_unique<JusScheduler>(env);
    case SchedulerKind::Srus:
      return std::make_unique<SrusScheduler>(env);
    case SchedulerKind::SblsCd:
      return std::make_unique<SblsScheduler>(env, SblsScheduler::Dispatch::Circular);
    case SchedulerKind::SblsLl:
      return std::make_unique<SblsScheduler>(env, SblsScheduler::Dispatch::LeastLoad);
    case SchedulerKind::Qscs:
      return std::make_unique<QscsScheduler>(env);
  }
  return nullptr;
}

}  // namespace casim
