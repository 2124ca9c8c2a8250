// SPDX-License-Identifier: Apache-2.0
#include <limits>
#include <stdexcept>

#include "casim/schedulers.hpp"

namespace casim {

SblsScheduler::SblsScheduler(const SimEnv& env, Dispatch policy)
    : policy_(policy), queues_(env.cfg.ccs.size()), burst_cc_(env.bursts.size(), 0xffff) {}

std::optional<CcId> SblsScheduler::dispatched_cc(BurstId b) const {
  if (b >= burst_cc_.size() || burst_cc_[b] == 0xffff) return std::nullopt;
  return burst_cc_[b];
}

CcId SblsScheduler::dispatch(const SimEnv& env, SimState& st, BurstId b) {
  const UserId user = env.bursts[b].user;
  const std::size_t n = env.cfg.ccs.size();
  if (policy_ == Dispatch::Circular) {
    // Cyclic over the CC list regardless of the user's affiliation; skip
    // carriers the user cannot access.
    for (std::size_t tried = 0; tried < n; ++tried) {
      const CcId cc = static_cast<CcId>(cursor_ % n);
      ++cursor_;
      if (env.accessible(user, cc)) return cc;
    }
    throw std::domain_error("burst " + std::to_string(b) + " has no accessible CC");
  }
  // Least load: outstanding dispatched bits relative to the CC bandwidth.
  double best_score = std::numeric_limits<double>::infinity();
  CcId best = 0;
  bool found = false;
  for (std::size_t cc = 0; cc < n; ++cc) {
    if (!env.accessible(user, static_cast<CcId>(cc))) continue;
    std::uint64_t load_bits = 0;
    for (const BurstId q : queues_[cc])
      if (!is_terminal(st.bursts[q].phase)) load_bits += st.remaining_bits(env, q);
    const double score =
        static_cast<double>(load_bits) / static_cast<double>(env.cfg.ccs[cc].prb_count);
    if (!found || score < best_score) {
      found = true;
      best_score = score;
      best = static_cast<CcId>(cc);
    }
  }
  if (!found)
    throw std::domain_error("burst " + std::to_string(b) + " has no accessible CC");
  return best;
}

void SblsScheduler::on_arrival(const SimEnv& env, SimState& st, BurstId b) {
  const CcId cc = dispatch(env, st, b);
  burst_cc_[b] = cc;
  queues_[cc].push_back(b);
}

void SblsScheduler::fill_frame(const SimEnv& env, SimState& st) {
  for (std::size_t cc = 0; cc < queues_.size(); ++cc)
    percc_fifo_fill(env, st, static_cast<CcId>(cc), queues_[cc]);
}

}  // namespace casim
