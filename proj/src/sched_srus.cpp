// SPDX-License-Identifier: Apache-2.0
#include <stdexcept>

#include "casim/schedulers.hpp"

namespace casim {

SrusScheduler::SrusScheduler(const SimEnv& env)
    : user_cc_(env.users.size(), kUnassigned), queues_(env.cfg.ccs.size()) {}

CcId SrusScheduler::assign_user(const SimEnv& env, SimState& st, UserId user) {
  std::vector<CcId> accessible;
  for (const auto& cc : env.cfg.ccs)
    if (env.accessible(user, cc.id)) accessible.push_back(cc.id);
  if (accessible.empty())
    throw std::domain_error("user " + std::to_string(user) + " has no accessible CC");
  return accessible[st.sched_rng.uniform_u64(accessible.size())];
}

std::optional<CcId> SrusScheduler::assigned_cc(UserId user) const {
  if (user >= user_cc_.size() || user_cc_[user] == kUnassigned) return std::nullopt;
  return user_cc_[user];
}

void SrusScheduler::on_arrival(const SimEnv& env, SimState& st, BurstId b) {
  const UserId user = env.bursts[b].user;
  if (user_cc_[user] == kUnassigned) user_cc_[user] = assign_user(env, st, user);
  queues_[user_cc_[user]].push_back(b);
}

void SrusScheduler::fill_frame(const SimEnv& env, SimState& st) {
  for (std::size_t cc = 0; cc < queues_.size(); ++cc)
    percc_fifo_fill(env, st, static_cast<CcId>(cc), queues_[cc]);
}

}  // namespace casim
