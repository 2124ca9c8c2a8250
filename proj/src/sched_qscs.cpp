// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cassert>
#include <cmath>

#include "casim/schedulers.hpp"

namespace casim {

namespace {
const std::unordered_set<BurstId> kNoVictims;
}

QscsScheduler::QscsScheduler(const SimEnv& env) {
  occ_.reserve(env.cfg.ccs.size());
  for (const auto& cc : env.cfg.ccs) occ_.emplace_back(cc.prb_count, kNoBurst);
  occ_free_.reserve(env.cfg.ccs.size());
  for (const auto& cc : env.cfg.ccs) occ_free_.push_back(cc.prb_count);
  user_cc_prbs_.assign(env.users.size(), std::vector<std::uint16_t>(env.cfg.ccs.size(), 0));
  rank_pos_.assign(env.users.size(), std::vector<std::size_t>(env.cfg.ccs.size(), 0));
  for (UserId u = 0; u < env.users.size(); ++u)
    for (std::size_t i = 0; i < env.radio[u].ranked_ccs.size(); ++i)
      rank_pos_[u][env.radio[u].ranked_ccs[i]] = i;
}

double QscsScheduler::attainable_bits_per_frame(const SimEnv& env, UserId user) const {
  std::vector<double> caps;
  for (const CcId cc : env.radio[user].covered_ranked_ccs) {
    if (!env.accessible(user, cc)) continue;
    caps.push_back(static_cast<double>(env.cfg.ccs[cc].prb_count) *
                   static_cast<double>(env.radio[user].bits_per_prb_frame[cc]));
  }
  std::sort(caps.begin(), caps.end(), std::greater<double>());
  double total = 0;
  const std::size_t limit = std::min<std::size_t>(caps.size(), env.cfg.qscs.max_ccs_per_user);
  for (std::size_t i = 0; i < limit; ++i) total += caps[i];
  return total;
}

std::uint64_t QscsScheduler::capacity_bits_per_frame(const SimEnv& env, UserId user,
                                                     const Hold& h) const {
  std::uint64_t cap = 0;
  for (const auto& [cc, prbs] : h.prbs)
    cap += prbs.size() * env.radio[user].bits_per_prb_frame[cc];
  return cap;
}

QscsScheduler::PlanResult QscsScheduler::plan_rate(const SimEnv& env, UserId user,
                                                   double need_bits_per_frame,
                                                   const std::unordered_set<BurstId>& evictable,
                                                   bool allow_partial) const {
  const auto& ur = env.radio[user];
  // CC budget: carriers this user would still hold once the victims are gone.
  std::vector<int> held(env.cfg.ccs.size(), 0);
  for (std::size_t cc = 0; cc < held.size(); ++cc) held[cc] = user_cc_prbs_[user][cc];
  for (const BurstId v : evictable) {
    if (env.bursts[v].user != user) continue;
    const auto it = holds_.find(v);
    if (it == holds_.end()) continue;
    for (const auto& [cc, prbs] : it->second.prbs) held[cc] -= static_cast<int>(prbs.size());
  }
  int budget = env.cfg.qscs.max_ccs_per_user;
  for (int h : held)
    if (h > 0) --budget;

  PlanResult result;
  double deficit = need_bits_per_frame;
  for (const CcId cc : ur.covered_ranked_ccs) {
    if (deficit <= 0) break;
    if (!env.accessible(user, cc)) continue;
    const std::uint64_t bits = ur.bits_per_prb_frame[cc];
    if (bits == 0) continue;
    if (occ_free_[cc] == 0 && evictable.empty()) continue;
    const bool in_set = held[cc] > 0;
    if (!in_set && budget <= 0) continue;
    const auto want = static_cast<std::uint64_t>(
        std::ceil(deficit / static_cast<double>(bits)));
    PlanEntry entry{cc, {}};
    const auto& column = occ_[cc];
    for (std::uint16_t prb = 0; prb < column.size() && entry.prbs.size() < want; ++prb) {
      const BurstId holder = column[prb];
      if (holder == kNoBurst || evictable.count(holder) != 0) entry.prbs.push_back(prb);
    }
    if (entry.prbs.empty()) continue;
    deficit -= static_cast<double>(entry.prbs.size()) * static_cast<double>(bits);
    if (!in_set) --budget;
    result.entries.push_back(std::move(entry));
  }
  result.satisfied = deficit <= 0;
  if (!result.satisfied && !allow_partial) result.entries.clear();
  return result;
}

std::optional<BurstId> QscsScheduler::next_victim(const SimEnv& env, UserId claimant_user,
                                                  const QciProfile& claimant,
                                                  const std::unordered_set<BurstId>& chosen) const {
  std::vector<bool> usable(env.cfg.ccs.size(), false);
  for (const CcId cc : env.radio[claimant_user].covered_ranked_ccs)
    if (env.accessible(claimant_user, cc) &&
        env.radio[claimant_user].bits_per_prb_frame[cc] > 0)
      usable[cc] = true;

  std::optional<BurstId> best;
  const QciProfile* best_profile = nullptr;
  for (const auto& [vb, vh] : holds_) {
    if (vh.reserved || chosen.count(vb) != 0) continue;
    const QciProfile& vp = env.profile(env.bursts[vb].qci);
    if (!is_preemptable_by(vp, claimant)) continue;
    bool helpful = false;
    for (const auto& [cc, prbs] : vh.prbs)
      if (usable[cc] && !prbs.empty()) {
        helpful = true;
        break;
      }
    if (!helpful) continue;
    // Lowest-precedence victims go first; among equals the latest arrival.
    if (!best) {
      best = vb;
      best_profile = &vp;
      continue;
    }
    const auto& bspec = env.bursts[*best];
    const auto& vspec = env.bursts[vb];
    bool better;
    if (vp.priority != best_profile->priority)
      better = vp.priority > best_profile->priority;
    else if (vspec.arrival_us != bspec.arrival_us)
      better = vspec.arrival_us > bspec.arrival_us;
    else
      better = vb > *best;
    if (better) {
      best = vb;
      best_profile = &vp;
    }
  }
  return best;
}

void QscsScheduler::occupy(const SimEnv& env, BurstId b, Hold& hold,
                           const std::vector<PlanEntry>& plan) {
  const UserId user = env.bursts[b].user;
  for (const auto& entry : plan) {
    for (const std::uint16_t prb : entry.prbs) {
      assert(occ_[entry.cc][prb] == kNoBurst);
      occ_[entry.cc][prb] = b;
      --occ_free_[entry.cc];
      ++user_cc_prbs_[user][entry.cc];
    }
    auto it = std::find_if(hold.prbs.begin(), hold.prbs.end(),
                           [&entry](const auto& e) { return e.first == entry.cc; });
    if (it == hold.prbs.end()) {
      const std::size_t pos = rank_pos_[user][entry.cc];
      auto insert_at = hold.prbs.begin();
      while (insert_at != hold.prbs.end() && rank_pos_[user][insert_at->first] < pos)
        ++insert_at;
      hold.prbs.insert(insert_at, {entry.cc, entry.prbs});
    } else {
      it->second.insert(it->second.end(), entry.prbs.begin(), entry.prbs.end());
      std::sort(it->second.begin(), it->second.end());
    }
  }
}

void QscsScheduler::release_all(const SimEnv& env, BurstId b) {
  const auto it = holds_.find(b);
  if (it == holds_.end()) return;
  const UserId user = env.bursts[b].user;
  for (const auto& [cc, prbs] : it->second.prbs) {
    for (const std::uint16_t prb : prbs) {
      assert(occ_[cc][prb] == b);
      occ_[cc][prb] = kNoBurst;
      ++occ_free_[cc];
      --user_cc_prbs_[user][cc];
    }
  }
  holds_.erase(it);
}

int QscsScheduler::user_cc_count(const SimEnv& env, UserId user) const {
  (void)env;
  int n = 0;
  for (const auto count : user_cc_prbs_[user])
    if (count > 0) ++n;
  return n;
}

std::vector<std::pair<CcId, std::vector<std::uint16_t>>> QscsScheduler::hold_prbs(
    BurstId b) const {
  const auto it = holds_.find(b);
  if (it == holds_.end()) return {};
  return it->second.prbs;
}

void QscsScheduler::on_arrival(const SimEnv& env, SimState& st, BurstId b) {
  const auto& spec = env.bursts[b];
  if (env.gbr(spec.qci)) {
    const double need = static_cast<double>(spec.rate_bps) / 1000.0;
    if (attainable_bits_per_frame(env, spec.user) < need) {
      st.bursts[b].phase = Phase::Rejected;
      st.bursts[b].retire_frame = st.frame;
      st.log->emit({EventKind::Rejected, st.frame, b});
      return;
    }
  }
  queues_.enqueue(spec.qci, b);
}

QscsScheduler::AdmitOutcome QscsScheduler::try_admit(const SimEnv& env, SimState& st,
                                                     BurstId b) {
  const auto& spec = env.bursts[b];
  const QciProfile& claimant = env.profile(spec.qci);
  const double need = static_cast<double>(spec.rate_bps) / 1000.0;
  if (attainable_bits_per_frame(env, spec.user) < need)
    return {AdmitOutcome::Kind::CapacityInfeasible, {}};

  std::unordered_set<BurstId> evict;
  std::vector<BurstId> evict_order;
  PlanResult plan;
  while (true) {
    plan = plan_rate(env, spec.user, need, evict, /*allow_partial=*/false);
    if (plan.satisfied) break;
    const auto victim = next_victim(env, spec.user, claimant, evict);
    if (!victim) return {AdmitOutcome::Kind::Queued, {}};
    evict.insert(*victim);
    evict_order.push_back(*victim);
  }

  for (const BurstId v : evict_order) {
    const int vqci = env.bursts[v].qci;
    release_all(env, v);
    st.bursts[v].phase = Phase::PreemptedRequeued;
    ++st.bursts[v].preempt_count;
    queues_.erase(vqci, v);
    queues_.requeue_front(vqci, v);
    st.log->emit({EventKind::Preempted, st.frame, v, 0, 0, 0, 0, b});
  }

  Hold hold;
  hold.required_bits_per_frame = need;
  hold.reserved = true;
  occupy(env, b, hold, plan.entries);
  holds_.emplace(b, std::move(hold));
  return {evict_order.empty() ? AdmitOutcome::Kind::Admitted
                              : AdmitOutcome::Kind::AdmittedWithPreemption,
          evict_order};
}

std::vector<QscsScheduler::Migration> QscsScheduler::reoptimize(const SimEnv& env,
                                                                SimState& st) {
  std::vector<Migration> out;
  const int hysteresis = env.cfg.qscs.migration_hysteresis_ranks;
  for (auto& [b, hold] : holds_) {
    if (hold.prbs.empty()) continue;
    const UserId user = env.bursts[b].user;
    const auto& ur = env.radio[user];
    const CcId worst_cc = hold.prbs.back().first;
    const std::size_t worst_pos = rank_pos_[user][worst_cc];
    if (worst_pos == 0) continue;

    const std::uint64_t total = capacity_bits_per_frame(env, user, hold);
    const auto& worst_prbs = hold.prbs.back().second;
    const double worst_contrib = static_cast<double>(worst_prbs.size()) *
                                 static_cast<double>(ur.bits_per_prb_frame[worst_cc]);
    const double required = hold.reserved ? hold.required_bits_per_frame
                                          : static_cast<double>(total);
    const double deficit =
        std::max(required - (static_cast<double>(total) - worst_contrib), 1e-9);

    for (const CcId cand : ur.covered_ranked_ccs) {
      if (rank_pos_[user][cand] + hysteresis >= worst_pos) break;
      if (!env.accessible(user, cand)) continue;
      const std::uint64_t bits = ur.bits_per_prb_frame[cand];
      if (bits == 0) continue;
      const auto take = static_cast<std::uint64_t>(
          std::ceil(deficit / static_cast<double>(bits)));
      if (static_cast<std::uint64_t>(occ_free_[cand]) < take) continue;
      const bool cand_new = user_cc_prbs_[user][cand] == 0;
      const bool worst_leaves = user_cc_prbs_[user][worst_cc] == worst_prbs.size();
      const int new_size =
          user_cc_count(env, user) + (cand_new ? 1 : 0) - (worst_leaves ? 1 : 0);
      if (new_size > env.cfg.qscs.max_ccs_per_user) continue;

      // Atomic swap within the frame: vacate the worst CC, then take the
      // replacement PRBs on the better-ranked one.
      for (const std::uint16_t prb : worst_prbs) {
        assert(occ_[worst_cc][prb] == b);
        occ_[worst_cc][prb] = kNoBurst;
        ++occ_free_[worst_cc];
        --user_cc_prbs_[user][worst_cc];
      }
      hold.prbs.pop_back();
      PlanEntry entry{cand, {}};
      for (std::uint16_t prb = 0; prb < occ_[cand].size() && entry.prbs.size() < take; ++prb)
        if (occ_[cand][prb] == kNoBurst) entry.prbs.push_back(prb);
      assert(entry.prbs.size() == take);
      occupy(env, b, hold, {entry});
      st.log->emit({EventKind::Migrated, st.frame, b, worst_cc, 0, 0, cand});
      out.push_back({b, worst_cc, cand});
      break;  // at most one migration per burst per frame
    }
  }
  return out;
}

void QscsScheduler::adjust_elastic(const SimEnv& env, SimState& st, BurstId b) {
  const UserId user = env.bursts[b].user;
  const auto& ur = env.radio[user];
  const std::uint64_t remaining = st.remaining_bits(env, b);

  auto it = holds_.find(b);
  std::uint64_t cap = it == holds_.end() ? 0 : capacity_bits_per_frame(env, user, it->second);

  if (it != holds_.end()) {
    // Return surplus PRBs, worst-ranked CC and highest index first, so lower
    // precedence bursts later in this pass can use them.
    Hold& hold = it->second;
    while (!hold.prbs.empty()) {
      auto& worst = hold.prbs.back();
      const std::uint64_t bits = ur.bits_per_prb_frame[worst.first];
      if (cap < remaining + bits) break;
      const std::uint16_t prb = worst.second.back();
      worst.second.pop_back();
      assert(occ_[worst.first][prb] == b);
      occ_[worst.first][prb] = kNoBurst;
      ++occ_free_[worst.first];
      --user_cc_prbs_[user][worst.first];
      cap -= bits;
      if (worst.second.empty()) hold.prbs.pop_back();
    }
    if (hold.prbs.empty()) {
      holds_.erase(it);
      it = holds_.end();
    }
  }
  if (cap >= remaining) return;

  const auto plan = plan_rate(env, user, static_cast<double>(remaining - cap), kNoVictims,
                              /*allow_partial=*/true);
  if (plan.entries.empty()) return;
  if (it == holds_.end()) {
    Hold hold;
    hold.reserved = false;
    occupy(env, b, hold, plan.entries);
    holds_.emplace(b, std::move(hold));
  } else {
    occupy(env, b, it->second, plan.entries);
  }
}

void QscsScheduler::pre_schedule(const SimEnv& env, SimState& st) {
  reoptimize(env, st);

  // Admissions in precedence order; FIFO within a class. A blocked head
  // keeps its queue waiting but does not block lower-precedence classes.
  for (const int qci : env.qci_precedence) {
    if (!env.gbr(qci)) continue;
    auto& q = queues_.at(qci);
    while (!q.empty()) {
      const BurstId b = q.front();
      if (is_terminal(st.bursts[b].phase)) {
        queues_.pop_front(qci);
        continue;
      }
      const auto outcome = try_admit(env, st, b);
      if (outcome.kind == AdmitOutcome::Kind::Admitted ||
          outcome.kind == AdmitOutcome::Kind::AdmittedWithPreemption) {
        queues_.pop_front(qci);
        continue;
      }
      if (outcome.kind == AdmitOutcome::Kind::CapacityInfeasible) {
        queues_.pop_front(qci);
        st.bursts[b].phase = Phase::Rejected;
        st.bursts[b].retire_frame = st.frame;
        st.log->emit({EventKind::Rejected, st.frame, b});
        continue;
      }
      break;
    }
  }
}

void QscsScheduler::fill_frame(const SimEnv& env, SimState& st) {
  // Elastic service: remaining free PRBs go to non-GBR bursts in
  // (priority, queue) order on their SNR-ranked CCs. The queue doubles as
  // the service-order list; preempted bursts resume from its head.
  for (const int qci : env.qci_precedence) {
    if (env.gbr(qci)) continue;
    auto& q = queues_.at(qci);
    for (std::size_t i = 0; i < q.size(); ++i) adjust_elastic(env, st, q[i]);
  }

  for (std::size_t cc = 0; cc < occ_.size(); ++cc)
    for (std::size_t prb = 0; prb < occ_[cc].size(); ++prb)
      if (occ_[cc][prb] != kNoBurst)
        st.grid.paint(cc, prb, occ_[cc][prb]);
}

void QscsScheduler::on_retired(const SimEnv& env, SimState& st, BurstId b) {
  (void)st;
  release_all(env, b);
  queues_.erase(env.bursts[b].qci, b);
}

}  // namespace casim
