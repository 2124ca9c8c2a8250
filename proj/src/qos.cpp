// SPDX-License-Identifier: Apache-2.0
#include "casim/qos.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace casim {

QciTable::QciTable(const std::array<QciProfile, 9>& rows) : rows_(rows) {
  for (int i = 0; i < 9; ++i) {
    if (rows_[i].qci != i + 1)
      throw std::invalid_argument("QCI table must cover QCI 1..9 in order, row " +
                                  std::to_string(i) + " has qci " +
                                  std::to_string(rows_[i].qci));
    if (rows_[i].pdb_ms <= 0)
      throw std::invalid_argument("QCI " + std::to_string(rows_[i].qci) +
                                  ": packet delay budget must be positive");
    if (rows_[i].priority < 1)
      throw std::invalid_argument("QCI " + std::to_string(rows_[i].qci) +
                                  ": priority must be >= 1");
  }
}

QciTable QciTable::standard() {
  return QciTable(std::array<QciProfile, 9>{{
      {1, ResourceType::Gbr, 2, 100},
      {2, ResourceType::Gbr, 4, 150},
      {3, ResourceType::Gbr, 3, 50},
      {4, ResourceType::Gbr, 5, 300},
      {5, ResourceType::Gbr, 1, 100},
      {6, ResourceType::Gbr, 6, 300},
      {7, ResourceType::NonGbr, 7, 100},
      {8, ResourceType::NonGbr, 8, 300},
      {9, ResourceType::NonGbr, 9, 300},
  }});
}

const QciProfile& QciTable::lookup(int qci) const {
  if (qci < 1 || qci > 9)
    throw std::domain_error("qci out of range 1..9: " + std::to_string(qci));
  return rows_[qci - 1];
}

std::array<int, 9> QciTable::precedence_order() const {
  std::array<int, 9> order{};
  for (int i = 0; i < 9; ++i) order[i] = i + 1;
  std::sort(order.begin(), order.end(), [this](int a, int b) {
    const auto& pa = rows_[a - 1];
    const auto& pb = rows_[b - 1];
    if (pa.priority != pb.priority) return pa.priority < pb.priority;
    return a < b;
  });
  return order;
}

bool precedes(const QciProfile& a, const QciProfile& b) { return a.priority < b.priority; }

bool is_preemptable_by(const QciProfile& holder, const QciProfile& claimant) {
  return holder.resource_type == ResourceType::NonGbr && claimant.priority < holder.priority;
}

}  // namespace casim
