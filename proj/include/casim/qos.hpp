// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace casim {

enum class ResourceType : std::uint8_t { Gbr, NonGbr };

// One row of the standardized QCI characteristics table: resource type,
// scheduling priority (lower value wins) and packet delay budget.
struct QciProfile {
  int qci = 0;
  ResourceType resource_type = ResourceType::NonGbr;
  int priority = 0;
  int pdb_ms = 0;
};

class QciTable {
 public:
  // Validates coverage of QCI 1..9 with no gaps and positive delay budgets.
  explicit QciTable(const std::array<QciProfile, 9>& rows);

  // Compiled-in default: the standardized table with QCI 1..6 GBR and the
  // QCI 9 delay budget defaulted to 300 ms.
  static QciTable standard();

  const QciProfile& lookup(int qci) const;  // throws std::domain_error outside 1..9
  const std::array<QciProfile, 9>& rows() const { return rows_; }

  // QCIs sorted by service precedence: ascending priority, ties broken by
  // lower QCI so custom tables with equal priorities stay deterministic.
  std::array<int, 9> precedence_order() const;

 private:
  std::array<QciProfile, 9> rows_;
};

// True iff a strictly outranks b (takes resources first).
bool precedes(const QciProfile& a, const QciProfile& b);

// True iff a claimant may interrupt the holder and take its resource blocks:
// the holder must be non-GBR and strictly outranked.
bool is_preemptable_by(const QciProfile& holder, const QciProfile& claimant);

}  // namespace casim
