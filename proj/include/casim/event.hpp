// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "casim/types.hpp"

namespace casim {

enum class EventKind : std::uint8_t {
  Arrived,    // R frame burst
  Allocated,  // A frame cc prb burst bits
  Preempted,  // P frame burst claimant
  Migrated,   // M frame burst from_cc to_cc
  Done,       // D frame burst        (served_bits reached size_bits)
  Expired,    // X frame burst        (GBR window ended with a shortfall)
  Truncated,  // T frame burst        (unfinished at horizon)
  Rejected,   // J frame burst        (capacity-infeasible request)
};

struct Event {
  EventKind kind = EventKind::Arrived;
  std::uint64_t frame = 0;
  BurstId burst = kNoBurst;
  CcId cc = 0;
  std::uint16_t prb = 0;
  std::uint64_t bits = 0;
  CcId cc_to = 0;        // Migrated
  BurstId other = kNoBurst;  // Preempted: admitted claimant
};

// Stable line serialization; the run digest is FNV-1a64 over these lines.
std::string canonical_line(const Event& e);

class EventLog {
 public:
  using Observer = std::function<void(const Event&)>;

  void set_retain(std::vector<Event>* sink) { retain_ = sink; }
  void set_stream(std::ostream* out) { stream_ = out; }
  void add_observer(Observer obs) { observers_.push_back(std::move(obs)); }

  void emit(const Event& e);

  std::uint64_t digest() const { return digest_; }
  std::uint64_t count() const { return count_; }

 private:
  std::uint64_t digest_ = 14695981039346656037ull;
  std::uint64_t count_ = 0;
  std::vector<Event>* retain_ = nullptr;
  std::ostream* stream_ = nullptr;
  std::vector<Observer> observers_;
};

}  // namespace casim
