// SPDX-License-Identifier: Apache-2.0
#include "casim/event.hpp"

#include <cstdio>
#include <ostream>

#include "casim/rng.hpp"

namespace casim {

std::string canonical_line(const Event& e) {
  char buf[96];
  int n = 0;
  const auto f = static_cast<unsigned long long>(e.frame);
  switch (e.kind) {
    case EventKind::Arrived:
      n = std::snprintf(buf, sizeof(buf), "R %llu %u", f, e.burst);
      break;
    case EventKind::Allocated:
      n = std::snprintf(buf, sizeof(buf), "A %llu %u %u %u %llu", f, e.cc, e.prb, e.burst,
                        static_cast<unsigned long long>(e.bits));
      break;
    case EventKind::Preempted:
      n = std::snprintf(buf, sizeof(buf), "P %llu %u %u", f, e.burst, e.other);
      break;
    case EventKind::Migrated:
      n = std::snprintf(buf, sizeof(buf), "M %llu %u %u %u", f, e.burst, e.cc, e.cc_to);
      break;
    case EventKind::Done:
      n = std::snprintf(buf, sizeof(buf), "D %llu %u", f, e.burst);
      break;
    case EventKind::Expired:
      n = std::snprintf(buf, sizeof(buf), "X %llu %u", f, e.burst);
      break;
    case EventKind::Truncated:
      n = std::snprintf(buf, sizeof(buf), "T %llu %u", f, e.burst);
      break;
    case EventKind::Rejected:
      n = std::snprintf(buf, sizeof(buf), "J %llu %u", f, e.burst);
      break;
  }
  return std::string(buf, static_cast<std::size_t>(n));
}

void EventLog::emit(const Event& e) {
  const std::string line = canonical_line(e);
  digest_ = fnv1a64(line, digest_);
  digest_ = fnv1a64("\n", digest_);
  ++count_;
  if (retain_) retain_->push_back(e);
  if (stream_) *stream_ << line << '\n';
  for (const auto& obs : observers_) obs(e);
}

}  // namespace casim
