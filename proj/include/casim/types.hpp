// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace casim {

using BurstId = std::uint32_t;
using UserId = std::uint32_t;
using CcId = std::uint16_t;

inline constexpr BurstId kNoBurst = 0xffffffffu;

enum class SchedulerKind { Jus, Srus, SblsCd, SblsLl, Qscs };

const char* to_string(SchedulerKind kind);
SchedulerKind scheduler_kind_from_string(const std::string& name);

}  // namespace casim
