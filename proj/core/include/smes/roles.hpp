// Copyright 2026 The smes-lab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace smes {

// Spans of a linearized training sequence, in their fixed order.
enum class Role : std::uint8_t { kHist, kUsrEmo, kStrat, kSysEmo, kResp };

inline constexpr std::size_t kNumRoles = 5;

inline constexpr std::array<Role, kNumRoles> kRoleOrder = {Role::kHist, Role::kUsrEmo, Role::kStrat,
                                                           Role::kSysEmo, Role::kResp};

inline constexpr std::array<std::string_view, kNumRoles> kRoleNames = {"HIST", "USR_EMO", "STRAT", "SYS_EMO",
                                                                        "RESP"};

constexpr std::size_t index_of(Role r) { return static_cast<std::size_t>(r); }
constexpr std::string_view to_string(Role r) { return kRoleNames[index_of(r)]; }

std::optional<Role> parse_role(std::string_view name);

}  // namespace smes
