// Copyright 2026 The mvesim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mve/engine.hpp"
#include "mve/mem_model.hpp"

namespace mve
{

  /// Machine parameters plus per-buffer residency pins, as read from a
  /// flat key=value config file.
  struct Settings
  {
    MachineConfig machine;
    std::map<std::string, Residency> residency;
    /// Overrides for every scheme; only those matching the final scheme
    /// take effect.
    std::vector<std::pair<Scheme, LatencyOverride>> latency;

    /// Machine config for the configured scheme with matching overrides.
    MachineConfig resolve() const { return resolve(machine.scheme); }
    MachineConfig resolve(Scheme scheme) const;
  };

  /// Apply one key. Throws Error for unknown keys or bad values.
  ///
  /// Keys: geometry.{arrays,bitlines,wordlines,arrays_per_cb}, scheme,
  /// scheme.{segment_bits,ac_bitwise}, core.{issue_width,rob_entries,
  /// vector_issue_latency,queue_entries}, memory.{line_bytes,l2_hit_latency,
  /// mshr_count,dram_latency,tmu_capacity,tmu_fill_cycles,l2_capacity},
  /// latency.<scheme>.<class>.<width>[.f] and residency.<buffer> = l2|dram.
  void applySetting(Settings& s, std::string_view key, std::string_view value);

  /// Parse a whole config file; '#' starts a comment. Errors carry the
  /// line number.
  void applyConfigText(Settings& s, std::string_view text);
  void applyConfigFile(Settings& s, const std::string& path);

} // namespace mve
