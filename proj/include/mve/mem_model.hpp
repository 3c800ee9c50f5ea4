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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mve/addr_gen.hpp"
#include "mve/lane_layout.hpp"

namespace mve
{

  struct MemoryTimingConfig
  {
    unsigned cacheLineBytes = 64;
    uint64_t l2HitLatency = 12;
    unsigned mshrCount = 46;
    uint64_t dramLatency = 100;
    unsigned tmuCapacityElements = 1024;
    uint64_t tmuFillCycles = 1;
    uint64_t l2RegularCapacity = 256 * 1024;

    /// Throws Error on zero-sized or inconsistent parameters.
    void check(const EngineGeometry& geom) const;
  };

  enum class Residency : uint8_t { L2Hit, Dram };

  /// Kernel buffers by address range, each classified as L2-resident or
  /// streaming from DRAM.
  class BufferMap
  {
  public:
    struct Buffer
    {
      std::string name;
      uint64_t base = 0;
      uint64_t size = 0;
      std::optional<Residency> override;
    };

    void add(std::string name, uint64_t base, uint64_t size,
             std::optional<Residency> override = std::nullopt);
    void pin(const std::string& name, Residency r);

    /// Throws Error for an unknown buffer name.
    Residency classify(const std::string& name, const MemoryTimingConfig& cfg) const;
    /// Residency of the buffer containing `addr`; unmapped addresses are DRAM.
    Residency classifyAddress(uint64_t addr, const MemoryTimingConfig& cfg) const;

    const std::vector<Buffer>& buffers() const { return buffers_; }

  private:
    static Residency bySize(const Buffer& b, const MemoryTimingConfig& cfg);
    std::vector<Buffer> buffers_;
  };

  struct CbAccessTiming
  {
    uint64_t uniqueLines = 0;
    uint64_t mshrWaves = 0;
    uint64_t cycles = 0;
    uint64_t bytesMoved = 0;
  };

  struct AccessTiming
  {
    std::vector<CbAccessTiming> perCb;
    uint64_t totalLines() const;
    uint64_t totalBytes() const;
    uint64_t maxCycles() const;
  };

  /// Per-CB data-access cost of one vector load or store. Lines are counted
  /// over each CB's enabled lanes; CBs with no enabled lanes cost nothing.
  AccessTiming accessTime(const AccessPlan& plan, unsigned widthBits, const EngineGeometry& geom,
                          const MemoryTimingConfig& cfg, const BufferMap& buffers);

} // namespace mve
