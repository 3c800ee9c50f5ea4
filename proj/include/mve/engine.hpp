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
#include <optional>
#include <string>
#include <vector>

#include "mve/func_exec.hpp"
#include "mve/isa.hpp"
#include "mve/lane_layout.hpp"
#include "mve/mem_model.hpp"
#include "mve/timing_model.hpp"

namespace mve
{

  struct CoreConfig
  {
    unsigned issueWidth = 4;
    unsigned robEntries = 128;
    uint64_t vectorIssueLatency = 4;
    unsigned queueEntries = 128;

    /// Cycles the core spends on a run of `count` scalar instructions.
    uint64_t scalarCycles(uint64_t count) const
    { return (count + issueWidth - 1) / issueWidth; }
  };

  struct LatencyOverride
  {
    OpClass cls;
    unsigned width;
    bool isFloat;
    uint64_t cycles;
  };

  struct MachineConfig
  {
    EngineGeometry geometry{};
    Scheme scheme = Scheme::BitSerial;
    unsigned segmentBits = 4;
    unsigned acBitwise = 2;
    CoreConfig core{};
    MemoryTimingConfig memory{};
    std::vector<LatencyOverride> latencyOverrides;

    void check() const;
    TimingModel timingModel() const;
  };

  struct CbStats
  {
    uint64_t idle = 0;
    uint64_t compute = 0;
    uint64_t dataAccess = 0;
  };

  struct SimStats
  {
    uint64_t totalCycles = 0;
    std::vector<CbStats> perCb;
    uint64_t vinstsConfig = 0;
    uint64_t vinstsMemory = 0;
    uint64_t vinstsMove = 0;
    uint64_t vinstsArith = 0;
    uint64_t scalarInsts = 0;
    uint64_t bytesMoved = 0;

    uint64_t vectorInsts() const { return vinstsConfig + vinstsMemory + vinstsMove + vinstsArith; }
    uint64_t idle() const;
    uint64_t compute() const;
    uint64_t dataAccess() const;
    /// Mean over CBs of the busy (compute + data access) fraction.
    double utilization() const;
    /// Mean over CBs of the compute-only fraction.
    double computeShare() const;
  };

  enum class WorkKind : uint8_t { Compute, Memory };

  struct CbInterval
  {
    unsigned cb;
    uint64_t start;
    uint64_t end;
  };

  /// Schedule of one vector instruction, kept for invariant checking.
  struct ScheduleRecord
  {
    size_t index;            // position among the program's vector instructions
    Opcode op;
    WorkKind kind;
    uint64_t issue;
    uint64_t dequeue;
    std::vector<bool> cbMask;
    std::vector<CbInterval> intervals;
  };

  struct SimResult
  {
    SimStats stats;
    Memory memory;
    std::vector<ScheduleRecord> schedule;
  };

  struct RunOptions
  {
    bool recordSchedule = false;
    bool unboundedRegisters = false;
  };

  /// Execute a program on the modeled engine. Values come from the
  /// functional model; the timing model only decides when things happen.
  SimResult run(const Program& program, const MachineConfig& machine, Memory memory,
                const BufferMap& buffers = {}, RunOptions opts = {});

} // namespace mve
