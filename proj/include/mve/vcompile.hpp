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
#include <vector>

#include "mve/isa.hpp"

namespace mve::vcompile
{

  /// Virtual registers are unbounded. A register is normally defined once;
  /// a later write to an already-defined register is a merging write that
  /// also reads the old contents (lanes outside the enable are kept).

  struct LiveRange
  {
    unsigned vreg;
    size_t def;
    size_t lastUse;
    unsigned widthBits;
    unsigned useCount;
  };

  struct Liveness
  {
    std::vector<LiveRange> ranges;
    /// Registers required at each program item: max(LT + S, LT + S_alive + D)
    /// with LT the live-through count, S the sources, S_alive the sources
    /// still live afterwards and D the newly defined destination.
    std::vector<unsigned> requirement;
    /// Live registers just before each program item.
    std::vector<unsigned> liveBefore;
    unsigned peak = 0;
  };

  Liveness liveness(const Program& trace);

  /// Widest element width touched by any vector instruction, or by an
  /// explicit vsetwidth; 0 for a trace without vector work.
  unsigned detectWidth(const Program& trace);

  /// Prepend vsetwidth(detectWidth) when the trace has vector work.
  Program injectWidth(const Program& trace);

  enum class VictimPolicy : uint8_t { FurthestNextUse, LeastRecentlyUsed };

  struct AllocOptions
  {
    unsigned capacity = 8;
    uint64_t spillBase = 0;
    unsigned totalLanes = 8192;
    VictimPolicy policy = VictimPolicy::FurthestNextUse;
  };

  struct AllocResult
  {
    Program program;
    unsigned spills = 0;
    unsigned fills = 0;
    unsigned slots = 0;
    uint64_t scratchBytes = 0;
  };

  /// Bytes one scratch slot occupies.
  uint64_t slotBytes(unsigned totalLanes);

  /// Map virtual to physical registers, inserting whole-register spill
  /// stores and fill loads. Throws Error when a single instruction needs
  /// more registers than `capacity` or reads an undefined register.
  AllocResult allocate(const Program& trace, const AllocOptions& opts);

  /// Reorder independent instructions within barrier-free regions to keep
  /// the live count at or below `capacity`. Never worsens the peak.
  Program schedule(const Program& trace, unsigned capacity);

  /// Dependency check used by tests: true when `after` is a permutation of
  /// `before` that respects register and memory ordering.
  bool respectsDependencies(const Program& before, const Program& after);

  struct CompileOptions
  {
    uint64_t spillBase = 0;
    unsigned totalLanes = 8192;
    unsigned wordlines = 256;
    bool schedule = true;
  };

  struct Compiled
  {
    Program program;
    unsigned width = 0;
    unsigned capacity = 0;
    unsigned peakVirtual = 0;
    unsigned spills = 0;
    unsigned fills = 0;
    uint64_t scratchBytes = 0;
  };

  /// detect width -> schedule -> allocate.
  Compiled compile(const Program& trace, const CompileOptions& opts);

} // namespace mve::vcompile
