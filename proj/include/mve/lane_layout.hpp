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

#include <array>
#include <cstdint>
#include <vector>

#include "mve/isa.hpp"

namespace mve
{

  /// Compute-capable SRAM geometry. A physical register spans every array;
  /// each bitline holds one lane.
  struct EngineGeometry
  {
    unsigned numArrays = 32;
    unsigned bitlinesPerArray = 256;
    unsigned wordlinesPerArray = 256;
    unsigned arraysPerCb = 4;

    unsigned totalLanes() const { return numArrays * bitlinesPerArray; }
    unsigned cbCount() const { return numArrays / arraysPerCb; }
    unsigned lanesPerCb() const { return arraysPerCb * bitlinesPerArray; }

    /// Throws Error when the geometry is inconsistent.
    void check() const;
  };

  struct LaneCoordinate
  {
    unsigned lane = 0;
    unsigned cb = 0;
    unsigned array = 0;   // within the CB
    unsigned bitline = 0;

    friend bool operator==(const LaneCoordinate&, const LaneCoordinate&) = default;
  };

  using MultiIndex = std::array<uint32_t, kMaxDims>;   // {x, y, z, w}

  /// Row-major flattening with dimension 0 innermost.
  uint64_t flatten(const ControlState& state, const MultiIndex& idx);
  MultiIndex unflatten(const ControlState& state, uint64_t lane);

  LaneCoordinate coordinateOf(unsigned lane, const EngineGeometry& geom);
  unsigned laneOf(const LaneCoordinate& c, const EngineGeometry& geom);

  inline unsigned laneToCb(unsigned lane, const EngineGeometry& geom)
  {
    return lane / geom.lanesPerCb();
  }

  /// Lanes of the current shape whose highest-dimension element is enabled
  /// and which fall inside the lane-range predicate. Lanes beyond the shape
  /// are disabled. Tag predication is not included.
  std::vector<uint8_t> shapeEnable(const ControlState& state, unsigned totalLanes);

  /// Bit c set iff at least one enabled lane maps to control block c.
  std::vector<bool> cbMaskVector(const ControlState& state, const EngineGeometry& geom);

  /// Registers that fit in the wordline budget at the given width.
  inline unsigned registerCapacity(unsigned widthBits, unsigned wordlines = 256)
  {
    return wordlines / widthBits;
  }

} // namespace mve
