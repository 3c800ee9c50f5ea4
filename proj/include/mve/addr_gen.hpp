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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mve/isa.hpp"
#include "mve/memory.hpp"

namespace mve
{

  enum class Direction : uint8_t { Load, Store };

  /// Per-dimension strides in element units after stride-mode resolution.
  struct ResolvedStrides
  {
    std::array<int64_t, kMaxDims> stride{0, 0, 0, 0};
    friend bool operator==(const ResolvedStrides&, const ResolvedStrides&) = default;
  };

  struct LaneAddress
  {
    uint32_t lane;
    uint64_t address;
    friend bool operator==(const LaneAddress&, const LaneAddress&) = default;
  };

  /// Byte address of every enabled lane of one vector memory access, in
  /// lane order.
  struct AccessPlan
  {
    std::vector<LaneAddress> entries;
    unsigned elemBytes = 4;
    Direction direction = Direction::Load;
    std::optional<uint64_t> pointerTable;
  };

  /// Mode 0 -> 0, mode 1 -> 1, mode 2 -> S[i-1] * L[i-1] (1 at dim 0),
  /// mode 3 -> the load or store stride CR.
  ResolvedStrides resolveModes(const ControlState& state, uint8_t modeByte, Direction dir);

  /// Strided multi-dimensional access. `enable` defaults to the shape enable
  /// (dimension mask and lane range); lanes with enable 0 are omitted.
  AccessPlan stridedPlan(const ControlState& state, uint64_t base, const ResolvedStrides& strides,
                         unsigned elemBytes, Direction dir = Direction::Load,
                         std::span<const uint8_t> enable = {});

  /// Random-base access: the highest dimension reads its base address from
  /// a table of 64-bit pointers; inner dimensions use strides 0..top-1.
  AccessPlan randomPlan(const ControlState& state, uint64_t pointerTable,
                        const ResolvedStrides& strides, unsigned elemBytes, const Memory& mem,
                        Direction dir = Direction::Load, std::span<const uint8_t> enable = {});

  /// Whole-register sequential access used for spill and fill.
  AccessPlan fullRegisterPlan(uint64_t base, unsigned elemBytes, unsigned totalLanes,
                              Direction dir);

  /// Store footprint [low, high) computed as base + sum(L_i * S_i * elem)
  /// over the active dimensions; negative terms extend the low end.
  std::pair<uint64_t, uint64_t> addressRange(const ControlState& state, uint64_t base,
                                             const ResolvedStrides& strides, unsigned elemBytes);

} // namespace mve
