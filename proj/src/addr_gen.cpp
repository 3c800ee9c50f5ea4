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

#include "mve/addr_gen.hpp"

#include <algorithm>
#include <limits>

#include "mve/lane_layout.hpp"

namespace mve
{

namespace
{

  uint64_t checkedAddress(uint64_t base, int64_t elementOffset, unsigned elemBytes)
  {
    __int128 a = __int128(base) + __int128(elementOffset) * elemBytes;
    if (a < 0 || a > __int128(std::numeric_limits<int64_t>::max()))
      throw Error("address overflow in vector access");
    return uint64_t(a);
  }

  std::vector<uint8_t> defaultEnable(const ControlState& state, std::span<const uint8_t> enable)
  {
    if (!enable.empty())
      return {enable.begin(), enable.end()};
    return shapeEnable(state, unsigned(std::max<uint64_t>(state.laneCount(), 1)));
  }

  // Walk the lanes of the shape in nested-loop order, which equals lane
  // order because dimension 0 is innermost.
  template <typename Fn>
  void forEachLane(const ControlState& state, uint64_t count, Fn&& fn)
  {
    MultiIndex idx{0, 0, 0, 0};
    for (uint64_t lane = 0; lane < count; ++lane)
      {
        fn(lane, idx);
        for (unsigned d = 0; d < state.dimCount; ++d)
          {
            if (++idx[d] < state.dimLength[d])
              break;
            idx[d] = 0;
          }
      }
  }

} // namespace

ResolvedStrides
resolveModes(const ControlState& state, uint8_t modeByte, Direction dir)
{
  ResolvedStrides r;
  const auto& cr = dir == Direction::Load ? state.loadStride : state.storeStride;
  for (unsigned d = 0; d < kMaxDims; ++d)
    {
      switch ((modeByte >> (2 * d)) & 3u)
        {
        case 0: r.stride[d] = 0; break;
        case 1: r.stride[d] = 1; break;
        case 2: r.stride[d] = d == 0 ? 1 : r.stride[d - 1] * int64_t(state.dimLength[d - 1]); break;
        default: r.stride[d] = cr[d]; break;
        }
    }
  return r;
}

AccessPlan
stridedPlan(const ControlState& state, uint64_t base, const ResolvedStrides& strides,
            unsigned elemBytes, Direction dir, std::span<const uint8_t> enable)
{
  AccessPlan plan;
  plan.elemBytes = elemBytes;
  plan.direction = dir;
  auto en = defaultEnable(state, enable);
  uint64_t count = std::min<uint64_t>(state.laneCount(), en.size());
  plan.entries.reserve(count);
  forEachLane(state, count, [&](uint64_t lane, const MultiIndex& idx) {
    if (!en[lane])
      return;
    int64_t off = 0;
    for (unsigned d = 0; d < state.dimCount; ++d)
      off += int64_t(idx[d]) * strides.stride[d];
    plan.entries.push_back({uint32_t(lane), checkedAddress(base, off, elemBytes)});
  });
  return plan;
}

AccessPlan
randomPlan(const ControlState& state, uint64_t pointerTable, const ResolvedStrides& strides,
           unsigned elemBytes, const Memory& mem, Direction dir, std::span<const uint8_t> enable)
{
  AccessPlan plan;
  plan.elemBytes = elemBytes;
  plan.direction = dir;
  plan.pointerTable = pointerTable;
  auto en = defaultEnable(state, enable);
  uint64_t count = std::min<uint64_t>(state.laneCount(), en.size());
  unsigned top = state.topDim();
  uint32_t topLen = state.dimLength[top];

  std::vector<std::optional<uint64_t>> bases(topLen);
  plan.entries.reserve(count);
  forEachLane(state, count, [&](uint64_t lane, const MultiIndex& idx) {
    if (!en[lane])
      return;
    auto& b = bases[idx[top]];
    if (!b)
      b = mem.read(pointerTable + 8 * uint64_t(idx[top]), 8);
    int64_t off = 0;
    for (unsigned d = 0; d < top; ++d)
      off += int64_t(idx[d]) * strides.stride[d];
    plan.entries.push_back({uint32_t(lane), checkedAddress(*b, off, elemBytes)});
  });
  return plan;
}

AccessPlan
fullRegisterPlan(uint64_t base, unsigned elemBytes, unsigned totalLanes, Direction dir)
{
  AccessPlan plan;
  plan.elemBytes = elemBytes;
  plan.direction = dir;
  plan.entries.reserve(totalLanes);
  for (uint32_t lane = 0; lane < totalLanes; ++lane)
    plan.entries.push_back({lane, base + uint64_t(lane) * elemBytes});
  return plan;
}

std::pair<uint64_t, uint64_t>
addressRange(const ControlState& state, uint64_t base, const ResolvedStrides& strides,
             unsigned elemBytes)
{
  int64_t lo = 0, hi = 0;
  for (unsigned d = 0; d < state.dimCount; ++d)
    {
      int64_t term = int64_t(state.dimLength[d]) * strides.stride[d];
      (term < 0 ? lo : hi) += term;
    }
  return {checkedAddress(base, lo, elemBytes), checkedAddress(base, hi, elemBytes)};
}

} // namespace mve
