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

#include "mve/lane_layout.hpp"

#include <algorithm>

namespace mve
{

void
EngineGeometry::check() const
{
  if (numArrays == 0 || bitlinesPerArray == 0 || wordlinesPerArray == 0 || arraysPerCb == 0)
    throw Error("geometry fields must be positive");
  if (numArrays % arraysPerCb != 0)
    throw Error("array count must be a multiple of arrays per control block");
}

uint64_t
flatten(const ControlState& state, const MultiIndex& idx)
{
  uint64_t lane = 0;
  for (int d = int(kMaxDims) - 1; d >= 0; --d)
    {
      uint32_t len = unsigned(d) < state.dimCount ? state.dimLength[d] : 1;
      if (idx[d] >= len)
        throw Error("index " + std::to_string(idx[d]) + " out of range in dimension "
                    + std::to_string(d));
      lane = lane * len + idx[d];
    }
  return lane;
}

MultiIndex
unflatten(const ControlState& state, uint64_t lane)
{
  MultiIndex idx{0, 0, 0, 0};
  for (unsigned d = 0; d < state.dimCount; ++d)
    {
      idx[d] = uint32_t(lane % state.dimLength[d]);
      lane /= state.dimLength[d];
    }
  return idx;
}

LaneCoordinate
coordinateOf(unsigned lane, const EngineGeometry& geom)
{
  LaneCoordinate c;
  c.lane = lane;
  c.bitline = lane % geom.bitlinesPerArray;
  unsigned globalArray = lane / geom.bitlinesPerArray;
  c.cb = globalArray / geom.arraysPerCb;
  c.array = globalArray % geom.arraysPerCb;
  return c;
}

unsigned
laneOf(const LaneCoordinate& c, const EngineGeometry& geom)
{
  return (c.cb * geom.arraysPerCb + c.array) * geom.bitlinesPerArray + c.bitline;
}

std::vector<uint8_t>
shapeEnable(const ControlState& state, unsigned totalLanes)
{
  std::vector<uint8_t> en(totalLanes, 0);
  uint64_t count = std::min<uint64_t>(state.laneCount(), totalLanes);
  uint64_t lo = std::min<uint64_t>(state.laneLo, count);
  uint64_t hi = std::min<uint64_t>(state.laneHi, count);
  if (lo >= hi)
    return en;
  uint64_t block = count / state.dimLength[state.topDim()];
  if (state.dimMask.all() || block == 0)
    {
      std::fill(en.begin() + lo, en.begin() + hi, uint8_t(1));
      return en;
    }
  for (uint64_t lane = lo; lane < hi; ++lane)
    en[lane] = state.topEnabled(uint32_t(lane / block)) ? 1 : 0;
  return en;
}

std::vector<bool>
cbMaskVector(const ControlState& state, const EngineGeometry& geom)
{
  std::vector<bool> mask(geom.cbCount(), false);
  auto en = shapeEnable(state, geom.totalLanes());
  unsigned per = geom.lanesPerCb();
  for (unsigned cb = 0; cb < geom.cbCount(); ++cb)
    mask[cb] = std::any_of(en.begin() + cb * per, en.begin() + (cb + 1) * per,
                           [](uint8_t e) { return e != 0; });
  return mask;
}

} // namespace mve
