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

#include "mve/mem_model.hpp"

#include <algorithm>

namespace mve
{

void
MemoryTimingConfig::check(const EngineGeometry& geom) const
{
  if (cacheLineBytes == 0 || (cacheLineBytes & (cacheLineBytes - 1)) != 0)
    throw Error("cache line size must be a power of two");
  if (mshrCount == 0)
    throw Error("mshr count must be positive");
  if (tmuCapacityElements != geom.lanesPerCb())
    throw Error("tmu capacity must equal lanes per control block");
}

void
BufferMap::add(std::string name, uint64_t base, uint64_t size, std::optional<Residency> override)
{
  for (const auto& b : buffers_)
    if (b.name == name)
      throw Error("buffer '" + name + "' registered twice");
  buffers_.push_back({std::move(name), base, size, override});
}

void
BufferMap::pin(const std::string& name, Residency r)
{
  for (auto& b : buffers_)
    if (b.name == name)
      {
        b.override = r;
        return;
      }
  throw Error("unknown buffer '" + name + "'");
}

Residency
BufferMap::bySize(const Buffer& b, const MemoryTimingConfig& cfg)
{
  if (b.override)
    return *b.override;
  return b.size <= cfg.l2RegularCapacity ? Residency::L2Hit : Residency::Dram;
}

Residency
BufferMap::classify(const std::string& name, const MemoryTimingConfig& cfg) const
{
  for (const auto& b : buffers_)
    if (b.name == name)
      return bySize(b, cfg);
  throw Error("unknown buffer '" + name + "'");
}

Residency
BufferMap::classifyAddress(uint64_t addr, const MemoryTimingConfig& cfg) const
{
  for (const auto& b : buffers_)
    if (addr >= b.base && addr - b.base < b.size)
      return bySize(b, cfg);
  return Residency::Dram;
}

uint64_t
AccessTiming::totalLines() const
{
  uint64_t s = 0;
  for (const auto& c : perCb)
    s += c.uniqueLines;
  return s;
}

uint64_t
AccessTiming::totalBytes() const
{
  uint64_t s = 0;
  for (const auto& c : perCb)
    s += c.bytesMoved;
  return s;
}

uint64_t
AccessTiming::maxCycles() const
{
  uint64_t m = 0;
  for (const auto& c : perCb)
    m = std::max(m, c.cycles);
  return m;
}

AccessTiming
accessTime(const AccessPlan& plan, unsigned widthBits, const EngineGeometry& geom,
           const MemoryTimingConfig& cfg, const BufferMap& buffers)
{
  const unsigned cbs = geom.cbCount();
  const uint64_t lineBytes = cfg.cacheLineBytes;

  // Lines per CB in ascending line order, so the result depends only on
  // the address multiset and not on the entry order.
  std::vector<std::vector<uint64_t>> lines(cbs);
  for (const auto& e : plan.entries)
    {
      auto& v = lines.at(laneToCb(e.lane, geom));
      uint64_t first = e.address / lineBytes;
      uint64_t last = (e.address + plan.elemBytes - 1) / lineBytes;
      for (uint64_t l = first; l <= last; ++l)
        v.push_back(l);
    }

  AccessTiming out;
  out.perCb.resize(cbs);
  for (unsigned c = 0; c < cbs; ++c)
    {
      auto& v = lines[c];
      if (v.empty())
        continue;
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());

      CbAccessTiming& t = out.perCb[c];
      t.uniqueLines = v.size();
      t.mshrWaves = (v.size() + cfg.mshrCount - 1) / cfg.mshrCount;
      t.bytesMoved = t.uniqueLines * lineBytes;
      for (size_t w = 0; w < v.size(); w += cfg.mshrCount)
        {
          uint64_t lat = 0;
          size_t end = std::min(v.size(), w + cfg.mshrCount);
          for (size_t i = w; i < end; ++i)
            {
              Residency r = buffers.classifyAddress(v[i] * lineBytes, cfg);
              lat = std::max(lat, r == Residency::L2Hit ? cfg.l2HitLatency : cfg.dramLatency);
            }
          t.cycles += lat;
        }
      t.cycles += t.uniqueLines * cfg.tmuFillCycles + widthBits;
    }
  return out;
}

} // namespace mve
