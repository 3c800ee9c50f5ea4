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

#include "mve/kernels.hpp"

#include <algorithm>
#include <cstring>

#include "mve/addr_gen.hpp"
#include "mve/func_exec.hpp"

namespace mve::kernels
{

std::string_view
isaName(Isa isa)
{
  return isa == Isa::Mve ? "mve" : "rvv1d";
}

std::optional<Isa>
isaFromName(std::string_view name)
{
  if (name == "mve")
    return Isa::Mve;
  if (name == "rvv1d" || name == "rvv")
    return Isa::Rvv1d;
  return std::nullopt;
}

const std::vector<KernelEntry>&
registry()
{
  static const std::vector<KernelEntry> r{
      {"transpose", transpose, true},
      {"reduction", reduction, true},
      {"upsample", upsampleH2v2, true},
      {"gemm", gemmReplicated, true},
      {"spmm", spmm, true},
      {"axpy", axpy, false},
  };
  return r;
}

const KernelEntry&
lookup(std::string_view name)
{
  for (const auto& e : registry())
    if (e.name == name)
      return e;
  throw Error("unknown kernel '" + std::string(name) + "'");
}

std::vector<std::string>
defaultSet()
{
  std::vector<std::string> out;
  for (const auto& e : registry())
    out.emplace_back(e.name);
  return out;
}

KernelParams
defaultParams(std::string_view name)
{
  KernelParams p;
  lookup(name);
  if (name == "transpose")
    {
      p.m = 512;
      p.n = 49;
    }
  else if (name == "gemm")
    {
      p.m = 128;
      p.n = 3136;
      p.k = 64;
    }
  else if (name == "upsample")
    {
      p.rows = 128;
      p.cols = 64;
    }
  else if (name == "spmm")
    {
      p.rows = 64;
      p.inner = 64;
      p.cols = 128;
    }
  return p;
}

KernelParams
quickParams(std::string_view name)
{
  KernelParams p = defaultParams(name);
  if (name == "transpose")
    {
      p.m = 200;
      p.n = 49;
    }
  else if (name == "gemm")
    {
      p.m = 24;
      p.n = 400;
      p.k = 6;
    }
  else if (name == "upsample")
    {
      p.rows = 40;
      p.cols = 24;
    }
  else if (name == "spmm")
    {
      p.rows = 12;
      p.inner = 40;
      p.cols = 72;
      p.density = 0.1;
    }
  else if (name == "reduction" || name == "axpy")
    p.len = 9000;
  return p;
}

KernelInstance
build(std::string_view name, Isa isa, const KernelParams& params)
{
  KernelInstance k = lookup(name).build(isa, params);
  k.name = std::string(name);
  k.isa = isa;
  k.params = params;
  k.scratchBase = (k.memory.size() + 4095) / 4096 * 4096;
  return k;
}

uint64_t
Layout::alloc(KernelInstance& k, const std::string& name, uint64_t bytes)
{
  uint64_t base = next_;
  uint64_t size = std::max<uint64_t>(bytes, 1);
  next_ = (base + size + 63) / 64 * 64;
  k.buffers.add(name, base, size);
  if (k.memory.size() < next_)
    k.memory.resize(next_);
  return base;
}

namespace
{

  unsigned maxRegister(const Program& p)
  {
    unsigned m = 0;
    for (const auto& item : p)
      if (const auto* v = std::get_if<VectorInstruction>(&item))
        {
          if (v->dest)
            m = std::max(m, *v->dest);
          for (unsigned s : v->sources)
            m = std::max(m, s);
        }
    return m;
  }

  bool isPrefix(const std::vector<uint8_t>& en)
  {
    size_t i = 0;
    while (i < en.size() && en[i])
      ++i;
    for (; i < en.size(); ++i)
      if (en[i])
        return false;
    return true;
  }

} // namespace

Lowering
lowerRvv1d(const Program& mve, unsigned totalLanes, unsigned scalarPerSegment)
{
  Lowering out;
  out.trace.reserve(mve.size());
  ControlState state;
  unsigned nextTemp = maxRegister(mve) + 1;

  for (const auto& item : mve)
    {
      const auto* v = std::get_if<VectorInstruction>(&item);
      if (!v || !isMemory(v->op) || v->fullRegister)
        {
          if (v && isConfig(v->op))
            state = applyConfig(state, *v);
          out.trace.push_back(item);
          continue;
        }

      const Direction dir = isLoad(v->op) ? Direction::Load : Direction::Store;
      const unsigned dims = state.dimCount;
      const auto& L = state.dimLength;
      const auto strides = resolveModes(state, v->modes, dir);
      const bool random = isRandom(v->op);
      const auto enable = shapeEnable(state, totalLanes);
      const bool rangeActive = state.laneLo != 0 || state.laneHi != UINT32_MAX;

      if (random && dims == 1)
        {
          out.trace.push_back(item);
          ++out.keptAccesses;
          continue;
        }

      // Longest run of dimensions from 0 that a single 1D stream covers.
      const unsigned limit = random ? dims - 1 : dims;
      unsigned segDims = 1;
      bool arithmetic = true;
      if (strides.stride[0] == 0 && limit > 1)
        {
          segDims = 2;
          arithmetic = false;
        }
      if (arithmetic)
        {
          int64_t span = L[0];
          while (segDims < limit
                 && (L[segDims] == 1 || strides.stride[segDims] == strides.stride[0] * span))
            {
              span *= L[segDims];
              ++segDims;
            }
        }

      if (!random && segDims == dims && arithmetic && isPrefix(enable) && !rangeActive)
        {
          out.trace.push_back(item);
          ++out.keptAccesses;
          continue;
        }

      uint64_t segLen = 1;
      for (unsigned d = 0; d < segDims; ++d)
        segLen *= L[d];
      const uint64_t lanes = std::min<uint64_t>(state.laneCount(), totalLanes);

      std::vector<std::pair<uint32_t, uint32_t>> groups;
      for (uint64_t lo = 0; lo < lanes; lo += segLen)
        {
          uint64_t hi = std::min(lanes, lo + segLen);
          bool any = false;
          for (uint64_t l = lo; l < hi && !any; ++l)
            any = enable[l] != 0;
          if (any)
            groups.emplace_back(uint32_t(lo), uint32_t(hi));
        }
      if (groups.empty())
        {
          out.trace.push_back(item);
          ++out.keptAccesses;
          continue;
        }

      const unsigned temp = nextTemp++;
      for (auto [lo, hi] : groups)
        {
          out.trace.push_back(ScalarMarker{scalarPerSegment, std::nullopt});
          out.trace.push_back(isa::config(Opcode::SetLaneRange, lo, hi));
          VectorInstruction access = *v;
          if (dir == Direction::Load)
            {
              access.dest = temp;
              out.trace.push_back(access);
              out.trace.push_back(isa::copy(v->type, *v->dest, temp));
            }
          else
            {
              out.trace.push_back(isa::copy(v->type, temp, v->sources.at(0)));
              access.sources = {temp};
              out.trace.push_back(access);
            }
        }
      out.trace.push_back(isa::config(Opcode::SetLaneRange, 0, UINT32_MAX));
      if (rangeActive)
        out.trace.push_back(isa::config(Opcode::SetLaneRange, state.laneLo, state.laneHi));
      out.groups += groups.size();
      ++out.loweredAccesses;
    }
  return out;
}

Prepared
prepare(const KernelInstance& k, const EngineGeometry& geom)
{
  Prepared p;
  vcompile::CompileOptions co;
  const uint64_t scratch = k.scratchBase ? k.scratchBase : (k.memory.size() + 4095) / 4096 * 4096;
  co.spillBase = scratch;
  co.totalLanes = geom.totalLanes();
  co.wordlines = geom.wordlinesPerArray;
  p.compiled = vcompile::compile(k.trace, co);
  p.program = p.compiled.program;
  p.memory = k.memory;
  p.buffers = k.buffers;
  if (p.compiled.scratchBytes > 0)
    {
      p.memory.resize(scratch + p.compiled.scratchBytes);
      p.buffers.add("scratch", scratch, p.compiled.scratchBytes, Residency::L2Hit);
    }
  return p;
}

Memory
runVirtual(const KernelInstance& k, const EngineGeometry& geom)
{
  FunctionalMachine fm(k.memory, MachineOptions{geom, true, true});
  fm.run(vcompile::injectWidth(k.trace));
  return std::move(fm.memory());
}

namespace
{

  int64_t orderedBits(uint64_t bits, unsigned width)
  {
    // Map float bit patterns onto a monotone integer line.
    uint64_t sign = uint64_t(1) << (width - 1);
    uint64_t mag = bits & (sign - 1);
    return (bits & sign) ? -int64_t(mag) : int64_t(mag);
  }

} // namespace

std::optional<std::string>
verify(const KernelInstance& k, const Memory& finalMemory, unsigned ulps)
{
  std::vector<uint8_t> got;
  if (k.result)
    got = k.result(finalMemory);
  else
    for (const auto& o : k.outputs)
      {
        auto bytes = finalMemory.bytes().subspan(o.base, o.bytes);
        got.insert(got.end(), bytes.begin(), bytes.end());
      }
  if (got.size() != k.expected.size())
    return "output size " + std::to_string(got.size()) + " != expected "
      + std::to_string(k.expected.size());

  size_t off = 0;
  std::vector<const OutputCheck*> regions;
  if (!k.result)
    for (const auto& o : k.outputs)
      regions.push_back(&o);
  if (regions.empty())
    {
      for (size_t i = 0; i < got.size(); ++i)
        if (got[i] != k.expected[i])
          return "byte " + std::to_string(i) + " differs";
      return std::nullopt;
    }
  for (const auto* o : regions)
    {
      const unsigned eb = o->type.bytes();
      for (uint64_t i = 0; i < o->bytes; i += eb)
        {
          uint64_t a = 0, b = 0;
          std::memcpy(&a, got.data() + off + i, eb);
          std::memcpy(&b, k.expected.data() + off + i, eb);
          if (a == b)
            continue;
          if (o->type.isFloat())
            {
              int64_t d = orderedBits(a, o->type.width) - orderedBits(b, o->type.width);
              if (d <= int64_t(ulps) && d >= -int64_t(ulps))
                continue;
            }
          return o->buffer + " element " + std::to_string(i / eb) + ": got " + std::to_string(a)
            + ", expected " + std::to_string(b);
        }
      off += o->bytes;
    }
  return std::nullopt;
}

} // namespace mve::kernels
