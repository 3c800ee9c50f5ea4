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

#include "mve/timing_model.hpp"

#include <array>
#include <bit>
#include <tuple>

namespace mve
{

namespace
{

  constexpr std::array<std::string_view, 4> kSchemeNames{"bs", "bp", "bh", "ac"};
  constexpr std::array<std::string_view, 9> kClassNames{
      "none", "copy", "add", "sub", "mul", "minmax", "xor", "compare", "shiftreg"};

  void checkWidth(unsigned n)
  {
    if (n != 8 && n != 16 && n != 32 && n != 64)
      throw Error("unsupported width " + std::to_string(n));
  }

  uint64_t ceilLog2(uint64_t n)
  {
    return n <= 1 ? 0 : std::bit_width(n - 1);
  }

  uint64_t ceilDiv(uint64_t a, uint64_t b)
  {
    return (a + b - 1) / b;
  }

} // namespace

std::string_view
schemeName(Scheme s)
{
  return kSchemeNames[size_t(s)];
}

std::optional<Scheme>
schemeFromName(std::string_view name)
{
  for (size_t i = 0; i < kSchemeNames.size(); ++i)
    if (kSchemeNames[i] == name)
      return Scheme(i);
  return std::nullopt;
}

std::string_view
opClassName(OpClass c)
{
  return kClassNames[size_t(c)];
}

std::optional<OpClass>
opClassFromName(std::string_view name)
{
  for (size_t i = 0; i < kClassNames.size(); ++i)
    if (kClassNames[i] == name)
      return OpClass(i);
  return std::nullopt;
}

OpClass
opClassOf(Opcode op)
{
  switch (op)
    {
    case Opcode::Cvt:
    case Opcode::Cpy:
    case Opcode::SetDup:
    case Opcode::ShiftLeftImm:
    case Opcode::ShiftRightImm:
    case Opcode::RotateLeftImm:
    case Opcode::RotateRightImm: return OpClass::Copy;
    case Opcode::ShiftLeftReg:
    case Opcode::ShiftRightReg: return OpClass::ShiftReg;
    case Opcode::Add: return OpClass::Add;
    case Opcode::Sub: return OpClass::Sub;
    case Opcode::Mul: return OpClass::Mul;
    case Opcode::Min:
    case Opcode::Max: return OpClass::MinMax;
    case Opcode::Xor: return OpClass::Xor;
    default: return isCompare(op) ? OpClass::Compare : OpClass::None;
    }
}

uint64_t
bsLatency(OpClass c, unsigned n)
{
  checkWidth(n);
  switch (c)
    {
    case OpClass::None: return 0;
    case OpClass::Copy:
    case OpClass::Add:
    case OpClass::Xor:
    case OpClass::Compare: return n;
    case OpClass::Sub:
    case OpClass::MinMax: return 2ull * n;
    case OpClass::Mul: return uint64_t(n) * n + 5ull * n;
    case OpClass::ShiftReg: return n * ceilLog2(n);
    }
  return 0;
}

uint64_t
bsFloatLatency(OpClass c, unsigned n)
{
  checkWidth(n);
  uint64_t m = n == 16 ? 11 : (n == 32 ? 24 : 53);
  uint64_t e = n == 16 ? 5 : (n == 32 ? 8 : 11);
  switch (c)
    {
    case OpClass::Add:
    case OpClass::Sub:
    case OpClass::MinMax:
    case OpClass::Compare: return 4ull * n + n * ceilLog2(n);
    case OpClass::Mul: return m * m + 5 * m + 3 * e;
    default: return bsLatency(c, n);
    }
}

uint64_t
acLatency(OpClass c, unsigned n, unsigned cbw)
{
  checkWidth(n);
  uint64_t add = 8ull * n + 2;
  switch (c)
    {
    case OpClass::None: return 0;
    case OpClass::Copy:
    case OpClass::Xor:
    case OpClass::Compare: return cbw;
    case OpClass::Add:
    case OpClass::Sub: return add;
    case OpClass::Mul: return n * add;
    case OpClass::MinMax: return add + n;
    case OpClass::ShiftReg: return ceilLog2(n) * (cbw + n);
    }
  return 0;
}

TimingModel::TimingModel(Scheme scheme, unsigned bitlinesPerArray, unsigned segmentBits,
                         unsigned acBitwise)
  : scheme_(scheme), bitlines_(bitlinesPerArray), p_(segmentBits), cbw_(acBitwise)
{
  if (p_ == 0 || (p_ & (p_ - 1)) != 0 || p_ > 64)
    throw Error("segment bits must be a power of two up to 64");
  if (bitlines_ == 0)
    throw Error("bitlines per array must be positive");
}

uint64_t
TimingModel::base(OpClass c, DataType t) const
{
  unsigned n = t.width;
  if (c == OpClass::None)
    return 0;
  bool fp = t.isFloat() && c != OpClass::Copy && c != OpClass::Xor && c != OpClass::ShiftReg;
  uint64_t bs = fp ? bsFloatLatency(c, n) : bsLatency(c, n);
  switch (scheme_)
    {
    case Scheme::BitSerial: return bs;
    case Scheme::BitParallel: return std::max<uint64_t>(1, ceilDiv(bs, n));
    case Scheme::BitHybrid:
      if (n % p_ != 0)
        throw Error("segment bits do not divide width " + std::to_string(n));
      return std::max<uint64_t>(1, ceilDiv(bs, p_));
    case Scheme::Associative:
      if (fp)
        return std::max<uint64_t>(1, ceilDiv(bs * (8ull * n + 2), n));
      return acLatency(c, n, cbw_);
    }
  return bs;
}

uint64_t
TimingModel::latency(OpClass c, DataType t) const
{
  auto it = overrides_.find({c, t.width, t.isFloat()});
  if (it != overrides_.end())
    return it->second;
  return base(c, t);
}

uint64_t
TimingModel::latency(const VectorInstruction& insn) const
{
  OpClass c = opClassOf(insn.op);
  DataType t = insn.type;
  if (insn.op == Opcode::Cvt && insn.srcType.width > t.width)
    t = insn.srcType;
  return latency(c, t);
}

unsigned
TimingModel::lanesPerArray(unsigned width) const
{
  checkWidth(width);
  switch (scheme_)
    {
    case Scheme::BitParallel: return bitlines_ / width;
    case Scheme::BitHybrid: return bitlines_ / p_;
    default: return bitlines_;
    }
}

void
TimingModel::setOverride(OpClass c, unsigned width, bool isFloat, uint64_t cycles)
{
  checkWidth(width);
  if (cycles == 0)
    throw Error("latency override must be at least 1 cycle");
  overrides_[{c, width, isFloat}] = cycles;
}

} // namespace mve
