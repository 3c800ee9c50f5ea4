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

#include "mve/func_exec.hpp"

#include <algorithm>

#include "mve/lanes.hpp"

namespace mve
{

RegisterFile::RegisterFile(unsigned lanes, unsigned count, bool unbounded)
  : lanes_(lanes), unbounded_(unbounded), regs_(count, std::vector<uint64_t>(lanes, 0))
{
}

void
RegisterFile::grow(unsigned id)
{
  if (id < regs_.size())
    return;
  if (!unbounded_)
    throw Error("register v" + std::to_string(id) + " does not exist");
  regs_.resize(id + 1, std::vector<uint64_t>(lanes_, 0));
}

std::span<uint64_t>
RegisterFile::operator[](unsigned id)
{
  grow(id);
  return regs_[id];
}

std::span<const uint64_t>
RegisterFile::at(unsigned id) const
{
  if (id >= regs_.size())
    {
      if (!unbounded_)
        throw Error("register v" + std::to_string(id) + " does not exist");
      static const std::vector<uint64_t> zeros(8192 * 4, 0);
      return std::span<const uint64_t>(zeros.data(), lanes_);
    }
  return regs_[id];
}

uint64_t
convertLane(uint64_t slot, DataType to, DataType from)
{
  if (!to.isFloat() && !from.isFloat())
    return lanes::normalize(slot, to);
  if (to.isFloat() && from.isFloat() && to.width == from.width)
    return slot;
  return lanes::fromDouble(lanes::toDouble(slot, from), to);
}

FunctionalMachine::FunctionalMachine(Memory memory, MachineOptions opts)
  : opts_(opts),
    regs_(opts.geometry.totalLanes(), opts.geometry.wordlinesPerArray / 8, opts.unboundedRegisters),
    memory_(std::move(memory))
{
  opts_.geometry.check();
  tag_.bits.assign(opts_.geometry.totalLanes(), 0);
}

std::vector<uint8_t>
FunctionalMachine::laneEnable(bool honorTag) const
{
  auto en = shapeEnable(state_, opts_.geometry.totalLanes());
  if (honorTag && tag_.active)
    for (size_t i = 0; i < en.size(); ++i)
      en[i] &= tag_.bits[i];
  return en;
}

std::vector<uint64_t>
FunctionalMachine::readRegister(unsigned id, unsigned laneCount) const
{
  auto r = regs_.at(id);
  unsigned n = std::min<unsigned>(laneCount, unsigned(r.size()));
  std::vector<uint64_t> out(n);
  for (unsigned i = 0; i < n; ++i)
    out[i] = lanes::raw(r[i], state_.kernelWidth);
  return out;
}

StepResult
FunctionalMachine::step(const VectorInstruction& insn)
{
  if (opts_.validate)
    {
      unsigned wl = opts_.unboundedRegisters ? UINT32_MAX : opts_.geometry.wordlinesPerArray;
      if (auto err = validateInstruction(state_, insn, opts_.geometry.totalLanes(), wl))
        throw Error(*err);
    }

  StepResult r;
  r.before = state_;
  if (isConfig(insn.op))
    {
      state_ = applyConfig(state_, insn);
      if (insn.op == Opcode::SetDimCount || insn.op == Opcode::SetWidth)
        tag_.active = false;
      return r;
    }
  switch (categoryOf(insn.op))
    {
    case OpCategory::Memory: execMemory(insn, r); break;
    case OpCategory::Move: execMove(insn, r); break;
    default: execArith(insn, r); break;
    }
  return r;
}

void
FunctionalMachine::run(const Program& program)
{
  for (const auto& item : program)
    if (auto* v = std::get_if<VectorInstruction>(&item))
      step(*v);
}

void
FunctionalMachine::execMemory(const VectorInstruction& insn, StepResult& r)
{
  const unsigned lanesTotal = opts_.geometry.totalLanes();
  const unsigned eb = insn.type.bytes();
  const Direction dir = isLoad(insn.op) ? Direction::Load : Direction::Store;

  AccessPlan plan;
  if (insn.fullRegister)
    {
      plan = fullRegisterPlan(insn.address, eb, lanesTotal, dir);
      r.enable.assign(lanesTotal, 1);
    }
  else
    {
      r.enable = laneEnable(true);
      auto strides = resolveModes(state_, insn.modes, dir);
      if (isRandom(insn.op))
        plan = randomPlan(state_, insn.address, strides, eb, memory_, dir, r.enable);
      else
        plan = stridedPlan(state_, insn.address, strides, eb, dir, r.enable);
    }

  if (dir == Direction::Load)
    {
      auto dst = regs_[*insn.dest];
      for (const auto& e : plan.entries)
        dst[e.lane] = lanes::normalize(memory_.read(e.address, eb), insn.type);
    }
  else
    {
      auto src = regs_.at(insn.sources.at(0));
      for (const auto& e : plan.entries)
        memory_.write(e.address, eb, lanes::raw(src[e.lane], insn.type.width));
    }
  r.plan = std::move(plan);
}

void
FunctionalMachine::execMove(const VectorInstruction& insn, StepResult& r)
{
  r.enable = laneEnable(true);
  const size_t n = r.enable.size();
  auto dstReg = regs_[*insn.dest];
  auto src = regs_.at(insn.sources.at(0));
  if (insn.op == Opcode::Cpy)
    {
      if (*insn.dest != insn.sources[0])
        lanes::active().select(src.data(), dstReg.data(), r.enable.data(), n);
      return;
    }
  std::vector<uint64_t> tmp(src.begin(), src.end());
  for (size_t i = 0; i < n; ++i)
    if (r.enable[i])
      dstReg[i] = convertLane(tmp[i], insn.type, insn.srcType);
}

namespace
{

  lanes::BinOp binOpOf(Opcode op)
  {
    switch (op)
      {
      case Opcode::Add: return lanes::BinOp::Add;
      case Opcode::Sub: return lanes::BinOp::Sub;
      case Opcode::Mul: return lanes::BinOp::Mul;
      case Opcode::Min: return lanes::BinOp::Min;
      case Opcode::Max: return lanes::BinOp::Max;
      case Opcode::Xor: return lanes::BinOp::Xor;
      case Opcode::ShiftLeftImm:
      case Opcode::ShiftLeftReg: return lanes::BinOp::ShiftLeft;
      default: return lanes::BinOp::ShiftRight;
      }
  }

  lanes::CmpOp cmpOpOf(Opcode op)
  {
    switch (op)
      {
      case Opcode::Gt: return lanes::CmpOp::Gt;
      case Opcode::Gte: return lanes::CmpOp::Gte;
      case Opcode::Lt: return lanes::CmpOp::Lt;
      case Opcode::Lte: return lanes::CmpOp::Lte;
      case Opcode::Eq: return lanes::CmpOp::Eq;
      default: return lanes::CmpOp::Neq;
      }
  }

} // namespace

void
FunctionalMachine::execArith(const VectorInstruction& insn, StepResult& r)
{
  const auto& k = lanes::active();
  const DataType t = insn.type;

  if (isCompare(insn.op))
    {
      r.enable = laneEnable(false);
      const size_t n = r.enable.size();
      auto a = regs_.at(insn.sources.at(0));
      auto b = regs_.at(insn.sources.at(1));
      k.compare(cmpOpOf(insn.op), t, a.data(), b.data(), tag_.bits.data(), n);
      for (size_t i = 0; i < n; ++i)
        tag_.bits[i] &= r.enable[i];
      tag_.active = true;
      return;
    }

  r.enable = laneEnable(true);
  const size_t n = r.enable.size();

  switch (insn.op)
    {
    case Opcode::SetDup:
      {
        uint64_t v = t.isFloat() ? lanes::raw(insn.imm, t.width) : lanes::normalize(insn.imm, t);
        std::vector<uint64_t> src(n, v);
        k.select(src.data(), regs_[*insn.dest].data(), r.enable.data(), n);
        return;
      }
    case Opcode::RotateLeftImm:
    case Opcode::RotateRightImm:
      {
        auto a = regs_.at(insn.sources.at(0));
        std::vector<uint64_t> res(n);
        bool left = insn.op == Opcode::RotateLeftImm;
        for (size_t i = 0; i < n; ++i)
          res[i] = lanes::rotateLane(t, a[i], unsigned(insn.imm % t.width), left);
        k.select(res.data(), regs_[*insn.dest].data(), r.enable.data(), n);
        return;
      }
    case Opcode::ShiftLeftImm:
    case Opcode::ShiftRightImm:
      {
        auto a = regs_.at(insn.sources.at(0));
        std::vector<uint64_t> tmpA(a.begin(), a.end());
        std::vector<uint64_t> amt(n, insn.imm);
        k.binary(binOpOf(insn.op), t, tmpA.data(), amt.data(), regs_[*insn.dest].data(),
                 r.enable.data(), n);
        return;
      }
    default:
      {
        auto a = regs_.at(insn.sources.at(0));
        auto b = regs_.at(insn.sources.at(1));
        std::vector<uint64_t> tmpA(a.begin(), a.end()), tmpB(b.begin(), b.end());
        k.binary(binOpOf(insn.op), t, tmpA.data(), tmpB.data(), regs_[*insn.dest].data(),
                 r.enable.data(), n);
        return;
      }
    }
}

} // namespace mve
