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
#include <span>
#include <vector>

#include "mve/addr_gen.hpp"
#include "mve/isa.hpp"
#include "mve/lane_layout.hpp"
#include "mve/memory.hpp"

namespace mve
{

  /// Vector registers, one 64-bit slot per lane. With `unbounded` set the
  /// file grows on demand (virtual registers of the compiler's input).
  class RegisterFile
  {
  public:
    RegisterFile(unsigned lanes, unsigned count, bool unbounded = false);

    std::span<uint64_t> operator[](unsigned id);
    std::span<const uint64_t> at(unsigned id) const;
    unsigned count() const { return unsigned(regs_.size()); }
    unsigned lanes() const { return lanes_; }

  private:
    void grow(unsigned id);

    unsigned lanes_;
    bool unbounded_;
    std::vector<std::vector<uint64_t>> regs_;
  };

  /// Per-lane predicate produced by compares. Inactive until the first
  /// compare; cleared by vsetdimc and vsetwidth.
  struct TagState
  {
    bool active = false;
    std::vector<uint8_t> bits;
  };

  struct StepResult
  {
    /// Lanes that participated (shape, mask, range and tag).
    std::vector<uint8_t> enable;
    std::optional<AccessPlan> plan;
    ControlState before;
  };

  struct MachineOptions
  {
    EngineGeometry geometry{};
    bool unboundedRegisters = false;
    bool validate = true;
  };

  /// Bit-accurate functional model of the vector engine.
  class FunctionalMachine
  {
  public:
    explicit FunctionalMachine(Memory memory, MachineOptions opts = {});

    StepResult step(const VectorInstruction& insn);
    void run(const Program& program);

    const ControlState& state() const { return state_; }
    const TagState& tag() const { return tag_; }
    RegisterFile& registers() { return regs_; }
    const RegisterFile& registers() const { return regs_; }
    Memory& memory() { return memory_; }
    const Memory& memory() const { return memory_; }
    const MachineOptions& options() const { return opts_; }

    /// Register contents as typed raw elements (low `width` bits).
    std::vector<uint64_t> readRegister(unsigned id, unsigned laneCount) const;

  private:
    std::vector<uint8_t> laneEnable(bool honorTag) const;
    void execMemory(const VectorInstruction& insn, StepResult& r);
    void execArith(const VectorInstruction& insn, StepResult& r);
    void execMove(const VectorInstruction& insn, StepResult& r);

    MachineOptions opts_;
    ControlState state_;
    RegisterFile regs_;
    TagState tag_;
    Memory memory_;
  };

  /// Convert one canonical slot between element types.
  uint64_t convertLane(uint64_t slot, DataType to, DataType from);

} // namespace mve
