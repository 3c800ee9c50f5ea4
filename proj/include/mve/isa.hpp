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
#include <bitset>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mve
{

  /// Raised for malformed programs, illegal configuration and other
  /// conditions the simulator cannot continue from.
  class Error : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  constexpr unsigned kMaxDims = 4;
  constexpr unsigned kMaskBits = 256;

  enum class TypeKind : uint8_t { Unsigned, Signed, Float };

  /// Element data type. Signed integers use the plain suffixes (b/w/dw/qw),
  /// unsigned integers prefix them with 'u', floats are hf and f.
  struct DataType
  {
    TypeKind kind = TypeKind::Signed;
    unsigned width = 32;

    constexpr unsigned bytes() const { return width / 8; }
    constexpr bool isFloat() const { return kind == TypeKind::Float; }
    constexpr bool isSigned() const { return kind == TypeKind::Signed; }

    std::string_view suffix() const;
    static std::optional<DataType> fromSuffix(std::string_view s);

    friend constexpr bool operator==(DataType, DataType) = default;
  };

  namespace types
  {
    constexpr DataType b{TypeKind::Signed, 8};
    constexpr DataType w{TypeKind::Signed, 16};
    constexpr DataType dw{TypeKind::Signed, 32};
    constexpr DataType qw{TypeKind::Signed, 64};
    constexpr DataType ub{TypeKind::Unsigned, 8};
    constexpr DataType uw{TypeKind::Unsigned, 16};
    constexpr DataType udw{TypeKind::Unsigned, 32};
    constexpr DataType uqw{TypeKind::Unsigned, 64};
    constexpr DataType hf{TypeKind::Float, 16};
    constexpr DataType f{TypeKind::Float, 32};
  }

  /// Every data type the ISA accepts.
  const std::array<DataType, 10>& allTypes();

  enum class Opcode : uint8_t
  {
    // Config
    SetDimCount, SetDimLength, SetMask, UnsetMask, SetWidth,
    SetLoadStride, SetStoreStride,
    SetLaneRange,   // lane-range predicate used by the 1D baseline lowering
    // Move
    Cvt, Cpy,
    // Memory
    StridedLoad, RandomLoad, StridedStore, RandomStore,
    // Arithmetic
    SetDup, ShiftLeftImm, ShiftRightImm, RotateLeftImm, RotateRightImm,
    ShiftLeftReg, ShiftRightReg,
    Add, Sub, Mul, Min, Max, Xor,
    Gt, Gte, Lt, Lte, Eq, Neq,
    Count_
  };

  enum class OpCategory : uint8_t { Config, Move, Memory, Arithmetic };

  /// Operand classes, used for arity checking and text encoding.
  struct OpShape
  {
    std::string_view mnemonic;
    OpCategory category;
    bool hasDest;        // writes a vector register
    unsigned vecSources; // vector sources
    unsigned scalars;    // integer/immediate operands (config args, address, imm)
  };

  const OpShape& shapeOf(Opcode op);
  std::optional<Opcode> opcodeFromMnemonic(std::string_view m);

  constexpr bool isMemory(Opcode op)
  { return op >= Opcode::StridedLoad && op <= Opcode::RandomStore; }
  constexpr bool isLoad(Opcode op)
  { return op == Opcode::StridedLoad || op == Opcode::RandomLoad; }
  constexpr bool isStore(Opcode op)
  { return op == Opcode::StridedStore || op == Opcode::RandomStore; }
  constexpr bool isRandom(Opcode op)
  { return op == Opcode::RandomLoad || op == Opcode::RandomStore; }
  constexpr bool isCompare(Opcode op)
  { return op >= Opcode::Gt && op <= Opcode::Neq; }
  constexpr bool isConfig(Opcode op)
  { return op <= Opcode::SetLaneRange; }

  OpCategory categoryOf(Opcode op);

  /// One decoded vector instruction.
  ///
  /// Register operands are physical register ids (or virtual ids inside the
  /// compiler). The meaning of the scalar fields depends on the opcode:
  ///   config: arg0/arg1 hold (dim, value), (count), (index) or (lo, hi)
  ///   memory: address is the base (strided) or pointer-table (random) address
  ///   arith:  imm holds the immediate / broadcast bit pattern
  struct VectorInstruction
  {
    Opcode op = Opcode::Add;
    DataType type{};
    DataType srcType{};           // vcvt source type
    std::optional<unsigned> dest;
    std::vector<unsigned> sources;
    int64_t arg0 = 0;
    int64_t arg1 = 0;
    uint64_t address = 0;
    uint8_t modes = 0;            // 2 bits per dimension, dim 0 in the low bits
    uint64_t imm = 0;
    bool fullRegister = false;    // spill/fill: whole register, shape ignored

    unsigned mode(unsigned dim) const { return (modes >> (2 * dim)) & 3u; }

    friend bool operator==(const VectorInstruction&, const VectorInstruction&) = default;
  };

  /// A run of interleaved scalar instructions executed by the core. An
  /// optional load address participates in write-buffer dependency checks.
  struct ScalarMarker
  {
    uint64_t count = 0;
    std::optional<uint64_t> loadAddress;

    friend bool operator==(const ScalarMarker&, const ScalarMarker&) = default;
  };

  using ProgramItem = std::variant<VectorInstruction, ScalarMarker>;
  using Program = std::vector<ProgramItem>;

  uint8_t packModes(std::array<unsigned, kMaxDims> modes);

  /// Controller configuration registers.
  struct ControlState
  {
    unsigned dimCount = 1;
    std::array<uint32_t, kMaxDims> dimLength{8192, 1, 1, 1};
    std::array<int64_t, kMaxDims> loadStride{0, 0, 0, 0};
    std::array<int64_t, kMaxDims> storeStride{0, 0, 0, 0};
    std::bitset<kMaskBits> dimMask = std::bitset<kMaskBits>().set();
    unsigned kernelWidth = 32;
    // Lane-range predicate [laneLo, laneHi); only the 1D baseline sets it.
    uint32_t laneLo = 0;
    uint32_t laneHi = UINT32_MAX;

    uint64_t laneCount() const;
    unsigned topDim() const { return dimCount - 1; }
    bool topEnabled(uint32_t element) const
    { return element >= kMaskBits || dimMask.test(element); }

    friend bool operator==(const ControlState&, const ControlState&) = default;
  };

  /// Apply a config instruction. Throws Error on an illegal operand.
  ControlState applyConfig(const ControlState& state, const VectorInstruction& insn);

  /// Check an instruction against the current configuration. Returns a
  /// description of the first violation, or nothing when legal.
  std::optional<std::string> validateInstruction(const ControlState& state,
                                                 const VectorInstruction& insn,
                                                 unsigned totalLanes = 8192,
                                                 unsigned wordlines = 256);

  /// Parse the textual program format. Errors carry the line number.
  Program decodeProgram(std::string_view text);

  /// Encode one item in the textual format (inverse of decodeProgram).
  std::string encode(const ProgramItem& item);
  std::string encodeProgram(const Program& program);

  /// Convenience builders.
  namespace isa
  {
    VectorInstruction config(Opcode op, int64_t a0 = 0, int64_t a1 = 0);
    VectorInstruction binary(Opcode op, DataType t, unsigned d, unsigned a, unsigned b);
    VectorInstruction unaryImm(Opcode op, DataType t, unsigned d, unsigned a, uint64_t imm);
    VectorInstruction dup(DataType t, unsigned d, uint64_t bits);
    VectorInstruction compare(Opcode op, DataType t, unsigned a, unsigned b);
    VectorInstruction copy(DataType t, unsigned d, unsigned s);
    VectorInstruction convert(DataType to, DataType from, unsigned d, unsigned s);
    VectorInstruction load(Opcode op, DataType t, unsigned d, uint64_t addr,
                           std::array<unsigned, kMaxDims> modes);
    VectorInstruction store(Opcode op, DataType t, unsigned s, uint64_t addr,
                            std::array<unsigned, kMaxDims> modes);
  }

} // namespace mve
