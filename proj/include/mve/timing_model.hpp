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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>

#include "mve/isa.hpp"

namespace mve
{

  enum class Scheme : uint8_t { BitSerial, BitParallel, BitHybrid, Associative };

  std::string_view schemeName(Scheme s);   // bs, bp, bh, ac
  std::optional<Scheme> schemeFromName(std::string_view name);

  /// Latency classes shared by all schemes.
  enum class OpClass : uint8_t
  {
    None,      // config and memory: no compute-array work
    Copy,      // vcpy, vcvt, vsetdup, shift/rotate by immediate
    Add, Sub, Mul, MinMax, Xor, Compare, ShiftReg,
  };

  OpClass opClassOf(Opcode op);
  std::string_view opClassName(OpClass c);
  std::optional<OpClass> opClassFromName(std::string_view name);

  /// Bit-serial integer latency. Throws Error on an unsupported width.
  uint64_t bsLatency(OpClass c, unsigned n);
  uint64_t bsFloatLatency(OpClass c, unsigned n);
  uint64_t acLatency(OpClass c, unsigned n, unsigned cbw = 2);

  class TimingModel
  {
  public:
    explicit TimingModel(Scheme scheme, unsigned bitlinesPerArray = 256, unsigned segmentBits = 4,
                         unsigned acBitwise = 2);

    Scheme scheme() const { return scheme_; }
    unsigned segmentBits() const { return p_; }

    /// Compute cycles one CB spends on the operation at the given type.
    uint64_t latency(OpClass c, DataType t) const;
    /// Latency of a whole instruction (0 for config and memory ops).
    uint64_t latency(const VectorInstruction& insn) const;

    unsigned lanesPerArray(unsigned width) const;

    /// Replace the latency for one (class, width[, float]) entry.
    void setOverride(OpClass c, unsigned width, bool isFloat, uint64_t cycles);

  private:
    uint64_t base(OpClass c, DataType t) const;

    Scheme scheme_;
    unsigned bitlines_;
    unsigned p_;
    unsigned cbw_;
    std::map<std::tuple<OpClass, unsigned, bool>, uint64_t> overrides_;
  };

} // namespace mve
