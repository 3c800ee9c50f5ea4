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

#include <random>

#include "mve/kernels.hpp"

namespace mve::kernels::detail
{

  /// Appends instructions to a trace, handing out fresh virtual registers.
  class Emitter
  {
  public:
    explicit Emitter(Program& out) : out_(out) {}

    unsigned fresh() { return next_++; }

    void cfg(Opcode op, int64_t a0 = 0, int64_t a1 = 0) { out_.push_back(isa::config(op, a0, a1)); }

    void shape(std::initializer_list<uint32_t> lengths)
    {
      cfg(Opcode::SetDimCount, int64_t(lengths.size()));
      int64_t d = 0;
      for (uint32_t l : lengths)
        cfg(Opcode::SetDimLength, d++, l);
    }

    unsigned load(Opcode op, DataType t, uint64_t addr, std::array<unsigned, kMaxDims> modes)
    {
      unsigned r = fresh();
      out_.push_back(isa::load(op, t, r, addr, modes));
      return r;
    }

    void loadInto(Opcode op, DataType t, unsigned r, uint64_t addr,
                  std::array<unsigned, kMaxDims> modes)
    {
      out_.push_back(isa::load(op, t, r, addr, modes));
    }

    void store(Opcode op, DataType t, unsigned r, uint64_t addr,
               std::array<unsigned, kMaxDims> modes)
    {
      out_.push_back(isa::store(op, t, r, addr, modes));
    }

    unsigned bin(Opcode op, DataType t, unsigned a, unsigned b)
    {
      unsigned r = fresh();
      out_.push_back(isa::binary(op, t, r, a, b));
      return r;
    }

    void binInto(Opcode op, DataType t, unsigned d, unsigned a, unsigned b)
    {
      out_.push_back(isa::binary(op, t, d, a, b));
    }

    unsigned dup(DataType t, uint64_t bits)
    {
      unsigned r = fresh();
      out_.push_back(isa::dup(t, r, bits));
      return r;
    }

    void dupInto(DataType t, unsigned r, uint64_t bits) { out_.push_back(isa::dup(t, r, bits)); }

    void copyInto(DataType t, unsigned d, unsigned s) { out_.push_back(isa::copy(t, d, s)); }

    void scalar(uint64_t count, std::optional<uint64_t> loadAddr = std::nullopt)
    {
      if (count > 0)
        out_.push_back(ScalarMarker{count, loadAddr});
    }

  private:
    Program& out_;
    unsigned next_ = 0;
  };

  template <typename T>
  void writeArray(Memory& m, uint64_t base, const std::vector<T>& v)
  {
    for (size_t i = 0; i < v.size(); ++i)
      m.write(base + i * sizeof(T), sizeof(T), uint64_t(v[i]));
  }

  inline void writeRaw(Memory& m, uint64_t base, const std::vector<uint64_t>& v, unsigned eb)
  {
    for (size_t i = 0; i < v.size(); ++i)
      m.write(base + i * eb, eb, v[i]);
  }

  template <typename T>
  void appendBytes(std::vector<uint8_t>& out, const std::vector<T>& v)
  {
    const auto* p = reinterpret_cast<const uint8_t*>(v.data());
    out.insert(out.end(), p, p + v.size() * sizeof(T));
  }

  inline std::mt19937_64 rng(uint64_t seed, uint64_t salt)
  {
    return std::mt19937_64(seed * 0x9e3779b97f4a7c15ull + salt);
  }

} // namespace mve::kernels::detail
