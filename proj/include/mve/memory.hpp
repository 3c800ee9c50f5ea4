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
#include <cstring>
#include <span>
#include <vector>

#include "mve/isa.hpp"

namespace mve
{

  /// Flat byte-addressed memory image starting at address 0. Multi-byte
  /// values are little-endian.
  class Memory
  {
  public:
    Memory() = default;
    explicit Memory(size_t bytes) : bytes_(bytes, 0) {}

    size_t size() const { return bytes_.size(); }
    void resize(size_t bytes) { bytes_.resize(bytes, 0); }

    bool contains(uint64_t addr, uint64_t len) const
    { return addr <= bytes_.size() && len <= bytes_.size() - addr; }

    uint64_t read(uint64_t addr, unsigned len) const
    {
      check(addr, len);
      uint64_t v = 0;
      std::memcpy(&v, bytes_.data() + addr, len);
      return v;
    }

    void write(uint64_t addr, unsigned len, uint64_t value)
    {
      check(addr, len);
      std::memcpy(bytes_.data() + addr, &value, len);
    }

    std::span<uint8_t> bytes() { return bytes_; }
    std::span<const uint8_t> bytes() const { return bytes_; }

    friend bool operator==(const Memory&, const Memory&) = default;

  private:
    void check(uint64_t addr, uint64_t len) const
    {
      if (!contains(addr, len))
        throw Error("memory access out of range at 0x" + toHex(addr));
    }

    static std::string toHex(uint64_t v)
    {
      static const char* d = "0123456789abcdef";
      std::string s;
      do
        {
          s.insert(s.begin(), d[v & 15]);
          v >>= 4;
        }
      while (v);
      return s;
    }

    std::vector<uint8_t> bytes_;
  };

} // namespace mve
