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

// Lane-wise kernels over register storage. Every lane is a 64-bit slot:
// integers are kept sign- or zero-extended from their width, floats keep
// their raw bit pattern in the low bits. A scalar reference implementation
// is always present; an AVX2 variant is selected at runtime when the host
// supports it and must produce bit-identical results.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "mve/isa.hpp"

namespace mve::lanes
{

  enum class BinOp : uint8_t { Add, Sub, Mul, Min, Max, Xor, ShiftLeft, ShiftRight };
  enum class CmpOp : uint8_t { Gt, Gte, Lt, Lte, Eq, Neq };

  struct Kernels
  {
    std::string_view name;
    // dst[i] = op(a[i], b[i]) where en[i] != 0; other lanes untouched.
    void (*binary)(BinOp, DataType, const uint64_t* a, const uint64_t* b, uint64_t* dst,
                   const uint8_t* en, size_t n);
    // out[i] = cmp(a[i], b[i]) ? 1 : 0
    void (*compare)(CmpOp, DataType, const uint64_t* a, const uint64_t* b, uint8_t* out,
                    size_t n);
    // dst[i] = src[i] where en[i] != 0
    void (*select)(const uint64_t* src, uint64_t* dst, const uint8_t* en, size_t n);
  };

  const Kernels& scalar();

  /// Null when the AVX2 variant was not built or the CPU lacks AVX2.
  const Kernels* avx2();

  /// The variant used by the functional model. Honors MVE_SIMD=scalar.
  const Kernels& active();

  /// Canonical 64-bit slot value for a raw element of the given type.
  inline uint64_t normalize(uint64_t v, DataType t)
  {
    unsigned n = t.width;
    if (n >= 64)
      return v;
    uint64_t m = (uint64_t(1) << n) - 1;
    if (t.kind == TypeKind::Signed)
      {
        uint64_t s = uint64_t(1) << (n - 1);
        return ((v & m) ^ s) - s;
      }
    return v & m;
  }

  /// Low `width` bits of a slot, i.e. the in-memory element.
  inline uint64_t raw(uint64_t v, unsigned width)
  {
    return width >= 64 ? v : v & ((uint64_t(1) << width) - 1);
  }

  double toDouble(uint64_t slot, DataType t);
  uint64_t fromDouble(double v, DataType t);

  /// Scalar reference for one lane; shared by both variants for the
  /// operations the AVX2 variant does not vectorize.
  uint64_t binaryLane(BinOp op, DataType t, uint64_t a, uint64_t b);
  bool compareLane(CmpOp op, DataType t, uint64_t a, uint64_t b);
  uint64_t rotateLane(DataType t, uint64_t a, unsigned amount, bool left);

} // namespace mve::lanes
