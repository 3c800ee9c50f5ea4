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

#include "mve/lanes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "mve/half.hpp"

namespace mve::lanes
{

double
toDouble(uint64_t slot, DataType t)
{
  switch (t.kind)
    {
    case TypeKind::Float:
      if (t.width == 16)
        return halfBitsToFloat(uint16_t(slot));
      {
        uint32_t bits = uint32_t(slot);
        float f;
        std::memcpy(&f, &bits, 4);
        return f;
      }
    case TypeKind::Signed:
      return double(int64_t(normalize(slot, t)));
    default:
      return double(normalize(slot, t));
    }
}

uint64_t
fromDouble(double v, DataType t)
{
  if (t.isFloat())
    {
      if (t.width == 16)
        return floatToHalfBits(float(v));
      float f = float(v);
      uint32_t bits;
      std::memcpy(&bits, &f, 4);
      return bits;
    }
  // float -> int: round to nearest even, saturate to 64 bits, wrap to the width
  double r = std::nearbyint(v);
  uint64_t i;
  if (std::isnan(r))
    i = 0;
  else if (!t.isSigned())
    i = r <= 0 ? 0 : (r >= 1.8446744073709552e19 ? UINT64_MAX : uint64_t(r));
  else if (r >= 9.2233720368547758e18)
    i = uint64_t(INT64_MAX);
  else if (r < -9.2233720368547758e18)
    i = uint64_t(INT64_MIN);
  else
    i = uint64_t(int64_t(r));
  return normalize(i, t);
}

namespace
{

  float f32(uint64_t slot, DataType t)
  {
    return float(toDouble(slot, t));
  }

  uint64_t floatBinary(BinOp op, DataType t, uint64_t a, uint64_t b)
  {
    float x = f32(a, t), y = f32(b, t), r;
    switch (op)
      {
      case BinOp::Add: r = x + y; break;
      case BinOp::Sub: r = x - y; break;
      case BinOp::Mul: r = x * y; break;
      case BinOp::Min: r = std::fmin(x, y); break;
      case BinOp::Max: r = std::fmax(x, y); break;
      default: return 0;
      }
    return fromDouble(r, t);
  }

} // namespace

uint64_t
binaryLane(BinOp op, DataType t, uint64_t a, uint64_t b)
{
  unsigned n = t.width;
  if (t.isFloat() && op != BinOp::Xor && op != BinOp::ShiftLeft && op != BinOp::ShiftRight)
    return floatBinary(op, t, a, b);

  // Bitwise ops on floats act on the raw pattern as an unsigned value.
  DataType it = t.isFloat() ? DataType{TypeKind::Unsigned, n} : t;
  switch (op)
    {
    case BinOp::Add: return normalize(a + b, it);
    case BinOp::Sub: return normalize(a - b, it);
    case BinOp::Mul: return normalize(a * b, it);
    case BinOp::Xor: return normalize(a ^ b, it);
    case BinOp::Min:
    case BinOp::Max:
      {
        bool less = it.isSigned() ? int64_t(a) < int64_t(b) : a < b;
        return (op == BinOp::Min) == less ? a : b;
      }
    case BinOp::ShiftLeft:
      {
        unsigned amt = unsigned(raw(b, n) % n);
        return normalize(raw(a, n) << amt, it);
      }
    case BinOp::ShiftRight:
      {
        unsigned amt = unsigned(raw(b, n) % n);
        if (it.isSigned())
          return uint64_t(int64_t(a) >> amt);
        return raw(a, n) >> amt;
      }
    }
  return 0;
}

uint64_t
rotateLane(DataType t, uint64_t a, unsigned amount, bool left)
{
  unsigned n = t.width;
  DataType it = t.isFloat() ? DataType{TypeKind::Unsigned, n} : t;
  uint64_t v = raw(a, n);
  amount %= n;
  if (amount == 0)
    return a;
  if (!left)
    amount = n - amount;
  return normalize((v << amount) | (v >> (n - amount)), it);
}

bool
compareLane(CmpOp op, DataType t, uint64_t a, uint64_t b)
{
  int c;
  if (t.isFloat())
    {
      float x = f32(a, t), y = f32(b, t);
      switch (op)
        {
        case CmpOp::Gt: return x > y;
        case CmpOp::Gte: return x >= y;
        case CmpOp::Lt: return x < y;
        case CmpOp::Lte: return x <= y;
        case CmpOp::Eq: return x == y;
        case CmpOp::Neq: return x != y;
        }
      return false;
    }
  if (t.isSigned())
    c = int64_t(a) < int64_t(b) ? -1 : (a == b ? 0 : 1);
  else
    c = a < b ? -1 : (a == b ? 0 : 1);
  switch (op)
    {
    case CmpOp::Gt: return c > 0;
    case CmpOp::Gte: return c >= 0;
    case CmpOp::Lt: return c < 0;
    case CmpOp::Lte: return c <= 0;
    case CmpOp::Eq: return c == 0;
    case CmpOp::Neq: return c != 0;
    }
  return false;
}

namespace
{

  void binaryScalar(BinOp op, DataType t, const uint64_t* a, const uint64_t* b, uint64_t* dst,
                    const uint8_t* en, size_t n)
  {
    for (size_t i = 0; i < n; ++i)
      if (en[i])
        dst[i] = binaryLane(op, t, a[i], b[i]);
  }

  void compareScalar(CmpOp op, DataType t, const uint64_t* a, const uint64_t* b, uint8_t* out,
                     size_t n)
  {
    for (size_t i = 0; i < n; ++i)
      out[i] = compareLane(op, t, a[i], b[i]) ? 1 : 0;
  }

  void selectScalar(const uint64_t* src, uint64_t* dst, const uint8_t* en, size_t n)
  {
    for (size_t i = 0; i < n; ++i)
      if (en[i])
        dst[i] = src[i];
  }

  const Kernels kScalar{"scalar", binaryScalar, compareScalar, selectScalar};

} // namespace

const Kernels&
scalar()
{
  return kScalar;
}

const Kernels*
avx2Variant(); // lanes_avx2.cpp

const Kernels*
avx2()
{
#if defined(__x86_64__) && defined(MVE_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok ? avx2Variant() : nullptr;
#else
  return nullptr;
#endif
}

const Kernels&
active()
{
  static const Kernels* chosen = [] {
    const char* env = std::getenv("MVE_SIMD");
    if (env && std::string_view(env) == "scalar")
      return &kScalar;
    const Kernels* v = avx2();
    return v ? v : &kScalar;
  }();
  return *chosen;
}

} // namespace mve::lanes
