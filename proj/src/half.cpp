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

#include "mve/half.hpp"

#include <cstring>

namespace mve
{

uint16_t
floatToHalfBits(float v)
{
  uint32_t x;
  std::memcpy(&x, &v, 4);
  uint32_t sign = (x >> 16) & 0x8000u;
  uint32_t exp = (x >> 23) & 0xffu;
  uint32_t man = x & 0x7fffffu;

  if (exp == 0xff)
    return uint16_t(sign | 0x7c00u | (man ? 0x200u | (man >> 13) : 0u));

  int e = int(exp) - 127 + 15;
  if (e >= 0x1f)
    return uint16_t(sign | 0x7c00u);
  if (e <= 0)
    {
      if (e < -10)
        return uint16_t(sign);
      man |= 0x800000u;
      unsigned shift = unsigned(14 - e);
      uint32_t half = man >> shift;
      uint32_t rem = man & ((1u << shift) - 1);
      uint32_t mid = 1u << (shift - 1);
      if (rem > mid || (rem == mid && (half & 1u)))
        ++half;
      return uint16_t(sign | half);
    }
  uint32_t half = (uint32_t(e) << 10) | (man >> 13);
  uint32_t rem = man & 0x1fffu;
  if (rem > 0x1000u || (rem == 0x1000u && (half & 1u)))
    ++half; // may carry into the exponent, which is the correct rounding
  return uint16_t(sign | half);
}

float
halfBitsToFloat(uint16_t h)
{
  uint32_t sign = uint32_t(h & 0x8000u) << 16;
  uint32_t exp = (h >> 10) & 0x1fu;
  uint32_t man = h & 0x3ffu;
  uint32_t x;
  if (exp == 0)
    {
      if (man == 0)
        x = sign;
      else
        {
          int e = -1;
          do
            {
              man <<= 1;
              ++e;
            }
          while (!(man & 0x400u));
          man &= 0x3ffu;
          x = sign | (uint32_t(127 - 15 - e) << 23) | (man << 13);
        }
    }
  else if (exp == 0x1f)
    x = sign | 0x7f800000u | (man << 13);
  else
    x = sign | ((exp - 15 + 127) << 23) | (man << 13);
  float f;
  std::memcpy(&f, &x, 4);
  return f;
}

} // namespace mve
