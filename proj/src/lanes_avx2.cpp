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

#if defined(__x86_64__) && defined(MVE_HAVE_AVX2)

#include <immintrin.h>

#include <cstring>

namespace mve::lanes
{

namespace
{

  struct Norm
  {
    __m256i mask, sign;
    bool full, isSigned;
  };

  __attribute__((target("avx2"))) Norm makeNorm(DataType t)
  {
    Norm nm{};
    nm.full = t.width >= 64;
    nm.isSigned = t.isSigned();
    uint64_t m = nm.full ? ~uint64_t(0) : (uint64_t(1) << t.width) - 1;
    uint64_t s = uint64_t(1) << (t.width - 1);
    nm.mask = _mm256_set1_epi64x(int64_t(m));
    nm.sign = _mm256_set1_epi64x(int64_t(s));
    return nm;
  }

  __attribute__((target("avx2"))) inline __m256i normalize4(__m256i v, const Norm& nm)
  {
    if (nm.full)
      return v;
    v = _mm256_and_si256(v, nm.mask);
    if (nm.isSigned)
      v = _mm256_sub_epi64(_mm256_xor_si256(v, nm.sign), nm.sign);
    return v;
  }

  __attribute__((target("avx2"))) inline __m256i mullo64(__m256i a, __m256i b)
  {
    __m256i lo = _mm256_mul_epu32(a, b);
    __m256i ah = _mm256_srli_epi64(a, 32);
    __m256i bh = _mm256_srli_epi64(b, 32);
    __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(ah, b), _mm256_mul_epu32(a, bh));
    return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
  }

  // a > b as a 64-bit lane mask, signed or unsigned.
  __attribute__((target("avx2"))) inline __m256i greater(__m256i a, __m256i b, bool isSigned)
  {
    if (!isSigned)
      {
        __m256i bias = _mm256_set1_epi64x(INT64_MIN);
        a = _mm256_xor_si256(a, bias);
        b = _mm256_xor_si256(b, bias);
      }
    return _mm256_cmpgt_epi64(a, b);
  }

  __attribute__((target("avx2"))) inline __m256i enableMask(const uint8_t* en)
  {
    int32_t word;
    std::memcpy(&word, en, 4);
    __m256i e = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(word));
    return _mm256_xor_si256(_mm256_cmpeq_epi64(e, _mm256_setzero_si256()),
                            _mm256_set1_epi64x(-1));
  }

  bool vectorizable(BinOp op, DataType t)
  {
    if (op == BinOp::ShiftLeft || op == BinOp::ShiftRight)
      return false;
    return !t.isFloat() || op == BinOp::Xor;
  }

  __attribute__((target("avx2"))) void binaryAvx2(BinOp op, DataType t, const uint64_t* a,
                                                  const uint64_t* b, uint64_t* dst,
                                                  const uint8_t* en, size_t n)
  {
    if (!vectorizable(op, t))
      {
        scalar().binary(op, t, a, b, dst, en, n);
        return;
      }
    DataType it = t.isFloat() ? DataType{TypeKind::Unsigned, t.width} : t;
    Norm nm = makeNorm(it);
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
      {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i r;
        switch (op)
          {
          case BinOp::Add: r = normalize4(_mm256_add_epi64(x, y), nm); break;
          case BinOp::Sub: r = normalize4(_mm256_sub_epi64(x, y), nm); break;
          case BinOp::Mul: r = normalize4(mullo64(x, y), nm); break;
          case BinOp::Xor: r = normalize4(_mm256_xor_si256(x, y), nm); break;
          case BinOp::Min: r = _mm256_blendv_epi8(x, y, greater(x, y, nm.isSigned)); break;
          case BinOp::Max: r = _mm256_blendv_epi8(y, x, greater(x, y, nm.isSigned)); break;
          default: r = x; break;
          }
        __m256i* d = reinterpret_cast<__m256i*>(dst + i);
        __m256i old = _mm256_loadu_si256(d);
        _mm256_storeu_si256(d, _mm256_blendv_epi8(old, r, enableMask(en + i)));
      }
    if (i < n)
      scalar().binary(op, t, a + i, b + i, dst + i, en + i, n - i);
  }

  __attribute__((target("avx2"))) void compareAvx2(CmpOp op, DataType t, const uint64_t* a,
                                                   const uint64_t* b, uint8_t* out, size_t n)
  {
    if (t.isFloat())
      {
        scalar().compare(op, t, a, b, out, n);
        return;
      }
    bool sgn = t.isSigned();
    __m256i ones = _mm256_set1_epi64x(-1);
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
      {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i m;
        switch (op)
          {
          case CmpOp::Gt: m = greater(x, y, sgn); break;
          case CmpOp::Lt: m = greater(y, x, sgn); break;
          case CmpOp::Gte: m = _mm256_xor_si256(greater(y, x, sgn), ones); break;
          case CmpOp::Lte: m = _mm256_xor_si256(greater(x, y, sgn), ones); break;
          case CmpOp::Eq: m = _mm256_cmpeq_epi64(x, y); break;
          default: m = _mm256_xor_si256(_mm256_cmpeq_epi64(x, y), ones); break;
          }
        int bits = _mm256_movemask_pd(_mm256_castsi256_pd(m));
        for (int k = 0; k < 4; ++k)
          out[i + k] = uint8_t((bits >> k) & 1);
      }
    if (i < n)
      scalar().compare(op, t, a + i, b + i, out + i, n - i);
  }

  __attribute__((target("avx2"))) void selectAvx2(const uint64_t* src, uint64_t* dst,
                                                  const uint8_t* en, size_t n)
  {
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
      {
        __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        __m256i* d = reinterpret_cast<__m256i*>(dst + i);
        _mm256_storeu_si256(d, _mm256_blendv_epi8(_mm256_loadu_si256(d), s, enableMask(en + i)));
      }
    if (i < n)
      scalar().select(src + i, dst + i, en + i, n - i);
  }

  const Kernels kAvx2{"avx2", binaryAvx2, compareAvx2, selectAvx2};

} // namespace

const Kernels*
avx2Variant()
{
  return &kAvx2;
}

} // namespace mve::lanes

#endif
