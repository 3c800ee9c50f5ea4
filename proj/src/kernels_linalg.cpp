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

#include <cstring>

#include "kernel_util.hpp"
#include "mve/lanes.hpp"

namespace mve::kernels
{

using detail::Emitter;

namespace
{

  std::vector<uint64_t> randomElements(std::mt19937_64& gen, size_t n, DataType t)
  {
    std::vector<uint64_t> v(n);
    if (t.isFloat())
      {
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        for (auto& x : v)
          x = lanes::fromDouble(d(gen), t);
      }
    else
      {
        std::uniform_int_distribution<int> d(-8, 8);
        for (auto& x : v)
          x = lanes::raw(lanes::normalize(uint64_t(int64_t(d(gen))), t), t.width);
      }
    return v;
  }

  void gemmMve(Emitter& e, const KernelParams& p, uint64_t a, uint64_t b, uint64_t o,
               KernelInstance& k)
  {
    const unsigned m = p.m, n = p.n, K = p.k;
    const DataType t = p.dtype;
    const unsigned eb = t.bytes();
    const unsigned per = 8192 / n;
    e.shape({n, per});
    e.cfg(Opcode::SetLoadStride, 1, K);
    unsigned iters = 0;
    for (unsigned r0 = 0; r0 < m; r0 += per, ++iters)
      {
        const unsigned rr = std::min(per, m - r0);
        if (rr < per)
          {
            if (per <= kMaskBits)
              for (unsigned r = rr; r < per; ++r)
                e.cfg(Opcode::UnsetMask, r);
            else
              e.cfg(Opcode::SetDimLength, 1, rr);
          }
        e.scalar(4);
        unsigned acc = 0;
        for (unsigned kk = 0; kk < K; ++kk)
          {
            unsigned x = e.load(Opcode::StridedLoad, t, a + (uint64_t(r0) * K + kk) * eb,
                                {0, 3, 0, 0});
            unsigned w = e.load(Opcode::StridedLoad, t, b + uint64_t(kk) * n * eb, {1, 0, 0, 0});
            unsigned prod = e.bin(Opcode::Mul, t, x, w);
            acc = kk == 0 ? prod : e.bin(Opcode::Add, t, acc, prod);
            e.scalar(2);
          }
        e.store(Opcode::StridedStore, t, acc, o + uint64_t(r0) * n * eb, {1, 2, 0, 0});
      }
    k.info["iterations"] = iters;
  }

  // The 1D flavor packs the flat output into full 8192-lane chunks. Each
  // chunk spans several output-row pieces; every piece needs its own
  // mask-config, partial 1D access and move for both operands.
  void gemmRvv(Emitter& e, const KernelParams& p, uint64_t a, uint64_t b, uint64_t o,
               KernelInstance& k, unsigned scalarPerSegment = 4)
  {
    const unsigned n = p.n, K = p.k;
    const DataType t = p.dtype;
    const unsigned eb = t.bytes();
    const uint64_t total = uint64_t(p.m) * n;
    uint64_t groups = 0, chunks = 0;
    uint32_t shaped = 0;
    for (uint64_t start = 0; start < total; start += 8192, ++chunks)
      {
        const uint32_t cl = uint32_t(std::min<uint64_t>(8192, total - start));
        if (cl != shaped)
          {
            e.shape({cl});
            shaped = cl;
          }
        struct Piece
        {
          uint32_t lo, hi;
          uint64_t row, col;
        };
        std::vector<Piece> pieces;
        for (uint64_t f = start; f < start + cl;)
          {
            uint64_t row = f / n, col = f % n;
            uint64_t len = std::min<uint64_t>(n - col, start + cl - f);
            pieces.push_back({uint32_t(f - start), uint32_t(f - start + len), row, col});
            f += len;
          }
        e.scalar(4);
        unsigned acc = 0;
        for (unsigned kk = 0; kk < K; ++kk)
          {
            unsigned x = e.fresh();
            for (const auto& pc : pieces)
              {
                e.scalar(scalarPerSegment);
                e.cfg(Opcode::SetLaneRange, pc.lo, pc.hi);
                unsigned tmp = e.load(Opcode::StridedLoad, t, a + (pc.row * K + kk) * eb,
                                      {0, 0, 0, 0});
                e.copyInto(t, x, tmp);
              }
            e.cfg(Opcode::SetLaneRange, 0, UINT32_MAX);
            unsigned w = e.fresh();
            for (const auto& pc : pieces)
              {
                e.scalar(scalarPerSegment);
                e.cfg(Opcode::SetLaneRange, pc.lo, pc.hi);
                uint64_t base = b + (uint64_t(kk) * n + pc.col) * eb - uint64_t(pc.lo) * eb;
                unsigned tmp = e.load(Opcode::StridedLoad, t, base, {1, 0, 0, 0});
                e.copyInto(t, w, tmp);
              }
            e.cfg(Opcode::SetLaneRange, 0, UINT32_MAX);
            groups += 2 * pieces.size();
            unsigned prod = e.bin(Opcode::Mul, t, x, w);
            acc = kk == 0 ? prod : e.bin(Opcode::Add, t, acc, prod);
            e.scalar(2);
          }
        e.store(Opcode::StridedStore, t, acc, o + start * eb, {1, 0, 0, 0});
      }
    k.info["iterations"] = chunks;
    k.info["groups"] = groups;
  }

} // namespace

KernelInstance
gemmReplicated(Isa isa, const KernelParams& p)
{
  const unsigned m = p.m, n = p.n, K = p.k;
  const DataType t = p.dtype;
  if (m == 0 || n == 0 || K == 0 || n > 8192)
    throw Error("gemm: output " + std::to_string(m) + "x" + std::to_string(n) + " with depth "
                + std::to_string(K) + " is infeasible");
  const unsigned eb = t.bytes();
  KernelInstance k;
  // The 1D flavor addresses operand rows relative to the chunk start, so
  // buffers sit above one register's worth of bytes.
  Layout lay(std::max<uint64_t>(0x20000, 8192ull * eb));
  const uint64_t a = lay.alloc(k, "input", uint64_t(m) * K * eb);
  const uint64_t b = lay.alloc(k, "weight", uint64_t(K) * n * eb);
  const uint64_t o = lay.alloc(k, "output", uint64_t(m) * n * eb);

  auto gen = detail::rng(p.seed, 4);
  auto av = randomElements(gen, size_t(m) * K, t);
  auto bv = randomElements(gen, size_t(K) * n, t);
  detail::writeRaw(k.memory, a, av, eb);
  detail::writeRaw(k.memory, b, bv, eb);
  auto ov = golden::gemm(av, bv, m, n, K, t);
  for (uint64_t v : ov)
    for (unsigned i = 0; i < eb; ++i)
      k.expected.push_back(uint8_t(v >> (8 * i)));
  k.outputs.push_back({"output", o, uint64_t(m) * n * eb, t});

  Emitter e(k.trace);
  if (isa == Isa::Mve)
    gemmMve(e, p, a, b, o, k);
  else
    gemmRvv(e, p, a, b, o, k);
  return k;
}

KernelInstance
spmm(Isa isa, const KernelParams& p)
{
  const unsigned rows = p.rows, inner = p.inner, cols = p.cols;
  if (rows == 0 || inner == 0 || cols == 0 || cols > 8192)
    throw Error("spmm: shape infeasible");
  if (p.density < 0.0 || p.density > 1.0)
    throw Error("spmm: density must lie in [0, 1]");

  auto gen = detail::rng(p.seed, 5);
  golden::Csr csr;
  csr.rows = rows;
  csr.cols = inner;
  csr.rowPtr.push_back(0);
  std::bernoulli_distribution keep(p.density);
  std::uniform_int_distribution<int> val(-9, 9);
  for (unsigned r = 0; r < rows; ++r)
    {
      for (unsigned c = 0; c < inner; ++c)
        if (keep(gen))
          {
            int v = val(gen);
            csr.colIdx.push_back(c);
            csr.values.push_back(v == 0 ? 1 : v);
          }
      csr.rowPtr.push_back(uint32_t(csr.colIdx.size()));
    }
  std::vector<int32_t> dense(size_t(inner) * cols);
  for (auto& v : dense)
    v = val(gen);
  return spmmFromCsr(isa, csr, dense, cols);
}

KernelInstance
spmmFromCsr(Isa isa, const golden::Csr& csr, const std::vector<int32_t>& dense, unsigned cols)
{
  const unsigned rows = csr.rows;
  if (csr.rowPtr.size() != rows + 1ull || csr.rowPtr.front() != 0
      || csr.rowPtr.back() != csr.colIdx.size() || csr.colIdx.size() != csr.values.size())
    throw Error("spmm: malformed CSR arrays");
  for (unsigned r = 0; r < rows; ++r)
    if (csr.rowPtr[r] > csr.rowPtr[r + 1])
      throw Error("spmm: malformed CSR row pointers");
  for (uint32_t c : csr.colIdx)
    if (c >= csr.cols)
      throw Error("spmm: column index out of range");
  if (dense.size() != size_t(csr.cols) * cols || cols == 0 || cols > 8192)
    throw Error("spmm: dense operand has the wrong shape");

  const size_t nnz = csr.values.size();
  const unsigned per = std::min(256u, std::min(rows, 8192 / cols));

  // Pointer tables, one pair per (row block, position within row).
  size_t tables = 0;
  for (unsigned r0 = 0; r0 < rows; r0 += per)
    {
      uint32_t mx = 0;
      for (unsigned r = r0; r < std::min(rows, r0 + per); ++r)
        mx = std::max(mx, csr.rowPtr[r + 1] - csr.rowPtr[r]);
      tables += mx;
    }

  KernelInstance k;
  Layout lay;
  const uint64_t vals = lay.alloc(k, "values", nnz * 4);
  const uint64_t dn = lay.alloc(k, "dense", dense.size() * 4);
  const uint64_t out = lay.alloc(k, "output", uint64_t(rows) * cols * 4);
  const uint64_t vptr = lay.alloc(k, "value_rows", tables * per * 8);
  const uint64_t bptr = lay.alloc(k, "dense_rows", tables * per * 8);
  detail::writeArray(k.memory, vals, csr.values);
  detail::writeArray(k.memory, dn, dense);
  detail::appendBytes(k.expected, golden::spmm(csr, dense, cols));
  k.outputs.push_back({"output", out, uint64_t(rows) * cols * 4, types::dw});

  Emitter e(k.trace);
  const DataType t = types::dw;
  size_t table = 0;
  for (unsigned r0 = 0; r0 < rows; r0 += per)
    {
      const unsigned rr = std::min(per, rows - r0);
      uint32_t mx = 0;
      for (unsigned r = 0; r < rr; ++r)
        mx = std::max(mx, csr.rowPtr[r0 + r + 1] - csr.rowPtr[r0 + r]);
      if (mx == 0)
        continue;
      e.shape({cols, rr});
      unsigned acc = e.dup(t, 0);
      for (uint32_t pos = 0; pos < mx; ++pos, ++table)
        {
          unsigned active = 0;
          for (unsigned r = 0; r < rr; ++r)
            {
              uint32_t len = csr.rowPtr[r0 + r + 1] - csr.rowPtr[r0 + r];
              uint64_t vAddr = vals, bAddr = dn;
              if (pos < len)
                {
                  uint32_t idx = csr.rowPtr[r0 + r] + pos;
                  vAddr = vals + uint64_t(idx) * 4;
                  bAddr = dn + uint64_t(csr.colIdx[idx]) * cols * 4;
                  ++active;
                }
              else if (pos == len)
                e.cfg(Opcode::UnsetMask, r);
              k.memory.write(vptr + (table * per + r) * 8, 8, vAddr);
              k.memory.write(bptr + (table * per + r) * 8, 8, bAddr);
            }
          e.scalar(4ull * active);
          unsigned v = e.load(Opcode::RandomLoad, t, vptr + table * per * 8, {0, 0, 0, 0});
          unsigned w = e.load(Opcode::RandomLoad, t, bptr + table * per * 8, {1, 0, 0, 0});
          unsigned prod = e.bin(Opcode::Mul, t, v, w);
          e.binInto(Opcode::Add, t, acc, acc, prod);
        }
      e.shape({cols, rr});
      e.store(Opcode::StridedStore, t, acc, out + uint64_t(r0) * cols * 4, {1, 2, 0, 0});
    }

  if (isa == Isa::Rvv1d)
    {
      Lowering l = lowerRvv1d(k.trace);
      k.trace = std::move(l.trace);
      k.info["groups"] = l.groups;
    }
  return k;
}

KernelInstance
axpy(Isa, const KernelParams& p)
{
  const unsigned len = p.len;
  if (len == 0)
    throw Error("axpy: length must be at least 1");
  KernelInstance k;
  Layout lay;
  const uint64_t x = lay.alloc(k, "x", uint64_t(len) * 4);
  const uint64_t y = lay.alloc(k, "y", uint64_t(len) * 4);

  auto gen = detail::rng(p.seed, 6);
  std::uniform_real_distribution<float> d(-10.0f, 10.0f);
  const float alpha = d(gen);
  std::vector<float> xv(len), yv(len);
  for (auto& v : xv)
    v = d(gen);
  for (auto& v : yv)
    v = d(gen);
  for (unsigned i = 0; i < len; ++i)
    {
      uint32_t bx, by;
      std::memcpy(&bx, &xv[i], 4);
      std::memcpy(&by, &yv[i], 4);
      k.memory.write(x + i * 4ull, 4, bx);
      k.memory.write(y + i * 4ull, 4, by);
    }
  detail::appendBytes(k.expected, golden::axpy(alpha, xv, yv));
  k.outputs.push_back({"y", y, uint64_t(len) * 4, types::f});

  Emitter e(k.trace);
  const DataType t = types::f;
  uint32_t abits;
  std::memcpy(&abits, &alpha, 4);
  e.shape({8192});
  unsigned va = e.dup(t, abits);
  for (unsigned s = 0; s < len; s += 8192)
    {
      const unsigned nc = std::min(8192u, len - s);
      if (nc < 8192)
        e.cfg(Opcode::SetDimLength, 0, nc);
      e.scalar(4);
      unsigned vx = e.load(Opcode::StridedLoad, t, x + s * 4ull, {1, 0, 0, 0});
      unsigned vy = e.load(Opcode::StridedLoad, t, y + s * 4ull, {1, 0, 0, 0});
      unsigned prod = e.bin(Opcode::Mul, t, va, vx);
      unsigned sum = e.bin(Opcode::Add, t, prod, vy);
      e.store(Opcode::StridedStore, t, sum, y + s * 4ull, {1, 0, 0, 0});
    }
  return k;
}

} // namespace mve::kernels
