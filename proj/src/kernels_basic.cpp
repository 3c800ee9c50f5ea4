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

namespace mve::kernels
{

using detail::Emitter;

KernelInstance
transpose(Isa isa, const KernelParams& p)
{
  const unsigned m = p.m, n = p.n;
  if (m == 0 || n == 0 || m > 8192)
    throw Error("transpose: shape " + std::to_string(m) + "x" + std::to_string(n)
                + " is infeasible");
  KernelInstance k;
  Layout lay;
  const uint64_t bytes = uint64_t(m) * n * 4;
  const uint64_t in = lay.alloc(k, "input", bytes);
  const uint64_t out = lay.alloc(k, "output", bytes);

  auto gen = detail::rng(p.seed, 1);
  std::uniform_int_distribution<int32_t> dist(INT32_MIN, INT32_MAX);
  std::vector<int32_t> data(size_t(m) * n);
  for (auto& v : data)
    v = dist(gen);
  detail::writeArray(k.memory, in, data);
  detail::appendBytes(k.expected, golden::transpose(data, m, n));
  k.outputs.push_back({"output", out, bytes, types::dw});

  Emitter e(k.trace);
  const unsigned per = 8192 / m;
  const unsigned iters = (n + per - 1) / per;
  e.shape({m, per});
  e.cfg(Opcode::SetLoadStride, 0, n);
  e.cfg(Opcode::SetStoreStride, 1, m);
  for (unsigned it = 0; it < iters; ++it)
    {
      const unsigned j0 = it * per;
      const unsigned cols = std::min(per, n - j0);
      if (cols < per)
        {
          if (per <= kMaskBits)
            for (unsigned j = cols; j < per; ++j)
              e.cfg(Opcode::UnsetMask, j);
          else
            e.cfg(Opcode::SetDimLength, 1, cols);
        }
      e.scalar(4);
      unsigned r = e.load(Opcode::StridedLoad, types::dw, in + uint64_t(j0) * 4, {3, 1, 0, 0});
      e.store(Opcode::StridedStore, types::dw, r, out + uint64_t(j0) * m * 4, {1, 3, 0, 0});
    }
  k.info["iterations"] = iters;

  if (isa == Isa::Rvv1d)
    {
      Lowering l = lowerRvv1d(k.trace);
      k.trace = std::move(l.trace);
      k.info["groups"] = l.groups;
    }
  return k;
}

KernelInstance
reduction(Isa isa, const KernelParams& p)
{
  const unsigned len = p.len;
  if (len == 0)
    throw Error("reduction: length must be at least 1");
  KernelInstance k;
  Layout lay;
  const uint64_t in = lay.alloc(k, "input", uint64_t(len) * 4);
  const uint64_t tmp = lay.alloc(k, "halves", 4096 * 4);
  const uint64_t partials = lay.alloc(k, "partials", 256 * 4);

  auto gen = detail::rng(p.seed, 2);
  std::uniform_int_distribution<int32_t> dist(-1000000, 1000000);
  std::vector<int32_t> data(len);
  for (auto& v : data)
    v = dist(gen);
  detail::writeArray(k.memory, in, data);
  uint32_t sum = golden::reduce(data);
  detail::appendBytes(k.expected, std::vector<uint32_t>{sum});

  Emitter e(k.trace);
  unsigned steps = 0;
  if (len <= 256)
    {
      e.scalar(len, in);
      k.result = [in, len](const Memory& m) {
        uint32_t s = 0;
        for (unsigned i = 0; i < len; ++i)
          s += uint32_t(m.read(in + i * 4ull, 4));
        std::vector<uint8_t> out(4);
        std::memcpy(out.data(), &s, 4);
        return out;
      };
    }
  else
    {
      const DataType t = types::dw;
      e.shape({8192});
      unsigned acc = 0;
      const unsigned chunks = (len + 8191) / 8192;
      for (unsigned c = 0; c < chunks; ++c)
        {
          const unsigned nc = std::min(8192u, len - c * 8192);
          const uint64_t addr = in + uint64_t(c) * 8192 * 4;
          e.scalar(4);
          unsigned x;
          if (nc == 8192)
            x = e.load(Opcode::StridedLoad, t, addr, {1, 0, 0, 0});
          else
            {
              x = e.dup(t, 0);
              e.cfg(Opcode::SetDimLength, 0, nc);
              e.loadInto(Opcode::StridedLoad, t, x, addr, {1, 0, 0, 0});
              e.cfg(Opcode::SetDimLength, 0, 8192);
            }
          acc = c == 0 ? x : e.bin(Opcode::Add, t, acc, x);
        }
      for (unsigned cur = 8192; cur > 256; cur /= 2, ++steps)
        {
          const unsigned half = cur / 2;
          e.shape({half, 2});
          e.cfg(Opcode::UnsetMask, 0);
          e.store(Opcode::StridedStore, t, acc, tmp, {1, 0, 0, 0});
          e.shape({half});
          unsigned upper = e.load(Opcode::StridedLoad, t, tmp, {1, 0, 0, 0});
          acc = e.bin(Opcode::Add, t, acc, upper);
        }
      e.store(Opcode::StridedStore, t, acc, partials, {1, 0, 0, 0});
      e.scalar(256, partials);
      k.result = [partials](const Memory& m) {
        uint32_t s = 0;
        for (unsigned i = 0; i < 256; ++i)
          s += uint32_t(m.read(partials + i * 4ull, 4));
        std::vector<uint8_t> out(4);
        std::memcpy(out.data(), &s, 4);
        return out;
      };
    }
  k.info["halving_steps"] = steps;

  if (isa == Isa::Rvv1d)
    {
      Lowering l = lowerRvv1d(k.trace);
      k.trace = std::move(l.trace);
      k.info["groups"] = l.groups;
    }
  return k;
}

KernelInstance
upsampleH2v2(Isa isa, const KernelParams& p)
{
  const unsigned rows = p.rows, cols = p.cols;
  if (rows == 0 || cols == 0 || 2ull * cols > 8192)
    throw Error("upsample: image " + std::to_string(rows) + "x" + std::to_string(cols)
                + " is infeasible");
  KernelInstance k;
  Layout lay;
  const uint64_t in = lay.alloc(k, "input", uint64_t(rows) * cols);
  const uint64_t out = lay.alloc(k, "output", uint64_t(rows) * cols * 4);
  const uint64_t inPtr = lay.alloc(k, "input_rows", uint64_t(rows) * 8);
  const uint64_t evenPtr = lay.alloc(k, "output_rows_even", uint64_t(rows) * 8);
  const uint64_t oddPtr = lay.alloc(k, "output_rows_odd", uint64_t(rows) * 8);

  auto gen = detail::rng(p.seed, 3);
  std::uniform_int_distribution<int> dist(0, 255);
  std::vector<uint8_t> img(size_t(rows) * cols);
  for (auto& v : img)
    v = uint8_t(dist(gen));
  detail::writeArray(k.memory, in, img);
  for (unsigned r = 0; r < rows; ++r)
    {
      k.memory.write(inPtr + r * 8ull, 8, in + uint64_t(r) * cols);
      k.memory.write(evenPtr + r * 8ull, 8, out + uint64_t(2 * r) * 2 * cols);
      k.memory.write(oddPtr + r * 8ull, 8, out + uint64_t(2 * r + 1) * 2 * cols);
    }
  detail::appendBytes(k.expected, golden::upsample(img, rows, cols));
  k.outputs.push_back({"output", out, uint64_t(rows) * cols * 4, types::ub});

  Emitter e(k.trace);
  const DataType t = types::ub;
  const unsigned per = std::min(rows, 8192 / (2 * cols));
  unsigned shaped = 0;
  unsigned iters = 0;
  for (unsigned r0 = 0; r0 < rows; r0 += per, ++iters)
    {
      const unsigned rr = std::min(per, rows - r0);
      if (rr != shaped)
        {
          e.shape({2, cols, rr});
          shaped = rr;
        }
      e.scalar(4);
      unsigned x = e.load(Opcode::RandomLoad, t, inPtr + r0 * 8ull, {0, 1, 0, 0});
      e.store(Opcode::RandomStore, t, x, evenPtr + r0 * 8ull, {1, 2, 0, 0});
      e.store(Opcode::RandomStore, t, x, oddPtr + r0 * 8ull, {1, 2, 0, 0});
    }
  k.info["iterations"] = iters;

  if (isa == Isa::Rvv1d)
    {
      Lowering l = lowerRvv1d(k.trace);
      k.trace = std::move(l.trace);
      k.info["groups"] = l.groups;
    }
  return k;
}

} // namespace mve::kernels
