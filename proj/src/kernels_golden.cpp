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

#include "mve/kernels.hpp"
#include "mve/lanes.hpp"

namespace mve::kernels::golden
{

std::vector<int32_t>
transpose(const std::vector<int32_t>& in, unsigned m, unsigned n)
{
  std::vector<int32_t> out(size_t(m) * n);
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < n; ++j)
      out[size_t(j) * m + i] = in[size_t(i) * n + j];
  return out;
}

uint32_t
reduce(const std::vector<int32_t>& in)
{
  uint32_t s = 0;
  for (int32_t v : in)
    s += uint32_t(v);
  return s;
}

std::vector<uint8_t>
upsample(const std::vector<uint8_t>& in, unsigned rows, unsigned cols)
{
  std::vector<uint8_t> out(size_t(rows) * cols * 4);
  const size_t ow = size_t(cols) * 2;
  for (unsigned r = 0; r < 2 * rows; ++r)
    for (unsigned c = 0; c < 2 * cols; ++c)
      out[r * ow + c] = in[size_t(r / 2) * cols + c / 2];
  return out;
}

std::vector<uint64_t>
gemm(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b, unsigned m, unsigned n,
     unsigned k, DataType t)
{
  std::vector<uint64_t> out(size_t(m) * n);
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < n; ++j)
      {
        uint64_t acc = 0;
        for (unsigned kk = 0; kk < k; ++kk)
          {
            uint64_t x = a[size_t(i) * k + kk], y = b[size_t(kk) * n + j];
            if (t.isFloat())
              {
                float p = float(lanes::toDouble(x, t)) * float(lanes::toDouble(y, t));
                uint64_t pb = lanes::fromDouble(p, t);
                acc = kk == 0 ? pb
                              : lanes::fromDouble(float(lanes::toDouble(acc, t))
                                                      + float(lanes::toDouble(pb, t)),
                                                  t);
              }
            else
              acc = kk == 0 ? lanes::normalize(x * y, t) : lanes::normalize(acc + x * y, t);
          }
        out[size_t(i) * n + j] = lanes::raw(acc, t.width);
      }
  return out;
}

std::vector<int32_t>
spmm(const Csr& a, const std::vector<int32_t>& b, unsigned bcols)
{
  std::vector<int32_t> out(size_t(a.rows) * bcols, 0);
  for (unsigned r = 0; r < a.rows; ++r)
    for (uint32_t p = a.rowPtr[r]; p < a.rowPtr[r + 1]; ++p)
      for (unsigned j = 0; j < bcols; ++j)
        out[size_t(r) * bcols + j] = int32_t(uint32_t(out[size_t(r) * bcols + j])
                                             + uint32_t(a.values[p])
                                                 * uint32_t(b[size_t(a.colIdx[p]) * bcols + j]));
  return out;
}

std::vector<float>
axpy(float a, const std::vector<float>& x, const std::vector<float>& y)
{
  std::vector<float> out(y.size());
  for (size_t i = 0; i < y.size(); ++i)
    {
      float p = a * x[i];
      out[i] = p + y[i];
    }
  return out;
}

} // namespace mve::kernels::golden
