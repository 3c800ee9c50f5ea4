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
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mve/isa.hpp"
#include "mve/lane_layout.hpp"
#include "mve/mem_model.hpp"
#include "mve/memory.hpp"
#include "mve/vcompile.hpp"

namespace mve::kernels
{

  enum class Isa : uint8_t { Mve, Rvv1d };

  std::string_view isaName(Isa isa);
  std::optional<Isa> isaFromName(std::string_view name);

  struct KernelParams
  {
    // transpose: m x n input; gemm: m = output rows, n = output columns, k = depth
    unsigned m = 512;
    unsigned n = 49;
    unsigned k = 64;
    unsigned len = 100000;     // reduction, axpy
    unsigned rows = 16;        // upsample input, spmm rows
    unsigned cols = 16;        // upsample input, spmm dense columns
    unsigned inner = 64;       // spmm sparse columns
    double density = 0.05;     // spmm
    uint64_t seed = 0;
    DataType dtype = types::dw;   // gemm element type
  };

  /// An output region checked against the golden result.
  struct OutputCheck
  {
    std::string buffer;
    uint64_t base = 0;
    uint64_t bytes = 0;
    DataType type = types::dw;
  };

  struct KernelInstance
  {
    std::string name;
    Isa isa = Isa::Mve;
    KernelParams params;
    Program trace;           // virtual registers
    Memory memory;           // initial image
    BufferMap buffers;
    uint64_t scratchBase = 0;
    std::vector<OutputCheck> outputs;
    std::vector<uint8_t> expected;   // golden output bytes, outputs concatenated
    /// Output bytes after execution; defaults to the output regions.
    std::function<std::vector<uint8_t>(const Memory&)> result;
    std::map<std::string, uint64_t> info;
  };

  using Builder = KernelInstance (*)(Isa, const KernelParams&);

  struct KernelEntry
  {
    std::string_view name;
    Builder build;
    bool multiDimensional;
  };

  const std::vector<KernelEntry>& registry();
  const KernelEntry& lookup(std::string_view name);
  std::vector<std::string> defaultSet();

  /// Problem sizes used when the caller does not override them.
  KernelParams defaultParams(std::string_view name);
  /// Reduced sizes that still exercise every code path (tails, several
  /// iterations, multiple segments); meant for fast validation sweeps.
  KernelParams quickParams(std::string_view name);

  KernelInstance build(std::string_view name, Isa isa, const KernelParams& params);

  /// Builders.
  KernelInstance transpose(Isa isa, const KernelParams& p);
  KernelInstance reduction(Isa isa, const KernelParams& p);
  KernelInstance upsampleH2v2(Isa isa, const KernelParams& p);
  KernelInstance gemmReplicated(Isa isa, const KernelParams& p);
  KernelInstance spmm(Isa isa, const KernelParams& p);
  KernelInstance axpy(Isa isa, const KernelParams& p);

  struct Lowering
  {
    Program trace;
    uint64_t groups = 0;          // mask-config + partial access + move groups
    uint64_t loweredAccesses = 0;
    uint64_t keptAccesses = 0;
  };

  /// Rewrite every multi-dimensional memory access of an MVE trace into
  /// per-segment 1D accesses under a lane-range predicate. Accesses that
  /// already form a single 1D stream over a prefix of lanes are kept.
  Lowering lowerRvv1d(const Program& mve, unsigned totalLanes = 8192,
                      unsigned scalarPerSegment = 4);

  struct Prepared
  {
    Program program;
    Memory memory;
    BufferMap buffers;
    vcompile::Compiled compiled;
  };

  /// Compile the virtual trace to physical registers and reserve the
  /// scratch buffer for spills.
  Prepared prepare(const KernelInstance& k, const EngineGeometry& geom = {});

  /// Compare outputs with the golden bytes; floats within `ulps` units in
  /// the last place. Returns a description of the first mismatch.
  std::optional<std::string> verify(const KernelInstance& k, const Memory& finalMemory,
                                    unsigned ulps = 2);

  /// Reference semantics of a virtual trace (unbounded register file).
  Memory runVirtual(const KernelInstance& k, const EngineGeometry& geom = {});

  /// Scalar golden implementations.
  namespace golden
  {
    std::vector<int32_t> transpose(const std::vector<int32_t>& in, unsigned m, unsigned n);
    uint32_t reduce(const std::vector<int32_t>& in);
    std::vector<uint8_t> upsample(const std::vector<uint8_t>& in, unsigned rows, unsigned cols);
    /// out[i][j] = sum_k a[i][k] * b[k][j] in the element type's arithmetic.
    std::vector<uint64_t> gemm(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b,
                               unsigned m, unsigned n, unsigned k, DataType t);
    struct Csr
    {
      unsigned rows = 0, cols = 0;
      std::vector<uint32_t> rowPtr, colIdx;
      std::vector<int32_t> values;
    };
    std::vector<int32_t> spmm(const Csr& a, const std::vector<int32_t>& b, unsigned bcols);
    std::vector<float> axpy(float a, const std::vector<float>& x, const std::vector<float>& y);
  }

  /// SpMM over caller-provided operands.
  KernelInstance spmmFromCsr(Isa isa, const golden::Csr& csr, const std::vector<int32_t>& dense,
                             unsigned cols);

  /// Helper that lays out named buffers in a memory image.
  class Layout
  {
  public:
    explicit Layout(uint64_t start = 0x20000) : next_(start) {}
    uint64_t alloc(KernelInstance& k, const std::string& name, uint64_t bytes);
    uint64_t end() const { return next_; }

  private:
    uint64_t next_;
  };

} // namespace mve::kernels
