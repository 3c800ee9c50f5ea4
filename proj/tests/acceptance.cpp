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


// Acceptance checks A1..A11. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mve/addr_gen.hpp"
#include "mve/engine.hpp"
#include "mve/func_exec.hpp"
#include "mve/kernels.hpp"
#include "mve/lane_layout.hpp"
#include "mve/runner.hpp"
#include "mve/timing_model.hpp"
#include "mve/vcompile.hpp"

using namespace mve;
using kernels::Isa;
using kernels::KernelParams;

namespace
{

  struct Outcome
  {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
      if (!ok && pass)
        detail << "first failure: " << what << "; ";
      pass = pass && ok;
    }
  };

  const Scheme kSchemes[] = {Scheme::BitSerial, Scheme::BitParallel, Scheme::BitHybrid,
                             Scheme::Associative};

  std::string fixed(double v, int digits = 3)
  {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
  }

  ControlState shape(const std::vector<uint32_t>& lengths)
  {
    ControlState s;
    s.dimCount = unsigned(lengths.size());
    for (size_t i = 0; i < lengths.size(); ++i)
      s.dimLength[i] = lengths[i];
    return s;
  }

  std::array<uint32_t, 4> paddedLengths(const ControlState& s)
  {
    std::array<uint32_t, 4> L{1, 1, 1, 1};
    for (unsigned d = 0; d < s.dimCount; ++d)
      L[d] = s.dimLength[d];
    return L;
  }

  // Four nested loops, dimension 0 innermost; lane numbers count every
  // position, masked top elements are skipped.
  std::vector<LaneAddress> stridedOracle(const ControlState& s, uint64_t base,
                                         std::array<int64_t, 4> st, unsigned eb)
  {
    auto L = paddedLengths(s);
    std::vector<LaneAddress> out;
    uint32_t lane = 0;
    for (uint32_t i3 = 0; i3 < L[3]; ++i3)
      for (uint32_t i2 = 0; i2 < L[2]; ++i2)
        for (uint32_t i1 = 0; i1 < L[1]; ++i1)
          for (uint32_t i0 = 0; i0 < L[0]; ++i0, ++lane)
            {
              const uint32_t idx[4] = {i0, i1, i2, i3};
              if (!s.topEnabled(idx[s.dimCount - 1]))
                continue;
              int64_t off = 0;
              for (unsigned d = 0; d < 4; ++d)
                off += int64_t(idx[d]) * st[d];
              out.push_back({lane, uint64_t(int64_t(base) + off * int64_t(eb))});
            }
    return out;
  }

  // Random-base reference: top index selects a 64-bit pointer, inner
  // dimensions use the strides below the top.
  std::vector<LaneAddress> randomOracle(const ControlState& s, uint64_t table,
                                        std::array<int64_t, 4> st, unsigned eb,
                                        const Memory& mem)
  {
    auto L = paddedLengths(s);
    const unsigned top = s.dimCount - 1;
    std::vector<LaneAddress> out;
    uint32_t lane = 0;
    for (uint32_t i3 = 0; i3 < L[3]; ++i3)
      for (uint32_t i2 = 0; i2 < L[2]; ++i2)
        for (uint32_t i1 = 0; i1 < L[1]; ++i1)
          for (uint32_t i0 = 0; i0 < L[0]; ++i0, ++lane)
            {
              const uint32_t idx[4] = {i0, i1, i2, i3};
              if (!s.topEnabled(idx[top]))
                continue;
              uint64_t ptr = mem.read(table + 8ull * idx[top], 8);
              int64_t off = 0;
              for (unsigned d = 0; d < top; ++d)
                off += int64_t(idx[d]) * st[d];
              out.push_back({lane, uint64_t(int64_t(ptr) + off * int64_t(eb))});
            }
    return out;
  }

  std::vector<uint32_t> randomLengths(std::mt19937_64& rng, unsigned dims, uint32_t budget)
  {
    std::vector<uint32_t> len(dims, 1);
    std::vector<unsigned> order(dims);
    for (unsigned d = 0; d < dims; ++d)
      order[d] = d;
    std::shuffle(order.begin(), order.end(), rng);
    uint32_t left = budget;
    for (unsigned d : order)
      {
        // log-uniform in [1, left]
        double u = std::uniform_real_distribution<double>(0.0, std::log2(double(left) + 1))(rng);
        uint32_t l = std::clamp<uint32_t>(uint32_t(std::exp2(u)), 1, left);
        len[d] = l;
        left /= l;
      }
    return len;
  }

  // ---------------------------------------------------------------- A1
  uint64_t tableBs(OpClass c, uint64_t n)
  {
    uint64_t lg = 0;
    while ((1ull << lg) < n)
      ++lg;
    switch (c)
      {
      case OpClass::Copy:
      case OpClass::Add:
      case OpClass::Xor:
      case OpClass::Compare: return n;
      case OpClass::Sub:
      case OpClass::MinMax: return 2 * n;
      case OpClass::Mul: return n * n + 5 * n;
      case OpClass::ShiftReg: return n * lg;
      default: return 0;
      }
  }

  void a1(Outcome& o)
  {
    const OpClass classes[] = {OpClass::Copy, OpClass::Add, OpClass::Sub, OpClass::Mul,
                               OpClass::MinMax, OpClass::Xor, OpClass::Compare,
                               OpClass::ShiftReg};
    TimingModel bs(Scheme::BitSerial);
    unsigned checked = 0;
    for (OpClass c : classes)
      for (unsigned n : {8u, 16u, 32u, 64u})
        {
          const std::string what = std::string(opClassName(c)) + "/" + std::to_string(n);
          o.require(bsLatency(c, n) == tableBs(c, n), what);
          o.require(bs.latency(c, DataType{TypeKind::Signed, n}) == tableBs(c, n), what);
          ++checked;
        }
    o.require(bsLatency(OpClass::Add, 32) == 32, "add/32");
    o.require(bsLatency(OpClass::Sub, 16) == 32, "sub/16");
    o.require(bsLatency(OpClass::Mul, 8) == 104, "mul/8");
    o.require(bsLatency(OpClass::Mul, 32) == 1184, "mul/32");
    o.detail << checked << " class/width pairs exact; mul/32=" << bsLatency(OpClass::Mul, 32);
  }

  // ---------------------------------------------------------------- A2
  void a2(Outcome& o)
  {
    std::mt19937_64 rng(2024);
    const uint64_t base = 1ull << 32;
    unsigned cases = 0;
    auto check = [&](const ControlState& s, std::array<int64_t, 4> st, unsigned eb) {
      auto plan = stridedPlan(s, base, ResolvedStrides{st}, eb);
      o.require(plan.entries == stridedOracle(s, base, st, eb),
                "case " + std::to_string(cases));
      ++cases;
    };
    // replicated middle dimension: strides (1, 0, 3)
    for (auto len : {std::vector<uint32_t>{3, 2, 4}, std::vector<uint32_t>{4, 4, 4},
                     std::vector<uint32_t>{256, 4, 8}})
      check(shape(len), {1, 0, 3, 0}, 4);
    while (cases < 1000)
      {
        unsigned dims = 1 + unsigned(rng() % 4);
        ControlState s = shape(randomLengths(rng, dims, 8192));
        if (dims > 1 && s.dimLength[dims - 1] <= kMaskBits)
          for (int k = 0, n = int(rng() % 4); k < n; ++k)
            s.dimMask.reset(rng() % s.dimLength[dims - 1]);
        std::array<int64_t, 4> st{};
        for (auto& v : st)
          v = int64_t(rng() % 13) - 4;
        check(s, st, 1u << (rng() % 4));
      }
    o.detail << cases << " shapes match the nested-loop reference";
  }

  // ---------------------------------------------------------------- A3
  void a3(Outcome& o)
  {
    std::mt19937_64 rng(77);
    const uint64_t table = 0x1000;
    unsigned cases = 0;
    for (; cases < 300; ++cases)
      {
        unsigned dims = 1 + unsigned(rng() % 4);
        ControlState s = shape(randomLengths(rng, dims, 8192));
        if (s.dimLength[dims - 1] > 256)
          s.dimLength[dims - 1] = 1 + uint32_t(rng() % 256);
        for (int k = 0, n = int(rng() % 4); k < n; ++k)
          s.dimMask.reset(rng() % s.dimLength[dims - 1]);
        Memory mem(table + 8 * 256);
        for (unsigned t = 0; t < 256; ++t)
          mem.write(table + 8 * t, 8, (1ull << 32) + (rng() % (1u << 20)) * 8);
        std::array<int64_t, 4> st{};
        for (auto& v : st)
          v = int64_t(rng() % 9) - 2;
        unsigned eb = 1u << (rng() % 4);
        auto plan = randomPlan(s, table, ResolvedStrides{st}, eb, mem);
        o.require(plan.entries == randomOracle(s, table, st, eb, mem),
                  "random plan case " + std::to_string(cases));
      }

    // upsample: every source pixel lands on exactly four output lanes
    KernelParams p;
    p.rows = 16;
    p.cols = 16;
    unsigned images = 0;
    for (Isa isa : {Isa::Mve, Isa::Rvv1d})
      {
        kernels::KernelInstance k = kernels::build("upsample", isa, p);
        uint64_t in = 0, out = 0;
        for (const auto& b : k.buffers.buffers())
          {
            if (b.name == "input")
              in = b.base;
            if (b.name == "output")
              out = b.base;
          }
        for (unsigned i = 0; i < 256; ++i)
          k.memory.write(in + i, 1, (i * 91 + 7) & 255);
        Memory fin = kernels::runVirtual(k);
        std::map<uint64_t, unsigned> count;
        for (unsigned i = 0; i < 1024; ++i)
          ++count[fin.read(out + i, 1)];
        bool four = count.size() == 256;
        for (auto [v, c] : count)
          four = four && c == 4;
        o.require(four, std::string("upsample replication on ") + std::string(kernels::isaName(isa)));
        ++images;
      }
    o.detail << cases << " random plans match the pointer-table reference; upsample 4x holds on "
             << images << " flavors";
  }

  // ---------------------------------------------------------------- A4
  unsigned countMemory(const Program& p, bool loads)
  {
    unsigned n = 0;
    for (const auto& item : p)
      if (const auto* v = std::get_if<VectorInstruction>(&item))
        if (isMemory(v->op) && !v->fullRegister && isLoad(v->op) == loads)
          ++n;
    return n;
  }

  void a4(Outcome& o)
  {
    KernelParams p;
    p.m = 512;
    p.n = 49;
    auto mv = kernels::build("transpose", Isa::Mve, p);
    auto rv = kernels::build("transpose", Isa::Rvv1d, p);
    unsigned ml = countMemory(mv.trace, true);
    unsigned ms = countMemory(mv.trace, false);
    unsigned rl = countMemory(rv.trace, true);
    o.require(ml == 4 && ms == 4, "mve load/store pairs");
    o.require(rl == 49, "rvv1d column groups");
    o.require(!kernels::verify(mv, kernels::runVirtual(mv)), "mve output");
    o.require(!kernels::verify(rv, kernels::runVirtual(rv)), "rvv1d output");
    o.detail << "mve " << ml << " load/store pairs; rvv1d " << rl << " per-column load groups";
  }

  // ---------------------------------------------------------------- A5
  void a5(Outcome& o)
  {
    KernelParams p;
    p.len = 8192;
    p.seed = 5;
    auto k = kernels::build("reduction", Isa::Mve, p);
    uint64_t in = 0, halves = 0;
    for (const auto& b : k.buffers.buffers())
      {
        if (b.name == "input")
          in = b.base;
        if (b.name == "halves")
          halves = b.base;
      }
    unsigned steps = 0;
    for (const auto& item : k.trace)
      if (const auto* v = std::get_if<VectorInstruction>(&item))
        steps += v->op == Opcode::StridedStore && v->address == halves;
    uint32_t sum = 0;
    for (unsigned i = 0; i < p.len; ++i)
      sum += uint32_t(k.memory.read(in + 4ull * i, 4));
    kernels::Prepared prep = kernels::prepare(k);
    SimResult r = run(prep.program, MachineConfig{}, prep.memory, prep.buffers);
    auto got = k.result(r.memory);
    uint32_t s = 0;
    std::memcpy(&s, got.data(), 4);
    o.require(steps == 5, "halving steps");
    o.require(s == sum, "sum");
    o.detail << "8192 -> 256 in " << steps << " halving steps; sum " << s << " vs reference "
             << sum;
  }

  // ---------------------------------------------------------------- A6
  void a6(Outcome& o)
  {
    struct Case
    {
      unsigned m, n;
      double target;
    };
    for (Case c : {Case{128, 3136, 5.3}, Case{122, 784, 13.0}})
      {
        KernelParams p = kernels::defaultParams("gemm");
        p.m = c.m;
        p.n = c.n;
        RunRequest req{"gemm", Isa::Mve, p, MachineConfig{}, {}};
        RunReport mv = execute(req);
        req.isa = Isa::Rvv1d;
        RunReport rv = execute(req);
        const double ratio = double(rv.stats.vectorInsts()) / double(mv.stats.vectorInsts());
        const std::string tag = std::to_string(c.m) + "x" + std::to_string(c.n);
        o.require(!mv.mismatch && !rv.mismatch, tag + " output");
        o.require(ratio >= c.target * 0.8 && ratio <= c.target * 1.2,
                  tag + " ratio " + fixed(ratio, 2) + " outside [" + fixed(c.target * 0.8, 2)
                      + ", " + fixed(c.target * 1.2, 2) + "]");
        o.detail << tag << " ratio " << fixed(ratio, 2) << " (target " << c.target << "); ";
      }
  }

  // ------------------------------------------------------------ A7, A8
  struct DefaultRuns
  {
    // (kernel, isa, scheme) -> stats
    std::map<std::tuple<std::string, Isa, Scheme>, SimStats> stats;
    std::vector<std::string> failures;
  };

  const DefaultRuns& defaultRuns()
  {
    static const DefaultRuns runs = [] {
      DefaultRuns r;
      for (const auto& name : kernels::defaultSet())
        for (Isa isa : {Isa::Mve, Isa::Rvv1d})
          for (Scheme s : kSchemes)
            {
              MachineConfig m;
              m.scheme = s;
              RunRequest req{name, isa, kernels::defaultParams(name), m, {}};
              RunReport rep = execute(req);
              if (rep.mismatch)
                r.failures.push_back(name + ": " + *rep.mismatch);
              r.stats[{name, isa, s}] = rep.stats;
            }
      return r;
    }();
    return runs;
  }

  void a7(Outcome& o)
  {
    const auto& runs = defaultRuns();
    o.require(runs.failures.empty(), "default-set outputs");
    std::map<Scheme, double> gap;
    unsigned kernelsChecked = 0;
    for (const auto& e : kernels::registry())
      {
        if (!e.multiDimensional)
          continue;
        ++kernelsChecked;
        const std::string name(e.name);
        for (Scheme s : {Scheme::BitSerial, Scheme::BitHybrid, Scheme::BitParallel})
          {
            double um = runs.stats.at({name, Isa::Mve, s}).utilization();
            double ur = runs.stats.at({name, Isa::Rvv1d, s}).utilization();
            o.require(um > ur, name + " " + std::string(schemeName(s)) + " mve " + fixed(um)
                                   + " <= rvv1d " + fixed(ur));
            gap[s] += um - ur;
          }
      }
    for (auto& [s, g] : gap)
      g /= kernelsChecked;
    o.require(gap[Scheme::BitSerial] > gap[Scheme::BitHybrid]
                  && gap[Scheme::BitSerial] > gap[Scheme::BitParallel],
              "bs gap is not the largest");
    o.detail << "mean utilization gap bs " << fixed(gap[Scheme::BitSerial]) << ", bh "
             << fixed(gap[Scheme::BitHybrid]) << ", bp " << fixed(gap[Scheme::BitParallel])
             << " over " << kernelsChecked << " multi-dimensional kernels";
  }

  void a8(Outcome& o)
  {
    const auto& runs = defaultRuns();
    o.require(runs.failures.empty(), "default-set outputs");
    double logBs = 0, logAc = 0;
    unsigned n = 0;
    for (const auto& name : kernels::defaultSet())
      {
        auto speedup = [&](Scheme s) {
          return double(runs.stats.at({name, Isa::Rvv1d, s}).totalCycles)
                 / double(runs.stats.at({name, Isa::Mve, s}).totalCycles);
        };
        logBs += std::log(speedup(Scheme::BitSerial));
        logAc += std::log(speedup(Scheme::Associative));
        ++n;
      }
    const double bs = std::exp(logBs / n), ac = std::exp(logAc / n);
    o.require(ac < bs, "ac speedup not below bs");
    o.detail << "geomean mve speedup over rvv1d: bs " << fixed(bs, 2) << ", ac " << fixed(ac, 2);
  }

  // ---------------------------------------------------------------- A9
  void a9(Outcome& o)
  {
    unsigned runsDone = 0, failed = 0;
    for (const auto& e : kernels::registry())
      for (Isa isa : {Isa::Mve, Isa::Rvv1d})
        for (Scheme s : kSchemes)
          for (uint64_t seed = 0; seed < 10; ++seed)
            {
              KernelParams p = kernels::quickParams(e.name);
              p.seed = seed;
              MachineConfig m;
              m.scheme = s;
              RunReport rep = execute(RunRequest{std::string(e.name), isa, p, m, {}});
              ++runsDone;
              if (rep.mismatch)
                {
                  ++failed;
                  o.require(false, std::string(e.name) + " " + std::string(kernels::isaName(isa))
                                       + " " + std::string(schemeName(s)) + " seed "
                                       + std::to_string(seed) + ": " + *rep.mismatch);
                }
            }
    o.detail << runsDone - failed << "/" << runsDone
             << " kernel x isa x scheme x seed runs match the scalar reference";
  }

  // --------------------------------------------------------------- A10
  Program randomProgram(std::mt19937_64& rng)
  {
    Program p;
    auto cfg = [&](Opcode op, int64_t a = 0, int64_t b = 0) { p.push_back(isa::config(op, a, b)); };
    auto reshape = [&] {
      unsigned dims = 1 + unsigned(rng() % 3);
      auto len = randomLengths(rng, dims, 8192);
      if (dims > 1)
        len[dims - 1] = std::min<uint32_t>(len[dims - 1], 256);
      cfg(Opcode::SetDimCount, dims);
      for (unsigned d = 0; d < dims; ++d)
        cfg(Opcode::SetDimLength, d, len[d]);
      if (dims > 1)
        for (int k = 0, n = int(rng() % 3); k < n; ++k)
          cfg(Opcode::UnsetMask, int64_t(rng() % len[dims - 1]));
    };
    reshape();
    const DataType t = types::dw;
    for (unsigned r = 0; r < 6; ++r)
      p.push_back(isa::dup(t, r, rng() % 1000));
    auto modes = [&] {
      std::array<unsigned, kMaxDims> m{};
      for (auto& v : m)
        v = unsigned(rng() % 3);
      return m;
    };
    const unsigned len = 6 + unsigned(rng() % 30);
    for (unsigned i = 0; i < len; ++i)
      {
        unsigned a = unsigned(rng() % 6), b = unsigned(rng() % 6), d = unsigned(rng() % 6);
        uint64_t addr = (rng() % 0x4000) * 4;
        switch (rng() % 9)
          {
          case 0: reshape(); break;
          case 1: p.push_back(isa::load(Opcode::StridedLoad, t, d, addr, modes())); break;
          case 2: p.push_back(isa::store(Opcode::StridedStore, t, a, addr, modes())); break;
          case 3: p.push_back(isa::binary(Opcode::Add, t, d, a, b)); break;
          case 4: p.push_back(isa::binary(Opcode::Mul, t, d, a, b)); break;
          case 5: p.push_back(isa::binary(Opcode::Sub, t, d, a, b)); break;
          case 6: p.push_back(isa::compare(Opcode::Gt, t, a, b)); break;
          case 7:
            p.push_back(ScalarMarker{1 + rng() % 40, rng() % 2 ? std::optional<uint64_t>(addr)
                                                                : std::nullopt});
            break;
          default: p.push_back(isa::load(Opcode::StridedLoad, t, d, addr, {1, 2, 2, 2})); break;
          }
      }
    return p;
  }

  void a10(Outcome& o)
  {
    std::mt19937_64 rng(1010);
    unsigned cases = 0, records = 0;
    for (; cases < 1000; ++cases)
      {
        const std::string tag = "program " + std::to_string(cases);
        Program p = randomProgram(rng);
        MachineConfig m;
        m.scheme = kSchemes[rng() % 4];
        m.core.queueEntries = 1 + unsigned(rng() % 16);
        m.core.robEntries = 1 + unsigned(rng() % 64);
        Memory mem(0x20000);
        SimResult r = run(p, m, mem, {}, RunOptions{true, false});

        for (const auto& cb : r.stats.perCb)
          o.require(cb.idle + cb.compute + cb.dataAccess == r.stats.totalCycles,
                    tag + " conservation");

        std::vector<std::vector<std::pair<uint64_t, uint64_t>>> perCb(r.stats.perCb.size());
        uint64_t lastMemoryEnd = 0;
        for (const auto& rec : r.schedule)
          {
            ++records;
            uint64_t lo = UINT64_MAX, hi = 0;
            for (const auto& iv : rec.intervals)
              {
                o.require(iv.cb < rec.cbMask.size() && rec.cbMask[iv.cb],
                          tag + " work on an unmasked CB");
                o.require(rec.dequeue >= iv.end, tag + " dequeue before a CB finished");
                perCb[iv.cb].push_back({iv.start, iv.end});
                lo = std::min(lo, iv.start);
                hi = std::max(hi, iv.end);
              }
            if (rec.kind == WorkKind::Memory && !rec.intervals.empty())
              {
                o.require(lo >= lastMemoryEnd, tag + " overlapping memory accesses");
                lastMemoryEnd = hi;
              }
          }
        for (auto& ivs : perCb)
          {
            std::sort(ivs.begin(), ivs.end());
            for (size_t i = 1; i < ivs.size(); ++i)
              o.require(ivs[i].first >= ivs[i - 1].second, tag + " overlapping CB work");
          }
      }
    o.detail << cases << " random programs, " << records
             << " scheduled instructions: conservation, disjoint memory windows, dequeue order hold";
  }

  // --------------------------------------------------------------- A11
  void a11(Outcome& o)
  {
    constexpr uint64_t data = 0x1000, outAddr = 0x40000, scratch = 0x100000;
    auto ld = [](unsigned d, uint64_t a) {
      return isa::load(Opcode::StridedLoad, types::dw, d, a, {1, 0, 0, 0});
    };
    Program p = {isa::config(Opcode::SetDimLength, 0, 64)};
    for (unsigned r = 0; r < 9; ++r)
      p.push_back(ld(r, data + 256 * r));
    unsigned acc = 0;
    for (unsigned r = 1; r < 9; ++r)
      {
        p.push_back(isa::binary(Opcode::Add, types::dw, 9 + r, acc, r));
        acc = 9 + r;
      }
    p.push_back(isa::store(Opcode::StridedStore, types::dw, acc, outAddr, {1, 0, 0, 0}));

    const EngineGeometry geom;
    const unsigned width = vcompile::detectWidth(p);
    const unsigned capacity = geom.wordlinesPerArray / width;
    const unsigned live = vcompile::liveness(p).peak;
    vcompile::AllocResult a = vcompile::allocate(p, {capacity, scratch, geom.totalLanes()});

    Memory image(scratch + 64 * 65536);
    std::mt19937_64 rng(11);
    for (uint64_t x = data; x < outAddr; x += 8)
      image.write(x, 8, rng());
    MachineOptions unbounded;
    unbounded.unboundedRegisters = true;
    FunctionalMachine ref(image, unbounded);
    ref.run(p);
    FunctionalMachine phys(image);
    phys.run(a.program);
    auto x = ref.memory().bytes(), y = phys.memory().bytes();
    const bool same = std::equal(x.begin(), x.begin() + scratch, y.begin());

    o.require(width == 32 && capacity == 8, "capacity");
    o.require(live == 9, "live registers");
    o.require(a.spills == 1 && a.fills == 1, "spill/fill count");
    o.require(same, "allocated output differs");
    o.detail << live << " live under capacity " << capacity << ": " << a.spills << " spill, "
             << a.fills << " fill, outputs " << (same ? "match" : "differ");
  }

} // namespace

int
main()
{
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},  {"A5", a5},  {"A6", a6},
      {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10}, {"A11", a11},
  };
  unsigned failed = 0;
  for (const auto& [id, fn] : criteria)
    {
      Outcome o;
      auto t0 = std::chrono::steady_clock::now();
      try
        {
          fn(o);
        }
      catch (const std::exception& e)
        {
          o.pass = false;
          o.detail << "exception: " << e.what();
        }
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      failed += !o.pass;
      std::cout << (o.pass ? "PASS " : "FAIL ") << id << ": " << o.detail.str() << " ["
                << fixed(secs, 2) << " s]" << std::endl;
    }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
