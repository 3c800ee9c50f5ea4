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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "mve/func_exec.hpp"
#include "mve/half.hpp"
#include "mve/lanes.hpp"

using namespace mve;

namespace
{

  constexpr unsigned kLanes = 8192;

  uint64_t mask(unsigned w) { return w >= 64 ? ~0ull : (1ull << w) - 1; }

  // Sign- or zero-extend a raw element into a slot, independent of the
  // library helpers.
  uint64_t slotOf(uint64_t raw, DataType t)
  {
    raw &= mask(t.width);
    if (t.kind == TypeKind::Signed && t.width < 64 && (raw >> (t.width - 1)) & 1)
      raw |= ~mask(t.width);
    return raw;
  }

  int64_t sval(uint64_t raw, unsigned w)
  {
    return int64_t(slotOf(raw, DataType{TypeKind::Signed, w}));
  }

  float fval(uint64_t raw, DataType t)
  {
    if (t.width == 16)
      return halfBitsToFloat(uint16_t(raw));
    uint32_t b = uint32_t(raw);
    float f;
    std::memcpy(&f, &b, 4);
    return f;
  }

  uint64_t fbits(float f, DataType t)
  {
    if (t.width == 16)
      return floatToHalfBits(f);
    uint32_t b;
    std::memcpy(&b, &f, 4);
    return b;
  }

  // Reference result for one lane on raw elements.
  uint64_t oracle(Opcode op, DataType t, uint64_t a, uint64_t b)
  {
    unsigned w = t.width;
    if (t.isFloat() && op != Opcode::Xor)
      {
        float x = fval(a, t), y = fval(b, t), r = 0;
        switch (op)
          {
          case Opcode::Add: r = x + y; break;
          case Opcode::Sub: r = x - y; break;
          case Opcode::Mul: r = x * y; break;
          case Opcode::Min: r = std::min(x, y); break;
          case Opcode::Max: r = std::max(x, y); break;
          default: FAIL("unexpected op");
          }
        return fbits(r, t);
      }
    unsigned amt = unsigned(b % w);
    switch (op)
      {
      case Opcode::Add: return (a + b) & mask(w);
      case Opcode::Sub: return (a - b) & mask(w);
      case Opcode::Mul: return (a * b) & mask(w);
      case Opcode::Xor: return (a ^ b) & mask(w);
      case Opcode::Min:
      case Opcode::Max:
        {
          bool less = t.isSigned() ? sval(a, w) < sval(b, w) : (a & mask(w)) < (b & mask(w));
          return ((op == Opcode::Min) == less ? a : b) & mask(w);
        }
      case Opcode::ShiftLeftReg: return (a << amt) & mask(w);
      case Opcode::ShiftRightReg:
        return t.isSigned() ? uint64_t(sval(a, w) >> amt) & mask(w) : (a & mask(w)) >> amt;
      default: FAIL("unexpected op"); return 0;
      }
  }

  bool cmpOracle(Opcode op, DataType t, uint64_t a, uint64_t b)
  {
    auto rel = [&](auto x, auto y) {
      switch (op)
        {
        case Opcode::Gt: return x > y;
        case Opcode::Gte: return x >= y;
        case Opcode::Lt: return x < y;
        case Opcode::Lte: return x <= y;
        case Opcode::Eq: return x == y;
        default: return x != y;
        }
    };
    if (t.isFloat())
      return rel(fval(a, t), fval(b, t));
    if (t.isSigned())
      return rel(sval(a, t.width), sval(b, t.width));
    return rel(a & mask(t.width), b & mask(t.width));
  }

  uint64_t randomRaw(std::mt19937_64& rng, DataType t)
  {
    if (!t.isFloat())
      return rng() & mask(t.width);
    float v = float(int(rng() % 2001) - 1000) / float(1 + rng() % 64);
    return fbits(v, t);
  }

  struct Rig
  {
    FunctionalMachine m{Memory(1 << 20)};

    void width(unsigned w) { m.step(isa::config(Opcode::SetWidth, w)); }

    void set(unsigned reg, DataType t, const std::vector<uint64_t>& raw)
    {
      auto r = m.registers()[reg];
      for (size_t i = 0; i < raw.size(); ++i)
        r[i] = slotOf(raw[i], t);
    }

    uint64_t get(unsigned reg, unsigned lane, unsigned w) const
    {
      return m.registers().at(reg)[lane] & mask(w);
    }

    void shape(std::vector<uint32_t> len)
    {
      m.step(isa::config(Opcode::SetDimCount, int64_t(len.size())));
      for (size_t d = 0; d < len.size(); ++d)
        m.step(isa::config(Opcode::SetDimLength, int64_t(d), len[d]));
    }
  };

  std::vector<uint64_t> fill(uint64_t v) { return std::vector<uint64_t>(kLanes, v); }

} // namespace

TEST_CASE("unsigned byte add wraps")
{
  Rig r;
  r.width(8);
  r.set(0, types::ub, fill(200));
  r.set(1, types::ub, fill(100));
  r.m.step(isa::binary(Opcode::Add, types::ub, 2, 0, 1));
  CHECK(r.get(2, 0, 8) == 44);
  CHECK(r.get(2, 8191, 8) == 44);
}

TEST_CASE("masked multiply leaves disabled lanes alone")
{
  Rig r;
  r.shape({4096, 2});
  r.set(0, types::dw, fill(3));
  r.set(1, types::dw, fill(5));
  r.set(2, types::dw, fill(77));
  r.m.step(isa::config(Opcode::UnsetMask, 0));
  r.m.step(isa::binary(Opcode::Mul, types::dw, 2, 0, 1));
  for (unsigned lane : {0u, 100u, 4095u})
    CHECK(r.get(2, lane, 32) == 77);
  for (unsigned lane : {4096u, 5000u, 8191u})
    CHECK(r.get(2, lane, 32) == 15);
}

TEST_CASE("per-lane shift right")
{
  Rig r;
  r.width(16);
  r.set(0, types::w, fill(8));
  r.set(1, types::w, {0, 1, 2, 3});
  r.m.step(isa::binary(Opcode::ShiftRightReg, types::w, 2, 0, 1));
  for (unsigned i = 0; i < 4; ++i)
    CHECK(r.get(2, i, 16) == (8u >> i));
}

TEST_CASE("arithmetic matches the lane oracle for every type")
{
  std::mt19937_64 rng(42);
  const Opcode ops[] = {Opcode::Add, Opcode::Sub, Opcode::Mul, Opcode::Min, Opcode::Max,
                        Opcode::Xor, Opcode::ShiftLeftReg, Opcode::ShiftRightReg};
  for (DataType t : allTypes())
    for (Opcode op : ops)
      {
        if (t.isFloat() && (op == Opcode::ShiftLeftReg || op == Opcode::ShiftRightReg))
          continue;
        Rig r;
        r.width(t.width);
        std::vector<uint64_t> a(kLanes), b(kLanes);
        for (unsigned i = 0; i < kLanes; ++i)
          {
            a[i] = randomRaw(rng, t);
            b[i] = randomRaw(rng, t);
          }
        r.set(0, t, a);
        r.set(1, t, b);
        r.m.step(isa::binary(op, t, 2, 0, 1));
        INFO(shapeOf(op).mnemonic, ".", t.suffix());
        unsigned bad = 0;
        for (unsigned i = 0; i < kLanes; ++i)
          bad += r.get(2, i, t.width) != oracle(op, t, a[i], b[i]);
        CHECK(bad == 0);
      }
}

TEST_CASE("compares match the oracle and set the tag")
{
  std::mt19937_64 rng(4);
  const Opcode ops[] = {Opcode::Gt, Opcode::Gte, Opcode::Lt, Opcode::Lte, Opcode::Eq,
                        Opcode::Neq};
  for (DataType t : allTypes())
    for (Opcode op : ops)
      {
        Rig r;
        r.width(t.width);
        std::vector<uint64_t> a(kLanes), b(kLanes);
        for (unsigned i = 0; i < kLanes; ++i)
          {
            a[i] = randomRaw(rng, t);
            b[i] = i % 5 == 0 ? a[i] : randomRaw(rng, t);
          }
        r.set(0, t, a);
        r.set(1, t, b);
        r.m.step(isa::compare(op, t, 0, 1));
        REQUIRE(r.m.tag().active);
        unsigned bad = 0;
        for (unsigned i = 0; i < kLanes; ++i)
          bad += bool(r.m.tag().bits[i]) != cmpOracle(op, t, a[i], b[i]);
        CHECK(bad == 0);
      }
}

TEST_CASE("compare examples")
{
  Rig r;
  r.set(0, types::dw, {5, 1});
  r.set(1, types::dw, {3, 3});
  r.shape({2});
  r.m.step(isa::compare(Opcode::Gt, types::dw, 0, 1));
  CHECK(r.m.tag().bits[0] == 1);
  CHECK(r.m.tag().bits[1] == 0);

  r.m.step(isa::compare(Opcode::Eq, types::dw, 0, 0));
  CHECK(r.m.tag().bits[0] == 1);
  CHECK(r.m.tag().bits[1] == 1);
}

TEST_CASE("tag predicates later ops until cleared")
{
  Rig r;
  std::vector<uint64_t> a(kLanes);
  for (unsigned i = 0; i < kLanes; ++i)
    a[i] = i % 3;
  r.set(0, types::dw, a);
  r.set(1, types::dw, fill(1));
  r.set(2, types::dw, fill(100));
  r.m.step(isa::compare(Opcode::Gte, types::dw, 0, 1));   // tag = a >= 1
  r.m.step(isa::binary(Opcode::Add, types::dw, 2, 2, 1));
  for (unsigned i = 0; i < 30; ++i)
    CHECK(r.get(2, i, 32) == (i % 3 >= 1 ? 101u : 100u));

  r.m.step(isa::dup(types::dw, 3, 9));
  CHECK(r.get(3, 0, 32) == 0);
  CHECK(r.get(3, 1, 32) == 9);

  r.m.step(isa::config(Opcode::SetDimCount, 1));
  CHECK_FALSE(r.m.tag().active);
  r.m.step(isa::binary(Opcode::Add, types::dw, 2, 2, 1));
  CHECK(r.get(2, 0, 32) == 101);
  CHECK(r.get(2, 1, 32) == 102);
}

TEST_CASE("vsetwidth clears the tag")
{
  Rig r;
  r.m.step(isa::compare(Opcode::Eq, types::dw, 0, 0));
  CHECK(r.m.tag().active);
  r.width(32);
  CHECK_FALSE(r.m.tag().active);
}

TEST_CASE("subtraction equals adding the two's complement")
{
  std::mt19937_64 rng(8);
  for (DataType t : allTypes())
    {
      if (t.isFloat())
        continue;
      Rig r;
      r.width(t.width);
      std::vector<uint64_t> a(kLanes), b(kLanes), nb(kLanes);
      for (unsigned i = 0; i < kLanes; ++i)
        {
          a[i] = rng();
          b[i] = rng();
          nb[i] = (~b[i] + 1) & mask(t.width);
        }
      r.set(0, t, a);
      r.set(1, t, b);
      r.set(2, t, nb);
      r.m.step(isa::binary(Opcode::Sub, t, 3, 0, 1));
      r.m.step(isa::binary(Opcode::Add, t, 4 % registerCapacity(t.width), 0, 2));
      unsigned other = 4 % registerCapacity(t.width);
      unsigned bad = 0;
      for (unsigned i = 0; i < kLanes; ++i)
        bad += r.get(3, i, t.width) != r.get(other, i, t.width);
      CHECK(bad == 0);
    }
}

TEST_CASE("disabled lanes are bit-identical for random enables")
{
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 20; ++iter)
    {
      Rig r;
      uint32_t inner = 1 + uint32_t(rng() % 64);
      uint32_t top = std::min<uint32_t>(256, kLanes / inner);
      r.shape({inner, top});
      std::vector<uint64_t> a(kLanes), b(kLanes), d(kLanes);
      for (unsigned i = 0; i < kLanes; ++i)
        a[i] = rng(), b[i] = rng(), d[i] = rng();
      r.set(0, types::dw, a);
      r.set(1, types::dw, b);
      r.set(2, types::dw, d);
      for (int k = 0; k < 40; ++k)
        r.m.step(isa::config(Opcode::UnsetMask, int64_t(rng() % top)));
      Opcode op = std::array{Opcode::Add, Opcode::Mul, Opcode::Xor, Opcode::Max}[iter % 4];
      r.m.step(isa::binary(op, types::dw, 2, 0, 1));
      const auto& st = r.m.state();
      unsigned bad = 0;
      for (unsigned lane = 0; lane < kLanes; ++lane)
        {
          bool enabled = lane < inner * top && st.dimMask.test(lane / inner);
          uint64_t expect = enabled ? oracle(op, types::dw, a[lane], b[lane])
                                    : d[lane] & mask(32);
          bad += r.get(2, lane, 32) != expect;
        }
      CHECK(bad == 0);
    }
}

TEST_CASE("immediate shifts, rotates and broadcast")
{
  Rig r;
  r.width(8);
  r.set(0, types::ub, fill(0x81));
  r.m.step(isa::unaryImm(Opcode::RotateLeftImm, types::ub, 1, 0, 1));
  CHECK(r.get(1, 0, 8) == 0x03);
  r.m.step(isa::unaryImm(Opcode::RotateRightImm, types::ub, 1, 0, 1));
  CHECK(r.get(1, 0, 8) == 0xC0);
  r.m.step(isa::unaryImm(Opcode::ShiftLeftImm, types::ub, 1, 0, 3));
  CHECK(r.get(1, 0, 8) == 0x08);
  r.m.step(isa::unaryImm(Opcode::ShiftRightImm, types::ub, 1, 0, 4));
  CHECK(r.get(1, 0, 8) == 0x08);
  r.set(0, types::b, fill(0x81));
  r.m.step(isa::unaryImm(Opcode::ShiftRightImm, types::b, 1, 0, 4));
  CHECK(r.get(1, 0, 8) == 0xF8);
  r.m.step(isa::unaryImm(Opcode::ShiftLeftImm, types::b, 1, 0, 9));
  CHECK(r.get(1, 0, 8) == 0x02);
  r.m.step(isa::dup(types::b, 2, 0xAB));
  CHECK(r.get(2, 8191, 8) == 0xAB);
}

TEST_CASE("conversions")
{
  Rig r;
  r.set(0, types::ub, fill(255));
  r.m.step(isa::convert(types::dw, types::ub, 1, 0));
  CHECK(r.get(1, 0, 32) == 255);

  r.set(0, types::b, fill(0xFF));
  r.m.step(isa::convert(types::dw, types::b, 1, 0));
  CHECK(r.get(1, 0, 32) == 0xFFFFFFFFu);

  r.set(0, types::dw, fill(300));
  r.m.step(isa::convert(types::b, types::dw, 1, 0));
  CHECK(r.get(1, 0, 8) == 44);

  for (auto [in, out] : {std::pair{2.5f, 2}, {3.5f, 4}, {-2.5f, -2}, {1.4f, 1}})
    {
      r.set(0, types::f, fill(fbits(in, types::f)));
      r.m.step(isa::convert(types::w, types::f, 1, 0));
      CHECK(sval(r.get(1, 0, 16), 16) == out);
      CHECK(int64_t(std::nearbyint(in)) == out);
    }

  r.set(0, types::dw, fill(uint64_t(-7) & 0xFFFFFFFF));
  r.m.step(isa::convert(types::f, types::dw, 1, 0));
  CHECK(fval(r.get(1, 0, 32), types::f) == -7.0f);

  r.set(0, types::f, fill(fbits(1.0f / 3.0f, types::f)));
  r.m.step(isa::convert(types::hf, types::f, 1, 0));
  CHECK(r.get(1, 0, 16) == 0x3555);
  r.m.step(isa::convert(types::f, types::hf, 2, 1));
  CHECK(fval(r.get(2, 0, 32), types::f) == halfBitsToFloat(0x3555));
}

TEST_CASE("half conversion reference points")
{
  CHECK(floatToHalfBits(1.0f) == 0x3C00);
  CHECK(floatToHalfBits(-2.0f) == 0xC000);
  CHECK(floatToHalfBits(65504.0f) == 0x7BFF);
  CHECK(floatToHalfBits(1e6f) == 0x7C00);
  CHECK(floatToHalfBits(5.9604645e-8f) == 0x0001);
  CHECK(halfBitsToFloat(0x3C00) == 1.0f);
  CHECK(halfBitsToFloat(0x0001) == 5.9604645e-8f);
  for (uint32_t b = 0; b < 0x7C00; ++b)
    CHECK(floatToHalfBits(halfBitsToFloat(uint16_t(b))) == b);
}

TEST_CASE("load then store with an identity plan preserves memory")
{
  Memory mem(1 << 16);
  std::mt19937_64 rng(1);
  for (uint64_t a = 0; a < 4096; a += 8)
    mem.write(0x1000 + a, 8, rng());
  FunctionalMachine m(mem);
  m.step(isa::config(Opcode::SetDimCount, 1));
  m.step(isa::config(Opcode::SetDimLength, 0, 1024));
  m.step(isa::load(Opcode::StridedLoad, types::dw, 0, 0x1000, {1, 0, 0, 0}));
  m.step(isa::store(Opcode::StridedStore, types::dw, 0, 0x1000, {1, 0, 0, 0}));
  CHECK(m.memory() == mem);
}

TEST_CASE("masked store writes only the second half")
{
  Memory mem(1 << 16);
  for (unsigned i = 0; i < 64; ++i)
    mem.write(0x100 + 4 * i, 4, i + 1);
  FunctionalMachine m(mem);
  m.step(isa::config(Opcode::SetDimCount, 2));
  m.step(isa::config(Opcode::SetDimLength, 0, 32));
  m.step(isa::config(Opcode::SetDimLength, 1, 2));
  m.step(isa::load(Opcode::StridedLoad, types::dw, 0, 0x100, {1, 2, 0, 0}));
  m.step(isa::config(Opcode::UnsetMask, 0));
  m.step(isa::store(Opcode::StridedStore, types::dw, 0, 0x1000, {1, 0, 0, 0}));
  for (unsigned i = 0; i < 32; ++i)
    CHECK(m.memory().read(0x1000 + 4 * i, 4) == 33 + i);
  CHECK(m.memory().read(0x1000 + 4 * 32, 4) == 0);
}

TEST_CASE("replicated load stored densely duplicates values")
{
  Memory mem(1 << 16);
  for (unsigned i = 0; i < 4; ++i)
    mem.write(0x200 + 2 * i, 2, 10 + i);
  FunctionalMachine m(mem);
  m.step(isa::config(Opcode::SetWidth, 16));
  m.step(isa::config(Opcode::SetDimCount, 2));
  m.step(isa::config(Opcode::SetDimLength, 0, 4));
  m.step(isa::config(Opcode::SetDimLength, 1, 3));
  m.step(isa::load(Opcode::StridedLoad, types::w, 0, 0x200, {1, 0, 0, 0}));
  m.step(isa::store(Opcode::StridedStore, types::w, 0, 0x2000, {1, 2, 0, 0}));
  for (unsigned i = 0; i < 12; ++i)
    CHECK(m.memory().read(0x2000 + 2 * i, 2) == 10 + i % 4);
}

TEST_CASE("masking a top element disables its contiguous lane block")
{
  std::mt19937 rng(2);
  for (int iter = 0; iter < 30; ++iter)
    {
      std::vector<uint32_t> len = {1 + uint32_t(rng() % 6), 1 + uint32_t(rng() % 6),
                                   1 + uint32_t(rng() % 30)};
      ControlState s;
      s.dimCount = 3;
      for (unsigned d = 0; d < 3; ++d)
        s.dimLength[d] = len[d];
      uint32_t e = rng() % len[2];
      s.dimMask.reset(e);
      auto en = shapeEnable(s, kLanes);
      uint32_t block = len[0] * len[1];
      uint32_t total = block * len[2];
      for (uint32_t lane = 0; lane < kLanes; ++lane)
        {
          bool off = lane >= total || (lane >= e * block && lane < (e + 1) * block);
          CHECK(en[lane] == (off ? 0 : 1));
        }
    }
}

TEST_CASE("random load gathers rows")
{
  Memory mem(1 << 16);
  mem.write(0x800, 8, 0x100);
  mem.write(0x808, 8, 0x900);
  for (unsigned i = 0; i < 8; ++i)
    {
      mem.write(0x100 + i, 1, i);
      mem.write(0x900 + i, 1, 100 + i);
    }
  FunctionalMachine m(mem);
  m.step(isa::config(Opcode::SetWidth, 8));
  m.step(isa::config(Opcode::SetDimCount, 2));
  m.step(isa::config(Opcode::SetDimLength, 0, 8));
  m.step(isa::config(Opcode::SetDimLength, 1, 2));
  m.step(isa::load(Opcode::RandomLoad, types::ub, 0, 0x800, {1, 0, 0, 0}));
  auto v = m.readRegister(0, 16);
  for (unsigned i = 0; i < 8; ++i)
    {
      CHECK(v[i] == i);
      CHECK(v[8 + i] == 100 + i);
    }
}

TEST_CASE("out of range access and bad register ids are errors")
{
  FunctionalMachine m(Memory(64));
  CHECK_THROWS_AS(m.step(isa::load(Opcode::StridedLoad, types::dw, 0, 0, {1, 0, 0, 0})), Error);
  CHECK_THROWS_AS(m.step(isa::binary(Opcode::Add, types::dw, 9, 0, 1)), Error);
  CHECK_THROWS_AS(m.step(isa::binary(Opcode::Add, types::qw, 1, 0, 1)), Error);
}
