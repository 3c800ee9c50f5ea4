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

#include "mve/isa.hpp"
#include "mve/half.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>

namespace mve
{

namespace
{

  struct SuffixEntry
  {
    std::string_view suffix;
    DataType type;
  };

  constexpr std::array<SuffixEntry, 10> kSuffixes{{
    {"b", types::b},   {"w", types::w},   {"dw", types::dw},   {"qw", types::qw},
    {"ub", types::ub}, {"uw", types::uw}, {"udw", types::udw}, {"uqw", types::uqw},
    {"hf", types::hf}, {"f", types::f},
  }};

  using enum Opcode;
  using enum OpCategory;

  // Indexed by Opcode.
  constexpr std::array<OpShape, size_t(Opcode::Count_)> kShapes{{
    {"vsetdimc", Config, false, 0, 1},
    {"vsetdiml", Config, false, 0, 2},
    {"vsetmask", Config, false, 0, 1},
    {"vunsetmask", Config, false, 0, 1},
    {"vsetwidth", Config, false, 0, 1},
    {"vsetldstr", Config, false, 0, 2},
    {"vsetststr", Config, false, 0, 2},
    {"vsetrange", Config, false, 0, 2},
    {"vcvt", Move, true, 1, 0},
    {"vcpy", Move, true, 1, 0},
    {"vsld", Memory, true, 0, 1},
    {"vrld", Memory, true, 0, 1},
    {"vsst", Memory, false, 1, 1},
    {"vrst", Memory, false, 1, 1},
    {"vsetdup", Arithmetic, true, 0, 1},
    {"vshil", Arithmetic, true, 1, 1},
    {"vshir", Arithmetic, true, 1, 1},
    {"vrotil", Arithmetic, true, 1, 1},
    {"vrotir", Arithmetic, true, 1, 1},
    {"vshrl", Arithmetic, true, 2, 0},
    {"vshrr", Arithmetic, true, 2, 0},
    {"vadd", Arithmetic, true, 2, 0},
    {"vsub", Arithmetic, true, 2, 0},
    {"vmul", Arithmetic, true, 2, 0},
    {"vmin", Arithmetic, true, 2, 0},
    {"vmax", Arithmetic, true, 2, 0},
    {"vxor", Arithmetic, true, 2, 0},
    {"vgt", Arithmetic, false, 2, 0},
    {"vgte", Arithmetic, false, 2, 0},
    {"vlt", Arithmetic, false, 2, 0},
    {"vlte", Arithmetic, false, 2, 0},
    {"veq", Arithmetic, false, 2, 0},
    {"vneq", Arithmetic, false, 2, 0},
  }};

  uint64_t widthMask(unsigned width)
  {
    return width >= 64 ? ~uint64_t(0) : ((uint64_t(1) << width) - 1);
  }

  std::vector<std::string_view> splitTokens(std::string_view line)
  {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < line.size())
      {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
          ++i;
        size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
          ++j;
        if (j > i)
          out.push_back(line.substr(i, j - i));
        i = j;
      }
    return out;
  }

  std::optional<int64_t> parseInt(std::string_view tok)
  {
    bool neg = false;
    if (!tok.empty() && (tok[0] == '-' || tok[0] == '+'))
      {
        neg = tok[0] == '-';
        tok.remove_prefix(1);
      }
    int base = 10;
    if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X'))
      {
        base = 16;
        tok.remove_prefix(2);
      }
    uint64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, base);
    if (ec != std::errc() || p != tok.data() + tok.size() || tok.empty())
      return std::nullopt;
    return neg ? -int64_t(v) : int64_t(v);
  }

  std::optional<unsigned> parseReg(std::string_view tok)
  {
    if (tok.size() < 2 || tok[0] != 'v')
      return std::nullopt;
    auto v = parseInt(tok.substr(1));
    if (!v || *v < 0 || tok[1] == '-' || tok[1] == '+')
      return std::nullopt;
    return unsigned(*v);
  }

  uint64_t floatBits(double v, unsigned width);

  std::string hex(uint64_t v)
  {
    std::ostringstream os;
    os << "0x" << std::hex << v;
    return os.str();
  }

} // namespace

namespace
{
  uint64_t floatBits(double v, unsigned width)
  {
    if (width == 16)
      return floatToHalfBits(float(v));
    float f = float(v);
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    return bits;
  }
}

std::string_view
DataType::suffix() const
{
  for (auto& e : kSuffixes)
    if (e.type == *this)
      return e.suffix;
  return "?";
}

std::optional<DataType>
DataType::fromSuffix(std::string_view s)
{
  for (auto& e : kSuffixes)
    if (e.suffix == s)
      return e.type;
  return std::nullopt;
}

const std::array<DataType, 10>&
allTypes()
{
  static const std::array<DataType, 10> all = [] {
    std::array<DataType, 10> a{};
    for (size_t i = 0; i < kSuffixes.size(); ++i)
      a[i] = kSuffixes[i].type;
    return a;
  }();
  return all;
}

const OpShape&
shapeOf(Opcode op)
{
  return kShapes.at(size_t(op));
}

OpCategory
categoryOf(Opcode op)
{
  return shapeOf(op).category;
}

std::optional<Opcode>
opcodeFromMnemonic(std::string_view m)
{
  for (size_t i = 0; i < kShapes.size(); ++i)
    if (kShapes[i].mnemonic == m)
      return Opcode(i);
  return std::nullopt;
}

uint8_t
packModes(std::array<unsigned, kMaxDims> modes)
{
  uint8_t byte = 0;
  for (unsigned d = 0; d < kMaxDims; ++d)
    byte |= uint8_t((modes[d] & 3u) << (2 * d));
  return byte;
}

uint64_t
ControlState::laneCount() const
{
  uint64_t n = 1;
  for (unsigned d = 0; d < dimCount; ++d)
    n *= dimLength[d];
  return n;
}

ControlState
applyConfig(const ControlState& state, const VectorInstruction& insn)
{
  ControlState s = state;
  auto checkDim = [&](int64_t d) {
    if (d < 0 || d >= int64_t(kMaxDims))
      throw Error("dimension index out of range: " + std::to_string(d));
  };
  switch (insn.op)
    {
    case SetDimCount:
      if (insn.arg0 < 1 || insn.arg0 > int64_t(kMaxDims))
        throw Error("dimension count outside 1..4: " + std::to_string(insn.arg0));
      s.dimCount = unsigned(insn.arg0);
      for (unsigned d = s.dimCount; d < kMaxDims; ++d)
        s.dimLength[d] = 1;
      s.dimMask.set();
      s.laneLo = 0;
      s.laneHi = UINT32_MAX;
      break;
    case SetDimLength:
      checkDim(insn.arg0);
      if (insn.arg1 < 1 || insn.arg1 > int64_t(UINT32_MAX))
        throw Error("dimension length must be positive: " + std::to_string(insn.arg1));
      s.dimLength[insn.arg0] = uint32_t(insn.arg1);
      break;
    case SetMask:
    case UnsetMask:
      if (insn.arg0 < 0 || insn.arg0 >= int64_t(kMaskBits))
        throw Error("mask index out of range: " + std::to_string(insn.arg0));
      s.dimMask.set(size_t(insn.arg0), insn.op == SetMask);
      break;
    case SetWidth:
      if (insn.arg0 != 8 && insn.arg0 != 16 && insn.arg0 != 32 && insn.arg0 != 64)
        throw Error("kernel width must be 8, 16, 32 or 64: " + std::to_string(insn.arg0));
      s.kernelWidth = unsigned(insn.arg0);
      break;
    case SetLoadStride:
      checkDim(insn.arg0);
      s.loadStride[insn.arg0] = insn.arg1;
      break;
    case SetStoreStride:
      checkDim(insn.arg0);
      s.storeStride[insn.arg0] = insn.arg1;
      break;
    case SetLaneRange:
      if (insn.arg0 < 0 || insn.arg1 < insn.arg0 || insn.arg1 > int64_t(UINT32_MAX))
        throw Error("bad lane range");
      s.laneLo = uint32_t(insn.arg0);
      s.laneHi = uint32_t(insn.arg1);
      break;
    default:
      throw Error("not a config instruction: " + std::string(shapeOf(insn.op).mnemonic));
    }
  return s;
}

std::optional<std::string>
validateInstruction(const ControlState& state, const VectorInstruction& insn,
                    unsigned totalLanes, unsigned wordlines)
{
  const OpShape& shape = shapeOf(insn.op);
  if (insn.dest.has_value() != shape.hasDest || insn.sources.size() != shape.vecSources)
    return "operand count does not match " + std::string(shape.mnemonic);
  if (shape.category == OpCategory::Config)
    return std::nullopt;

  if (state.laneCount() > totalLanes)
    return "lane budget exceeded: " + std::to_string(state.laneCount()) + " > "
      + std::to_string(totalLanes);
  if (!state.dimMask.all() && state.dimCount > 1 && state.dimLength[state.topDim()] > kMaskBits)
    return "highest dimension longer than 256 while the mask is in use";

  unsigned width = insn.type.width;
  if (insn.op == Opcode::Cvt)
    width = std::max(width, insn.srcType.width);
  if (width > state.kernelWidth)
    return "data width " + std::to_string(width) + " exceeds kernel width "
      + std::to_string(state.kernelWidth);

  unsigned capacity = wordlines / state.kernelWidth;
  auto checkReg = [&](unsigned r) -> std::optional<std::string> {
    if (r >= capacity)
      return "register v" + std::to_string(r) + " beyond capacity "
        + std::to_string(capacity);
    return std::nullopt;
  };
  if (insn.dest)
    if (auto v = checkReg(*insn.dest))
      return v;
  for (unsigned r : insn.sources)
    if (auto v = checkReg(r))
      return v;
  if (insn.fullRegister && insn.op != Opcode::StridedLoad && insn.op != Opcode::StridedStore)
    return "full-register access is only defined for strided load/store";
  return std::nullopt;
}

namespace isa
{
  VectorInstruction config(Opcode op, int64_t a0, int64_t a1)
  {
    VectorInstruction i;
    i.op = op;
    i.type = {};
    i.arg0 = a0;
    i.arg1 = a1;
    return i;
  }

  VectorInstruction binary(Opcode op, DataType t, unsigned d, unsigned a, unsigned b)
  {
    VectorInstruction i;
    i.op = op;
    i.type = t;
    i.dest = d;
    i.sources = {a, b};
    return i;
  }

  VectorInstruction unaryImm(Opcode op, DataType t, unsigned d, unsigned a, uint64_t imm)
  {
    VectorInstruction i;
    i.op = op;
    i.type = t;
    i.dest = d;
    i.sources = {a};
    i.imm = imm;
    return i;
  }

  VectorInstruction dup(DataType t, unsigned d, uint64_t bits)
  {
    VectorInstruction i;
    i.op = Opcode::SetDup;
    i.type = t;
    i.dest = d;
    i.imm = bits & widthMask(t.width);
    return i;
  }

  VectorInstruction compare(Opcode op, DataType t, unsigned a, unsigned b)
  {
    VectorInstruction i;
    i.op = op;
    i.type = t;
    i.sources = {a, b};
    return i;
  }

  VectorInstruction copy(DataType t, unsigned d, unsigned s)
  {
    VectorInstruction i;
    i.op = Opcode::Cpy;
    i.type = t;
    i.dest = d;
    i.sources = {s};
    return i;
  }

  VectorInstruction convert(DataType to, DataType from, unsigned d, unsigned s)
  {
    VectorInstruction i = copy(to, d, s);
    i.op = Opcode::Cvt;
    i.srcType = from;
    return i;
  }

  VectorInstruction load(Opcode op, DataType t, unsigned d, uint64_t addr,
                         std::array<unsigned, kMaxDims> modes)
  {
    VectorInstruction i;
    i.op = op;
    i.type = t;
    i.dest = d;
    i.address = addr;
    i.modes = packModes(modes);
    return i;
  }

  VectorInstruction store(Opcode op, DataType t, unsigned s, uint64_t addr,
                          std::array<unsigned, kMaxDims> modes)
  {
    VectorInstruction i;
    i.op = op;
    i.type = t;
    i.sources = {s};
    i.address = addr;
    i.modes = packModes(modes);
    return i;
  }
} // namespace isa

namespace
{

  ProgramItem decodeLine(const std::vector<std::string_view>& toks)
  {
    if (toks[0] == "scalar")
      {
        if (toks.size() < 2 || toks.size() > 3)
          throw Error("scalar marker takes a count and an optional load=<addr>");
        auto n = parseInt(toks[1]);
        if (!n || *n < 0)
          throw Error("bad scalar count");
        ScalarMarker m{uint64_t(*n), std::nullopt};
        if (toks.size() == 3)
          {
            if (toks[2].substr(0, 5) != "load=")
              throw Error("unexpected operand " + std::string(toks[2]));
            auto a = parseInt(toks[2].substr(5));
            if (!a)
              throw Error("bad load address");
            m.loadAddress = uint64_t(*a);
          }
        return m;
      }

    std::string_view head = toks[0];
    std::string_view mnemonic = head.substr(0, head.find('.'));
    auto op = opcodeFromMnemonic(mnemonic);
    if (!op)
      throw Error("unknown opcode '" + std::string(mnemonic) + "'");
    const OpShape& shape = shapeOf(*op);

    VectorInstruction insn;
    insn.op = *op;
    insn.type = {};
    if (shape.category != OpCategory::Config)
      {
        size_t dot = head.find('.');
        if (dot == std::string_view::npos)
          throw Error("missing data type suffix on " + std::string(mnemonic));
        std::string_view rest = head.substr(dot + 1);
        std::string_view first = rest.substr(0, rest.find('.'));
        auto t = DataType::fromSuffix(first);
        if (!t)
          throw Error("unknown data type suffix '" + std::string(first) + "'");
        insn.type = *t;
        if (*op == Opcode::Cvt)
          {
            size_t dot2 = rest.find('.');
            if (dot2 == std::string_view::npos)
              throw Error("vcvt needs destination and source suffixes");
            auto st = DataType::fromSuffix(rest.substr(dot2 + 1));
            if (!st)
              throw Error("unknown source suffix");
            insn.srcType = *st;
          }
        else if (rest.find('.') != std::string_view::npos)
          throw Error("unexpected second suffix");
      }
    else if (head.find('.') != std::string_view::npos)
      throw Error("config instructions take no suffix");

    std::vector<std::string_view> regs, scalars;
    bool haveModes = false;
    for (size_t i = 1; i < toks.size(); ++i)
      {
        std::string_view t = toks[i];
        if (t.substr(0, 6) == "modes=")
          {
            if (!isMemory(*op))
              throw Error("modes= only applies to memory instructions");
            std::array<unsigned, kMaxDims> m{0, 0, 0, 0};
            std::string_view list = t.substr(6);
            unsigned d = 0;
            while (!list.empty())
              {
                size_t c = list.find(',');
                auto v = parseInt(list.substr(0, c));
                if (!v || *v < 0 || *v > 3 || d >= kMaxDims)
                  throw Error("bad stride modes '" + std::string(t) + "'");
                m[d++] = unsigned(*v);
                if (c == std::string_view::npos)
                  break;
                list.remove_prefix(c + 1);
              }
            insn.modes = packModes(m);
            haveModes = true;
          }
        else if (t == "full")
          insn.fullRegister = true;
        else if (parseReg(t))
          {
            if (!scalars.empty())
              throw Error("register operand after scalar operand");
            regs.push_back(t);
          }
        else
          scalars.push_back(t);
      }

    if (isMemory(*op) && !haveModes)
      throw Error("memory instructions need modes=a,b,c,d");

    unsigned wantRegs = shape.vecSources + (shape.hasDest ? 1 : 0);
    if (regs.size() != wantRegs || scalars.size() != shape.scalars)
      throw Error("operand count mismatch for " + std::string(mnemonic) + ": expected "
                  + std::to_string(wantRegs) + " register(s) and "
                  + std::to_string(shape.scalars) + " scalar(s)");

    size_t r = 0;
    if (shape.hasDest)
      insn.dest = *parseReg(regs[r++]);
    for (; r < regs.size(); ++r)
      insn.sources.push_back(*parseReg(regs[r]));

    auto needInt = [](std::string_view s) {
      auto v = parseInt(s);
      if (!v)
        throw Error("bad integer operand '" + std::string(s) + "'");
      return *v;
    };

    if (shape.category == OpCategory::Config)
      {
        insn.arg0 = needInt(scalars[0]);
        if (shape.scalars > 1)
          insn.arg1 = needInt(scalars[1]);
      }
    else if (isMemory(*op))
      insn.address = uint64_t(needInt(scalars[0]));
    else if (shape.scalars == 1)
      {
        std::string_view s = scalars[0];
        bool rawHex = s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
        if (insn.op == Opcode::SetDup && insn.type.isFloat() && !rawHex)
          {
            std::string tmp(s);
            char* end = nullptr;
            double v = std::strtod(tmp.c_str(), &end);
            if (end != tmp.c_str() + tmp.size())
              throw Error("bad float immediate '" + tmp + "'");
            insn.imm = floatBits(v, insn.type.width);
          }
        else
          insn.imm = uint64_t(needInt(s)) & widthMask(insn.type.width);
      }
    return insn;
  }

} // namespace

Program
decodeProgram(std::string_view text)
{
  Program prog;
  size_t lineNo = 0;
  while (!text.empty())
    {
      ++lineNo;
      size_t nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
      line = line.substr(0, line.find('#'));
      auto toks = splitTokens(line);
      if (toks.empty())
        continue;
      try
        {
          prog.push_back(decodeLine(toks));
        }
      catch (const Error& e)
        {
          throw Error("line " + std::to_string(lineNo) + ": " + e.what());
        }
    }
  return prog;
}

std::string
encode(const ProgramItem& item)
{
  std::ostringstream os;
  if (auto* m = std::get_if<ScalarMarker>(&item))
    {
      os << "scalar " << m->count;
      if (m->loadAddress)
        os << " load=" << hex(*m->loadAddress);
      return os.str();
    }
  const auto& insn = std::get<VectorInstruction>(item);
  const OpShape& shape = shapeOf(insn.op);
  os << shape.mnemonic;
  if (shape.category == OpCategory::Config)
    {
      os << ' ' << insn.arg0;
      if (shape.scalars > 1)
        os << ' ' << insn.arg1;
      return os.str();
    }
  os << '.' << insn.type.suffix();
  if (insn.op == Opcode::Cvt)
    os << '.' << insn.srcType.suffix();
  if (insn.dest)
    os << " v" << *insn.dest;
  for (unsigned s : insn.sources)
    os << " v" << s;
  if (isMemory(insn.op))
    {
      os << ' ' << hex(insn.address) << " modes=";
      for (unsigned d = 0; d < kMaxDims; ++d)
        os << (d ? "," : "") << insn.mode(d);
      if (insn.fullRegister)
        os << " full";
    }
  else if (shape.scalars == 1)
    {
      if (insn.op == Opcode::SetDup)
        os << ' ' << hex(insn.imm);
      else
        os << ' ' << insn.imm;
    }
  return os.str();
}

std::string
encodeProgram(const Program& program)
{
  std::string out;
  for (auto& item : program)
    {
      out += encode(item);
      out += '\n';
    }
  return out;
}

} // namespace mve
