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

#include "mve/config.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace mve
{

namespace
{

  std::string_view trim(std::string_view s)
  {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
      s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  }

  uint64_t number(std::string_view key, std::string_view v)
  {
    uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
      throw Error("bad value '" + std::string(v) + "' for " + std::string(key));
    return out;
  }

  template <typename T>
  void set(T& field, std::string_view key, std::string_view v)
  {
    uint64_t n = number(key, v);
    if (n > uint64_t(std::numeric_limits<T>::max()))
      throw Error("value out of range for " + std::string(key));
    field = T(n);
  }

  std::vector<std::string_view> split(std::string_view s, char sep)
  {
    std::vector<std::string_view> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i)
      if (i == s.size() || s[i] == sep)
        {
          out.push_back(s.substr(start, i - start));
          start = i + 1;
        }
    return out;
  }

} // namespace

MachineConfig
Settings::resolve(Scheme scheme) const
{
  MachineConfig m = machine;
  m.scheme = scheme;
  for (const auto& [sc, o] : latency)
    if (sc == scheme)
      m.latencyOverrides.push_back(o);
  return m;
}

void
applySetting(Settings& s, std::string_view key, std::string_view value)
{
  key = trim(key);
  value = trim(value);
  MachineConfig& m = s.machine;

  if (key == "scheme")
    {
      auto sc = schemeFromName(value);
      if (!sc)
        throw Error("unknown scheme '" + std::string(value) + "'");
      m.scheme = *sc;
    }
  else if (key == "geometry.arrays")
    set(m.geometry.numArrays, key, value);
  else if (key == "geometry.bitlines")
    set(m.geometry.bitlinesPerArray, key, value);
  else if (key == "geometry.wordlines")
    set(m.geometry.wordlinesPerArray, key, value);
  else if (key == "geometry.arrays_per_cb")
    set(m.geometry.arraysPerCb, key, value);
  else if (key == "scheme.segment_bits")
    set(m.segmentBits, key, value);
  else if (key == "scheme.ac_bitwise")
    set(m.acBitwise, key, value);
  else if (key == "core.issue_width")
    set(m.core.issueWidth, key, value);
  else if (key == "core.rob_entries")
    set(m.core.robEntries, key, value);
  else if (key == "core.vector_issue_latency")
    set(m.core.vectorIssueLatency, key, value);
  else if (key == "core.queue_entries")
    set(m.core.queueEntries, key, value);
  else if (key == "memory.line_bytes")
    set(m.memory.cacheLineBytes, key, value);
  else if (key == "memory.l2_hit_latency")
    set(m.memory.l2HitLatency, key, value);
  else if (key == "memory.mshr_count")
    set(m.memory.mshrCount, key, value);
  else if (key == "memory.dram_latency")
    set(m.memory.dramLatency, key, value);
  else if (key == "memory.tmu_capacity")
    set(m.memory.tmuCapacityElements, key, value);
  else if (key == "memory.tmu_fill_cycles")
    set(m.memory.tmuFillCycles, key, value);
  else if (key == "memory.l2_capacity")
    set(m.memory.l2RegularCapacity, key, value);
  else if (key.starts_with("residency."))
    {
      std::string buf(key.substr(10));
      if (buf.empty())
        throw Error("missing buffer name in " + std::string(key));
      if (value == "l2")
        s.residency[buf] = Residency::L2Hit;
      else if (value == "dram")
        s.residency[buf] = Residency::Dram;
      else
        throw Error("residency must be l2 or dram, got '" + std::string(value) + "'");
    }
  else if (key.starts_with("latency."))
    {
      auto parts = split(key, '.');
      if (parts.size() != 4 && !(parts.size() == 5 && parts[4] == "f"))
        throw Error("latency keys look like latency.<scheme>.<class>.<width>[.f]: "
                    + std::string(key));
      auto sc = schemeFromName(parts[1]);
      auto cls = opClassFromName(parts[2]);
      if (!sc)
        throw Error("unknown scheme in " + std::string(key));
      if (!cls || *cls == OpClass::None)
        throw Error("unknown operation class in " + std::string(key));
      unsigned width = 0;
      set(width, key, parts[3]);
      uint64_t cycles = number(key, value);
      // Validate eagerly so bad widths surface at parse time.
      TimingModel(*sc).setOverride(*cls, width, parts.size() == 5, cycles);
      s.latency.push_back({*sc, {*cls, width, parts.size() == 5, cycles}});
    }
  else
    throw Error("unknown config key '" + std::string(key) + "'");
}

void
applyConfigText(Settings& s, std::string_view text)
{
  size_t lineNo = 0;
  for (std::string_view line : split(text, '\n'))
    {
      ++lineNo;
      if (auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      line = trim(line);
      if (line.empty())
        continue;
      auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw Error("line " + std::to_string(lineNo) + ": expected key = value");
      try
        {
          applySetting(s, line.substr(0, eq), line.substr(eq + 1));
        }
      catch (const Error& e)
        {
          throw Error("line " + std::to_string(lineNo) + ": " + e.what());
        }
    }
}

void
applyConfigFile(Settings& s, const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  applyConfigText(s, os.str());
}

} // namespace mve
