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

#include "mve/csv.hpp"

#include <cstdio>

namespace mve::csv
{

namespace
{

  std::string quote(const std::string& s)
  {
    if (s.find_first_of(",\"\n") == std::string::npos)
      return s;
    std::string out = "\"";
    for (char c : s)
      {
        if (c == '"')
          out += '"';
        out += c;
      }
    return out + '"';
  }

  std::string fixed(double v)
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
  }

  std::string opt(const std::optional<double>& v) { return v ? fixed(*v) : std::string(); }

} // namespace

const std::vector<std::string>&
columns()
{
  static const std::vector<std::string> cols = {
    "schema_v" + std::to_string(kSchemaVersion),
    "kernel", "isa", "scheme", "seed", "params", "status",
    "cycles_total", "cycles_idle", "cycles_compute", "cycles_mem",
    "vinsts_config", "vinsts_memory", "vinsts_move", "vinsts_arith", "sinsts",
    "bytes_moved", "utilization", "compute_share", "spills", "fills",
    "cycle_ratio", "vinst_ratio", "utilization_delta", "detail",
  };
  return cols;
}

std::string
header()
{
  std::string out;
  for (const auto& c : columns())
    {
      if (!out.empty())
        out += ',';
      out += c;
    }
  return out;
}

std::string
format(const Row& r)
{
  std::vector<std::string> f;
  f.push_back(std::to_string(kSchemaVersion));
  f.push_back(quote(r.kernel));
  f.push_back(quote(r.isa));
  f.push_back(quote(r.scheme));
  f.push_back(std::to_string(r.seed));
  f.push_back(quote(r.params));
  f.push_back(r.status);
  if (r.stats)
    {
      const SimStats& s = *r.stats;
      for (uint64_t v : {s.totalCycles, s.idle(), s.compute(), s.dataAccess(), s.vinstsConfig,
                         s.vinstsMemory, s.vinstsMove, s.vinstsArith, s.scalarInsts,
                         s.bytesMoved})
        f.push_back(std::to_string(v));
      f.push_back(fixed(s.utilization()));
      f.push_back(fixed(s.computeShare()));
      f.push_back(std::to_string(r.spills));
      f.push_back(std::to_string(r.fills));
    }
  else
    f.resize(f.size() + 14);
  f.push_back(opt(r.cycleRatio));
  f.push_back(opt(r.vinstRatio));
  f.push_back(opt(r.utilizationDelta));
  f.push_back(quote(r.detail));

  std::string out;
  for (size_t i = 0; i < f.size(); ++i)
    {
      if (i)
        out += ',';
      out += f[i];
    }
  return out;
}

void
write(std::ostream& os, const std::vector<Row>& rows)
{
  os << header() << '\n';
  for (const auto& r : rows)
    os << format(r) << '\n';
}

std::vector<std::string>
splitLine(const std::string& line)
{
  std::vector<std::string> out(1);
  bool inQuotes = false;
  for (size_t i = 0; i < line.size(); ++i)
    {
      char c = line[i];
      if (inQuotes)
        {
          if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
            out.back() += '"', ++i;
          else if (c == '"')
            inQuotes = false;
          else
            out.back() += c;
        }
      else if (c == '"')
        inQuotes = true;
      else if (c == ',')
        out.emplace_back();
      else
        out.back() += c;
    }
  return out;
}

} // namespace mve::csv
