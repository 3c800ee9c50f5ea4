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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mve/engine.hpp"

namespace mve::csv
{

  /// Bumped whenever columns are added, removed or change meaning.
  inline constexpr unsigned kSchemaVersion = 1;

  struct Row
  {
    std::string kernel;
    std::string isa;
    std::string scheme;
    uint64_t seed = 0;
    std::string params;
    std::string status = "ok";   // ok, mismatch or error
    std::string detail;          // first failure message, if any
    std::optional<SimStats> stats;
    unsigned spills = 0;
    unsigned fills = 0;
    /// Relative to the matching mve row; set by compare.
    std::optional<double> cycleRatio;
    std::optional<double> vinstRatio;
    std::optional<double> utilizationDelta;
  };

  const std::vector<std::string>& columns();

  /// Header line; the first column name carries the schema version.
  std::string header();
  std::string format(const Row& row);

  void write(std::ostream& os, const std::vector<Row>& rows);

  /// Parse a line produced by `format` back into fields (quotes handled).
  std::vector<std::string> splitLine(const std::string& line);

} // namespace mve::csv
