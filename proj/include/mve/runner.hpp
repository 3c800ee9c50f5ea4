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

#include <map>
#include <optional>
#include <string>

#include "mve/config.hpp"
#include "mve/engine.hpp"
#include "mve/kernels.hpp"

namespace mve
{

  struct RunRequest
  {
    std::string kernel;
    kernels::Isa isa = kernels::Isa::Mve;
    kernels::KernelParams params;
    MachineConfig machine;                      // scheme included
    std::map<std::string, Residency> residency; // pins for absent buffers are ignored
  };

  struct RunReport
  {
    SimStats stats;
    std::optional<std::string> mismatch;        // verification failure
    unsigned spills = 0;
    unsigned fills = 0;
    unsigned registerWidth = 0;
    std::map<std::string, uint64_t> info;
  };

  /// Build, compile, simulate and verify one kernel.
  RunReport execute(const RunRequest& req);

  /// "m=512;n=49" style summary of the parameters a kernel reads.
  std::string paramSummary(std::string_view kernel, const kernels::KernelParams& p);

} // namespace mve
