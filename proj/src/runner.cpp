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

#include "mve/runner.hpp"

#include <sstream>

namespace mve
{

RunReport
execute(const RunRequest& req)
{
  req.machine.check();
  kernels::KernelInstance k = kernels::build(req.kernel, req.isa, req.params);
  kernels::Prepared prep = kernels::prepare(k, req.machine.geometry);
  for (const auto& [name, where] : req.residency)
    for (const auto& b : prep.buffers.buffers())
      if (b.name == name)
        {
          prep.buffers.pin(name, where);
          break;
        }

  SimResult sim = run(prep.program, req.machine, prep.memory, prep.buffers);

  RunReport out;
  out.stats = sim.stats;
  out.mismatch = kernels::verify(k, sim.memory);
  out.spills = prep.compiled.spills;
  out.fills = prep.compiled.fills;
  out.registerWidth = prep.compiled.width;
  out.info = k.info;
  return out;
}

std::string
paramSummary(std::string_view kernel, const kernels::KernelParams& p)
{
  std::ostringstream os;
  if (kernel == "transpose")
    os << "m=" << p.m << ";n=" << p.n;
  else if (kernel == "gemm")
    os << "m=" << p.m << ";n=" << p.n << ";k=" << p.k << ";dtype=" << p.dtype.suffix();
  else if (kernel == "reduction" || kernel == "axpy")
    os << "len=" << p.len;
  else if (kernel == "upsample")
    os << "rows=" << p.rows << ";cols=" << p.cols;
  else if (kernel == "spmm")
    os << "rows=" << p.rows << ";inner=" << p.inner << ";cols=" << p.cols
       << ";density=" << p.density;
  return os.str();
}

} // namespace mve
