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

#include "mve/engine.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

namespace mve
{

void
MachineConfig::check() const
{
  geometry.check();
  memory.check(geometry);
  if (core.issueWidth == 0 || core.vectorIssueLatency == 0)
    throw Error("core issue width and vector issue latency must be positive");
  (void)timingModel();
}

TimingModel
MachineConfig::timingModel() const
{
  TimingModel tm(scheme, geometry.bitlinesPerArray, segmentBits, acBitwise);
  for (const auto& o : latencyOverrides)
    tm.setOverride(o.cls, o.width, o.isFloat, o.cycles);
  return tm;
}

uint64_t
SimStats::idle() const
{
  uint64_t s = 0;
  for (const auto& c : perCb)
    s += c.idle;
  return s;
}

uint64_t
SimStats::compute() const
{
  uint64_t s = 0;
  for (const auto& c : perCb)
    s += c.compute;
  return s;
}

uint64_t
SimStats::dataAccess() const
{
  uint64_t s = 0;
  for (const auto& c : perCb)
    s += c.dataAccess;
  return s;
}

double
SimStats::utilization() const
{
  if (totalCycles == 0 || perCb.empty())
    return 0.0;
  double s = 0;
  for (const auto& c : perCb)
    s += double(c.compute + c.dataAccess) / double(totalCycles);
  return s / double(perCb.size());
}

double
SimStats::computeShare() const
{
  if (totalCycles == 0 || perCb.empty())
    return 0.0;
  double s = 0;
  for (const auto& c : perCb)
    s += double(c.compute) / double(totalCycles);
  return s / double(perCb.size());
}

namespace
{

  struct PendingStore
  {
    uint64_t lo, hi, done;
  };

  std::string queueSnapshot(const std::priority_queue<uint64_t, std::vector<uint64_t>,
                                                      std::greater<>>& q)
  {
    std::ostringstream os;
    os << q.size() << " entries";
    if (!q.empty())
      os << ", oldest completes at cycle " << q.top();
    return os.str();
  }

} // namespace

SimResult
run(const Program& program, const MachineConfig& machine, Memory memory, const BufferMap& buffers,
    RunOptions opts)
{
  machine.check();
  const EngineGeometry& geom = machine.geometry;
  const unsigned cbs = geom.cbCount();
  const unsigned lanesPerCb = geom.lanesPerCb();
  const TimingModel timing = machine.timingModel();
  const unsigned capacity = std::min(machine.core.queueEntries, machine.core.robEntries);

  FunctionalMachine fm(std::move(memory),
                       MachineOptions{geom, opts.unboundedRegisters, true});

  SimResult res;
  SimStats& st = res.stats;
  st.perCb.assign(cbs, {});

  std::vector<uint64_t> cbFree(cbs, 0);
  uint64_t now = 0;          // core clock
  uint64_t memBarrier = 0;   // completion of the last memory instruction on all CBs
  std::priority_queue<uint64_t, std::vector<uint64_t>, std::greater<>> inflight;
  std::vector<PendingStore> writeBuffer;
  size_t vindex = 0;

  for (const auto& item : program)
    {
      if (const auto* sm = std::get_if<ScalarMarker>(&item))
        {
          std::erase_if(writeBuffer, [&](const PendingStore& p) { return p.done <= now; });
          if (sm->loadAddress)
            for (const auto& p : writeBuffer)
              if (*sm->loadAddress >= p.lo && *sm->loadAddress < p.hi)
                now = std::max(now, p.done);
          now += machine.core.scalarCycles(sm->count);
          st.scalarInsts += sm->count;
          continue;
        }

      const auto& insn = std::get<VectorInstruction>(item);
      while (!inflight.empty() && inflight.top() <= now)
        inflight.pop();
      if (capacity == 0)
        throw Error("deadlock: instruction queue has no capacity; " + queueSnapshot(inflight));
      while (inflight.size() >= capacity)
        {
          now = std::max(now, inflight.top());
          inflight.pop();
        }

      const uint64_t issue = now;
      now += machine.core.vectorIssueLatency;

      StepResult step = fm.step(insn);
      switch (categoryOf(insn.op))
        {
        case OpCategory::Config: ++st.vinstsConfig; break;
        case OpCategory::Memory: ++st.vinstsMemory; break;
        case OpCategory::Move: ++st.vinstsMove; break;
        case OpCategory::Arithmetic: ++st.vinstsArith; break;
        }

      ScheduleRecord rec{vindex++, insn.op,
                         isMemory(insn.op) ? WorkKind::Memory : WorkKind::Compute,
                         issue, issue, std::vector<bool>(cbs, false), {}};

      if (!isConfig(insn.op))
        {
          for (unsigned c = 0; c < cbs; ++c)
            for (unsigned l = c * lanesPerCb; l < (c + 1) * lanesPerCb; ++l)
              if (step.enable[l])
                {
                  rec.cbMask[c] = true;
                  break;
                }

          if (isMemory(insn.op))
            {
              AccessTiming at = accessTime(*step.plan, insn.type.width, geom, machine.memory,
                                           buffers);
              st.bytesMoved += at.totalBytes();
              uint64_t end = issue;
              for (unsigned c = 0; c < cbs; ++c)
                if (rec.cbMask[c] && at.perCb[c].cycles > 0)
                  {
                    uint64_t s = std::max({issue, cbFree[c], memBarrier});
                    uint64_t e = s + at.perCb[c].cycles;
                    cbFree[c] = e;
                    st.perCb[c].dataAccess += at.perCb[c].cycles;
                    rec.intervals.push_back({c, s, e});
                    end = std::max(end, e);
                  }
                else
                  rec.cbMask[c] = false;
              memBarrier = std::max(memBarrier, end);
              rec.dequeue = end;

              if (isStore(insn.op))
                {
                  PendingStore ps{0, UINT64_MAX, end};
                  if (insn.fullRegister)
                    {
                      ps.lo = insn.address;
                      ps.hi = insn.address + uint64_t(geom.totalLanes()) * insn.type.bytes();
                    }
                  else if (!isRandom(insn.op))
                    {
                      auto strides = resolveModes(step.before, insn.modes, Direction::Store);
                      std::tie(ps.lo, ps.hi) = addressRange(step.before, insn.address, strides,
                                                            insn.type.bytes());
                    }
                  writeBuffer.push_back(ps);
                }
            }
          else
            {
              const uint64_t lat = timing.latency(insn);
              uint64_t end = issue;
              for (unsigned c = 0; c < cbs; ++c)
                if (rec.cbMask[c])
                  {
                    uint64_t s = std::max(issue, cbFree[c]);
                    uint64_t e = s + lat;
                    cbFree[c] = e;
                    st.perCb[c].compute += lat;
                    rec.intervals.push_back({c, s, e});
                    end = std::max(end, e);
                  }
              rec.dequeue = end;
            }
        }

      inflight.push(rec.dequeue);
      if (opts.recordSchedule)
        res.schedule.push_back(std::move(rec));
    }

  uint64_t makespan = now;
  for (uint64_t f : cbFree)
    makespan = std::max(makespan, f);
  if (st.vectorInsts() == 0 && st.scalarInsts == 0)
    makespan = 0;
  st.totalCycles = makespan;
  for (auto& c : st.perCb)
    c.idle = makespan - c.compute - c.dataAccess;

  res.memory = std::move(fm.memory());
  return res;
}

} // namespace mve
