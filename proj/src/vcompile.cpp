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

#include "mve/vcompile.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace mve::vcompile
{

namespace
{

  struct Access
  {
    std::vector<unsigned> uses;     // unique, includes a merged destination
    std::optional<unsigned> def;
    bool firstDef = false;
  };

  const VectorInstruction* vec(const ProgramItem& item)
  {
    return std::get_if<VectorInstruction>(&item);
  }

  bool isBarrier(const ProgramItem& item)
  {
    const auto* v = vec(item);
    return !v || isConfig(v->op) || isCompare(v->op);
  }

  std::vector<Access> accesses(const Program& trace)
  {
    std::vector<Access> out(trace.size());
    std::unordered_set<unsigned> defined;
    for (size_t i = 0; i < trace.size(); ++i)
      {
        const auto* v = vec(trace[i]);
        if (!v || isConfig(v->op))
          continue;
        Access& a = out[i];
        for (unsigned s : v->sources)
          if (std::find(a.uses.begin(), a.uses.end(), s) == a.uses.end())
            a.uses.push_back(s);
        if (v->dest)
          {
            a.def = *v->dest;
            a.firstDef = defined.insert(*v->dest).second;
            if (!a.firstDef
                && std::find(a.uses.begin(), a.uses.end(), *v->dest) == a.uses.end())
              a.uses.push_back(*v->dest);
          }
      }
    return out;
  }

  unsigned dataWidth(const VectorInstruction& v)
  {
    if (isConfig(v.op))
      return v.op == Opcode::SetWidth ? unsigned(v.arg0) : 0;
    unsigned w = v.type.width;
    if (v.op == Opcode::Cvt)
      w = std::max(w, v.srcType.width);
    return w;
  }

  VectorInstruction fullRegisterAccess(bool load, DataType t, unsigned reg, uint64_t addr)
  {
    VectorInstruction i;
    i.op = load ? Opcode::StridedLoad : Opcode::StridedStore;
    i.type = t;
    if (load)
      i.dest = reg;
    else
      i.sources = {reg};
    i.address = addr;
    i.fullRegister = true;
    return i;
  }

} // namespace

Liveness
liveness(const Program& trace)
{
  auto acc = accesses(trace);
  Liveness lv;
  std::unordered_map<unsigned, size_t> index;
  std::vector<size_t> last;
  auto rangeOf = [&](unsigned v, size_t i) -> LiveRange& {
    auto [it, fresh] = index.try_emplace(v, lv.ranges.size());
    if (fresh)
      lv.ranges.push_back({v, i, i, 0, 0});
    return lv.ranges[it->second];
  };
  for (size_t i = 0; i < trace.size(); ++i)
    {
      const Access& a = acc[i];
      const auto* v = vec(trace[i]);
      for (unsigned u : a.uses)
        {
          if (!index.count(u))
            throw Error("register v" + std::to_string(u) + " used before definition at item "
                        + std::to_string(i));
          LiveRange& r = rangeOf(u, i);
          r.lastUse = i;
          ++r.useCount;
          r.widthBits = std::max(r.widthBits, dataWidth(*v));
        }
      if (a.def)
        {
          LiveRange& r = rangeOf(*a.def, i);
          r.lastUse = std::max(r.lastUse, i);
          r.widthBits = std::max(r.widthBits, dataWidth(*v));
        }
    }

  std::unordered_set<unsigned> live;
  lv.requirement.resize(trace.size());
  lv.liveBefore.resize(trace.size());
  for (size_t i = 0; i < trace.size(); ++i)
    {
      const Access& a = acc[i];
      lv.liveBefore[i] = unsigned(live.size());
      unsigned s = unsigned(a.uses.size());
      unsigned lt = unsigned(live.size()) - s;
      unsigned dying = 0;
      for (unsigned u : a.uses)
        if (lv.ranges[index[u]].lastUse == i)
          ++dying;
      unsigned d = a.firstDef ? 1 : 0;
      unsigned req = std::max(lt + s, lt + (s - dying) + d);
      lv.requirement[i] = req;
      lv.peak = std::max(lv.peak, req);
      for (unsigned u : a.uses)
        if (lv.ranges[index[u]].lastUse == i)
          live.erase(u);
      if (a.firstDef && lv.ranges[index[*a.def]].lastUse > i)
        live.insert(*a.def);
    }
  return lv;
}

unsigned
detectWidth(const Program& trace)
{
  unsigned w = 0;
  for (const auto& item : trace)
    if (const auto* v = vec(item))
      w = std::max(w, dataWidth(*v));
  return w;
}

Program
injectWidth(const Program& trace)
{
  unsigned w = detectWidth(trace);
  if (w == 0)
    return trace;
  Program out;
  out.reserve(trace.size() + 1);
  out.push_back(isa::config(Opcode::SetWidth, w));
  out.insert(out.end(), trace.begin(), trace.end());
  return out;
}

uint64_t
slotBytes(unsigned totalLanes)
{
  return uint64_t(totalLanes) * 8;
}

AllocResult
allocate(const Program& trace, const AllocOptions& opts)
{
  if (opts.capacity == 0)
    throw Error("register capacity is zero");
  auto acc = accesses(trace);

  std::unordered_map<unsigned, std::vector<size_t>> apps;
  for (size_t i = 0; i < trace.size(); ++i)
    {
      for (unsigned u : acc[i].uses)
        apps[u].push_back(i);
      if (acc[i].def && acc[i].firstDef)
        apps[*acc[i].def].push_back(i);
    }
  for (auto& [v, list] : apps)
    {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  auto nextUse = [&](unsigned v, size_t i) -> size_t {
    const auto& l = apps[v];
    auto it = std::upper_bound(l.begin(), l.end(), i);
    return it == l.end() ? SIZE_MAX : *it;
  };
  auto lastApp = [&](unsigned v) { return apps[v].back(); };

  struct VState
  {
    std::optional<unsigned> phys;
    std::optional<unsigned> slot;
    bool dirty = false;
    bool defined = false;
    size_t lastAccess = 0;
    DataType type{};
  };
  std::unordered_map<unsigned, VState> vs;
  std::vector<std::optional<unsigned>> owner(opts.capacity);
  std::set<unsigned> freeRegs;
  for (unsigned p = 0; p < opts.capacity; ++p)
    freeRegs.insert(p);

  AllocResult res;
  res.program.reserve(trace.size());
  const uint64_t slotSize = slotBytes(opts.totalLanes);

  auto release = [&](unsigned v) {
    VState& s = vs[v];
    if (s.phys)
      {
        owner[*s.phys] = std::nullopt;
        freeRegs.insert(*s.phys);
        s.phys.reset();
      }
  };

  auto evict = [&](size_t i, const std::vector<unsigned>& pinned) {
    std::optional<unsigned> victim;
    size_t best = 0;
    for (unsigned p = 0; p < opts.capacity; ++p)
      {
        if (!owner[p])
          continue;
        unsigned v = *owner[p];
        if (std::find(pinned.begin(), pinned.end(), v) != pinned.end())
          continue;
        size_t key = opts.policy == VictimPolicy::FurthestNextUse
                         ? nextUse(v, i)
                         : SIZE_MAX - vs[v].lastAccess;
        if (!victim || key > best)
          {
            victim = v;
            best = key;
          }
      }
    if (!victim)
      throw Error("register allocation infeasible: instruction at item " + std::to_string(i)
                  + " needs more than " + std::to_string(opts.capacity) + " registers");
    VState& s = vs[*victim];
    if (s.dirty && nextUse(*victim, i) != SIZE_MAX)
      {
        if (!s.slot)
          s.slot = res.slots++;
        res.program.push_back(fullRegisterAccess(false, s.type, *s.phys,
                                                 opts.spillBase + *s.slot * slotSize));
        ++res.spills;
        s.dirty = false;
      }
    release(*victim);
  };

  auto acquire = [&](size_t i, const std::vector<unsigned>& pinned) {
    if (freeRegs.empty())
      evict(i, pinned);
    unsigned p = *freeRegs.begin();
    freeRegs.erase(freeRegs.begin());
    return p;
  };

  for (size_t i = 0; i < trace.size(); ++i)
    {
      const auto* v = vec(trace[i]);
      if (!v || isConfig(v->op))
        {
          res.program.push_back(trace[i]);
          continue;
        }
      const Access& a = acc[i];
      std::vector<unsigned> pinned = a.uses;
      if (a.def)
        pinned.push_back(*a.def);
      size_t alive = 0;
      for (unsigned u : a.uses)
        alive += lastApp(u) > i || (a.def && *a.def == u);
      bool freshDef = a.def && std::find(a.uses.begin(), a.uses.end(), *a.def) == a.uses.end();
      size_t need = std::max(a.uses.size(), alive + (freshDef ? 1 : 0));
      if (need > opts.capacity)
        throw Error("register allocation infeasible: instruction at item " + std::to_string(i)
                    + " needs " + std::to_string(need) + " registers");

      for (unsigned u : a.uses)
        {
          VState& s = vs[u];
          if (!s.defined)
            throw Error("register v" + std::to_string(u) + " used before definition at item "
                        + std::to_string(i));
          if (!s.phys)
            {
              unsigned p = acquire(i, pinned);
              s.phys = p;
              owner[p] = u;
              res.program.push_back(fullRegisterAccess(true, s.type, p,
                                                       opts.spillBase + *s.slot * slotSize));
              ++res.fills;
            }
          s.lastAccess = i;
        }

      VectorInstruction out = *v;
      for (auto& src : out.sources)
        src = *vs[src].phys;

      for (unsigned u : a.uses)
        if (lastApp(u) == i && (!a.def || *a.def != u))
          release(u);

      if (a.def)
        {
          VState& s = vs[*a.def];
          if (!s.phys)
            {
              unsigned p = acquire(i, pinned);
              s.phys = p;
              owner[p] = *a.def;
            }
          s.defined = true;
          s.dirty = true;
          s.type = v->type;
          s.lastAccess = i;
          out.dest = *s.phys;
        }
      res.program.push_back(std::move(out));

      if (a.def && lastApp(*a.def) == i)
        release(*a.def);
    }
  res.scratchBytes = res.slots * slotSize;
  return res;
}

namespace
{

  struct Region
  {
    size_t begin, end;   // item indices [begin, end)
  };

  std::vector<Region> regions(const Program& trace)
  {
    std::vector<Region> out;
    size_t start = 0;
    for (size_t i = 0; i <= trace.size(); ++i)
      if (i == trace.size() || isBarrier(trace[i]))
        {
          if (i > start + 1)
            out.push_back({start, i});
          start = i + 1;
        }
    return out;
  }

  /// Dependency graph and pressure bookkeeping for one region.
  struct RegionGraph
  {
    size_t n = 0;
    std::vector<std::vector<size_t>> succ, pred;
    std::vector<Access> acc;
    std::set<unsigned> liveIn, liveOut;
    std::map<unsigned, unsigned> useCount;
    unsigned offset = 0;

    unsigned peakOf(const std::vector<size_t>& order) const
    {
      std::set<unsigned> live = liveIn;
      auto rem = useCount;
      unsigned peak = 0;
      for (size_t k : order)
        {
          const Access& a = acc[k];
          unsigned s = unsigned(a.uses.size());
          unsigned dying = 0;
          for (unsigned u : a.uses)
            if (rem[u] == 1 && !liveOut.count(u))
              ++dying;
          unsigned lt = unsigned(live.size()) - s;
          unsigned d = a.firstDef ? 1 : 0;
          peak = std::max(peak, offset + std::max(lt + s, lt + (s - dying) + d));
          for (unsigned u : a.uses)
            if (--rem[u] == 0 && !liveOut.count(u))
              live.erase(u);
          if (a.firstDef && (rem[*a.def] > 0 || liveOut.count(*a.def)))
            live.insert(*a.def);
        }
      return peak;
    }
  };

  RegionGraph buildGraph(const Program& trace, const std::vector<Access>& acc, Region r,
                         const std::vector<size_t>& lastApp, unsigned liveBefore)
  {
    RegionGraph g;
    g.n = r.end - r.begin;
    g.succ.resize(g.n);
    g.pred.resize(g.n);
    g.acc.assign(acc.begin() + long(r.begin), acc.begin() + long(r.end));

    auto edge = [&](size_t a, size_t b) {
      if (std::find(g.succ[a].begin(), g.succ[a].end(), b) == g.succ[a].end())
        {
          g.succ[a].push_back(b);
          g.pred[b].push_back(a);
        }
    };
    std::map<unsigned, size_t> lastDef;
    std::map<unsigned, std::vector<size_t>> usesSince;
    std::optional<size_t> lastMem;
    std::set<unsigned> definedHere;
    for (size_t k = 0; k < g.n; ++k)
      {
        const Access& a = g.acc[k];
        for (unsigned u : a.uses)
          {
            if (auto it = lastDef.find(u); it != lastDef.end())
              edge(it->second, k);
            else if (!definedHere.count(u))
              g.liveIn.insert(u);
            usesSince[u].push_back(k);
            ++g.useCount[u];
          }
        if (a.def)
          {
            unsigned d = *a.def;
            if (auto it = lastDef.find(d); it != lastDef.end())
              edge(it->second, k);
            for (size_t u : usesSince[d])
              if (u != k)
                edge(u, k);
            usesSince[d].clear();
            lastDef[d] = k;
            definedHere.insert(d);
            g.useCount.try_emplace(d, 0);
          }
        const auto* v = vec(trace[r.begin + k]);
        if (isMemory(v->op))
          {
            if (lastMem)
              edge(*lastMem, k);
            lastMem = k;
          }
      }
    for (const auto& [v, cnt] : g.useCount)
      if (lastApp[v] >= r.end)
        g.liveOut.insert(v);
    g.offset = liveBefore - unsigned(g.liveIn.size());
    return g;
  }

  std::vector<size_t> greedyBottomUp(const RegionGraph& g, unsigned capacity)
  {
    std::vector<size_t> pendingSucc(g.n);
    for (size_t k = 0; k < g.n; ++k)
      pendingSucc[k] = g.succ[k].size();
    std::set<unsigned> live = g.liveOut;
    std::vector<bool> done(g.n, false);
    std::vector<size_t> rev;
    rev.reserve(g.n);
    for (size_t step = 0; step < g.n; ++step)
      {
        std::optional<size_t> pick;
        std::tuple<int, long, long> best{};
        for (size_t k = 0; k < g.n; ++k)
          {
            if (done[k] || pendingSucc[k] != 0)
              continue;
            const Access& a = g.acc[k];
            std::set<unsigned> next = live;
            if (a.firstDef)
              next.erase(*a.def);
            for (unsigned u : a.uses)
              next.insert(u);
            long after = long(next.size()) + long(g.offset);
            std::tuple<int, long, long> key{after > long(capacity) ? 1 : 0,
                                            long(next.size()) - long(live.size()), -long(k)};
            if (!pick || key < best)
              {
                pick = k;
                best = key;
              }
          }
        size_t k = *pick;
        done[k] = true;
        rev.push_back(k);
        const Access& a = g.acc[k];
        if (a.firstDef)
          live.erase(*a.def);
        for (unsigned u : a.uses)
          live.insert(u);
        for (size_t p : g.pred[k])
          --pendingSucc[p];
      }
    std::reverse(rev.begin(), rev.end());
    return rev;
  }

  void branchAndBound(const RegionGraph& g, std::vector<size_t>& cur, std::vector<size_t>& preds,
                      std::vector<bool>& done, std::vector<size_t>& best, unsigned& bestPeak)
  {
    if (cur.size() == g.n)
      {
        unsigned p = g.peakOf(cur);
        if (p < bestPeak)
          {
            bestPeak = p;
            best = cur;
          }
        return;
      }
    if (!cur.empty() && g.peakOf(cur) >= bestPeak)
      return;
    for (size_t k = 0; k < g.n; ++k)
      {
        if (done[k] || preds[k] != 0)
          continue;
        done[k] = true;
        cur.push_back(k);
        for (size_t s : g.succ[k])
          --preds[s];
        branchAndBound(g, cur, preds, done, best, bestPeak);
        for (size_t s : g.succ[k])
          ++preds[s];
        cur.pop_back();
        done[k] = false;
      }
  }

  constexpr size_t kExactLimit = 12;
  constexpr size_t kGreedyLimit = 1024;

} // namespace

Program
schedule(const Program& trace, unsigned capacity)
{
  auto acc = accesses(trace);
  Liveness lv = liveness(trace);
  std::unordered_map<unsigned, size_t> lastAppMap;
  for (const auto& r : lv.ranges)
    lastAppMap[r.vreg] = r.lastUse;
  unsigned maxReg = 0;
  for (const auto& r : lv.ranges)
    maxReg = std::max(maxReg, r.vreg);
  std::vector<size_t> lastApp(lv.ranges.empty() ? 0 : maxReg + 1, 0);
  for (const auto& [v, l] : lastAppMap)
    lastApp[v] = l;

  Program out = trace;
  for (const Region& r : regions(trace))
    {
      RegionGraph g = buildGraph(trace, acc, r, lastApp, lv.liveBefore[r.begin]);
      std::vector<size_t> original(g.n);
      for (size_t k = 0; k < g.n; ++k)
        original[k] = k;
      unsigned origPeak = g.peakOf(original);
      if (origPeak <= capacity || g.n > kGreedyLimit)
        continue;

      std::vector<size_t> order = greedyBottomUp(g, capacity);
      unsigned peak = g.peakOf(order);
      if (peak > capacity && g.n <= kExactLimit)
        {
          std::vector<size_t> cur, best = order;
          std::vector<size_t> preds(g.n);
          for (size_t k = 0; k < g.n; ++k)
            preds[k] = g.pred[k].size();
          std::vector<bool> done(g.n, false);
          unsigned bestPeak = peak;
          branchAndBound(g, cur, preds, done, best, bestPeak);
          order = best;
          peak = bestPeak;
        }
      if (peak >= origPeak)
        continue;
      for (size_t k = 0; k < g.n; ++k)
        out[r.begin + k] = trace[r.begin + order[k]];
    }
  return out;
}

bool
respectsDependencies(const Program& before, const Program& after)
{
  if (before.size() != after.size())
    return false;
  // Match identical items by occurrence order.
  std::map<std::string, std::vector<size_t>> byText;
  for (size_t i = 0; i < before.size(); ++i)
    byText[encode(before[i])].push_back(i);
  std::map<std::string, size_t> seen;
  std::vector<size_t> pos(before.size(), SIZE_MAX);
  for (size_t j = 0; j < after.size(); ++j)
    {
      std::string key = encode(after[j]);
      auto it = byText.find(key);
      size_t& n = seen[key];
      if (it == byText.end() || n >= it->second.size())
        return false;
      pos[it->second[n++]] = j;
    }

  // Barriers stay put relative to everything.
  size_t region = 0;
  std::vector<size_t> regionOf(before.size());
  for (size_t i = 0; i < before.size(); ++i)
    {
      if (isBarrier(before[i]))
        {
          if (pos[i] != i)
            return false;
          ++region;
        }
      regionOf[i] = region;
    }
  for (size_t i = 0; i < before.size(); ++i)
    if (!isBarrier(before[i]))
      {
        size_t j = pos[i];
        if (isBarrier(before[j]) || regionOf[j] != regionOf[i])
          return false;
      }

  auto acc = accesses(before);
  for (size_t i = 0; i < before.size(); ++i)
    for (size_t k = i + 1; k < before.size() && regionOf[k] == regionOf[i]; ++k)
      {
        if (isBarrier(before[i]) || isBarrier(before[k]))
          continue;
        const Access& a = acc[i];
        const Access& b = acc[k];
        bool dep = isMemory(vec(before[i])->op) && isMemory(vec(before[k])->op);
        auto has = [](const std::vector<unsigned>& l, unsigned v) {
          return std::find(l.begin(), l.end(), v) != l.end();
        };
        if (a.def && (has(b.uses, *a.def) || (b.def && *b.def == *a.def)))
          dep = true;
        if (b.def && has(a.uses, *b.def))
          dep = true;
        if (dep && pos[i] > pos[k])
          return false;
      }
  return true;
}

Compiled
compile(const Program& trace, const CompileOptions& opts)
{
  Compiled c;
  c.width = detectWidth(trace);
  if (c.width == 0)
    {
      c.program = trace;
      return c;
    }
  c.capacity = opts.wordlines / c.width;
  Program t = injectWidth(trace);
  if (opts.schedule)
    t = schedule(t, c.capacity);
  c.peakVirtual = liveness(t).peak;
  AllocResult a = allocate(t, {c.capacity, opts.spillBase, opts.totalLanes,
                               VictimPolicy::FurthestNextUse});
  c.program = std::move(a.program);
  c.spills = a.spills;
  c.fills = a.fills;
  c.scratchBytes = a.scratchBytes;
  return c;
}

} // namespace mve::vcompile
