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

#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "mve/config.hpp"
#include "mve/csv.hpp"
#include "mve/isa.hpp"
#include "mve/kernels.hpp"
#include "mve/runner.hpp"
#include "mve/vcompile.hpp"

namespace mvesim
{

namespace
{

  using namespace mve;
  namespace kn = mve::kernels;

  struct UsageError : std::runtime_error
  {
    using std::runtime_error::runtime_error;
  };

  struct Options
  {
    std::optional<std::string> kernels;
    std::optional<std::string> isas;
    std::optional<std::string> schemes;
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    uint64_t seed = 0;
    std::string seeds;
    bool quick = false;
    bool virtualTrace = false;

    std::optional<unsigned> m, n, k, len, rows, cols, inner;
    std::optional<double> density;
    std::optional<std::string> dtype;
  };

  std::vector<std::string> splitList(const std::string& s)
  {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
      {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos)
          out.push_back(item.substr(b, e - b + 1));
      }
    return out;
  }

  std::vector<std::string> kernelList(const Options& o, bool defaultAll)
  {
    if (!o.kernels)
      {
        if (defaultAll)
          return kn::defaultSet();
        throw UsageError("--kernel is required");
      }
    std::vector<std::string> out;
    for (const auto& name : splitList(*o.kernels))
      {
        if (name == "all")
          {
            for (const auto& k : kn::defaultSet())
              out.push_back(k);
            continue;
          }
        try
          {
            kn::lookup(name);
          }
        catch (const Error&)
          {
            throw UsageError("unknown kernel '" + name + "'");
          }
        out.push_back(name);
      }
    return out;
  }

  std::vector<kn::Isa> isaList(const Options& o, const std::string& fallback)
  {
    std::vector<kn::Isa> out;
    for (const auto& name : splitList(o.isas.value_or(fallback)))
      {
        if (name == "all")
          {
            out.push_back(kn::Isa::Mve);
            out.push_back(kn::Isa::Rvv1d);
            continue;
          }
        auto isa = kn::isaFromName(name);
        if (!isa)
          throw UsageError("unknown isa '" + name + "'");
        out.push_back(*isa);
      }
    return out;
  }

  std::vector<Scheme> schemeList(const Options& o, const std::string& fallback)
  {
    std::vector<Scheme> out;
    for (const auto& name : splitList(o.schemes.value_or(fallback)))
      {
        if (name == "all")
          {
            for (Scheme s : {Scheme::BitSerial, Scheme::BitParallel, Scheme::BitHybrid,
                             Scheme::Associative})
              out.push_back(s);
            continue;
          }
        auto s = schemeFromName(name);
        if (!s)
          throw UsageError("unknown scheme '" + name + "'");
        out.push_back(*s);
      }
    return out;
  }

  std::vector<uint64_t> seedList(const Options& o)
  {
    if (o.seeds.empty())
      return {o.seed};
    std::vector<uint64_t> out;
    for (const auto& item : splitList(o.seeds))
      {
        try
          {
            auto dash = item.find('-');
            if (dash == std::string::npos)
              out.push_back(std::stoull(item));
            else
              for (uint64_t s = std::stoull(item.substr(0, dash)),
                            e = std::stoull(item.substr(dash + 1));
                   s <= e; ++s)
                out.push_back(s);
          }
        catch (const std::logic_error&)
          {
            throw UsageError("bad seed list '" + o.seeds + "'");
          }
      }
    return out;
  }

  Settings loadSettings(const Options& o)
  {
    Settings s;
    try
      {
        if (!o.config.empty())
          applyConfigFile(s, o.config);
        for (const auto& kv : o.sets)
          {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
              throw Error("--set expects key=value, got '" + kv + "'");
            applySetting(s, kv.substr(0, eq), kv.substr(eq + 1));
          }
        s.machine.check();
      }
    catch (const Error& e)
      {
        throw UsageError(e.what());
      }
    return s;
  }

  kn::KernelParams params(const Options& o, const std::string& kernel, uint64_t seed)
  {
    kn::KernelParams p = o.quick ? kn::quickParams(kernel) : kn::defaultParams(kernel);
    bool aliasRowsCols = kernel == "gemm" || kernel == "transpose";
    if (o.rows)
      (aliasRowsCols ? p.m : p.rows) = *o.rows;
    if (o.cols)
      (aliasRowsCols ? p.n : p.cols) = *o.cols;
    if (o.m)
      p.m = *o.m;
    if (o.n)
      p.n = *o.n;
    if (o.k)
      p.k = *o.k;
    if (o.len)
      p.len = *o.len;
    if (o.inner)
      p.inner = *o.inner;
    if (o.density)
      p.density = *o.density;
    if (o.dtype)
      {
        auto t = DataType::fromSuffix(*o.dtype);
        if (!t)
          throw UsageError("unknown dtype '" + *o.dtype + "'");
        p.dtype = *t;
      }
    p.seed = seed;
    return p;
  }

  csv::Row runRow(const Settings& s, const std::string& kernel, kn::Isa isa, Scheme scheme,
                  const kn::KernelParams& p)
  {
    csv::Row row;
    row.kernel = kernel;
    row.isa = std::string(kn::isaName(isa));
    row.scheme = std::string(schemeName(scheme));
    row.seed = p.seed;
    row.params = paramSummary(kernel, p);
    try
      {
        RunRequest req{kernel, isa, p, s.resolve(scheme), s.residency};
        RunReport rep = execute(req);
        row.stats = rep.stats;
        row.spills = rep.spills;
        row.fills = rep.fills;
        if (rep.mismatch)
          {
            row.status = "mismatch";
            row.detail = *rep.mismatch;
          }
      }
    catch (const std::exception& e)
      {
        row.status = "error";
        row.detail = e.what();
      }
    return row;
  }

  void emit(const Options& o, std::ostream& out, const std::string& text)
  {
    if (o.out.empty())
      {
        out << text;
        return;
      }
    std::ofstream f(o.out, std::ios::binary);
    if (!f)
      throw UsageError("cannot write '" + o.out + "'");
    f << text;
  }

  std::vector<csv::Row> matrix(const Options& o, const Settings& s,
                               const std::vector<std::string>& kernels,
                               const std::vector<kn::Isa>& isas,
                               const std::vector<Scheme>& schemes)
  {
    std::vector<csv::Row> rows;
    for (uint64_t seed : seedList(o))
      for (const auto& kernel : kernels)
        {
          kn::KernelParams p = params(o, kernel, seed);
          for (Scheme scheme : schemes)
            for (kn::Isa isa : isas)
              rows.push_back(runRow(s, kernel, isa, scheme, p));
        }
    return rows;
  }

  int failures(const std::vector<csv::Row>& rows, std::ostream& err)
  {
    int bad = 0;
    for (const auto& r : rows)
      if (r.status != "ok")
        {
          ++bad;
          err << r.kernel << " " << r.isa << " " << r.scheme << " seed=" << r.seed << ": "
              << r.status << ": " << r.detail << "\n";
        }
    return bad;
  }

  int cmdSimulate(const Options& o, std::ostream& out, std::ostream& err)
  {
    Settings s = loadSettings(o);
    auto kernels = kernelList(o, false);
    auto isas = isaList(o, "mve");
    auto schemes = schemeList(o, std::string(schemeName(s.machine.scheme)));
    auto rows = matrix(o, s, kernels, isas, schemes);
    std::ostringstream os;
    csv::write(os, rows);
    emit(o, out, os.str());
    return failures(rows, err) ? kValidationFailed : kOk;
  }

  void addRatios(std::vector<csv::Row>& rows)
  {
    std::map<std::tuple<std::string, std::string, uint64_t>, const csv::Row*> base;
    for (const auto& r : rows)
      if (r.isa == "mve" && r.stats)
        base[{r.kernel, r.scheme, r.seed}] = &r;
    for (auto& r : rows)
      {
        if (r.isa == "mve" || !r.stats)
          continue;
        auto it = base.find({r.kernel, r.scheme, r.seed});
        if (it == base.end())
          continue;
        const SimStats& m = *it->second->stats;
        const SimStats& v = *r.stats;
        if (m.totalCycles)
          r.cycleRatio = double(v.totalCycles) / double(m.totalCycles);
        if (m.vectorInsts())
          r.vinstRatio = double(v.vectorInsts()) / double(m.vectorInsts());
        r.utilizationDelta = m.utilization() - v.utilization();
      }
  }

  int cmdCompare(const Options& o, std::ostream& out, std::ostream& err)
  {
    Settings s = loadSettings(o);
    auto kernels = kernelList(o, true);
    auto isas = isaList(o, "mve,rvv1d");
    auto schemes = schemeList(o, std::string(schemeName(s.machine.scheme)));
    auto rows = matrix(o, s, kernels, isas, schemes);
    addRatios(rows);
    std::ostringstream os;
    csv::write(os, rows);
    emit(o, out, os.str());
    return failures(rows, err) ? kValidationFailed : kOk;
  }

  int cmdValidate(const Options& o, std::ostream& out, std::ostream& err)
  {
    Settings s = loadSettings(o);
    auto kernels = kernelList(o, true);
    auto isas = isaList(o, "all");
    auto schemes = schemeList(o, "all");
    auto rows = matrix(o, s, kernels, isas, schemes);
    std::ostringstream os;
    int bad = 0;
    for (const auto& r : rows)
      {
        bool ok = r.status == "ok";
        bad += !ok;
        os << (ok ? "PASS " : "FAIL ") << r.kernel << " " << r.isa << " " << r.scheme
           << " seed=" << r.seed;
        if (!ok)
          os << ": " << r.detail;
        os << "\n";
      }
    os << (rows.size() - bad) << " passed, " << bad << " failed\n";
    emit(o, out, os.str());
    if (bad)
      err << bad << " validation failure(s)\n";
    return bad ? kValidationFailed : kOk;
  }

  int cmdTrace(const Options& o, std::ostream& out)
  {
    Settings s = loadSettings(o);
    auto kernels = kernelList(o, false);
    auto isas = isaList(o, "mve");
    if (kernels.size() != 1 || isas.size() != 1)
      throw UsageError("trace takes exactly one kernel and one isa");
    kn::KernelInstance k = kn::build(kernels[0], isas[0], params(o, kernels[0], o.seed));
    Program program = o.virtualTrace ? k.trace : kn::prepare(k, s.machine.geometry).program;
    emit(o, out, encodeProgram(program));
    return kOk;
  }

  void addCommon(CLI::App* sub, Options& o, bool sizes = true)
  {
    sub->add_option("--kernel,--kernels", o.kernels,
                    "Kernel name(s), comma separated, or 'all'");
    sub->add_option("--isa", o.isas, "mve, rvv1d, comma list or 'all'");
    sub->add_option("--config", o.config, "key=value machine config file")
      ->check(CLI::ExistingFile);
    sub->add_option("--set", o.sets, "Config override key=value (after --config)");
    sub->add_option("--out", o.out, "Output file (default stdout)");
    sub->add_option("--seed", o.seed, "Input data seed");
    if (!sizes)
      return;
    sub->add_option("--scheme", o.schemes, "bs, bp, bh, ac, comma list or 'all'");
    sub->add_option("--seeds", o.seeds, "Seed list, e.g. 0-9 or 1,4,7");
    sub->add_flag("--quick", o.quick, "Start from reduced problem sizes");
    sub->add_option("--m", o.m);
    sub->add_option("--n", o.n);
    sub->add_option("--k", o.k);
    sub->add_option("--len", o.len);
    sub->add_option("--rows", o.rows);
    sub->add_option("--cols", o.cols);
    sub->add_option("--inner", o.inner);
    sub->add_option("--density", o.density);
    sub->add_option("--dtype", o.dtype, "gemm element type suffix (b, w, dw, qw, hf, f, ...)");
  }

} // namespace

int
runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Multi-dimensional vector ISA simulator on a modeled in-cache engine", "mvesim"};
  app.require_subcommand(1);
  Options o;

  auto* simulate = app.add_subcommand("simulate", "Run kernels and print stats as CSV");
  addCommon(simulate, o);
  auto* compare = app.add_subcommand("compare", "Kernel x isa x scheme matrix with ratios");
  addCommon(compare, o);
  auto* validate = app.add_subcommand("validate", "Check kernel outputs against golden models");
  addCommon(validate, o);
  auto* trace = app.add_subcommand("trace", "Print a kernel program in text form");
  addCommon(trace, o);
  trace->add_flag("--virtual", o.virtualTrace, "Print the trace before register allocation");

  try
    {
      app.parse(argc, argv);
    }
  catch (const CLI::ParseError& e)
    {
      int code = app.exit(e, out, err);
      return code == 0 ? kOk : kUsageError;
    }

  try
    {
      if (simulate->parsed())
        return cmdSimulate(o, out, err);
      if (compare->parsed())
        return cmdCompare(o, out, err);
      if (validate->parsed())
        return cmdValidate(o, out, err);
      return cmdTrace(o, out);
    }
  catch (const UsageError& e)
    {
      err << "error: " << e.what() << "\n";
      return kUsageError;
    }
  catch (const std::exception& e)
    {
      err << "error: " << e.what() << "\n";
      return kUsageError;
    }
}

} // namespace mvesim
