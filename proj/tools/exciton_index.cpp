// Command line front end: validate | report | trace | sweep | selftest.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "exciton/errors.hpp"
#include "exciton/instance_io.hpp"
#include "exciton/oracle.hpp"
#include "exciton/spectral_flow.hpp"

namespace
{

using namespace exciton;

std::ofstream open_output(const std::string &path)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error(ErrorKind::Io, "cannot write " + path);
  }
  return out;
}

int cmd_validate(const std::string &path)
{
  const Instance inst = load_instance(path);
  const DoubleGraph graph = DoubleGraph::build(inst.graph);
  const UnitaryLoop loop = assemble_graph_loop(graph, inst.families);
  const GraphContext &ctx = *loop.graph_context();
  std::ostringstream windings;
  windings << "[";
  for (std::size_t v = 0; v < ctx.families.size(); ++v)
  {
    check_kramers(ctx.families[v]);
    windings << (v ? "," : "") << ctx.families[v].winding();
  }
  windings << "]";
  std::cout << "n=" << graph.size() << ", sum_L=" << graph.total_length() << ", windings=" << windings.str() << "\n";
  return 0;
}

int cmd_report(const std::string &path, const std::string &json_out, bool band, std::size_t grid)
{
  const Instance inst = load_instance(path);
  ReportOptions options;
  options.tol = inst.effective_tolerances();
  options.band = band;
  options.initial_grid = grid;
  const IndexReport report = index_report(inst.loop(), options);
  const std::string text = to_json(report).dump(2);
  if (json_out.empty())
  {
    std::cout << text << "\n";
  }
  else
  {
    open_output(json_out) << text << "\n";
  }
  for (const auto &w : report.warnings)
  {
    std::cerr << "warning: " << w << "\n";
  }
  if (!report.theorem_a_ok)
  {
    std::cerr << "error: internal consistency failure, alpha=" << report.alpha << " q=" << report.q << "\n";
    return 2;
  }
  return 0;
}

int cmd_trace(const std::string &path, const std::string &csv_out, std::size_t grid)
{
  const Instance inst = load_instance(path);
  const EigenphaseTrace trace = trace_eigenphases(inst.loop(), grid, inst.effective_tolerances());
  if (csv_out.empty())
  {
    write_trace_csv(std::cout, trace);
  }
  else
  {
    auto out = open_output(csv_out);
    write_trace_csv(out, trace);
  }
  return 0;
}

std::vector<Length> parse_scales(const std::string &text)
{
  std::vector<Length> scales;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    std::size_t used = 0;
    long long v = 0;
    try
    {
      v = std::stoll(item, &used);
    }
    catch (const std::exception &)
    {
      throw Error(ErrorKind::Usage, "--scales: '" + item + "' is not an integer");
    }
    if (used != item.size() || v < 1)
    {
      throw Error(ErrorKind::Usage, "--scales: '" + item + "' is not a positive integer");
    }
    scales.push_back(v);
  }
  if (scales.empty())
  {
    throw Error(ErrorKind::Usage, "--scales needs at least one positive integer");
  }
  return scales;
}

int cmd_sweep(const std::string &path, const std::string &scales_text, const std::string &csv_out)
{
  const std::vector<Length> scales = parse_scales(scales_text);
  const Instance inst = load_instance(path);
  ReportOptions options;
  options.tol = inst.effective_tolerances();
  const auto rows = long_arm_sweep(DoubleGraph::build(inst.graph), inst.families, scales, options);
  if (csv_out.empty())
  {
    write_sweep_csv(std::cout, rows);
  }
  else
  {
    auto out = open_output(csv_out);
    write_sweep_csv(out, rows);
  }
  return 0;
}

int cmd_selftest(std::uint64_t seed, long long count, long long oracle_count)
{
  if (count < 1)
  {
    throw Error(ErrorKind::Usage, "--count must be at least 1");
  }
  const auto start = std::chrono::steady_clock::now();
  long long identity_pass = 0, bound_pass = 0, oracle_pass = 0, oracle_run = 0;
  for (long long i = 0; i < count; ++i)
  {
    const Instance inst = random_instance(seed + static_cast<std::uint64_t>(i));
    const UnitaryLoop loop = inst.loop();
    const IndexReport r = index_report(loop);
    identity_pass += r.theorem_a_ok ? 1 : 0;
    bound_pass += (r.bound_ok && *r.bound_ok) ? 1 : 0;
    if (!r.theorem_a_ok)
    {
      std::cout << "FAIL index identity seed=" << seed + static_cast<std::uint64_t>(i) << " alpha=" << r.alpha
                << " q=" << r.q << "\n";
    }
    if (oracle_run < oracle_count && loop.dimension() <= 10)
    {
      ++oracle_run;
      const auto oracle = dense_scan_crossings(loop);
      const auto mismatch = compare_crossings(r.crossings, oracle);
      oracle_pass += mismatch ? 0 : 1;
      if (mismatch)
      {
        std::cout << "FAIL oracle seed=" << seed + static_cast<std::uint64_t>(i) << ": " << *mismatch << "\n";
      }
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "index identity: " << identity_pass << "/" << count << "\n"
            << "lower bound: " << bound_pass << "/" << count << "\n"
            << "oracle equivalence: " << oracle_pass << "/" << oracle_run << "\n"
            << "elapsed: " << seconds << " s\n";
  return (identity_pass == count && bound_pass == count && oracle_pass == oracle_run) ? 0 : 2;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Count exciton solutions of a branched molecule via spectral flow of its scattering loop"};
  app.require_subcommand(1);

  std::string path, json_out, csv_out, scales = "";
  bool band = false;
  std::size_t grid = 64;
  std::uint64_t seed = 0;
  long long count = 200;
  long long oracle_count = 10;

  auto *validate = app.add_subcommand("validate", "Check an instance file and print a summary");
  validate->add_option("path", path, "Instance JSON")->required();

  auto *report = app.add_subcommand("report", "Compute the index report");
  report->add_option("path", path, "Instance JSON")->required();
  report->add_option("--json", json_out, "Write the report to this file instead of stdout");
  report->add_flag("--band", band, "Require the band count N (odd parity is an error)");
  report->add_option("--grid", grid, "Initial k-grid size (>= 64)");

  auto *trace = app.add_subcommand("trace", "Write the eigenphase trace as CSV");
  trace->add_option("path", path, "Instance JSON")->required();
  trace->add_option("--csv", csv_out, "Output CSV (stdout when omitted)");
  trace->add_option("--grid", grid, "Initial k-grid size (>= 64)");

  auto *sweep = app.add_subcommand("sweep", "Long-arm sweep over length scales");
  sweep->add_option("path", path, "Instance JSON")->required();
  sweep->add_option("--scales", scales, "Comma-separated positive integers, e.g. 1,2,4,8,16")->required();
  sweep->add_option("--csv", csv_out, "Output CSV (stdout when omitted)");

  auto *selftest = app.add_subcommand("selftest", "Randomized index-theorem and oracle suites");
  selftest->add_option("--seed", seed, "First seed");
  selftest->add_option("--count", count, "Number of random instances");
  selftest->add_option("--oracle-count", oracle_count, "Instances (n <= 10) also checked against the dense scan");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return 1;
  }

  try
  {
    if (*validate) return cmd_validate(path);
    if (*report) return cmd_report(path, json_out, band, grid);
    if (*trace) return cmd_trace(path, csv_out, grid);
    if (*sweep) return cmd_sweep(path, scales, csv_out);
    if (*selftest) return cmd_selftest(seed, count, oracle_count);
  }
  catch (const Error &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
