#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lodis/cli.hpp"
#include "lodis/oracle.hpp"

namespace {

using namespace lodis;

void write_output(const Json& j, const std::string& out_path) {
  const std::string text = dump_json(j);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw SchemaError("cannot write " + out_path);
  out << text;
}

std::vector<Side> parse_sides(const std::string& s) {
  if (s == "A") return {Side::A};
  if (s == "B") return {Side::B};
  if (s == "both") return {Side::A, Side::B};
  throw SchemaError("--side must be A, B or both");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-way LOCC distinguishability analyzer"};
  app.require_subcommand(1);

  std::string input, report_path, out_path, side_str = "both", indices;
  double tol = kDefaultTol;
  std::uint64_t seed = 0, trials = 10000, samples = 100;
  int d = 0, n = 0;
  bool no_simulate = false, with_det = false;

  auto* analyze = app.add_subcommand("analyze", "decide distinguishability of a state set");
  analyze->add_option("--input", input, "state-set JSON file")->required();
  analyze->add_option("--side", side_str, "A, B or both (default both)");
  analyze->add_option("--tol", tol, "numerical tolerance (default 1e-10)");
  analyze->add_option("--seed", seed, "RNG seed (default 0)");
  analyze->add_option("--trials", trials, "simulation trials (default 10000)");
  analyze->add_flag("--no-simulate", no_simulate, "skip the Monte-Carlo check");
  analyze->add_option("--out", out_path, "output path (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "replay a stored protocol");
  simulate->add_option("--input", input, "state-set JSON file")->required();
  simulate->add_option("--report", report_path, "analysis report with a protocol")->required();
  simulate->add_option("--side", side_str, "which side's protocol (default: first found)");
  simulate->add_option("--trials", trials, "trials (default 10000)");
  simulate->add_option("--seed", seed, "RNG seed (default 0)");
  simulate->add_option("--out", out_path, "output path (default stdout)");

  auto* sample = app.add_subcommand("sample-generic", "dimension statistics of random sets");
  sample->add_option("--d", d, "local dimension")->required();
  sample->add_option("--n", n, "number of states")->required();
  sample->add_option("--samples", samples, "number of random sets (default 100)");
  sample->add_option("--seed", seed, "RNG seed (default 0)");
  sample->add_flag("--det", with_det, "record determinant diagnostics");
  sample->add_option("--out", out_path, "output path (default stdout)");

  auto* gen = app.add_subcommand("gen-fixture", "write a phase/shift state-set file");
  gen->add_option("--d", d, "local dimension")->required();
  gen->add_option("--indices", indices, "comma-separated nm or n:m pairs")->required();
  gen->add_option("--out", out_path, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      cli::AnalyzeOptions opts;
      opts.input_path = input;
      opts.sides = parse_sides(side_str);
      opts.tol = tol;
      opts.seed = seed;
      opts.trials = trials;
      opts.simulate = !no_simulate;
      const AnalysisReport rep = cli::run_analyze(opts);
      write_output(to_json(rep), out_path);
      return rep.exit_code;
    }
    if (simulate->parsed()) {
      cli::SimulateOptions opts;
      opts.input_path = input;
      opts.report_path = report_path;
      if (side_str == "A") opts.side = Side::A;
      if (side_str == "B") opts.side = Side::B;
      opts.trials = trials;
      opts.seed = seed;
      const auto res = cli::run_simulate(opts);
      write_output(res.output, out_path);
      return res.exit_code;
    }
    if (sample->parsed()) {
      const GenericityReport rep = genericity_sample(d, n, samples, seed, with_det);
      write_output(to_json(rep), out_path);
      return 0;
    }
    if (gen->parsed()) {
      write_output(cli::run_gen_fixture(d, indices), out_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitError;
  }
  return cli::kExitError;
}
