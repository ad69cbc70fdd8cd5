// Command-line front end: settle layouts, verify adder truth tables, report
// and compare fixture metrics, sweep the bias window, and emit the built-in
// fixture files.
//
// Exit codes: 0 = all checks pass, 1 = verification failure, 2 = usage or
// configuration error.
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sslsim/circuits.hpp"
#include "sslsim/model.hpp"
#include "sslsim/simulator.hpp"
#include "sslsim/verify.hpp"

namespace {

using namespace ssl;

// Bad user input distinct from a failed check.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spill_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << content;
}

Layout load_layout(const std::string& path) {
  try {
    return parse_layout(slurp_file(path));
  } catch (const ParseError& e) {
    // e.what() already carries the "line N:" prefix.
    throw UsageError(path + ": " + e.what());
  }
}

std::string layout_name(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// "A=1,B=0,Ci=1" -> input vector.
InputVector parse_input_spec(const std::string& spec) {
  InputVector vector;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t comma = std::min(spec.find(',', pos), spec.size());
    const std::string item = spec.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) throw UsageError("--in: empty assignment in '" + spec + "'");
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("--in: expected name=0|1, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (value != "0" && value != "1")
      throw UsageError("--in: value for " + name + " must be 0 or 1");
    if (!vector.emplace(name, value == "1").second)
      throw UsageError("--in: duplicate input " + name);
    if (comma == spec.size()) break;
  }
  return vector;
}

// Named built-in layouts accepted by `sweep --fixture` and written by `emit`.
Layout fixture_by_name(const std::string& name) {
  if (name == "nand") return build_nand();
  if (name == "wire3") return build_wire(3);
  if (const std::optional<AdderKind> kind = adder_by_name(name)) return build_adder(*kind);
  throw UsageError("unknown fixture '" + name + "'");
}

int run_simulate(const std::string& path, const std::string& in_spec,
                 const std::string& trace_path, bool anneal, const RunConfig& config) {
  const Layout layout = load_layout(path);
  SimOptions options = to_sim_options(config, layout, anneal);
  options.record_trace = !trace_path.empty();
  const SimResult result = simulate(layout, parse_input_spec(in_spec), options);
  for (const auto& [name, value] : result.outputs)
    std::cout << name << "=" << (value ? 1 : 0) << "\n";
  std::cout << "macro_cycles=" << result.macro_cycles << "\n";
  if (!trace_path.empty()) spill_file(trace_path, trace_to_text(layout, result.trace));
  return 0;
}

int run_verify(const std::string& path, bool fixtures, const RunConfig& config) {
  std::vector<std::pair<std::string, Layout>> targets;
  if (fixtures) {
    for (AdderKind kind : all_adder_kinds) targets.emplace_back(adder_name(kind), build_adder(kind));
  } else {
    targets.emplace_back(layout_name(path), load_layout(path));
  }
  bool all_pass = true;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& [name, layout] = targets[i];
    const TruthReport report =
        truth_table_check(layout, name, to_sim_options(config, layout, false));
    if (i > 0) std::cout << "\n";
    std::cout << truth_report_to_text(report);
    all_pass = all_pass && report.all_pass();
  }
  return all_pass ? 0 : 1;
}

int run_metrics(const std::string& path) {
  const Layout layout = load_layout(path);
  std::cout << metrics_to_text(metrics(layout, layout_name(path)));
  return 0;
}

int run_compare(const std::string& csv_path) {
  std::vector<MetricsReport> reports;
  for (AdderKind kind : all_adder_kinds)
    reports.push_back(metrics(build_adder(kind), adder_name(kind)));
  const ComparisonReport comparison = compare_metrics(reports);
  std::cout << comparison_to_text(comparison);
  if (!csv_path.empty()) spill_file(csv_path, comparison_to_csv(comparison));
  return comparison.pass ? 0 : 1;
}

// "start:end:step" with step > 0 and start <= end.
std::vector<double> parse_bias_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t colon = spec.find(':', pos);
    parts.push_back(spec.substr(pos, colon == std::string::npos ? colon : colon - pos));
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  if (parts.size() != 3) throw UsageError("--bias: expected start:end:step");
  double start = 0, end = 0, step = 0;
  try {
    start = parse_double_token(parts[0]);
    end = parse_double_token(parts[1]);
    step = parse_double_token(parts[2]);
  } catch (const std::invalid_argument&) {
    throw UsageError("--bias: malformed number in '" + spec + "'");
  }
  if (step <= 0 || start > end) throw UsageError("--bias: need step > 0 and start <= end");
  std::vector<double> values;
  for (int k = 0;; ++k) {
    // Snap to the intended grid point; raw accumulation drifts in the last bits.
    const double h = std::round((start + k * step) * 1e9) / 1e9;
    if (h > end + 1e-9) break;
    values.push_back(h);
  }
  return values;
}

int run_sweep(const std::string& fixture, const std::string& bias_spec,
              const RunConfig& config) {
  const Layout base = fixture_by_name(fixture);
  bool all_pass = true;
  for (double h : parse_bias_spec(bias_spec)) {
    Layout layout = base;
    layout.params.bias = h;
    std::cout << "h=" << format_double(h) << " ";
    const ValidationReport validation = validate_layout(layout);
    if (!validation.ok()) {
      std::cout << "invalid (bias outside the admissible window)\n";
      all_pass = false;
      continue;
    }
    int pass = 0, total = 0;
    if (layout.output_cell("Y") >= 0) {
      // Two-input gate: expect NAND.
      for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b) {
          ++total;
          const SimResult result = simulate(layout, {{"A", a == 1}, {"B", b == 1}},
                                            to_sim_options(config, layout, false));
          if (result.outputs.at("Y") == !(a == 1 && b == 1)) ++pass;
        }
    } else {
      const TruthReport report =
          truth_table_check(layout, fixture, to_sim_options(config, layout, false));
      pass = report.pass_count();
      total = report.total();
    }
    std::cout << "pass " << pass << "/" << total << "\n";
    all_pass = all_pass && pass == total;
  }
  return all_pass ? 0 : 1;
}

int run_emit(const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::vector<std::string> names = {
      adder_name(AdderKind::complementary),     adder_name(AdderKind::mirror),
      adder_name(AdderKind::transmission_gate), adder_name(AdderKind::static_manchester),
      adder_name(AdderKind::dynamic_manchester), "nand", "wire3"};
  for (const std::string& name : names) {
    const std::string path = (std::filesystem::path(dir) / (name + ".layout")).string();
    spill_file(path, serialize_layout(fixture_by_name(name)));
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-spin-logic circuit simulator and verifier"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value run configuration file");

  auto* sim = app.add_subcommand("simulate", "settle one layout for one input vector");
  std::string sim_layout, sim_in, sim_trace;
  bool sim_anneal = false;
  std::uint64_t sim_seed = 0;
  sim->add_option("layout", sim_layout, "layout file")->required();
  sim->add_option("--in", sim_in, "input assignment, e.g. A=1,B=0,Ci=1")->required();
  sim->add_option("--trace", sim_trace, "write the per-phase trace to this file");
  sim->add_flag("--anneal", sim_anneal, "relax by simulated annealing instead of enumeration");
  auto* seed_opt = sim->add_option("--seed", sim_seed, "annealing seed override");
  seed_opt->needs("--anneal");

  auto* verify_cmd = app.add_subcommand("verify", "check a layout against the full-adder truth table");
  std::string verify_layout;
  bool verify_fixtures = false;
  auto* verify_file = verify_cmd->add_option("layout", verify_layout, "layout file");
  auto* verify_all = verify_cmd->add_flag("--fixtures", verify_fixtures, "verify all five built-in adders");
  verify_file->excludes(verify_all);

  auto* metrics_cmd = app.add_subcommand("metrics", "report dot/gate counts, zone span, latency");
  std::string metrics_layout;
  metrics_cmd->add_option("layout", metrics_layout, "layout file")->required();

  auto* compare_cmd = app.add_subcommand("compare", "compare the five built-in adder fixtures");
  std::string compare_csv;
  bool compare_fixtures = false;
  compare_cmd->add_flag("--fixtures", compare_fixtures, "use the built-in fixtures")->required();
  compare_cmd->add_option("--csv", compare_csv, "also write the table as CSV to this file");

  auto* sweep_cmd = app.add_subcommand("sweep", "re-run a fixture's truth table across bias values");
  std::string sweep_fixture = "nand", sweep_bias;
  sweep_cmd->add_option("--fixture", sweep_fixture, "built-in fixture name (default nand)");
  sweep_cmd->add_option("--bias", sweep_bias, "bias range start:end:step")->required();

  auto* emit_cmd = app.add_subcommand("emit", "write the built-in fixture files");
  std::string emit_dir;
  emit_cmd->add_option("--dir", emit_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) {
      try {
        config = parse_config(slurp_file(config_path));
      } catch (const std::invalid_argument& e) {
        throw UsageError(config_path + ": " + e.what());
      }
    }
    if (*sim) return run_simulate(sim_layout, sim_in, sim_trace, sim_anneal, [&] {
      RunConfig c = config;
      if (seed_opt->count() > 0) c.seed = sim_seed;
      return c;
    }());
    if (*verify_cmd) {
      if (verify_layout.empty() && !verify_fixtures)
        throw UsageError("verify: give a layout file or --fixtures");
      return run_verify(verify_layout, verify_fixtures, config);
    }
    if (*metrics_cmd) return run_metrics(metrics_layout);
    if (*compare_cmd) return run_compare(compare_csv);
    if (*sweep_cmd) return run_sweep(sweep_fixture, sweep_bias, config);
    if (*emit_cmd) return run_emit(emit_dir);
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
