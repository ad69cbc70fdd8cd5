#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sslsim/model.hpp"
#include "sslsim/simulator.hpp"

namespace ssl {

// Sum and carry of a one-bit full add: (a xor b xor ci, majority(a, b, ci)).
std::pair<bool, bool> reference_full_adder(bool a, bool b, bool ci);

// One verified input vector. Observed values are meaningful only for the
// outputs the layout declares; `diagnostic` is non-empty when the simulation
// failed to settle.
struct TruthRow {
  bool a = false, b = false, ci = false;
  bool expected_s = false, expected_co = false;
  bool observed_s = false, observed_co = false;
  bool pass = false;
  std::string diagnostic;
};

struct TruthReport {
  std::string name;
  bool checks_s = false;   // layout declares an S output
  bool checks_co = false;  // layout declares a Co output
  std::vector<TruthRow> rows;

  int pass_count() const;
  int total() const { return static_cast<int>(rows.size()); }
  bool all_pass() const { return pass_count() == total(); }
};

// Simulates all 8 input vectors (the two-step clock protocol applies
// automatically when the layout declares a PHI input) and compares the
// declared outputs against reference_full_adder. Layouts may declare S, Co,
// or both; carry-only designs are judged on Co alone. Non-convergence marks
// the row failed with a diagnostic instead of throwing.
// Requires inputs A, B, Ci and at least one of the outputs S, Co; throws
// std::invalid_argument otherwise.
TruthReport truth_table_check(const Layout& layout, std::string name = "",
                              const SimOptions& options = {});

struct MetricsReport {
  std::string name;
  int dot_count = 0;        // number of cells
  int gate_pad_count = 0;   // number of gated couplings
  int clock_zone_span = 0;  // distinct zones on input-to-output paths
  int pipeline_latency = 0; // macro-cycles until streamed outputs are valid
};

MetricsReport metrics(const Layout& layout, std::string name = "");

// Metric comparison across the five adder fixtures. `violations` lists every
// failed claim; pass == violations.empty().
struct ComparisonReport {
  std::vector<MetricsReport> rows;  // canonical fixture order
  std::vector<std::string> violations;
  bool pass = false;
};

// Requires exactly one report per adder fixture, matched by name; throws
// std::invalid_argument on unknown, duplicate, or missing names. Claims
// checked: the mirror design matches the complementary dot count while using
// strictly more gate pads, and the transmission-gate and both Manchester
// designs use strictly fewer dots than the complementary design.
ComparisonReport compare_metrics(const std::vector<MetricsReport>& reports);

// Deterministic plain-text / CSV renderings (byte-stable for equal inputs).
std::string truth_report_to_text(const TruthReport& report);
std::string metrics_to_text(const MetricsReport& report);
std::string comparison_to_text(const ComparisonReport& report);
std::string comparison_to_csv(const ComparisonReport& report);

// Runtime overrides parsed from "key = value" text. Recognized keys:
// exact_limit, t_start, t_end, sweeps, max_cycles, seed. '#' starts a
// comment; blank lines are ignored.
struct RunConfig {
  std::optional<int> exact_limit;
  std::optional<double> t_start;
  std::optional<double> t_end;
  std::optional<int> sweeps;
  std::optional<int> max_cycles;
  std::optional<std::uint64_t> seed;
};

// Throws std::invalid_argument on malformed lines, unknown keys, or values
// out of range.
RunConfig parse_config(std::string_view text);

// Simulation options for `layout` with the config's overrides applied; the
// annealing schedule starts from default_schedule(layout).
SimOptions to_sim_options(const RunConfig& config, const Layout& layout, bool use_anneal);

}  // namespace ssl
