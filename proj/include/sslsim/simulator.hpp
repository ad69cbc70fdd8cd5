#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sslsim/model.hpp"
#include "sslsim/solver.hpp"

namespace ssl {

// Logic levels keyed by input name; level 1 means up-spin.
using InputVector = std::map<std::string, bool>;

struct TraceEntry {
  int cycle = 0;  // 1-based macro-cycle
  int phase = 0;
  SpinState state;  // state after relaxing that phase

  bool operator==(const TraceEntry&) const = default;
};

struct SimResult {
  std::map<std::string, bool> outputs;
  int macro_cycles = 0;  // full 3-phase passes until fixed point, confirming pass included
  std::vector<TraceEntry> trace;
  SpinState final_state;

  bool operator==(const SimResult&) const = default;
};

struct SimOptions {
  int max_cycles = 0;  // 0 = derive from the layout (see default_max_cycles)
  bool record_trace = false;
  bool use_anneal = false;
  std::optional<AnnealSchedule> schedule;  // annealing config; defaults per layout
  int exact_limit = default_exact_limit;
};

// Raised when a settle exceeds its macro-cycle budget; carries the last state
// for diagnosis.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& message, SpinState state, int cycles_run)
      : std::runtime_error(message), last_state(std::move(state)), cycles(cycles_run) {}
  SpinState last_state;
  int cycles = 0;
};

// All cells up except fixed cells, which hold their pinned value.
SpinState initial_state(const Layout& layout);

// Writes the vector onto the input cells; everything else is untouched.
// The vector must name each declared input exactly once.
SpinState clamp_inputs(const Layout& layout, SpinState state, const InputVector& vector);

// Jointly relaxes the non-input, non-fixed cells whose clock zone equals
// `phase`, with every other cell as frozen boundary. `cycle` only feeds the
// per-phase annealing seed.
SpinState step_phase(const Layout& layout, SpinState state, int phase,
                     const SimOptions& options = {}, int cycle = 1);

// Clamps the vector onto the bias-aligned initial state and repeats phases
// 0,1,2 until a full macro-cycle changes nothing. Throws ConvergenceError
// after max_cycles.
SimResult run_to_fixpoint(const Layout& layout, const InputVector& vector,
                          const SimOptions& options = {});

// Like run_to_fixpoint, but a layout declaring an input named "PHI" that the
// vector omits is driven through the two-step clock protocol: settle with
// PHI=0 (precharge), then raise PHI=1 and settle again (evaluate). Cycle
// numbering and the trace run through both settles.
SimResult simulate(const Layout& layout, const InputVector& vector,
                   const SimOptions& options = {});

// Pipelined run: vector k is presented at macro-cycle k (the last vector is
// held afterwards) and its outputs are read L macro-cycles later, where L is
// the measured pipeline latency. A layout declaring "PHI" streams with PHI
// held at 1 when the vectors omit it.
std::vector<std::map<std::string, bool>> run_stream(const Layout& layout,
                                                    const std::vector<InputVector>& vectors,
                                                    const SimOptions& options = {});

// Pipeline latency in macro-cycles: the unique shift L at which a streamed
// step probe (all-zeros, then all-ones) reads back each vector's settled
// outputs L cycles after it is presented. Layouts whose outputs do not react
// to the step report 0.
int measure_latency(const Layout& layout, const SimOptions& options = {});

// Logic level per output name: 1 iff the output cell's spin is up.
std::map<std::string, bool> read_outputs(const Layout& layout, const SpinState& state);

// 4 x the cell count along the longest shortest input-to-output path
// (at least 12); generous for every fixture.
int default_max_cycles(const Layout& layout);

// One line per (macro-cycle, phase): "<cycle> <phase> <spins>" with spins as
// '+'/'-' characters in cell id order, preceded by a "# cells:" header.
std::string trace_to_text(const Layout& layout, const std::vector<TraceEntry>& trace);

}  // namespace ssl
