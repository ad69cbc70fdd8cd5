#include "sslsim/simulator.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace ssl {

namespace {

AnnealSchedule phase_schedule(const Layout& layout, const SimOptions& options, int cycle,
                              int phase) {
  AnnealSchedule schedule = options.schedule ? *options.schedule : default_schedule(layout);
  // Every (cycle, phase) relaxation draws from its own stream.
  schedule.seed += 1000003ull * static_cast<std::uint64_t>(cycle) + static_cast<std::uint64_t>(phase);
  return schedule;
}

// Relaxes the phase's free cells in place; true when any spin changed.
bool relax_phase_inplace(const Layout& layout, SpinState& state, int phase,
                         const SimOptions& options, int cycle) {
  std::vector<int> free_cells;
  for (std::size_t i = 0; i < layout.cells.size(); ++i) {
    const Cell& cell = layout.cells[i];
    if (cell.zone == phase && cell.kind != CellKind::input && cell.kind != CellKind::fixed)
      free_cells.push_back(static_cast<int>(i));
  }
  if (free_cells.empty()) return false;
  RelaxProblem problem{&layout, std::move(free_cells), state};
  SpinState next = options.use_anneal
                       ? relax_anneal(problem, phase_schedule(layout, options, cycle, phase))
                       : relax_exact(problem, options.exact_limit);
  const bool changed = next != state;
  state = std::move(next);
  return changed;
}

// Runs macro-cycles numbered from start_cycle until one changes nothing;
// returns how many it took (confirming pass included).
int settle(const Layout& layout, SpinState& state, std::vector<TraceEntry>* trace,
           const SimOptions& options, int start_cycle, int max_cycles) {
  for (int n = 1; n <= max_cycles; ++n) {
    const int cycle = start_cycle + n - 1;
    bool changed = false;
    for (int phase = 0; phase < 3; ++phase) {
      changed = relax_phase_inplace(layout, state, phase, options, cycle) || changed;
      if (trace) trace->push_back({cycle, phase, state});
    }
    if (!changed) return n;
  }
  throw ConvergenceError(
      "no fixed point after " + std::to_string(max_cycles) + " macro-cycles", state, max_cycles);
}

int resolved_max_cycles(const Layout& layout, const SimOptions& options) {
  return options.max_cycles > 0 ? options.max_cycles : default_max_cycles(layout);
}

// One macro-cycle per entry: vector k clamped at cycle k (last one held for
// the extra cycles), outputs recorded after each cycle.
std::vector<std::map<std::string, bool>> stream_raw(const Layout& layout,
                                                    const std::vector<InputVector>& vectors,
                                                    int extra_cycles, const SimOptions& options) {
  SpinState state = initial_state(layout);
  std::vector<std::map<std::string, bool>> per_cycle;
  const int total = static_cast<int>(vectors.size()) + extra_cycles;
  for (int k = 0; k < total; ++k) {
    const std::size_t slot = std::min<std::size_t>(k, vectors.size() - 1);
    state = clamp_inputs(layout, std::move(state), vectors[slot]);
    for (int phase = 0; phase < 3; ++phase)
      relax_phase_inplace(layout, state, phase, options, k + 1);
    per_cycle.push_back(read_outputs(layout, state));
  }
  return per_cycle;
}

bool declares_phi(const Layout& layout) { return layout.input_cell("PHI") >= 0; }

}  // namespace

SpinState initial_state(const Layout& layout) {
  SpinState state(layout.cells.size(), Spin::up);
  for (std::size_t i = 0; i < layout.cells.size(); ++i)
    if (layout.cells[i].fixed_value) state[i] = *layout.cells[i].fixed_value;
  return state;
}

SpinState clamp_inputs(const Layout& layout, SpinState state, const InputVector& vector) {
  if (state.size() != layout.cells.size())
    throw std::invalid_argument("state size does not match the layout");
  for (const auto& [name, level] : vector) {
    (void)level;
    if (layout.input_cell(name) < 0)
      throw std::invalid_argument("unknown input '" + name + "'");
  }
  for (const IoPort& port : layout.inputs) {
    const auto it = vector.find(port.name);
    if (it == vector.end()) throw std::invalid_argument("missing input '" + port.name + "'");
    state[port.cell] = spin_of_bit(it->second);
  }
  return state;
}

SpinState step_phase(const Layout& layout, SpinState state, int phase, const SimOptions& options,
                     int cycle) {
  if (phase < 0 || phase > 2) throw std::invalid_argument("phase must be 0, 1, or 2");
  if (state.size() != layout.cells.size())
    throw std::invalid_argument("state size does not match the layout");
  relax_phase_inplace(layout, state, phase, options, cycle);
  return state;
}

SimResult run_to_fixpoint(const Layout& layout, const InputVector& vector,
                          const SimOptions& options) {
  SimResult result;
  SpinState state = clamp_inputs(layout, initial_state(layout), vector);
  result.macro_cycles = settle(layout, state, options.record_trace ? &result.trace : nullptr,
                               options, 1, resolved_max_cycles(layout, options));
  result.outputs = read_outputs(layout, state);
  result.final_state = std::move(state);
  return result;
}

SimResult simulate(const Layout& layout, const InputVector& vector, const SimOptions& options) {
  if (!declares_phi(layout) || vector.count("PHI")) return run_to_fixpoint(layout, vector, options);

  // Two-step clock protocol: precharge with the clock low, then evaluate.
  InputVector precharge = vector;
  precharge["PHI"] = false;
  InputVector evaluate = vector;
  evaluate["PHI"] = true;

  const int max_cycles = resolved_max_cycles(layout, options);
  SimResult result;
  std::vector<TraceEntry>* trace = options.record_trace ? &result.trace : nullptr;

  SpinState state = clamp_inputs(layout, initial_state(layout), precharge);
  const int precharge_cycles = settle(layout, state, trace, options, 1, max_cycles);
  state = clamp_inputs(layout, std::move(state), evaluate);
  const int evaluate_cycles = settle(layout, state, trace, options, precharge_cycles + 1, max_cycles);

  result.macro_cycles = precharge_cycles + evaluate_cycles;
  result.outputs = read_outputs(layout, state);
  result.final_state = std::move(state);
  return result;
}

std::vector<std::map<std::string, bool>> run_stream(const Layout& layout,
                                                    const std::vector<InputVector>& vectors,
                                                    const SimOptions& options) {
  if (vectors.empty()) throw std::invalid_argument("stream needs at least one input vector");
  std::vector<InputVector> effective = vectors;
  if (declares_phi(layout))
    for (InputVector& v : effective)
      if (!v.count("PHI")) v["PHI"] = true;  // dynamic layouts stream with the clock held high

  const int latency = measure_latency(layout, options);
  const auto per_cycle = stream_raw(layout, effective, latency, options);
  std::vector<std::map<std::string, bool>> results;
  results.reserve(effective.size());
  for (std::size_t k = 0; k < effective.size(); ++k)
    results.push_back(per_cycle[k + static_cast<std::size_t>(latency)]);
  return results;
}

int measure_latency(const Layout& layout, const SimOptions& options) {
  InputVector all_zero, all_one;
  for (const IoPort& port : layout.inputs) {
    all_zero[port.name] = false;
    all_one[port.name] = true;
  }
  const auto low = run_to_fixpoint(layout, all_zero, options).outputs;
  const auto high = run_to_fixpoint(layout, all_one, options).outputs;
  if (low == high) return 0;  // outputs never move; nothing to wait for

  // A step probe: zeros for longer than any candidate latency, then ones.
  // The output flank appears exactly L cycles after the input flank, and a
  // step has no period, so no other shift can align.
  const int budget = default_max_cycles(layout);
  const int prefix = budget + 1;
  std::vector<InputVector> probes;
  probes.reserve(2 * static_cast<std::size_t>(prefix));
  for (int k = 0; k < prefix; ++k) probes.push_back(all_zero);
  for (int k = 0; k < prefix; ++k) probes.push_back(all_one);

  const auto per_cycle = stream_raw(layout, probes, budget, options);
  for (int shift = 0; shift <= budget; ++shift) {
    bool aligned = true;
    for (std::size_t k = 0; k < probes.size() && aligned; ++k)
      aligned = per_cycle[k + static_cast<std::size_t>(shift)] ==
                (k < static_cast<std::size_t>(prefix) ? low : high);
    if (aligned) return shift;
  }
  throw std::runtime_error("pipeline latency could not be measured within " +
                           std::to_string(budget) + " macro-cycles");
}

std::map<std::string, bool> read_outputs(const Layout& layout, const SpinState& state) {
  if (state.size() != layout.cells.size())
    throw std::invalid_argument("state size does not match the layout");
  std::map<std::string, bool> outputs;
  for (const IoPort& port : layout.outputs) outputs[port.name] = bit_of_spin(state[port.cell]);
  return outputs;
}

int default_max_cycles(const Layout& layout) {
  // Multi-source BFS from the input cells over edges and gated edges.
  const int n = static_cast<int>(layout.cells.size());
  std::vector<std::vector<int>> adjacency(n);
  const auto link = [&adjacency](int a, int b) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  };
  for (const ExchangeEdge& edge : layout.edges) link(edge.a, edge.b);
  for (const GatePad& gate : layout.gates) link(gate.edge.a, gate.edge.b);

  std::vector<int> distance(n, -1);
  std::queue<int> frontier;
  for (const IoPort& port : layout.inputs) {
    distance[port.cell] = 0;
    frontier.push(port.cell);
  }
  while (!frontier.empty()) {
    const int at = frontier.front();
    frontier.pop();
    for (int next : adjacency[at])
      if (distance[next] < 0) {
        distance[next] = distance[at] + 1;
        frontier.push(next);
      }
  }

  int path_cells = 0;
  for (const IoPort& port : layout.outputs)
    if (distance[port.cell] >= 0) path_cells = std::max(path_cells, distance[port.cell] + 1);
  return 4 * std::max(3, path_cells);
}

std::string trace_to_text(const Layout& layout, const std::vector<TraceEntry>& trace) {
  std::string text = "# cells:";
  for (const Cell& cell : layout.cells) {
    text += ' ';
    text += cell.id;
  }
  text += '\n';
  for (const TraceEntry& entry : trace) {
    text += std::to_string(entry.cycle);
    text += ' ';
    text += std::to_string(entry.phase);
    text += ' ';
    for (const Spin s : entry.state) text += (s == Spin::up) ? '+' : '-';
    text += '\n';
  }
  return text;
}

}  // namespace ssl
