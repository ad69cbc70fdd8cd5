#include "sslsim/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace ssl {

namespace {

void check_state_size(const Layout& layout, const SpinState& state) {
  if (state.size() != layout.cells.size())
    throw std::invalid_argument("state has " + std::to_string(state.size()) +
                                " entries for " + std::to_string(layout.cells.size()) + " cells");
}

// Ensures the free set is usable: in range, strictly ascending (hence
// duplicate-free), and never a fixed cell.
void check_free_set(const Layout& layout, const std::vector<int>& free_cells) {
  int prev = -1;
  for (int c : free_cells) {
    if (c < 0 || c >= static_cast<int>(layout.cells.size()))
      throw std::invalid_argument("free cell index " + std::to_string(c) + " out of range");
    if (c <= prev)
      throw std::invalid_argument("free cell indices must be strictly ascending");
    if (layout.cells[c].kind == CellKind::fixed)
      throw std::invalid_argument("fixed cell '" + layout.cells[c].id + "' cannot be free");
    prev = c;
  }
}

bool gate_active(const GatePad& gate, const SpinState& state) {
  return state[gate.controller] == gate.enable_when;
}

double pair_term(const ExchangeEdge& edge, const SpinState& state) {
  return edge.coupling * spin_sign(state[edge.a]) * spin_sign(state[edge.b]);
}

}  // namespace

double energy(const Layout& layout, const SpinState& state) {
  check_state_size(layout, state);
  double total = 0.0;
  for (const ExchangeEdge& edge : layout.edges) total += pair_term(edge, state);
  for (const GatePad& gate : layout.gates)
    if (gate_active(gate, state)) total += pair_term(gate.edge, state);
  double magnetization = 0.0;
  for (const Spin s : state) magnetization += spin_sign(s);
  return total - layout.params.bias * magnetization;
}

double effective_field(const Layout& layout, const SpinState& state, int cell) {
  check_state_size(layout, state);
  if (cell < 0 || cell >= static_cast<int>(layout.cells.size()))
    throw std::invalid_argument("cell index " + std::to_string(cell) + " out of range");
  double delta = 0.0;
  for (const ExchangeEdge& edge : layout.edges)
    if (edge.a == cell || edge.b == cell) delta += -2.0 * pair_term(edge, state);
  for (const GatePad& gate : layout.gates) {
    const bool endpoint = gate.edge.a == cell || gate.edge.b == cell;
    const bool controls = gate.controller == cell;
    if (!endpoint && !controls) continue;
    // General form: term = g * J * s_a * s_b before and after the flip.
    const double before = gate_active(gate, state) ? pair_term(gate.edge, state) : 0.0;
    const bool active_after = controls ? !gate_active(gate, state) : gate_active(gate, state);
    const double pair_after = endpoint ? -pair_term(gate.edge, state) : pair_term(gate.edge, state);
    delta += (active_after ? pair_after : 0.0) - before;
  }
  delta += 2.0 * layout.params.bias * spin_sign(state[cell]);
  return delta;
}

SpinState relax_exact(const RelaxProblem& problem, int exact_limit) {
  const Layout& layout = *problem.layout;
  check_state_size(layout, problem.state);
  check_free_set(layout, problem.free_cells);
  const int k = static_cast<int>(problem.free_cells.size());
  if (k > exact_limit)
    throw std::invalid_argument("exact relaxation over " + std::to_string(k) +
                                " free cells exceeds the limit of " + std::to_string(exact_limit));

  SpinState state = problem.state;
  if (k == 0) return state;

  // Assignment keys place the lowest-index free cell in the top bit with
  // up = 0, so the smaller key is the tie-break winner.
  for (int c : problem.free_cells) state[c] = Spin::up;
  double current = energy(layout, state);
  std::uint64_t key = 0;

  double best = current;
  std::uint64_t best_key = 0;

  // Gray-code walk: step m flips exactly one free cell, so each candidate
  // costs one effective_field evaluation.
  const std::uint64_t count = std::uint64_t{1} << k;
  for (std::uint64_t m = 1; m < count; ++m) {
    const int bit = std::countr_zero(m);
    const int j = k - 1 - bit;
    const int cell = problem.free_cells[j];
    current += effective_field(layout, state, cell);
    state[cell] = flipped(state[cell]);
    key ^= std::uint64_t{1} << bit;
    if (current < best || (current == best && key < best_key)) {
      best = current;
      best_key = key;
    }
  }

  for (int j = 0; j < k; ++j) {
    const std::uint64_t bit = std::uint64_t{1} << (k - 1 - j);
    state[problem.free_cells[j]] = (best_key & bit) ? Spin::down : Spin::up;
  }
  return state;
}

SpinState relax_anneal(const RelaxProblem& problem, const AnnealSchedule& schedule) {
  const Layout& layout = *problem.layout;
  check_state_size(layout, problem.state);
  check_free_set(layout, problem.free_cells);
  if (schedule.sweeps < 1) throw std::invalid_argument("sweeps must be at least 1");

  std::mt19937_64 rng(schedule.seed);
  const auto uniform01 = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };

  SpinState state = problem.state;
  for (int c : problem.free_cells) state[c] = (rng() & 1) ? Spin::up : Spin::down;
  if (problem.free_cells.empty()) return state;

  double current = energy(layout, state);
  SpinState best = state;
  double best_energy = current;

  std::vector<int> order = problem.free_cells;
  const int sweeps = schedule.sweeps;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const double frac = sweeps > 1 ? static_cast<double>(sweep) / (sweeps - 1) : 0.0;
    const double t = schedule.t_start * std::pow(schedule.t_end / schedule.t_start, frac);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      const std::size_t j = rng() % (i + 1);
      std::swap(order[i], order[j]);
    }
    for (int cell : order) {
      const double delta = effective_field(layout, state, cell);
      bool accept = delta < 0.0;
      if (!accept && t > 0.0) accept = uniform01() < std::exp(-delta / t);
      if (!accept) continue;
      state[cell] = flipped(state[cell]);
      current += delta;
      if (current < best_energy) {
        best_energy = current;
        best = state;
      }
    }
  }
  return best;
}

AnnealSchedule default_schedule(const Layout& layout) {
  double max_coupling = 0.0;
  for (const ExchangeEdge& edge : layout.edges)
    max_coupling = std::max(max_coupling, std::abs(edge.coupling));
  for (const GatePad& gate : layout.gates)
    max_coupling = std::max(max_coupling, std::abs(gate.edge.coupling));
  if (max_coupling == 0.0) max_coupling = 1.0;
  AnnealSchedule schedule;
  schedule.t_start = 3.0 * max_coupling;
  schedule.t_end = 0.05 * layout.params.bias;
  schedule.sweeps = 500;
  schedule.seed = 1;
  return schedule;
}

}  // namespace ssl
