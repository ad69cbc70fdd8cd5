#pragma once

#include <cstdint>

#include "sslsim/model.hpp"

namespace ssl {

// A relaxation task: minimize the energy over the free cells while every
// other cell stays clamped at its value in `state`. Free indices name
// non-fixed cells; values of free entries in `state` are ignored.
struct RelaxProblem {
  const Layout* layout = nullptr;
  std::vector<int> free_cells;
  SpinState state;
};

struct AnnealSchedule {
  double t_start = 3.0;
  double t_end = 0.1;   // must stay below t_start
  int sweeps = 500;
  std::uint64_t seed = 1;
};

// E(s) = sum_edges J_e * g_e(s) * s_a * s_b  -  h * sum_cells s_i, where the
// gate activation g_e reads the controller's spin from `state`.
double energy(const Layout& layout, const SpinState& state);

// Energy change of flipping `cell`; equals energy(flipped) - energy(state)
// exactly (same floating-point value, not approximately).
double effective_field(const Layout& layout, const SpinState& state, int cell);

inline constexpr int default_exact_limit = 20;

// Exhaustive ground state over the free cells. Among degenerate minimizers
// returns the one preferring up-spin on the lowest-index free cell, recursing
// by index. Throws std::invalid_argument if |free| exceeds exact_limit or the
// free set is malformed.
SpinState relax_exact(const RelaxProblem& problem, int exact_limit = default_exact_limit);

// Metropolis single-flip annealing with geometric cooling over `sweeps`
// sweeps, randomized scan order, seeded initial state; returns the
// best-energy state visited. Deterministic for a fixed seed.
SpinState relax_anneal(const RelaxProblem& problem, const AnnealSchedule& schedule);

// t_start = 3*max|J|, t_end = 0.05*bias, 500 sweeps.
AnnealSchedule default_schedule(const Layout& layout);

}  // namespace ssl
