#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "sslsim/model.hpp"
#include "sslsim/solver.hpp"
#include "support/test_util.hpp"

using namespace ssl;

namespace {

// Two inputs coupled antiferromagnetically into one output; with any bias in
// the valid window the tie rows settle up, so the output computes NAND.
Layout nand_layout(double bias) {
  return LayoutBuilder()
      .cell("a", 0, 0, CellKind::input, 0)
      .cell("b", 0, 1, CellKind::input, 0)
      .cell("y", 1, 0, CellKind::output, 1)
      .edge("a", "y", 1.0)
      .edge("b", "y", 1.0)
      .input("A", "a")
      .input("B", "b")
      .output("Y", "y")
      .bias(bias)
      .build();
}

Spin spin_of(bool bit) { return bit ? Spin::up : Spin::down; }

}  // namespace

TEST_CASE("energy matches hand-computed values on a coupled pair") {
  Layout pair = LayoutBuilder()
                    .cell("a", 0, 0, CellKind::input, 0)
                    .cell("y", 1, 0, CellKind::output, 0)
                    .edge("a", "y", 1.0)
                    .input("A", "a")
                    .output("Y", "y")
                    .build();
  CHECK(energy(pair, {Spin::up, Spin::down}) == -1.0);
  CHECK(energy(pair, {Spin::down, Spin::up}) == -1.0);
  CHECK(energy(pair, {Spin::up, Spin::up}) == 0.0);   // +1 coupling - 0.5*2 bias
  CHECK(energy(pair, {Spin::down, Spin::down}) == 2.0);
  CHECK_THROWS_AS(energy(pair, SpinState{Spin::up}), std::invalid_argument);
}

TEST_CASE("energy and effective_field match the brute-force oracle") {
  int samples = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Layout layout = testutil::random_layout(seed);
    std::mt19937_64 rng(seed * 7919 + 3);
    for (int round = 0; round < 20; ++round) {
      SpinState state = testutil::random_state(layout, rng);
      CHECK(energy(layout, state) == testutil::oracle_energy(layout, state));
      const int cell = static_cast<int>(rng() % layout.cells.size());
      SpinState after = state;
      after[cell] = flipped(after[cell]);
      const double want = testutil::oracle_energy(layout, after) - testutil::oracle_energy(layout, state);
      CHECK(effective_field(layout, state, cell) == want);
      ++samples;
    }
  }
  CHECK(samples == 1000);
}

TEST_CASE("flip costs on minimal fragments") {
  Layout lone = LayoutBuilder().cell("a", 0, 0, CellKind::input, 0).input("A", "a").build();
  CHECK(effective_field(lone, {Spin::up}, 0) == 1.0);    // flipping up -> down costs 2h
  CHECK(effective_field(lone, {Spin::down}, 0) == -1.0);

  Layout gate = nand_layout(0.5);
  SpinState state{Spin::up, Spin::up, Spin::down};
  CHECK(effective_field(gate, state, 2) == 3.0);  // -2.5 -> +0.5
  CHECK_THROWS_AS(effective_field(gate, state, 3), std::invalid_argument);
}

TEST_CASE("relax_exact matches the oracle on random problems") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Layout layout = testutil::random_layout(seed);
    std::mt19937_64 rng(seed * 977 + 13);
    SpinState boundary = testutil::random_state(layout, rng);
    std::vector<int> free_cells = testutil::random_free_set(layout, rng, 10);
    RelaxProblem problem{&layout, free_cells, boundary};
    SpinState got = relax_exact(problem);
    SpinState want = testutil::oracle_ground_state(layout, free_cells, boundary);
    CHECK(got == want);
  }
}

TEST_CASE("degenerate minima prefer up on the lowest index, recursing by index") {
  Layout two_pairs = LayoutBuilder()
                         .cell("a", 0, 0, CellKind::input, 0)
                         .cell("b", 1, 0, CellKind::output, 0)
                         .cell("c", 0, 1, CellKind::input, 0)
                         .cell("d", 1, 1, CellKind::output, 0)
                         .edge("a", "b", 1.0)
                         .edge("c", "d", 1.0)
                         .input("A", "a")
                         .input("C", "c")
                         .output("B", "b")
                         .output("D", "d")
                         .build();
  RelaxProblem problem{&two_pairs, {0, 1, 2, 3}, SpinState(4, Spin::down)};
  SpinState got = relax_exact(problem);
  CHECK(got == SpinState{Spin::up, Spin::down, Spin::up, Spin::down});
}

TEST_CASE("relax_exact respects clamped boundary cells") {
  Layout gate = nand_layout(0.5);
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      SpinState boundary{spin_of(a), spin_of(b), Spin::up};
      RelaxProblem problem{&gate, {2}, boundary};
      SpinState got = relax_exact(problem);
      CHECK(got[0] == boundary[0]);
      CHECK(got[1] == boundary[1]);
      CHECK(got[2] == spin_of(!(a && b)));
    }
  }
}

TEST_CASE("the output stays correct across the documented bias window") {
  for (double bias : {0.1, 0.5, 1.0, 1.5}) {
    CAPTURE(bias);
    Layout gate = nand_layout(bias);
    for (int a = 0; a <= 1; ++a) {
      for (int b = 0; b <= 1; ++b) {
        RelaxProblem problem{&gate, {2}, SpinState{spin_of(a), spin_of(b), Spin::up}};
        CHECK(relax_exact(problem)[2] == spin_of(!(a && b)));
      }
    }
  }
}

TEST_CASE("uniform scaling of couplings and bias preserves ground states") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Layout layout = testutil::random_layout(seed);
    std::mt19937_64 rng(seed + 41);
    SpinState boundary = testutil::random_state(layout, rng);
    std::vector<int> free_cells = testutil::random_free_set(layout, rng, 8);
    RelaxProblem problem{&layout, free_cells, boundary};
    SpinState want = relax_exact(problem);
    for (double scale : {0.25, 3.0}) {
      Layout scaled = layout;
      for (ExchangeEdge& edge : scaled.edges) edge.coupling *= scale;
      for (GatePad& gate : scaled.gates) gate.edge.coupling *= scale;
      scaled.params.bias *= scale;
      RelaxProblem scaled_problem{&scaled, free_cells, boundary};
      CHECK(relax_exact(scaled_problem) == want);
    }
  }
}

TEST_CASE("a disabled gate contributes exactly nothing") {
  Layout gated = LayoutBuilder()
                     .cell("t", 0, 0, CellKind::input, 0)
                     .cell("x", 1, 0, CellKind::internal, 1)
                     .cell("y", 2, 0, CellKind::output, 1)
                     .edge("t", "x", 1.0)
                     .gate("x", "y", 2.0, "t", Spin::up)
                     .input("T", "t")
                     .output("Y", "y")
                     .build();
  Layout ungated = gated;
  ungated.gates.clear();

  for (int mask = 0; mask < 8; ++mask) {
    SpinState state{spin_of(mask & 1), spin_of(mask & 2), spin_of(mask & 4)};
    const double with_gate = energy(gated, state);
    const double without = energy(ungated, state);
    const double pair = 2.0 * spin_sign(state[1]) * spin_sign(state[2]);
    if (state[0] == Spin::up)
      CHECK(with_gate == without + pair);
    else
      CHECK(with_gate == without);
  }
}

TEST_CASE("annealing finds exact ground states on random problems") {
  int matches = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Layout layout = testutil::random_layout(seed);
    std::mt19937_64 rng(seed * 6151 + 7);
    SpinState boundary = testutil::random_state(layout, rng);
    std::vector<int> free_cells = testutil::random_free_set(layout, rng, 12);
    RelaxProblem problem{&layout, free_cells, boundary};

    const SpinState exact = relax_exact(problem);
    AnnealSchedule schedule = default_schedule(layout);
    schedule.seed = seed;
    const SpinState annealed = relax_anneal(problem, schedule);

    for (std::size_t i = 0; i < boundary.size(); ++i) {
      bool is_free = std::find(free_cells.begin(), free_cells.end(), static_cast<int>(i)) !=
                     free_cells.end();
      if (!is_free) CHECK(annealed[i] == boundary[i]);
    }

    const double exact_energy = energy(layout, exact);
    const double annealed_energy = energy(layout, annealed);
    CHECK(annealed_energy >= exact_energy);  // can never beat the global minimum
    if (annealed_energy == exact_energy) ++matches;
  }
  CHECK(matches >= 99);
}

TEST_CASE("annealing is deterministic for a fixed seed") {
  Layout layout = testutil::random_layout(7);
  std::mt19937_64 rng(99);
  SpinState boundary = testutil::random_state(layout, rng);
  std::vector<int> free_cells = testutil::random_free_set(layout, rng, 10);
  RelaxProblem problem{&layout, free_cells, boundary};
  AnnealSchedule schedule = default_schedule(layout);
  schedule.seed = 1234;
  CHECK(relax_anneal(problem, schedule) == relax_anneal(problem, schedule));
}

TEST_CASE("a single zero-temperature sweep descends from the seeded start") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Layout layout = testutil::random_layout(seed);
    std::mt19937_64 rng(seed * 31 + 5);
    SpinState boundary = testutil::random_state(layout, rng);
    std::vector<int> free_cells = testutil::random_free_set(layout, rng, 10);
    RelaxProblem problem{&layout, free_cells, boundary};

    AnnealSchedule greedy{0.0, 0.0, 1, seed};
    const SpinState got = relax_anneal(problem, greedy);

    // The documented initial state: free cells seeded from the schedule's
    // generator in ascending index order.
    std::mt19937_64 init_rng(seed);
    SpinState initial = boundary;
    for (int c : free_cells) initial[c] = (init_rng() & 1) ? Spin::up : Spin::down;

    CHECK(energy(layout, got) <= energy(layout, initial));
    CHECK(energy(layout, got) >= energy(layout, relax_exact(problem)));
  }
}

TEST_CASE("relax limits and malformed free sets are rejected") {
  Layout gate = nand_layout(0.5);
  SpinState state(3, Spin::up);
  CHECK_THROWS_AS(relax_exact({&gate, {0, 1, 2}, state}, 2), std::invalid_argument);
  CHECK_THROWS_AS(relax_exact({&gate, {1, 0}, state}), std::invalid_argument);
  CHECK_THROWS_AS(relax_exact({&gate, {1, 1}, state}), std::invalid_argument);
  CHECK_THROWS_AS(relax_exact({&gate, {5}, state}), std::invalid_argument);
  CHECK_THROWS_AS(relax_exact({&gate, {0}, SpinState(2, Spin::up)}), std::invalid_argument);

  Layout pinned = LayoutBuilder()
                      .cell("a", 0, 0, CellKind::input, 0)
                      .fixed_cell("f", 1, 0, 0, Spin::down)
                      .edge("a", "f", 1.0)
                      .input("A", "a")
                      .build();
  CHECK_THROWS_AS(relax_exact({&pinned, {1}, SpinState(2, Spin::up)}), std::invalid_argument);

  AnnealSchedule bad{1.0, 0.1, 0, 1};
  CHECK_THROWS_AS(relax_anneal({&gate, {2}, state}, bad), std::invalid_argument);
}

TEST_CASE("relax with no free cells returns the boundary unchanged") {
  Layout gate = nand_layout(0.5);
  SpinState state{Spin::up, Spin::down, Spin::down};
  CHECK(relax_exact({&gate, {}, state}) == state);
  CHECK(relax_anneal({&gate, {}, state}, default_schedule(gate)) == state);
}

TEST_CASE("the default schedule is derived from the layout") {
  Layout layout = LayoutBuilder()
                      .cell("a", 0, 0, CellKind::input, 0)
                      .cell("y", 1, 0, CellKind::output, 0)
                      .edge("a", "y", 3.0)
                      .input("A", "a")
                      .output("Y", "y")
                      .bias(1.0)
                      .build();
  AnnealSchedule schedule = default_schedule(layout);
  CHECK(schedule.t_start == 9.0);
  CHECK(schedule.t_end == 0.05);
  CHECK(schedule.sweeps == 500);
  CHECK(schedule.seed == 1);
}
