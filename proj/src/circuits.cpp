#include "sslsim/circuits.hpp"

#include <stdexcept>

namespace ssl {

// Every fixture follows one weighting discipline: each free cell's weakest
// intended drive (over all eight input rows) exceeds the sum of everything
// pulling the other way — consumer edges, gates it controls, gated edges it
// partners in — by a slack of 0.25. That makes each logic layer settle to its
// intended value from any downstream state, so circuits work from the biased
// initial state and under pipelined streaming alike. All weights are
// multiples of 0.25, keeping energy arithmetic exact in doubles.
//
// Logic primitives used below, all reading inverted because couplings are
// antiferromagnetic:
//   inverter      one edge;
//   NAND/NOR      two input edges plus a pinned helper (down for NAND, up
//                 for NOR) at the same weight — the cell computes the
//                 minority of the three;
//   bare NAND     two input edges only; the bias resolves the mixed rows
//                 upward, which is exactly the NAND tie;
//   minority      three input edges, no helper — the cell inverts their
//                 majority;
//   3-input NOR   three input edges plus a double-weight pinned helper.

namespace {

Layout finish(LayoutBuilder& builder) {
  Layout layout = builder.build();
  const ValidationReport report = validate_layout(layout);
  if (!report.ok() || report.warning_count() > 0)
    throw std::logic_error("fixture failed validation:\n" + report.to_string());
  return layout;
}

// 19 dots, no gate pads: two-level NAND network. Sum is assembled as
// S = ABCi or ((A or B or Ci) and not Co); carry as Co = majority via
// NAND(not(AB), NAND(A or B, Ci)). The r1/r2 pair rebuffers not(AB) so the
// carry NAND is driven strongly enough to ignore a stale carry cell.
Layout complementary_adder() {
  LayoutBuilder b;
  b.cell("a", 0, 0, CellKind::input, 0)
      .cell("b", 0, 1, CellKind::input, 0)
      .cell("ci", 0, 2, CellKind::input, 0)
      .cell("na", 1, 0, CellKind::internal, 1)
      .cell("nb", 1, 1, CellKind::internal, 1)
      .cell("nci", 1, 2, CellKind::internal, 1)
      .cell("nab", 1, 3, CellKind::internal, 1)
      .cell("oab", 2, 0, CellKind::internal, 1)
      .cell("r1", 2, 1, CellKind::internal, 1)
      .cell("ab", 2, 2, CellKind::internal, 1)
      .cell("or3", 2, 3, CellKind::internal, 1)
      .cell("q1", 3, 0, CellKind::internal, 1)
      .cell("r2", 3, 1, CellKind::internal, 1)
      .cell("q2", 3, 2, CellKind::internal, 1)
      .cell("co", 4, 0, CellKind::output, 2)
      .cell("nco", 4, 1, CellKind::internal, 2)
      .fixed_cell("dn", 4, 2, 2, Spin::down)
      .cell("q3", 5, 0, CellKind::internal, 2)
      .cell("s", 5, 1, CellKind::output, 2);

  b.edge("a", "na", 11.0)     // na = not A
      .edge("b", "nb", 7.5)   // nb = not B
      .edge("ci", "nci", 3.25)
      .edge("a", "nab", 8.0)  // nab = NAND(A, B)
      .edge("b", "nab", 8.0)
      .edge("nab", "dn", 8.0)
      // oab = NAND(na, nb) = A or B. The input weights are deliberately
      // unequal so the pull-up helper carries real threshold weight (it must
      // outweigh the 7.75/4.25 imbalance, not just break ties the bias would
      // break anyway): every coupling here is load-bearing.
      .edge("na", "oab", 7.75)
      .edge("nb", "oab", 4.25)
      .edge("oab", "dn", 7.25)
      .edge("oab", "q1", 4.0)  // q1 = NAND(A or B, Ci)
      .edge("ci", "q1", 4.0)
      .edge("q1", "dn", 4.0)
      .edge("nab", "ab", 2.5)  // ab = A and B
      .edge("ab", "q2", 1.75)  // q2 = NAND(AB, Ci)
      .edge("ci", "q2", 1.75)
      .edge("q2", "dn", 1.75)
      .edge("nab", "r1", 4.75)  // r1/r2 rebuffer nab toward the carry
      .edge("r1", "r2", 4.0)
      .edge("na", "or3", 2.5)  // or3 = A or B or Ci
      .edge("nb", "or3", 2.5)
      .edge("nci", "or3", 2.5)
      .edge("or3", "dn", 5.0)
      .edge("r2", "co", 3.25)  // co = NAND(r2, q1) = majority, bare NAND
      .edge("q1", "co", 3.25)
      .edge("co", "nco", 2.5)
      .edge("nco", "q3", 1.75)  // q3 = NAND(not Co, A or B or Ci)
      .edge("or3", "q3", 1.75)
      .edge("q3", "dn", 1.75)
      .edge("q2", "s", 1.0)  // s = NAND(q2, q3), bare NAND
      .edge("q3", "s", 1.0);

  b.input("A", "a").input("B", "b").input("Ci", "ci").output("S", "s").output("Co", "co");
  return finish(b);
}

// 19 dots, 5 gate pads: the complementary carry/sum trees are replaced by
// gated pulls mirroring the pull-up/pull-down pairing. The sum output is
// pinned up for ABCi, down for the all-zero row, and otherwise follows the
// x3 = S witness chain S = MAJ(not Co, Ci, MAJ(A, B, not Ci)).
Layout mirror_adder() {
  LayoutBuilder b;
  b.cell("a", 0, 0, CellKind::input, 0)
      .cell("b", 0, 1, CellKind::input, 0)
      .cell("ci", 0, 2, CellKind::input, 0)
      .cell("nab", 1, 0, CellKind::internal, 1)
      .cell("d", 1, 1, CellKind::internal, 1)
      .cell("nor3", 1, 2, CellKind::internal, 1)
      .cell("nci", 1, 3, CellKind::internal, 1)
      .cell("nmaj", 1, 4, CellKind::internal, 1)
      .cell("m2", 1, 5, CellKind::internal, 1)
      .cell("ab", 2, 0, CellKind::internal, 1)
      .cell("abc", 2, 1, CellKind::internal, 1)
      .cell("im2", 2, 2, CellKind::internal, 1)
      .cell("ns", 3, 0, CellKind::internal, 1)
      .cell("x3", 4, 0, CellKind::internal, 1)
      .fixed_cell("up", 4, 1, 2, Spin::up)
      .fixed_cell("dn", 4, 2, 2, Spin::down)
      .fixed_cell("dn2", 4, 3, 2, Spin::down)
      .cell("s", 5, 0, CellKind::output, 2)
      .cell("co", 5, 1, CellKind::output, 2);

  b.edge("a", "nab", 6.25)  // nab = NAND(A, B)
      .edge("b", "nab", 6.25)
      .edge("nab", "dn", 6.25)
      .edge("nab", "ab", 2.75)  // ab = A and B
      .edge("a", "d", 2.75)     // d = NOR(A, B)
      .edge("b", "d", 2.75)
      .edge("d", "up", 2.75)
      .edge("nab", "abc", 2.75)  // abc = NOR(nab, nci) = A and B and Ci
      .edge("nci", "abc", 2.75)
      .edge("abc", "up", 2.75)
      .edge("a", "nor3", 2.75)  // nor3 = not (A or B or Ci)
      .edge("b", "nor3", 2.75)
      .edge("ci", "nor3", 2.75)
      .edge("nor3", "up", 5.5)
      .edge("ci", "nci", 10.5)
      .edge("a", "m2", 6.0)  // m2 = not MAJ(A, B, not Ci)
      .edge("b", "m2", 6.0)
      .edge("nci", "m2", 6.0)
      .edge("m2", "im2", 5.25)  // im2 = MAJ(A, B, not Ci)
      .edge("a", "nmaj", 5.25)  // nmaj = not Co
      .edge("b", "nmaj", 5.25)
      .edge("ci", "nmaj", 5.25)
      .edge("nmaj", "ns", 4.5)  // ns = not MAJ(not Co, Ci, im2) = not S
      .edge("ci", "ns", 4.5)
      .edge("im2", "ns", 4.5)
      .edge("ns", "x3", 2.75)  // x3 = S
      .edge("s", "ns", 1.0)    // weak default: s follows not ns
      .edge("co", "nci", 1.0);  // weak default: co follows Ci

  b.gate("s", "dn", 2.0, "abc", Spin::up)     // ABCi pins S = 1
      .gate("s", "up", 2.0, "nor3", Spin::up)  // all-zero row pins S = 0
      .gate("s", "dn2", 2.0, "x3", Spin::up)   // witness chain reinforces S = 1 rows
      .gate("co", "dn", 2.0, "ab", Spin::up)   // AB pins Co = 1
      .gate("co", "up", 2.0, "d", Spin::up);   // NOR(A,B) pins Co = 0

  b.input("A", "a").input("B", "b").input("Ci", "ci").output("S", "s").output("Co", "co");
  return finish(b);
}

// 11 dots, 6 gate pads, no pinned cells: a parity select p = A xor B routes
// complemented sources onto the outputs — S reads Ci or its inverse through
// the p-controlled pair, Co reads Ci when p and A otherwise.
Layout transmission_gate_adder() {
  LayoutBuilder b;
  b.cell("a", 0, 0, CellKind::input, 0)
      .cell("b", 0, 1, CellKind::input, 0)
      .cell("ci", 0, 2, CellKind::input, 0)
      .cell("na", 1, 0, CellKind::internal, 2)
      .cell("nb", 1, 1, CellKind::internal, 1)
      .cell("nci", 1, 2, CellKind::internal, 2)
      .cell("bb", 2, 1, CellKind::internal, 1)
      .cell("cib", 2, 2, CellKind::internal, 2)
      .cell("p", 3, 1, CellKind::internal, 1)
      .cell("s", 4, 0, CellKind::output, 2)
      .cell("co", 4, 1, CellKind::output, 2);

  b.edge("b", "nb", 11.0)     // nb = not B
      .edge("nb", "bb", 5.5)  // bb = B rebuffered
      .edge("a", "na", 1.75)  // na = not A
      .edge("ci", "nci", 4.5)
      .edge("nci", "cib", 1.75);  // cib = Ci rebuffered

  b.gate("p", "bb", 4.75, "a", Spin::up)      // A = 1: p = not B
      .gate("p", "nb", 4.75, "a", Spin::down)  // A = 0: p = B  -> p = A xor B
      .gate("s", "cib", 1.0, "p", Spin::up)    // p = 1: S = not Ci
      .gate("s", "nci", 1.0, "p", Spin::down)  // p = 0: S = Ci
      .gate("co", "nci", 1.0, "p", Spin::up)   // p = 1: Co = Ci
      .gate("co", "na", 1.0, "p", Spin::down);  // p = 0 (A = B): Co = A

  b.input("A", "a").input("B", "b").input("Ci", "ci").output("S", "s").output("Co", "co");
  return finish(b);
}

// 14 dots, 5 gate pads: generate/delete/propagate terms steer the carry —
// exactly one of them is active per row — and the propagate bit selects
// which complement of Ci feeds the sum.
Layout static_manchester_adder() {
  LayoutBuilder b;
  b.cell("a", 0, 0, CellKind::input, 0)
      .cell("b", 0, 1, CellKind::input, 0)
      .cell("ci", 0, 2, CellKind::input, 0)
      .cell("na", 1, 0, CellKind::internal, 1)
      .cell("nb", 1, 1, CellKind::internal, 1)
      .cell("del", 1, 2, CellKind::internal, 1)
      .cell("nci", 1, 3, CellKind::internal, 2)
      .cell("gen", 2, 0, CellKind::internal, 1)
      .cell("prp", 2, 1, CellKind::internal, 1)
      .fixed_cell("up", 2, 2, 2, Spin::up)
      .cell("cib", 2, 3, CellKind::internal, 2)
      .cell("co", 3, 0, CellKind::output, 2)
      .cell("s", 3, 1, CellKind::output, 2)
      .fixed_cell("dn", 3, 2, 2, Spin::down);

  b.edge("a", "na", 6.25)
      .edge("b", "nb", 6.25)
      .edge("na", "gen", 5.5)  // gen = NOR(na, nb) = A and B
      .edge("nb", "gen", 5.5)
      .edge("gen", "up", 5.5)
      .edge("a", "del", 5.5)  // del = NOR(A, B)
      .edge("b", "del", 5.5)
      .edge("del", "up", 5.5)
      .edge("gen", "prp", 3.75)  // prp = NOR(gen, del) = A xor B
      .edge("del", "prp", 3.75)
      .edge("prp", "up", 3.75)
      .edge("ci", "nci", 4.5)
      .edge("nci", "cib", 1.75);

  b.gate("co", "nci", 1.0, "prp", Spin::up)   // propagate: Co = Ci
      .gate("co", "dn", 1.0, "gen", Spin::up)  // generate: Co = 1
      .gate("co", "up", 1.0, "del", Spin::up)  // delete: Co = 0
      .gate("s", "cib", 1.0, "prp", Spin::up)  // p = 1: S = not Ci
      .gate("s", "nci", 1.0, "prp", Spin::down);  // p = 0: S = Ci

  b.input("A", "a").input("B", "b").input("Ci", "ci").output("S", "s").output("Co", "co");
  return finish(b);
}

// 18 dots, 5 gate pads: the delete term is replaced by a clocked precharge —
// phd = NAND(PHI, A or B) pins the carry low whenever the clock is low or
// neither input is set; with the clock high, {gen, prp, phd} partition the
// rows exactly as generate/propagate/delete. The propagate term comes from a
// four-NAND xor so the fixture carries its own NAND-level structure.
Layout dynamic_manchester_adder() {
  LayoutBuilder b;
  b.cell("a", 0, 0, CellKind::input, 0)
      .cell("b", 0, 1, CellKind::input, 0)
      .cell("ci", 0, 2, CellKind::input, 0)
      .cell("phi", 0, 3, CellKind::input, 0)
      .cell("t1", 1, 0, CellKind::internal, 1)
      .cell("del", 1, 1, CellKind::internal, 1)
      .cell("nci", 1, 2, CellKind::internal, 2)
      .cell("t2", 2, 0, CellKind::internal, 1)
      .cell("t3", 2, 1, CellKind::internal, 1)
      .cell("orab", 2, 2, CellKind::internal, 1)
      .cell("gen", 2, 3, CellKind::internal, 1)
      .cell("cib", 2, 4, CellKind::internal, 2)
      .cell("prp", 3, 0, CellKind::internal, 1)
      .cell("phd", 3, 1, CellKind::internal, 1)
      .cell("s", 4, 0, CellKind::output, 2)
      .cell("co", 4, 1, CellKind::output, 2)
      .fixed_cell("up", 4, 2, 2, Spin::up)
      .fixed_cell("dn", 4, 3, 2, Spin::down);

  b.edge("a", "t1", 11.5)  // t1 = NAND(A, B)
      .edge("b", "t1", 11.5)
      .edge("t1", "dn", 11.5)
      .edge("a", "t2", 4.5)  // t2 = NAND(A, t1)
      .edge("t1", "t2", 4.5)
      .edge("t2", "dn", 4.5)
      .edge("b", "t3", 4.5)  // t3 = NAND(B, t1)
      .edge("t1", "t3", 4.5)
      .edge("t3", "dn", 4.5)
      .edge("t2", "prp", 3.75)  // prp = NAND(t2, t3) = A xor B
      .edge("t3", "prp", 3.75)
      .edge("prp", "dn", 3.75)
      .edge("t1", "gen", 1.75)  // gen = A and B
      .edge("a", "del", 5.0)    // del = NOR(A, B)
      .edge("b", "del", 5.0)
      .edge("del", "up", 5.0)
      .edge("del", "orab", 4.25)  // orab = A or B
      .edge("phi", "phd", 3.5)    // phd = NAND(PHI, A or B)
      .edge("orab", "phd", 3.5)
      .edge("phd", "dn", 3.5)
      .edge("ci", "nci", 4.5)
      .edge("nci", "cib", 1.75);

  b.gate("co", "dn", 1.0, "gen", Spin::up)      // generate: Co = 1
      .gate("co", "nci", 1.0, "prp", Spin::up)  // propagate: Co = Ci
      .gate("co", "up", 2.75, "phd", Spin::up)  // precharge/kill: Co = 0, dominant
      .gate("s", "cib", 1.0, "prp", Spin::up)
      .gate("s", "nci", 1.0, "prp", Spin::down);

  b.input("A", "a").input("B", "b").input("Ci", "ci").input("PHI", "phi");
  b.output("S", "s").output("Co", "co");
  return finish(b);
}

}  // namespace

std::string adder_name(AdderKind kind) {
  switch (kind) {
    case AdderKind::complementary: return "complementary";
    case AdderKind::mirror: return "mirror";
    case AdderKind::transmission_gate: return "transmission_gate";
    case AdderKind::static_manchester: return "static_manchester";
    case AdderKind::dynamic_manchester: return "dynamic_manchester";
  }
  throw std::invalid_argument("unknown adder kind");
}

std::optional<AdderKind> adder_by_name(const std::string& name) {
  for (AdderKind kind : all_adder_kinds)
    if (adder_name(kind) == name) return kind;
  return std::nullopt;
}

Layout build_nand() {
  LayoutBuilder b;
  b.cell("a", 0, 0, CellKind::input, 0)
      .cell("b", 0, 1, CellKind::input, 0)
      .cell("y", 1, 0, CellKind::output, 1)
      .edge("a", "y", 1.0)
      .edge("b", "y", 1.0)
      .input("A", "a")
      .input("B", "b")
      .output("Y", "y");
  return finish(b);
}

Layout build_wire(int segments) {
  if (segments < 1) throw std::invalid_argument("a wire needs at least one segment");
  LayoutBuilder b;
  for (int k = 0; k <= segments; ++k) {
    const std::string id = "c" + std::to_string(k);
    const CellKind kind =
        k == 0 ? CellKind::input : (k == segments ? CellKind::output : CellKind::internal);
    b.cell(id, k, 0, kind, k % 3);
  }
  for (int k = 1; k <= segments; ++k)
    b.edge("c" + std::to_string(k - 1), "c" + std::to_string(k), 1.0 + 0.75 * (segments - k));
  b.input("IN", "c0").output("OUT", "c" + std::to_string(segments));
  return finish(b);
}

Layout build_adder(AdderKind kind) {
  switch (kind) {
    case AdderKind::complementary: return complementary_adder();
    case AdderKind::mirror: return mirror_adder();
    case AdderKind::transmission_gate: return transmission_gate_adder();
    case AdderKind::static_manchester: return static_manchester_adder();
    case AdderKind::dynamic_manchester: return dynamic_manchester_adder();
  }
  throw std::invalid_argument("unknown adder kind");
}

}  // namespace ssl
