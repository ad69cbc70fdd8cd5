#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "sslsim/model.hpp"
#include "support/test_util.hpp"

using namespace ssl;

namespace {

const char* kMinimalDoc = R"([cells]
a 0 0 input 0
y 1 0 output 1

[edges]
a y 1

[io]
input A = a
output Y = y
)";

Layout valid_layout() {
  LayoutBuilder b;
  b.cell("a", 0, 0, CellKind::input, 0)
      .cell("b", 0, 1, CellKind::input, 0)
      .cell("m", 1, 0, CellKind::internal, 1)
      .cell("y", 2, 0, CellKind::output, 2)
      .fixed_cell("f", 2, 1, 2, Spin::down)
      .edge("a", "m", 1)
      .edge("b", "m", 1)
      .gate("m", "y", 1.5, "b", Spin::up)
      .edge("y", "f", 0.75)
      .input("A", "a")
      .input("B", "b")
      .output("Y", "y");
  return b.build();
}

}  // namespace

TEST_CASE("minimal two-cell document parses") {
  Layout lay = parse_layout(kMinimalDoc);
  CHECK(lay.cells.size() == 2);
  CHECK(lay.edges.size() == 1);
  CHECK(lay.gates.empty());
  CHECK(lay.params.bias == 0.5);  // [params] omitted -> default
  CHECK(lay.cells[0].id == "a");
  CHECK(lay.cells[0].kind == CellKind::input);
  CHECK(lay.cells[1].id == "y");
  CHECK(lay.edges[0].a == 0);
  CHECK(lay.edges[0].b == 1);
  CHECK(lay.edges[0].coupling == 1.0);
  CHECK(lay.input_cell("A") == 0);
  CHECK(lay.output_cell("Y") == 1);
  CHECK(lay.cell_index("nope") == -1);
}

TEST_CASE("cells are sorted into canonical id order") {
  Layout lay = parse_layout(R"([cells]
zz 0 0 input 0
aa 1 0 output 1

[edges]
zz aa 1

[io]
input Z = zz
output A = aa
)");
  CHECK(lay.cells[0].id == "aa");
  CHECK(lay.cells[1].id == "zz");
  // edge endpoints are indices into the sorted list, normalized a < b
  CHECK(lay.edges[0].a == 0);
  CHECK(lay.edges[0].b == 1);
}

TEST_CASE("fixed cells carry their value; full grammar round-trips") {
  const char* doc = R"(# comment line
[params]
bias = 0.75

[cells]
a 0 0 input 0
f 3 0 fixed 2 -1
m 1 0 internal 1   # trailing comment
y 2 0 output 2

[edges]
a m 2.5
m y 1.25

[gates]
y f 1.5 ctrl=m when=-1

[io]
input A = a
output Y = y
)";
  Layout lay = parse_layout(doc);
  CHECK(lay.params.bias == 0.75);
  int f = lay.cell_index("f");
  REQUIRE(f >= 0);
  CHECK(lay.cells[f].kind == CellKind::fixed);
  CHECK(lay.cells[f].fixed_value == Spin::down);
  REQUIRE(lay.gates.size() == 1);
  CHECK(lay.gates[0].enable_when == Spin::down);
  CHECK(lay.gates[0].controller == lay.cell_index("m"));

  Layout again = parse_layout(serialize_layout(lay));
  CHECK(again == lay);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const char* doc) {
    try {
      parse_layout(doc);
    } catch (const ParseError& e) {
      return e.line;
    }
    return -1;
  };

  CHECK(line_of("[cells]\nx 0\n") == 2);                         // truncated cell line
  CHECK(line_of("[nonsense]\n") == 1);                           // unknown section
  CHECK(line_of("a 0 0 input 0\n") == 1);                        // content before any section
  CHECK(line_of("[cells]\na 0 0 input 0\na 1 0 input 0\n") == 3);  // duplicate id
  CHECK(line_of("[cells]\na 0 0 inputt 0\n") == 2);              // bad kind
  CHECK(line_of("[cells]\na 0 0 input zero\n") == 2);            // bad zone token
  CHECK(line_of("[cells]\nf 0 0 fixed 2\n") == 2);               // fixed without value
  CHECK(line_of("[cells]\na 0 0 input 0 +1\n") == 2);            // spin on non-fixed
  CHECK(line_of("[cells]\nf 0 0 fixed 2 up\n") == 2);            // bad spin token
  CHECK(line_of("[params]\nbias 0.5\n") == 2);                   // missing '='
  CHECK(line_of("[params]\nmass = 1\n") == 2);                   // unknown key
  CHECK(line_of("[params]\nbias = heavy\n") == 2);               // bad number
  CHECK(line_of("[cells]\na 0 0 input 0\n[cells]\n") == 3);      // duplicate section
  CHECK(line_of("[cells]\na 0 0 input 0\n[edges]\na 1\n") == 4); // bad edge arity
  CHECK(line_of("[cells]\na 0 0 input 0\n[edges]\na b 1\n[io]\ninput A = a\n") == 4);  // dangling ref
  CHECK(line_of("[cells]\na 0 0 input 0\n[gates]\na b 1 when=+1 ctrl=c\n") == 4);  // gate grammar
  CHECK(line_of("[cells]\na 0 0 input 0\n[io]\ninputt A = a\n") == 4);
  CHECK(line_of("[cells]\na 0 0 input 0\n[io]\ninput A a\n") == 4);
}

TEST_CASE("missing sections are document-level errors") {
  CHECK_THROWS_AS(parse_layout("[io]\n"), ParseError);
  CHECK_THROWS_AS(parse_layout("[cells]\na 0 0 input 0\n"), ParseError);  // no [io]
  CHECK_THROWS_WITH_AS(parse_layout(""), doctest::Contains("missing [cells]"), ParseError);
}

TEST_CASE("parse rejects layouts with validation errors") {
  // position collision
  CHECK_THROWS_AS(parse_layout(R"([cells]
a 0 0 input 0
y 0 0 output 1

[edges]
a y 1

[io]
input A = a
output Y = y
)"),
                  ParseError);
  // orphan internal cell (no couplings at all)
  CHECK_THROWS_AS(parse_layout(R"([cells]
a 0 0 input 0
m 1 0 internal 1

[io]
input A = a
)"),
                  ParseError);
}

TEST_CASE("validate: the reference layout is clean") {
  ValidationReport r = validate_layout(valid_layout());
  CHECK(r.ok());
  CHECK(r.issues.empty());
}

TEST_CASE("validate: every broken invariant is reported") {
  auto broken = [](auto mutate) {
    Layout lay = valid_layout();
    mutate(lay);
    return !validate_layout(lay).ok();
  };

  CHECK(broken([](Layout& l) { l.cells[1].id = l.cells[0].id; }));          // duplicate id
  CHECK(broken([](Layout& l) { std::swap(l.cells[0], l.cells[1]); }));      // order broken
  CHECK(broken([](Layout& l) { l.cells[1].x = l.cells[0].x, l.cells[1].y = l.cells[0].y; }));
  CHECK(broken([](Layout& l) { l.cells[2].zone = 3; }));
  CHECK(broken([](Layout& l) { l.cells[2].zone = -1; }));
  CHECK(broken([](Layout& l) { l.cells[l.cell_index("f")].fixed_value.reset(); }));
  CHECK(broken([](Layout& l) { l.cells[l.cell_index("m")].fixed_value = Spin::up; }));
  CHECK(broken([](Layout& l) { l.edges[0].b = l.edges[0].a; }));            // self loop
  CHECK(broken([](Layout& l) { std::swap(l.edges[0].a, l.edges[0].b); }));  // not normalized
  CHECK(broken([](Layout& l) { l.edges[0].coupling = 0.0; }));
  CHECK(broken([](Layout& l) { l.edges.push_back(l.edges[0]); }));          // duplicate pair
  CHECK(broken([](Layout& l) { l.edges[0].b = 99; }));                      // out of range
  CHECK(broken([](Layout& l) { l.gates[0].controller = l.gates[0].edge.a; }));
  CHECK(broken([](Layout& l) { l.gates[0].controller = 99; }));
  CHECK(broken([](Layout& l) { l.params.bias = 0.0; }));
  CHECK(broken([](Layout& l) { l.params.bias = -0.5; }));
  CHECK(broken([](Layout& l) { l.params.bias = 1.5; }));  // >= 2*min|J| (min is 0.75)
  CHECK(broken([](Layout& l) { l.inputs[0].name = l.inputs[1].name; }));
  CHECK(broken([](Layout& l) { l.inputs[0].cell = l.cell_index("m"); }));   // port on internal
  CHECK(broken([](Layout& l) { l.inputs.pop_back(); }));                    // undeclared input
  CHECK(broken([](Layout& l) { l.outputs.clear(); }));                      // undeclared output
  CHECK(broken([](Layout& l) { l.outputs[0].cell = l.cell_index("a"); })); // output port on input
  CHECK(broken([](Layout& l) { l.cells[l.cell_index("m")].id = "zzz"; })); // breaks sorted order
}

TEST_CASE("validate: duplicate pair across edge and gate") {
  Layout lay = valid_layout();
  ExchangeEdge dup = lay.gates[0].edge;
  lay.edges.push_back(dup);
  std::sort(lay.edges.begin(), lay.edges.end(),
            [](const ExchangeEdge& l, const ExchangeEdge& r) {
              return std::pair(l.a, l.b) < std::pair(r.a, r.b);
            });
  CHECK_FALSE(validate_layout(lay).ok());
}

TEST_CASE("validate: gate zone ordering is a warning, not an error") {
  // controller in the same zone as the gated cells
  LayoutBuilder b;
  b.cell("a", 0, 0, CellKind::input, 0)
      .cell("c", 0, 1, CellKind::internal, 1)
      .cell("u", 1, 0, CellKind::internal, 1)
      .cell("y", 2, 0, CellKind::output, 1)
      .edge("a", "c", 1)
      .edge("a", "u", 1)
      .gate("u", "y", 1, "c", Spin::up)
      .input("A", "a")
      .output("Y", "y");
  Layout lay = b.build();
  ValidationReport r = validate_layout(lay);
  CHECK(r.ok());
  CHECK(r.error_count() == 0);
  CHECK(r.warning_count() == 1);
  CHECK(r.to_string().find("warning") == 0);

  // controller strictly earlier -> clean
  lay.cells[lay.cell_index("c")].zone = 0;
  ValidationReport clean = validate_layout(lay);
  CHECK(clean.issues.empty());
}

TEST_CASE("serialize is deterministic and canonical") {
  Layout lay = valid_layout();
  std::string doc1 = serialize_layout(lay);
  std::string doc2 = serialize_layout(lay);
  CHECK(doc1 == doc2);

  // canonical documents are byte-stable through parse -> serialize
  Layout reparsed = parse_layout(doc1);
  CHECK(serialize_layout(reparsed) == doc1);
  CHECK(reparsed == lay);
}

TEST_CASE("io declaration order is preserved") {
  Layout lay = parse_layout(R"([cells]
a 0 0 input 0
b 1 0 input 0
y 2 0 output 1

[edges]
a y 1
b y 1

[io]
input B = b
input A = a
output Y = y
)");
  REQUIRE(lay.inputs.size() == 2);
  CHECK(lay.inputs[0].name == "B");
  CHECK(lay.inputs[1].name == "A");
  Layout again = parse_layout(serialize_layout(lay));
  CHECK(again.inputs[0].name == "B");
}

TEST_CASE("round-trip is the identity on 200 random layouts") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    ssl::Layout lay = testutil::random_layout(seed);
    CAPTURE(seed);
    REQUIRE(validate_layout(lay).ok());
    std::string doc = serialize_layout(lay);
    Layout back = parse_layout(doc);
    REQUIRE(back == lay);
    REQUIRE(serialize_layout(back) == doc);
  }
}

TEST_CASE("number formatting is shortest-round-trip") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(2.75) == "2.75");
  CHECK(format_double(10.5) == "10.5");
  CHECK(format_double(-0.25) == "-0.25");
  for (int i = -40; i <= 40; ++i) {
    double v = 0.25 * i;
    CHECK(parse_double_token(format_double(v)) == v);
  }
  CHECK(parse_double_token("+1.5") == 1.5);
  CHECK_THROWS_AS(parse_double_token("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double_token(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_int_token("3.5"), std::invalid_argument);
  CHECK(parse_int_token("-2") == -2);
}

TEST_CASE("builder rejects duplicate and dangling ids") {
  LayoutBuilder dup;
  dup.cell("a", 0, 0, CellKind::input, 0).cell("a", 1, 0, CellKind::output, 1);
  CHECK_THROWS_AS(dup.build(), std::invalid_argument);

  LayoutBuilder dangling;
  dangling.cell("a", 0, 0, CellKind::input, 0).edge("a", "ghost", 1);
  CHECK_THROWS_AS(dangling.build(), std::invalid_argument);
}
