#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ssl {

// Spin orientation of one cell. Up-spin is logic 1, down-spin is logic 0.
enum class Spin : std::int8_t { down = -1, up = +1 };

inline int spin_sign(Spin s) { return static_cast<int>(s); }
inline Spin flipped(Spin s) { return s == Spin::up ? Spin::down : Spin::up; }
inline Spin spin_of_bit(bool b) { return b ? Spin::up : Spin::down; }
inline bool bit_of_spin(Spin s) { return s == Spin::up; }

enum class CellKind : std::uint8_t { input, output, internal, fixed };

std::string_view kind_name(CellKind k);

// One cell. The position is a documentation-grade grid coordinate (unique per
// layout); logic structure lives entirely in the explicit coupling lists.
struct Cell {
  std::string id;
  int x = 0;
  int y = 0;
  CellKind kind = CellKind::internal;
  int zone = 0;                     // clock zone, one of 0,1,2
  std::optional<Spin> fixed_value;  // present iff kind == fixed

  bool operator==(const Cell&) const = default;
};

// Exchange coupling between two cells (indices into Layout::cells).
// coupling > 0 is antiferromagnetic: anti-aligned endpoints lower the energy.
struct ExchangeEdge {
  int a = -1;
  int b = -1;
  double coupling = 1.0;

  bool operator==(const ExchangeEdge&) const = default;
};

// An exchange edge that acts only while the controller cell's spin equals
// enable_when; otherwise its effective coupling is zero.
struct GatePad {
  ExchangeEdge edge;
  int controller = -1;
  Spin enable_when = Spin::up;

  bool operator==(const GatePad&) const = default;
};

struct PhysicsParams {
  double bias = 0.5;  // global up-favoring field h; requires 0 < h < 2*min|J|

  bool operator==(const PhysicsParams&) const = default;
};

// Named binding of an external signal to a cell.
struct IoPort {
  std::string name;
  int cell = -1;

  bool operator==(const IoPort&) const = default;
};

// Spin assignment for every cell, indexed like Layout::cells.
using SpinState = std::vector<Spin>;

// Immutable circuit description. Canonical form: cells sorted by id, edge
// endpoints normalized a < b and edges sorted, io ports in declaration order.
struct Layout {
  std::vector<Cell> cells;
  std::vector<ExchangeEdge> edges;
  std::vector<GatePad> gates;
  std::vector<IoPort> inputs;
  std::vector<IoPort> outputs;
  PhysicsParams params;

  int cell_index(std::string_view id) const;        // -1 when absent
  int input_cell(std::string_view name) const;      // -1 when absent
  int output_cell(std::string_view name) const;     // -1 when absent

  bool operator==(const Layout&) const = default;
};

// Incremental construction by id; build() resolves ids to indices and sorts
// everything into canonical form. Throws std::invalid_argument on duplicate
// or dangling ids.
class LayoutBuilder {
 public:
  LayoutBuilder& cell(std::string id, int x, int y, CellKind kind, int zone);
  LayoutBuilder& fixed_cell(std::string id, int x, int y, int zone, Spin value);
  LayoutBuilder& edge(std::string a, std::string b, double coupling);
  LayoutBuilder& gate(std::string a, std::string b, double coupling,
                      std::string controller, Spin enable_when);
  LayoutBuilder& input(std::string name, std::string cell_id);
  LayoutBuilder& output(std::string name, std::string cell_id);
  LayoutBuilder& bias(double h);
  Layout build() const;

 private:
  struct RawEdge {
    std::string a, b;
    double coupling;
  };
  struct RawGate {
    std::string a, b;
    double coupling;
    std::string controller;
    Spin enable_when;
  };
  struct RawPort {
    std::string name, cell_id;
  };

  std::vector<Cell> cells_;
  std::vector<RawEdge> edges_;
  std::vector<RawGate> gates_;
  std::vector<RawPort> inputs_;
  std::vector<RawPort> outputs_;
  PhysicsParams params_;
};

struct ParseError : std::runtime_error {
  int line;  // 1-based; 0 for document-level findings
  ParseError(int line, const std::string& msg);
};

struct ValidationIssue {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const;  // no errors (warnings permitted)
  int error_count() const;
  int warning_count() const;
  std::string to_string() const;
};

ValidationReport validate_layout(const Layout& layout);

// Parses a layout document. Throws ParseError on grammar problems and on any
// validation error; validation warnings are permitted.
Layout parse_layout(std::string_view text);

// Deterministic canonical document; round-trips through parse_layout.
std::string serialize_layout(const Layout& layout);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Strict numeric token parsing (full token must be consumed).
double parse_double_token(std::string_view token);   // throws std::invalid_argument
int parse_int_token(std::string_view token);         // throws std::invalid_argument

}  // namespace ssl
