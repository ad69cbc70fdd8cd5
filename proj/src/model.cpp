#include "sslsim/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace ssl {

namespace {

bool is_word_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_word_char(char c) { return is_word_start(c) || (c >= '0' && c <= '9'); }

bool is_word(std::string_view s) {
  if (s.empty() || !is_word_start(s[0])) return false;
  return std::all_of(s.begin(), s.end(), is_word_char);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::string_view kind_name(CellKind k) {
  switch (k) {
    case CellKind::input: return "input";
    case CellKind::output: return "output";
    case CellKind::internal: return "internal";
    case CellKind::fixed: return "fixed";
  }
  return "?";
}

int Layout::cell_index(std::string_view id) const {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].id == id) return static_cast<int>(i);
  return -1;
}

int Layout::input_cell(std::string_view name) const {
  for (const IoPort& p : inputs)
    if (p.name == name) return p.cell;
  return -1;
}

int Layout::output_cell(std::string_view name) const {
  for (const IoPort& p : outputs)
    if (p.name == name) return p.cell;
  return -1;
}

ParseError::ParseError(int line_no, const std::string& msg)
    : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
      line(line_no) {}

bool ValidationReport::ok() const { return error_count() == 0; }

int ValidationReport::error_count() const {
  int n = 0;
  for (const ValidationIssue& i : issues)
    if (i.severity == ValidationIssue::Severity::error) ++n;
  return n;
}

int ValidationReport::warning_count() const {
  return static_cast<int>(issues.size()) - error_count();
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const ValidationIssue& i : issues) {
    out += i.severity == ValidationIssue::Severity::error ? "error: " : "warning: ";
    out += i.message;
    out += '\n';
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double_token(std::string_view token) {
  std::string_view t = token;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw std::invalid_argument("bad number '" + std::string(token) + "'");
  return v;
}

int parse_int_token(std::string_view token) {
  std::string_view t = token;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  int v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw std::invalid_argument("bad integer '" + std::string(token) + "'");
  return v;
}

// ---------------------------------------------------------------------------
// LayoutBuilder

LayoutBuilder& LayoutBuilder::cell(std::string id, int x, int y, CellKind kind, int zone) {
  Cell c;
  c.id = std::move(id);
  c.x = x;
  c.y = y;
  c.kind = kind;
  c.zone = zone;
  cells_.push_back(std::move(c));
  return *this;
}

LayoutBuilder& LayoutBuilder::fixed_cell(std::string id, int x, int y, int zone, Spin value) {
  Cell c;
  c.id = std::move(id);
  c.x = x;
  c.y = y;
  c.kind = CellKind::fixed;
  c.zone = zone;
  c.fixed_value = value;
  cells_.push_back(std::move(c));
  return *this;
}

LayoutBuilder& LayoutBuilder::edge(std::string a, std::string b, double coupling) {
  edges_.push_back({std::move(a), std::move(b), coupling});
  return *this;
}

LayoutBuilder& LayoutBuilder::gate(std::string a, std::string b, double coupling,
                                   std::string controller, Spin enable_when) {
  gates_.push_back({std::move(a), std::move(b), coupling, std::move(controller), enable_when});
  return *this;
}

LayoutBuilder& LayoutBuilder::input(std::string name, std::string cell_id) {
  inputs_.push_back({std::move(name), std::move(cell_id)});
  return *this;
}

LayoutBuilder& LayoutBuilder::output(std::string name, std::string cell_id) {
  outputs_.push_back({std::move(name), std::move(cell_id)});
  return *this;
}

LayoutBuilder& LayoutBuilder::bias(double h) {
  params_.bias = h;
  return *this;
}

Layout LayoutBuilder::build() const {
  Layout lay;
  lay.cells = cells_;
  lay.params = params_;
  std::sort(lay.cells.begin(), lay.cells.end(),
            [](const Cell& l, const Cell& r) { return l.id < r.id; });
  for (std::size_t i = 1; i < lay.cells.size(); ++i)
    if (lay.cells[i].id == lay.cells[i - 1].id)
      throw std::invalid_argument("duplicate cell id '" + lay.cells[i].id + "'");

  auto index_of = [&lay](const std::string& id) {
    int i = lay.cell_index(id);
    if (i < 0) throw std::invalid_argument("unknown cell id '" + id + "'");
    return i;
  };

  for (const RawEdge& e : edges_) {
    int a = index_of(e.a), b = index_of(e.b);
    lay.edges.push_back({std::min(a, b), std::max(a, b), e.coupling});
  }
  std::sort(lay.edges.begin(), lay.edges.end(), [](const ExchangeEdge& l, const ExchangeEdge& r) {
    return std::pair(l.a, l.b) < std::pair(r.a, r.b);
  });

  for (const RawGate& g : gates_) {
    int a = index_of(g.a), b = index_of(g.b);
    GatePad pad;
    pad.edge = {std::min(a, b), std::max(a, b), g.coupling};
    pad.controller = index_of(g.controller);
    pad.enable_when = g.enable_when;
    lay.gates.push_back(pad);
  }
  std::sort(lay.gates.begin(), lay.gates.end(), [](const GatePad& l, const GatePad& r) {
    return std::tuple(l.edge.a, l.edge.b, l.controller) < std::tuple(r.edge.a, r.edge.b, r.controller);
  });

  for (const RawPort& p : inputs_) lay.inputs.push_back({p.name, index_of(p.cell_id)});
  for (const RawPort& p : outputs_) lay.outputs.push_back({p.name, index_of(p.cell_id)});
  return lay;
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_layout(const Layout& layout) {
  ValidationReport report;
  auto error = [&report](std::string msg) {
    report.issues.push_back({ValidationIssue::Severity::error, std::move(msg)});
  };
  auto warning = [&report](std::string msg) {
    report.issues.push_back({ValidationIssue::Severity::warning, std::move(msg)});
  };

  const auto& cells = layout.cells;
  const int n = static_cast<int>(cells.size());
  if (n == 0) {
    error("layout has no cells");
    return report;
  }

  for (int i = 1; i < n; ++i) {
    if (cells[i].id == cells[i - 1].id)
      error("duplicate cell id '" + cells[i].id + "'");
    else if (cells[i].id < cells[i - 1].id)
      error("cells not in canonical id order ('" + cells[i].id + "' after '" + cells[i - 1].id + "')");
  }

  std::map<std::pair<int, int>, const Cell*> by_pos;
  for (const Cell& c : cells) {
    auto [it, inserted] = by_pos.try_emplace({c.x, c.y}, &c);
    if (!inserted)
      error("position collision between '" + it->second->id + "' and '" + c.id + "'");
    if (c.zone < 0 || c.zone > 2)
      error("cell '" + c.id + "' has clock zone " + std::to_string(c.zone) + " outside 0..2");
    if (c.kind == CellKind::fixed && !c.fixed_value)
      error("fixed cell '" + c.id + "' has no fixed value");
    if (c.kind != CellKind::fixed && c.fixed_value)
      error("cell '" + c.id + "' has a fixed value but kind " + std::string(kind_name(c.kind)));
    if (!is_word(c.id))
      error("cell id '" + c.id + "' is not a valid identifier");
  }

  auto in_range = [n](int i) { return i >= 0 && i < n; };
  auto cell_name = [&cells, in_range](int i) {
    return in_range(i) ? cells[i].id : "#" + std::to_string(i);
  };

  std::set<std::pair<int, int>> pairs;
  auto check_coupling = [&](const ExchangeEdge& e, const char* what) {
    if (!in_range(e.a) || !in_range(e.b)) {
      error(std::string(what) + " references a cell outside the layout");
      return false;
    }
    if (e.a == e.b) {
      error(std::string(what) + " connects '" + cells[e.a].id + "' to itself");
      return false;
    }
    if (e.a > e.b)
      error(std::string(what) + " endpoints not in canonical order ('" + cells[e.a].id + "','" +
            cells[e.b].id + "')");
    if (e.coupling == 0.0)
      error(std::string(what) + " ('" + cell_name(e.a) + "','" + cell_name(e.b) + "') has zero coupling");
    auto key = std::minmax(e.a, e.b);
    if (!pairs.insert({key.first, key.second}).second)
      error("more than one coupling between '" + cell_name(e.a) + "' and '" + cell_name(e.b) + "'");
    return true;
  };

  for (const ExchangeEdge& e : layout.edges) check_coupling(e, "edge");
  for (const GatePad& g : layout.gates) {
    if (!check_coupling(g.edge, "gated edge")) continue;
    if (!in_range(g.controller)) {
      error("gate controller index outside the layout");
      continue;
    }
    if (g.controller == g.edge.a || g.controller == g.edge.b)
      error("gate controller '" + cells[g.controller].id + "' is an endpoint of its own edge");
    else if (cells[g.controller].zone >= std::min(cells[g.edge.a].zone, cells[g.edge.b].zone))
      warning("gate controller '" + cells[g.controller].id +
              "' settles no earlier than the gated cells ('" + cells[g.edge.a].id + "','" +
              cells[g.edge.b].id + "')");
  }

  double min_abs_j = 0.0;
  bool any_edge = false;
  auto fold_j = [&](const ExchangeEdge& e) {
    if (e.coupling == 0.0) return;
    double a = std::abs(e.coupling);
    min_abs_j = any_edge ? std::min(min_abs_j, a) : a;
    any_edge = true;
  };
  for (const ExchangeEdge& e : layout.edges) fold_j(e);
  for (const GatePad& g : layout.gates) fold_j(g.edge);

  if (layout.params.bias <= 0.0)
    error("bias must be positive (got " + format_double(layout.params.bias) + ")");
  else if (any_edge && layout.params.bias >= 2.0 * min_abs_j)
    error("bias " + format_double(layout.params.bias) + " is not below twice the weakest coupling " +
          format_double(min_abs_j));

  std::set<std::string> port_names;
  std::map<int, int> input_port_count, output_port_count;
  auto check_port = [&](const IoPort& p, bool is_input) {
    if (!is_word(p.name)) error("io name '" + p.name + "' is not a valid identifier");
    if (!port_names.insert(p.name).second) error("duplicate io name '" + p.name + "'");
    if (!in_range(p.cell)) {
      error("io port '" + p.name + "' references a cell outside the layout");
      return;
    }
    const Cell& c = cells[p.cell];
    if (is_input) {
      ++input_port_count[p.cell];
      if (c.kind != CellKind::input)
        error("input port '" + p.name + "' bound to " + std::string(kind_name(c.kind)) + " cell '" +
              c.id + "'");
    } else {
      ++output_port_count[p.cell];
      if (c.kind != CellKind::output && c.kind != CellKind::fixed)
        error("output port '" + p.name + "' bound to " + std::string(kind_name(c.kind)) + " cell '" +
              c.id + "'");
    }
  };
  for (const IoPort& p : layout.inputs) check_port(p, true);
  for (const IoPort& p : layout.outputs) check_port(p, false);

  for (int i = 0; i < n; ++i) {
    if (cells[i].kind == CellKind::input && input_port_count[i] != 1)
      error("input cell '" + cells[i].id + "' must be bound to exactly one input port");
    if (cells[i].kind == CellKind::output && output_port_count[i] != 1)
      error("output cell '" + cells[i].id + "' must be bound to exactly one output port");
  }

  // Orphan check: every non-fixed, non-input cell must be reachable from an
  // input through couplings (gating ignored).
  std::vector<std::vector<int>> adj(n);
  auto connect = [&adj, in_range](int a, int b) {
    if (in_range(a) && in_range(b) && a != b) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  };
  for (const ExchangeEdge& e : layout.edges) connect(e.a, e.b);
  for (const GatePad& g : layout.gates) connect(g.edge.a, g.edge.b);
  std::vector<char> seen(n, 0);
  std::vector<int> queue;
  for (int i = 0; i < n; ++i)
    if (cells[i].kind == CellKind::input) {
      seen[i] = 1;
      queue.push_back(i);
    }
  for (std::size_t q = 0; q < queue.size(); ++q)
    for (int next : adj[queue[q]])
      if (!seen[next]) {
        seen[next] = 1;
        queue.push_back(next);
      }
  for (int i = 0; i < n; ++i)
    if (!seen[i] && cells[i].kind != CellKind::input && cells[i].kind != CellKind::fixed)
      error("cell '" + cells[i].id + "' is not reachable from any input");

  return report;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

Spin parse_spin_token(int line, std::string_view token) {
  if (token == "+1") return Spin::up;
  if (token == "-1") return Spin::down;
  throw ParseError(line, "expected +1 or -1, got '" + std::string(token) + "'");
}

CellKind parse_kind_token(int line, std::string_view token) {
  if (token == "input") return CellKind::input;
  if (token == "output") return CellKind::output;
  if (token == "internal") return CellKind::internal;
  if (token == "fixed") return CellKind::fixed;
  throw ParseError(line, "unknown cell kind '" + std::string(token) + "'");
}

int parse_int_at(int line, std::string_view token) {
  try {
    return parse_int_token(token);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

double parse_double_at(int line, std::string_view token) {
  try {
    return parse_double_token(token);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

std::string_view word_at(int line, std::string_view token, const char* what) {
  if (!is_word(token))
    throw ParseError(line, std::string(what) + " '" + std::string(token) + "' is not a valid identifier");
  return token;
}

}  // namespace

Layout parse_layout(std::string_view text) {
  enum class Section { none, params, cells, edges, gates, io };
  Section section = Section::none;
  bool seen_cells = false, seen_io = false;

  struct PendingRef {
    int line;
    std::string id;
  };
  LayoutBuilder builder;
  std::vector<PendingRef> refs;  // for dangling-reference line reporting
  std::set<std::string> cell_ids;
  std::set<std::string> seen_sections;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    std::string_view line = raw;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(line_no, "malformed section header '" + std::string(line) + "'");
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (!seen_sections.insert(name).second)
        throw ParseError(line_no, "duplicate section [" + name + "]");
      if (name == "params") section = Section::params;
      else if (name == "cells") section = Section::cells, seen_cells = true;
      else if (name == "edges") section = Section::edges;
      else if (name == "gates") section = Section::gates;
      else if (name == "io") section = Section::io, seen_io = true;
      else throw ParseError(line_no, "unknown section [" + name + "]");
      continue;
    }

    switch (section) {
      case Section::none:
        throw ParseError(line_no, "content before the first section header");

      case Section::params: {
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
          throw ParseError(line_no, "expected 'key = value'");
        std::string_view key = trim(line.substr(0, eq));
        std::string_view value = trim(line.substr(eq + 1));
        if (key == "bias")
          builder.bias(parse_double_at(line_no, value));
        else
          throw ParseError(line_no, "unknown parameter '" + std::string(key) + "'");
        break;
      }

      case Section::cells: {
        auto tok = split_tokens(line);
        if (tok.size() != 5 && tok.size() != 6)
          throw ParseError(line_no, "expected '<id> <x> <y> <kind> <zone> [<+1|-1>]'");
        std::string id(word_at(line_no, tok[0], "cell id"));
        if (!cell_ids.insert(id).second)
          throw ParseError(line_no, "duplicate cell id '" + id + "'");
        int x = parse_int_at(line_no, tok[1]);
        int y = parse_int_at(line_no, tok[2]);
        CellKind kind = parse_kind_token(line_no, tok[3]);
        int zone = parse_int_at(line_no, tok[4]);
        if (kind == CellKind::fixed) {
          if (tok.size() != 6)
            throw ParseError(line_no, "fixed cell '" + id + "' needs a trailing +1 or -1");
          builder.fixed_cell(id, x, y, zone, parse_spin_token(line_no, tok[5]));
        } else {
          if (tok.size() == 6)
            throw ParseError(line_no, "only fixed cells carry a trailing spin");
          builder.cell(id, x, y, kind, zone);
        }
        break;
      }

      case Section::edges: {
        auto tok = split_tokens(line);
        if (tok.size() != 3)
          throw ParseError(line_no, "expected '<idA> <idB> <J>'");
        std::string a(word_at(line_no, tok[0], "cell id"));
        std::string b(word_at(line_no, tok[1], "cell id"));
        builder.edge(a, b, parse_double_at(line_no, tok[2]));
        refs.push_back({line_no, a});
        refs.push_back({line_no, b});
        break;
      }

      case Section::gates: {
        auto tok = split_tokens(line);
        if (tok.size() != 5 || !tok[3].starts_with("ctrl=") || !tok[4].starts_with("when="))
          throw ParseError(line_no, "expected '<idA> <idB> <J> ctrl=<idC> when=<+1|-1>'");
        std::string a(word_at(line_no, tok[0], "cell id"));
        std::string b(word_at(line_no, tok[1], "cell id"));
        double j = parse_double_at(line_no, tok[2]);
        std::string ctrl(word_at(line_no, tok[3].substr(5), "cell id"));
        Spin when = parse_spin_token(line_no, tok[4].substr(5));
        builder.gate(a, b, j, ctrl, when);
        refs.push_back({line_no, a});
        refs.push_back({line_no, b});
        refs.push_back({line_no, ctrl});
        break;
      }

      case Section::io: {
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
          throw ParseError(line_no, "expected 'input|output <name> = <id>'");
        auto left = split_tokens(line.substr(0, eq));
        auto right = split_tokens(line.substr(eq + 1));
        if (left.size() != 2 || right.size() != 1)
          throw ParseError(line_no, "expected 'input|output <name> = <id>'");
        std::string name(word_at(line_no, left[1], "io name"));
        std::string id(word_at(line_no, right[0], "cell id"));
        refs.push_back({line_no, id});
        if (left[0] == "input")
          builder.input(name, id);
        else if (left[0] == "output")
          builder.output(name, id);
        else
          throw ParseError(line_no, "expected 'input' or 'output', got '" + std::string(left[0]) + "'");
        break;
      }
    }
  }

  if (!seen_cells) throw ParseError(0, "missing [cells] section");
  if (!seen_io) throw ParseError(0, "missing [io] section");
  if (cell_ids.empty()) throw ParseError(0, "no cells defined");

  for (const PendingRef& r : refs)
    if (!cell_ids.count(r.id))
      throw ParseError(r.line, "reference to unknown cell id '" + r.id + "'");

  Layout layout = builder.build();
  ValidationReport report = validate_layout(layout);
  if (!report.ok()) {
    std::string msg = "layout is invalid:\n" + report.to_string();
    if (!msg.empty() && msg.back() == '\n') msg.pop_back();
    throw ParseError(0, msg);
  }
  return layout;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_layout(const Layout& layout) {
  const int n = static_cast<int>(layout.cells.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&layout](int l, int r) { return layout.cells[l].id < layout.cells[r].id; });
  std::vector<int> rank(n);
  for (int i = 0; i < n; ++i) rank[order[i]] = i;
  auto id_of = [&layout](int i) -> const std::string& { return layout.cells[i].id; };

  std::string out;
  out += "[params]\n";
  out += "bias = " + format_double(layout.params.bias) + "\n";

  out += "\n[cells]\n";
  for (int i : order) {
    const Cell& c = layout.cells[i];
    out += c.id + " " + std::to_string(c.x) + " " + std::to_string(c.y) + " " +
           std::string(kind_name(c.kind)) + " " + std::to_string(c.zone);
    if (c.fixed_value) out += c.fixed_value == Spin::up ? " +1" : " -1";
    out += '\n';
  }

  if (!layout.edges.empty()) {
    std::vector<ExchangeEdge> edges = layout.edges;
    for (ExchangeEdge& e : edges)
      if (rank[e.a] > rank[e.b]) std::swap(e.a, e.b);
    std::sort(edges.begin(), edges.end(), [&rank](const ExchangeEdge& l, const ExchangeEdge& r) {
      return std::pair(rank[l.a], rank[l.b]) < std::pair(rank[r.a], rank[r.b]);
    });
    out += "\n[edges]\n";
    for (const ExchangeEdge& e : edges)
      out += id_of(e.a) + " " + id_of(e.b) + " " + format_double(e.coupling) + "\n";
  }

  if (!layout.gates.empty()) {
    std::vector<GatePad> gates = layout.gates;
    for (GatePad& g : gates)
      if (rank[g.edge.a] > rank[g.edge.b]) std::swap(g.edge.a, g.edge.b);
    std::sort(gates.begin(), gates.end(), [&rank](const GatePad& l, const GatePad& r) {
      return std::tuple(rank[l.edge.a], rank[l.edge.b], rank[l.controller]) <
             std::tuple(rank[r.edge.a], rank[r.edge.b], rank[r.controller]);
    });
    out += "\n[gates]\n";
    for (const GatePad& g : gates)
      out += id_of(g.edge.a) + " " + id_of(g.edge.b) + " " + format_double(g.edge.coupling) +
             " ctrl=" + id_of(g.controller) + (g.enable_when == Spin::up ? " when=+1" : " when=-1") +
             "\n";
  }

  out += "\n[io]\n";
  for (const IoPort& p : layout.inputs) out += "input " + p.name + " = " + id_of(p.cell) + "\n";
  for (const IoPort& p : layout.outputs) out += "output " + p.name + " = " + id_of(p.cell) + "\n";
  return out;
}

}  // namespace ssl
