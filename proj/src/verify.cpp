#include "sslsim/verify.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sslsim/circuits.hpp"

namespace ssl {

namespace {

char bit_char(bool b) { return b ? '1' : '0'; }

std::string trim(std::string_view s) {
  std::size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return std::string(s.substr(begin, end - begin));
}

// Cells lying on some input-to-output path, over exchange and gated
// couplings; gate controllers count as attached to both gated endpoints.
std::vector<char> path_cells(const Layout& layout) {
  const int n = static_cast<int>(layout.cells.size());
  std::vector<std::vector<int>> adjacent(n);
  auto link = [&](int a, int b) {
    adjacent[a].push_back(b);
    adjacent[b].push_back(a);
  };
  for (const ExchangeEdge& e : layout.edges) link(e.a, e.b);
  for (const GatePad& g : layout.gates) {
    link(g.edge.a, g.edge.b);
    link(g.controller, g.edge.a);
    link(g.controller, g.edge.b);
  }
  auto reach = [&](const std::vector<IoPort>& seeds) {
    std::vector<char> seen(n, 0);
    std::deque<int> queue;
    for (const IoPort& port : seeds) {
      if (!seen[port.cell]) {
        seen[port.cell] = 1;
        queue.push_back(port.cell);
      }
    }
    while (!queue.empty()) {
      const int c = queue.front();
      queue.pop_front();
      for (int next : adjacent[c])
        if (!seen[next]) {
          seen[next] = 1;
          queue.push_back(next);
        }
    }
    return seen;
  };
  const std::vector<char> forward = reach(layout.inputs);
  const std::vector<char> backward = reach(layout.outputs);
  std::vector<char> on_path(n, 0);
  for (int i = 0; i < n; ++i) on_path[i] = forward[i] && backward[i];
  return on_path;
}

std::uint64_t parse_u64_token(const std::string& token) {
  std::size_t consumed = 0;
  std::uint64_t value = 0;
  try {
    value = std::stoull(token, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: not an unsigned integer: '" + token + "'");
  }
  if (consumed != token.size() || token[0] == '-')
    throw std::invalid_argument("config: not an unsigned integer: '" + token + "'");
  return value;
}

}  // namespace

std::pair<bool, bool> reference_full_adder(bool a, bool b, bool ci) {
  const int sum = int(a) + int(b) + int(ci);
  return {(sum & 1) != 0, sum >= 2};
}

int TruthReport::pass_count() const {
  int count = 0;
  for (const TruthRow& row : rows) count += row.pass ? 1 : 0;
  return count;
}

TruthReport truth_table_check(const Layout& layout, std::string name, const SimOptions& options) {
  for (const char* required : {"A", "B", "Ci"})
    if (layout.input_cell(required) < 0)
      throw std::invalid_argument(std::string("truth_table_check: layout lacks input ") +
                                  required);
  TruthReport report;
  report.name = std::move(name);
  report.checks_s = layout.output_cell("S") >= 0;
  report.checks_co = layout.output_cell("Co") >= 0;
  if (!report.checks_s && !report.checks_co)
    throw std::invalid_argument("truth_table_check: layout declares neither S nor Co");

  for (int row = 0; row < 8; ++row) {
    TruthRow r;
    r.a = (row & 4) != 0;
    r.b = (row & 2) != 0;
    r.ci = (row & 1) != 0;
    std::tie(r.expected_s, r.expected_co) = reference_full_adder(r.a, r.b, r.ci);
    try {
      const SimResult result =
          simulate(layout, {{"A", r.a}, {"B", r.b}, {"Ci", r.ci}}, options);
      r.pass = true;
      if (report.checks_s) {
        r.observed_s = result.outputs.at("S");
        r.pass = r.pass && r.observed_s == r.expected_s;
      }
      if (report.checks_co) {
        r.observed_co = result.outputs.at("Co");
        r.pass = r.pass && r.observed_co == r.expected_co;
      }
    } catch (const ConvergenceError& e) {
      r.pass = false;
      r.diagnostic = e.what();
    }
    report.rows.push_back(std::move(r));
  }
  return report;
}

MetricsReport metrics(const Layout& layout, std::string name) {
  MetricsReport report;
  report.name = std::move(name);
  report.dot_count = static_cast<int>(layout.cells.size());
  report.gate_pad_count = static_cast<int>(layout.gates.size());
  const std::vector<char> on_path = path_cells(layout);
  std::set<int> zones;
  for (std::size_t i = 0; i < layout.cells.size(); ++i)
    if (on_path[i]) zones.insert(layout.cells[i].zone);
  report.clock_zone_span = static_cast<int>(zones.size());
  report.pipeline_latency = measure_latency(layout);
  return report;
}

ComparisonReport compare_metrics(const std::vector<MetricsReport>& reports) {
  std::vector<const MetricsReport*> by_kind(all_adder_kinds.size(), nullptr);
  for (const MetricsReport& report : reports) {
    const std::optional<AdderKind> kind = adder_by_name(report.name);
    if (!kind)
      throw std::invalid_argument("compare_metrics: unknown fixture name: " + report.name);
    const auto slot = static_cast<std::size_t>(*kind);
    if (by_kind[slot])
      throw std::invalid_argument("compare_metrics: duplicate fixture: " + report.name);
    by_kind[slot] = &report;
  }
  ComparisonReport out;
  for (AdderKind kind : all_adder_kinds) {
    const MetricsReport* report = by_kind[static_cast<std::size_t>(kind)];
    if (!report)
      throw std::invalid_argument("compare_metrics: missing fixture: " + adder_name(kind));
    out.rows.push_back(*report);
  }

  const MetricsReport& comp = out.rows[static_cast<std::size_t>(AdderKind::complementary)];
  const MetricsReport& mirr = out.rows[static_cast<std::size_t>(AdderKind::mirror)];
  auto claim = [&out](bool ok, std::string text) {
    if (!ok) out.violations.push_back(std::move(text));
  };
  claim(mirr.dot_count == comp.dot_count,
        "mirror dot count must equal the complementary dot count");
  claim(mirr.gate_pad_count > comp.gate_pad_count,
        "mirror must use strictly more gate pads than complementary");
  for (AdderKind kind : {AdderKind::transmission_gate, AdderKind::static_manchester,
                         AdderKind::dynamic_manchester})
    claim(out.rows[static_cast<std::size_t>(kind)].dot_count < comp.dot_count,
          adder_name(kind) + " must use strictly fewer dots than complementary");
  out.pass = out.violations.empty();
  return out;
}

std::string truth_report_to_text(const TruthReport& report) {
  std::ostringstream out;
  out << "name: " << report.name << "\n";
  out << "outputs:";
  if (report.checks_s) out << " S";
  if (report.checks_co) out << " Co";
  out << "\n";
  out << "A B Ci | expected | observed | result\n";
  for (const TruthRow& row : report.rows) {
    out << bit_char(row.a) << ' ' << bit_char(row.b) << ' ' << bit_char(row.ci) << "  | ";
    auto values = [&](bool s, bool co) {
      std::string text;
      if (report.checks_s) text += std::string("S=") + bit_char(s);
      if (report.checks_s && report.checks_co) text += ' ';
      if (report.checks_co) text += std::string("Co=") + bit_char(co);
      return text;
    };
    const std::string expected = values(row.expected_s, row.expected_co);
    std::string observed =
        row.diagnostic.empty() ? values(row.observed_s, row.observed_co) : "-";
    out << expected << std::string(9 > expected.size() ? 9 - expected.size() : 1, ' ')
        << "| " << observed << std::string(9 > observed.size() ? 9 - observed.size() : 1, ' ')
        << "| " << (row.pass ? "pass" : "FAIL");
    if (!row.diagnostic.empty()) out << " (" << row.diagnostic << ")";
    out << "\n";
  }
  out << "passed: " << report.pass_count() << "/" << report.total() << "\n";
  return out.str();
}

std::string metrics_to_text(const MetricsReport& report) {
  std::ostringstream out;
  out << "name: " << report.name << "\n"
      << "dot_count: " << report.dot_count << "\n"
      << "gate_pad_count: " << report.gate_pad_count << "\n"
      << "clock_zone_span: " << report.clock_zone_span << "\n"
      << "pipeline_latency: " << report.pipeline_latency << "\n";
  return out.str();
}

std::string comparison_to_text(const ComparisonReport& report) {
  std::ostringstream out;
  auto pad = [](std::string text, std::size_t width) {
    if (text.size() < width) text.resize(width, ' ');
    return text;
  };
  out << pad("name", 20) << pad("dots", 6) << pad("gate_pads", 11) << pad("zone_span", 11)
      << "latency\n";
  for (const MetricsReport& row : report.rows)
    out << pad(row.name, 20) << pad(std::to_string(row.dot_count), 6)
        << pad(std::to_string(row.gate_pad_count), 11)
        << pad(std::to_string(row.clock_zone_span), 11) << row.pipeline_latency << "\n";
  out << "verdict: " << (report.pass ? "PASS" : "FAIL") << "\n";
  for (const std::string& violation : report.violations)
    out << "violation: " << violation << "\n";
  return out.str();
}

std::string comparison_to_csv(const ComparisonReport& report) {
  std::string out = "name,dot_count,gate_pad_count,clock_zone_span,pipeline_latency\n";
  for (const MetricsReport& row : report.rows) {
    out += row.name;
    out += ',';
    out += std::to_string(row.dot_count);
    out += ',';
    out += std::to_string(row.gate_pad_count);
    out += ',';
    out += std::to_string(row.clock_zone_span);
    out += ',';
    out += std::to_string(row.pipeline_latency);
    out += '\n';
  }
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    auto positive_int = [&](const char* what) {
      const int v = parse_int_token(value);
      if (v < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
      return v;
    };
    // Every error from this line gets the same "config line N:" prefix.
    try {
      if (key == "exact_limit") {
        const int v = parse_int_token(value);
        if (v < 0) throw std::invalid_argument("exact_limit must be >= 0");
        config.exact_limit = v;
      } else if (key == "t_start") {
        const double v = parse_double_token(value);
        if (v < 0.0) throw std::invalid_argument("t_start must be >= 0");
        config.t_start = v;
      } else if (key == "t_end") {
        const double v = parse_double_token(value);
        if (v < 0.0) throw std::invalid_argument("t_end must be >= 0");
        config.t_end = v;
      } else if (key == "sweeps") {
        config.sweeps = positive_int("sweeps");
      } else if (key == "max_cycles") {
        config.max_cycles = positive_int("max_cycles");
      } else if (key == "seed") {
        config.seed = parse_u64_token(value);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": " +
                                  e.what());
    }
  }
  return config;
}

SimOptions to_sim_options(const RunConfig& config, const Layout& layout, bool use_anneal) {
  SimOptions options;
  if (config.exact_limit) options.exact_limit = *config.exact_limit;
  if (config.max_cycles) options.max_cycles = *config.max_cycles;
  options.use_anneal = use_anneal;
  if (use_anneal) {
    AnnealSchedule schedule = default_schedule(layout);
    if (config.t_start) schedule.t_start = *config.t_start;
    if (config.t_end) schedule.t_end = *config.t_end;
    if (config.sweeps) schedule.sweeps = *config.sweeps;
    if (config.seed) schedule.seed = *config.seed;
    options.schedule = schedule;
  }
  return options;
}

}  // namespace ssl
