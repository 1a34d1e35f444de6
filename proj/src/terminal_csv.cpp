#include "beamforge/terminal_csv.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace beamforge {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line_no, std::string_view column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
    throw BeamforgeError("line " + std::to_string(line_no) + ": bad " + std::string(column) +
                         " value '" + std::string(field) + "'");
  return v;
}

struct Columns {
  std::size_t id, a, b;
  std::optional<std::size_t> demand;
  CsvFrame frame;
  std::size_t count;
};

Columns locate_columns(std::string_view header) {
  const auto names = split(header);
  auto find = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    return std::nullopt;
  };
  const auto id = find("id");
  if (!id) throw BeamforgeError("line 1: header lacks an 'id' column");
  Columns c{*id, 0, 0, find("demand_mbps"), CsvFrame::planar, names.size()};
  if (auto lat = find("lat"), lon = find("lon"); lat && lon) {
    c.frame = CsvFrame::geodetic;
    c.a = *lat;
    c.b = *lon;
  } else if (auto x = find("x_km"), y = find("y_km"); x && y) {
    c.a = *x;
    c.b = *y;
  } else {
    throw BeamforgeError("line 1: header must contain lat,lon or x_km,y_km");
  }
  return c;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

TerminalTable parse_terminal_csv(std::istream& in, const IngestOptions& options) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<Columns> cols;
  while (!cols && std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (!trim(line).empty()) cols = locate_columns(line);
  }
  if (!cols) throw BeamforgeError("terminal file is empty");

  std::mt19937_64 rng(options.demand_seed);
  std::uniform_real_distribution<double> demand_dist(options.demand_range.min_mbps,
                                                     options.demand_range.max_mbps);
  std::vector<GeoRecord> geo;
  TerminalTable table;
  table.frame = cols->frame;
  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != cols->count)
      throw BeamforgeError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(cols->count) + " fields, got " +
                           std::to_string(fields.size()));
    std::string id(fields[cols->id]);
    if (id.empty()) throw BeamforgeError("line " + std::to_string(line_no) + ": empty id");
    if (!ids.insert(id).second)
      throw BeamforgeError("line " + std::to_string(line_no) + ": duplicate id '" + id + "'");
    const double a = parse_number(fields[cols->a], line_no, cols->frame == CsvFrame::geodetic ? "lat" : "x_km");
    const double b = parse_number(fields[cols->b], line_no, cols->frame == CsvFrame::geodetic ? "lon" : "y_km");
    const double demand = cols->demand ? parse_number(fields[*cols->demand], line_no, "demand_mbps")
                                       : demand_dist(rng);
    if (!(demand > 0.0))
      throw BeamforgeError("line " + std::to_string(line_no) + ": demand must be positive");
    if (cols->frame == CsvFrame::geodetic) {
      if (!(a >= -90.0 && a <= 90.0) || !(b >= -180.0 && b <= 180.0))
        throw BeamforgeError("line " + std::to_string(line_no) + ": coordinates out of range");
      geo.push_back({std::move(id), a, b, demand});
    } else {
      table.terminals.push_back({std::move(id), {a, b}, demand});
    }
  }
  if (cols->frame == CsvFrame::geodetic) {
    if (geo.empty()) throw BeamforgeError("terminal file has no data rows");
    GeoOrigin origin;
    table.terminals = project_geodetic(geo, &origin);
    table.origin = origin;
  }
  if (table.terminals.empty()) throw BeamforgeError("terminal file has no data rows");
  return table;
}

TerminalTable read_terminal_csv(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw BeamforgeError("cannot open " + path.string());
  return parse_terminal_csv(in, options);
}

Scenario ingest(const std::filesystem::path& path, const ScenarioParams& params,
                const IngestOptions& options) {
  TerminalTable table = read_terminal_csv(path, options);
  return Scenario(std::move(table.terminals), params, table.origin);
}

void write_terminal_csv(const std::filesystem::path& path, const Scenario& scenario) {
  std::ofstream out(path);
  if (!out) throw BeamforgeError("cannot write " + path.string());
  out << "id,x_km,y_km,demand_mbps\n";
  for (const auto& t : scenario.terminals()) {
    out << t.id << ',' << format_double(t.position.x) << ',' << format_double(t.position.y) << ','
        << format_double(t.demand_mbps) << '\n';
  }
  if (!out) throw BeamforgeError("failed writing " + path.string());
}

}  // namespace beamforge
