#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beamforge/scenario.hpp"

namespace beamforge {

enum class CsvFrame { geodetic, planar };

struct DemandRange {
  double min_mbps{5.0};
  double max_mbps{10.0};
};

struct IngestOptions {
  // Used only when the file has no demand_mbps column.
  DemandRange demand_range{};
  std::uint64_t demand_seed{1};
};

struct TerminalTable {
  CsvFrame frame{CsvFrame::planar};
  std::vector<Terminal> terminals;
  std::optional<GeoOrigin> origin;
};

// Header `id,lat,lon[,demand_mbps]` or `id,x_km,y_km[,demand_mbps]`, columns
// in any order. Errors name the offending line.
[[nodiscard]] TerminalTable parse_terminal_csv(std::istream& in, const IngestOptions& options = {});
[[nodiscard]] TerminalTable read_terminal_csv(const std::filesystem::path& path,
                                              const IngestOptions& options = {});

[[nodiscard]] Scenario ingest(const std::filesystem::path& path, const ScenarioParams& params,
                              const IngestOptions& options = {});

void write_terminal_csv(const std::filesystem::path& path, const Scenario& scenario);

// Shortest round-trip decimal form.
[[nodiscard]] std::string format_double(double v);

}  // namespace beamforge
