#pragma once

// CSV tables (17 significant digits, LF, header row), the JSON run manifest
// and a log-linear SVG plot of exceedance proportions.

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcs/dist.hpp"

namespace qcs {

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what);
  std::string path;
};

/// %.17g; NaN and infinities are rejected.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);
/// path "-" writes to stdout.
void write_csv(const std::string& path, const CsvTable& table);

/// family,x,tau,count,proportion,log_proportion; log_proportion is empty when the proportion is 0.
CsvTable distribution_csv(const std::vector<DistributionTable>& tables);
void export_csv(const DistributionTable& table, const std::string& path);

/// Reads a CSV written by write_csv (no quoting).
CsvTable read_csv(const std::string& path);

struct RunManifest {
  std::string command;
  std::string version = QCS_VERSION;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> parameters;
  double wall_seconds = 0.0;
  std::vector<std::pair<std::string, std::string>> results;
  std::optional<CsvTable> table;
};

std::string manifest_json(const RunManifest& manifest);
void export_json(const RunManifest& manifest, const std::string& path);

struct Overlay {
  std::string label;
  std::vector<double> tau;
  std::vector<double> proportion;
};

/// τ against log proportion; tables solid, overlays dashed. Zero proportions are omitted.
std::string svg_plot(const std::vector<DistributionTable>& tables, const std::vector<Overlay>& overlays,
                     const std::string& title);
void emit_svg(const std::vector<DistributionTable>& tables, const std::vector<Overlay>& overlays,
              const std::string& path, const std::string& title = "exceedance");

/// Writes text to path ("-" for stdout), raising IoError with the path on failure.
void write_text(const std::string& path, const std::string& text);

}  // namespace qcs
