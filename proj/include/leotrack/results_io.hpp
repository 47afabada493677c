#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "leotrack/scenario.hpp"

namespace leotrack {

// Everything needed to reproduce a run bit-identically, written alongside the
// data files as run_manifest.json.
struct RunManifest {
  std::string tool_version;
  std::string command;  // subcommand that produced the outputs
  std::uint64_t seed = 0;
  int runs = 1;
  std::string ephemeris_path;  // empty unless an external trajectory was used
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> outputs;
  std::string config_json;  // canonical resolved configuration
};

// Decimal with 12 significant digits, '.' separator, no locale dependence.
std::string format_number(double v);

// Writes states.csv, link.csv, windows.csv and summary.json into dir (created
// if missing), then run_manifest.json. When mc is given, summary.json also
// carries the per-replicate and aggregate Monte Carlo statistics; the CSVs
// always describe replicate 0. Column layouts are documented in README.md.
RunManifest emit_results(const ScenarioResult& r, const std::string& dir,
                         const ScenarioConfig& cfg, const std::string& command,
                         int runs = 1, const MonteCarloResult* mc = nullptr,
                         const std::string& ephemeris_path = "");

// Writes run_manifest.json into dir (used by emit_results; also directly by
// CLI subcommands with non-standard output sets).
void write_manifest(const RunManifest& man, const std::string& dir);

// Parses a run_manifest.json back (for --replay).
RunManifest load_manifest(const std::string& path);

}  // namespace leotrack
