#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "hotspots/analysis.hpp"
#include "hotspots/eigensolver.hpp"
#include "hotspots/sweep.hpp"

namespace hotspots {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct OutputSettings {
  std::string dir = ".";
  bool json = true;
  bool csv = true;
  bool svg = true;
};

struct RunConfig {
  SolverSettings solver;
  AnalysisSettings analysis;
  int sweep_resolution = 24;
  double sweep_margin = 0.05;
  int sweep_workers = 0;
  double near_equilateral = 0.03;
  int path_steps = 100;
  double path_window = 0.1;
  double path_min_alignment = 0.5;
  OutputSettings output;

  /// Applies one `key = value` pair. Throws ConfigError on an unknown key or
  /// a malformed value.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  /// Every key in a fixed order, one `key = value` per line.
  std::string to_text() const;
  /// FNV-1a over the keys that affect results (workers and output excluded).
  std::uint64_t hash() const;
  std::string hash_hex() const;

  /// Throws ConfigError unless every tolerance is positive and the counts are usable.
  void validate() const;

  SweepSettings sweep_settings() const;
  ContinuationSettings continuation_settings() const;
};

/// Flat `key = value` text with `#` comments and optional `[section]` headers,
/// which prefix the keys that follow (`[solver]` then `terms = 20` sets
/// `solver.terms`).
std::map<std::string, std::string> parse_flat_config(const std::string& text);

RunConfig load_config(const std::string& path);
/// HOTSPOTS_SEED, when set, replaces solver.seed.
void apply_environment(RunConfig& cfg);

/// One-line provenance header embedded in every output file.
std::string output_header(const RunConfig& cfg);

}  // namespace hotspots
