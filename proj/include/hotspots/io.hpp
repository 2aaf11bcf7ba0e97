#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hotspots/analysis.hpp"
#include "hotspots/eigensolver.hpp"
#include "hotspots/sweep.hpp"

namespace hotspots {

/// Malformed or incomplete input document.
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Stored basis or geometry no longer matches what the triangle implies.
class StaleEigenpair : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

/// {"vertices": [[x1, y1], [x2, y2], [x3, y3]]}
LabeledTriangle triangle_from_json(const Json& j);
Json triangle_to_json(const LabeledTriangle& t);

Json solver_settings_to_json(const SolverSettings& s);
SolverSettings solver_settings_from_json(const Json& j);

Json eigenpair_to_json(const Eigenpair& ep);
/// Throws FormatError on missing fields and StaleEigenpair when the stored
/// basis disagrees with the one rebuilt from the triangle and settings.
Eigenpair eigenpair_from_json(const Json& j);

Json certificate_to_json(const Certificate& c);
Json report_to_json(const CriticalPointReport& r);
Json verdict_to_json(const HotSpotsVerdict& v);

Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

/// "%.17g"
std::string format_real(double x);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records,
                     const std::string& header);
void write_path_csv(std::ostream& out, const std::vector<PathRecord>& path,
                    const std::string& header);
void write_nodal_csv(std::ostream& out, const NodalArc& arc, const std::string& header);
void write_critical_csv(std::ostream& out, const std::vector<CriticalPointReport>& reports,
                        const std::string& header);

}  // namespace hotspots
