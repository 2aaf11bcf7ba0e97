#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hotspots/config.hpp"
#include "hotspots/field.hpp"

namespace hotspots {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// Triangles with every angle above margin, angles drawn uniformly from the
/// simplex, then moved by a seeded rigid motion and scale.
std::vector<LabeledTriangle> seeded_triangles(int count, std::uint64_t seed, double margin);

/// cos(pi x) - cos(pi y), a Helmholtz solution with mu = pi^2.
class PlantedSaddle : public ScalarField {
public:
  FieldSample sample(const Point& p) const override;
};

/// Triangle containing the saddle (0, 0) of PlantedSaddle in its interior.
LabeledTriangle planted_triangle();

/// Runs the acceptance criteria listed in `which` (all twelve when empty).
/// `report` is called after each criterion.
std::vector<CriterionResult> run_acceptance(const RunConfig& cfg, const std::vector<int>& which = {},
                                            const std::function<void(const CriterionResult&)>& report = {});

std::string format_result(const CriterionResult& r);

}  // namespace hotspots
