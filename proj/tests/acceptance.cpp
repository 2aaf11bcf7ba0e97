#include <cstdio>
#include <iostream>

#include "hotspots/config.hpp"
#include "hotspots/selftest.hpp"

int main() {
  try {
    hotspots::RunConfig cfg;
    hotspots::apply_environment(cfg);
    std::cout << hotspots::output_header(cfg) << std::endl;
    const auto results = hotspots::run_acceptance(cfg, {}, [](const hotspots::CriterionResult& r) {
      std::cout << hotspots::format_result(r) << std::endl;
    });
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << std::endl;
    return 1;
  }
}
