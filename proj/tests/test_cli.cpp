#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "hotspots_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + HOTSPOTS_CLI + "\" --out \"" + workdir().string() +
                          "\" " + args + " > \"" + (workdir() / "stdout.txt").string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json load(const std::string& name) {
  std::ifstream in(workdir() / name);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("solve then analyze the right isosceles triangle") {
  REQUIRE(run("solve --angles 1.5707963267948966,0.7853981633974483") == 0);
  const auto ep = load("eigenpair.json");
  CHECK(ep["mu"].get<double>() == doctest::Approx(9.8696044010893586).epsilon(1e-8));
  CHECK(ep["header"]["config_hash"].get<std::string>().size() == 16u);
  REQUIRE(run("analyze \"" + (workdir() / "eigenpair.json").string() + "\"") == 0);
  CHECK(load("verdict.json")["classification"] == "NOCRIT");
  CHECK(fs::exists(workdir() / "nodal.csv"));
  CHECK(fs::exists(workdir() / "contour.svg"));
}

TEST_CASE("invalid input exits with 1") {
  CHECK(run("solve --angles 2.0,2.0") == 1);
  CHECK(run("solve --angles 1.0") == 1);
  CHECK(run("--set solver.nonsense=1 solve --angles 1.0,1.0") == 1);
  std::ofstream(workdir() / "bad.json") << "{\"vertices\": [[0, 0], [1, 0]";
  CHECK(run("analyze \"" + (workdir() / "bad.json").string() + "\"") == 1);
  CHECK(run("frobnicate") == 1);
}

TEST_CASE("help exits with 0") {
  CHECK(run("--help") == 0);
  CHECK(run("sweep --help") == 0);
}

TEST_CASE("a stale eigenpair exits with 2") {
  REQUIRE(run("solve --angles 1.0,1.2") == 0);
  auto ep = load("eigenpair.json");
  ep["vertices"][1][1] = ep["vertices"][1][1].get<double>() + 0.05;
  std::ofstream(workdir() / "stale.json") << ep.dump();
  CHECK(run("analyze \"" + (workdir() / "stale.json").string() + "\"") == 2);
}

TEST_CASE("seed from the environment reaches the header") {
  const std::string cmd = "HOTSPOTS_SEED=77 ";
  const int status = std::system((cmd + "\"" + HOTSPOTS_CLI + "\" --out \"" + workdir().string() +
                                  "\" solve --angles 1.0,1.0 > /dev/null 2>&1")
                                     .c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(load("eigenpair.json")["header"]["seed"] == 77);
}
