#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kConfigs = LCS_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("lcs_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& args, const fs::path& log) {
  std::string cmd = std::string(LCS_CLI) + " " + args + " > " + log.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& body) {
  fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("nonsqueeze table") {
  fs::path d = scratch("ns");
  REQUIRE(run("nonsqueeze " + (kConfigs / "nonsqueeze_table.json").string() + " --out " + d.string(), d / "log") == 0);
  json j = json::parse(slurp(d / "nonsqueeze.json"));
  CHECK(j["rows"][0]["obstructed"] == true);
  CHECK(j["rows"][0]["k"] == 2);
  CHECK(j["rows"][1]["obstructed"] == false);
  CHECK(j["config_hash"].get<std::string>().size() == 16);
  CHECK(json::parse(slurp(d / "nonsqueeze.config.json"))["by"] == "area");
}

TEST_CASE("chords on the torus and reproducibility") {
  fs::path a = scratch("ch_a"), b = scratch("ch_b");
  std::string cfg = (kConfigs / "chords_torus.json").string();
  REQUIRE(run("chords " + cfg + " --out " + a.string(), a / "log") == 0);
  REQUIRE(run("chords " + cfg + " --threads 2 --out " + b.string(), b / "log") == 0);
  json j = json::parse(slurp(a / "chords.json"));
  CHECK(j["essential_count"] == 4);
  CHECK(slurp(a / "chords.json") == slurp(b / "chords.json"));
}

TEST_CASE("capacity report for pi R^2 = 1.5") {
  fs::path d = scratch("cap");
  REQUIRE(run("capacity " + (kConfigs / "capacity_ball_15.json").string() + " --out " + d.string(), d / "log") == 0);
  json j = json::parse(slurp(d / "capacity.json"));
  CHECK(j["lower_bound"] == 2);
  CHECK(j["reference"] == 2);
  CHECK(j["verdict"] == "consistent");
  for (const char* k : {"domain", "family", "witnesses"}) CHECK(j.contains(k));
}

TEST_CASE("flow csv carries the hash and the documented columns") {
  fs::path d = scratch("flow");
  REQUIRE(run("flow " + (kConfigs / "flow_lifted_bump.json").string() + " --out " + d.string(), d / "log") == 0);
  std::istringstream in(slurp(d / "flow.csv"));
  std::string first, header;
  std::getline(in, first);
  std::getline(in, header);
  CHECK(first.rfind("# config_hash=", 0) == 0);
  CHECK(header == "seed,t,theta,x,y,z,g,S,step_error");
}

TEST_CASE("config errors exit 2 with the offending line") {
  fs::path d = scratch("bad");
  fs::path p = write(d, "bad.json", "{\n  \"seed\": 1,\n  \"torus\": {\n    \"b\": true\n  }\n}\n");
  CHECK(run("chords " + p.string(), d / "log") == 2);
  CHECK(slurp(d / "log").find("bad.json:4:") != std::string::npos);
  p = write(d, "unknown.json", "{\n  \"seed\": 1,\n\n  \"colour\": 3\n}\n");
  CHECK(run("chords " + p.string(), d / "log") == 2);
  CHECK(slurp(d / "log").find("unknown.json:4:") != std::string::npos);
  p = write(d, "noseed.json", "{\n  \"problem\": \"torus_morse\"\n}\n");
  CHECK(run("chords " + p.string(), d / "log") == 2);
  p = write(d, "syntax.json", "{\n  \"seed\": 1\n  \"problem\": 2\n}\n");
  CHECK(run("chords " + p.string(), d / "log") == 2);
  CHECK(slurp(d / "log").find("syntax.json:3:") != std::string::npos);
}

TEST_CASE("numerical failures exit 3") {
  fs::path d = scratch("num");
  fs::path p = write(d, "big.json",
                     "{\"hamiltonian\": {\"amplitude\": 3.0, \"radius\": 0.5}, \"grid\": {\"base_res\": [9, 9, 2]},"
                     " \"output\": {\"dir\": \"" + d.string() + "\"}}");
  CHECK(run("spectral " + p.string(), d / "log") == 3);
  CHECK(slurp(d / "log").find("numeric error") != std::string::npos);
}
