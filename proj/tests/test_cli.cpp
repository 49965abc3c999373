#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sandwich/commands.hpp"

using namespace sandwich;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
  nlohmann::json report() const { return nlohmann::json::parse(out); }
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sandwich-cli");
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(SANDWICH_FIXTURE_DIR) + "/" + name + ".json"; }
std::string data(const std::string& name) { return std::string(SANDWICH_TEST_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("exit codes follow the verdicts") {
  CHECK(cli({"check-preorder", fixture("ex-full")}).code == 0);
  CHECK(cli({"sandwich", fixture("min-max-full")}).code == 0);
  CHECK(cli({"extend", fixture("extend-ray")}).code == 0);
  CHECK(cli({"envelope", fixture("envelope-max")}).code == 0);
  CHECK(cli({"probe", fixture("probe-empty")}).code == 0);
  CHECK(cli({"comono", "approx", fixture("comono-approx-indicator")}).code == 0);

  auto corr = cli({"check-preorder", fixture("nonex-corr")});
  CHECK(corr.code == 1);
  bool saw = false;
  const auto corr_report = corr.report();
  for (const auto& r : corr_report["result"]["results"])
    if (r["axiom"] == "transitive") {
      saw = true;
      CHECK(r["verdict"] == "fail");
      CHECK(r["witness"] == nlohmann::json::parse(R"([["1","1"],["1","0"],["0","-1"]])"));
      CHECK(r["witness_reproduces"] == true);
    }
  CHECK(saw);

  auto bad = cli({"sandwich", fixture("p-not-below-h")});
  CHECK(bad.code == 1);
  CHECK_FALSE(bad.report()["result"]["validation"]["failures"].empty());
  CHECK(cli({"comono", "choquet", fixture("comono-subadditive-min")}).code == 1);
}

TEST_CASE("budget exhaustion is data") {
  auto r = cli({"run", fixture("budget-exhausted")});
  CHECK(r.code == 0);
  CHECK(r.report()["result"]["trace"]["converged"] == false);
}

TEST_CASE("input errors exit 2 with a location") {
  auto trunc = cli({"check-preorder", data("truncated.json")});
  CHECK(trunc.code == 2);
  std::string loc = trunc.report()["error"]["location"];
  CHECK(loc.find("line 9, column 8") != std::string::npos);

  auto unknown = cli({"check-preorder", data("unknown-field.json")});
  CHECK(unknown.code == 2);
  loc = unknown.report()["error"]["location"];
  CHECK(loc.find("/relation/colour") != std::string::npos);

  CHECK(cli({"check-preorder", data("no-such-file.json")}).code == 2);
  CHECK(cli({"comono", "approx", fixture("min-max-full")}).code == 2);  // no comono section
  CHECK(cli({"bogus-verb"}).code == 2);
}

TEST_CASE("fixtures resolve by bare name") {
  auto r = cli({"run", "min-max-full"});
  CHECK(r.code == 0);
  CHECK(r.report()["instance"]["name"] == "min-max-full");
}

TEST_CASE("option overrides") {
  auto a = cli({"check-preorder", fixture("ex-full"), "--sample-size", "4", "--seed", "3"});
  CHECK(a.code == 0);
  CHECK(a.report()["result"]["random_points"] == 4);
  auto timed = cli({"check-preorder", fixture("ex-full"), "--timing"});
  CHECK(timed.report().contains("timing_ms"));
  CHECK_FALSE(a.report().contains("timing_ms"));
}

TEST_CASE("--out writes the report to a file") {
  fs::path p = fs::temp_directory_path() / "sandwich-cli-test-report.json";
  fs::remove(p);
  auto r = cli({"run", fixture("ex-full"), "--out", p.string()});
  CHECK(r.code == 0);
  REQUIRE(fs::exists(p));
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(nlohmann::json::parse(ss.str())["exit_code"] == 0);
  fs::remove(p);
}

TEST_CASE("canonical dump round-trips with a stable digest") {
  for (const auto& entry : fs::directory_iterator(SANDWICH_FIXTURE_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    InstanceFile a = load_instance(entry.path().string());
    InstanceFile b = parse_instance(canonical_dump(a));
    CHECK(canonical_dump(a) == canonical_dump(b));
    CHECK(instance_digest(a) == instance_digest(b));
    CHECK(instance_digest(a).size() == 16);
  }
}

TEST_CASE("repeated runs are byte-identical") {
  for (const char* name : {"ex-full", "min-max-full", "probe-strict-choquet", "comono-approx-constant"}) {
    CAPTURE(name);
    CHECK(cli({"run", fixture(name)}).out == cli({"run", fixture(name)}).out);
  }
}
