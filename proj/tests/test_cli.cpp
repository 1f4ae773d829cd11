#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef LODIS_CLI_PATH
#error "LODIS_CLI_PATH must point at the built binary"
#endif

namespace {

namespace fs = std::filesystem;

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / "lodis_cli_test";
    fs::create_directories(dir);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(LODIS_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("analyze exits 0 on a distinguishable fixture and reports the dims") {
  Workdir wd;
  REQUIRE(run("gen-fixture --d 4 --indices 00,01,10,33 --out " + wd.path("setA.json")) == 0);
  CHECK(run("analyze --input " + wd.path("setA.json") + " --side A --out " +
            wd.path("repA.json")) == 0);
  const std::string rep = slurp(wd.path("repA.json"));
  CHECK(rep.find("\"dim_T\": 12") != std::string::npos);
  CHECK(rep.find("\"dim_Tperp\": 4") != std::string::npos);
  CHECK(rep.find("\"success_rate\": 1") != std::string::npos);
}

TEST_CASE("analyze exits 1 when both sides are refuted") {
  Workdir wd;
  REQUIRE(run("gen-fixture --d 2 --indices 00,01,10,11 --out " + wd.path("bell.json")) == 0);
  CHECK(run("analyze --input " + wd.path("bell.json") + " --side both --out " +
            wd.path("repbell.json")) == 1);
  const std::string rep = slurp(wd.path("repbell.json"));
  CHECK(rep.find("\"verdict\": \"not_distinguishable\"") != std::string::npos);
}

TEST_CASE("analyze exits 3 on malformed input") {
  Workdir wd;
  spit(wd.path("junk.json"), "{\"dA\": 2,");
  CHECK(run("analyze --input " + wd.path("junk.json")) == 3);
  CHECK(run("analyze --input " + wd.path("missing.json")) == 3);
  spit(wd.path("nonorth.json"), R"({"dA":2,"dB":2,"states":[
    {"type":"pure","vector":[[1,0],[0,0],[0,0],[0,0]]},
    {"type":"pure","vector":[[0.7071067811865476,0],[0,0],[0,0],[0.7071067811865476,0]]}]})");
  CHECK(run("analyze --input " + wd.path("nonorth.json")) == 3);
}

TEST_CASE("analyze exits 2 on the inconclusive fixture") {
  Workdir wd;
  REQUIRE(run("gen-fixture --d 4 --indices 00,01,12,30 --out " + wd.path("setB.json")) == 0);
  CHECK(run("analyze --input " + wd.path("setB.json") + " --side A --out " +
            wd.path("repB.json")) == 2);
  CHECK(slurp(wd.path("repB.json")).find("\"verdict\": \"inconclusive\"") !=
        std::string::npos);
}

TEST_CASE("simulate replays a stored protocol and notices corruption") {
  Workdir wd;
  REQUIRE(run("gen-fixture --d 4 --indices 00,01,10,33 --out " + wd.path("setA.json")) == 0);
  REQUIRE(run("analyze --input " + wd.path("setA.json") + " --side A --out " +
              wd.path("rep.json")) == 0);
  SUBCASE("clean replay reaches every trial") {
    CHECK(run("simulate --input " + wd.path("setA.json") + " --report " + wd.path("rep.json") +
              " --trials 10000 --seed 42 --out " + wd.path("sim.json")) == 0);
    CHECK(slurp(wd.path("sim.json")).find("\"successes\": 10000") != std::string::npos);
  }
  SUBCASE("permuting the stored block labels drops the success rate") {
    std::string rep = slurp(wd.path("rep.json"));
    // swap the first two block state labels in place
    const auto p0 = rep.find("\"state\": 0");
    const auto p1 = rep.find("\"state\": 1", p0);
    REQUIRE(p0 != std::string::npos);
    REQUIRE(p1 != std::string::npos);
    rep.replace(p1, 10, "\"state\": 9");
    rep.replace(p0, 10, "\"state\": 1");
    spit(wd.path("corrupt.json"), rep);
    CHECK(run("simulate --input " + wd.path("setA.json") + " --report " +
              wd.path("corrupt.json") + " --trials 2000 --out " + wd.path("sim2.json")) == 1);
  }
  SUBCASE("zero trials is a vacuous success") {
    CHECK(run("simulate --input " + wd.path("setA.json") + " --report " + wd.path("rep.json") +
              " --trials 0 --out " + wd.path("sim3.json")) == 0);
    CHECK(slurp(wd.path("sim3.json")).find("no trials") != std::string::npos);
  }
  SUBCASE("missing protocol exits 3") {
    REQUIRE(run("gen-fixture --d 2 --indices 00,01,10,11 --out " + wd.path("bell.json")) == 0);
    REQUIRE(run("analyze --input " + wd.path("bell.json") + " --out " +
                wd.path("repbell.json")) == 1);
    CHECK(run("simulate --input " + wd.path("bell.json") + " --report " +
              wd.path("repbell.json")) == 3);
  }
}

TEST_CASE("sample-generic writes the histogram") {
  Workdir wd;
  CHECK(run("sample-generic --d 3 --n 3 --samples 25 --seed 7 --out " + wd.path("gen.json")) ==
        0);
  const std::string rep = slurp(wd.path("gen.json"));
  CHECK(rep.find("\"3\": 25") != std::string::npos);
  CHECK(run("sample-generic --d 2 --n 5 --samples 3") == 3);
}

TEST_CASE("gen-fixture validates its indices") {
  Workdir wd;
  CHECK(run("gen-fixture --d 4 --indices 00,44 --out " + wd.path("x.json")) == 3);
  CHECK(run("gen-fixture --d 4 --indices nope --out " + wd.path("x.json")) == 3);
}

TEST_CASE("reports are byte-identical across repeated runs") {
  Workdir wd;
  REQUIRE(run("gen-fixture --d 4 --indices 00,01,10,33 --out " + wd.path("setA.json")) == 0);
  REQUIRE(run("analyze --input " + wd.path("setA.json") + " --side both --seed 5 --out " +
              wd.path("r1.json")) == 0);
  REQUIRE(run("analyze --input " + wd.path("setA.json") + " --side both --seed 5 --out " +
              wd.path("r2.json")) == 0);
  CHECK(slurp(wd.path("r1.json")) == slurp(wd.path("r2.json")));
  CHECK(!slurp(wd.path("r1.json")).empty());
}
