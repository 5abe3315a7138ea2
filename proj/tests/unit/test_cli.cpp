#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "floorscan/cli.hpp"

using namespace floorscan;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "floorscan");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("floorscan_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> listing(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

TEST_CASE("usage errors exit 1 with usage text") {
  const Run unknown = cli({"pipeline", "x.obj", "--bogus"});
  CHECK(unknown.code == kExitUsage);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"plan", "x.obj", "--style", "crayon"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("unreadable or malformed input exits 2") {
  const fs::path dir = fresh_dir("input");
  CHECK(cli({"orient", (dir / "missing.obj").string(), "-o", dir.string()}).code == kExitInput);
  std::ofstream(dir / "bad.obj") << "v 0 0 0\nf 1 2 3\n";
  CHECK(cli({"orient", (dir / "bad.obj").string(), "-o", dir.string()}).code == kExitInput);
  std::ofstream(dir / "bad.cfg") << "seed 3\n";
  std::ofstream(dir / "ok.obj") << "v 0 0 0\nv 1 0 0\nv 0 0 1\nf 1 3 2\n";
  CHECK(cli({"orient", (dir / "ok.obj").string(), "-c", (dir / "bad.cfg").string()}).code == kExitInput);
}

TEST_CASE("stage failures exit 3 and name the stage") {
  const fs::path dir = fresh_dir("stage");
  // A single upright triangle: nothing to level against.
  std::ofstream(dir / "wall.obj") << "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n";
  const Run r = cli({"orient", (dir / "wall.obj").string(), "-o", dir.string()});
  CHECK(r.code == kExitStage);
  CHECK(r.err.find("orient") != std::string::npos);
}

TEST_CASE("pipeline equals the subcommands run one after another") {
  const fs::path dir = fresh_dir("seq");
  REQUIRE(cli({"synth", "--preset", "two_story", "-o", (dir / "in").string()}).code == 0);
  const std::string mesh = (dir / "in" / "building.obj").string();
  const std::string ann = (dir / "in" / "building.annotations.json").string();
  const std::string pipe = (dir / "pipe").string(), seq = (dir / "seq").string();
  const Run p = cli({"pipeline", mesh, "-a", ann, "-o", pipe, "--set", "plan.slices=25"});
  REQUIRE(p.code == 0);
  CHECK(p.err.find("time orient") != std::string::npos);

  const std::vector<std::string> common{"-o", seq, "--set", "plan.slices=25"};
  auto with = [&](std::vector<std::string> a) {
    a.insert(a.end(), common.begin(), common.end());
    return cli(a).code;
  };
  REQUIRE(with({"orient", mesh, "-a", ann}) == 0);
  REQUIRE(with({"levels", seq + "/oriented.obj", "-a", seq + "/oriented.annotations.json"}) == 0);
  for (int i = 0; i < 2; ++i) {
    const std::string story = seq + "/story_" + std::to_string(i);
    REQUIRE(with({"walls", story + ".obj"}) == 0);
    REQUIRE(with({"plan", story + ".obj", "-a", story + ".annotations.json", "--style", "pen"}) == 0);
    REQUIRE(with({"plan", story + ".obj", "-a", story + ".annotations.json", "--style", "drafting"}) == 0);
  }
  REQUIRE(listing(pipe) == listing(seq));
  for (const auto& name : listing(pipe)) {
    INFO(name);
    CHECK(slurp(fs::path(pipe) / name) == slurp(fs::path(seq) / name));
  }
  const std::string svg = slurp(fs::path(pipe) / "story_1.drafting.svg");
  CHECK(svg.find("config plan.slices = 25") != std::string::npos);
}

TEST_CASE("plan orients an unoriented mesh first") {
  const fs::path dir = fresh_dir("plan");
  REQUIRE(cli({"synth", "--preset", "single_room", "--seed", "3", "-o", dir.string()}).code == 0);
  const Run r = cli({"plan", (dir / "building.obj").string(), "--style", "drafting", "-o", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.err.find("time orient") != std::string::npos);
  CHECK(fs::exists(dir / "building.drafting.svg"));
  CHECK(fs::exists(dir / "building.drafting.layers.json"));
}

TEST_CASE("eval and measure print JSON reports") {
  const Run e = cli({"eval", "--preset", "single_room"});
  CHECK(e.code == 0);
  CHECK(e.out.find("\"recall\": 1.0") != std::string::npos);
  const fs::path dir = fresh_dir("measure");
  std::ofstream(dir / "rooms.json")
      << R"([{"label": "205", "actual_area_m2": 32.5398, "polygon": [[0,0],[10,0],[10,3.33375],[0,3.33375]]}])";
  const Run m = cli({"measure", (dir / "rooms.json").string()});
  CHECK(m.code == 0);
  CHECK(m.out.find("205") != std::string::npos);
  CHECK(cli({"eval"}).code == kExitUsage);
}
