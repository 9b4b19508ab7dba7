#include <sys/wait.h>

#include <catch_amalgamated.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vexfd/config.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary() {
  const char* b = std::getenv("VEXFD_BIN");
  REQUIRE(b != nullptr);
  return b;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vexfd_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

struct Outcome {
  int code = -1;
  std::string out, err;
};

Outcome run(const std::string& args, const fs::path& dir) {
  const std::string cmd =
      binary() + " " + args + " > " + (dir / "stdout.txt").string() + " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = slurp(dir / "stdout.txt");
  o.err = slurp(dir / "stderr.txt");
  return o;
}

const std::string kCell = R"(format_version = 1
experiment = cell
seed = 1

[domain]
dim = 1
cells = 64

[ladder]
eps = 0.1

[datum]
class = sbv
kind = jump
x0 = 0
zeta = 1
nu = 1
)";

}  // namespace

TEST_CASE("validate runs from built-in defaults") {
  const auto dir = scratch("validate");
  const auto o = run("validate --out " + (dir / "out").string(), dir);
  CHECK(o.code == 0);
  CHECK(o.out.find("status PASS") != std::string::npos);
  for (const char* f : {"report.txt", "ladder.csv", "metrics.csv", "config.echo.ini"}) CHECK(fs::exists(dir / "out" / f));
}

TEST_CASE("config errors exit 2 without artifacts") {
  const auto dir = scratch("bad");
  std::string text = kCell;
  text.replace(text.find("eps = 0.1"), 9, "eps = -0.1");
  write(dir / "neg.ini", text);
  auto o = run("run " + (dir / "neg.ini").string() + " --out " + (dir / "out").string(), dir);
  CHECK(o.code == 2);
  CHECK_FALSE(fs::exists(dir / "out"));
  CHECK(o.err.find("neg.ini:10") != std::string::npos);

  write(dir / "typo.ini", kCell + "\n[solver]\nnodez = 3\n");
  o = run("run " + (dir / "typo.ini").string() + " --out " + (dir / "out").string(), dir);
  CHECK(o.code == 2);
  CHECK(o.err.find("nodez") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out"));

  o = run("run " + (dir / "missing.ini").string(), dir);
  CHECK(o.code == 2);
  o = run("homogenize-1d " + (dir / "typo.ini").string(), dir);
  CHECK(o.code == 2);
}

TEST_CASE("a failed verdict exits 1 and still writes artifacts") {
  const auto dir = scratch("fail");
  write(dir / "c.ini", kCell + "\n[check]\noracle = 5\ntolerance = 0.01\n");
  const auto o = run("run " + (dir / "c.ini").string() + " --out " + (dir / "out").string(), dir);
  CHECK(o.code == 1);
  CHECK(slurp(dir / "out" / "report.txt").find("status FAIL") != std::string::npos);
}

TEST_CASE("solver non-convergence exits 3 with partial artifacts") {
  const auto dir = scratch("nonconv");
  write(dir / "c.ini", R"(format_version = 1
experiment = cell
seed = 1
[domain]
dim = 2
cells = 16
[ladder]
eps = 0.5
[solver]
nodes = 16
max_sweeps = 1
max_iter = 1
[datum]
class = sobolev
kind = jump
x0 = 0, 0
xi = 0, 0
zeta = 1
nu = 1, 0
)");
  const auto o = run("run " + (dir / "c.ini").string() + " --out " + (dir / "out").string(), dir);
  CHECK(o.code == 3);
  CHECK(slurp(dir / "out" / "report.txt").find("status NONCONVERGENCE") != std::string::npos);
}

TEST_CASE("reruns produce byte-identical CSVs") {
  const auto dir = scratch("rerun");
  write(dir / "c.ini", kCell);
  for (const char* sub : {"a", "b"}) {
    const auto o = run("run " + (dir / "c.ini").string() + " --out " + (dir / sub).string(), dir);
    REQUIRE(o.code == 0);
  }
  for (const char* f : {"ladder.csv", "metrics.csv"}) {
    INFO(f);
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const std::string ladder = slurp(dir / "a" / "ladder.csv");
  CHECK(ladder.rfind("format_version,1\nseries,eps,j,h,class,raw_m,normalized,iterations,multistart_spread\n", 0) == 0);
  CHECK(slurp(dir / "a" / "metrics.csv").rfind("format_version,1\nkind,name,value,tolerance,passed\n", 0) == 0);
}

TEST_CASE("command-line overrides reach the echoed config") {
  const auto dir = scratch("override");
  write(dir / "c.ini", kCell);
  const auto o = run("cell " + (dir / "c.ini").string() + " --grid-nodes 16 --seed 7 --tolerance 0.2 --out " +
                         (dir / "out").string(),
                     dir);
  REQUIRE(o.code == 0);
  const auto echoed = vexfd::load_config((dir / "out" / "config.echo.ini").string());
  CHECK(echoed.nodes == 16);
  CHECK(echoed.cells == 16);
  CHECK(echoed.seed == 7);
  CHECK(echoed.tolerance == 0.2);
  CHECK(run("cell " + (dir / "c.ini").string() + " --grid-nodes 2 --out " + (dir / "x").string(), dir).code == 2);
}

TEST_CASE("every shipped config survives an echo round trip") {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(VEXFD_SOURCE_DIR) / "configs")) {
    if (entry.path().extension() != ".ini") continue;
    INFO(entry.path());
    const auto c = vexfd::load_config(entry.path().string());
    const std::string echo = vexfd::echo_config(c);
    CHECK(vexfd::echo_config(vexfd::parse_config(echo, "echo")) == echo);
    ++seen;
  }
  CHECK(seen >= 9);
}
