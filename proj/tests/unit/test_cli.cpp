#ifdef STAGAVG_CLI_PATH

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(STAGAVG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli exit codes") {
  CHECK(cli("constants --problem l1 --alpha 1e-3") == 0);
  CHECK(cli("constants --problem asym --alpha 1e-3") == 2);
  CHECK(cli("constants --problem nope --alpha 1e-3") == 2);
  CHECK(cli("run --alpha -1 --k-max 3 --trials 1") == 2);
  CHECK(cli("run --variants staggered,bogus --k-max 3") == 2);
  CHECK(cli("run --not-a-flag") == 2);
  CHECK(cli("verify --suite nope") == 2);
  CHECK(cli("frame-doubling --problem asym --dim 1") == 2);
  CHECK(cli("run --problem l1 --dim 1 --alpha 1e300 --half-width 1e300 --k-max 3 --trials 1") == 3);
  CHECK(cli("verify --suite frame --seed 1") == 0);
}

TEST_CASE("cli config file with flag override") {
  const auto dir = std::filesystem::temp_directory_path() / "stagavg_unit_cli";
  std::filesystem::create_directories(dir);
  {
    std::ofstream cfg(dir / "exp.cfg");
    cfg << "# small experiment\n"
           "problem = deadzone\n"
           "dim = 2\n"
           "variants = staggered,polynomial\n"
           "alpha = 0.01\n"
           "trials = 2\n"
           "k-max = 5\n"
           "seed = 9\n";
  }
  const auto a = dir / "a.csv";
  const auto b = dir / "b.csv";
  REQUIRE(cli("run --config " + (dir / "exp.cfg").string() + " --out " + a.string()) == 0);
  REQUIRE(cli("run --problem deadzone --dim 2 --variants staggered,polynomial --alpha 0.01 "
              "--trials 2 --k-max 5 --seed 9 --out " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find("polynomial,14,") != std::string::npos);

  REQUIRE(cli("run --config " + (dir / "exp.cfg").string() + " --seed 10 --out " + b.string()) ==
          0);
  CHECK(slurp(a) != slurp(b));

  {
    std::ofstream bad(dir / "bad.cfg");
    bad << "colour = blue\n";
  }
  CHECK(cli("run --config " + (dir / "bad.cfg").string()) == 2);
  CHECK(cli("run --config " + (dir / "missing.cfg").string()) == 2);
  std::filesystem::remove_all(dir);
}

#endif
