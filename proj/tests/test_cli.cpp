#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "acceptance.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "io.hpp"
#include "plap/oracle.hpp"

namespace fs = std::filesystem;
using namespace plaplab;

namespace {

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("PLAP_TEST_SCRATCH");
  const fs::path base = env ? fs::path(env) : fs::temp_directory_path() / "plaplab-tests";
  const fs::path dir = base / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int run_exe(const std::string& args) {
  const std::string cmd = std::string(PLAPLAB_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config: defaults, overrides and unknown keys") {
    RunConfig config;
    CHECK(config.get("grid.N") == "2000");
    CHECK(config.get_double("grid.r_min") == 1e-8);
    config.apply_assignment("problem.n = 12");
    CHECK(config.get_double("problem.n") == 12.0);
    try {
      config.set("problem.nn", "3");
      FAIL("unknown key accepted");
    } catch (const plap::InvalidArgument& e) {
      CHECK(std::string(e.what()).find("problem.nn") != std::string::npos);
    }
    CHECK_THROWS_AS(config.apply_assignment("problem.n"), plap::InvalidArgument);
    config.set("grid.N", "12.5");
    CHECK_THROWS_AS((void)config.get_size("grid.N"), plap::InvalidArgument);
    config.set("sweep.p", "1.5, 2,3");
    CHECK(config.get_list("sweep.p") == std::vector<double>{1.5, 2.0, 3.0});
    CHECK(config.get_list("sweep.n").empty());
  }

  TEST_CASE("config: INI files") {
    const auto dir = scratch("ini");
    {
      std::ofstream(dir / "good.ini") << "[problem]\nn = 15\np = 2\nnonlinearity = power\n"
                                         "m = mcs\n[grid]\nN = 500\n";
      std::ofstream(dir / "typo.ini") << "[problem]\nlamda = 2\n";
    }
    RunConfig config;
    config.load_ini((dir / "good.ini").string());
    const auto spec = config.problem();
    CHECK(spec.nonlinearity.m() == doctest::Approx(2.1374347552952543).epsilon(1e-13));
    CHECK(config.grid().size() == 500);
    CHECK(config.to_json()["grid"]["N"] == "500");

    RunConfig other;
    try {
      other.load_ini((dir / "typo.ini").string());
      FAIL("typo accepted");
    } catch (const plap::InvalidArgument& e) {
      CHECK(std::string(e.what()).find("problem.lamda") != std::string::npos);
    }
    CHECK_THROWS_AS(other.load_ini((dir / "missing.ini").string()), plap::InvalidArgument);
  }

  TEST_CASE("profile CSV round trip is bit-identical") {
    const auto dir = scratch("csv");
    const auto grid = plap::make_grid(1e-8, 700);
    const auto profile = plap::exact_power(15, 2, 5).sample(grid);
    write_profile_csv(dir / "p.csv", profile);
    const auto back = read_profile_csv(dir / "p.csv", 15, 2);
    REQUIRE(back.size() == profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
      REQUIRE(back.grid()[i] == grid[i]);
      REQUIRE(back.u()[i] == profile.u()[i]);
      REQUIRE(back.u_r()[i] == profile.u_r()[i]);
      REQUIRE(back.w()[i] == profile.w()[i]);
    }
    CHECK(profile_csv(back) == slurp(dir / "p.csv"));
    CHECK(slurp(dir / "p.csv").rfind("r,u,u_r,w\n", 0) == 0);
    CHECK_FALSE(fs::exists(dir / "p.csv.tmp"));

    std::ofstream(dir / "bad.csv") << "r,u\n1,2\n";
    CHECK_THROWS_AS(read_profile_csv(dir / "bad.csv", 2, 2), plap::InvalidArgument);
  }

  TEST_CASE("JSON helpers") {
    CHECK(to_json(plap::ExtendedReal::infinity()) == "inf");
    CHECK(to_json(plap::ExtendedReal(2.5)) == 2.5);
    RunConfig config;
    const auto header = report_header("solve", config.to_json());
    CHECK(header["schema"] == 1);
    CHECK(header["version"] == tool_version());
    CHECK(header["config"]["problem"]["n"] == "2");
    CHECK(format_double(0.1) == "0.10000000000000001");
  }

  TEST_CASE("commands: outcomes and exit codes") {
    const auto dir = scratch("commands");
    RunConfig config;
    config.set("output.dir", (dir / "a").string());

    config.set("problem.n", "12");
    auto exponents = run_command("exponents", config);
    CHECK(exponents.exit_code == kExitOk);
    CHECK(exponents.report["result"]["regime"] == "C");
    CHECK(exponents.report["result"]["q0"].get<double>() ==
          doctest::Approx(17.559899496852960).epsilon(1e-13));
    config.set("problem.p", "1");
    CHECK(run_command("exponents", config).exit_code == kExitUsage);
    config.set("problem.p", "2");

    config.set("problem.n", "2");
    auto solved = run_command("solve", config);
    CHECK(solved.exit_code == kExitOk);
    CHECK(solved.report["result"]["estimates"]["regime"] == "A");
    CHECK(fs::exists(dir / "a" / "profile.csv"));
    CHECK(fs::exists(dir / "a" / "solve.json"));

    config.set("problem.lambda", "3");
    auto divergent = run_command("solve", config);
    CHECK(divergent.exit_code == kExitMath);
    CHECK(divergent.report["result"]["status"] == "divergent");
    config.set("problem.lambda", "1");

    config.set("stability.source", "file");
    config.set("stability.profile", (dir / "a" / "profile.csv").string());
    auto from_file = run_command("stability", config);
    CHECK(from_file.exit_code == kExitOk);
    CHECK(from_file.report["result"]["verdict"] == "semi-stable");
    config.set("stability.profile", (dir / "nope.csv").string());
    CHECK(run_command("stability", config).exit_code == kExitUsage);

    config.set("stability.source", "exact");
    config.set("problem.n", "8");
    auto unstable = run_command("stability", config);
    CHECK(unstable.exit_code == kExitOk);
    CHECK(unstable.report["result"]["verdict"] == "unstable");

    CHECK(run_command("sweep", config).exit_code == kExitUsage);
    CHECK(run_command("frobnicate", config).exit_code == kExitUsage);
  }

  TEST_CASE("sweep: layout, resume and determinism") {
    const auto dir = scratch("sweep");
    RunConfig config;
    config.set("output.dir", dir.string());
    config.set("sweep.command", "exponents");
    config.set("sweep.n", "5,12");
    config.set("sweep.p", "2,3");
    const auto first = run_command("sweep", config, {2, false});
    REQUIRE(first.exit_code == kExitOk);
    CHECK(first.report["result"]["points"] == 4);
    CHECK(first.report["result"]["resumed"] == 0);
    const auto index = slurp(dir / "index.csv");
    CHECK(index.find("1,5,3,1,exponents,0,\"ok\",A,points/point-0001") != std::string::npos);
    CHECK(fs::exists(dir / "points" / "point-0003" / "exponents.json"));

    const auto second = run_command("sweep", config, {2, false});
    CHECK(second.report["result"]["resumed"] == 4);
    CHECK(slurp(dir / "index.csv") == index);
    const auto forced = run_command("sweep", config, {1, true});
    CHECK(forced.report["result"]["resumed"] == 0);
    CHECK(slurp(dir / "index.csv") == index);
  }

  TEST_CASE("sweep records per-point failures") {
    const auto dir = scratch("sweep-fail");
    RunConfig config;
    config.set("output.dir", dir.string());
    config.set("sweep.command", "exponents");
    config.set("sweep.p", "0.5,2");
    const auto result = run_command("sweep", config);
    CHECK(result.exit_code == kExitOk);
    const auto index = slurp(dir / "index.csv");
    CHECK(index.find("0,2,0.5,1,exponents,2,\"error:InvalidArgument\"") != std::string::npos);
  }

  TEST_CASE("executable exit codes") {
    const auto dir = scratch("exe");
    CHECK(run_exe("exponents --n 12 --p 2") == 0);
    CHECK(run_exe("exponents --n 5 --p 1") == 2);
    CHECK(run_exe("--no-such-flag exponents") == 2);
    CHECK(run_exe("exponents --set problem.nn=3") == 2);
    CHECK(run_exe("solve --lambda 3 --N 400 --out " + dir.string()) == 3);
    CHECK(run_exe("stability --source file --profile " + (dir / "x.csv").string()) == 2);
    CHECK(run_exe("--version") == 0);
  }

  TEST_CASE("verify presets map to criteria") {
    CHECK(preset_criteria("gelfand-disk") == std::vector<int>{1, 5, 6, 8, 9});
    CHECK_THROWS_AS(preset_criteria("nope"), plap::InvalidArgument);
    const auto quick = run_criterion(1, scratch("verify"));
    CHECK(quick.passed);
    CHECK(quick.name == "critical-dimensions");
  }
}
