#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "doctest.h"
#include "kk/io.hpp"

namespace fs = std::filesystem;
using namespace kk::cli;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kk_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_scenario(const fs::path& dir, const std::string& source, const std::string& eps) {
  const fs::path p = dir / "scenario.json";
  std::ofstream(p) << R"({"schema": 1, "name": "cli",
    "model": {"name": "gc", "source": {"kind": ")"
                   << source << R"(", "k": 0.1}},
    "initial": {"rho": {"type": "sine", "mean": 1.5, "amp": 0.2, "freq": 1}, "w": 0.5},
    "grid": {"n_cells": 32, "boundary": "periodic"},
    "t_end": 0.05, "epsilon": )"
                   << eps << R"(, "snapshots": 4,
    "region": {"C1": -2, "C2": 1},
    "output": ")" << (dir / "out").string()
                   << R"("})";
  return p;
}

int run(const std::function<int()>& f) {
  std::ostringstream err;
  return run_guarded(f, err);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("audit exit codes") {
    std::ostringstream log;
    const fs::path dir = scratch("audit");
    CHECK(run([&] { return cmd_audit(write_scenario(dir, "exit", "[0.02, 0.01]"), {}, log); }) ==
          ok);
    CHECK(fs::exists(dir / "out" / "audit.json"));
    CHECK(run([&] { return cmd_audit(write_scenario(dir, "remark", "[0.02, 0.01]"), {}, log); }) ==
          audit_failed);
  }

  TEST_CASE("solve is gated by the audit") {
    std::ostringstream log;
    const fs::path dir = scratch("gate");
    const fs::path s = write_scenario(dir, "remark", "[0.02, 0.01]");
    CHECK(run([&] { return cmd_solve(s, {}, log); }) == audit_failed);
    Options forced;
    forced.force = true;
    forced.inviscid = true;
    CHECK(run([&] { return cmd_solve(s, forced, log); }) == ok);
  }

  TEST_CASE("solve, plot and sweep write their artifacts") {
    std::ostringstream log;
    const fs::path dir = scratch("solve");
    const fs::path s = write_scenario(dir, "exit", "[0.02, 0.01]");
    CHECK(run([&] { return cmd_solve(s, {}, log); }) == ok);
    const fs::path index = dir / "out" / "eps_0.01" / "index.json";
    REQUIRE(fs::exists(index));
    CHECK(kk::io::read_trajectory(index).snapshots.size() == 5);
    CHECK(run([&] { return cmd_plot(index, {}, log); }) == ok);
    CHECK(fs::exists(dir / "out" / "eps_0.01" / "plots" / "plot_0004.svg"));
    CHECK(run([&] { return cmd_sweep(s, {}, log); }) == ok);
    CHECK(fs::exists(dir / "out" / "decay.csv"));
    CHECK(fs::exists(dir / "out" / "sweep.svg"));
    CHECK(fs::exists(dir / "out" / "diagnostics_eps1.json"));
  }

  TEST_CASE("input errors map to exit codes") {
    std::ostringstream log;
    const fs::path dir = scratch("errors");
    CHECK(run([&] { return cmd_audit(dir / "absent.json", {}, log); }) == missing_input);
    std::ofstream(dir / "bad.json") << "{\"schema\": 1,";
    CHECK(run([&] { return cmd_solve(dir / "bad.json", {}, log); }) == parse_error);
    kk::io::write_text(dir / "index.json", R"({"files": [], "t_values": []})");
    CHECK(run([&] { return cmd_plot(dir / "index.json", {}, log); }) == missing_input);
    const fs::path s = write_scenario(dir, "exit", "[0.02]");
    CHECK(run([&] { return cmd_sweep(s, {}, log); }) == parse_error);
  }

  TEST_CASE("region violation exit code") {
    std::ostringstream log;
    const fs::path dir = scratch("region");
    const fs::path p = dir / "scenario.json";
    std::ofstream(p) << R"({"schema": 1, "model": {"name": "gc"},
      "initial": {"rho": 1.0, "w": 2.0}, "grid": {"n_cells": 16},
      "t_end": 0.01, "epsilon": [0.01], "snapshots": 2, "region": {"C1": 0, "C2": 1},
      "output": ")" << (dir / "out").string() << "\"}";
    CHECK(run([&] { return cmd_solve(p, {}, log); }) == region_violation);
  }

  TEST_CASE("worker count honours the job count") {
    CHECK(worker_count(1) == 1);
    CHECK(worker_count(3) >= 1);
    CHECK(worker_count(3) <= 3);
  }
}
