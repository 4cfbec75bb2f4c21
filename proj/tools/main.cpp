#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"kk: viscous and finite-volume lab for the Keyfitz-Kranzer balance system"};
  app.require_subcommand(1);

  kk::cli::Options opts;
  std::string input;
  std::string out;

  auto add = [&](const char* name, const char* help, const char* what) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", input, what)->required();
    sub->add_option("--out", out, "Output directory (overrides the scenario)");
    sub->add_flag("--force", opts.force, "Run even when required audit conditions fail");
    return sub;
  };
  add("audit", "Check the model conditions and write audit.json", "Scenario JSON file");
  auto* solve = add("solve", "Run one solver and write a trajectory", "Scenario JSON file");
  solve->add_option("--epsilon", opts.epsilon, "Viscosity (default: smallest in the scenario)");
  solve->add_flag("--inviscid", opts.inviscid, "Use the finite-volume scheme");
  add("sweep", "Run every epsilon and write the diagnostics bundle", "Scenario JSON file");
  add("plot", "Render SVG plots of a trajectory", "Trajectory index.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kk::cli::parse_error;
  }
  if (!out.empty()) opts.out = out;

  const std::string cmd = app.get_subcommands().front()->get_name();
  return kk::cli::run_guarded(
      [&] {
        if (cmd == "audit") return kk::cli::cmd_audit(input, opts, std::cout);
        if (cmd == "solve") return kk::cli::cmd_solve(input, opts, std::cout);
        if (cmd == "sweep") return kk::cli::cmd_sweep(input, opts, std::cout);
        return kk::cli::cmd_plot(input, opts, std::cout);
      },
      std::cerr);
}
