#include <CLI11.hpp>
#include <string>

#include "fharm/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scenario runner for the radial density-energy audit library"};

  std::string suite_path;
  fharm::RunOptions opt;
  std::string emit = "on";

  app.add_option("--suite", suite_path, "Suite file (JSON)")->required();
  app.add_option("--scenario", opt.only_scenario, "Run a single scenario id");
  app.add_option("--out", opt.out_dir, "Output directory")
      ->default_val("out");
  app.add_option("--tolerance-scale", opt.tolerance_scale,
                 "Uniform multiplier on audit tolerances")
      ->default_val(1.0);
  app.add_option("--emit-curves", emit, "Write CSV curves (on/off)")
      ->check(CLI::IsMember({"on", "off"}))
      ->default_val("on");
  app.add_option("--workers", opt.workers,
                 "Concurrent scenario evaluations (0 = auto)")
      ->default_val(0);

  CLI11_PARSE(app, argc, argv);
  opt.emit_curves = emit == "on";

  return fharm::run_suite_file(suite_path, opt);
}
