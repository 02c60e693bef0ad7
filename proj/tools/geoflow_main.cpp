#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geoflow/diagnostics.hpp"
#include "geoflow/runio.hpp"
#include "geoflow/scenario.hpp"
#include "geoflow/selfsimilar.hpp"

namespace fs = std::filesystem;
using namespace geoflow;

namespace {

fs::path output_root() {
  if (const char* env = std::getenv("GEOFLOW_OUT")) return fs::path(env);
  return fs::path("out");
}

int cmd_validate(const std::string& file) {
  const Scenario scn = load_scenario(file);
  const ValidationReport report = validate_scenario(scn);
  for (const ValidationItem& item : report.items)
    std::printf("[%s] %s (%s)\n", item.passed ? "PASS" : "FAIL", item.name.c_str(),
                item.detail.c_str());
  return report.all_passed() ? 0 : 1;
}

int cmd_run(const std::string& file, std::string out_dir, bool force) {
  const Scenario scn = load_scenario(file);
  if (!force) {
    const ValidationReport report = validate_scenario(scn);
    if (!report.all_passed()) {
      std::fprintf(stderr, "scenario '%s' fails validation (use --force to run anyway):\n",
                   scn.name.c_str());
      for (const ValidationItem& item : report.items)
        if (!item.passed)
          std::fprintf(stderr, "  [FAIL] %s (%s)\n", item.name.c_str(), item.detail.c_str());
      return 1;
    }
  }
  const fs::path dir = out_dir.empty() ? output_root() / scn.name : fs::path(out_dir);
  const int code = run_scenario(scn, dir);
  std::printf("%s: wrote %s (exit %d)\n", scn.name.c_str(), dir.string().c_str(), code);
  return code;
}

void print_soliton_table(const char* name, double coarse, double fine) {
  const double order = std::log2(coarse / fine);
  std::printf("%-22s %12.5e %12.5e   order %.2f\n", name, coarse, fine, order);
}

int cmd_soliton_check(bool grim, bool circle, bool geodesic, std::size_t n) {
  if (!grim && !circle && !geodesic) grim = circle = geodesic = true;
  std::printf("%-22s %12s %12s\n", "residual", "n", "2n");
  if (grim) {
    const auto residual = [](std::size_t nn) {
      const DiscreteCurve c = soliton_curve(SolitonSpec::grim_reaper(1.0), nn);
      return translator_residual(c, compute_geometry(c), Vec3{0.0, 1.0, 0.0});
    };
    print_soliton_table("grim-reaper translator", residual(n), residual(2 * n));
    const DiscreteCurve c = soliton_curve(SolitonSpec::grim_reaper(1.0), n);
    const CurveGeometry g = compute_geometry(c);
    std::printf("  turning %.6f, chord-arc min %.6f\n", total_turning(g),
                chord_arc_scan(c, g).theta_min);
  }
  if (circle) {
    const auto residual = [](std::size_t nn) {
      const DiscreteCurve c = soliton_curve(SolitonSpec::shrinking_circle(1.0), nn);
      return homothetic_residual(c, compute_geometry(c), Point{{0.0, 0.0, 0.0}});
    };
    print_soliton_table("circle homothetic", residual(n), residual(2 * n));
  }
  if (geodesic) {
    const DiscreteCurve c = soliton_curve(SolitonSpec::geodesic(), n);
    const CurveGeometry g = compute_geometry(c);
    const double hom = homothetic_residual(c, g, Point{{0.0, 0.0, 0.0}});
    const double tra = translator_residual(c, g, Vec3{0.0, 1.0, 0.0});
    std::printf("%-22s %12.5e\n", "geodesic homothetic", hom);
    std::printf("%-22s %12.5e\n", "geodesic translator", tra);
  }
  return 0;
}

int cmd_sweep(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::fprintf(stderr, "no scenario files in %s\n", dir.c_str());
    return 1;
  }
  int worst = 0;
  for (const fs::path& file : files) {
    const Scenario scn = load_scenario(file.string());
    const fs::path out = output_root() / scn.name;
    const int code = run_scenario(scn, out);
    std::printf("%-32s exit %d\n", scn.name.c_str(), code);
    worst = std::max(worst, code);
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curve shortening flow simulator and verification harness"};
  app.require_subcommand(1);

  std::string file, out_dir, sweep_dir;
  bool force = false, grim = false, circle = false, geodesic = false;
  std::size_t n = 256;

  CLI::App* validate = app.add_subcommand("validate", "check a scenario against the hypotheses");
  validate->add_option("file", file, "scenario JSON file")->required();

  CLI::App* runcmd = app.add_subcommand("run", "run a scenario and write diagnostics");
  runcmd->add_option("file", file, "scenario JSON file")->required();
  runcmd->add_option("--out", out_dir, "output directory (default $GEOFLOW_OUT/<name>)");
  runcmd->add_flag("--force", force, "run even if validation fails");

  CLI::App* soliton = app.add_subcommand("soliton-check", "verify soliton residuals");
  soliton->add_flag("--grim-reaper", grim, "translating graph residuals");
  soliton->add_flag("--circle", circle, "shrinking circle residuals");
  soliton->add_flag("--geodesic", geodesic, "stationary segment residuals");
  soliton->add_option("--n", n, "resolution");

  CLI::App* sweep = app.add_subcommand("sweep", "run every scenario in a directory");
  sweep->add_option("dir", sweep_dir, "directory of scenario JSON files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(file);
    if (runcmd->parsed()) return cmd_run(file, out_dir, force);
    if (soliton->parsed()) return cmd_soliton_check(grim, circle, geodesic, n);
    if (sweep->parsed()) return cmd_sweep(sweep_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
