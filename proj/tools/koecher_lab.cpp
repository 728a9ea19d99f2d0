// koecher-lab: command line front end for the fan, cohomology, Hecke, curve and matching stages.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "koecher/pipeline.hpp"

using namespace koecher;
namespace fs = std::filesystem;

namespace {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvariantViolation*>(&e)) return 2;
  if (dynamic_cast<const HeuristicFailure*>(&e)) return 3;
  return 1;
}

void print_level(const LevelResult& r) {
  std::cout << "level " << r.level.norm() << " " << r.level.generator().str() << " type " << r.type << " P1 " << r.p1
            << " cells " << r.cells[0] << "/" << r.cells[1] << "/" << r.cells[2] << " H4 " << r.h4;
  if (r.eisenstein_expected) std::cout << " eisenstein(table) " << *r.eisenstein_expected;
  std::cout << "\n";
  for (const auto& p : r.packets) {
    std::cout << "  " << kind_name(p.kind) << " dim " << p.dimension << ":";
    for (const auto& e : p.eigenvalues)
      std::cout << " " << e.prime.norm() << "->" << (e.value ? std::to_string(*e.value) : "?");
    std::cout << "\n";
  }
}

std::vector<LevelResult> read_levels(const fs::path& dir) {
  std::vector<LevelResult> out;
  fs::path root = fs::exists(dir / "levels") ? dir / "levels" : dir;
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root))
    if (entry.path().filename() == "level.json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) out.push_back(level_from_json(read_json(f)));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Koecher fan, Hecke eigenvalues and elliptic curves over the cubic field of discriminant -23"};
  app.require_subcommand(1);
  PipelineConfig cfg;
  std::string cache_dir;
  app.add_option("--field-prime", cfg.field_prime, "coefficient prime")->capture_default_str();
  app.add_option("--prime-bound", cfg.prime_bound, "largest Hecke prime norm")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str();
  app.add_option("--cache-dir", cache_dir, "artifact cache directory");

  auto* fan_cmd = app.add_subcommand("fan", "classify the Koecher fan");
  std::string fan_out = "fan.json";
  fan_cmd->add_option("--out", fan_out)->capture_default_str();

  std::string levels_spec, fan_path, out_dir = "out";
  auto* coh_cmd = app.add_subcommand("cohomology", "H^4 of Gamma_0(n)");
  auto* hecke_cmd = app.add_subcommand("hecke", "Hecke operators and eigenpackets");
  for (auto* c : {coh_cmd, hecke_cmd}) {
    c->add_option("--levels", levels_spec, "norm<=N, norm=N or generators separated by commas")->required();
    c->add_option("--fan", fan_path, "fan file from the fan subcommand");
    c->add_option("--out-dir", out_dir)->capture_default_str();
  }
  std::size_t max_rounds = cfg.max_rounds;
  hecke_cmd->add_option("--max-rounds", max_rounds, "reduction round cap")->capture_default_str();

  auto* curves_cmd = app.add_subcommand("curves", "elliptic curve box search");
  std::string curves_out = "curves.json";
  curves_cmd->add_option("--box", cfg.search.box)->capture_default_str();
  curves_cmd->add_option("--disc-bound", cfg.search.disc_bound)->capture_default_str();
  curves_cmd->add_option("--cond-bound", cfg.search.conductor_bound)->capture_default_str();
  curves_cmd->add_option("--out", curves_out)->capture_default_str();

  auto* match_cmd = app.add_subcommand("match", "pair eigenpackets with curves");
  std::string h4_dir = "out", curves_in = "curves.json", report_out = "report.json";
  match_cmd->add_option("--h4-dir", h4_dir)->capture_default_str();
  match_cmd->add_option("--curves", curves_in)->capture_default_str();
  match_cmd->add_option("--out", report_out)->capture_default_str();

  auto* run_cmd = app.add_subcommand("run", "every stage");
  std::string run_levels;
  bool no_curves = false;
  run_cmd->add_option("--levels", run_levels, "norm<=N, norm=N or generators; empty runs fan and curves only");
  run_cmd->add_option("--fan", fan_path, "fan file from the fan subcommand");
  run_cmd->add_option("--out-dir", out_dir)->capture_default_str();
  run_cmd->add_option("--box", cfg.search.box)->capture_default_str();
  run_cmd->add_option("--disc-bound", cfg.search.disc_bound)->capture_default_str();
  run_cmd->add_option("--cond-bound", cfg.search.conductor_bound)->capture_default_str();
  run_cmd->add_option("--max-rounds", max_rounds, "reduction round cap")->capture_default_str();
  run_cmd->add_flag("--no-curves", no_curves, "skip the curve search");

  CLI11_PARSE(app, argc, argv);
  cfg.cache_dir = cache_dir;
  cfg.fan_path = fan_path;
  cfg.out_dir = out_dir;
  cfg.max_rounds = max_rounds;

  try {
    if (*fan_cmd) {
      cfg.validate();
      FanDatabase fan = obtain_fan(cfg);
      write_artifact(fan_out, fan_to_json(fan), cfg);
      auto c = fan.counts();
      std::cout << "cones by dimension:";
      for (int k = 1; k <= 7; ++k) std::cout << " " << c[k];
      std::cout << "\nwrote " << fan_out << "\n";
    } else if (*coh_cmd || *hecke_cmd) {
      cfg.levels = parse_levels(levels_spec);
      cfg.validate();
      FanDatabase fan = obtain_fan(cfg);
      for (const auto& level : cfg.levels) {
        LevelResult r = obtain_level(fan, level, cfg, hecke_cmd->parsed());
        write_artifact(fs::path(out_dir) / "levels" / level_dir_name(level) / "level.json", level_to_json(r), cfg);
        print_level(r);
      }
    } else if (*curves_cmd) {
      cfg.validate();
      Json curves = obtain_curves(cfg);
      write_artifact(curves_out, curves, cfg);
      std::cout << "curves " << curves.at("curve_count") << " in " << curves.at("class_count")
                << " isomorphism classes (reference: 26445 in 1518 for box 2, disc 10^7, conductor norm 20000)\n"
                << "wrote " << curves_out << "\n";
    } else if (*match_cmd) {
      auto levels = read_levels(h4_dir);
      std::vector<CurveClass> classes;
      if (fs::exists(curves_in)) classes = classes_from_json(read_json(curves_in));
      MatchOutput m = match_all(levels, classes);
      write_artifact(report_out, match_to_json(m), cfg);
      std::cout << match_csv(m) << old_classes_csv(m);
    } else if (*run_cmd) {
      if (!run_levels.empty()) cfg.levels = parse_levels(run_levels);
      cfg.run_curves = !no_curves;
      fs::path out = run_pipeline(cfg);
      std::cout << "artifacts in " << out.string() << "\n";
    }
  } catch (const StageError& e) {
    std::cerr << "stage " << e.stage << " failed: " << e.what() << "\nreproduce with: " << e.command << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
