// forestnav — 2D forest-navigation simulator, PPO trainer and evaluation
// harness. Subcommands: gen-map, scan, train, eval, replay, plot.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "forestnav/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"2D forest LiDAR navigation: simulator, PPO trainer, evaluation harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;

  // gen-map
  auto* gen = app.add_subcommand("gen-map", "generate a forest map file");
  std::string gen_out = "map.json";
  gen->add_option("--config", config_path, "experiment config (JSON)")->required();
  gen->add_option("--seed", seed, "override forest.seed");
  gen->add_option("--out", gen_out, "output map file");

  // scan
  auto* sc = app.add_subcommand("scan", "dump one LiDAR sweep as CSV");
  std::optional<std::string> scan_map;
  double scan_x = 0.0, scan_y = 0.0;
  std::string scan_out = "scan.csv";
  sc->add_option("--config", config_path, "experiment config (JSON)")->required();
  sc->add_option("--map", scan_map, "existing map file (default: generate from seed)");
  sc->add_option("--seed", seed, "override forest.seed when generating");
  sc->add_option("--x", scan_x, "sensor x position [m]");
  sc->add_option("--y", scan_y, "sensor y position [m]");
  sc->add_option("--out", scan_out, "output CSV");

  // train
  auto* tr = app.add_subcommand("train", "run PPO training");
  tr->add_option("--config", config_path, "experiment config (JSON)")->required();
  tr->add_option("--seed", seed, "override run_seed");
  tr->add_option("--out", out_dir, "override out_dir");
  bool quiet = false;
  tr->add_flag("--quiet", quiet, "suppress per-update progress lines");

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate a checkpoint over fresh-map missions");
  std::string ckpt;
  std::string scripted;
  int episodes = 100;
  ev->add_option("--config", config_path, "experiment config (JSON)")->required();
  ev->add_option("--checkpoint", ckpt, "checkpoint file");
  ev->add_option("--scripted", scripted, "use a scripted policy instead: forward|zero");
  ev->add_option("--episodes", episodes, "number of missions");
  ev->add_option("--seed", seed, "base episode seed (default run_seed)");
  ev->add_option("--out", out_dir, "directory for eval_report.csv");

  // replay
  auto* rp = app.add_subcommand("replay", "run one deterministic episode on a fixed map");
  std::string replay_map;
  std::uint64_t replay_seed = 0;
  std::string replay_out = "replay";
  bool dump_scans = false;
  rp->add_option("--config", config_path, "experiment config (JSON)")->required();
  rp->add_option("--checkpoint", ckpt, "checkpoint file")->required();
  rp->add_option("--map", replay_map, "map file")->required();
  rp->add_option("--seed", replay_seed, "episode tag recorded in the output");
  rp->add_option("--out", replay_out, "output directory");
  rp->add_flag("--dump-scans", dump_scans, "write per-step scan CSVs");

  // plot
  auto* pl = app.add_subcommand("plot", "render map + trajectory to SVG");
  std::string plot_traj, plot_map, plot_out = "mission.svg";
  double goal_x = 30.0;
  pl->add_option("--trajectory", plot_traj, "trajectory CSV")->required();
  pl->add_option("--map", plot_map, "map file")->required();
  pl->add_option("--out", plot_out, "output SVG");
  pl->add_option("--goal-x", goal_x, "goal marker position [m]");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      forestnav::run_gen_map(config_path, seed, gen_out);
    } else if (sc->parsed()) {
      forestnav::run_scan(config_path, scan_map, seed, {scan_x, scan_y}, scan_out);
    } else if (tr->parsed()) {
      forestnav::run_train(config_path, seed, out_dir, !quiet);
    } else if (ev->parsed()) {
      if (!scripted.empty())
        forestnav::run_eval_scripted(config_path, scripted, episodes, seed, out_dir);
      else if (!ckpt.empty())
        forestnav::run_eval(config_path, ckpt, episodes, seed, out_dir);
      else
        throw std::invalid_argument("eval needs --checkpoint or --scripted");
    } else if (rp->parsed()) {
      forestnav::run_replay(config_path, ckpt, replay_map, replay_seed, replay_out, dump_scans);
    } else if (pl->parsed()) {
      forestnav::run_plot(plot_traj, plot_map, plot_out, goal_x);
    }
  } catch (const std::exception& e) {
    std::cerr << "forestnav: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
