#include "commands.hpp"
#include "config.hpp"

#include "lcs/parallel.hpp"
#include "lcs/types.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"lcs: locally conformal symplectic experiments"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
  const char* subs[][2] = {{"flow", "integrate Hamiltonian flows, trajectories CSV"},
                           {"chords", "translated points and Lee chords, JSON"},
                           {"genfun", "graph generating function and its critical values, JSON"},
                           {"spectral", "spectral selectors c+- and barcode CSV"},
                           {"metric", "pairwise integer metric table, CSV"},
                           {"capacity", "capacity lower bound report, JSON"},
                           {"nonsqueeze", "non-squeezing verdicts, JSON"},
                           {"verify", "invariant suite with pass/fail summary"}};
  for (auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s[0], s[1]);
    sub->add_option("config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "worker threads (overrides LCS_THREADS and the config)");
    sub->add_option("--out", out_dir, "override output.dir");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  lcs::cli::json overrides = lcs::cli::json::object();
  if (seed) overrides["/seed"] = *seed;
  if (out_dir) overrides["/output/dir"] = *out_dir;
  try {
    lcs::cli::Config cfg = lcs::cli::load_config(config_path, name, overrides);
    // precedence: --threads, then LCS_THREADS, then the config knob
    int knob = cfg.resolved["threads"];
    if (threads)
      lcs::set_thread_count(*threads);
    else if (!std::getenv("LCS_THREADS") && knob > 0)
      lcs::set_thread_count(knob);
    return lcs::cli::run_subcommand(cfg);
  } catch (const lcs::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
}
