// Command-line front end: reduce / energy / sweep / wrinkle / regimes / verify.

#include <CLI11.hpp>

#include <iostream>

#include "platelim/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::int64_t seed = -1;
  int threads = 0;
};

void attach(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "RNG seed (overrides config)");
  cmd->add_option("--threads", args.threads, "worker threads (overrides config)");
}

platelim::RunConfig load(const CommonArgs& args) {
  platelim::RunConfig cfg = args.config_path.empty()
                                ? platelim::RunConfig{}
                                : platelim::parse_config_file(args.config_path);
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  if (args.threads > 0) cfg.threads = args.threads;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prestrained thin-sheet reduction toolkit"};
  app.require_subcommand(1);

  CommonArgs args[6];
  const char* names[6] = {"reduce", "energy", "sweep", "wrinkle", "regimes", "verify"};
  const char* descs[6] = {"effective plate model table",
                          "plate energy, closed form vs direct minimization",
                          "curved recovery h-sweep",
                          "wrinkled flat h-sweep",
                          "pathological prestrain diagnostics",
                          "invariant suites"};
  CLI::App* subs[6];
  for (int i = 0; i < 6; ++i) {
    subs[i] = app.add_subcommand(names[i], descs[i]);
    attach(subs[i], args[i]);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (int i = 0; i < 6; ++i) {
      if (!subs[i]->parsed()) continue;
      const platelim::RunConfig cfg = load(args[i]);
      switch (i) {
        case 0: return platelim::cmd_reduce(cfg, args[i].out_dir);
        case 1: return platelim::cmd_energy(cfg, args[i].out_dir);
        case 2: return platelim::cmd_sweep(cfg, args[i].out_dir);
        case 3: return platelim::cmd_wrinkle(cfg, args[i].out_dir);
        case 4: return platelim::cmd_regimes(cfg, args[i].out_dir);
        case 5: return platelim::cmd_verify(cfg, args[i].out_dir);
      }
    }
  } catch (const platelim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const platelim::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
