#include "skyrmion/errors.hpp"
#include "skyrmion/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace skyrmion;

int main(int argc, char **argv) {
  CLI::App app{"Chiral skyrmion experiments: minimizers, tail energies, predictions, validation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int workers = 0;
  int verbosity = 0;

  const std::vector<std::pair<Mode, std::string>> modes{
      {Mode::minimize, "minimize the energy at each kappa from a truncated profile"},
      {Mode::tail, "solve the tail problem and compare the energy routes"},
      {Mode::predict, "predicted center, radius and limiting energy"},
      {Mode::sweep, "kappa continuation with the limit comparison table"},
      {Mode::validate, "run the acceptance suite; exit status 0 iff all checks pass"},
      {Mode::free_boundary, "pinned against free-boundary runs"}};
  std::vector<std::pair<CLI::App *, Mode>> subs;
  for (const auto &[mode, help] : modes) {
    CLI::App *sub = app.add_subcommand(std::string(to_string(mode)), help);
    sub->add_option("-c,--config", config_path, "JSON config (defaults when omitted)")->check(CLI::ExistingFile);
    sub->add_option("-o,--out", out_dir, "output directory (overrides outputs.directory)");
    sub->add_option("-j,--workers", workers, "worker threads (overrides workers)")->check(CLI::PositiveNumber);
    sub->add_flag("-v,--verbose", verbosity, "progress messages; repeat for more");
    subs.emplace_back(sub, mode);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    for (const auto &[sub, mode] : subs) {
      if (sub->parsed()) {
        config.mode = mode;
      }
    }
    config.validate();
    RunOptions opts;
    if (!out_dir.empty()) {
      opts.output_directory = out_dir;
    }
    if (workers > 0) {
      opts.workers = workers;
    }
    opts.verbosity = verbosity;
    opts.log = &std::cerr;
    const RunOutcome outcome = run(config, opts);
    if (outcome.report) {
      for (const CriterionResult &c : outcome.report->criteria) {
        std::cout << "criterion " << c.id << " " << (c.passed() ? "PASS" : "FAIL") << "  " << c.title << '\n';
      }
    }
    for (const auto &p : outcome.artifacts) {
      std::cout << p.string() << '\n';
    }
    return outcome.exit_code;
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
