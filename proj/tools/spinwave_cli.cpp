// Command-line entry point: parses a JSON config plus flag overrides, runs one
// experiment from the library and writes its artifacts.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "spinwave/errors.hpp"
#include "spinwave/experiments.hpp"
#include "spinwave/io.hpp"
#include "spinwave/parallel.hpp"

namespace fs = std::filesystem;
using spinwave::ExperimentConfig;

namespace {

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
  int spin = 0, L = 0, n_reps = 0, trials = 0, lanczos = 0, halvings = 0, n_samples = 0;
  double a = 0, b = 0, alpha = 0, c = 0, dmax = 0, fit_lo = 0, fit_hi = 0, significance = 0,
         model_scale = 0;
  std::vector<int> j_list, spins;
  std::string frame;
  bool with_frame = false;
};

void add_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file");
  app->add_option("--seed", f.seed, "root seed");
  app->add_option("--out", f.out, "output directory (frame build: frame file)");
  app->add_option("--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--spin", f.spin, "spin weight s");
  app->add_option("--lmax,-L", f.L, "band limit L");
  app->add_option("--a", f.a, "dilation base a > 1");
  app->add_option("--b", f.b, "discretization parameter b in (0,1)");
  app->add_option("--alpha", f.alpha, "power-law exponent");
  app->add_option("--c", f.c, "power-law amplitude");
  app->add_option("--n-reps", f.n_reps, "replications");
  app->add_option("--j", f.j_list, "scales j")->delimiter(',');
  app->add_option("--spins", f.spins, "spins for harmonics-check")->delimiter(',');
  app->add_option("--trials", f.trials, "random trials for frame check");
  app->add_option("--lanczos-steps", f.lanczos, "Lanczos steps for frame check");
  app->add_option("--b-halvings", f.halvings, "frame check: also run b/2, b/4, ...");
  app->add_option("--frame", f.frame, "frame file for frame check");
  app->add_option("--n-samples", f.n_samples, "localization sample count");
  app->add_option("--dmax", f.dmax, "localization maximal distance");
  app->add_option("--fit-lo", f.fit_lo, "far window start, units of t");
  app->add_option("--fit-hi", f.fit_hi, "far window end, units of t");
  app->add_option("--significance", f.significance, "test level alpha");
  app->add_option("--model-scale", f.model_scale, "sj-test model spectrum factor");
  app->add_flag("--with-frame", f.with_frame, "sj-test: also compute gamma_tilde");
}

ExperimentConfig make_config(const CLI::App* app, const Flags& f) {
  ExperimentConfig cfg;
  if (!f.config.empty()) cfg = ExperimentConfig::from_json(spinwave::io::read_json(f.config));
  auto given = [&](const char* name) { return app->count(name) > 0; };
  if (given("--seed")) cfg.seed = f.seed;
  if (given("--out")) cfg.out = f.out;
  if (given("--threads")) cfg.threads = f.threads;
  if (given("--spin")) cfg.spin = f.spin;
  if (given("--lmax")) cfg.L = f.L;
  if (given("--a")) cfg.a = f.a;
  if (given("--b")) cfg.b = f.b;
  if (given("--alpha")) cfg.alpha = f.alpha;
  if (given("--c")) cfg.c = f.c;
  if (given("--n-reps")) cfg.n_reps = f.n_reps;
  if (given("--j")) cfg.j_list = f.j_list;
  if (given("--spins")) cfg.spins = f.spins;
  if (given("--trials")) cfg.trials = f.trials;
  if (given("--lanczos-steps")) cfg.lanczos_steps = f.lanczos;
  if (given("--b-halvings")) cfg.b_halvings = f.halvings;
  if (given("--frame")) cfg.frame_file = f.frame;
  if (given("--n-samples")) cfg.n_samples = f.n_samples;
  if (given("--dmax")) cfg.dmax = f.dmax;
  if (given("--fit-lo")) cfg.fit_lo = f.fit_lo;
  if (given("--fit-hi")) cfg.fit_hi = f.fit_hi;
  if (given("--significance")) cfg.significance = f.significance;
  if (given("--model-scale")) cfg.model_scale = f.model_scale;
  if (given("--with-frame")) cfg.with_frame = f.with_frame;
  return cfg;
}

void print_table(const std::string& name, const spinwave::io::Table& t) {
  constexpr std::size_t kMaxRows = 12;
  std::printf("%s (%zu rows)\n", name.c_str(), t.rows.size());
  for (const auto& c : t.columns) std::printf("  %16s", c.c_str());
  std::printf("\n");
  for (std::size_t r = 0; r < t.rows.size() && r < kMaxRows; ++r) {
    for (double v : t.rows[r]) std::printf("  %16.8g", v);
    std::printf("\n");
  }
  if (t.rows.size() > kMaxRows) std::printf("  ...\n");
}

int run(const std::string& sub, const CLI::App* app, const Flags& f) {
  ExperimentConfig cfg = make_config(app, f);
  // `frame build --out frame.json` names the frame file itself.
  fs::path frame_target;
  if (sub == "frame-build" && fs::path(cfg.out).extension() == ".json") {
    frame_target = cfg.out;
    cfg.out = frame_target.has_parent_path() ? frame_target.parent_path().string() : ".";
  }
  spinwave::set_num_threads(cfg.threads);
  const auto result = spinwave::run_experiment(sub, cfg);
  spinwave::write_artifacts(sub, cfg, result);
  if (!frame_target.empty() && frame_target != fs::path(cfg.out) / "frame.json") {
    fs::rename(fs::path(cfg.out) / "frame.json", frame_target);
  }
  for (const auto& [name, table] : result.tables) print_table(name, table);
  if (!result.summary.empty()) std::printf("summary %s\n", result.summary.dump().c_str());
  if (!result.violations.empty()) {
    for (const auto& v : result.violations) std::fprintf(stderr, "ThresholdViolation: %s\n", v.c_str());
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin needlet frames, spin random fields and their statistics"};
  app.require_subcommand(1);
  Flags flags;
  std::string chosen;
  const CLI::App* chosen_app = nullptr;

  auto reg = [&](CLI::App* parent, const std::string& name, const std::string& key, const std::string& help) {
    CLI::App* sub = parent->add_subcommand(name, help);
    add_flags(sub, flags);
    sub->callback([&, key, sub] {
      chosen = key;
      chosen_app = sub;
    });
  };
  reg(&app, "harmonics-check", "harmonics-check", "Gram matrix and round-trip residuals");
  reg(&app, "frame-build", "frame-build", "build a needlet frame and write frame.json");
  reg(&app, "frame-check", "frame-check", "estimate frame bounds (optionally over halved b)");
  reg(&app, "simulate", "simulate", "sample Gaussian spin fields from a power law");
  reg(&app, "localization", "localization", "needlet kernel decay tables");
  reg(&app, "uncorrelation", "uncorrelation", "needlet coefficient correlations");
  reg(&app, "clt", "clt", "standardized gamma_hat and KS distances");
  reg(&app, "sj-test", "sj-test", "S_j statistics and rejection rates");
  CLI::App* frame = app.add_subcommand("frame", "frame build | frame check");
  frame->require_subcommand(1);
  reg(frame, "build", "frame-build", "build a needlet frame");
  reg(frame, "check", "frame-check", "estimate frame bounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    return run(chosen, chosen_app, flags);
  } catch (const spinwave::Error& e) {
    std::fprintf(stderr, "%s: %s\n", std::string(spinwave::to_string(e.kind())).c_str(), e.what());
    return e.kind() == spinwave::ErrorKind::ConfigError ? 3 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
