#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spinwave/coefficients.hpp"
#include "spinwave/io.hpp"
#include "spinwave/random_fields.hpp"

namespace spinwave {

/// Parameters shared by every experiment. All randomness derives from `seed`.
struct ExperimentConfig {
  int spin = 2;
  int L = 32;
  double a = 1.2599210498948732;  // 2^{1/3}
  double b = 0.4;
  double alpha = 3.0;
  double c = 1.0;
  std::uint64_t seed = 1;
  int n_reps = 100;
  std::vector<int> j_list;  // empty: experiment-specific default
  std::string out = "out";
  int threads = 1;

  std::vector<int> spins = {-2, 0, 2};  // harmonics-check
  int trials = 8;                       // frame-check random trials
  int lanczos_steps = 30;
  int b_halvings = 0;                   // frame-check sweep b, b/2, ...
  std::string frame_file;               // frame-check input
  int n_samples = 4000;                 // localization distances
  double dmax = 3.0;
  double fit_lo = 400.0, fit_hi = 1600.0;  // far window in units of d/t
  std::vector<std::array<double, 4>> pairs = {{1.2, 0.3, 1.7, 0.3}};  // (θx, φx, θy, φy)
  double significance = 0.05;
  double model_scale = 1.0;  // sj-test: model spectrum = model_scale × truth
  bool with_frame = false;   // sj-test: also compute Γ̃ on a frame at (a, b, spin, L)

  /// Unknown keys and ill-typed values raise ConfigError.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// Range checks; raises ConfigError.
  void validate() const;
};

struct RunResult {
  std::map<std::string, io::Table> tables;  // written as <name>.csv
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> violations;      // non-empty: a check failed
  std::optional<nlohmann::json> frame;      // frame-build output
  std::optional<PowerSpectrum> spectrum;    // simulate output
  std::vector<SpinCoefficients> ensemble;   // simulate output
};

RunResult run_harmonics_check(const ExperimentConfig& cfg);
RunResult run_frame_build(const ExperimentConfig& cfg);
/// Uses cfg.frame_file when set, otherwise builds the frame from cfg.
RunResult run_frame_check(const ExperimentConfig& cfg);
RunResult run_simulate(const ExperimentConfig& cfg);
RunResult run_localization(const ExperimentConfig& cfg);
RunResult run_uncorrelation(const ExperimentConfig& cfg);
RunResult run_clt(const ExperimentConfig& cfg);
RunResult run_sj_test(const ExperimentConfig& cfg);

/// Dispatch by subcommand name; ConfigError for unknown names.
RunResult run_experiment(const std::string& subcommand, const ExperimentConfig& cfg);

/// Writes tables, frame/spectrum/ensemble artifacts and manifest_<subcommand>.json
/// under cfg.out; returns the manifest.
nlohmann::json write_artifacts(const std::string& subcommand, const ExperimentConfig& cfg,
                               const RunResult& result);

/// The four finest scales whose filter support lies within [|s|, L].
std::vector<int> default_scales(double a, int s, int L, int count = 4);

}  // namespace spinwave
