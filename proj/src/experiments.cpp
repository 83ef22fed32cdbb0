#include "spinwave/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "spinwave/errors.hpp"
#include "spinwave/filter.hpp"
#include "spinwave/parallel.hpp"
#include "spinwave/frame.hpp"
#include "spinwave/quadrature.hpp"
#include "spinwave/rng.hpp"
#include "spinwave/simd/kernels.hpp"
#include "spinwave/stats.hpp"
#include "spinwave/transform.hpp"

namespace spinwave {

namespace {

using nlohmann::json;

template <typename T>
T take(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::ConfigError, "config key '" + key + "' has the wrong type");
  }
}

void check(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::ConfigError, what);
}

std::vector<int> scales_or_default(const ExperimentConfig& cfg) {
  return cfg.j_list.empty() ? default_scales(cfg.a, cfg.spin, cfg.L) : cfg.j_list;
}

PowerSpectrum model_spectrum(const ExperimentConfig& cfg) {
  return power_law_spectrum(cfg.spin, cfg.L, cfg.alpha, cfg.c);
}

void note_warning(RunResult& r, const PowerSpectrum& spec) {
  if (spec.warning) r.summary["warning"] = std::string(to_string(*spec.warning));
}

// Spread max/min of positive values; infinity if any is non-positive.
double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
}

FrameBoundEstimate estimate_for(const NeedletFrame& frame, const ExperimentConfig& cfg) {
  return frame_bound_estimate(frame, cfg.trials, cfg.seed, cfg.lanczos_steps);
}

}  // namespace

std::vector<int> default_scales(double a, int s, int L, int count) {
  const FilterSpec filter(a);
  const auto [jlo, jhi] = scale_range(a, s, L);
  std::vector<int> out;
  for (int j = jlo; j <= jhi && static_cast<int>(out.size()) < count; ++j) {
    if (needlet_band_limit(filter, std::pow(a, j), s) <= L) out.push_back(j);
  }
  return out;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "spin") c.spin = take<int>(v, key);
    else if (key == "L") c.L = take<int>(v, key);
    else if (key == "a") c.a = take<double>(v, key);
    else if (key == "b") c.b = take<double>(v, key);
    else if (key == "alpha") c.alpha = take<double>(v, key);
    else if (key == "c") c.c = take<double>(v, key);
    else if (key == "seed") c.seed = take<std::uint64_t>(v, key);
    else if (key == "n_reps") c.n_reps = take<int>(v, key);
    else if (key == "j_list") c.j_list = take<std::vector<int>>(v, key);
    else if (key == "out") c.out = take<std::string>(v, key);
    else if (key == "threads") c.threads = take<int>(v, key);
    else if (key == "spins") c.spins = take<std::vector<int>>(v, key);
    else if (key == "trials") c.trials = take<int>(v, key);
    else if (key == "lanczos_steps") c.lanczos_steps = take<int>(v, key);
    else if (key == "b_halvings") c.b_halvings = take<int>(v, key);
    else if (key == "frame_file") c.frame_file = take<std::string>(v, key);
    else if (key == "n_samples") c.n_samples = take<int>(v, key);
    else if (key == "dmax") c.dmax = take<double>(v, key);
    else if (key == "fit_lo") c.fit_lo = take<double>(v, key);
    else if (key == "fit_hi") c.fit_hi = take<double>(v, key);
    else if (key == "pairs") c.pairs = take<std::vector<std::array<double, 4>>>(v, key);
    else if (key == "significance") c.significance = take<double>(v, key);
    else if (key == "model_scale") c.model_scale = take<double>(v, key);
    else if (key == "with_frame") c.with_frame = take<bool>(v, key);
    else throw Error(ErrorKind::ConfigError, "unknown config key '" + key + "'");
  }
  return c;
}

json ExperimentConfig::to_json() const {
  return {{"spin", spin},           {"L", L},
          {"a", a},                 {"b", b},
          {"alpha", alpha},         {"c", c},
          {"seed", seed},           {"n_reps", n_reps},
          {"j_list", j_list},       {"out", out},
          {"threads", threads},     {"spins", spins},
          {"trials", trials},       {"lanczos_steps", lanczos_steps},
          {"b_halvings", b_halvings}, {"frame_file", frame_file},
          {"n_samples", n_samples}, {"dmax", dmax},
          {"fit_lo", fit_lo},       {"fit_hi", fit_hi},
          {"pairs", pairs},         {"significance", significance},
          {"model_scale", model_scale}, {"with_frame", with_frame}};
}

void ExperimentConfig::validate() const {
  check(L >= 1 && L <= 4096, "L must lie in [1, 4096]");
  check(std::abs(spin) <= L, "|spin| must not exceed L");
  for (int s : spins) check(std::abs(s) <= L, "|spin| in spins must not exceed L");
  check(a > 1.0 && std::isfinite(a), "a must exceed 1");
  check(b > 0.0 && b < 1.0, "b must lie in (0, 1)");
  check(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
  check(c >= 0.0 && std::isfinite(c), "c must be nonnegative");
  check(n_reps >= 1, "n_reps must be positive");
  check(threads >= 1, "threads must be positive");
  check(trials >= 1, "trials must be positive");
  check(lanczos_steps >= 0, "lanczos_steps must be nonnegative");
  check(b_halvings >= 0 && b_halvings <= 6, "b_halvings must lie in [0, 6]");
  check(n_samples >= 2, "n_samples must be at least 2");
  check(dmax > 0.0 && dmax <= std::numbers::pi, "dmax must lie in (0, pi]");
  check(fit_lo > 0.0 && fit_lo < fit_hi, "need 0 < fit_lo < fit_hi");
  check(significance > 0.0 && significance < 1.0, "significance must lie in (0, 1)");
  check(model_scale > 0.0 && std::isfinite(model_scale), "model_scale must be positive");
}

RunResult run_harmonics_check(const ExperimentConfig& cfg) {
  RunResult r;
  io::Table t{{"s", "L", "gram_residual", "roundtrip_residual"}, {}};
  const QuadratureGrid grid = build_quadrature(cfg.L);
  for (int s : cfg.spins) {
    const double gram = gram_residual(s, cfg.L, grid);
    SpinCoefficients a(s, cfg.L);
    KeyedStream rng(key_hash({cfg.seed, 0x68636b, static_cast<std::uint64_t>(s + 64)}));
    for (auto& v : a.data()) v = {rng.normal(), rng.normal()};
    const SpinCoefficients back = analysis(synthesis(a, grid));
    double rt = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) rt = std::max(rt, std::abs(back.data()[i] - a.data()[i]));
    t.add({double(s), double(cfg.L), gram, rt});
    if (gram > 1e-9) r.violations.push_back("Gram residual above 1e-9 at s = " + std::to_string(s));
    if (rt > 1e-9) r.violations.push_back("round-trip residual above 1e-9 at s = " + std::to_string(s));
  }
  r.tables["harmonics_check"] = std::move(t);
  return r;
}

RunResult run_frame_build(const ExperimentConfig& cfg) {
  RunResult r;
  const NeedletFrame frame = build_frame(cfg.a, cfg.b, cfg.spin, cfg.L);
  r.frame = frame.to_json();
  io::Table t{{"j", "cells", "l_lo", "l_hi", "min_area", "diameter_bound"}, {}};
  for (int j : frame.j_range()) {
    const auto& p = frame.partition(j);
    const auto& sh = frame.shells(j);
    t.add({double(j), double(p.size()), double(sh.l_lo), double(sh.l_hi), p.min_area(), p.max_diameter()});
  }
  r.tables["frame_scales"] = std::move(t);
  r.summary["total_cells"] = frame.total_cells();
  r.summary["c0"] = frame.c0();
  r.summary["delta0"] = frame.delta0();
  return r;
}

RunResult run_frame_check(const ExperimentConfig& cfg) {
  RunResult r;
  std::vector<double> bs;
  std::optional<NeedletFrame> first;
  if (!cfg.frame_file.empty()) {
    first.emplace(NeedletFrame::from_json(io::read_json(cfg.frame_file)));
  } else {
    first.emplace(build_frame(cfg.a, cfg.b, cfg.spin, cfg.L));
  }
  io::Table trials{{"trial", "ratio"}, {}};
  io::Table gaps{{"b", "A_est", "B_est", "gap", "gap_over_b", "C0_est"}, {}};
  std::vector<double> gap_list, ratio_list;
  for (int h = 0; h <= cfg.b_halvings; ++h) {
    const double b = first->b() / std::pow(2.0, h);
    const NeedletFrame frame = h == 0 ? *first : build_frame(first->a(), b, first->spin(), first->L());
    const FrameBoundEstimate e = estimate_for(frame, cfg);
    if (h == 0) {
      for (std::size_t i = 0; i < e.trial_ratios.size(); ++i) trials.add({double(i), e.trial_ratios[i]});
      r.frame = frame.to_json();
      (*r.frame)["C0_est"] = e.C0_est;
    }
    const double gap = e.B_est - e.A_est;
    gaps.add({b, e.A_est, e.B_est, gap, gap / b, e.C0_est});
    gap_list.push_back(gap);
    ratio_list.push_back(gap / b);
    if (!(e.A_est <= 1.0 + 1e-12 && e.B_est >= 1.0 - 1e-12)) {
      r.violations.push_back("estimates do not bracket 1 at b = " + io::format_number(b));
    }
    if (!(gap > 0.0)) r.violations.push_back("non-positive gap at b = " + io::format_number(b));
  }
  for (std::size_t i = 1; i < gap_list.size(); ++i) {
    if (!(gap_list[i] < gap_list[i - 1])) r.violations.push_back("gap not decreasing as b halves");
  }
  if (ratio_list.size() > 1) {
    const double sp = spread(ratio_list);
    r.summary["gap_over_b_spread"] = sp;
    if (!(sp < 2.0)) {
      r.violations.push_back("gap/b varies by a factor " + io::format_number(sp) + " (limit 2)");
    }
  }
  r.tables["frame_check"] = std::move(trials);
  r.tables["frame_gap"] = std::move(gaps);
  return r;
}

RunResult run_simulate(const ExperimentConfig& cfg) {
  RunResult r;
  const PowerSpectrum spec = model_spectrum(cfg);
  note_warning(r, spec);
  r.ensemble.resize(cfg.n_reps);
  parallel_for(cfg.n_reps, [&](std::size_t i) {
    r.ensemble[i] = sample_field(spec, SampleKey{cfg.seed, i, 0});
  });
  const PowerSpectrum est = empirical_spectrum(r.ensemble);
  io::Table t{{"l", "C_l", "C_hat", "ratio"}, {}};
  for (int l = std::abs(spec.s); l <= spec.L; ++l) {
    const double C = spec.C[l], Ch = est.C[l];
    t.add({double(l), C, Ch, C > 0.0 ? Ch / C : std::numeric_limits<double>::quiet_NaN()});
  }
  r.tables["empirical_spectrum"] = std::move(t);
  r.spectrum = spec;
  r.summary["variance"] = spec.variance();
  return r;
}

RunResult run_localization(const ExperimentConfig& cfg) {
  RunResult r;
  const FilterSpec filter(cfg.a);
  const auto js = scales_or_default(cfg);
  io::Table samples{{"j", "t", "d", "d_over_t", "amplitude", "envelope"}, {}};
  io::Table summary{{"j", "t", "band_limit", "center_amplitude", "amplitude_t2", "decay_exponent", "fit_points"}, {}};
  std::vector<double> amp_t2;
  for (int j : js) {
    const double t = std::pow(cfg.a, j);
    const auto res = localization_probe(filter, t, cfg.spin, cfg.n_samples, cfg.dmax, cfg.fit_lo, cfg.fit_hi);
    for (std::size_t i = 0; i < res.distance.size(); ++i) {
      samples.add({double(j), t, res.distance[i], res.distance[i] / t, res.amplitude[i], res.envelope[i]});
    }
    amp_t2.push_back(res.center_amplitude * t * t);
    summary.add({double(j), t, double(needlet_band_limit(filter, t, cfg.spin)), res.center_amplitude,
                 amp_t2.back(), res.decay_exponent, double(res.fit_points)});
  }
  if (!amp_t2.empty()) r.summary["amplitude_t2_spread"] = spread(amp_t2);
  r.tables["localization"] = std::move(samples);
  r.tables["localization_summary"] = std::move(summary);
  return r;
}

RunResult run_uncorrelation(const ExperimentConfig& cfg) {
  RunResult r;
  const FilterSpec filter(cfg.a);
  const PowerSpectrum spec = model_spectrum(cfg);
  note_warning(r, spec);
  std::vector<PointPair> pairs;
  for (const auto& p : cfg.pairs) {
    pairs.push_back({SpherePoint::from_angles(p[0], p[1]), SpherePoint::from_angles(p[2], p[3]), Rotation(), Rotation()});
  }
  const auto rows = uncorrelation_experiment(spec, filter, scales_or_default(cfg), pairs, cfg.n_reps, cfg.seed);
  io::Table t{{"j", "pair_id", "d_over_t", "corr", "se"}, {}};
  io::Table m{{"j", "pair_id", "model_corr"}, {}};
  for (const auto& row : rows) {
    t.add({double(row.j), double(row.pair_id), row.d_over_t, row.corr, row.se});
    m.add({double(row.j), double(row.pair_id), row.model_corr});
  }
  r.tables["uncorrelation"] = std::move(t);
  r.tables["uncorrelation_model"] = std::move(m);
  return r;
}

RunResult run_clt(const ExperimentConfig& cfg) {
  RunResult r;
  const FilterSpec filter(cfg.a);
  const PowerSpectrum spec = model_spectrum(cfg);
  const auto res = clt_experiment(spec, filter, scales_or_default(cfg), cfg.n_reps, cfg.seed);
  io::Table ks{{"j", "KS", "n_reps"}, {}};
  io::Table z{{"j", "rep", "standardized"}, {}};
  for (const auto& sc : res) {
    ks.add({double(sc.j), sc.ks, double(cfg.n_reps)});
    for (std::size_t i = 0; i < sc.standardized.size(); ++i) z.add({double(sc.j), double(i), sc.standardized[i]});
  }
  r.tables["clt"] = std::move(ks);
  r.tables["clt_samples"] = std::move(z);
  return r;
}

RunResult run_sj_test(const ExperimentConfig& cfg) {
  RunResult r;
  const FilterSpec filter(cfg.a);
  const PowerSpectrum truth = model_spectrum(cfg);
  note_warning(r, truth);
  PowerSpectrum model = truth;
  for (double& v : model.C) v *= cfg.model_scale;
  const auto js = scales_or_default(cfg);
  const SpinCoefficients field = sample_field(truth, SampleKey{cfg.seed, 0, 0});
  std::optional<NeedletFrame> frame;
  if (cfg.with_frame) frame.emplace(build_frame(cfg.a, cfg.b, cfg.spin, cfg.L));
  io::Table st{{"j", "gamma_hat", "gamma_tilde", "gamma_j", "mean", "var", "S_j"}, {}};
  io::Table rej{{"j", "n_reps", "rejections", "rate"}, {}};
  for (int j : js) {
    const Moments mom = gamma_hat_moments(model, filter, j);
    const double gh = gamma_hat(field, filter, j);
    const double gt = frame && frame->has_scale(j) ? frame_energy(field, *frame, j)
                                                   : std::numeric_limits<double>::quiet_NaN();
    const TestResult tr = s_statistic(gh, mom, cfg.significance);
    st.add({double(j), gh, gt, gamma_j(truth, cfg.a, j), mom.mean, mom.variance, tr.S});
    const RejectionRate rr = sj_rejection_rate(truth, model, filter, j, cfg.n_reps, cfg.seed, cfg.significance);
    rej.add({double(j), double(rr.n_reps), double(rr.rejections), rr.rate});
  }
  r.tables["statistics"] = std::move(st);
  r.tables["rejection"] = std::move(rej);
  return r;
}

RunResult run_experiment(const std::string& sub, const ExperimentConfig& cfg) {
  cfg.validate();
  if (sub == "harmonics-check") return run_harmonics_check(cfg);
  if (sub == "frame-build") return run_frame_build(cfg);
  if (sub == "frame-check") return run_frame_check(cfg);
  if (sub == "simulate") return run_simulate(cfg);
  if (sub == "localization") return run_localization(cfg);
  if (sub == "uncorrelation") return run_uncorrelation(cfg);
  if (sub == "clt") return run_clt(cfg);
  if (sub == "sj-test") return run_sj_test(cfg);
  throw Error(ErrorKind::ConfigError, "unknown subcommand '" + sub + "'");
}

json write_artifacts(const std::string& sub, const ExperimentConfig& cfg, const RunResult& result) {
  const io::fs::path out = cfg.out;
  json files = json::array();
  for (const auto& [name, table] : result.tables) {
    io::write_table(out / (name + ".csv"), table);
    files.push_back(name + ".csv");
  }
  if (result.frame) {
    io::write_json(out / "frame.json", *result.frame);
    files.push_back("frame.json");
  }
  if (result.spectrum) {
    io::write_spectrum(out / "spectrum.csv", *result.spectrum);
    files.push_back("spectrum.csv");
  }
  if (!result.ensemble.empty()) {
    io::write_ensemble(out / "ensemble", result.ensemble, {{"seed", cfg.seed}, {"spectrum", "spectrum.csv"}});
    files.push_back("ensemble/manifest.json");
  }
  json manifest = {{"subcommand", sub},
                   {"config", cfg.to_json()},
                   {"files", files},
                   {"summary", result.summary},
                   {"violations", result.violations},
                   {"kernels", simd::active().name}};
  io::write_json(out / ("manifest_" + sub + ".json"), manifest);
  return manifest;
}

}  // namespace spinwave
