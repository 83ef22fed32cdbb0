#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "spinwave/errors.hpp"
#include "spinwave/experiments.hpp"
#include "spinwave/io.hpp"
#include "test_support.hpp"

using namespace spinwave;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("spinwave_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("number formatting and tables") {
  CHECK(io::format_number(3.0) == "3");
  CHECK(io::format_number(-12.0) == "-12");
  CHECK(std::stod(io::format_number(0.1)) == 0.1);
  CHECK(std::stod(io::format_number(1.0 / 3.0)) == 1.0 / 3.0);

  const fs::path dir = scratch("table");
  io::Table t;
  t.columns = {"j", "value"};
  t.add({-3, 0.1234567890123456789});
  t.add({4, 1e-300});
  CHECK_THROWS(t.add({1.0}));
  io::write_table(dir / "t.csv", t);
  CHECK(slurp(dir / "t.csv").rfind("j,value\n-3,", 0) == 0);
  const io::Table back = io::read_table(dir / "t.csv");
  CHECK(back.columns == t.columns);
  CHECK(back.rows == t.rows);
  CHECK(kind_of([&] { io::read_table(dir / "missing.csv"); }) == ErrorKind::IoError);
}

TEST_CASE("JSON, coefficient, spectrum and ensemble files") {
  const fs::path dir = scratch("files");
  io::write_json(dir / "x.json", {{"a", 1}, {"b", {1, 2}}});
  CHECK(io::read_json(dir / "x.json")["b"][1] == 2);
  std::ofstream(dir / "bad.json") << "{\"a\": ";
  CHECK(kind_of([&] { io::read_json(dir / "bad.json"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([&] { io::read_json(dir / "nope.json"); }) == ErrorKind::IoError);

  const SpinCoefficients a = testing::random_coefficients(-2, 9, 3);
  io::write_coefficients(dir / "a.csv", a);
  const SpinCoefficients ab = io::read_coefficients(dir / "a.csv");
  CHECK(ab.spin() == -2);
  CHECK(ab.L() == 9);
  CHECK(ab.data() == a.data());

  const PowerSpectrum p = power_law_spectrum(2, 12, 3.0, 1.5);
  io::write_spectrum(dir / "p.csv", p);
  const PowerSpectrum pb = io::read_spectrum(dir / "p.csv");
  CHECK(pb.C == p.C);
  CHECK(pb.model == p.model);
  CHECK(pb.params == p.params);

  std::vector<SpinCoefficients> ens{a, testing::random_coefficients(-2, 9, 4)};
  io::write_ensemble(dir / "ens", ens, {{"seed", 5}});
  CHECK(fs::exists(dir / "ens" / "sample_00000.csv"));
  CHECK(io::read_json(dir / "ens" / "manifest.json")["files"].size() == 2);
  const auto eb = io::read_ensemble(dir / "ens");
  REQUIRE(eb.size() == 2);
  CHECK(eb[1].data() == ens[1].data());

  const QuadratureGrid grid = build_quadrature(4);
  io::write_grid(dir / "g.csv", synthesis(testing::random_coefficients(0, 4, 1), grid));
  CHECK(io::read_table(dir / "g.csv").rows.size() == grid.size());
}

TEST_CASE("experiment configuration") {
  const ExperimentConfig d;
  CHECK(d.spin == 2);
  CHECK(d.a == doctest::Approx(std::cbrt(2.0)));

  const ExperimentConfig c = ExperimentConfig::from_json(
      {{"spin", -1}, {"L", 20}, {"seed", 99}, {"j_list", {-5, -6}}, {"pairs", {{1.0, 0.0, 1.5, 0.0}}}});
  CHECK(c.spin == -1);
  CHECK(c.L == 20);
  CHECK(c.seed == 99);
  CHECK(c.j_list == std::vector<int>{-5, -6});
  const ExperimentConfig again = ExperimentConfig::from_json(c.to_json());
  CHECK(again.to_json() == c.to_json());

  CHECK(kind_of([] { ExperimentConfig::from_json({{"bogus", 1}}); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { ExperimentConfig::from_json({{"L", "big"}}); }) == ErrorKind::ConfigError);
  CHECK(kind_of([] { ExperimentConfig::from_json(nlohmann::json::array()); }) == ErrorKind::ConfigError);

  ExperimentConfig bad;
  bad.L = 1;  // below |s|
  CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::ConfigError);
  bad = ExperimentConfig{};
  bad.b = 1.5;
  CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::ConfigError);
  bad = ExperimentConfig{};
  bad.a = 1.0;
  CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::ConfigError);

  CHECK(kind_of([] { run_experiment("no-such-thing", ExperimentConfig{}); }) == ErrorKind::ConfigError);

  const auto js = default_scales(std::cbrt(2.0), 2, 64);
  REQUIRE(js.size() == 4);
  for (std::size_t i = 1; i < js.size(); ++i) CHECK(js[i] == js[i - 1] + 1);
  const FilterSpec f(std::cbrt(2.0));
  CHECK(needlet_band_limit(f, std::pow(f.a(), js[0]), 2) <= 64);
  CHECK(needlet_band_limit(f, std::pow(f.a(), js[0] - 1), 2) > 64);
}

TEST_CASE("experiment runners") {
  ExperimentConfig cfg;
  cfg.L = 16;
  cfg.n_reps = 60;
  cfg.trials = 2;
  cfg.lanczos_steps = 8;
  cfg.n_samples = 400;
  cfg.fit_lo = 20;
  cfg.fit_hi = 80;

  const RunResult h = run_experiment("harmonics-check", cfg);
  CHECK(h.violations.empty());
  CHECK(h.tables.count("harmonics_check") == 1);

  const RunResult fb = run_experiment("frame-build", cfg);
  REQUIRE(fb.frame.has_value());
  CHECK((*fb.frame)["b"] == cfg.b);

  const RunResult fc = run_experiment("frame-check", cfg);
  CHECK(fc.tables.at("frame_check").rows.size() == 2);
  CHECK(fc.tables.at("frame_gap").rows.size() == 1);

  ExperimentConfig sweep = cfg;
  sweep.b_halvings = 2;
  const RunResult gaps = run_experiment("frame-check", sweep);
  const io::Table& g = gaps.tables.at("frame_gap");
  REQUIRE(g.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(g.rows[i][3] > 0.0);
  CHECK(g.rows[1][3] < g.rows[0][3]);
  CHECK(g.rows[2][3] < g.rows[1][3]);

  const RunResult sim = run_experiment("simulate", cfg);
  CHECK(sim.ensemble.size() == static_cast<std::size_t>(cfg.n_reps));
  REQUIRE(sim.spectrum.has_value());

  const RunResult loc = run_experiment("localization", cfg);
  CHECK(loc.tables.count("localization_summary") == 1);

  const RunResult un = run_experiment("uncorrelation", cfg);
  CHECK(un.tables.at("uncorrelation").rows.size() == 4);

  const RunResult clt = run_experiment("clt", cfg);
  CHECK(clt.tables.at("clt").columns == std::vector<std::string>{"j", "KS", "n_reps"});

  const RunResult sj = run_experiment("sj-test", cfg);
  CHECK(sj.tables.at("statistics").columns ==
        std::vector<std::string>{"j", "gamma_hat", "gamma_tilde", "gamma_j", "mean", "var", "S_j"});
}

TEST_CASE("artifacts are deterministic") {
  ExperimentConfig cfg;
  cfg.L = 16;
  cfg.n_reps = 40;
  const fs::path d1 = scratch("run1"), d2 = scratch("run2");
  for (const std::string sub : {"simulate", "clt", "sj-test"}) {
    cfg.out = d1.string();
    const nlohmann::json m1 = write_artifacts(sub, cfg, run_experiment(sub, cfg));
    cfg.out = d2.string();
    write_artifacts(sub, cfg, run_experiment(sub, cfg));
    CHECK(fs::exists(d1 / ("manifest_" + sub + ".json")));
    for (const auto& f : m1["files"]) {
      const std::string name = f.get<std::string>();
      INFO(name);
      CHECK(fs::is_regular_file(d1 / name));
      CHECK(slurp(d1 / name) == slurp(d2 / name));
    }
  }
  CHECK(fs::exists(d1 / "spectrum.csv"));
  CHECK(fs::exists(d1 / "ensemble" / "manifest.json"));
}
