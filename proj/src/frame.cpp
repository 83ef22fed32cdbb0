#include "spinwave/frame.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "spinwave/errors.hpp"
#include "spinwave/parallel.hpp"
#include "spinwave/rng.hpp"
#include "spinwave/simd/kernels.hpp"
#include "spinwave/transform.hpp"
#include "spinwave/wigner.hpp"

namespace spinwave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kBandChunk = 8;

int mod_pos(long a, long n) {
  const long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

// f_j(l) a_lm arranged m-major over the scale's active shells.
struct ScaleColumns {
  int M = -1;
  std::vector<int> l0;                    // first l of column m (= max(|m|,|s|))
  std::vector<std::vector<cplx>> col;     // col[m + M][l - l0]
};

ScaleColumns scale_columns(const SpinCoefficients& F, const ScaleShells& sh,
                           const SpinProfiles& prof) {
  ScaleColumns c;
  c.M = sh.l_hi;
  if (sh.l_hi < sh.l_lo) return c;
  c.l0.resize(2 * c.M + 1);
  c.col.resize(2 * c.M + 1);
  for (int m = -c.M; m <= c.M; ++m) {
    const int l0 = prof.lmin(m);
    c.l0[m + c.M] = l0;
    if (l0 > sh.l_hi) continue;
    auto& v = c.col[m + c.M];
    v.assign(sh.l_hi - l0 + 1, cplx{});
    for (int l = std::max(l0, sh.l_lo); l <= sh.l_hi; ++l) v[l - l0] = sh.at(l) * F.get(l, m);
  }
  return c;
}

// Profiles and G_m = Σ_l f_j(l) a_lm y_lm(θ) at one band.
struct BandState {
  std::vector<double> y;  // (2M+1) × (M+1)
  std::vector<cplx> G;    // 2M+1
};

void band_contract(const ScaleColumns& c, const SpinProfiles& prof, double theta, BandState& st) {
  const int M = c.M;
  const auto& K = simd::active();
  const std::size_t stride = M + 1;
  st.y.resize((2 * M + 1) * stride);
  st.G.assign(2 * M + 1, cplx{});
  for (int m = -M; m <= M; ++m) {
    const auto& col = c.col[m + M];
    if (col.empty()) continue;
    double* y = &st.y[(m + M) * stride];
    prof.eval(m, theta, y, M);
    st.G[m + M] = K.cdot_real(y, col.data(), col.size());
  }
}

// H_r = Σ_{m ≡ r (mod n)} G_m e^{imφ0}.
std::vector<cplx> alias_bins(const std::vector<cplx>& G, int M, int n, double phi0) {
  const bool aliased = static_cast<long>(n) <= 2L * M;
  std::vector<cplx> H(aliased ? n : 2 * M + 1, cplx{});
  if (aliased) {
    for (int m = -M; m <= M; ++m) H[mod_pos(m, n)] += G[m + M] * std::polar(1.0, m * phi0);
  } else {
    for (int m = -M; m <= M; ++m) H[m + M] = G[m + M] * std::polar(1.0, m * phi0);
  }
  return H;
}

}  // namespace

std::pair<int, int> scale_range(double a, int s, int L) {
  if (L < std::abs(s) + 1) throw Error(ErrorKind::InvalidArgument, "frame needs L >= |s|+1");
  const double la2 = 2.0 * std::log(a);
  const double lam1 = lambda_ls(s, std::abs(s) + 1), lamL = lambda_ls(s, L);
  const int jmin = static_cast<int>(std::ceil(-1.0 - std::log(lamL) / la2));
  const int jmax = static_cast<int>(std::floor(1.0 - std::log(lam1) / la2));
  return {jmin, jmax};
}

ScaleShells scale_shells(const FilterSpec& filter, int s, int L, int j) {
  ScaleShells sh;
  sh.j = j;
  sh.l_lo = L + 1;
  sh.l_hi = -1;
  std::vector<double> all(L + 1, 0.0);
  for (int l = std::abs(s) + 1; l <= L; ++l) {
    all[l] = filter.at_scale(j, lambda_ls(s, l));
    if (all[l] > 0.0) {
      sh.l_lo = std::min(sh.l_lo, l);
      sh.l_hi = std::max(sh.l_hi, l);
    }
  }
  if (sh.l_hi >= sh.l_lo) sh.f.assign(all.begin() + sh.l_lo, all.begin() + sh.l_hi + 1);
  return sh;
}

NeedletFrame::NeedletFrame(const FilterSpec& filter, int s, int L, double b)
    : filter_(filter), s_(s), L_(L), b_(b), profiles_(s, L) {
  if (!(b > 0.0 && b < 1.0)) throw Error(ErrorKind::InvalidArgument, "b must lie in (0, 1)");
  std::tie(j_min_, j_max_) = scale_range(filter.a(), s, L);
  for (int j = j_min_; j <= j_max_; ++j) {
    partitions_.emplace_back(j, filter.a(), b);
    shells_.push_back(scale_shells(filter, s, L, j));
  }
  const auto& pc = partition_constants();
  c0_ = pc.c0;
  delta0_ = pc.delta0;
}

std::vector<int> NeedletFrame::j_range() const {
  std::vector<int> js;
  for (int j = j_min_; j <= j_max_; ++j) js.push_back(j);
  return js;
}

const Partition& NeedletFrame::partition(int j) const {
  if (!has_scale(j)) throw Error(ErrorKind::ScaleMissing, "scale outside the frame range");
  return partitions_[j - j_min_];
}

const ScaleShells& NeedletFrame::shells(int j) const {
  if (!has_scale(j)) throw Error(ErrorKind::ScaleMissing, "scale outside the frame range");
  return shells_[j - j_min_];
}

std::size_t NeedletFrame::total_cells() const {
  std::size_t n = 0;
  for (const auto& p : partitions_) n += p.size();
  return n;
}

nlohmann::json NeedletFrame::to_json() const {
  nlohmann::json scales = nlohmann::json::array();
  for (const auto& p : partitions_) {
    double dmax = 0.0;
    for (const auto& band : p.bands()) dmax = std::max(dmax, band.cell_diam);
    const auto& sh = shells(p.j());
    scales.push_back({{"j", p.j()},
                      {"diameter_bound", p.max_diameter()},
                      {"bands", p.bands().size()},
                      {"cells", p.size()},
                      {"min_area", p.min_area()},
                      {"max_diam", dmax},
                      {"l_lo", sh.l_lo},
                      {"l_hi", sh.l_hi}});
  }
  nlohmann::json out = {{"a", a()},     {"b", b_},           {"spin", s_},
                        {"lmax", L_},   {"j_min", j_min_},   {"j_max", j_max_},
                        {"c0", c0_},    {"delta0", delta0_}, {"scales", scales}};
  if (C0_est_) out["C0_est"] = *C0_est_;
  return out;
}

NeedletFrame NeedletFrame::from_json(const nlohmann::json& j) {
  try {
    NeedletFrame f(FilterSpec(j.at("a").get<double>()), j.at("spin").get<int>(),
                   j.at("lmax").get<int>(), j.at("b").get<double>());
    if (j.contains("scales")) {
      for (const auto& sc : j.at("scales")) {
        const int jj = sc.at("j").get<int>();
        if (!f.has_scale(jj) || f.partition(jj).size() != sc.at("cells").get<std::size_t>()) {
          throw Error(ErrorKind::ConfigError, "frame file does not match its parameters");
        }
      }
    }
    if (j.contains("C0_est")) f.set_C0_estimate(j.at("C0_est").get<double>());
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed frame file: ") + e.what());
  }
}

NeedletFrame build_frame(double a, double b, int s, int L) {
  return NeedletFrame(build_filter(a), s, L, b);
}

const std::vector<cplx>& WaveletCoefficients::at(int j) const {
  auto it = beta.find(j);
  if (it == beta.end()) throw Error(ErrorKind::ScaleMissing, "no wavelet coefficients at this scale");
  return it->second;
}

WaveletCoefficients wavelet_coefficients(const SpinCoefficients& F, const NeedletFrame& frame,
                                         const std::vector<int>& js_in,
                                         const Rotation* polar_chart_override) {
  if (F.spin() != frame.spin()) throw Error(ErrorKind::InvalidArgument, "spin mismatch");
  const SpinCoefficients Fr = F.resized(frame.L());
  const auto js = js_in.empty() ? frame.j_range() : js_in;
  const Rotation polar = polar_chart_override ? *polar_chart_override : polar_chart();
  const Rotation I;
  const int s = frame.spin();
  WaveletCoefficients out;
  out.s = s;
  for (int j : js) {
    const Partition& part = frame.partition(j);
    const ScaleColumns cols = scale_columns(Fr, frame.shells(j), frame.profiles());
    std::vector<cplx> beta(part.size(), cplx{});
    if (cols.M >= 0) {
      const auto& bands = part.bands();
      parallel_for(bands.size(), [&](std::size_t bi) {
        const Band& band = bands[bi];
        BandState st;
        band_contract(cols, frame.profiles(), band.theta_center, st);
        const double root_mu = std::sqrt(band.cell_area);
        for (int k = 0; k < band.n; ++k) {
          const double phi = band.phi_center(k);
          cplx acc{};
          const cplx step = std::polar(1.0, phi);
          cplx e = std::polar(1.0, -cols.M * phi);
          for (int m = -cols.M; m <= cols.M; ++m) {
            acc += st.G[m + cols.M] * e;
            e *= step;
          }
          acc *= root_mu;
          if (band.polar && s != 0) {
            const SpherePoint x = SpherePoint::from_angles(band.theta_center, phi);
            acc *= std::polar(1.0, s * reference_angle(x, I, polar));
          }
          beta[band.first_cell + k] = acc;
        }
      });
    }
    out.beta[j] = std::move(beta);
  }
  return out;
}

double frame_energy(const SpinCoefficients& F, const NeedletFrame& frame, int j) {
  if (F.spin() != frame.spin()) throw Error(ErrorKind::InvalidArgument, "spin mismatch");
  const Partition& part = frame.partition(j);
  const ScaleColumns cols = scale_columns(F.resized(frame.L()), frame.shells(j), frame.profiles());
  if (cols.M < 0) return 0.0;
  const auto& bands = part.bands();
  const std::size_t nchunks = (bands.size() + kBandChunk - 1) / kBandChunk;
  return parallel_reduce<double>(
      nchunks, 0.0,
      [&](std::size_t c) {
        BandState st;
        double acc = 0.0;
        for (std::size_t bi = c * kBandChunk; bi < std::min(bands.size(), (c + 1) * kBandChunk); ++bi) {
          const Band& band = bands[bi];
          band_contract(cols, frame.profiles(), band.theta_center, st);
          const auto H = alias_bins(st.G, cols.M, band.n, band.phi_center(0));
          double e = 0.0;
          for (const auto& h : H) e += std::norm(h);
          acc += band.cell_area * band.n * e;
        }
        return acc;
      },
      [](double a, double b) { return a + b; });
}

SpinCoefficients apply_S(const SpinCoefficients& F_in, const NeedletFrame& frame,
                         const std::vector<int>& js_in) {
  if (F_in.spin() != frame.spin()) throw Error(ErrorKind::InvalidArgument, "spin mismatch");
  const SpinCoefficients F = F_in.resized(frame.L());
  SpinCoefficients out(F.spin(), F.L());
  const auto js = js_in.empty() ? frame.j_range() : js_in;
  const auto& K = simd::active();
  for (int j : js) {
    const Partition& part = frame.partition(j);
    const ScaleShells& sh = frame.shells(j);
    const ScaleColumns cols = scale_columns(F, sh, frame.profiles());
    if (cols.M < 0) continue;
    const int M = cols.M;
    const auto& bands = part.bands();
    const std::size_t nchunks = (bands.size() + kBandChunk - 1) / kBandChunk;
    using Acc = std::vector<std::vector<cplx>>;
    auto zero_acc = [&] {
      Acc a(2 * M + 1);
      for (int m = -M; m <= M; ++m) a[m + M].assign(cols.col[m + M].size(), cplx{});
      return a;
    };
    Acc acc = parallel_reduce<Acc>(
        nchunks, Acc{},
        [&](std::size_t c) {
          Acc local = zero_acc();
          BandState st;
          for (std::size_t bi = c * kBandChunk; bi < std::min(bands.size(), (c + 1) * kBandChunk); ++bi) {
            const Band& band = bands[bi];
            band_contract(cols, frame.profiles(), band.theta_center, st);
            const double phi0 = band.phi_center(0);
            const auto H = alias_bins(st.G, M, band.n, phi0);
            const bool aliased = static_cast<long>(band.n) <= 2L * M;
            const double scale = band.cell_area * band.n;
            for (int m = -M; m <= M; ++m) {
              auto& dst = local[m + M];
              if (dst.empty()) continue;
              const cplx h = aliased ? H[mod_pos(m, band.n)] : H[m + M];
              const cplx T = scale * std::polar(1.0, -m * phi0) * h;
              K.caxpy_real(T, &st.y[(m + M) * (M + 1)], dst.data(), dst.size());
            }
          }
          return local;
        },
        [](Acc a, const Acc& b) {
          if (a.empty()) return b;
          for (std::size_t m = 0; m < a.size(); ++m)
            for (std::size_t l = 0; l < a[m].size(); ++l) a[m][l] += b[m][l];
          return a;
        });
    for (int m = -M; m <= M; ++m) {
      const int l0 = cols.l0[m + M];
      for (int l = std::max(l0, sh.l_lo); l <= sh.l_hi; ++l) out(l, m) += sh.at(l) * acc[m + M][l - l0];
    }
  }
  return out;
}

SpinCoefficients apply_Q(const SpinCoefficients& F, const FilterSpec& filter,
                         const std::vector<int>& js) {
  SpinCoefficients out = F;
  for (int l = F.lmin(); l <= F.L(); ++l) {
    const double lam = lambda_ls(F.spin(), l);
    double mult = 0.0;
    for (int j : js) mult += filter.f2(std::pow(filter.a(), 2 * j) * lam);
    for (int m = -l; m <= l; ++m) out(l, m) *= mult;
  }
  return out;
}

SpinCoefficients needlet_coefficients(const FilterSpec& filter, int j, int s, int L,
                                      const SpherePoint& x, const Rotation& R) {
  SpinCoefficients Y = harmonics_in_chart(s, L, x, R);
  for (int l = Y.lmin(); l <= L; ++l) {
    const double f = filter.at_scale(j, lambda_ls(s, l));
    for (int m = -l; m <= l; ++m) Y(l, m) = f * std::conj(Y(l, m));
  }
  return Y;
}

int needlet_band_limit(const FilterSpec& filter, double t, int s) {
  const double top = filter.a() * filter.a();
  int l = std::abs(s);
  while (t * t * lambda_ls(s, l + 1) < top) ++l;
  return l;
}

cplx needlet_kernel(const FilterSpec& filter, double t, int s, const SpherePoint& x,
                    const SpherePoint& y, const Rotation& R1, const Rotation& R2, int L) {
  if (needlet_band_limit(filter, t, s) > L) {
    throw Error(ErrorKind::BandLimitExceeded, "filter support extends past the band limit");
  }
  const SpinCoefficients Yx = harmonics_in_chart(s, L, x, R1);
  const SpinCoefficients Yy = harmonics_in_chart(s, L, y, R2);
  cplx acc{};
  for (int l = Yx.lmin(); l <= L; ++l) {
    const double f = filter(t * t * lambda_ls(s, l));
    if (f == 0.0) continue;
    cplx shell{};
    for (int m = -l; m <= l; ++m) shell += Yx(l, m) * std::conj(Yy(l, m));
    acc += f * shell;
  }
  return acc;
}

namespace {

SpinCoefficients random_unit(int s, int L, std::uint64_t seed, std::uint64_t trial) {
  SpinCoefficients F(s, L);
  KeyedStream rng(key_hash({seed, 0x6672616dULL, trial}));
  for (int l = F.lmin() + 1; l <= L; ++l)
    for (int m = -l; m <= l; ++m) F(l, m) = cplx(rng.normal(), rng.normal());
  F *= 1.0 / std::sqrt(F.norm2());
  return F;
}

double rayleigh(const SpinCoefficients& F, const NeedletFrame& frame) {
  return inner(apply_S(F, frame), F).real() / F.norm2();
}

}  // namespace

FrameBoundEstimate frame_bound_estimate(const NeedletFrame& frame, int n_trials,
                                        std::uint64_t seed, int lanczos_steps) {
  if (n_trials < 1) throw Error(ErrorKind::InvalidArgument, "n_trials must be >= 1");
  const int s = frame.spin(), L = frame.L();
  const auto js = frame.j_range();
  FrameBoundEstimate est;
  std::vector<double> deviations;
  auto record = [&](const SpinCoefficients& F, double q) {
    const double qQ = inner(apply_Q(F, frame.filter(), js), F).real() / F.norm2();
    deviations.push_back(std::abs(qQ - q));
  };
  for (int t = 0; t < n_trials; ++t) {
    const SpinCoefficients F = random_unit(s, L, seed, t);
    const double q = rayleigh(F, frame);
    est.trial_ratios.push_back(q);
    record(F, q);
  }
  double A = *std::min_element(est.trial_ratios.begin(), est.trial_ratios.end());
  double B = *std::max_element(est.trial_ratios.begin(), est.trial_ratios.end());

  // Lanczos with full reorthogonalization on S restricted to (I − P).
  const std::size_t dim = static_cast<std::size_t>((L + 1) * (L + 1) - (std::abs(s) + 1) * (std::abs(s) + 1));
  const int k_max = static_cast<int>(std::min<std::size_t>(lanczos_steps, dim));
  if (k_max >= 2) {
    std::vector<SpinCoefficients> V;
    std::vector<double> alpha, beta;
    V.push_back(random_unit(s, L, seed, 0xffffffffULL));
    for (int k = 0; k < k_max; ++k) {
      SpinCoefficients w = apply_S(V[k], frame);
      const double a = inner(w, V[k]).real();
      alpha.push_back(a);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : V) {
          const cplx c = inner(w, v);
          SpinCoefficients tmp = v;
          tmp *= c;
          w -= tmp;
        }
      }
      const double bnorm = std::sqrt(w.norm2());
      if (k + 1 == k_max || bnorm < 1e-12) break;
      beta.push_back(bnorm);
      w *= 1.0 / bnorm;
      V.push_back(std::move(w));
    }
    const int k = static_cast<int>(alpha.size());
    Eigen::VectorXd diag(k), sub(std::max(k - 1, 0));
    for (int i = 0; i < k; ++i) diag(i) = alpha[i];
    for (int i = 0; i + 1 < k; ++i) sub(i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    for (int which : {0, k - 1}) {
      SpinCoefficients ritz(s, L);
      for (int i = 0; i < k; ++i) {
        SpinCoefficients tmp = V[i];
        tmp *= eig.eigenvectors()(i, which);
        ritz += tmp;
      }
      const double q = rayleigh(ritz, frame);
      record(ritz, q);
      A = std::min(A, q);
      B = std::max(B, q);
    }
    est.lanczos_steps = k;
  }
  est.A_est = A;
  est.B_est = B;
  est.C0_est = *std::max_element(deviations.begin(), deviations.end()) / frame.b();
  return est;
}

namespace {

// Weights f(t²λ_ls)(2l+1)/4π for l ≤ L.
std::vector<double> profile_weights(const FilterSpec& filter, double t, int s, int L) {
  std::vector<double> w(L + 1, 0.0);
  for (int l = std::abs(s); l <= L; ++l) {
    w[l] = filter(t * t * lambda_ls(s, l)) * (2.0 * l + 1.0) / (4.0 * std::numbers::pi);
  }
  return w;
}

double profile_at(const std::vector<double>& w, int s, double d, std::vector<double>& col) {
  const int L = static_cast<int>(w.size()) - 1;
  if (L < std::abs(s)) return 0.0;
  col.resize(L + 1 - std::abs(s));
  wigner_d_column(s, s, d, L, col.data(), w.data());
  return tree_sum(col);
}

}  // namespace

double needlet_kernel_profile(const FilterSpec& filter, double t, int s, double d) {
  const auto w = profile_weights(filter, t, s, needlet_band_limit(filter, t, s));
  std::vector<double> col;
  return profile_at(w, s, d, col);
}

LocalizationResult localization_probe(const FilterSpec& filter, double t, int s, int n_samples,
                                      double dmax, double fit_lo, double fit_hi) {
  LocalizationResult res;
  res.t = t;
  res.fit_lo = fit_lo;
  res.fit_hi = fit_hi;
  const auto w = profile_weights(filter, t, s, needlet_band_limit(filter, t, s));
  std::vector<double> col;
  res.center_amplitude = std::abs(profile_at(w, s, 0.0, col));
  res.distance.resize(n_samples);
  res.amplitude.resize(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    std::vector<double> c;
    const double d = dmax * (i + 1) / n_samples;
    res.distance[i] = d;
    res.amplitude[i] = std::abs(profile_at(w, s, d, c));
  });
  res.envelope.assign(n_samples, 0.0);
  double run = 0.0;
  for (int i = n_samples - 1; i >= 0; --i) {
    run = std::max(run, res.amplitude[i]);
    res.envelope[i] = run;
  }
  // Least-squares slope of log envelope against log(d/t) on the far window,
  // above the round-off floor.
  const double floor = 1e-13 * res.center_amplitude;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int i = 0; i < n_samples; ++i) {
    const double r = res.distance[i] / t;
    if (r < fit_lo || r > fit_hi || res.envelope[i] <= floor) continue;
    const double lx = std::log(r), ly = std::log(res.envelope[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  res.fit_points = n;
  if (n >= 2) res.decay_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return res;
}

}  // namespace spinwave
