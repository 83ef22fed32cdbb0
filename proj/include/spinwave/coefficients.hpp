#pragma once

#include <complex>
#include <cstdlib>
#include <vector>

#include "spinwave/errors.hpp"

namespace spinwave {

using cplx = std::complex<double>;

/// Complex a_lm of a spin-s field for |s| ≤ l ≤ L, |m| ≤ l. Shells l < |s| do not exist.
class SpinCoefficients {
 public:
  SpinCoefficients() = default;
  /// Throws UndefinedHarmonic if L < |s|.
  SpinCoefficients(int s, int L);

  int spin() const { return s_; }
  int L() const { return L_; }
  int lmin() const { return std::abs(s_); }
  std::size_t size() const { return data_.size(); }

  std::size_t index(int l, int m) const {
    return static_cast<std::size_t>(l * l - s_ * s_ + l + m);
  }
  bool has(int l, int m) const { return l >= lmin() && l <= L_ && std::abs(m) <= l; }
  cplx& operator()(int l, int m) { return data_[index(l, m)]; }
  const cplx& operator()(int l, int m) const { return data_[index(l, m)]; }
  /// Checked access; zero for absent (l, m).
  cplx get(int l, int m) const { return has(l, m) ? data_[index(l, m)] : cplx{}; }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  double norm2() const;
  double shell_norm2(int l) const;
  /// Same spin, new band limit; truncates or zero-pads.
  SpinCoefficients resized(int L) const;

  SpinCoefficients& operator+=(const SpinCoefficients& o);
  SpinCoefficients& operator-=(const SpinCoefficients& o);
  SpinCoefficients& operator*=(cplx c);
  friend SpinCoefficients operator+(SpinCoefficients a, const SpinCoefficients& b) { return a += b; }
  friend SpinCoefficients operator-(SpinCoefficients a, const SpinCoefficients& b) { return a -= b; }
  friend SpinCoefficients operator*(cplx c, SpinCoefficients a) { return a *= c; }

 private:
  void check_compatible(const SpinCoefficients& o) const;

  int s_ = 0;
  int L_ = 0;
  std::vector<cplx> data_;
};

/// Σ a_lm conj(b_lm).
cplx inner(const SpinCoefficients& a, const SpinCoefficients& b);

}  // namespace spinwave
