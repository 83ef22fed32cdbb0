#include "spinwave/coefficients.hpp"

#include <algorithm>

namespace spinwave {

SpinCoefficients::SpinCoefficients(int s, int L) : s_(s), L_(L) {
  if (L < std::abs(s)) throw Error(ErrorKind::UndefinedHarmonic, "band limit below |s|");
  data_.assign(static_cast<std::size_t>((L + 1) * (L + 1) - s * s), cplx{});
}

double SpinCoefficients::norm2() const {
  double acc = 0.0;
  for (const auto& c : data_) acc += std::norm(c);
  return acc;
}

double SpinCoefficients::shell_norm2(int l) const {
  if (l < lmin() || l > L_) return 0.0;
  double acc = 0.0;
  for (int m = -l; m <= l; ++m) acc += std::norm((*this)(l, m));
  return acc;
}

SpinCoefficients SpinCoefficients::resized(int L) const {
  SpinCoefficients out(s_, L);
  const int top = std::min(L, L_);
  for (int l = lmin(); l <= top; ++l)
    for (int m = -l; m <= l; ++m) out(l, m) = (*this)(l, m);
  return out;
}

void SpinCoefficients::check_compatible(const SpinCoefficients& o) const {
  if (o.s_ != s_ || o.L_ != L_) {
    throw Error(ErrorKind::InvalidArgument, "coefficient sets differ in spin or band limit");
  }
}

SpinCoefficients& SpinCoefficients::operator+=(const SpinCoefficients& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

SpinCoefficients& SpinCoefficients::operator-=(const SpinCoefficients& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

SpinCoefficients& SpinCoefficients::operator*=(cplx c) {
  for (auto& v : data_) v *= c;
  return *this;
}

cplx inner(const SpinCoefficients& a, const SpinCoefficients& b) {
  if (a.spin() != b.spin()) throw Error(ErrorKind::InvalidArgument, "inner product across spins");
  const int top = std::min(a.L(), b.L());
  cplx acc{};
  for (int l = a.lmin(); l <= top; ++l)
    for (int m = -l; m <= l; ++m) acc += a(l, m) * std::conj(b(l, m));
  return acc;
}

}  // namespace spinwave
