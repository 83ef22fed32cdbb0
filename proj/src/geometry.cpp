#include "spinwave/geometry.hpp"

#include <cmath>
#include <numbers>

#include "spinwave/errors.hpp"

namespace spinwave {

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3& a) { return std::hypot(a.x, a.y, a.z); }

Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  return a * (1.0 / n);
}

SpherePoint::SpherePoint(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 1e-300) || !std::isfinite(n)) {
    throw Error(ErrorKind::InvalidArgument, "sphere point from a zero or non-finite vector");
  }
  v_ = v * (1.0 / n);
}

SpherePoint SpherePoint::from_angles(double theta, double phi) {
  const double st = std::sin(theta);
  return SpherePoint(Vec3{st * std::cos(phi), st * std::sin(phi), std::cos(theta)});
}

double SpherePoint::theta() const { return std::atan2(std::hypot(v_.x, v_.y), v_.z); }

double SpherePoint::phi() const {
  double p = std::atan2(v_.y, v_.x);
  if (p >= std::numbers::pi) p -= 2.0 * std::numbers::pi;
  return p;
}

bool SpherePoint::is_pole(double tol) const { return std::hypot(v_.x, v_.y) <= tol; }

Rotation::Rotation() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

Rotation::Rotation(const std::array<double, 9>& m) : m_(m) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m_[3 * k + i] * m_[3 * k + j];
      if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-10) {
        throw Error(ErrorKind::InvalidArgument, "rotation matrix is not orthogonal");
      }
    }
  }
  const double det = m_[0] * (m_[4] * m_[8] - m_[5] * m_[7]) -
                     m_[1] * (m_[3] * m_[8] - m_[5] * m_[6]) +
                     m_[2] * (m_[3] * m_[7] - m_[4] * m_[6]);
  if (std::abs(det - 1.0) > 1e-10) {
    throw Error(ErrorKind::InvalidArgument, "rotation matrix has determinant != 1");
  }
}

Rotation Rotation::about_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Rotation r;
  r.m_ = {1, 0, 0, 0, c, -s, 0, s, c};
  return r;
}

Rotation Rotation::about_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Rotation r;
  r.m_ = {c, 0, s, 0, 1, 0, -s, 0, c};
  return r;
}

Rotation Rotation::about_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Rotation r;
  r.m_ = {c, -s, 0, s, c, 0, 0, 0, 1};
  return r;
}

Rotation Rotation::about_axis(const Vec3& axis, double a) {
  const Vec3 u = normalized(axis);
  const double c = std::cos(a), s = std::sin(a), t = 1.0 - c;
  Rotation r;
  r.m_ = {t * u.x * u.x + c,       t * u.x * u.y - s * u.z, t * u.x * u.z + s * u.y,
          t * u.x * u.y + s * u.z, t * u.y * u.y + c,       t * u.y * u.z - s * u.x,
          t * u.x * u.z - s * u.y, t * u.y * u.z + s * u.x, t * u.z * u.z + c};
  return r;
}

Rotation Rotation::from_zyz(double alpha, double beta, double gamma) {
  return about_z(alpha) * about_y(beta) * about_z(gamma);
}

Rotation Rotation::from_uniforms(double u1, double u2, double u3) {
  // Shoemake's uniform quaternion.
  const double r1 = std::sqrt(1.0 - u1), r2 = std::sqrt(u1);
  const double t1 = 2.0 * std::numbers::pi * u2, t2 = 2.0 * std::numbers::pi * u3;
  const double w = r2 * std::cos(t2), x = r1 * std::sin(t1), y = r1 * std::cos(t1),
               z = r2 * std::sin(t2);
  Rotation r;
  r.m_ = {1 - 2 * (y * y + z * z), 2 * (x * y - z * w),     2 * (x * z + y * w),
          2 * (x * y + z * w),     1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
          2 * (x * z - y * w),     2 * (y * z + x * w),     1 - 2 * (x * x + y * y)};
  return r;
}

Vec3 Rotation::apply(const Vec3& v) const {
  return {m_[0] * v.x + m_[1] * v.y + m_[2] * v.z, m_[3] * v.x + m_[4] * v.y + m_[5] * v.z,
          m_[6] * v.x + m_[7] * v.y + m_[8] * v.z};
}

Rotation Rotation::inverse() const {
  Rotation r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m_[3 * i + j] = m_[3 * j + i];
  return r;
}

Rotation Rotation::operator*(const Rotation& o) const {
  Rotation r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += m_[3 * i + k] * o.m_[3 * k + j];
      r.m_[3 * i + j] = s;
    }
  }
  return r;
}

bool Rotation::is_identity(double tol) const {
  const Rotation id;
  for (int i = 0; i < 9; ++i)
    if (std::abs(m_[i] - id.m_[i]) > tol) return false;
  return true;
}

std::array<double, 3> Rotation::zyz() const {
  const double beta = std::atan2(std::hypot(m_[2], m_[5]), m_[8]);
  const double sb = std::hypot(m_[2], m_[5]);
  double alpha, gamma;
  if (sb > 1e-12) {
    alpha = std::atan2(m_[5], m_[2]);
    gamma = std::atan2(m_[7], -m_[6]);
  } else if (m_[8] > 0.0) {
    // Pure z rotation by alpha + gamma.
    alpha = std::atan2(m_[3], m_[0]);
    gamma = 0.0;
  } else {
    // Rz(alpha) Ry(π) = [[-c, -s, 0], [-s, c, 0], [0, 0, -1]].
    alpha = std::atan2(-m_[1], m_[4]);
    gamma = 0.0;
  }
  return {alpha, beta, gamma};
}

double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
  return std::atan2(norm(cross(x.vec(), y.vec())), dot(x.vec(), y.vec()));
}

bool in_chart(const SpherePoint& p, const Rotation& R, double tol) {
  const Vec3 z{R(0, 2), R(1, 2), R(2, 2)};
  return norm(cross(z, p.vec())) > tol;
}

Vec3 chart_direction(const SpherePoint& p, const Rotation& R) {
  const Vec3 z{R(0, 2), R(1, 2), R(2, 2)};
  const Vec3 c = cross(z, p.vec());
  const double n = norm(c);
  if (n < 1e-14) throw Error(ErrorKind::PoleInChart, "point is a pole of the chart");
  return c * (1.0 / n);
}

double tangent_angle(const SpherePoint& p, const Vec3& v, const Vec3& w) {
  // J v = v × p is the quarter turn fixed by the orientation convention.
  return std::atan2(dot(cross(v, p.vec()), w), dot(v, w));
}

double reference_angle(const SpherePoint& p, const Rotation& R1, const Rotation& R2) {
  const double psi = tangent_angle(p, chart_direction(p, R1), chart_direction(p, R2));
  return psi <= -std::numbers::pi ? psi + 2.0 * std::numbers::pi : psi;
}

}  // namespace spinwave
