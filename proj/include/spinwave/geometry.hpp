#pragma once

#include <array>
#include <cstdint>

namespace spinwave {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double c) const { return {c * x, c * y, c * z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
};

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 normalized(const Vec3& a);

/// Unit vector on S². Colatitude in [0, π], longitude in [-π, π).
class SpherePoint {
 public:
  SpherePoint() : v_{0.0, 0.0, 1.0} {}
  /// Normalizes its argument; throws InvalidArgument on a (near) zero vector.
  explicit SpherePoint(const Vec3& v);

  static SpherePoint from_angles(double theta, double phi);
  static SpherePoint north() { return SpherePoint(); }
  static SpherePoint south() { return SpherePoint(Vec3{0.0, 0.0, -1.0}); }

  const Vec3& vec() const { return v_; }
  double theta() const;
  double phi() const;
  /// True within `tol` of either pole, where longitude is undefined.
  bool is_pole(double tol = 1e-13) const;

 private:
  Vec3 v_;
};

/// Proper orthogonal 3×3 matrix, row-major.
class Rotation {
 public:
  Rotation();  // identity
  /// Throws InvalidArgument unless mᵀm = I and det m = 1 within 1e-10.
  explicit Rotation(const std::array<double, 9>& m);

  static Rotation identity() { return Rotation(); }
  static Rotation about_x(double angle);
  static Rotation about_y(double angle);
  static Rotation about_z(double angle);
  /// Rotation by `angle` about `axis` (right-hand rule).
  static Rotation about_axis(const Vec3& axis, double angle);
  /// R = Rz(alpha) Ry(beta) Rz(gamma).
  static Rotation from_zyz(double alpha, double beta, double gamma);
  /// Haar-distributed rotation from three uniforms in [0,1).
  static Rotation from_uniforms(double u1, double u2, double u3);

  double operator()(int r, int c) const { return m_[3 * r + c]; }
  const std::array<double, 9>& matrix() const { return m_; }

  Vec3 apply(const Vec3& v) const;
  SpherePoint apply(const SpherePoint& p) const { return SpherePoint(apply(p.vec())); }
  Rotation inverse() const;
  Rotation operator*(const Rotation& o) const;
  bool is_identity(double tol = 0.0) const;

  /// Euler angles (alpha, beta, gamma) with R = Rz(alpha) Ry(beta) Rz(gamma),
  /// beta in [0, π]. At beta ∈ {0, π} the split between alpha and gamma is
  /// fixed by gamma = 0.
  std::array<double, 3> zyz() const;

 private:
  std::array<double, 9> m_;
};

double geodesic_distance(const SpherePoint& x, const SpherePoint& y);

/// Unit tangent vector ρ_R(p) along the circle of constant colatitude of chart R,
/// pointing toward increasing chart longitude. Throws PoleInChart when R⁻¹p is a pole.
Vec3 chart_direction(const SpherePoint& p, const Rotation& R);

/// Signed angle from tangent vector v to tangent vector w at p.
double tangent_angle(const SpherePoint& p, const Vec3& v, const Vec3& w);

/// Angle ψ from ρ_{R1}(p) to ρ_{R2}(p), so that f_{R2}(p) = e^{isψ} f_{R1}(p).
/// Result in (-π, π].
double reference_angle(const SpherePoint& p, const Rotation& R1, const Rotation& R2);

/// True if R⁻¹p is not within `tol` of a pole.
bool in_chart(const SpherePoint& p, const Rotation& R, double tol = 1e-10);

}  // namespace spinwave
