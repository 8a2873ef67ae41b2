#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace diamond::geometry {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Points3 = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;

// Points closer than this (in inner product) to a cap boundary are on it.
inline constexpr double kBoundaryTolerance = 1e-10;
inline constexpr double kUnitTolerance = 1e-12;

// A point of the unit sphere. Construction normalizes its argument.
template <typename Scalar = double>
class UnitVec {
 public:
  UnitVec() : v_(0, 0, 1) {}
  explicit UnitVec(const Vec3<Scalar>& v) {
    const Scalar n = v.norm();
    if (!(n > Scalar(0)) || !std::isfinite(n)) throw std::invalid_argument("cannot normalize a zero vector");
    v_ = v / n;
  }
  UnitVec(Scalar x, Scalar y, Scalar z) : UnitVec(Vec3<Scalar>(x, y, z)) {}

  // Spherical coordinates: longitude phi, height z = cos(colatitude).
  static UnitVec from_height(Scalar z, Scalar phi) {
    const Scalar s = std::sqrt(std::max(Scalar(0), Scalar(1) - z * z));
    UnitVec u;
    u.v_ = Vec3<Scalar>(s * std::cos(phi), s * std::sin(phi), z);
    return u;
  }

  const Vec3<Scalar>& vec() const { return v_; }
  operator const Vec3<Scalar>&() const { return v_; }  // NOLINT(implicit)
  Scalar x() const { return v_.x(); }
  Scalar y() const { return v_.y(); }
  Scalar z() const { return v_.z(); }
  Scalar dot(const UnitVec& o) const { return v_.dot(o.v_); }
  UnitVec operator-() const {
    UnitVec u;
    u.v_ = -v_;
    return u;
  }

 private:
  Vec3<Scalar> v_;
};

// {x : <x, center> >= t}.
template <typename Scalar = double>
struct SphericalCap {
  SphericalCap(UnitVec<Scalar> c, Scalar height) : center(c), t(height) {
    if (!(t >= Scalar(-1) && t <= Scalar(1))) throw std::invalid_argument("cap height outside [-1, 1]");
  }
  UnitVec<Scalar> center;
  Scalar t;
};

enum class CapMode { closed, open };

template <typename Scalar>
Scalar cap_area(const SphericalCap<Scalar>& cap) {
  return Scalar(2) * std::numbers::pi_v<Scalar> * (Scalar(1) - cap.t);
}

// Normalized area mu(C) / mu(S^2).
template <typename Scalar>
Scalar cap_fraction(Scalar t) {
  return (Scalar(1) - t) / Scalar(2);
}

template <typename Scalar>
Scalar cap_fraction(const SphericalCap<Scalar>& cap) {
  return cap_fraction(cap.t);
}

template <typename Scalar>
Scalar chord_distance(const Vec3<Scalar>& a, const Vec3<Scalar>& b) {
  return (a - b).norm();
}

template <typename Scalar>
Scalar chord_distance(const UnitVec<Scalar>& a, const UnitVec<Scalar>& b) {
  return chord_distance<Scalar>(a.vec(), b.vec());
}

// Where a point of a set came from. Poles use parallel 0 (north) and p + 1
// (south); free point sets use parallel -1.
struct PointTag {
  int parallel = -1;
  int index = 0;
};

// N unit vectors stored column-wise, with provenance tags.
template <typename Scalar = double>
class PointSet {
 public:
  PointSet() = default;

  // Columns already unit within kUnitTolerance are kept bit-for-bit, so a
  // set read back from its own export is unchanged; others are normalized.
  explicit PointSet(Points3<Scalar> xyz, std::vector<PointTag> tags = {}) : xyz_(std::move(xyz)), tags_(std::move(tags)) {
    for (Eigen::Index i = 0; i < xyz_.cols(); ++i) {
      const Scalar n = xyz_.col(i).norm();
      if (!(n > Scalar(0)) || !std::isfinite(n)) throw std::invalid_argument("point set contains a zero or non-finite vector");
      if (std::abs(n - Scalar(1)) > Scalar(kUnitTolerance)) xyz_.col(i) /= n;
    }
    if (tags_.empty()) tags_.assign(static_cast<std::size_t>(xyz_.cols()), PointTag{});
    if (tags_.size() != static_cast<std::size_t>(xyz_.cols())) throw std::invalid_argument("tag count differs from point count");
  }

  explicit PointSet(const std::vector<UnitVec<Scalar>>& points) : xyz_(3, static_cast<Eigen::Index>(points.size())) {
    for (std::size_t i = 0; i < points.size(); ++i) xyz_.col(static_cast<Eigen::Index>(i)) = points[i].vec();
    tags_.assign(points.size(), PointTag{});
  }

  std::size_t size() const { return static_cast<std::size_t>(xyz_.cols()); }
  bool empty() const { return xyz_.cols() == 0; }
  auto operator[](std::size_t i) const { return xyz_.col(static_cast<Eigen::Index>(i)); }
  UnitVec<Scalar> unit(std::size_t i) const { return UnitVec<Scalar>(Vec3<Scalar>((*this)[i])); }
  const Points3<Scalar>& matrix() const { return xyz_; }
  const std::vector<PointTag>& tags() const { return tags_; }
  const PointTag& tag(std::size_t i) const { return tags_[i]; }

 private:
  Points3<Scalar> xyz_;
  std::vector<PointTag> tags_;
};

template <typename Scalar>
std::size_t count_in_cap(const PointSet<Scalar>& points, const SphericalCap<Scalar>& cap, CapMode mode) {
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> dots = cap.center.vec().transpose() * points.matrix();
  const Scalar tol = Scalar(kBoundaryTolerance);
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < dots.size(); ++i) {
    if (mode == CapMode::closed ? dots[i] >= cap.t - tol : dots[i] > cap.t + tol) ++count;
  }
  return count;
}

// Cap whose boundary circle passes through a, b and c. Empty when the three
// points do not span a plane (coincident or collinear in R^3).
template <typename Scalar>
std::optional<SphericalCap<Scalar>> circumcap(const Vec3<Scalar>& a, const Vec3<Scalar>& b, const Vec3<Scalar>& c) {
  const Vec3<Scalar> normal = (b - a).cross(c - a);
  const Scalar norm = normal.norm();
  if (!(norm >= Scalar(kUnitTolerance))) return std::nullopt;
  const Vec3<Scalar> n = normal / norm;
  const Scalar ta = n.dot(a);
  const Scalar tb = n.dot(b);
  const Scalar tc = n.dot(c);
  const Scalar tol = Scalar(kBoundaryTolerance);
  if (std::abs(ta - tb) > tol || std::abs(ta - tc) > tol) return std::nullopt;
  const Scalar t = std::clamp((ta + tb + tc) / Scalar(3), Scalar(-1), Scalar(1));
  UnitVec<Scalar> center(n);
  return SphericalCap<Scalar>(center, t);
}

template <typename Scalar>
std::optional<SphericalCap<Scalar>> circumcap(const UnitVec<Scalar>& a, const UnitVec<Scalar>& b, const UnitVec<Scalar>& c) {
  return circumcap<Scalar>(a.vec(), b.vec(), c.vec());
}

// Smallest cap with a and b on its boundary.
template <typename Scalar>
SphericalCap<Scalar> pair_diametral_cap(const Vec3<Scalar>& a, const Vec3<Scalar>& b) {
  const Vec3<Scalar> sum = a + b;
  if ((a - b).norm() < Scalar(kUnitTolerance)) throw std::invalid_argument("pair_diametral_cap: coincident points");
  if (sum.norm() < Scalar(kUnitTolerance)) throw std::invalid_argument("pair_diametral_cap: antipodal points");
  UnitVec<Scalar> center(sum);
  return SphericalCap<Scalar>(center, std::clamp(center.vec().dot(a), Scalar(-1), Scalar(1)));
}

template <typename Scalar>
SphericalCap<Scalar> pair_diametral_cap(const UnitVec<Scalar>& a, const UnitVec<Scalar>& b) {
  return pair_diametral_cap<Scalar>(a.vec(), b.vec());
}

// Closure of the complement of a cap.
template <typename Scalar>
SphericalCap<Scalar> complement(const SphericalCap<Scalar>& cap) {
  return SphericalCap<Scalar>(-cap.center, -cap.t);
}

template <typename Scalar>
PointSet<Scalar> rotated(const PointSet<Scalar>& points, const Eigen::Matrix<Scalar, 3, 3>& rotation) {
  return PointSet<Scalar>(rotation * points.matrix(), points.tags());
}

// Generalized spiral (Fibonacci) directions: k equal-area bands in z with a
// golden-angle longitude step. Deterministic.
template <typename Scalar = double>
Points3<Scalar> spiral_directions(std::size_t k) {
  Points3<Scalar> out(3, static_cast<Eigen::Index>(k));
  const Scalar golden = std::numbers::pi_v<Scalar> * (Scalar(3) - std::sqrt(Scalar(5)));
  for (std::size_t i = 0; i < k; ++i) {
    const Scalar z = Scalar(1) - (Scalar(2) * Scalar(i) + Scalar(1)) / Scalar(k);
    const Scalar s = std::sqrt(std::max(Scalar(0), Scalar(1) - z * z));
    const Scalar phi = golden * Scalar(i);
    out.col(static_cast<Eigen::Index>(i)) << s * std::cos(phi), s * std::sin(phi), z;
  }
  return out;
}

}  // namespace diamond::geometry
