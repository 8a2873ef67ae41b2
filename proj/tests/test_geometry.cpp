#include <doctest.h>

#include <numbers>
#include <random>

#include "diamond/geometry.hpp"
#include "support.hpp"

using namespace diamond::geometry;

TEST_CASE("unit vectors normalize and reject zero") {
  const UnitVec<double> u(3.0, 0.0, 4.0);
  CHECK(u.vec().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(u.x() == doctest::Approx(0.6));
  CHECK_THROWS_AS(UnitVec<double>(0.0, 0.0, 0.0), std::invalid_argument);
  const auto w = UnitVec<double>::from_height(0.5, std::numbers::pi / 2);
  CHECK(w.z() == 0.5);
  CHECK(w.y() == doctest::Approx(std::sqrt(0.75)));
}

TEST_CASE("caps: area, complement and boundary semantics") {
  const UnitVec<double> north(0.0, 0.0, 1.0);
  CHECK_THROWS_AS(SphericalCap<double>(north, 1.5), std::invalid_argument);
  const SphericalCap<double> hemi(north, 0.0);
  CHECK(cap_area(hemi) == doctest::Approx(2 * std::numbers::pi));
  CHECK(cap_fraction(hemi) == 0.5);
  const auto comp = complement(SphericalCap<double>(north, 0.3));
  CHECK(comp.t == -0.3);
  CHECK(comp.center.z() == -1.0);
  CHECK(cap_area(SphericalCap<double>(north, 0.3)) + cap_area(comp) == doctest::Approx(4 * std::numbers::pi));

  Points3<double> m(3, 3);
  m << 0, 1, 0,  //
      0, 0, 0,   //
      1, 0, -1;
  const PointSet<double> pts(m);
  CHECK(count_in_cap(pts, hemi, CapMode::closed) == 2);
  CHECK(count_in_cap(pts, hemi, CapMode::open) == 1);
}

TEST_CASE("circumcap passes through its three points") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const auto pts = support::random_points(rng, 3);
    const auto cap = circumcap<double>(Vec3<double>(pts[0]), Vec3<double>(pts[1]), Vec3<double>(pts[2]));
    REQUIRE(cap.has_value());
    for (int i = 0; i < 3; ++i) CHECK(cap->center.vec().dot(pts[i]) == doctest::Approx(cap->t).epsilon(1e-12));
  }
  const Vec3<double> a(1, 0, 0);
  CHECK_FALSE(circumcap<double>(a, a, Vec3<double>(0, 1, 0)).has_value());
}

TEST_CASE("diametral pair cap") {
  const Vec3<double> a(1, 0, 0), b(0, 1, 0);
  const auto cap = pair_diametral_cap<double>(a, b);
  CHECK(cap.t == doctest::Approx(std::sqrt(0.5)));
  CHECK(cap.center.vec().dot(a) == doctest::Approx(cap.t));
  CHECK_THROWS_AS(pair_diametral_cap<double>(a, -a), std::invalid_argument);
  CHECK_THROWS_AS(pair_diametral_cap<double>(a, a), std::invalid_argument);
}

TEST_CASE("point sets keep unit columns bit for bit") {
  Points3<double> m(3, 2);
  m.col(0) = Vec3<double>(0.6, 0.8, 0.0);
  m.col(1) = Vec3<double>(0.0, 0.0, 2.0);
  const PointSet<double> pts(m);
  CHECK(pts[0].x() == 0.6);
  CHECK(pts[1].z() == 1.0);
  CHECK(pts.tag(0).parallel == -1);
  CHECK_THROWS_AS(PointSet<double>(Points3<double>::Zero(3, 1)), std::invalid_argument);
}

TEST_CASE("rotation preserves chords") {
  std::mt19937_64 rng(3);
  const auto pts = support::random_points(rng, 10);
  const auto rot = rotated(pts, support::random_rotation(rng));
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 10; ++j) CHECK(chord_distance<double>(rot[i], rot[j]) == doctest::Approx(chord_distance<double>(pts[i], pts[j])));
  }
}

TEST_CASE("spiral directions are unit and balanced") {
  const auto dirs = spiral_directions<double>(1000);
  CHECK(dirs.colwise().norm().maxCoeff() == doctest::Approx(1.0));
  CHECK(std::abs(dirs.rowwise().sum()(2)) < 1e-9);
}
