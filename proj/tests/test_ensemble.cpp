#include <doctest.h>

#include <numbers>
#include <random>

#include "diamond/ensemble.hpp"
#include "support.hpp"

using namespace diamond;
using namespace diamond::ensemble;

TEST_CASE("simple model counts against a direct tally") {
  for (int M = 1; M <= 60; ++M) {
    const auto model = validate(simple_model(M));
    // Direct tally of r_j = 4 min(j, 2M - j).
    std::int64_t total = 2;
    std::int64_t before = 0;
    for (int j = 1; j <= 2 * M - 1; ++j) {
      const std::int64_t r = 4 * std::min(j, 2 * M - j);
      CHECK(model.r(j) == r);
      CHECK(model.partial_count(j) == 1 + before);
      if (j <= M) CHECK(model.partial_count(j) == 2 * j * j - 2 * j + 1);
      before += r;
      total += r;
    }
    CHECK(model.N() == total);
    CHECK(model.N() == 4 * M * M + 2);
    CHECK(model.z(M) == Rational(0));
  }
}

TEST_CASE("three height formulas agree and are antisymmetric") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 40; ++k) {
    const auto model = validate(support::random_model(rng));
    const int p = model.parallels();
    for (int j = 1; j <= p; ++j) {
      CHECK(height_z(model, j) == height_z_from_partial(model, j));
      CHECK(height_z(model, j) == height_z_balanced(model, j));
      CHECK(model.z(j) == -model.z(p + 1 - j));
      if (j > 1) CHECK(model.z(j) < model.z(j - 1));
    }
    CHECK(model.z(model.M()) == Rational(0));
  }
}

TEST_CASE("worked heights for M = 3") {
  const auto model = validate(simple_model(3));
  CHECK(model.N() == 38);
  CHECK(model.z(1) == Rational(32, 37));
  CHECK(model.z(2) == Rational(20, 37));
}

TEST_CASE("validation reports the violated constraint") {
  auto code_of = [](const ModelSpec& s) {
    try {
      validate(s);
    } catch (const ValidationError& e) {
      return std::string(to_string(e.code()));
    }
    return std::string("ok");
  };
  ModelSpec s = simple_model(5);
  CHECK(code_of(s) == "ok");
  s.M = 0;
  CHECK(code_of(s) == "bad_M");
  s = simple_model(5);
  s.beta = {4, 2};
  CHECK(code_of(s) == "shape_mismatch");
  s = simple_model(5);
  s.alpha = {1};
  CHECK(code_of(s) == "alpha1_nonzero");
  s = simple_model(5);
  s.beta = {0};
  CHECK(code_of(s) == "beta1_nonpositive");
  s = {6, {0, 3, 6}, {0, 9}, {4, -1}, {}};
  CHECK(code_of(s) == "negative_coefficient");
  s = {6, {0, 4, 3}, {0, 4}, {4, 3}, {}};
  CHECK(code_of(s) == "non_monotone_breakpoints");
  s = {6, {0, 3, 6}, {0, 5}, {4, 2}, {}};
  CHECK(code_of(s) == "discontinuous");
  s = {6, {0, 3, 6}, {0, 6}, {4, 2}, {}};
  CHECK(code_of(s) == "ok");
  s = simple_model(3, ThetaPolicy::fixed({0.1, 0.2}));
  CHECK(code_of(s) == "bad_theta");
  s = simple_model(2, ThetaPolicy::fixed({0.1, 0.2, 7.0}));
  CHECK(code_of(s) == "bad_theta");
}

TEST_CASE("generated points sit on their parallels with the declared phases") {
  const auto model = validate(simple_model(4, ThetaPolicy::seeded(9)));
  const auto pts = generate(model);
  REQUIRE(pts.size() == static_cast<std::size_t>(model.N()));
  CHECK(pts.tag(0).parallel == 0);
  CHECK(pts[0].z() == 1.0);
  CHECK(pts.tag(pts.size() - 1).parallel == model.parallels() + 1);
  for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
    const auto& tag = pts.tag(k);
    CHECK(pts[k].z() == doctest::Approx(model.z(tag.parallel).to_double()).epsilon(1e-15));
    double phi = std::atan2(pts[k].y(), pts[k].x());
    const double expected = 2 * std::numbers::pi * tag.index / static_cast<double>(model.r(tag.parallel)) + model.theta(tag.parallel);
    const double diff = std::remainder(phi - expected, 2 * std::numbers::pi);
    CHECK(std::abs(diff) < 1e-12);
  }
}

TEST_CASE("theta policies are deterministic") {
  const auto a = validate(simple_model(5, ThetaPolicy::seeded(42)));
  const auto b = validate(simple_model(5, ThetaPolicy::seeded(42)));
  const auto c = validate(simple_model(5, ThetaPolicy::seeded(43)));
  CHECK(a.theta_values() == b.theta_values());
  CHECK(a.theta_values() != c.theta_values());
  for (double t : a.theta_values()) CHECK((t >= 0 && t < 2 * std::numbers::pi));
  CHECK(validate(simple_model(5)).theta(3) == 0.0);
}

TEST_CASE("rescale keeps slopes and continuity") {
  const ModelSpec s{6, {0, 3, 6}, {0, 6}, {4, 2}, {}};
  const auto big = rescale(s, 60);
  CHECK(big.t == std::vector<std::int64_t>{0, 30, 60});
  CHECK(big.beta == s.beta);
  CHECK(big.alpha == std::vector<std::int64_t>{0, 60});
  CHECK_NOTHROW(validate(big));
  CHECK_THROWS_AS(rescale(ModelSpec{6, {0, 1, 2, 6}, {0, 2, 2}, {4, 2, 2}, {}}, 1), ValidationError);
}

TEST_CASE("simple model constants") {
  const auto k = model_constants(validate(simple_model(10)));
  CHECK(k.A == 4.0);
  CHECK(k.c == 1.0);
  CHECK(k.a2 == 16.0);
  CHECK(k.a1_proof == 0.0);
  CHECK(k.a1_fallback);
  CHECK(k.a1 == doctest::Approx(4.0).epsilon(1e-5));
  CHECK(k.a2_empirical == doctest::Approx(6.0));  // M = 1: N / M^2 = 6
  CHECK(k.a1_collar == 1.0);                      // N_M / M^2 at M = 1
  CHECK(k.k1_dot == 1.0 / 32.0);
  CHECK(k.k1 == 1.0 / 64.0);
  CHECK(k.k2 == 16.0);
  CHECK(k.c1 == 1.0 / 8.0);
  CHECK(k.c2 == doctest::Approx(4.0 + 4.0 * std::sqrt(2.0)));
  CHECK(k.d1 == doctest::Approx(2 * std::sqrt(2.0) * std::numbers::pi / 8));
  CHECK(k.d2 == doctest::Approx(16 * std::numbers::pi));
  CHECK(k.g2 == doctest::Approx(std::hypot(k.d2, k.e2)));
}

TEST_CASE("family growth bounds hold: a1 M^2 <= N <= a2 M^2") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 20; ++k) {
    const auto spec = support::random_model(rng, 30);
    const auto c = model_constants(validate(spec), 1, 200);
    for (int M = 1; M <= 200; ++M) {
      ModelSpec s;
      try {
        s = rescale(spec, M);
      } catch (const ValidationError&) {
        continue;
      }
      const auto m = validate(s);
      const double m2 = static_cast<double>(M) * M;
      CHECK(m.N() >= c.a1 * m2 - 1e-9);
      CHECK(m.N() <= c.a2 * m2 + 1e-9);
    }
  }
}
