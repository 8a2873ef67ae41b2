#include <doctest.h>

#include <numbers>
#include <numeric>
#include <random>

#include "diamond/metrics.hpp"
#include "support.hpp"

using namespace diamond;
using namespace diamond::metrics;

namespace {

geometry::PointSet<double> from_rows(std::initializer_list<std::array<double, 3>> rows) {
  geometry::Points3<double> m(3, static_cast<Eigen::Index>(rows.size()));
  Eigen::Index k = 0;
  for (const auto& r : rows) m.col(k++) << r[0], r[1], r[2];
  return geometry::PointSet<double>(m);
}

geometry::PointSet<double> permuted(const geometry::PointSet<double>& pts, std::mt19937_64& rng) {
  std::vector<Eigen::Index> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  geometry::Points3<double> m(3, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < order.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = pts.matrix().col(order[k]);
  return geometry::PointSet<double>(m);
}

// Naive sup over caps centered at `centers`, heights at every point.
double naive_sup(const geometry::PointSet<double>& pts, const geometry::Points3<double>& centers) {
  const double n = static_cast<double>(pts.size());
  double best = 0;
  for (Eigen::Index c = 0; c < centers.cols(); ++c) {
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double t = std::clamp(centers.col(c).dot(pts[k]), -1.0, 1.0);
      int closed = 0, open = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = centers.col(c).dot(pts[i]);
        closed += d >= t - 1e-10;
        open += d > t + 1e-10;
      }
      best = std::max({best, closed / n - (1 - t) / 2, (1 - t) / 2 - open / n});
    }
  }
  return best;
}

const geometry::PointSet<double>& octahedron() {
  static const auto pts = support::simple_points(1);
  return pts;
}

}  // namespace

TEST_CASE("octahedron closed forms") {
  const auto& o = octahedron();
  REQUIRE(o.size() == 6);
  CHECK(std::abs(separation(o) - std::sqrt(2.0)) < 1e-15);
  CHECK(log_energy(o, 1) == doctest::Approx(-18 * std::log(2.0)).epsilon(1e-13));
  CHECK(sum_distances(o, 1) == doctest::Approx(24 * std::sqrt(2.0) + 12).epsilon(1e-13));
  CHECK(riesz_energy(o, 1.0, 1) == doctest::Approx(12 * std::sqrt(2.0) + 3).epsilon(1e-13));
  CHECK(mean_pair_distance(o, 1) == doctest::Approx((24 * std::sqrt(2.0) + 12) / 36).epsilon(1e-13));
  const auto model = ensemble::validate(ensemble::simple_model(1));
  const auto part = partition::build_partition(model);
  const auto cover = covering_radius(o, 0, &part, 1);
  const double rho = std::sqrt(2 - 2 / std::sqrt(3.0));
  CHECK(cover.estimate == doctest::Approx(rho).epsilon(1e-9));
  REQUIRE(cover.upper_bound);
  CHECK(*cover.upper_bound >= rho);
}

TEST_CASE("covering radius of the cube and the tetrahedron") {
  const double s = 1 / std::sqrt(3.0);
  const auto cube = from_rows({{s, s, s}, {s, s, -s}, {s, -s, s}, {s, -s, -s}, {-s, s, s}, {-s, s, -s}, {-s, -s, s}, {-s, -s, -s}});
  CHECK(covering_radius(cube, 0).estimate == doctest::Approx(std::sqrt(2 - 2 / std::sqrt(3.0))).epsilon(1e-9));
  const auto tet = from_rows({{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}});
  CHECK(covering_radius(tet, 0).estimate == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-9));
  CHECK(separation(tet) == doctest::Approx(std::sqrt(8.0 / 3.0)));
}

TEST_CASE("covering estimate brackets a dense grid search") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 4; ++trial) {
    const auto pts = trial < 2 ? support::simple_points(trial + 2) : support::random_points(rng, 30);
    const NearestByHeight search(pts);
    const auto grid = geometry::spiral_directions<double>(200000);
    double brute = 0;
    for (Eigen::Index k = 0; k < grid.cols(); ++k) {
      double best = INFINITY;
      for (std::size_t i = 0; i < pts.size(); ++i) best = std::min(best, (grid.col(k) - pts[i]).norm());
      brute = std::max(brute, best);
    }
    const auto cover = covering_radius(pts, 0);
    CHECK(cover.estimate >= brute - 1e-12);
    CHECK(cover.estimate <= brute + 5e-3);
    CHECK(search.distance(cover.farthest_direction) == doctest::Approx(cover.estimate));
  }
}

TEST_CASE("covering upper bound dominates the estimate") {
  for (int M = 1; M <= 12; ++M) {
    const auto model = ensemble::validate(ensemble::simple_model(M, ensemble::ThetaPolicy::seeded(static_cast<std::uint64_t>(M))));
    const auto part = partition::build_partition(model);
    const auto pts = ensemble::generate(model);
    const auto cover = covering_radius(pts, 0, &part);
    REQUIRE(cover.upper_bound);
    CHECK(*cover.upper_bound >= cover.estimate);
    CHECK(mesh_ratio(cover, separation(pts)) == doctest::Approx(*cover.upper_bound / separation(pts)));
  }
}

TEST_CASE("nearest-k query against sorting") {
  std::mt19937_64 rng(52);
  const auto pts = support::random_points(rng, 200);
  const NearestByHeight search(pts);
  for (int q = 0; q < 20; ++q) {
    const auto y = support::random_points(rng, 1);
    const geometry::Vec3<double> v = y[0];
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return (pts[a] - v).norm() < (pts[b] - v).norm(); });
    const auto got = search.nearest(v, 6);
    REQUIRE(got.size() == 6);
    for (int k = 0; k < 6; ++k) CHECK(got[static_cast<std::size_t>(k)] == order[static_cast<std::size_t>(k)]);
    CHECK(search.distance(v) == (pts[order[0]] - v).norm());
  }
}

TEST_CASE("sweep separation equals brute force") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = trial % 2 ? support::random_points(rng, 300) : support::simple_points(trial + 1);
    CHECK(separation(pts) == separation_bruteforce(pts));
  }
}

TEST_CASE("duplicated points are rejected by pair kernels") {
  const auto pts = from_rows({{1, 0, 0}, {0, 1, 0}, {1, 0, 0}});
  CHECK_THROWS_AS(separation(pts), DuplicatePointsError);
  CHECK_THROWS_AS(log_energy(pts), DuplicatePointsError);
  CHECK_THROWS_AS(riesz_energy(pts, 2.0), DuplicatePointsError);
  CHECK_THROWS_AS(riesz_energy(octahedron(), -1.0), std::invalid_argument);
}

TEST_CASE("polar profile: direct count and closed form") {
  for (int M = 1; M <= 25; ++M) {
    const auto model = ensemble::validate(ensemble::simple_model(M));
    const auto pts = ensemble::generate(model);
    const auto prof = polar_cap_profile(model, pts);
    const std::int64_t N = model.N();
    REQUIRE(prof.closed_form);
    for (const auto& e : prof.entries) {
      // Points on or above parallel j: the pole and 4 + 8 + ... + 4j.
      CHECK(e.count == 1 + 2 * e.j * (e.j + 1));
      CHECK(e.exact == *e.closed_form);
    }
    CHECK(prof.entries[prof.argmax].j == M);
    CHECK(prof.max_exact == Rational(2 * M, N));  // sqrt(N - 2) / N
  }
  const auto m1 = ensemble::validate(ensemble::simple_model(1));
  CHECK(polar_cap_profile(m1, ensemble::generate(m1)).max_exact == Rational(1, 3));
  const auto m3 = ensemble::validate(ensemble::simple_model(3));
  CHECK(polar_cap_profile(m3, ensemble::generate(m3)).max_exact == Rational(3, 19));
}

TEST_CASE("equatorial discrepancy") {
  std::mt19937_64 rng(54);
  for (int k = 0; k < 10; ++k) {
    const auto model = ensemble::validate(k < 5 ? ensemble::simple_model(k + 1) : support::random_model(rng));
    const auto eq = equatorial_discrepancy(model, ensemble::generate(model));
    CHECK(eq.value == Rational(model.r(model.M()), 2 * model.N()));
    CHECK(eq.counted == eq.value);
  }
}

TEST_CASE("closed caps hold at least the open ones") {
  std::mt19937_64 rng(55);
  const auto pts = support::simple_points(4);
  for (int k = 0; k < 500; ++k) {
    const std::uint64_t a = rng(), b = rng();
    const geometry::SphericalCap<double> cap(geometry::UnitVec<double>(uniform_direction(a, b)), std::uniform_real_distribution<>(-1, 1)(rng));
    CHECK(count_in_cap(pts, cap, geometry::CapMode::closed) >= count_in_cap(pts, cap, geometry::CapMode::open));
    const auto comp = geometry::complement(cap);
    CHECK(count_in_cap(pts, cap, geometry::CapMode::closed) + count_in_cap(pts, comp, geometry::CapMode::open) == pts.size());
    CHECK(cap_deviation(pts, cap) >= 0.0);
  }
}

TEST_CASE("sweep over heights matches per-cap deviations") {
  std::mt19937_64 rng(56);
  const auto pts = support::random_points(rng, 25);
  for (int k = 0; k < 30; ++k) {
    const auto c = support::random_points(rng, 1);
    const geometry::Vec3<double> center = c[0];
    const auto sw = sweep_center(pts, center);
    double best = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      best = std::max(best, cap_deviation(pts, {geometry::UnitVec<double>(center), std::clamp(center.dot(pts[i]), -1.0, 1.0)}));
    }
    CHECK(sw.value == doctest::Approx(best).epsilon(1e-14));
    const geometry::SphericalCap<double> witness(geometry::UnitVec<double>(sw.witness.center), sw.witness.t);
    CHECK(cap_deviation(pts, witness) == doctest::Approx(sw.value).epsilon(1e-14));
  }
}

TEST_CASE("exact sup discrepancy dominates independent searches") {
  std::mt19937_64 rng(57);
  for (int trial = 0; trial < 5; ++trial) {
    const auto pts = support::random_points(rng, 5 + 3 * static_cast<std::size_t>(trial));
    const auto exact = sup_discrepancy_exact(pts);
    const double grid = naive_sup(pts, geometry::spiral_directions<double>(3000));
    CHECK(exact.value >= grid - 1e-12);
    CHECK(exact.value - grid < 0.05);
    const auto est = sup_discrepancy_estimate(pts, 20000, 3, default_workers(), false);
    CHECK(exact.value >= est.value - 1e-12);
    const geometry::SphericalCap<double> witness(geometry::UnitVec<double>(exact.witness.center), exact.witness.t);
    CHECK(cap_deviation(pts, witness) == doctest::Approx(exact.value).epsilon(1e-12));
  }
}

TEST_CASE("exact sup discrepancy of small simple models is the polar value") {
  for (int M = 1; M <= 4; ++M) {
    const auto model = ensemble::validate(ensemble::simple_model(M));
    const auto pts = ensemble::generate(model);
    const double lower = std::sqrt(static_cast<double>(model.N() - 2)) / static_cast<double>(model.N());
    CHECK(sup_discrepancy_exact(pts).value == doctest::Approx(lower).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sup_discrepancy_exact(support::simple_points(7)), SizeLimitError);
}

TEST_CASE("invariance under rotation and permutation") {
  std::mt19937_64 rng(58);
  const auto pts = support::simple_points(3);
  const auto moved = permuted(geometry::rotated(pts, support::random_rotation(rng)), rng);
  CHECK(sup_discrepancy_exact(moved).value == doctest::Approx(sup_discrepancy_exact(pts).value).epsilon(1e-10));
  CHECK(log_energy(moved) == doctest::Approx(log_energy(pts)).epsilon(1e-13));
  CHECK(riesz_energy(moved, 2.0) == doctest::Approx(riesz_energy(pts, 2.0)).epsilon(1e-13));
  CHECK(separation(moved) == doctest::Approx(separation(pts)).epsilon(1e-13));
  CHECK(l2_discrepancy_stolarsky(moved) == doctest::Approx(l2_discrepancy_stolarsky(pts)).epsilon(1e-9));
  CHECK(covering_radius(moved, 0).estimate == doctest::Approx(covering_radius(pts, 0).estimate).epsilon(1e-6));
}

TEST_CASE("results do not depend on the worker count") {
  const auto pts = support::simple_points(6);
  CHECK(riesz_energy(pts, 1.5, 1) == riesz_energy(pts, 1.5, 4));
  CHECK(log_energy(pts, 1) == log_energy(pts, 3));
  CHECK(mean_pair_distance(pts, 1) == mean_pair_distance(pts, 5));
  CHECK(sup_discrepancy_estimate(pts, 1500, 9, 1).value == sup_discrepancy_estimate(pts, 1500, 9, 4).value);
  CHECK(l2_discrepancy_quadrature(pts, 999, 0, 1) == l2_discrepancy_quadrature(pts, 999, 0, 3));
  const auto small = support::simple_points(2);
  const auto e1 = sup_discrepancy_exact(small, {150, 1});
  const auto e4 = sup_discrepancy_exact(small, {150, 4});
  CHECK(e1.value == e4.value);
  CHECK(e1.centers == e4.centers);
  CHECK(covering_radius(pts, 0, nullptr, 1).estimate == covering_radius(pts, 0, nullptr, 4).estimate);
}

TEST_CASE("Stolarsky form agrees with quadrature") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 4; ++trial) {
    const auto pts = trial == 0 ? octahedron() : support::random_points(rng, 12 * static_cast<std::size_t>(trial));
    const double st = l2_discrepancy_stolarsky(pts);
    CHECK(l2_discrepancy_quadrature(pts, 8000, 0) == doctest::Approx(st).epsilon(2e-3));
    CHECK(l2_discrepancy_quadrature(pts, 8000, 4000) == doctest::Approx(st).epsilon(5e-3));
  }
}

TEST_CASE("monte carlo mean chord") {
  CHECK(monte_carlo_mean_distance(1'000'000, 1) == doctest::Approx(kMeanDistance).epsilon(2e-3));
  CHECK(monte_carlo_mean_distance(1000, 4) == monte_carlo_mean_distance(1000, 4));
}

TEST_CASE("uniform directions are unit and cover both hemispheres") {
  std::mt19937_64 rng(60);
  double zsum = 0;
  for (int k = 0; k < 10000; ++k) {
    const std::uint64_t a = rng(), b = rng();
    const auto v = uniform_direction(a, b);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-15));
    zsum += v.z();
  }
  CHECK(std::abs(zsum / 10000) < 0.03);
}

TEST_CASE("report fills model-dependent fields only with a model") {
  const auto model = ensemble::validate(ensemble::simple_model(2));
  const auto pts = ensemble::generate(model);
  ReportOptions opt;
  opt.riesz_s = {1.0, 2.0};
  opt.quadrature_centers = 500;
  const auto with = compute_report(pts, &model, opt);
  CHECK(with.N == 18);
  CHECK(with.riesz.size() == 2);
  CHECK(with.d_sup_exact);
  CHECK(with.d_polar_max);
  CHECK(with.d_equatorial);
  CHECK(with.covering_upper);
  CHECK(with.envelope);
  CHECK(with.constants);
  CHECK(with.d_l2_quadrature);
  CHECK(with.d_sup_exact->value >= with.d_sup_estimate.value - 1e-12);
  const auto without = compute_report(pts, nullptr, opt);
  CHECK_FALSE(without.d_polar_max);
  CHECK_FALSE(without.covering_upper);
  CHECK_FALSE(without.envelope);
  CHECK(without.separation == with.separation);
  const auto env = simple_model_envelope(18);
  CHECK(env.lower == doctest::Approx(4.0 / 18));
  CHECK(env.upper == doctest::Approx((4 + 2 * std::sqrt(2.0)) / std::sqrt(18.0)));
}

TEST_CASE("certified covering bound stays below g2 / sqrt N") {
  for (int M = 1; M <= 40; ++M) {
    const auto model = ensemble::validate(ensemble::simple_model(M));
    const double bound = covering_upper_bound(partition::build_partition(model), ensemble::generate(model));
    const auto k = ensemble::model_constants(model);
    CHECK(bound * std::sqrt(static_cast<double>(model.N())) <= k.g2);
    CHECK(separation(ensemble::generate(model)) * std::sqrt(static_cast<double>(model.N())) >= k.g1);
  }
}
