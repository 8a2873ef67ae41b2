#pragma once

#include <random>
#include <vector>

#include "diamond/ensemble.hpp"
#include "diamond/geometry.hpp"
#include "diamond/metrics.hpp"

namespace support {

using namespace diamond;

// A random model obeying every parameter constraint: 1 to 3 pieces, integer
// breakpoints, non-negative slopes and intercepts fixed by continuity.
inline ensemble::ModelSpec random_model(std::mt19937_64& rng, int max_M = 60) {
  for (;;) {
    ensemble::ModelSpec spec;
    spec.M = std::uniform_int_distribution<int>(3, max_M)(rng);
    const int n = std::uniform_int_distribution<int>(1, std::min(3, spec.M))(rng);
    std::vector<std::int64_t> cuts;
    std::vector<int> pool;
    for (int x = 1; x < spec.M; ++x) pool.push_back(x);
    std::shuffle(pool.begin(), pool.end(), rng);
    cuts.assign(pool.begin(), pool.begin() + (n - 1));
    std::sort(cuts.begin(), cuts.end());
    spec.t = {0};
    spec.t.insert(spec.t.end(), cuts.begin(), cuts.end());
    spec.t.push_back(spec.M);
    spec.alpha = {0};
    spec.beta = {std::uniform_int_distribution<std::int64_t>(1, 8)(rng)};
    bool ok = true;
    for (int l = 1; l < n; ++l) {
      const std::int64_t x = spec.t[static_cast<std::size_t>(l)];
      const std::int64_t value = spec.alpha.back() + spec.beta.back() * x;
      const std::int64_t beta = std::uniform_int_distribution<std::int64_t>(0, 8)(rng);
      const std::int64_t alpha = value - beta * x;
      if (alpha < 0) {
        ok = false;
        break;
      }
      spec.alpha.push_back(alpha);
      spec.beta.push_back(beta);
    }
    if (!ok) continue;
    spec.theta = ensemble::ThetaPolicy::seeded(rng());
    return spec;
  }
}

inline geometry::PointSet<double> random_points(std::mt19937_64& rng, std::size_t n) {
  geometry::Points3<double> m(3, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t a = rng();
    const std::uint64_t b = rng();
    m.col(static_cast<Eigen::Index>(i)) = metrics::uniform_direction(a, b);
  }
  return geometry::PointSet<double>(m);
}

inline geometry::PointSet<double> simple_points(int M) {
  return ensemble::generate(ensemble::validate(ensemble::simple_model(M)));
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

}  // namespace support
