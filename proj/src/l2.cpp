#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "diamond/metrics.hpp"

namespace diamond::metrics {

double mean_pair_distance(const PointSet<double>& points, unsigned workers) {
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("mean pair distance of an empty set");
  std::vector<double> rows(n, 0.0);
  parallel_for(n, workers, [&](std::size_t i) {
    CompensatedSum<double> acc;
    for (std::size_t j = i + 1; j < n; ++j) acc.add((points[i] - points[j]).norm());
    rows[i] = acc.value();
  });
  const double nd = static_cast<double>(n);
  return 2.0 * ordered_sum(rows) / (nd * nd);
}

double l2_discrepancy_stolarsky(const PointSet<double>& points, unsigned workers) {
  const double radicand = (kMeanDistance - mean_pair_distance(points, workers)) / kStolarskyConstant;
  if (radicand < -1e-12) throw std::logic_error("Stolarsky radicand is negative: mean pair distance exceeds the uniform mean");
  return std::sqrt(std::max(0.0, radicand));
}

double l2_discrepancy_quadrature(const PointSet<double>& points, std::size_t center_nodes, std::size_t t_nodes, unsigned workers) {
  const std::size_t n = points.size();
  if (n == 0 || center_nodes == 0) throw std::invalid_argument("quadrature needs points and center nodes");
  const double nd = static_cast<double>(n);
  const auto centers = geometry::spiral_directions<double>(center_nodes);
  std::vector<double> per_center(center_nodes, 0.0);

  parallel_for(center_nodes, workers, [&](std::size_t c) {
    std::vector<double> dots(n);
    Eigen::Map<Eigen::RowVectorXd>(dots.data(), static_cast<Eigen::Index>(n)).noalias() =
        centers.col(static_cast<Eigen::Index>(c)).transpose() * points.matrix();
    std::sort(dots.begin(), dots.end(), std::greater<>());
    for (double& d : dots) d = std::clamp(d, -1.0, 1.0);
    CompensatedSum<double> acc;
    if (t_nodes == 0) {
      // Count is k on (dots[k], dots[k-1]]; integrate (k/N - (1 - t)/2)^2 dt/2
      // exactly on each piece.
      auto piece = [&](double k, double lo, double hi) {
        const double ulo = k / nd - 0.5 + lo / 2.0;
        const double uhi = k / nd - 0.5 + hi / 2.0;
        return (uhi * uhi * uhi - ulo * ulo * ulo) / 3.0;  // (2/3)(...) times 1/2
      };
      double upper = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc.add(piece(static_cast<double>(k), dots[k], upper));
        upper = dots[k];
      }
      acc.add(piece(nd, -1.0, upper));
      per_center[c] = acc.value();
    } else {
      const double td = static_cast<double>(t_nodes);
      std::size_t count = 0;
      for (std::size_t k = 0; k < t_nodes; ++k) {
        const double t = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / td;
        while (count < n && dots[count] >= t) ++count;
        const double dev = static_cast<double>(count) / nd - geometry::cap_fraction(t);
        acc.add(dev * dev);
      }
      per_center[c] = acc.value() / td;
    }
  });
  return std::sqrt(ordered_sum(per_center) / static_cast<double>(center_nodes));
}

double monte_carlo_mean_distance(std::size_t samples, std::uint64_t seed) {
  constexpr std::size_t chunk = 1 << 16;
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  std::vector<double> partials(chunks, 0.0);
  parallel_for(chunks, default_workers(), [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(c)};
    std::mt19937_64 rng(seq);
    CompensatedSum<double> acc;
    const std::size_t end = std::min(samples, (c + 1) * chunk);
    for (std::size_t s = c * chunk; s < end; ++s) {
      std::uint64_t u[4];
      for (auto& v : u) v = rng();
      const auto x = uniform_direction(u[0], u[1]);
      const auto y = uniform_direction(u[2], u[3]);
      acc.add((x - y).norm());
    }
    partials[c] = acc.value();
  });
  return ordered_sum(partials) / static_cast<double>(samples);
}

}  // namespace diamond::metrics
