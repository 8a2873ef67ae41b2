#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>

#include "diamond/metrics.hpp"

namespace diamond::metrics {

double separation(const PointSet<double>& points) {
  const std::size_t n = points.size();
  if (n < 2) throw std::invalid_argument("separation needs at least two points");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a].z() < points[b].z(); });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n; ++a) {
    const auto xa = points[order[a]];
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto xb = points[order[b]];
      // The chord is at least the height difference.
      if (xb.z() - xa.z() >= best) break;
      best = std::min(best, (xa - xb).norm());
    }
  }
  if (!(best > 0.0)) throw DuplicatePointsError("separation is zero: duplicated points");
  return best;
}

NearestByHeight::NearestByHeight(const PointSet<double>& points) : order_(points.size()), sorted_(3, static_cast<Eigen::Index>(points.size())) {
  if (points.empty()) throw std::invalid_argument("nearest-point search over an empty set");
  std::iota(order_.begin(), order_.end(), 0);
  std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return points[a].z() < points[b].z(); });
  z_.resize(points.size());
  for (std::size_t i = 0; i < order_.size(); ++i) {
    sorted_.col(static_cast<Eigen::Index>(i)) = points[order_[i]];
    z_[i] = points[order_[i]].z();
  }
}

double NearestByHeight::distance(const Vec3<double>& q) const {
  const auto start = static_cast<std::size_t>(std::lower_bound(z_.begin(), z_.end(), q.z()) - z_.begin());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = start; i < z_.size() && z_[i] - q.z() < best; ++i) {
    best = std::min(best, (sorted_.col(static_cast<Eigen::Index>(i)) - q).norm());
  }
  for (std::size_t i = start; i > 0 && q.z() - z_[i - 1] < best; --i) {
    best = std::min(best, (sorted_.col(static_cast<Eigen::Index>(i - 1)) - q).norm());
  }
  return best;
}

std::vector<std::size_t> NearestByHeight::nearest(const Vec3<double>& q, std::size_t k) const {
  k = std::min(k, z_.size());
  // Max-heap of (distance, sorted index) holding the k best so far.
  std::vector<std::pair<double, std::size_t>> heap;
  auto offer = [&](std::size_t i) {
    const double d = (sorted_.col(static_cast<Eigen::Index>(i)) - q).norm();
    if (heap.size() < k) {
      heap.emplace_back(d, i);
      std::push_heap(heap.begin(), heap.end());
    } else if (d < heap.front().first) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back() = {d, i};
      std::push_heap(heap.begin(), heap.end());
    }
  };
  auto bound = [&] { return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.front().first; };
  const auto start = static_cast<std::size_t>(std::lower_bound(z_.begin(), z_.end(), q.z()) - z_.begin());
  for (std::size_t i = start; i < z_.size() && z_[i] - q.z() < bound(); ++i) offer(i);
  for (std::size_t i = start; i > 0 && q.z() - z_[i - 1] < bound(); --i) offer(i - 1);
  std::sort_heap(heap.begin(), heap.end());
  std::vector<std::size_t> out;
  out.reserve(heap.size());
  for (const auto& [d, i] : heap) out.push_back(order_[i]);
  return out;
}

CoveringRadius covering_radius(const PointSet<double>& points, std::size_t k, const partition::Partition* partition, unsigned workers) {
  if (points.empty()) throw std::invalid_argument("covering radius of an empty set");
  if (k == 0) k = 10 * points.size();
  const NearestByHeight search(points);
  const auto grid = geometry::spiral_directions<double>(k);
  std::vector<double> dist(k);
  parallel_for(k, workers, [&](std::size_t i) { dist[i] = search.distance(grid.col(static_cast<Eigen::Index>(i))); });

  CoveringRadius out;
  const auto top = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
  out.estimate = dist[top];
  out.farthest_direction = grid.col(static_cast<Eigen::Index>(top));

  // The covering radius is attained at a vertex of the spherical Voronoi
  // diagram, i.e. at the circumcenter of three nearby points. Evaluate those
  // for the best grid directions.
  constexpr std::size_t seeds = 16;
  constexpr std::size_t neighbours = 6;
  std::vector<std::size_t> ranked(k);
  std::iota(ranked.begin(), ranked.end(), 0);
  const std::size_t keep = std::min(seeds, k);
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), [&](std::size_t a, std::size_t b) {
    return dist[a] != dist[b] ? dist[a] > dist[b] : a < b;
  });
  for (std::size_t s = 0; s < keep; ++s) {
    const Vec3<double> y = grid.col(static_cast<Eigen::Index>(ranked[s]));
    const auto near = search.nearest(y, neighbours);
    for (std::size_t a = 0; a < near.size(); ++a) {
      for (std::size_t b = a + 1; b < near.size(); ++b) {
        for (std::size_t c = b + 1; c < near.size(); ++c) {
          const Vec3<double> pa = points[near[a]];
          const Vec3<double> pb = points[near[b]];
          const Vec3<double> pc = points[near[c]];
          const auto cap = geometry::circumcap<double>(pa, pb, pc);
          if (!cap) continue;
          for (const Vec3<double>& v : {cap->center.vec(), Vec3<double>(-cap->center.vec())}) {
            const double d = search.distance(v);
            if (d > out.estimate) {
              out.estimate = d;
              out.farthest_direction = v;
            }
          }
        }
      }
    }
  }
  if (points.size() == 1) {
    out.estimate = std::max(out.estimate, search.distance(-Vec3<double>(points[0])));
  }
  if (partition != nullptr) out.upper_bound = covering_upper_bound(*partition, points);
  return out;
}

double covering_upper_bound(const partition::Partition& partition, const PointSet<double>& points) {
  std::vector<char> covered(partition.size(), 0);
  double bound = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t id = partition::locate(partition, points[i]);
    covered[id] = 1;
    bound = std::max(bound, partition::farthest_distance(partition.region(id), points[i]));
  }
  if (std::find(covered.begin(), covered.end(), 0) != covered.end()) {
    throw std::invalid_argument("covering bound needs a point in every region of the partition");
  }
  return bound;
}

double mesh_ratio(const CoveringRadius& covering, double separation) {
  if (!(separation > 0.0)) throw DuplicatePointsError("mesh ratio undefined for zero separation");
  return covering.upper_bound.value_or(covering.estimate) / separation;
}

}  // namespace diamond::metrics
