#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diamond/ensemble.hpp"
#include "diamond/geometry.hpp"
#include "diamond/parallel.hpp"
#include "diamond/partition.hpp"
#include "diamond/rational.hpp"

namespace diamond::metrics {

using geometry::PointSet;
using geometry::Vec3;

class DuplicatePointsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Pair kernels. Each row i accumulates j > i with compensated summation; rows
// are combined in index order, so the result does not depend on the worker
// count.

namespace detail {

template <typename Scalar, typename Term>
Scalar pair_sum(const PointSet<Scalar>& points, unsigned workers, Term&& term) {
  const std::size_t n = points.size();
  std::vector<Scalar> rows(n, Scalar(0));
  std::vector<char> duplicate(n, 0);
  parallel_for(n, workers, [&](std::size_t i) {
    CompensatedSum<Scalar> acc;
    const auto xi = points[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Scalar d = (xi - points[j]).norm();
      if (!(d > Scalar(0))) {
        duplicate[i] = 1;
        return;
      }
      acc.add(term(d));
    }
    rows[i] = acc.value();
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (duplicate[i]) throw DuplicatePointsError("point " + std::to_string(i) + " is duplicated");
  }
  // Both orderings of every pair.
  return Scalar(2) * ordered_sum(rows);
}

}  // namespace detail

// sum_{i != j} |x_i - x_j|^{-s}
template <typename Scalar>
Scalar riesz_energy(const PointSet<Scalar>& points, Scalar s, unsigned workers = default_workers()) {
  if (!(s > Scalar(0))) throw std::invalid_argument("riesz_energy needs s > 0");
  return detail::pair_sum(points, workers, [s](Scalar d) { return std::pow(d, -s); });
}

// sum_{i != j} log(1 / |x_i - x_j|)
template <typename Scalar>
Scalar log_energy(const PointSet<Scalar>& points, unsigned workers = default_workers()) {
  return detail::pair_sum(points, workers, [](Scalar d) { return -std::log(d); });
}

// sum_{i != j} |x_i - x_j|
template <typename Scalar>
Scalar sum_distances(const PointSet<Scalar>& points, unsigned workers = default_workers()) {
  return detail::pair_sum(points, workers, [](Scalar d) { return d; });
}

// O(N^2) minimum pairwise chord.
template <typename Scalar>
Scalar separation_bruteforce(const PointSet<Scalar>& points, unsigned workers = default_workers()) {
  const std::size_t n = points.size();
  if (n < 2) throw std::invalid_argument("separation needs at least two points");
  std::vector<Scalar> rows(n, std::numeric_limits<Scalar>::infinity());
  parallel_for(n, workers, [&](std::size_t i) {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (std::size_t j = i + 1; j < n; ++j) best = std::min(best, (points[i] - points[j]).norm());
    rows[i] = best;
  });
  const Scalar best = *std::min_element(rows.begin(), rows.end());
  if (!(best > Scalar(0))) throw DuplicatePointsError("separation is zero: duplicated points");
  return best;
}

// Minimum pairwise chord via a sweep over points sorted by height; agrees
// exactly with separation_bruteforce.
double separation(const PointSet<double>& points);

// Nearest-point queries against a fixed set, pruned by height.
class NearestByHeight {
 public:
  explicit NearestByHeight(const PointSet<double>& points);
  double distance(const Vec3<double>& q) const;
  // Indices (into the original set) of the k nearest points, nearest first.
  std::vector<std::size_t> nearest(const Vec3<double>& q, std::size_t k) const;

 private:
  std::vector<double> z_;
  std::vector<std::size_t> order_;
  geometry::Points3<double> sorted_;
};

struct CoveringRadius {
  double estimate = 0;                // attained at farthest_direction, so <= rho
  std::optional<double> upper_bound;  // certified, from the partition
  Vec3<double> farthest_direction = Vec3<double>::UnitZ();
};

// Lower estimate from k spiral directions refined by local ascent; the upper
// bound needs the partition whose regions match the points one to one.
CoveringRadius covering_radius(const PointSet<double>& points, std::size_t k, const partition::Partition* partition = nullptr,
                               unsigned workers = default_workers());

// max over regions of the farthest distance from the region's matched point.
double covering_upper_bound(const partition::Partition& partition, const PointSet<double>& points);

// rho / delta, taking the upper bound for rho when available.
double mesh_ratio(const CoveringRadius& covering, double separation);

// ---------------------------------------------------------------------------
// Cap discrepancies.

struct PolarEntry {
  int j = 0;
  std::int64_t count = 0;               // closed cap through parallel j
  Rational exact;                       // |count / N - (1 - z_j) / 2|
  double value = 0;                     // same in floating point
  std::optional<Rational> closed_form;  // simple model only
};

struct PolarProfile {
  std::vector<PolarEntry> entries;  // j = 1..M
  std::size_t argmax = 0;
  Rational max_exact;
  double max = 0;
  bool closed_form = false;
};

bool is_simple_model(const ensemble::ModelSpec& spec);

// (N - 2 - 4j^2 + 4(N - 1)j) / (2N(N - 1))
Rational polar_closed_form(std::int64_t N, std::int64_t j);

// Caps centered at the north pole bounded by the parallels z_1..z_M.
PolarProfile polar_cap_profile(const ensemble::DiamondModel& model, const PointSet<double>& points);

struct EquatorialDiscrepancy {
  Rational value;    // r_M / (2N)
  Rational counted;  // |#closed upper hemisphere / N - 1/2|
};

EquatorialDiscrepancy equatorial_discrepancy(const ensemble::DiamondModel& model, const PointSet<double>& points);

struct CapWitness {
  Vec3<double> center = Vec3<double>::UnitZ();
  double t = 1;
  geometry::CapMode mode = geometry::CapMode::closed;
};

struct CapDeviation {
  double value = 0;
  CapWitness witness;
};

// sup over t of the deviation for caps centered at `center`: closed counts
// against the area at every break height, open counts likewise.
CapDeviation sweep_center(const PointSet<double>& points, const Vec3<double>& center);

struct SupDiscrepancy {
  double value = 0;
  CapWitness witness;
  std::size_t centers = 0;
};

struct ExactOptions {
  std::size_t max_points = 150;
  unsigned workers = default_workers();
};

// Enumerates circumcaps of all triples, diametral caps of all pairs and caps
// centered at every point and antipode (both orientations), sweeping all
// break heights for each center. O(N^4 log N).
SupDiscrepancy sup_discrepancy_exact(const PointSet<double>& points, const ExactOptions& options = {});

// Random centers (uniform) with a full height sweep each, plus the two poles
// unless seed_poles is false. A lower bound on the sup discrepancy;
// deterministic given the seed.
SupDiscrepancy sup_discrepancy_estimate(const PointSet<double>& points, std::size_t samples, std::uint64_t seed,
                                        unsigned workers = default_workers(), bool seed_poles = true);

// Deviation of one cap: max(closed / N - area, area - open / N).
double cap_deviation(const PointSet<double>& points, const geometry::SphericalCap<double>& cap);

// ---------------------------------------------------------------------------
// L2 cap discrepancy, root mean square over uniform centers and dt / 2.

// Mean chord between independent uniform points of S^2.
inline constexpr double kMeanDistance = 4.0 / 3.0;
// Ratio (kMeanDistance - S_N) / D_L2^2, pinned by tools/calibrate_stolarsky.
inline constexpr double kStolarskyConstant = 8.0;

// S_N = N^{-2} sum_{i,j} |x_i - x_j|.
double mean_pair_distance(const PointSet<double>& points, unsigned workers = default_workers());

double l2_discrepancy_stolarsky(const PointSet<double>& points, unsigned workers = default_workers());

// t_nodes == 0 integrates exactly in t (the count is piecewise constant).
double l2_discrepancy_quadrature(const PointSet<double>& points, std::size_t center_nodes, std::size_t t_nodes,
                                 unsigned workers = default_workers());

// Monte Carlo estimate of the mean chord between uniform points.
double monte_carlo_mean_distance(std::size_t samples, std::uint64_t seed);

// Uniform point on S^2 from two 53-bit uniforms (Archimedes).
Vec3<double> uniform_direction(std::uint64_t a, std::uint64_t b);

// ---------------------------------------------------------------------------

struct Envelope {
  double lower = 0;  // sqrt(N - 2) / N
  double upper = 0;  // (4 + 2 sqrt 2) / sqrt N
};

Envelope simple_model_envelope(std::int64_t N);

struct ReportOptions {
  std::vector<double> riesz_s{1.0};
  std::size_t covering_directions = 0;  // 0: 10 N
  std::size_t exact_max_points = 150;
  bool exact = true;                    // when N <= exact_max_points
  std::size_t estimate_samples = 2000;
  std::uint64_t seed = 1;
  std::size_t quadrature_centers = 0;   // 0 disables the quadrature L2
  std::size_t quadrature_t_nodes = 512;
  unsigned workers = default_workers();
};

struct MetricsReport {
  std::int64_t N = 0;
  double separation = 0;
  double covering_estimate = 0;
  std::optional<double> covering_upper;
  double mesh_ratio = 0;
  std::map<double, double> riesz;
  double log_energy = 0;
  double sum_distances = 0;
  std::optional<SupDiscrepancy> d_sup_exact;
  SupDiscrepancy d_sup_estimate;
  std::optional<double> d_polar_max;
  std::optional<double> d_equatorial;
  double d_l2_stolarsky = 0;
  std::optional<double> d_l2_quadrature;
  std::optional<Envelope> envelope;
  std::optional<ensemble::ModelConstants> constants;
};

// Model-dependent entries (polar, equatorial, covering upper bound,
// constants) are filled when a model is given.
MetricsReport compute_report(const PointSet<double>& points, const ensemble::DiamondModel* model, const ReportOptions& options);

}  // namespace diamond::metrics
