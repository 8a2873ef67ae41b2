#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "diamond/ensemble.hpp"
#include "diamond/geometry.hpp"
#include "diamond/rational.hpp"

namespace diamond::partition {

enum class RegionKind { north_cap, south_cap, rectangle, equatorial };

const char* to_string(RegionKind kind);

// One cell of the partition: longitudes [phi_lo, phi_hi) times heights
// (h_lo, h_hi]. Caps span the full circle. phi_lo lies in [0, 2pi); phi_hi may
// exceed 2pi.
struct Region {
  RegionKind kind = RegionKind::rectangle;
  int parallel = 0;  // 0 north cap, 1..p collars, p + 1 south cap
  int index = 0;     // position inside the collar
  std::int64_t divisions = 1;
  double phi_lo = 0;
  double phi_hi = 0;
  Rational h_lo;
  Rational h_hi;

  double width() const { return phi_hi - phi_lo; }
};

// Equal-area partition attached to a Diamond model: two polar caps and one
// collar per parallel, collar k split into r_k rectangles.
class Partition {
 public:
  const ensemble::DiamondModel& model() const { return model_; }
  // h_j = 1 - 2 N_j / N for 1 <= j <= M.
  const Rational& h(int j) const { return h_.at(static_cast<std::size_t>(j - 1)); }
  const std::vector<Rational>& heights() const { return h_; }
  const std::vector<Region>& regions() const { return regions_; }
  const Region& region(std::size_t id) const { return regions_.at(id); }
  std::size_t size() const { return regions_.size(); }
  // Id of region `index` in the collar of parallel k (0 and p + 1 are the caps).
  std::size_t region_id(int parallel, std::int64_t index) const;
  // Band boundaries 1 = b_0 > b_1 > ... > b_{2M+1} = -1; band q holds parallel q.
  const std::vector<double>& band_bounds() const { return bounds_; }

 private:
  friend Partition build_partition(const ensemble::DiamondModel& model);

  ensemble::DiamondModel model_;
  std::vector<Rational> h_;
  std::vector<Region> regions_;
  std::vector<std::size_t> first_;
  std::vector<double> bounds_;
};

Partition build_partition(const ensemble::DiamondModel& model);

// Area of a region from its own longitudes and heights.
double region_area(const Region& region);

// Id of the region containing the point. Collars are half-open downward
// (h_lo < z <= h_hi); both poles belong to their caps.
std::size_t locate(const Partition& partition, const geometry::Vec3<double>& point);

struct MatchingReport {
  bool ok = true;
  std::string failure;                      // first violated check
  std::size_t inequalities_checked = 0;
  std::vector<std::size_t> point_to_region;
  std::vector<std::size_t> region_to_point;
};

// Exact interleaving h_{j+1} < z_j < h_j, h_M > 0, recurrence consistency and
// a point <-> region bijection via locate().
MatchingReport verify_matching(const Partition& partition, const geometry::PointSet<double>& points);

struct SideLengths {
  double horizontal_lo = 0;  // arc at the equator-side height h_lo
  double horizontal_hi = 0;  // arc at the pole-side height h_hi
  double vertical = 0;       // geodesic, arccos(h_lo) - arccos(h_hi)
  double diameter = 0;       // chord
};

// Rectangles of the collar of parallel j, 1 <= j <= M (j = M is equatorial).
SideLengths side_lengths(const Partition& partition, int j);

// Chord distance from p to the farthest point of the region.
double farthest_distance(const Region& region, const geometry::Vec3<double>& p);

// Largest chord between two points of the region.
double region_diameter(const Region& region);

// Geodesic radius of the north cap, 2 arcsin(1 / sqrt(N)).
double polar_cap_radius(const Partition& partition);

}  // namespace diamond::partition
