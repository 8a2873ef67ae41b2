#include "diamond/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace diamond::partition {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

// sqrt(1 - h^2) without cancellation near the poles.
double ring_radius(const Rational& h) {
  const Rational q = (Rational(1) - h) * (Rational(1) + h);
  return std::sqrt(std::max(0.0, q.to_double()));
}

// Colatitude arccos(h), evaluated as 2 asin(sqrt((1 - h) / 2)).
double colatitude(const Rational& h) {
  const double half = ((Rational(1) - h) / Rational(2)).to_double();
  return 2.0 * std::asin(std::sqrt(std::clamp(half, 0.0, 1.0)));
}

geometry::Vec3<double> on_sphere(double phi, double colat) {
  const double s = std::sin(colat);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(colat)};
}

geometry::Vec3<double> on_sphere(double phi, const Rational& h) {
  const double s = ring_radius(h);
  return {s * std::cos(phi), s * std::sin(phi), h.to_double()};
}

// Longitude bounds, caps covering the full circle.
std::pair<double, double> longitudes(const Region& region) {
  if (region.kind == RegionKind::north_cap || region.kind == RegionKind::south_cap) return {0.0, kTwoPi};
  return {region.phi_lo, region.phi_hi};
}

std::vector<geometry::Vec3<double>> corners(const Region& region) {
  const auto [lo, hi] = longitudes(region);
  return {on_sphere(lo, region.h_lo), on_sphere(lo, region.h_hi), on_sphere(hi, region.h_lo), on_sphere(hi, region.h_hi)};
}

}  // namespace

const char* to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::north_cap: return "north_cap";
    case RegionKind::south_cap: return "south_cap";
    case RegionKind::rectangle: return "rectangle";
    case RegionKind::equatorial: return "equatorial";
  }
  return "unknown";
}

std::size_t Partition::region_id(int parallel, std::int64_t index) const {
  const int p = model_.parallels();
  if (parallel < 0 || parallel > p + 1) throw std::out_of_range("parallel index out of range");
  if (parallel == 0) return 0;
  if (parallel == p + 1) return regions_.size() - 1;
  const std::int64_t r = model_.r(parallel);
  index %= r;
  if (index < 0) index += r;
  return first_[static_cast<std::size_t>(parallel)] + static_cast<std::size_t>(index);
}

Partition build_partition(const ensemble::DiamondModel& model) {
  Partition part;
  part.model_ = model;
  const int M = model.M();
  const int p = model.parallels();
  const std::int64_t N = model.N();

  part.h_.reserve(static_cast<std::size_t>(M));
  for (int j = 1; j <= M; ++j) part.h_.push_back(Rational(1) - Rational(2 * model.partial_count(j), N));

  // Height interval of every band, north cap first.
  std::vector<Rational> bounds;
  bounds.reserve(static_cast<std::size_t>(2 * M + 2));
  bounds.push_back(Rational(1));
  for (int j = 1; j <= M; ++j) bounds.push_back(part.h(j));
  for (int j = M; j >= 1; --j) bounds.push_back(-part.h(j));
  bounds.push_back(Rational(-1));
  part.bounds_.reserve(bounds.size());
  for (const auto& b : bounds) part.bounds_.push_back(b.to_double());

  part.regions_.reserve(static_cast<std::size_t>(N));
  part.first_.assign(static_cast<std::size_t>(p + 2), 0);

  Region north;
  north.kind = RegionKind::north_cap;
  north.parallel = 0;
  north.phi_hi = kTwoPi;
  north.h_lo = bounds[1];
  north.h_hi = bounds[0];
  part.regions_.push_back(north);

  for (int k = 1; k <= p; ++k) {
    const std::int64_t r = model.r(k);
    const double width = kTwoPi / static_cast<double>(r);
    part.first_[static_cast<std::size_t>(k)] = part.regions_.size();
    for (std::int64_t i = 0; i < r; ++i) {
      Region reg;
      reg.kind = k == M ? RegionKind::equatorial : RegionKind::rectangle;
      reg.parallel = k;
      reg.index = static_cast<int>(i);
      reg.divisions = r;
      reg.phi_lo = wrap_angle(width * static_cast<double>(i) + kPi / static_cast<double>(r) + model.theta(k));
      reg.phi_hi = reg.phi_lo + width;
      reg.h_lo = bounds[static_cast<std::size_t>(k + 1)];
      reg.h_hi = bounds[static_cast<std::size_t>(k)];
      part.regions_.push_back(reg);
    }
  }

  Region south;
  south.kind = RegionKind::south_cap;
  south.parallel = p + 1;
  south.phi_hi = kTwoPi;
  south.h_lo = bounds.back();
  south.h_hi = bounds[bounds.size() - 2];
  part.first_[static_cast<std::size_t>(p + 1)] = part.regions_.size();
  part.regions_.push_back(south);
  return part;
}

double region_area(const Region& region) {
  const double dh = (region.h_hi - region.h_lo).to_double();
  const auto [lo, hi] = longitudes(region);
  const double width = region.kind == RegionKind::rectangle || region.kind == RegionKind::equatorial
                           ? kTwoPi / static_cast<double>(region.divisions)
                           : hi - lo;
  return width * dh;
}

std::size_t locate(const Partition& partition, const geometry::Vec3<double>& point) {
  const double z = point.z();
  const auto& b = partition.band_bounds();
  // First band whose lower bound lies strictly below z.
  const auto it = std::upper_bound(b.begin() + 1, b.end(), z, [](double value, double bound) { return value > bound; });
  int band = static_cast<int>(std::distance(b.begin(), it)) - 1;
  const int p = partition.model().parallels();
  band = std::clamp(band, 0, p + 1);
  if (band == 0 || band == p + 1) return partition.region_id(band, 0);

  const auto& model = partition.model();
  const std::int64_t r = model.r(band);
  const double width = kTwoPi / static_cast<double>(r);
  const double phi = std::atan2(point.y(), point.x());
  const double offset = wrap_angle(phi - model.theta(band) - kPi / static_cast<double>(r));
  auto index = static_cast<std::int64_t>(std::floor(offset / width));
  return partition.region_id(band, std::clamp<std::int64_t>(index, 0, r - 1));
}

MatchingReport verify_matching(const Partition& partition, const geometry::PointSet<double>& points) {
  MatchingReport report;
  const auto& model = partition.model();
  const int M = model.M();
  const int p = model.parallels();
  const std::int64_t N = model.N();
  auto fail = [&](const std::string& what) {
    if (report.ok) {
      report.ok = false;
      report.failure = what;
    }
  };

  // Recurrence h_1 = 1 - 2/N, h_{j+1} = h_j - 2 r_j / N against the explicit form.
  Rational h = Rational(1) - Rational(2, N);
  for (int j = 1; j <= M; ++j) {
    ++report.inequalities_checked;
    if (h != partition.h(j)) fail("recurrence and explicit h_" + std::to_string(j) + " differ");
    h -= Rational(2 * model.r(j), N);
  }
  ++report.inequalities_checked;
  if (partition.h(M) != Rational(model.r(M), N)) fail("h_M != r_M / N");
  ++report.inequalities_checked;
  if (!(partition.h(M) > Rational(0))) fail("h_M is not positive");

  for (int k = 1; k <= p; ++k) {
    const Region& reg = partition.region(partition.region_id(k, 0));
    const Rational& z = model.z(k);
    report.inequalities_checked += 2;
    if (!(reg.h_lo < z && z < reg.h_hi)) {
      fail("interleaving fails at parallel " + std::to_string(k) + ": z = " + z.to_string() + " not in (" + reg.h_lo.to_string() + ", " +
           reg.h_hi.to_string() + ")");
    }
  }

  if (points.size() != static_cast<std::size_t>(N)) fail("point count " + std::to_string(points.size()) + " differs from N = " + std::to_string(N));
  report.point_to_region.assign(points.size(), 0);
  constexpr std::size_t unmatched = static_cast<std::size_t>(-1);
  report.region_to_point.assign(partition.size(), unmatched);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t id = locate(partition, points[i]);
    report.point_to_region[i] = id;
    if (report.region_to_point[id] != unmatched) {
      fail("region " + std::to_string(id) + " holds points " + std::to_string(report.region_to_point[id]) + " and " + std::to_string(i));
    } else {
      report.region_to_point[id] = i;
    }
    const auto& tag = points.tag(i);
    if (tag.parallel >= 0 && partition.region(id).parallel != tag.parallel) {
      fail("point " + std::to_string(i) + " of parallel " + std::to_string(tag.parallel) + " located in band " +
           std::to_string(partition.region(id).parallel));
    }
  }
  for (std::size_t id = 0; id < partition.size(); ++id) {
    if (report.region_to_point[id] == unmatched) fail("region " + std::to_string(id) + " contains no point");
  }
  return report;
}

SideLengths side_lengths(const Partition& partition, int j) {
  const int M = partition.model().M();
  if (j < 1 || j > M) throw std::out_of_range("collar index " + std::to_string(j) + " outside 1.." + std::to_string(M));
  const Region& reg = partition.region(partition.region_id(j, 0));
  const double r = static_cast<double>(reg.divisions);
  SideLengths s;
  s.horizontal_lo = kTwoPi * ring_radius(reg.h_lo) / r;
  s.horizontal_hi = kTwoPi * ring_radius(reg.h_hi) / r;
  s.vertical = colatitude(reg.h_lo) - colatitude(reg.h_hi);
  s.diameter = region_diameter(reg);
  return s;
}

double farthest_distance(const Region& region, const geometry::Vec3<double>& p) {
  const auto [lo, hi] = longitudes(region);
  const double phi_p = std::atan2(p.y(), p.x());
  const double colat_p = std::acos(std::clamp(p.z(), -1.0, 1.0));

  // The farthest longitude does not depend on the height.
  auto separation = [&](double phi) {
    const double d = wrap_angle(phi - phi_p);
    return d > kPi ? kTwoPi - d : d;
  };
  double best_phi = lo;
  double best_sep = separation(lo);
  if (separation(hi) > best_sep) {
    best_phi = hi;
    best_sep = separation(hi);
  }
  const double opposite = lo + wrap_angle(phi_p + kPi - lo);
  if (opposite <= hi) {
    best_phi = opposite;
    best_sep = kPi;
  }

  // Along that meridian <x, p> = R cos(colat - colat0); its minimum is at an
  // end of the colatitude range or at colat0 + pi.
  const double top = colatitude(region.h_hi);
  const double bottom = colatitude(region.h_lo);
  std::vector<double> colats{top, bottom};
  const double colat0 = std::atan2(std::sin(colat_p) * std::cos(best_sep), std::cos(colat_p));
  const double trough = colat0 + kPi;
  if (trough > top && trough < bottom) colats.push_back(trough);

  double best = 0.0;
  for (double c : colats) best = std::max(best, (on_sphere(best_phi, c) - p).norm());
  // Exact heights at the ends avoid a round trip through the colatitude.
  best = std::max(best, (on_sphere(best_phi, region.h_hi) - p).norm());
  best = std::max(best, (on_sphere(best_phi, region.h_lo) - p).norm());
  return best;
}

double region_diameter(const Region& region) {
  if (region.kind == RegionKind::north_cap || region.kind == RegionKind::south_cap) {
    const Rational& rim = region.kind == RegionKind::north_cap ? region.h_lo : region.h_hi;
    const bool small = region.kind == RegionKind::north_cap ? rim >= Rational(0) : rim <= Rational(0);
    return small ? 2.0 * ring_radius(rim) : 2.0;
  }
  auto pts = corners(region);
  if (region.divisions < 4) {
    // Wide cells: the farthest pair need not be a corner pair.
    constexpr int samples = 64;
    const auto [lo, hi] = longitudes(region);
    const double top = colatitude(region.h_hi);
    const double bottom = colatitude(region.h_lo);
    for (int s = 0; s <= samples; ++s) {
      const double u = static_cast<double>(s) / samples;
      pts.push_back(on_sphere(lo + u * (hi - lo), top));
      pts.push_back(on_sphere(lo + u * (hi - lo), bottom));
      pts.push_back(on_sphere(lo, top + u * (bottom - top)));
      pts.push_back(on_sphere(hi, top + u * (bottom - top)));
    }
  }
  double best = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) best = std::max(best, (pts[a] - pts[b]).norm());
  }
  return best;
}

double polar_cap_radius(const Partition& partition) { return colatitude(partition.h(1)); }

}  // namespace diamond::partition
