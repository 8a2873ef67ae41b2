#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "diamond/metrics.hpp"

namespace diamond::metrics {
namespace {

using geometry::CapMode;

void keep_better(CapDeviation& best, const CapDeviation& candidate) {
  if (candidate.value > best.value) best = candidate;
}

void keep_better(SupDiscrepancy& best, const CapDeviation& candidate) {
  if (candidate.value > best.value) {
    best.value = candidate.value;
    best.witness = candidate.witness;
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(chunk),
                    static_cast<std::uint32_t>(chunk >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

bool is_simple_model(const ensemble::ModelSpec& spec) {
  return spec.alpha.size() == 1 && spec.alpha[0] == 0 && spec.beta[0] == 4 && spec.t.size() == 2 && spec.t[0] == 0 && spec.t[1] == spec.M;
}

Rational polar_closed_form(std::int64_t N, std::int64_t j) {
  return Rational(N - 2 - 4 * j * j + 4 * (N - 1) * j, 2 * N * (N - 1));
}

PolarProfile polar_cap_profile(const ensemble::DiamondModel& model, const PointSet<double>& points) {
  PolarProfile profile;
  const std::int64_t N = model.N();
  profile.closed_form = is_simple_model(model.spec());
  const geometry::UnitVec<double> north(0.0, 0.0, 1.0);
  for (int j = 1; j <= model.M(); ++j) {
    const Rational& z = model.z(j);
    const geometry::SphericalCap<double> cap(north, z.to_double());
    PolarEntry e;
    e.j = j;
    e.count = static_cast<std::int64_t>(geometry::count_in_cap(points, cap, CapMode::closed));
    e.exact = abs(Rational(e.count, N) - (Rational(1) - z) / Rational(2));
    e.value = std::abs(static_cast<double>(e.count) / static_cast<double>(N) - geometry::cap_fraction(z.to_double()));
    if (profile.closed_form) e.closed_form = polar_closed_form(N, j);
    if (profile.entries.empty() || e.exact > profile.max_exact) {
      profile.max_exact = e.exact;
      profile.argmax = profile.entries.size();
    }
    profile.entries.push_back(e);
  }
  profile.max = profile.max_exact.to_double();
  return profile;
}

EquatorialDiscrepancy equatorial_discrepancy(const ensemble::DiamondModel& model, const PointSet<double>& points) {
  EquatorialDiscrepancy out;
  const std::int64_t N = model.N();
  out.value = Rational(model.r(model.M()), 2 * N);
  const geometry::SphericalCap<double> upper(geometry::UnitVec<double>(0.0, 0.0, 1.0), 0.0);
  const auto count = static_cast<std::int64_t>(geometry::count_in_cap(points, upper, CapMode::closed));
  out.counted = abs(Rational(count, N) - Rational(1, 2));
  return out;
}

double cap_deviation(const PointSet<double>& points, const geometry::SphericalCap<double>& cap) {
  const double n = static_cast<double>(points.size());
  const double area = geometry::cap_fraction(cap);
  const double closed = static_cast<double>(geometry::count_in_cap(points, cap, CapMode::closed));
  const double open = static_cast<double>(geometry::count_in_cap(points, cap, CapMode::open));
  return std::max(closed / n - area, area - open / n);
}

CapDeviation sweep_center(const PointSet<double>& points, const Vec3<double>& center) {
  const std::size_t n = points.size();
  const double nd = static_cast<double>(n);
  std::vector<double> dots(n);
  Eigen::Map<Eigen::RowVectorXd>(dots.data(), static_cast<Eigen::Index>(n)).noalias() = center.transpose() * points.matrix();
  std::sort(dots.begin(), dots.end(), std::greater<>());

  const double tol = geometry::kBoundaryTolerance;
  CapDeviation best;
  best.witness.center = center;
  std::size_t closed = 0;
  std::size_t open = 0;
  for (std::size_t g = 0; g < n;) {
    const double v = dots[g];
    while (closed < n && dots[closed] >= v - tol) ++closed;
    while (open < n && dots[open] > v + tol) ++open;
    const double t = std::clamp(v, -1.0, 1.0);
    const double area = geometry::cap_fraction(t);
    const double over = static_cast<double>(closed) / nd - area;
    const double under = area - static_cast<double>(open) / nd;
    if (over > best.value) best = {over, {center, t, CapMode::closed}};
    if (under > best.value) best = {under, {center, t, CapMode::open}};
    g = closed;
  }
  return best;
}

SupDiscrepancy sup_discrepancy_exact(const PointSet<double>& points, const ExactOptions& options) {
  const std::size_t n = points.size();
  if (n > options.max_points) {
    throw SizeLimitError("exact sup discrepancy is limited to " + std::to_string(options.max_points) + " points (got " + std::to_string(n) +
                         "); use the randomized estimate instead");
  }
  if (n == 0) return {};

  struct Partial {
    CapDeviation best;
    std::size_t centers = 0;
  };
  std::vector<Partial> partials(n);
  parallel_for(n, options.workers, [&](std::size_t a) {
    Partial& part = partials[a];
    auto visit = [&](const Vec3<double>& center) {
      keep_better(part.best, sweep_center(points, center));
      keep_better(part.best, sweep_center(points, -center));
      part.centers += 2;
    };
    const Vec3<double> pa = points[a];
    visit(pa);
    for (std::size_t b = a + 1; b < n; ++b) {
      const Vec3<double> pb = points[b];
      const Vec3<double> sum = pa + pb;
      if ((pa - pb).norm() >= geometry::kUnitTolerance && sum.norm() >= geometry::kUnitTolerance) visit(sum.normalized());
      for (std::size_t c = b + 1; c < n; ++c) {
        const auto cap = geometry::circumcap<double>(pa, pb, Vec3<double>(points[c]));
        if (cap) visit(cap->center.vec());
      }
    }
  });

  SupDiscrepancy out;
  for (const Partial& part : partials) {
    keep_better(out, part.best);
    out.centers += part.centers;
  }
  return out;
}

Vec3<double> uniform_direction(std::uint64_t a, std::uint64_t b) {
  const double u = static_cast<double>(a >> 11) * 0x1.0p-53;
  const double v = static_cast<double>(b >> 11) * 0x1.0p-53;
  const double z = 2.0 * u - 1.0;
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = 2.0 * std::numbers::pi * v;
  return {s * std::cos(phi), s * std::sin(phi), z};
}

SupDiscrepancy sup_discrepancy_estimate(const PointSet<double>& points, std::size_t samples, std::uint64_t seed, unsigned workers,
                                        bool seed_poles) {
  SupDiscrepancy out;
  if (points.empty()) return out;
  if (seed_poles) {
    for (const Vec3<double>& pole : {Vec3<double>::UnitZ().eval(), Vec3<double>(-Vec3<double>::UnitZ())}) {
      keep_better(out, sweep_center(points, pole));
      ++out.centers;
    }
  }

  constexpr std::size_t chunk = 256;
  const std::size_t chunks = (samples + chunk - 1) / chunk;
  std::vector<CapDeviation> partials(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    std::mt19937_64 rng(mix_seed(seed, c));
    const std::size_t end = std::min(samples, (c + 1) * chunk);
    for (std::size_t s = c * chunk; s < end; ++s) {
      const std::uint64_t a = rng();
      const std::uint64_t b = rng();
      const Vec3<double> center = uniform_direction(a, b);
      const double t = 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
      const geometry::SphericalCap<double> cap(geometry::UnitVec<double>(center), t);
      const double dev = cap_deviation(points, cap);
      if (dev > partials[c].value) {
        const double closed_gap =
            static_cast<double>(geometry::count_in_cap(points, cap, CapMode::closed)) / static_cast<double>(points.size()) - geometry::cap_fraction(t);
        partials[c] = {dev, {center, t, closed_gap >= dev ? CapMode::closed : CapMode::open}};
      }
      keep_better(partials[c], sweep_center(points, center));
    }
  });
  for (const CapDeviation& p : partials) keep_better(out, p);
  out.centers += samples;
  return out;
}

}  // namespace diamond::metrics
