#include <cmath>

#include "diamond/metrics.hpp"

namespace diamond::metrics {

Envelope simple_model_envelope(std::int64_t N) {
  const double n = static_cast<double>(N);
  return {std::sqrt(n - 2.0) / n, (4.0 + 2.0 * std::sqrt(2.0)) / std::sqrt(n)};
}

MetricsReport compute_report(const PointSet<double>& points, const ensemble::DiamondModel* model, const ReportOptions& options) {
  MetricsReport report;
  report.N = static_cast<std::int64_t>(points.size());
  const unsigned workers = options.workers;

  std::optional<partition::Partition> part;
  if (model != nullptr) part = partition::build_partition(*model);

  report.separation = separation(points);
  const CoveringRadius cover = covering_radius(points, options.covering_directions, part ? &*part : nullptr, workers);
  report.covering_estimate = cover.estimate;
  report.covering_upper = cover.upper_bound;
  report.mesh_ratio = mesh_ratio(cover, report.separation);

  for (double s : options.riesz_s) report.riesz[s] = riesz_energy(points, s, workers);
  report.log_energy = log_energy(points, workers);
  report.sum_distances = sum_distances(points, workers);

  if (options.exact && points.size() <= options.exact_max_points) {
    report.d_sup_exact = sup_discrepancy_exact(points, {options.exact_max_points, workers});
  }
  report.d_sup_estimate = sup_discrepancy_estimate(points, options.estimate_samples, options.seed, workers);
  report.d_l2_stolarsky = l2_discrepancy_stolarsky(points, workers);
  if (options.quadrature_centers > 0) {
    report.d_l2_quadrature = l2_discrepancy_quadrature(points, options.quadrature_centers, options.quadrature_t_nodes, workers);
  }

  if (model != nullptr) {
    report.d_polar_max = polar_cap_profile(*model, points).max;
    report.d_equatorial = equatorial_discrepancy(*model, points).value.to_double();
    report.constants = ensemble::model_constants(*model);
    if (is_simple_model(model->spec())) report.envelope = simple_model_envelope(model->N());
  }
  return report;
}

}  // namespace diamond::metrics
