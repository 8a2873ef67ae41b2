// Estimates the mean chord W2 by Monte Carlo and the ratio
// (W2 - S_N) / D_L2^2 over a few test sets, D_L2 by exact-in-t quadrature.
#include <algorithm>
#include <cstdio>
#include <random>
#include <vector>

#include <CLI11.hpp>

#include "diamond/ensemble.hpp"
#include "diamond/metrics.hpp"

using namespace diamond;

int main(int argc, char** argv) {
  CLI::App app{"Calibrate the L2 / sum-of-distances constants"};
  std::size_t samples = 4'000'000;
  std::size_t centers = 20000;
  std::uint64_t seed = 2024;
  app.add_option("--samples", samples, "Monte Carlo pairs for W2");
  app.add_option("--centers", centers, "spiral centers for the quadrature");
  app.add_option("--seed", seed, "seed");
  CLI11_PARSE(app, argc, argv);

  const double w2 = metrics::monte_carlo_mean_distance(samples, seed);
  std::printf("W2 monte carlo (%zu pairs): %.6f   pinned: %.6f   difference: %.2e\n", samples, w2, metrics::kMeanDistance,
              w2 - metrics::kMeanDistance);

  std::vector<std::pair<std::string, geometry::PointSet<double>>> sets;
  for (int M = 1; M <= 4; ++M) {
    sets.emplace_back(M == 1 ? "octahedron" : "simple M=" + std::to_string(M), ensemble::generate(ensemble::validate(ensemble::simple_model(M))));
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 5; ++k) {
    geometry::Points3<double> m(3, 20);
    for (int i = 0; i < 20; ++i) {
      const std::uint64_t a = rng();
      const std::uint64_t b = rng();
      m.col(i) = metrics::uniform_direction(a, b);
    }
    sets.emplace_back("random 20 #" + std::to_string(k + 1), geometry::PointSet<double>(m));
  }

  std::vector<double> ratios;
  for (const auto& [name, points] : sets) {
    const double quad = metrics::l2_discrepancy_quadrature(points, centers, 0);
    const double deficit = metrics::kMeanDistance - metrics::mean_pair_distance(points);
    ratios.push_back(deficit / (quad * quad));
    std::printf("%-14s N=%3zu  D_L2=%.6f  (W2 - S_N)=%.6f  ratio=%.5f\n", name.c_str(), points.size(), quad, deficit, ratios.back());
  }
  std::sort(ratios.begin(), ratios.end());
  std::printf("median ratio: %.5f   pinned: %.1f\n", ratios[ratios.size() / 2], metrics::kStolarskyConstant);
  return 0;
}
