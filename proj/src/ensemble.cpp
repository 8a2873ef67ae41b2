#include "diamond/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace diamond::ensemble {
namespace {

void require(bool ok, ValidationCode code, const std::string& what) {
  if (!ok) throw ValidationError(code, what);
}

// r_j for 1 <= j <= M from the piecewise rule.
std::vector<std::int64_t> north_counts(const ModelSpec& spec) {
  std::vector<std::int64_t> r(static_cast<std::size_t>(spec.M));
  std::size_t piece = 0;
  for (int j = 1; j <= spec.M; ++j) {
    while (piece + 1 < spec.alpha.size() && j > spec.t[piece + 1]) ++piece;
    r[static_cast<std::size_t>(j - 1)] = spec.alpha[piece] + spec.beta[piece] * j;
  }
  return r;
}

void check_spec(const ModelSpec& spec) {
  require(spec.M >= 1, ValidationCode::bad_M, "M must be at least 1");
  const std::size_t n = spec.alpha.size();
  require(n >= 1 && spec.beta.size() == n && spec.t.size() == n + 1, ValidationCode::shape_mismatch,
          "expected n pieces with n alphas, n betas and n + 1 breakpoints");
  require(spec.alpha[0] == 0, ValidationCode::alpha1_nonzero, "alpha_1 must be 0");
  require(spec.beta[0] > 0, ValidationCode::beta1_nonpositive, "beta_1 must be positive");
  for (std::size_t l = 0; l < n; ++l) {
    require(spec.alpha[l] >= 0 && spec.beta[l] >= 0, ValidationCode::negative_coefficient,
            "alpha_" + std::to_string(l + 1) + " and beta_" + std::to_string(l + 1) + " must be non-negative");
  }
  require(spec.t.front() == 0 && spec.t.back() == spec.M, ValidationCode::non_monotone_breakpoints,
          "breakpoints must start at 0 and end at M");
  for (std::size_t l = 0; l < n; ++l) {
    require(spec.t[l] < spec.t[l + 1], ValidationCode::non_monotone_breakpoints, "breakpoints must be strictly increasing");
  }
  for (std::size_t l = 0; l + 1 < n; ++l) {
    const std::int64_t x = spec.t[l + 1];
    require(spec.alpha[l] + spec.beta[l] * x == spec.alpha[l + 1] + spec.beta[l + 1] * x, ValidationCode::discontinuous,
            "r(x) is discontinuous at breakpoint t_" + std::to_string(l + 1) + " = " + std::to_string(x));
  }
}

std::vector<double> thetas(const ThetaPolicy& policy, int p) {
  std::vector<double> out(static_cast<std::size_t>(p), 0.0);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (policy.kind) {
    case ThetaPolicy::Kind::zeros:
      break;
    case ThetaPolicy::Kind::fixed:
      require(policy.values.size() == out.size(), ValidationCode::bad_theta,
              "fixed theta list needs one value per parallel (" + std::to_string(p) + ")");
      for (std::size_t j = 0; j < out.size(); ++j) {
        require(policy.values[j] >= 0.0 && policy.values[j] < two_pi, ValidationCode::bad_theta, "theta values must lie in [0, 2pi)");
        out[j] = policy.values[j];
      }
      break;
    case ThetaPolicy::Kind::seeded_random: {
      // Top 53 bits of mt19937_64 so the phases do not depend on the
      // standard library's distribution implementation.
      std::mt19937_64 rng(policy.seed);
      for (double& th : out) th = two_pi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
      break;
    }
  }
  return out;
}

}  // namespace

const char* to_string(ValidationCode code) {
  switch (code) {
    case ValidationCode::bad_M: return "bad_M";
    case ValidationCode::shape_mismatch: return "shape_mismatch";
    case ValidationCode::alpha1_nonzero: return "alpha1_nonzero";
    case ValidationCode::beta1_nonpositive: return "beta1_nonpositive";
    case ValidationCode::negative_coefficient: return "negative_coefficient";
    case ValidationCode::non_monotone_breakpoints: return "non_monotone_breakpoints";
    case ValidationCode::discontinuous: return "discontinuous";
    case ValidationCode::bad_theta: return "bad_theta";
  }
  return "unknown";
}

DiamondModel validate(const ModelSpec& spec) {
  check_spec(spec);
  DiamondModel model;
  model.spec_ = spec;
  const int M = spec.M;
  const int p = 2 * M - 1;

  const auto north = north_counts(spec);
  model.r_.resize(static_cast<std::size_t>(p));
  for (int j = 1; j <= p; ++j) {
    const int mirror = j <= M ? j : 2 * M - j;
    model.r_[static_cast<std::size_t>(j - 1)] = north[static_cast<std::size_t>(mirror - 1)];
  }

  std::int64_t running = 1;
  model.partial_.resize(static_cast<std::size_t>(p));
  for (std::size_t k = 0; k < model.r_.size(); ++k) {
    model.partial_[k] = running;
    running += model.r_[k];
  }
  model.N_ = running + 1;

  model.z_.resize(static_cast<std::size_t>(p));
  for (int j = 1; j <= p; ++j) model.z_[static_cast<std::size_t>(j - 1)] = height_z(model, j);
  model.theta_ = thetas(spec.theta, p);
  return model;
}

ModelSpec simple_model(int M, ThetaPolicy theta) {
  ModelSpec spec;
  spec.M = M;
  spec.t = {0, M};
  spec.alpha = {0};
  spec.beta = {4};
  spec.theta = std::move(theta);
  return spec;
}

ModelSpec rescale(const ModelSpec& spec, int M) {
  require(M >= 1, ValidationCode::bad_M, "M must be at least 1");
  require(spec.M >= 1 && !spec.alpha.empty() && spec.t.size() == spec.alpha.size() + 1 && spec.beta.size() == spec.alpha.size(),
          ValidationCode::shape_mismatch, "cannot rescale a malformed spec");
  ModelSpec out = spec;
  out.M = M;
  const std::size_t n = spec.alpha.size();
  out.t.front() = 0;
  out.t.back() = M;
  for (std::size_t l = 1; l < n; ++l) {
    out.t[l] = static_cast<std::int64_t>(std::llround(static_cast<double>(spec.t[l]) * M / spec.M));
  }
  for (std::size_t l = 0; l < n; ++l) {
    require(out.t[l] < out.t[l + 1], ValidationCode::non_monotone_breakpoints,
            "breakpoints collapse when rescaled to M = " + std::to_string(M));
  }
  out.alpha[0] = 0;
  for (std::size_t l = 0; l + 1 < n; ++l) out.alpha[l + 1] = out.alpha[l] + (out.beta[l] - out.beta[l + 1]) * out.t[l + 1];
  if (out.theta.kind == ThetaPolicy::Kind::fixed) out.theta = ThetaPolicy::zeros();
  return out;
}

geometry::PointSet<double> generate(const DiamondModel& model) {
  const auto n = static_cast<Eigen::Index>(model.N());
  geometry::Points3<double> xyz(3, n);
  std::vector<geometry::PointTag> tags;
  tags.reserve(static_cast<std::size_t>(n));

  xyz.col(0) << 0.0, 0.0, 1.0;
  tags.push_back({0, 0});
  Eigen::Index col = 1;
  for (int j = 1; j <= model.parallels(); ++j) {
    const double z = model.z(j).to_double();
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const std::int64_t rj = model.r(j);
    for (std::int64_t i = 0; i < rj; ++i) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(rj) + model.theta(j);
      xyz.col(col++) << s * std::cos(phi), s * std::sin(phi), z;
      tags.push_back({j, static_cast<int>(i)});
    }
  }
  xyz.col(col) << 0.0, 0.0, -1.0;
  tags.push_back({model.parallels() + 1, 0});
  return geometry::PointSet<double>(std::move(xyz), std::move(tags));
}

Rational height_z(const DiamondModel& model, int j) {
  const std::int64_t before = model.partial_count(j) - 1;
  return Rational(1) - Rational(1 + model.r(j) + 2 * before, model.N() - 1);
}

Rational height_z_from_partial(const DiamondModel& model, int j) {
  const Rational denom(model.N() - 1);
  return Rational(1) - Rational(2 * model.partial_count(j)) / denom - Rational(model.r(j) - 1) / denom;
}

Rational height_z_balanced(const DiamondModel& model, int j) {
  std::int64_t above = 0;
  std::int64_t below = 0;
  std::int64_t total = 0;
  for (int k = 1; k <= model.parallels(); ++k) {
    total += model.r(k);
    if (k < j) above += model.r(k);
    if (k > j) below += model.r(k);
  }
  return Rational(below - above, 1 + total);
}

std::int64_t partial_count(const DiamondModel& model, int j) { return model.partial_count(j); }

ModelConstants model_constants(const DiamondModel& model, int range_lo, int range_hi) {
  const ModelSpec& spec = model.spec();
  const int M = spec.M;
  ModelConstants k;
  k.range_lo = std::max(1, range_lo);
  k.range_hi = range_hi > 0 ? range_hi : std::max(M, 1000);

  double A = 2.0;
  for (std::size_t l = 0; l < spec.alpha.size(); ++l) {
    A = std::max(A, static_cast<double>(spec.beta[l]));
    A = std::max(A, static_cast<double>(spec.alpha[l]) / M);
  }
  k.A = A;
  k.c = static_cast<double>(spec.t[1]) / M;
  k.a2 = 4.0 * A;
  k.a1_proof = (k.c * k.c - k.c) / 2.0;

  // Sharp constants of the family M' -> rescale(spec, M').
  k.a1_empirical = INFINITY;
  k.a2_empirical = 0.0;
  k.a1_collar = INFINITY;
  for (int m = k.range_lo; m <= k.range_hi; ++m) {
    ModelSpec s;
    try {
      s = m == M ? spec : rescale(spec, m);
      check_spec(s);
    } catch (const ValidationError&) {
      continue;
    }
    const auto r = north_counts(s);
    std::int64_t n_total = 2 - r.back();
    for (std::int64_t v : r) n_total += 2 * v;
    std::int64_t n_t1 = 1;
    for (std::int64_t j = 1; j < s.t[1]; ++j) n_t1 += r[static_cast<std::size_t>(j - 1)];
    const double m2 = static_cast<double>(m) * m;
    k.a1_empirical = std::min(k.a1_empirical, static_cast<double>(n_total) / m2);
    k.a2_empirical = std::max(k.a2_empirical, static_cast<double>(n_total) / m2);
    k.a1_collar = std::min(k.a1_collar, static_cast<double>(n_t1) / m2);
  }
  if (!std::isfinite(k.a1_empirical)) throw std::invalid_argument("model family has no valid member in the requested M range");

  k.a1_fallback = !(k.a1_proof > 0.0);
  k.a1 = k.a1_fallback ? k.a1_empirical : k.a1_proof;
  const double a1_for_collar = k.a1_fallback ? k.a1_collar : k.a1_proof;
  if (!(k.a1 > 0.0) || !(a1_for_collar > 0.0)) throw std::invalid_argument("degenerate model: a1 is not positive");

  const double b1 = static_cast<double>(spec.beta[0]);
  // 1 / (2 beta_1^2) bounds N_j from below only for beta_1 >= 2; beta_1 = 1
  // needs the smaller 1 / 4.
  k.k1_dot = spec.beta[0] >= 2 ? 1.0 / (2.0 * b1 * b1) : 1.0 / (4.0 * b1 * b1);
  k.k2_dot = 1.0;
  k.k1_tilde = a1_for_collar / (4.0 * A * A);
  k.k2_tilde = k.a2 / (k.c * k.c);
  k.k1 = std::min(k.k1_tilde, k.k1_dot);
  k.k2 = std::max(k.k2_tilde, k.k2_dot);

  constexpr double pi = std::numbers::pi;
  k.d1 = 2.0 * std::sqrt(2.0) * pi * std::sqrt(k.k1);
  k.d2 = 4.0 * pi * std::sqrt(k.k2);
  // Vertical sides: arccos has slope at least 1, and at most 1 / sin(colatitude)
  // where the top horizontal side already controls sin(colatitude).
  k.e2 = 4.0 * pi / k.d1;
  k.e1 = std::min(1.0 / std::sqrt(k.k2 + 1.0), 2.0 * k.c * std::sqrt(k.a1) / k.a2);
  k.g1 = 2.0 * k.e1 / pi;
  k.g2 = std::sqrt(k.d2 * k.d2 + k.e2 * k.e2);
  k.c1 = k.c / (2.0 * std::sqrt(k.a2));
  k.c2 = 8.0 / std::sqrt(k.a1) + 2.0 * pi / k.d1;
  return k;
}

}  // namespace diamond::ensemble
