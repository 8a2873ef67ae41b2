#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diamond/geometry.hpp"
#include "diamond/rational.hpp"

namespace diamond::ensemble {

// How the per-parallel rotation phases are chosen.
struct ThetaPolicy {
  enum class Kind { zeros, fixed, seeded_random };

  Kind kind = Kind::zeros;
  std::vector<double> values;  // one per parallel when kind == fixed
  std::uint64_t seed = 0;

  static ThetaPolicy zeros() { return {}; }
  static ThetaPolicy fixed(std::vector<double> v) { return {Kind::fixed, std::move(v), 0}; }
  static ThetaPolicy seeded(std::uint64_t s) { return {Kind::seeded_random, {}, s}; }
};

// Parameters of a Diamond-ensemble model. r(x) = alpha[l] + beta[l] x on
// [t[l], t[l + 1]] for 0 <= l < n, with t.front() == 0 and t.back() == M;
// r is mirrored about x = M.
struct ModelSpec {
  int M = 1;
  std::vector<std::int64_t> t{0, 1};
  std::vector<std::int64_t> alpha{0};
  std::vector<std::int64_t> beta{4};
  ThetaPolicy theta;

  int pieces() const { return static_cast<int>(alpha.size()); }
};

enum class ValidationCode {
  bad_M,
  shape_mismatch,
  alpha1_nonzero,
  beta1_nonpositive,
  negative_coefficient,
  non_monotone_breakpoints,
  discontinuous,
  bad_theta,
};

const char* to_string(ValidationCode code);

class ValidationError : public std::invalid_argument {
 public:
  ValidationError(ValidationCode code, const std::string& what) : std::invalid_argument(what), code_(code) {}
  ValidationCode code() const { return code_; }

 private:
  ValidationCode code_;
};

// A validated model together with its derived sequences. Parallels are
// numbered 1..p = 2M - 1 from north to south.
class DiamondModel {
 public:
  const ModelSpec& spec() const { return spec_; }
  int M() const { return spec_.M; }
  int parallels() const { return 2 * spec_.M - 1; }
  std::int64_t N() const { return N_; }

  std::int64_t r(int j) const { return r_.at(index(j)); }
  // N_j = 1 + sum_{k < j} r_k.
  std::int64_t partial_count(int j) const { return partial_.at(index(j)); }
  const Rational& z(int j) const { return z_.at(index(j)); }
  double theta(int j) const { return theta_.at(index(j)); }

  const std::vector<std::int64_t>& r_values() const { return r_; }
  const std::vector<Rational>& z_values() const { return z_; }
  const std::vector<double>& theta_values() const { return theta_; }

 private:
  friend DiamondModel validate(const ModelSpec& spec);

  std::size_t index(int j) const {
    if (j < 1 || j > parallels()) throw std::out_of_range("parallel index " + std::to_string(j) + " outside 1.." + std::to_string(parallels()));
    return static_cast<std::size_t>(j - 1);
  }

  ModelSpec spec_;
  std::int64_t N_ = 0;
  std::vector<std::int64_t> r_;
  std::vector<std::int64_t> partial_;
  std::vector<Rational> z_;
  std::vector<double> theta_;
};

// Checks every parameter constraint and derives r_j, N_j, N, z_j and theta_j.
// Throws ValidationError.
DiamondModel validate(const ModelSpec& spec);

// n = 1, r_j = 4j. N = 4M^2 + 2.
ModelSpec simple_model(int M, ThetaPolicy theta = ThetaPolicy::zeros());

// The same breakpoint fractions and slopes rescaled to another M; alpha is
// recomputed from continuity. Throws ValidationError when the breakpoints
// collapse at the requested M.
ModelSpec rescale(const ModelSpec& spec, int M);

// Poles plus rotated roots of unity on every parallel, tagged by parallel and
// index (north pole first, south pole last).
geometry::PointSet<double> generate(const DiamondModel& model);

// z_j = 1 - (1 + r_j + 2 sum_{k<j} r_k) / (N - 1).
Rational height_z(const DiamondModel& model, int j);
// z_j = 1 - 2 N_j / (N - 1) - (r_j - 1) / (N - 1).
Rational height_z_from_partial(const DiamondModel& model, int j);
// z_j = (sum_{k>j} r_k - sum_{k<j} r_k) / (1 + sum r_k).
Rational height_z_balanced(const DiamondModel& model, int j);
std::int64_t partial_count(const DiamondModel& model, int j);

// Constants of the growth and side-length bounds for a model family.
struct ModelConstants {
  double A = 0;
  double c = 0;
  double a1 = 0;  // value used downstream
  double a2 = 0;
  double k1 = 0;
  double k2 = 0;
  double d1 = 0;
  double d2 = 0;
  double e1 = 0;
  double e2 = 0;
  double g1 = 0;
  double g2 = 0;
  double c1 = 0;
  double c2 = 0;

  double a1_proof = 0;      // (c^2 - c) / 2, may be <= 0
  double a1_empirical = 0;  // min N / M^2 over the family range
  double a2_empirical = 0;  // max N / M^2 over the family range
  double a1_collar = 0;     // min N_{t_1} / M^2 over the family range
  bool a1_fallback = false;
  double k1_dot = 0;
  double k2_dot = 0;
  double k1_tilde = 0;
  double k2_tilde = 0;
  int range_lo = 1;
  int range_hi = 1;
};

// range_hi <= 0 selects max(M, 1000).
ModelConstants model_constants(const DiamondModel& model, int range_lo = 1, int range_hi = 0);

}  // namespace diamond::ensemble
