#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curlgs/geometry.hpp"
#include "curlgs/nonlinearity.hpp"

namespace curlgs {

// Structural hypotheses screened by the checker. Power-family specs are
// certified analytically; everything else is screened by sampling, which can
// find violations (with witnesses) but never prove a condition.
enum class ConditionStatus { Certified, SampledPass, Violated };

struct ConditionWitness {
  Vec3 x = Vec3::Zero();
  Vec3 u = Vec3::Zero();
  std::optional<Vec3> v;
  std::optional<double> t;
  // Amount by which the re-evaluated inequality fails at the witness.
  double margin = 0.0;
};

struct ConditionFinding {
  std::string condition;  // "F1" .. "F8"
  ConditionStatus status = ConditionStatus::SampledPass;
  long samples = 0;
  // Sampled constant attached to the condition: the growth constant for F3,
  // the lower-bound constant for F4, the convexity modulus for F6, the
  // Ambrosetti-Rabinowitz constant for F8.
  std::optional<double> estimate;
  std::optional<ConditionWitness> witness;
  std::string note;
};

struct ConditionReport {
  std::vector<ConditionFinding> findings;

  bool all_hold() const;
  const ConditionFinding& finding(std::string_view condition) const;
};

struct SamplerConfig {
  long n_samples = 2000;  // at least 1000
  double radius = 2.0;    // field magnitudes are sampled in (0, radius]
  std::uint64_t seed = 20260816;
};

// Caller-supplied nonlinearity for screening. When the gradient callback is
// absent it is replaced by central finite differences of F. p_hint feeds the
// growth-envelope estimates; theta_hint (when positive) is the claimed
// Ambrosetti-Rabinowitz constant, otherwise p_hint is used.
struct BlackBoxF {
  std::function<double(const Vec3&, const Vec3&)> F;
  std::function<Vec3(const Vec3&, const Vec3&)> f;
  double p_hint = 4.0;
  double theta_hint = 0.0;
};

BlackBoxF as_black_box(const NonlinearitySpec& spec);

// Certified path: power families pass every condition by construction, and
// the report carries their analytic constants. Degenerate specs fail the
// positivity conditions and the report says so with a witness.
ConditionReport check_conditions(const NonlinearitySpec& spec,
                                 const BoxDomain& box,
                                 const SamplerConfig& sampler);

// Sampling path for caller-supplied F.
ConditionReport check_conditions(const BlackBoxF& fn, const BoxDomain& box,
                                 const SamplerConfig& sampler);

// Re-evaluates a violated finding's witness against the same predicate the
// checker used; the result is positive when the violation reproduces, and
// matches the stored witness margin up to re-evaluation rounding.
double reevaluate_witness(const BlackBoxF& fn, const ConditionFinding& finding);

}  // namespace curlgs
