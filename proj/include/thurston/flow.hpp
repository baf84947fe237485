#ifndef THURSTON_FLOW_HPP
#define THURSTON_FLOW_HPP

#include <atomic>
#include <memory>
#include <optional>

#include "thurston/sft.hpp"

namespace thurston {

// Suspension flow over a subshift: the roof assigns a traversal time to each
// edge, so periodic orbits have period = roof sum over the cycle.
class SuspensionFlow {
 public:
  SuspensionFlow(SubshiftGraph base, RoofFunction roof);

  const SubshiftGraph& base() const { return base_; }
  const RoofFunction& roof() const { return roof_; }

  // Write-once cache shared across copies of the flow.
  double cached_entropy_or(double fallback) const;
  void cache_entropy(double h) const;

 private:
  SubshiftGraph base_;
  RoofFunction roof_;
  std::shared_ptr<std::atomic<double>> entropy_cache_;
};

SuspensionFlow scaled_flow(const SuspensionFlow& flow, double c);

// The unique h with P(-h*roof) = 0; topological entropy of the flow.
double flow_entropy(const SuspensionFlow& flow);

// Roof sum over the cycle.
double period(const SuspensionFlow& flow, const Cycle& a);

// Intersection of two flows over the same base against a base measure:
// (int roof2 dm) / (int roof1 dm).
double intersection(const MarkovMeasure& m, const SuspensionFlow& flow1,
                    const SuspensionFlow& flow2);

// Intersection rescaled by the entropy ratio h2/h1; >= 1 at the
// Bowen-Margulis measure of flow1, with equality exactly on projectively
// equivalent pairs.
double renormalized_intersection(const MarkovMeasure& m,
                                 const SuspensionFlow& flow1,
                                 const SuspensionFlow& flow2);

// Base representation of the measure of maximal entropy: equilibrium state
// of -h*roof.
MarkovMeasure bowen_margulis(const SuspensionFlow& flow);

enum class RatioMethod { howard, lawler, brute };

inline const char* ratio_method_name(RatioMethod m) {
  switch (m) {
    case RatioMethod::howard: return "howard";
    case RatioMethod::lawler: return "lawler";
    case RatioMethod::brute: return "brute";
  }
  return "?";
}

struct MaxRatioResult {
  double value = 0.0;
  Cycle cycle;  // attains the value exactly (value is its sum ratio)
  RatioMethod method = RatioMethod::howard;
};

// Maximum over all directed cycles of (numerator sum)/(denominator sum).
// Howard policy iteration with automatic Lawler fallback.
MaxRatioResult max_cycle_ratio(const SubshiftGraph& g,
                               const EdgePotential& numerator,
                               const RoofFunction& denominator);

// Independent route: parametric search on t with positive-cycle detection
// for numerator - t*denominator.
MaxRatioResult max_cycle_ratio_lawler(const SubshiftGraph& g,
                                      const EdgePotential& numerator,
                                      const RoofFunction& denominator);

struct DistanceReport {
  double value = 0.0;
  Cycle optimizing_cycle;
  double entropy_from = 0.0;  // h of the first argument
  double entropy_to = 0.0;    // h of the second argument
  RatioMethod method = RatioMethod::howard;
};

// Asymmetric distance log((h2/h1) * sup_a p2(a)/p1(a)) between flows over
// the same base graph.
DistanceReport dth_flow(const SuspensionFlow& flow1,
                        const SuspensionFlow& flow2);

struct ProjectiveCheck {
  bool equivalent = false;
  double constant = 0.0;  // h1/h2, the projective scaling when equivalent
  std::optional<Cycle> witness;
};

// True iff h2*roof2 - h1*roof1 is a coboundary (zero constant).
ProjectiveCheck projectively_equivalent(const SuspensionFlow& flow1,
                                        const SuspensionFlow& flow2);

// Tangent direction at a flow: an edge potential with zero mean against the
// Bowen-Margulis measure.
struct FlowTangent {
  EdgePotential direction;
  double tangency_residual = 0.0;
};

FlowTangent make_tangent(const SuspensionFlow& flow, EdgePotential direction);
// Subtracts the Bowen-Margulis mean so the tangency constraint holds.
FlowTangent project_to_tangent(const SuspensionFlow& flow,
                               EdgePotential direction);

// sup over invariant measures of (int g dm)/(int roof dm); the one-sided
// derivative of the asymmetric distance along the direction.
double finsler_norm_flow(const SuspensionFlow& flow, const FlowTangent& tangent);

// sqrt of d^2/ds^2 P(-roof + s g) / int roof dm_{-roof}; 5-point stencil at
// step 1e-3, retried at 1e-4 on negative curvature.
double pressure_norm_flow(const SuspensionFlow& flow,
                          const FlowTangent& tangent);

}  // namespace thurston

#endif
