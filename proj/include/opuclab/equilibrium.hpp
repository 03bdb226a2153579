#ifndef OPUCLAB_EQUILIBRIUM_HPP
#define OPUCLAB_EQUILIBRIUM_HPP

#include <optional>
#include <vector>

#include "opuclab/potential.hpp"

namespace opuclab {

struct SupportArc {
  double theta = 0;
  bool whole_circle = false;
};

// Edge function P(lam) = int_{-theta}^{theta} [(V(cos mu))' - (V(cos lam))'] /
// sin((mu-lam)/2) * dmu / chi(mu). Smooth and strictly positive on the arc
// under the one-cut conditions.
double compute_P(const Potential& p, double theta, double lam);

// Arc density (1/4pi^2) chi(lam) P(lam) inside [-theta, theta], 0 outside.
double rho_arc(const Potential& p, double theta, double lam);

// Whole-circle density 1/2pi + (1/4pi^2) int cot((lam-mu)/2)
// [(V(cos lam))' - (V(cos mu))'] dmu.
double rho_whole_circle(const Potential& p, double lam);

class EquilibriumMeasure {
 public:
  EquilibriumMeasure(Potential p, SupportArc arc);

  const SupportArc& arc() const { return arc_; }
  double theta() const { return arc_.theta; }
  bool whole_circle() const { return arc_.whole_circle; }
  const Potential& potential() const { return pot_; }

  double P_at(double lam) const;
  double rho_at(double lam) const;
  // Effective potential u(lam) = V(cos lam) - 2 int log|e^{i lam} - e^{i mu}| rho.
  double u_at(double lam) const;

  double P_theta() const { return P_theta_; }
  // Arc constants cos^2(theta/2), cos(theta/2) sin(theta/2), sin^2(theta/2).
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

  double mass() const;

 private:
  Potential pot_;
  SupportArc arc_;
  double P_theta_, a_, b_, c_;
};

// Finds theta in (0, pi) with unit arc mass by bisection; falls back to the
// whole-circle branch when the mass stays below 1. Throws NO_ARC_SOLUTION if
// the mass function is not monotone-bracketing, NEGATIVE_DENSITY if the
// resulting density dips below -1e-8 inside the arc.
EquilibriumMeasure solve_support(const Potential& p);

struct EffectivePotential {
  const EquilibriumMeasure* measure;
  double u_min;

  double at(double lam) const { return measure->u_at(lam); }
};

EffectivePotential effective_potential(const EquilibriumMeasure& m);

struct ConditionReport {
  bool whole_circle = false;
  bool arc_checks_skipped = false;
  double rho_min = 0;              // over the interior grid
  bool rho_positive = false;       // C2 first part
  double edge_exponent_right = 0;  // log-log fit near +theta
  double edge_exponent_left = 0;
  bool edge_exponent_ok = false;  // both in [0.45, 0.55]
  double u_interior_spread = 0;   // max u - min u inside the support
  double u_exterior_margin = 0;   // min over exterior of u - u_min
  bool u_minimality_ok = false;
  bool all_ok() const;
};

ConditionReport check_conditions(const Potential& p, const EquilibriumMeasure& m);

}  // namespace opuclab

#endif
