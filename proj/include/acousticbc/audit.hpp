/// @file audit.hpp
/// @brief Energy-balance, invariant-drift and weak-form residual audits.
#pragma once

#include <string>
#include <vector>

#include "acousticbc/evolve.hpp"

namespace acbc {

struct EnergyAudit {
  double E0 = 0.0;
  // max over sample pairs (s,t) of |E(t) - E(s) + D(s,t)|
  double residual_midpoint = 0.0;   // D from squared step-midpoint vt
  double residual_trapezoid = 0.0;  // D from trapezoid of sampled vt^2
  double max_relative_drift = 0.0;  // max |E(t) - E(0)| / E(0)

  // The residual matching the scheme: midpoint dissipation for the midpoint
  // rule, trapezoid otherwise.
  double residual(Scheme s) const { return s == Scheme::ImplicitMidpoint ? residual_midpoint : residual_trapezoid; }
};

template <class S>
EnergyAudit audit_energy(const TrajectoryRecord<S>& traj);

struct ConservationAudit {
  double constraint_initial = 0.0;
  double constraint_drift = 0.0;  // max |c(t) - c(0)|
  double curl_drift = 0.0;        // max over samples and faces of |defect(t) - defect(0)|
  double horizon = 0.0;

  double curl_drift_per_time() const { return horizon > 0.0 ? curl_drift / horizon : curl_drift; }
};

ConservationAudit audit_conservation(const ModalOperatorSet& ops, const MaterialParams& p,
                                     const PotentialTrajectory& traj);
ConservationAudit audit_conservation(const ModalOperatorSet& ops, const MaterialParams& p,
                                     const LagrangianTrajectory& traj);
ConservationAudit audit_conservation(const ModalOperatorSet& ops, const MaterialParams& p,
                                     const EulerianTrajectory& traj);

// Polynomial in r with coefficients c[k] of r^k.
struct Polynomial {
  std::vector<double> c;

  double operator()(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  Polynomial operator*(const Polynomial& o) const;
};

// sin^4 bump supported on [t0, t1].
struct TimeWindow {
  double t0 = 0.0, t1 = 1.0;

  double operator()(double t) const;
  double d1(double t) const;
};

struct TestFunction {
  std::string name;
  Polynomial profile;
  TimeWindow window;
};

// Admissible profiles for the grid geometry and degree, window over [0, horizon].
std::vector<TestFunction> default_test_family(const ModalOperatorSet& ops, double horizon);

struct WeakResidual {
  std::string identity;
  std::string test;
  double residual = 0.0;
  double scale = 0.0;  // quadrature of the magnitudes of the integrated terms

  double relative() const { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }
};

std::vector<WeakResidual> audit_weak_residual(const ModalOperatorSet& ops, const MaterialParams& p,
                                              const PotentialTrajectory& traj,
                                              const std::vector<TestFunction>& family);
std::vector<WeakResidual> audit_weak_residual(const ModalOperatorSet& ops, const MaterialParams& p,
                                              const LagrangianTrajectory& traj,
                                              const std::vector<TestFunction>& family);
std::vector<WeakResidual> audit_weak_residual(const ModalOperatorSet& ops, const MaterialParams& p,
                                              const EulerianTrajectory& traj,
                                              const std::vector<TestFunction>& family);

}  // namespace acbc
