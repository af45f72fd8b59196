/// @file transforms.hpp
/// @brief Maps between the potential, displacement and pressure/velocity models.
///
/// Potentials are recovered up to a constant; the representative is fixed at
/// t = 0 by a zero volume mean and carried forward without re-gauging.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acousticbc/elliptic.hpp"
#include "acousticbc/evolve.hpp"

namespace acbc {

enum class GaugePolicy { ZeroMeanPotential };

// Shifts u by a constant so that int u r^2 dr = 0 (l = 0 only).
Samples apply_gauge(const ModalOperatorSet& ops, Samples u, GaugePolicy g = GaugePolicy::ZeroMeanPotential);

LagrangianModeState map_potential_to_lagrangian(const ModalOperatorSet& ops, const MaterialParams& p,
                                                const PotentialModeState& s);
EulerianModeState map_potential_to_eulerian(const ModalOperatorSet& ops, const MaterialParams& p,
                                            const PotentialModeState& s);
EulerianModeState map_lagrangian_to_eulerian(const ModalOperatorSet& ops, const MaterialParams& p,
                                             const LagrangianModeState& s);

// Trajectory inverses. The time integrals use the trapezoid rule on
// consecutive step nodes, which reproduces the implicit-midpoint update; other
// sampling throws QuadratureOrderMismatch. If postcheck is given it receives
// the max defect of the identity that must hold at every sample.
PotentialTrajectory map_lagrangian_to_potential(const ModalOperatorSet& ops, const MaterialParams& p,
                                                const LagrangianTrajectory& traj,
                                                GaugePolicy g = GaugePolicy::ZeroMeanPotential,
                                                double* postcheck = nullptr);
PotentialTrajectory map_eulerian_to_potential(const ModalOperatorSet& ops, const MaterialParams& p,
                                              const EulerianTrajectory& traj,
                                              GaugePolicy g = GaugePolicy::ZeroMeanPotential,
                                              double* postcheck = nullptr);
LagrangianTrajectory map_eulerian_to_lagrangian(const ModalOperatorSet& ops, const MaterialParams& p,
                                                const EulerianTrajectory& traj, double* postcheck = nullptr);

// Pointwise maps applied along a trajectory.
LagrangianTrajectory map_potential_to_lagrangian(const ModalOperatorSet& ops, const MaterialParams& p,
                                                 const PotentialTrajectory& traj);
EulerianTrajectory map_potential_to_eulerian(const ModalOperatorSet& ops, const MaterialParams& p,
                                             const PotentialTrajectory& traj);
EulerianTrajectory map_lagrangian_to_eulerian(const ModalOperatorSet& ops, const MaterialParams& p,
                                              const LagrangianTrajectory& traj);

enum class EquivalenceKind { PcL, PE, EcL };

struct EquivalenceReport {
  EquivalenceKind kind = EquivalenceKind::PE;
  double tol = 0.0;
  bool pass = true;
  std::vector<Residual> residuals;  // max-abs per equation
};

EquivalenceReport data_equivalence(const ModalOperatorSet& ops, const MaterialParams& p,
                                   const PotentialModeState& a, const LagrangianModeState& b,
                                   std::optional<double> tol = std::nullopt);
EquivalenceReport data_equivalence(const ModalOperatorSet& ops, const MaterialParams& p,
                                   const PotentialModeState& a, const EulerianModeState& b,
                                   std::optional<double> tol = std::nullopt);
EquivalenceReport data_equivalence(const ModalOperatorSet& ops, const MaterialParams& p,
                                   const EulerianModeState& a, const LagrangianModeState& b,
                                   std::optional<double> tol = std::nullopt);

// Relative discrete L2 distance between trajectories with matching samples,
// max over time of ||a - b|| / max over time of ||b||. Potentials are compared
// after removing one constant (the volume-mean difference at t = 0) when
// mod_constant is set.
double trajectory_discrepancy(const ModalOperatorSet& ops, const PotentialTrajectory& a,
                              const PotentialTrajectory& b, bool mod_constant);
double trajectory_discrepancy(const ModalOperatorSet& ops, const LagrangianTrajectory& a,
                              const LagrangianTrajectory& b);
double trajectory_discrepancy(const ModalOperatorSet& ops, const EulerianTrajectory& a,
                              const EulerianTrajectory& b);

}  // namespace acbc
