/// @file evolve.hpp
/// @brief Time integration of the per-mode linear systems and trajectory records.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "acousticbc/eulerian.hpp"
#include "acousticbc/lagrangian.hpp"
#include "acousticbc/potential.hpp"

namespace acbc {

enum class ModelTag { P, Pc, L, E, Ec };
enum class Scheme { ImplicitMidpoint, ExplicitRK4 };

const char* to_string(ModelTag t);
const char* to_string(Scheme s);
ModelTag parse_model_tag(const std::string& s);
Scheme parse_scheme(const std::string& s);
bool is_constrained(ModelTag t);

struct IntegratorConfig {
  double dt = 1e-2;
  double t_end = 1.0;
  Scheme scheme = Scheme::ImplicitMidpoint;
  double linear_solver_tol = 1e-12;
  int record_every = 1;

  int steps() const;  // validates and returns round(t_end / dt)
  // Advisory explicit bound 0.5 h sqrt(rho0/B); reported, not enforced.
  static double rk4_advisory_dt(const ModalOperatorSet& ops, const MaterialParams& p);
};

template <class S>
struct TrajectoryRecord {
  ModelTag model = ModelTag::P;
  int l = 0;
  Scheme scheme = Scheme::ImplicitMidpoint;
  double dt = 0.0;
  int record_every = 1;
  std::vector<double> times;
  std::vector<S> states;
  std::vector<EnergyBreakdown> energy;
  // Cumulative integral of delta R1^2 vt^2 from t = 0, two quadratures:
  // squared step-midpoint of vt, and trapezoid of the sampled integrand.
  std::vector<double> dissipation_midpoint;
  std::vector<double> dissipation_trapezoid;
};

using PotentialTrajectory = TrajectoryRecord<PotentialModeState>;
using LagrangianTrajectory = TrajectoryRecord<LagrangianModeState>;
using EulerianTrajectory = TrajectoryRecord<EulerianModeState>;

// Packing between mode states and flat vectors, plus model dispatch.
template <class S>
struct ModelTraits;

template <>
struct ModelTraits<PotentialModeState> {
  static int size(const ModalOperatorSet& ops) { return 2 * ops.N() + 2; }
  static void pack(const PotentialModeState& s, Eigen::VectorXd& x);
  static PotentialModeState unpack(const ModalOperatorSet& ops, const Eigen::VectorXd& x);
  static PotentialModeState rhs(const ModalOperatorSet& o, const MaterialParams& p, const PotentialModeState& s) {
    return potential_rhs(o, p, s);
  }
  static EnergyBreakdown energy(const ModalOperatorSet& o, const MaterialParams& p, const PotentialModeState& s) {
    return potential_energy(o, p, s);
  }
  static double constraint(const ModalOperatorSet& o, const MaterialParams& p, const PotentialModeState& s) {
    return constraint_functional(o, p, s);
  }
  static bool accepts(ModelTag t) { return t == ModelTag::P || t == ModelTag::Pc; }
};

template <>
struct ModelTraits<LagrangianModeState> {
  static int size(const ModalOperatorSet& ops) { return 4 * ops.N() + 4; }
  static void pack(const LagrangianModeState& s, Eigen::VectorXd& x);
  static LagrangianModeState unpack(const ModalOperatorSet& ops, const Eigen::VectorXd& x);
  static LagrangianModeState rhs(const ModalOperatorSet& o, const MaterialParams& p, const LagrangianModeState& s) {
    return lagrangian_rhs(o, p, s);
  }
  static EnergyBreakdown energy(const ModalOperatorSet& o, const MaterialParams& p, const LagrangianModeState& s) {
    return lagrangian_energy(o, p, s);
  }
  static double constraint(const ModalOperatorSet&, const MaterialParams&, const LagrangianModeState&) {
    return 0.0;
  }
  static bool accepts(ModelTag t) { return t == ModelTag::L; }
};

template <>
struct ModelTraits<EulerianModeState> {
  static int size(const ModalOperatorSet& ops) { return 3 * ops.N() + 3; }
  static void pack(const EulerianModeState& s, Eigen::VectorXd& x);
  static EulerianModeState unpack(const ModalOperatorSet& ops, const Eigen::VectorXd& x);
  static EulerianModeState rhs(const ModalOperatorSet& o, const MaterialParams& p, const EulerianModeState& s) {
    return eulerian_rhs(o, p, s);
  }
  static EnergyBreakdown energy(const ModalOperatorSet& o, const MaterialParams& p, const EulerianModeState& s) {
    return eulerian_energy(o, p, s);
  }
  static double constraint(const ModalOperatorSet& o, const MaterialParams& p, const EulerianModeState& s) {
    return eulerian_constraint(o, p, s);
  }
  static bool accepts(ModelTag t) { return t == ModelTag::E || t == ModelTag::Ec; }
};

// Generator matrix of the semi-discrete system, assembled column by column.
template <class S>
Eigen::SparseMatrix<double> assemble_generator(const ModalOperatorSet& ops, const MaterialParams& p);

// Constraint threshold used before evolving constrained models.
double constraint_tol(double state_norm);

template <class S>
TrajectoryRecord<S> evolve(const ModalOperatorSet& ops, const MaterialParams& p, const S& initial,
                           const IntegratorConfig& cfg, ModelTag tag);

PotentialTrajectory evolve(const ModalOperatorSet& ops, const MaterialParams& p, const PotentialModeState& s,
                           const IntegratorConfig& cfg);
LagrangianTrajectory evolve(const ModalOperatorSet& ops, const MaterialParams& p, const LagrangianModeState& s,
                            const IntegratorConfig& cfg);
EulerianTrajectory evolve(const ModalOperatorSet& ops, const MaterialParams& p, const EulerianModeState& s,
                          const IntegratorConfig& cfg);

}  // namespace acbc
