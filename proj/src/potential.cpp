#include "acousticbc/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "acousticbc/error.hpp"

namespace acbc {

namespace {
double max_abs_of(const Samples& x) {
  double m = 0.0;
  for (double a : x) m = std::max(m, std::abs(a));
  return m;
}
}  // namespace

PotentialModeState PotentialModeState::zero(const ModalOperatorSet& ops) {
  PotentialModeState s;
  s.l = ops.l;
  s.u.assign(ops.N(), 0.0);
  s.ut.assign(ops.N(), 0.0);
  return s;
}

double PotentialModeState::max_abs() const {
  return std::max({max_abs_of(u), max_abs_of(ut), std::abs(v), std::abs(vt)});
}

void validate(const ModalOperatorSet& ops, const PotentialModeState& s) {
  if (s.l != ops.l) throw Error(ErrorKind::DegreeMismatch, "l", "state degree differs from operators");
  require_length(s.u, ops.N(), "u");
  require_length(s.ut, ops.N(), "ut");
}

PotentialModeState potential_rhs(const ModalOperatorSet& ops, const MaterialParams& p,
                                 const PotentialModeState& s) {
  validate(ops, s);
  PotentialModeState d;
  d.l = s.l;
  d.u = s.ut;
  d.ut = lap(ops, s.u, 0.0, s.vt);
  const double c2 = p.B / p.rho0;
  for (double& x : d.ut) x *= c2;
  d.v = s.vt;
  d.vt = (-p.sigma * ops.lambda * s.v - p.delta * s.vt - p.kappa * s.v - p.rho0 * s.ut.back()) / p.mu;
  return d;
}

EnergyBreakdown potential_energy(const ModalOperatorSet& ops, const MaterialParams& p,
                                 const PotentialModeState& s) {
  validate(ops, s);
  const auto& r = ops.r();
  const Samples Du = face_grad(ops, s.u, 0.0, 0.0);
  double grad2 = face_inner(ops, Du, Du);
  double rate2 = 0.0;
  for (int j = 0; j < ops.N(); ++j) {
    grad2 += ops.ll1 * ops.w[j] * s.u[j] * s.u[j] / (r[j] * r[j]);
    rate2 += ops.w[j] * s.ut[j] * s.ut[j];
  }
  const double R1sq = ops.R1() * ops.R1();
  EnergyBreakdown e;
  e.acoustic_kinetic = 0.5 * p.rho0 * grad2;
  e.acoustic_compression = 0.5 * p.rho0 * p.rho0 / p.B * rate2;
  e.membrane_tension = 0.5 * p.sigma * ops.ll1 * s.v * s.v;
  e.membrane_kinetic = 0.5 * p.mu * R1sq * s.vt * s.vt;
  e.membrane_stiffness = 0.5 * p.kappa * R1sq * s.v * s.v;
  return e;
}

double constraint_functional(const ModalOperatorSet& ops, const MaterialParams& p,
                             const PotentialModeState& s) {
  validate(ops, s);
  if (ops.l != 0) return 0.0;
  return std::sqrt(4.0 * std::numbers::pi) *
         (p.rho0 * volume_integral(ops, s.ut) - p.B * ops.R1() * ops.R1() * s.v);
}

CompatReport check_compat_potential(const ModalOperatorSet& ops, const MaterialParams& p,
                                    const PotentialModeState& s, int order, std::optional<double> tol) {
  validate(ops, s);
  if (order < 2 || order > 3)
    throw Error(ErrorKind::UnsupportedOrder, "order", "potential checks support orders 2 and 3");
  CompatReport rep;
  rep.order = order;
  rep.tol = tol.value_or(default_compat_tol(s.max_abs()));
  const double dnu_u = surface_trace(ops, s.u, Boundary::Gamma1, TraceOrder::NormalDerivative);
  rep.residuals.push_back({"gamma1_neumann", dnu_u - s.vt});
  if (ops.domain.has_gamma0())
    rep.residuals.push_back(
        {"gamma0_u", surface_trace(ops, s.u, Boundary::Gamma0, TraceOrder::NormalDerivative)});
  if (order == 3) {
    if (ops.domain.has_gamma0())
      rep.residuals.push_back(
          {"gamma0_ut", surface_trace(ops, s.ut, Boundary::Gamma0, TraceOrder::NormalDerivative)});
    const double dnu_ut = surface_trace(ops, s.ut, Boundary::Gamma1, TraceOrder::NormalDerivative);
    rep.residuals.push_back({"gamma1_membrane", p.mu * dnu_ut + p.sigma * ops.lambda * s.v +
                                                    p.delta * dnu_u + p.kappa * s.v +
                                                    p.rho0 * s.ut.back()});
  }
  rep.pass = rep.max_abs() <= rep.tol;
  return rep;
}

}  // namespace acbc
