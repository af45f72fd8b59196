#include "acousticbc/lagrangian.hpp"

#include <algorithm>
#include <cmath>

#include "acousticbc/error.hpp"

namespace acbc {

namespace {
double max_abs_of(const Samples& x) {
  double m = 0.0;
  for (double a : x) m = std::max(m, std::abs(a));
  return m;
}
}  // namespace

LagrangianModeState LagrangianModeState::zero(const ModalOperatorSet& ops) {
  LagrangianModeState s;
  s.l = ops.l;
  s.F.assign(ops.N() + 1, 0.0);
  s.Ft.assign(ops.N() + 1, 0.0);
  s.G.assign(ops.N(), 0.0);
  s.Gt.assign(ops.N(), 0.0);
  return s;
}

double LagrangianModeState::max_abs() const {
  return std::max({max_abs_of(F), max_abs_of(G), max_abs_of(Ft), max_abs_of(Gt), std::abs(v),
                   std::abs(vt)});
}

void validate(const ModalOperatorSet& ops, const LagrangianModeState& s) {
  if (s.l != ops.l) throw Error(ErrorKind::DegreeMismatch, "l", "state degree differs from operators");
  require_length(s.F, ops.N() + 1, "F");
  require_length(s.Ft, ops.N() + 1, "Ft");
  require_length(s.G, ops.N(), "G");
  require_length(s.Gt, ops.N(), "Gt");
}

Samples lagrangian_div(const ModalOperatorSet& ops, const LagrangianModeState& s) {
  validate(ops, s);
  Samples F = s.F;
  F[0] = 0.0;
  F[ops.N()] = -s.v;
  return div_mode(ops, F, s.G);
}

LagrangianModeState lagrangian_rhs(const ModalOperatorSet& ops, const MaterialParams& p,
                                   const LagrangianModeState& s) {
  const Samples D = lagrangian_div(ops, s);
  const int N = ops.N();
  const double c2 = p.B / p.rho0;
  LagrangianModeState d = LagrangianModeState::zero(ops);
  d.F = s.Ft;
  d.F[0] = 0.0;
  d.v = s.vt;
  d.vt = (-p.sigma * ops.lambda * s.v - p.delta * s.vt - p.kappa * s.v + p.B * D[N - 1]) / p.mu;
  for (int f = 1; f < N; ++f) d.Ft[f] = c2 * (D[f] - D[f - 1]) / ops.h();
  d.Ft[N] = -d.vt;
  if (ops.l > 0) {
    d.G = s.Gt;
    for (int j = 0; j < N; ++j) d.Gt[j] = c2 * D[j] / ops.r()[j];
  }
  return d;
}

EnergyBreakdown lagrangian_energy(const ModalOperatorSet& ops, const MaterialParams& p,
                                  const LagrangianModeState& s) {
  const Samples D = lagrangian_div(ops, s);
  double kin = face_inner(ops, s.Ft, s.Ft);
  double div2 = 0.0;
  for (int j = 0; j < ops.N(); ++j) {
    if (ops.l > 0) kin += ops.ll1 * ops.w[j] * s.Gt[j] * s.Gt[j];
    div2 += ops.w[j] * D[j] * D[j];
  }
  const double R1sq = ops.R1() * ops.R1();
  EnergyBreakdown e;
  e.acoustic_kinetic = 0.5 * p.rho0 * kin;
  e.acoustic_compression = 0.5 * p.B * div2;
  e.membrane_tension = 0.5 * p.sigma * ops.ll1 * s.v * s.v;
  e.membrane_kinetic = 0.5 * p.mu * R1sq * s.vt * s.vt;
  e.membrane_stiffness = 0.5 * p.kappa * R1sq * s.v * s.v;
  return e;
}

CompatReport check_compat_lagrangian(const ModalOperatorSet& ops, const MaterialParams& p,
                                     const LagrangianModeState& s, int order, std::optional<double> tol) {
  validate(ops, s);
  if (order < 2 || order > 3)
    throw Error(ErrorKind::UnsupportedOrder, "order", "Lagrangian checks support orders 2 and 3");
  const int N = ops.N();
  CompatReport rep;
  rep.order = order;
  rep.tol = tol.value_or(default_compat_tol(s.max_abs()));
  rep.residuals.push_back({"gamma1_velocity_trace", s.Ft[N] + s.vt});
  if (ops.domain.has_gamma0()) rep.residuals.push_back({"gamma0_velocity_trace", s.Ft[0]});
  if (order == 3) {
    // Delta r = grad Div r for curl-free fields, so Delta r . nu is the normal derivative of D.
    const Samples D = lagrangian_div(ops, s);
    if (ops.domain.has_gamma0())
      rep.residuals.push_back(
          {"gamma0_laplacian_trace", surface_trace(ops, D, Boundary::Gamma0, TraceOrder::NormalDerivative)});
    const double dD = surface_trace(ops, D, Boundary::Gamma1, TraceOrder::NormalDerivative);
    rep.residuals.push_back({"gamma1_membrane", p.B * p.mu / p.rho0 * dD + p.sigma * ops.lambda * s.F[N] +
                                                    p.delta * s.Ft[N] + p.kappa * s.F[N] + p.B * D[N - 1]});
  }
  rep.pass = rep.max_abs() <= rep.tol;
  return rep;
}

}  // namespace acbc
