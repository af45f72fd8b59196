#include "acousticbc/eulerian.hpp"

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

EulerianModeState EulerianModeState::zero(const ModalOperatorSet& ops) {
  EulerianModeState s;
  s.l = ops.l;
  s.p.assign(ops.N(), 0.0);
  s.f.assign(ops.N() + 1, 0.0);
  s.g.assign(ops.N(), 0.0);
  return s;
}

double EulerianModeState::max_abs() const {
  return std::max({max_abs_of(p), max_abs_of(f), max_abs_of(g), std::abs(v), std::abs(vt)});
}

void validate(const ModalOperatorSet& ops, const EulerianModeState& s) {
  if (s.l != ops.l) throw Error(ErrorKind::DegreeMismatch, "l", "state degree differs from operators");
  require_length(s.p, ops.N(), "p");
  require_length(s.f, ops.N() + 1, "f");
  require_length(s.g, ops.N(), "g");
}

EulerianModeState eulerian_rhs(const ModalOperatorSet& ops, const MaterialParams& pm,
                               const EulerianModeState& s) {
  validate(ops, s);
  const int N = ops.N();
  Samples f = s.f;
  f[0] = 0.0;
  f[N] = -s.vt;
  Samples g = s.g;
  if (ops.l == 0) std::fill(g.begin(), g.end(), 0.0);
  const Samples D = div_mode(ops, f, g);

  EulerianModeState d = EulerianModeState::zero(ops);
  for (int j = 0; j < N; ++j) d.p[j] = -pm.B * D[j];
  for (int k = 1; k < N; ++k) d.f[k] = -(s.p[k] - s.p[k - 1]) / (pm.rho0 * ops.h());
  if (ops.l > 0)
    for (int j = 0; j < N; ++j) d.g[j] = -s.p[j] / (pm.rho0 * ops.r()[j]);
  d.v = s.vt;
  d.vt = (-pm.sigma * ops.lambda * s.v - pm.delta * s.vt - pm.kappa * s.v - s.p[N - 1]) / pm.mu;
  d.f[N] = -d.vt;
  return d;
}

EnergyBreakdown eulerian_energy(const ModalOperatorSet& ops, const MaterialParams& pm,
                                const EulerianModeState& s) {
  validate(ops, s);
  double kin = face_inner(ops, s.f, s.f);
  double p2 = 0.0;
  for (int j = 0; j < ops.N(); ++j) {
    if (ops.l > 0) kin += ops.ll1 * ops.w[j] * s.g[j] * s.g[j];
    p2 += ops.w[j] * s.p[j] * s.p[j];
  }
  const double R1sq = ops.R1() * ops.R1();
  EnergyBreakdown e;
  e.acoustic_kinetic = 0.5 * pm.rho0 * kin;
  e.acoustic_compression = 0.5 / pm.B * p2;
  e.membrane_tension = 0.5 * pm.sigma * ops.ll1 * s.v * s.v;
  e.membrane_kinetic = 0.5 * pm.mu * R1sq * s.vt * s.vt;
  e.membrane_stiffness = 0.5 * pm.kappa * R1sq * s.v * s.v;
  return e;
}

double eulerian_constraint(const ModalOperatorSet& ops, const MaterialParams& pm, const EulerianModeState& s) {
  validate(ops, s);
  if (ops.l != 0) return 0.0;
  return std::sqrt(4.0 * std::numbers::pi) * (volume_integral(ops, s.p) - pm.B * ops.R1() * ops.R1() * s.v);
}

CompatReport check_compat_eulerian(const ModalOperatorSet& ops, const MaterialParams& pm,
                                   const EulerianModeState& s, int order, std::optional<double> tol) {
  validate(ops, s);
  if (order < 2 || order > 3)
    throw Error(ErrorKind::UnsupportedOrder, "order", "Eulerian checks support orders 2 and 3");
  const int N = ops.N();
  CompatReport rep;
  rep.order = order;
  rep.tol = tol.value_or(default_compat_tol(s.max_abs()));
  rep.residuals.push_back({"gamma1_velocity_trace", s.f[N] + s.vt});
  if (ops.domain.has_gamma0()) rep.residuals.push_back({"gamma0_velocity_trace", s.f[0]});
  if (order == 3) {
    if (ops.domain.has_gamma0())
      rep.residuals.push_back(
          {"gamma0_pressure", surface_trace(ops, s.p, Boundary::Gamma0, TraceOrder::NormalDerivative)});
    const double dp = surface_trace(ops, s.p, Boundary::Gamma1, TraceOrder::NormalDerivative);
    rep.residuals.push_back({"gamma1_membrane", pm.mu * dp + pm.rho0 * (pm.sigma * ops.lambda * s.v +
                                                                        pm.delta * s.vt + pm.kappa * s.v +
                                                                        s.p[N - 1])});
  }
  rep.pass = rep.max_abs() <= rep.tol;
  return rep;
}

}  // namespace acbc
