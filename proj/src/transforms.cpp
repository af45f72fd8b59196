#include "acousticbc/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acousticbc/error.hpp"

namespace acbc {

Samples apply_gauge(const ModalOperatorSet& ops, Samples u, GaugePolicy) {
  if (ops.l != 0) return u;
  double mean = 0.0, vol = 0.0;
  for (int j = 0; j < ops.N(); ++j) {
    mean += ops.w[j] * u[j];
    vol += ops.w[j];
  }
  mean /= vol;
  for (double& x : u) x -= mean;
  return u;
}

namespace {

Samples neg(Samples x) {
  for (double& a : x) a = -a;
  return x;
}

// Velocity field of -grad u, with the outer face carrying -vt.
void minus_gradient(const ModalOperatorSet& ops, const Samples& u, double vt, Samples& F, Samples& G) {
  F = neg(face_grad(ops, u, 0.0, 0.0));
  F[ops.N()] = -vt;
  G = ops.l > 0 ? neg(over_r(ops, u)) : Samples(ops.N(), 0.0);
}

// u with -grad u = (F, G) at interior faces; radial integration for l = 0.
Samples potential_from_velocity(const ModalOperatorSet& ops, const Samples& F, const Samples& G, GaugePolicy g) {
  const int N = ops.N();
  Samples u(N);
  if (ops.l > 0) {
    for (int j = 0; j < N; ++j) u[j] = -ops.r()[j] * G[j];
    return u;
  }
  u[0] = 0.0;
  for (int j = 1; j < N; ++j) u[j] = u[j - 1] - ops.h() * F[j];
  return apply_gauge(ops, std::move(u), g);
}

template <class S>
void require_step_sampling(const TrajectoryRecord<S>& traj) {
  if (traj.record_every != 1 || traj.scheme != Scheme::ImplicitMidpoint)
    throw Error(ErrorKind::QuadratureOrderMismatch, "trajectory",
                "time integrals need every implicit-midpoint step recorded");
  for (size_t n = 1; n < traj.times.size(); ++n)
    if (std::abs(traj.times[n] - traj.times[n - 1] - traj.dt) > 1e-9 * traj.dt)
      throw Error(ErrorKind::QuadratureOrderMismatch, "trajectory", "samples are not consecutive steps");
}

template <class To, class From>
TrajectoryRecord<To> header_from(const TrajectoryRecord<From>& in, ModelTag tag) {
  TrajectoryRecord<To> out;
  out.model = tag;
  out.l = in.l;
  out.scheme = in.scheme;
  out.dt = in.dt;
  out.record_every = in.record_every;
  out.times = in.times;
  out.dissipation_midpoint = in.dissipation_midpoint;
  out.dissipation_trapezoid = in.dissipation_trapezoid;
  return out;
}

double max_abs_diff(const Samples& a, const Samples& b, int from, int to) {
  double m = 0.0;
  for (int i = from; i < to; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

LagrangianModeState map_potential_to_lagrangian(const ModalOperatorSet& ops, const MaterialParams& p,
                                                const PotentialModeState& s) {
  validate(ops, s);
  if (ops.l == 0) {
    const double c = constraint_functional(ops, p, s);
    if (std::abs(c) > constraint_tol(s.max_abs()))
      throw Error(ErrorKind::ConstraintViolated, "ut,v", "constraint functional " + std::to_string(c) + " is not zero");
  }
  const DivCurlSolution sol = solve_div_curl(ops, p, DivCurlProblem{ops.l, s.ut, s.v});
  LagrangianModeState out;
  out.l = ops.l;
  out.F = sol.F;
  out.G = sol.G;
  out.v = s.v;
  out.vt = s.vt;
  minus_gradient(ops, s.u, s.vt, out.Ft, out.Gt);
  return out;
}

EulerianModeState map_potential_to_eulerian(const ModalOperatorSet& ops, const MaterialParams& p,
                                            const PotentialModeState& s) {
  validate(ops, s);
  EulerianModeState out;
  out.l = ops.l;
  out.p = s.ut;
  for (double& x : out.p) x *= p.rho0;
  minus_gradient(ops, s.u, s.vt, out.f, out.g);
  out.v = s.v;
  out.vt = s.vt;
  return out;
}

EulerianModeState map_lagrangian_to_eulerian(const ModalOperatorSet& ops, const MaterialParams& p,
                                             const LagrangianModeState& s) {
  EulerianModeState out;
  out.l = ops.l;
  out.p = lagrangian_div(ops, s);
  for (double& x : out.p) x *= -p.B;
  out.f = s.Ft;
  out.g = s.Gt;
  out.v = s.v;
  out.vt = s.vt;
  return out;
}

PotentialTrajectory map_lagrangian_to_potential(const ModalOperatorSet& ops, const MaterialParams& p,
                                                const LagrangianTrajectory& traj, GaugePolicy g,
                                                double* postcheck) {
  auto out = header_from<PotentialModeState>(traj, ModelTag::Pc);
  if (traj.states.empty()) return out;
  if (traj.states.size() > 1) require_step_sampling(traj);
  const double c2 = p.B / p.rho0;
  double check = 0.0;
  for (size_t n = 0; n < traj.states.size(); ++n) {
    const auto& s = traj.states[n];
    PotentialModeState q;
    q.l = ops.l;
    q.ut = lagrangian_div(ops, s);
    for (double& x : q.ut) x *= -c2;
    if (n == 0) {
      q.u = potential_from_velocity(ops, s.Ft, s.Gt, g);
    } else {
      const auto& prev = out.states[n - 1];
      const double half = 0.5 * (traj.times[n] - traj.times[n - 1]);
      q.u = prev.u;
      for (int j = 0; j < ops.N(); ++j) q.u[j] += half * (prev.ut[j] + q.ut[j]);
    }
    q.v = s.v;
    q.vt = s.vt;
    if (postcheck) {
      Samples F, G;
      minus_gradient(ops, q.u, q.vt, F, G);
      check = std::max(check, max_abs_diff(F, s.Ft, 1, ops.N()));
      if (ops.l > 0) check = std::max(check, max_abs_diff(G, s.Gt, 0, ops.N()));
    }
    out.energy.push_back(potential_energy(ops, p, q));
    out.states.push_back(std::move(q));
  }
  if (postcheck) *postcheck = check;
  return out;
}

PotentialTrajectory map_eulerian_to_potential(const ModalOperatorSet& ops, const MaterialParams& p,
                                              const EulerianTrajectory& traj, GaugePolicy g, double* postcheck) {
  auto out = header_from<PotentialModeState>(traj, traj.model == ModelTag::Ec ? ModelTag::Pc : ModelTag::P);
  if (traj.states.empty()) return out;
  if (traj.states.size() > 1) require_step_sampling(traj);
  double check = 0.0;
  for (size_t n = 0; n < traj.states.size(); ++n) {
    const auto& s = traj.states[n];
    PotentialModeState q;
    q.l = ops.l;
    q.ut = s.p;
    for (double& x : q.ut) x /= p.rho0;
    if (n == 0) {
      q.u = potential_from_velocity(ops, s.f, s.g, g);
    } else {
      const auto& prev = out.states[n - 1];
      const double half = 0.5 * (traj.times[n] - traj.times[n - 1]);
      q.u = prev.u;
      for (int j = 0; j < ops.N(); ++j) q.u[j] += half * (prev.ut[j] + q.ut[j]);
    }
    q.v = s.v;
    q.vt = s.vt;
    if (postcheck) {
      Samples F, G;
      minus_gradient(ops, q.u, q.vt, F, G);
      check = std::max(check, max_abs_diff(F, s.f, 1, ops.N()));
      if (ops.l > 0) check = std::max(check, max_abs_diff(G, s.g, 0, ops.N()));
    }
    out.energy.push_back(potential_energy(ops, p, q));
    out.states.push_back(std::move(q));
  }
  if (postcheck) *postcheck = check;
  return out;
}

LagrangianTrajectory map_eulerian_to_lagrangian(const ModalOperatorSet& ops, const MaterialParams& p,
                                                const EulerianTrajectory& traj, double* postcheck) {
  auto out = header_from<LagrangianModeState>(traj, ModelTag::L);
  if (traj.states.empty()) return out;
  const auto& s0 = traj.states.front();
  if (ops.l == 0) {
    const double c = eulerian_constraint(ops, p, s0);
    if (std::abs(c) > constraint_tol(s0.max_abs()))
      throw Error(ErrorKind::ConstraintViolated, "p,v", "constraint functional " + std::to_string(c) + " is not zero");
  }
  if (traj.states.size() > 1) require_step_sampling(traj);
  double check = 0.0;
  for (size_t n = 0; n < traj.states.size(); ++n) {
    const auto& s = traj.states[n];
    LagrangianModeState q;
    q.l = ops.l;
    if (n == 0) {
      Samples w = s.p;
      for (double& x : w) x /= p.rho0;
      const DivCurlSolution sol = solve_div_curl(ops, p, DivCurlProblem{ops.l, w, s.v});
      q.F = sol.F;
      q.G = sol.G;
    } else {
      const auto& prev = out.states[n - 1];
      const auto& sp = traj.states[n - 1];
      const double half = 0.5 * (traj.times[n] - traj.times[n - 1]);
      q.F = prev.F;
      q.G = prev.G;
      for (size_t k = 0; k < q.F.size(); ++k) q.F[k] += half * (sp.f[k] + s.f[k]);
      for (size_t k = 0; k < q.G.size(); ++k) q.G[k] += half * (sp.g[k] + s.g[k]);
    }
    q.Ft = s.f;
    q.Gt = s.g;
    q.v = s.v;
    q.vt = s.vt;
    if (postcheck) {
      const Samples D = lagrangian_div(ops, q);
      double m = 0.0;
      for (int j = 0; j < ops.N(); ++j) m = std::max(m, std::abs(-p.B * D[j] - s.p[j]));
      check = std::max(check, m);
    }
    out.energy.push_back(lagrangian_energy(ops, p, q));
    out.states.push_back(std::move(q));
  }
  if (postcheck) *postcheck = check;
  return out;
}

LagrangianTrajectory map_potential_to_lagrangian(const ModalOperatorSet& ops, const MaterialParams& p,
                                                 const PotentialTrajectory& traj) {
  auto out = header_from<LagrangianModeState>(traj, ModelTag::L);
  for (const auto& s : traj.states) {
    out.states.push_back(map_potential_to_lagrangian(ops, p, s));
    out.energy.push_back(lagrangian_energy(ops, p, out.states.back()));
  }
  return out;
}

EulerianTrajectory map_potential_to_eulerian(const ModalOperatorSet& ops, const MaterialParams& p,
                                             const PotentialTrajectory& traj) {
  auto out = header_from<EulerianModeState>(traj, traj.model == ModelTag::Pc ? ModelTag::Ec : ModelTag::E);
  for (const auto& s : traj.states) {
    out.states.push_back(map_potential_to_eulerian(ops, p, s));
    out.energy.push_back(eulerian_energy(ops, p, out.states.back()));
  }
  return out;
}

EulerianTrajectory map_lagrangian_to_eulerian(const ModalOperatorSet& ops, const MaterialParams& p,
                                              const LagrangianTrajectory& traj) {
  auto out = header_from<EulerianModeState>(traj, ModelTag::Ec);
  for (const auto& s : traj.states) {
    out.states.push_back(map_lagrangian_to_eulerian(ops, p, s));
    out.energy.push_back(eulerian_energy(ops, p, out.states.back()));
  }
  return out;
}

// --- initial-data characterizations -----------------------------------------

namespace {

EquivalenceReport finish(EquivalenceKind kind, std::vector<Residual> res, double tol) {
  EquivalenceReport rep;
  rep.kind = kind;
  rep.tol = tol;
  rep.residuals = std::move(res);
  for (const auto& r : rep.residuals) rep.pass = rep.pass && std::abs(r.value) <= tol;
  return rep;
}

Residual membrane_residual(double va, double vta, double vb, double vtb) {
  return {"membrane", std::max(std::abs(va - vb), std::abs(vta - vtb))};
}

double velocity_residual(const ModalOperatorSet& ops, const Samples& Fa, const Samples& Ga, const Samples& Fb,
                         const Samples& Gb) {
  double m = max_abs_diff(Fa, Fb, 1, ops.N());
  if (ops.l > 0) m = std::max(m, max_abs_diff(Ga, Gb, 0, ops.N()));
  return m;
}

void require_same_degree(int la, int lb, const ModalOperatorSet& ops) {
  if (la != lb || la != ops.l) throw Error(ErrorKind::DegreeMismatch, "l", "data sets have different degrees");
}

}  // namespace

EquivalenceReport data_equivalence(const ModalOperatorSet& ops, const MaterialParams& p, const PotentialModeState& a,
                                   const LagrangianModeState& b, std::optional<double> tol) {
  require_same_degree(a.l, b.l, ops);
  validate(ops, a);
  validate(ops, b);
  Samples F, G;
  minus_gradient(ops, a.u, a.vt, F, G);
  const Samples D = lagrangian_div(ops, b);
  double div = 0.0;
  for (int j = 0; j < ops.N(); ++j) div = std::max(div, std::abs(-p.B * D[j] - p.rho0 * a.ut[j]));
  std::vector<Residual> res{{"velocity", velocity_residual(ops, F, G, b.Ft, b.Gt)},
                            {"divergence", div},
                            membrane_residual(a.v, a.vt, b.v, b.vt)};
  return finish(EquivalenceKind::PcL, std::move(res), tol.value_or(1e-8 * (1.0 + std::max(a.max_abs(), b.max_abs()))));
}

EquivalenceReport data_equivalence(const ModalOperatorSet& ops, const MaterialParams& p, const PotentialModeState& a,
                                   const EulerianModeState& b, std::optional<double> tol) {
  require_same_degree(a.l, b.l, ops);
  validate(ops, a);
  validate(ops, b);
  Samples F, G;
  minus_gradient(ops, a.u, a.vt, F, G);
  double pr = 0.0;
  for (int j = 0; j < ops.N(); ++j) pr = std::max(pr, std::abs(b.p[j] - p.rho0 * a.ut[j]));
  std::vector<Residual> res{{"velocity", velocity_residual(ops, F, G, b.f, b.g)},
                            {"pressure", pr},
                            membrane_residual(a.v, a.vt, b.v, b.vt)};
  return finish(EquivalenceKind::PE, std::move(res), tol.value_or(1e-8 * (1.0 + std::max(a.max_abs(), b.max_abs()))));
}

EquivalenceReport data_equivalence(const ModalOperatorSet& ops, const MaterialParams& p, const EulerianModeState& a,
                                   const LagrangianModeState& b, std::optional<double> tol) {
  require_same_degree(a.l, b.l, ops);
  validate(ops, a);
  validate(ops, b);
  const Samples D = lagrangian_div(ops, b);
  double div = 0.0;
  for (int j = 0; j < ops.N(); ++j) div = std::max(div, std::abs(-p.B * D[j] - a.p[j]));
  std::vector<Residual> res{{"divergence", div},
                            {"velocity", velocity_residual(ops, b.Ft, b.Gt, a.f, a.g)},
                            membrane_residual(a.v, a.vt, b.v, b.vt)};
  return finish(EquivalenceKind::EcL, std::move(res), tol.value_or(1e-8 * (1.0 + std::max(a.max_abs(), b.max_abs()))));
}

// --- trajectory distances ---------------------------------------------------

namespace {

double node_norm2(const ModalOperatorSet& ops, const Samples& a) {
  double s = 0.0;
  for (int j = 0; j < ops.N(); ++j) s += ops.w[j] * a[j] * a[j];
  return s;
}

double node_diff2(const ModalOperatorSet& ops, const Samples& a, const Samples& b, double shift = 0.0) {
  double s = 0.0;
  for (int j = 0; j < ops.N(); ++j) {
    const double d = a[j] - b[j] - shift;
    s += ops.w[j] * d * d;
  }
  return s;
}

double face_diff2(const ModalOperatorSet& ops, const Samples& a, const Samples& b) {
  Samples d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return face_inner(ops, d, d);
}

template <class S, class Dist, class Norm>
double relative_max(const TrajectoryRecord<S>& a, const TrajectoryRecord<S>& b, Dist&& dist, Norm&& norm) {
  if (a.states.size() != b.states.size())
    throw Error(ErrorKind::LengthMismatch, "trajectory", "sample counts differ");
  double num = 0.0, den = 0.0;
  for (size_t n = 0; n < a.states.size(); ++n) {
    num = std::max(num, std::sqrt(dist(a.states[n], b.states[n])));
    den = std::max(den, std::sqrt(norm(b.states[n])));
  }
  return den > 0.0 ? num / den : num;
}

}  // namespace

double trajectory_discrepancy(const ModalOperatorSet& ops, const PotentialTrajectory& a, const PotentialTrajectory& b,
                              bool mod_constant) {
  const double R1sq = ops.R1() * ops.R1();
  double shift = 0.0;
  if (mod_constant && ops.l == 0 && !a.states.empty() && !b.states.empty()) {
    double vol = 0.0;
    for (int j = 0; j < ops.N(); ++j) {
      shift += ops.w[j] * (a.states[0].u[j] - b.states[0].u[j]);
      vol += ops.w[j];
    }
    shift /= vol;
  }
  return relative_max(
      a, b,
      [&](const PotentialModeState& x, const PotentialModeState& y) {
        return node_diff2(ops, x.u, y.u, shift) + node_diff2(ops, x.ut, y.ut) +
               R1sq * ((x.v - y.v) * (x.v - y.v) + (x.vt - y.vt) * (x.vt - y.vt));
      },
      [&](const PotentialModeState& y) {
        return node_norm2(ops, y.u) + node_norm2(ops, y.ut) + R1sq * (y.v * y.v + y.vt * y.vt);
      });
}

double trajectory_discrepancy(const ModalOperatorSet& ops, const LagrangianTrajectory& a,
                              const LagrangianTrajectory& b) {
  const double R1sq = ops.R1() * ops.R1();
  const double ll1 = ops.ll1;
  return relative_max(
      a, b,
      [&](const LagrangianModeState& x, const LagrangianModeState& y) {
        return face_diff2(ops, x.F, y.F) + ll1 * node_diff2(ops, x.G, y.G) + face_diff2(ops, x.Ft, y.Ft) +
               ll1 * node_diff2(ops, x.Gt, y.Gt) + R1sq * ((x.v - y.v) * (x.v - y.v) + (x.vt - y.vt) * (x.vt - y.vt));
      },
      [&](const LagrangianModeState& y) {
        return face_inner(ops, y.F, y.F) + ll1 * node_norm2(ops, y.G) + face_inner(ops, y.Ft, y.Ft) +
               ll1 * node_norm2(ops, y.Gt) + R1sq * (y.v * y.v + y.vt * y.vt);
      });
}

double trajectory_discrepancy(const ModalOperatorSet& ops, const EulerianTrajectory& a, const EulerianTrajectory& b) {
  const double R1sq = ops.R1() * ops.R1();
  const double ll1 = ops.ll1;
  return relative_max(
      a, b,
      [&](const EulerianModeState& x, const EulerianModeState& y) {
        return node_diff2(ops, x.p, y.p) + face_diff2(ops, x.f, y.f) + ll1 * node_diff2(ops, x.g, y.g) +
               R1sq * ((x.v - y.v) * (x.v - y.v) + (x.vt - y.vt) * (x.vt - y.vt));
      },
      [&](const EulerianModeState& y) {
        return node_norm2(ops, y.p) + face_inner(ops, y.f, y.f) + ll1 * node_norm2(ops, y.g) +
               R1sq * (y.v * y.v + y.vt * y.vt);
      });
}

}  // namespace acbc
