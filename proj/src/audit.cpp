#include "acousticbc/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "acousticbc/error.hpp"

namespace acbc {

template <class S>
EnergyAudit audit_energy(const TrajectoryRecord<S>& traj) {
  EnergyAudit a;
  if (traj.energy.empty()) return a;
  a.E0 = traj.energy.front().total();
  double lo_m = 0.0, hi_m = 0.0, lo_t = 0.0, hi_t = 0.0, drift = 0.0;
  for (size_t n = 0; n < traj.energy.size(); ++n) {
    const double dE = traj.energy[n].total() - a.E0;
    const double rm = dE + traj.dissipation_midpoint[n];
    const double rt = dE + traj.dissipation_trapezoid[n];
    lo_m = std::min(lo_m, rm);
    hi_m = std::max(hi_m, rm);
    lo_t = std::min(lo_t, rt);
    hi_t = std::max(hi_t, rt);
    drift = std::max(drift, std::abs(dE));
  }
  a.residual_midpoint = hi_m - lo_m;
  a.residual_trapezoid = hi_t - lo_t;
  a.max_relative_drift = a.E0 != 0.0 ? drift / std::abs(a.E0) : drift;
  return a;
}

template EnergyAudit audit_energy(const PotentialTrajectory&);
template EnergyAudit audit_energy(const LagrangianTrajectory&);
template EnergyAudit audit_energy(const EulerianTrajectory&);

namespace {

double max_diff(const Samples& a, const Samples& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <class Traj, class C>
void constraint_drift(const Traj& traj, ConservationAudit& out, C&& fn) {
  out.constraint_initial = fn(traj.states.front());
  for (const auto& s : traj.states) out.constraint_drift = std::max(out.constraint_drift, std::abs(fn(s) - out.constraint_initial));
}

double horizon_of(const std::vector<double>& t) { return t.empty() ? 0.0 : t.back() - t.front(); }

}  // namespace

ConservationAudit audit_conservation(const ModalOperatorSet& ops, const MaterialParams& p,
                                     const PotentialTrajectory& traj) {
  ConservationAudit out;
  if (traj.states.empty()) return out;
  out.horizon = horizon_of(traj.times);
  constraint_drift(traj, out, [&](const PotentialModeState& s) { return constraint_functional(ops, p, s); });
  return out;
}

ConservationAudit audit_conservation(const ModalOperatorSet& ops, const MaterialParams&,
                                     const LagrangianTrajectory& traj) {
  ConservationAudit out;
  if (traj.states.empty()) return out;
  out.horizon = horizon_of(traj.times);
  if (ops.l == 0) return out;
  const auto& s0 = traj.states.front();
  const Samples c0 = curl_defect(ops, s0.F, s0.G), ct0 = curl_defect(ops, s0.Ft, s0.Gt);
  for (const auto& s : traj.states)
    out.curl_drift = std::max({out.curl_drift, max_diff(curl_defect(ops, s.F, s.G), c0),
                               max_diff(curl_defect(ops, s.Ft, s.Gt), ct0)});
  return out;
}

ConservationAudit audit_conservation(const ModalOperatorSet& ops, const MaterialParams& p,
                                     const EulerianTrajectory& traj) {
  ConservationAudit out;
  if (traj.states.empty()) return out;
  out.horizon = horizon_of(traj.times);
  constraint_drift(traj, out, [&](const EulerianModeState& s) { return eulerian_constraint(ops, p, s); });
  if (ops.l == 0) return out;
  const Samples c0 = curl_defect(ops, traj.states.front().f, traj.states.front().g);
  for (const auto& s : traj.states) out.curl_drift = std::max(out.curl_drift, max_diff(curl_defect(ops, s.f, s.g), c0));
  return out;
}

// --- test functions --------------------------------------------------------

double Polynomial::operator()(double r) const {
  double s = 0.0;
  for (size_t k = c.size(); k-- > 0;) s = s * r + c[k];
  return s;
}

double Polynomial::d1(double r) const {
  double s = 0.0;
  for (size_t k = c.size(); k-- > 1;) s = s * r + k * c[k];
  return s;
}

double Polynomial::d2(double r) const {
  double s = 0.0;
  for (size_t k = c.size(); k-- > 2;) s = s * r + k * (k - 1.0) * c[k];
  return s;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (c.empty() || o.c.empty()) return {};
  Polynomial out{std::vector<double>(c.size() + o.c.size() - 1, 0.0)};
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j < o.c.size(); ++j) out.c[i + j] += c[i] * o.c[j];
  return out;
}

double TimeWindow::operator()(double t) const {
  if (t <= t0 || t >= t1) return 0.0;
  const double s = std::sin(std::numbers::pi * (t - t0) / (t1 - t0));
  return s * s * s * s;
}

double TimeWindow::d1(double t) const {
  if (t <= t0 || t >= t1) return 0.0;
  const double a = std::numbers::pi / (t1 - t0);
  const double s = std::sin(a * (t - t0));
  return 4.0 * a * s * s * s * std::cos(a * (t - t0));
}

std::vector<TestFunction> default_test_family(const ModalOperatorSet& ops, double horizon) {
  const TimeWindow win{0.0, horizon};
  std::vector<TestFunction> fam;
  if (ops.domain.has_gamma0()) {
    const double R0 = ops.domain.R0;
    const Polynomial base{{R0 * R0, -2.0 * R0, 1.0}};  // (r - R0)^2
    fam.push_back({"shell_q0", base, win});
    fam.push_back({"shell_q1", base * Polynomial{{0.0, 1.0}}, win});
    fam.push_back({"shell_q2", base * Polynomial{{0.0, 0.0, 1.0}}, win});
  } else {
    Polynomial rl{std::vector<double>(ops.l + 1, 0.0)};
    rl.c[ops.l] = 1.0;
    fam.push_back({"ball_a", rl * Polynomial{{1.0, 0.0, 1.0}}, win});
    fam.push_back({"ball_b", rl * Polynomial{{0.0, 0.0, 1.0}}, win});
    fam.push_back({"ball_c", rl * Polynomial{{0.0, 0.0, 0.0, 0.0, 1.0}}, win});
  }
  return fam;
}

namespace {

void check_window(const TestFunction& tf, const std::vector<double>& times) {
  const double slack = 1e-12 * std::max(1.0, std::abs(times.back()));
  if (!(tf.window.t1 > tf.window.t0) || tf.window.t0 < times.front() - slack || tf.window.t1 > times.back() + slack)
    throw Error(ErrorKind::InadmissibleTestFunction, tf.name, "time window must lie inside the trajectory horizon");
}

// Ball: smooth extension through the origin needs r^l times an even polynomial.
// Shell, vector identities: zero normal trace on the inner sphere.
void check_profile(const ModalOperatorSet& ops, const TestFunction& tf, bool vector_field) {
  double cmax = 0.0;
  for (double a : tf.profile.c) cmax = std::max(cmax, std::abs(a));
  const double tol = 1e-12 * (1.0 + cmax);
  if (ops.domain.is_ball()) {
    for (size_t k = 0; k < tf.profile.c.size(); ++k) {
      const bool allowed = static_cast<int>(k) >= ops.l && (k - ops.l) % 2 == 0;
      if (!allowed && std::abs(tf.profile.c[k]) > tol)
        throw Error(ErrorKind::InadmissibleTestFunction, tf.name, "profile is not smooth through the origin");
    }
  } else if (vector_field) {
    double scale = 0.0;
    for (size_t k = 0; k < tf.profile.c.size(); ++k)
      scale += std::abs(tf.profile.c[k]) * std::pow(std::max(1.0, ops.R1()), static_cast<double>(k));
    if (std::abs(tf.profile.d1(ops.domain.R0)) > 1e-12 * (1.0 + scale))
      throw Error(ErrorKind::InadmissibleTestFunction, tf.name, "normal trace on the inner sphere is not zero");
  }
}

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (size_t n = 0; n + 1 < t.size(); ++n) {
    const double d = 0.5 * (t[n + 1] - t[n]);
    w[n] += d;
    w[n + 1] += d;
  }
  return w;
}

struct Profile {
  Samples phi, dphi_face, lap;  // at nodes, at faces, at nodes
  double phi_R1 = 0.0, dphi_R1 = 0.0;
};

Profile sample_profile(const ModalOperatorSet& ops, const Polynomial& P) {
  Profile pr;
  const auto& r = ops.r();
  pr.phi.resize(ops.N());
  pr.lap.resize(ops.N());
  pr.dphi_face.assign(ops.N() + 1, 0.0);
  for (int j = 0; j < ops.N(); ++j) {
    pr.phi[j] = P(r[j]);
    pr.lap[j] = P.d2(r[j]) + 2.0 * P.d1(r[j]) / r[j] - ops.ll1 * P(r[j]) / (r[j] * r[j]);
  }
  for (int f = 1; f < ops.N(); ++f) pr.dphi_face[f] = P.d1(ops.rf[f]);
  pr.phi_R1 = P(ops.R1());
  pr.dphi_R1 = P.d1(ops.R1());
  return pr;
}

// Accumulates named space-time terms; residual is their sum.
// Signed term totals plus the time quadrature of each term's magnitude, so the
// scale stays meaningful when every term integrates to zero.
struct TermSum {
  std::vector<double> terms;
  double magnitude = 0.0;
  explicit TermSum(size_t n) : terms(n, 0.0) {}
  void add(size_t k, double x) {
    terms[k] += x;
    magnitude += std::abs(x);
  }
  WeakResidual finish(std::string identity, std::string test) const {
    WeakResidual w{std::move(identity), std::move(test), 0.0, magnitude};
    for (double t : terms) w.residual += t;
    return w;
  }
};

// sum_f A_f h F_f phi'(rf_f) + l(l+1) sum_j w_j G_j phi_j / r_j
double gradient_pairing(const ModalOperatorSet& ops, const Profile& pr, const Samples& F, const Samples& G) {
  double s = face_inner(ops, F, pr.dphi_face);
  if (ops.l > 0)
    for (int j = 0; j < ops.N(); ++j) s += ops.ll1 * ops.w[j] * G[j] * pr.phi[j] / ops.r()[j];
  return s;
}

double node_pairing(const ModalOperatorSet& ops, const Samples& a, const Samples& b) {
  double s = 0.0;
  for (int j = 0; j < ops.N(); ++j) s += ops.w[j] * a[j] * b[j];
  return s;
}

// Membrane terms shared by the vector identities, psi amplitude -phi'(R1).
void membrane_terms(const ModalOperatorSet& ops, const MaterialParams& p, const Profile& pr, double v, double vt,
                    double th, double dth, double wq, TermSum& acc, size_t k0) {
  const double R1sq = ops.R1() * ops.R1();
  const double psi = -pr.dphi_R1;
  acc.add(k0 + 0, wq * p.mu * R1sq * vt * psi * dth);
  acc.add(k0 + 1, wq * (-p.sigma * ops.ll1 * v * psi * th));
  acc.add(k0 + 2, wq * (-p.delta * R1sq * vt * psi * th));
  acc.add(k0 + 3, wq * (-p.kappa * R1sq * v * psi * th));
}

}  // namespace

std::vector<WeakResidual> audit_weak_residual(const ModalOperatorSet& ops, const MaterialParams& p,
                                              const PotentialTrajectory& traj,
                                              const std::vector<TestFunction>& family) {
  std::vector<WeakResidual> out;
  if (traj.states.empty()) return out;
  const auto wt = trapezoid_weights(traj.times);
  const double R1sq = ops.R1() * ops.R1();
  const auto& r = ops.r();
  for (const auto& tf : family) {
    check_window(tf, traj.times);
    check_profile(ops, tf, false);
    const Profile pr = sample_profile(ops, tf.profile);
    TermSum bulk(3), memb(5);
    for (size_t n = 0; n < traj.states.size(); ++n) {
      const auto& s = traj.states[n];
      const double th = tf.window(traj.times[n]), dth = tf.window.d1(traj.times[n]), wq = wt[n];
      const Samples Du = face_grad(ops, s.u, 0.0, 0.0);
      double grad = face_inner(ops, Du, pr.dphi_face);
      for (int j = 0; j < ops.N(); ++j) grad += ops.ll1 * ops.w[j] * s.u[j] * pr.phi[j] / (r[j] * r[j]);
      bulk.add(0, wq * (-p.rho0 * dth * node_pairing(ops, s.ut, pr.phi)));
      bulk.add(1, wq * p.B * th * grad);
      bulk.add(2, wq * (-p.B * th * R1sq * s.vt * pr.phi_R1));
      memb.add(0, wq * (-p.mu * R1sq * s.vt * dth));
      memb.add(1, wq * p.sigma * ops.ll1 * s.v * th);
      memb.add(2, wq * p.delta * R1sq * s.vt * th);
      memb.add(3, wq * p.kappa * R1sq * s.v * th);
      memb.add(4, wq * (-p.rho0 * R1sq * s.u.back() * dth));
    }
    out.push_back(bulk.finish("potential_bulk", tf.name));
    out.push_back(memb.finish("potential_membrane", tf.name));
  }
  return out;
}

std::vector<WeakResidual> audit_weak_residual(const ModalOperatorSet& ops, const MaterialParams& p,
                                              const LagrangianTrajectory& traj,
                                              const std::vector<TestFunction>& family) {
  std::vector<WeakResidual> out;
  if (traj.states.empty()) return out;
  const auto wt = trapezoid_weights(traj.times);
  for (const auto& tf : family) {
    check_window(tf, traj.times);
    check_profile(ops, tf, true);
    const Profile pr = sample_profile(ops, tf.profile);
    TermSum acc(6);
    for (size_t n = 0; n < traj.states.size(); ++n) {
      const auto& s = traj.states[n];
      const double th = tf.window(traj.times[n]), dth = tf.window.d1(traj.times[n]), wq = wt[n];
      const Samples D = lagrangian_div(ops, s);
      acc.add(0, wq * p.rho0 * dth * gradient_pairing(ops, pr, s.Ft, s.Gt));
      acc.add(1, wq * (-p.B * th * node_pairing(ops, D, pr.lap)));
      membrane_terms(ops, p, pr, s.v, s.vt, th, dth, wq, acc, 2);
    }
    out.push_back(acc.finish("lagrangian", tf.name));
  }
  return out;
}

std::vector<WeakResidual> audit_weak_residual(const ModalOperatorSet& ops, const MaterialParams& p,
                                              const EulerianTrajectory& traj,
                                              const std::vector<TestFunction>& family) {
  std::vector<WeakResidual> out;
  if (traj.states.empty()) return out;
  const auto wt = trapezoid_weights(traj.times);
  const double R1sq = ops.R1() * ops.R1();
  for (const auto& tf : family) {
    check_window(tf, traj.times);
    check_profile(ops, tf, false);
    const Profile pr = sample_profile(ops, tf.profile);
    TermSum mass(3);
    for (size_t n = 0; n < traj.states.size(); ++n) {
      const auto& s = traj.states[n];
      const double th = tf.window(traj.times[n]), dth = tf.window.d1(traj.times[n]), wq = wt[n];
      mass.add(0, wq * dth * node_pairing(ops, s.p, pr.phi));
      mass.add(1, wq * p.B * th * gradient_pairing(ops, pr, s.f, s.g));
      mass.add(2, wq * p.B * th * R1sq * s.vt * pr.phi_R1);
    }
    out.push_back(mass.finish("eulerian_mass", tf.name));

    check_profile(ops, tf, true);
    TermSum mom(6);
    for (size_t n = 0; n < traj.states.size(); ++n) {
      const auto& s = traj.states[n];
      const double th = tf.window(traj.times[n]), dth = tf.window.d1(traj.times[n]), wq = wt[n];
      mom.add(0, wq * p.rho0 * dth * gradient_pairing(ops, pr, s.f, s.g));
      mom.add(1, wq * th * node_pairing(ops, s.p, pr.lap));
      membrane_terms(ops, p, pr, s.v, s.vt, th, dth, wq, mom, 2);
    }
    out.push_back(mom.finish("eulerian_momentum", tf.name));
  }
  return out;
}

}  // namespace acbc
