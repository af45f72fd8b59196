#include "acousticbc/evolve.hpp"

#include <cmath>
#include <string>

#include <Eigen/SparseLU>

#include "acousticbc/error.hpp"

namespace acbc {

const char* to_string(ModelTag t) {
  switch (t) {
    case ModelTag::P: return "P";
    case ModelTag::Pc: return "Pc";
    case ModelTag::L: return "L";
    case ModelTag::E: return "E";
    case ModelTag::Ec: return "Ec";
  }
  return "?";
}

const char* to_string(Scheme s) {
  return s == Scheme::ImplicitMidpoint ? "ImplicitMidpoint" : "ExplicitRK4";
}

ModelTag parse_model_tag(const std::string& s) {
  if (s == "P") return ModelTag::P;
  if (s == "Pc") return ModelTag::Pc;
  if (s == "L") return ModelTag::L;
  if (s == "E") return ModelTag::E;
  if (s == "Ec") return ModelTag::Ec;
  throw Error(ErrorKind::ValidationError, "model", "unknown model tag '" + s + "'");
}

Scheme parse_scheme(const std::string& s) {
  if (s == "ImplicitMidpoint") return Scheme::ImplicitMidpoint;
  if (s == "ExplicitRK4") return Scheme::ExplicitRK4;
  throw Error(ErrorKind::ValidationError, "integrator.scheme", "unknown scheme '" + s + "'");
}

bool is_constrained(ModelTag t) { return t == ModelTag::Pc || t == ModelTag::Ec; }

int IntegratorConfig::steps() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::ValidationError, "integrator.dt", "dt must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw Error(ErrorKind::ValidationError, "integrator.t_end", "t_end must be >= 0");
  if (record_every < 1) throw Error(ErrorKind::ValidationError, "integrator.record_every", "must be >= 1");
  if (!(linear_solver_tol > 0.0))
    throw Error(ErrorKind::ValidationError, "integrator.linear_solver_tol", "must be > 0");
  const double q = t_end / dt;
  const long long n = std::llround(q);
  if (std::abs(q - static_cast<double>(n)) > 1e-9 * std::max(1.0, q))
    throw Error(ErrorKind::ValidationError, "integrator.t_end", "t_end must be an integer multiple of dt");
  return static_cast<int>(n);
}

double IntegratorConfig::rk4_advisory_dt(const ModalOperatorSet& ops, const MaterialParams& p) {
  return 0.5 * ops.h() * std::sqrt(p.rho0 / p.B);
}

double constraint_tol(double state_norm) { return 1e-8 * (1.0 + state_norm); }

// --- packing ---------------------------------------------------------------

namespace {
void put(Eigen::VectorXd& x, int& k, const Samples& s) {
  for (double a : s) x[k++] = a;
}
void get(const Eigen::VectorXd& x, int& k, Samples& s, size_t n) {
  s.resize(n);
  for (size_t i = 0; i < n; ++i) s[i] = x[k++];
}
}  // namespace

void ModelTraits<PotentialModeState>::pack(const PotentialModeState& s, Eigen::VectorXd& x) {
  x.resize(2 * s.u.size() + 2);
  int k = 0;
  put(x, k, s.u);
  put(x, k, s.ut);
  x[k++] = s.v;
  x[k++] = s.vt;
}

PotentialModeState ModelTraits<PotentialModeState>::unpack(const ModalOperatorSet& ops, const Eigen::VectorXd& x) {
  PotentialModeState s;
  s.l = ops.l;
  const size_t N = ops.N();
  int k = 0;
  get(x, k, s.u, N);
  get(x, k, s.ut, N);
  s.v = x[k++];
  s.vt = x[k++];
  return s;
}

void ModelTraits<LagrangianModeState>::pack(const LagrangianModeState& s, Eigen::VectorXd& x) {
  x.resize(2 * s.F.size() + 2 * s.G.size() + 2);
  int k = 0;
  put(x, k, s.F);
  put(x, k, s.G);
  x[k++] = s.v;
  put(x, k, s.Ft);
  put(x, k, s.Gt);
  x[k++] = s.vt;
}

LagrangianModeState ModelTraits<LagrangianModeState>::unpack(const ModalOperatorSet& ops, const Eigen::VectorXd& x) {
  LagrangianModeState s;
  s.l = ops.l;
  const size_t N = ops.N();
  int k = 0;
  get(x, k, s.F, N + 1);
  get(x, k, s.G, N);
  s.v = x[k++];
  get(x, k, s.Ft, N + 1);
  get(x, k, s.Gt, N);
  s.vt = x[k++];
  return s;
}

void ModelTraits<EulerianModeState>::pack(const EulerianModeState& s, Eigen::VectorXd& x) {
  x.resize(s.p.size() + s.f.size() + s.g.size() + 2);
  int k = 0;
  put(x, k, s.p);
  put(x, k, s.f);
  put(x, k, s.g);
  x[k++] = s.v;
  x[k++] = s.vt;
}

EulerianModeState ModelTraits<EulerianModeState>::unpack(const ModalOperatorSet& ops, const Eigen::VectorXd& x) {
  EulerianModeState s;
  s.l = ops.l;
  const size_t N = ops.N();
  int k = 0;
  get(x, k, s.p, N);
  get(x, k, s.f, N + 1);
  get(x, k, s.g, N);
  s.v = x[k++];
  s.vt = x[k++];
  return s;
}

// --- integration -----------------------------------------------------------

template <class S>
Eigen::SparseMatrix<double> assemble_generator(const ModalOperatorSet& ops, const MaterialParams& p) {
  using T = ModelTraits<S>;
  const int n = T::size(ops);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n), col;
  for (int k = 0; k < n; ++k) {
    e[k] = 1.0;
    T::pack(T::rhs(ops, p, T::unpack(ops, e)), col);
    e[k] = 0.0;
    for (int i = 0; i < n; ++i)
      if (col[i] != 0.0) trip.emplace_back(i, k, col[i]);
  }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

namespace {

int vt_index(const ModalOperatorSet& ops, const PotentialModeState*) { return 2 * ops.N() + 1; }
int vt_index(const ModalOperatorSet& ops, const LagrangianModeState*) { return 4 * ops.N() + 3; }
int vt_index(const ModalOperatorSet& ops, const EulerianModeState*) { return 3 * ops.N() + 2; }

double state_norm(const PotentialModeState& s) { return s.max_abs(); }
double state_norm(const LagrangianModeState& s) { return s.max_abs(); }
double state_norm(const EulerianModeState& s) { return s.max_abs(); }

}  // namespace

template <class S>
TrajectoryRecord<S> evolve(const ModalOperatorSet& ops, const MaterialParams& p, const S& initial,
                           const IntegratorConfig& cfg, ModelTag tag) {
  using T = ModelTraits<S>;
  validate(ops, initial);
  if (!T::accepts(tag)) throw Error(ErrorKind::ValidationError, "model", "state type does not match model tag");
  const int steps = cfg.steps();
  if (is_constrained(tag)) {
    const double c = T::constraint(ops, p, initial);
    if (std::abs(c) > constraint_tol(state_norm(initial)))
      throw Error(ErrorKind::ConstraintViolated, "initial_data",
                  "constraint functional " + std::to_string(c) + " is not zero");
  }

  const Eigen::SparseMatrix<double> L = assemble_generator<S>(ops, p);
  const int n = L.rows();
  const int ivt = vt_index(ops, static_cast<const S*>(nullptr));
  const double R1sq = ops.R1() * ops.R1();
  const double dt = cfg.dt;

  Eigen::SparseMatrix<double> I(n, n), A;
  I.setIdentity();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  if (cfg.scheme == Scheme::ImplicitMidpoint) {
    A = I - (0.5 * dt) * L;
    A.makeCompressed();
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorKind::LinearSolveFailure, "integrator", "sparse LU factorization failed");
  }

  TrajectoryRecord<S> tr;
  tr.model = tag;
  tr.l = ops.l;
  tr.scheme = cfg.scheme;
  tr.dt = dt;
  tr.record_every = cfg.record_every;

  Eigen::VectorXd x;
  T::pack(initial, x);
  const double norm0 = x.norm();
  const bool watch_blowup = p.delta >= 0.0 && p.kappa >= 0.0 && norm0 > 0.0;
  double dmid = 0.0, dtrap = 0.0;

  auto record = [&](int step) {
    S s = T::unpack(ops, x);
    tr.times.push_back(step * dt);
    tr.energy.push_back(T::energy(ops, p, s));
    tr.states.push_back(std::move(s));
    tr.dissipation_midpoint.push_back(dmid);
    tr.dissipation_trapezoid.push_back(dtrap);
  };
  record(0);

  Eigen::VectorXd b, xn, k1, k2, k3, k4;
  Eigen::VectorXd xlo = Eigen::VectorXd::Zero(n);
  for (int step = 1; step <= steps; ++step) {
    if (cfg.scheme == Scheme::ImplicitMidpoint) {
      // Increment form keeps roundoff relative to the step, not the state;
      // xlo carries the rounding error of the running sum x. The operator is
      // applied through the difference stencils rather than the assembled
      // matrix so a large but nearly constant potential does not cancel
      // catastrophically.
      T::pack(T::rhs(ops, p, T::unpack(ops, x)), b);
      b = dt * (b + L * xlo);
      k1 = lu.solve(b);
      const double bn = b.norm();
      if (lu.info() != Eigen::Success || !k1.allFinite())
        throw Error(ErrorKind::LinearSolveFailure, "integrator", "solve failed at step " + std::to_string(step));
      xn = x + k1;
      for (int i = 0; i < n; ++i) {
        const double bp = xn[i] - x[i];
        xlo[i] += (x[i] - (xn[i] - bp)) + (k1[i] - bp);
      }
      if (bn > 0.0) {
        const double res = (A * k1 - b).norm() / bn;
        if (res > cfg.linear_solver_tol)
          throw Error(ErrorKind::LinearSolveFailure, "integrator.linear_solver_tol",
                      "relative residual " + std::to_string(res) + " at step " + std::to_string(step));
      }
    } else {
      k1 = L * x;
      k2 = L * (x + 0.5 * dt * k1);
      k3 = L * (x + 0.5 * dt * k2);
      k4 = L * (x + dt * k3);
      xn = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const double a = x[ivt], c = xn[ivt];
    dmid += dt * p.delta * R1sq * 0.25 * (a + c) * (a + c);
    dtrap += dt * p.delta * R1sq * 0.5 * (a * a + c * c);
    x.swap(xn);
    if (!x.allFinite() || (watch_blowup && x.norm() > 1e6 * norm0))
      throw Error(ErrorKind::UnstableBlowup, "integrator",
                  "state norm grew beyond 1e6 x initial at step " + std::to_string(step));
    if (step % cfg.record_every == 0 || step == steps) record(step);
  }
  return tr;
}

template Eigen::SparseMatrix<double> assemble_generator<PotentialModeState>(const ModalOperatorSet&,
                                                                            const MaterialParams&);
template Eigen::SparseMatrix<double> assemble_generator<LagrangianModeState>(const ModalOperatorSet&,
                                                                             const MaterialParams&);
template Eigen::SparseMatrix<double> assemble_generator<EulerianModeState>(const ModalOperatorSet&,
                                                                           const MaterialParams&);
template PotentialTrajectory evolve(const ModalOperatorSet&, const MaterialParams&, const PotentialModeState&,
                                    const IntegratorConfig&, ModelTag);
template LagrangianTrajectory evolve(const ModalOperatorSet&, const MaterialParams&, const LagrangianModeState&,
                                     const IntegratorConfig&, ModelTag);
template EulerianTrajectory evolve(const ModalOperatorSet&, const MaterialParams&, const EulerianModeState&,
                                   const IntegratorConfig&, ModelTag);

PotentialTrajectory evolve(const ModalOperatorSet& ops, const MaterialParams& p, const PotentialModeState& s,
                           const IntegratorConfig& cfg) {
  return evolve<PotentialModeState>(ops, p, s, cfg, ModelTag::P);
}
LagrangianTrajectory evolve(const ModalOperatorSet& ops, const MaterialParams& p, const LagrangianModeState& s,
                            const IntegratorConfig& cfg) {
  return evolve<LagrangianModeState>(ops, p, s, cfg, ModelTag::L);
}
EulerianTrajectory evolve(const ModalOperatorSet& ops, const MaterialParams& p, const EulerianModeState& s,
                          const IntegratorConfig& cfg) {
  return evolve<EulerianModeState>(ops, p, s, cfg, ModelTag::E);
}

}  // namespace acbc
