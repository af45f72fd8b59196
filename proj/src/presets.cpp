#include "acousticbc/presets.hpp"

#include <cmath>
#include <numbers>

#include "acousticbc/error.hpp"
#include "acousticbc/transforms.hpp"

namespace acbc {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

Samples random_profile(const ModalOperatorSet& ops, SplitMix64& rng, int terms) {
  std::vector<double> a(terms);
  for (int k = 0; k < terms; ++k) a[k] = (2.0 * rng.uniform() - 1.0) / ((1.0 + k) * (1.0 + k));
  const bool ball = ops.domain.is_ball();
  const double R0 = ops.domain.R0, R1 = ops.R1();
  Samples phi(ops.N());
  for (int j = 0; j < ops.N(); ++j) {
    const double r = ops.r()[j];
    const double x = ball ? r / R1 : (r - R0) / (R1 - R0);
    double s = 0.0;
    for (int k = 0; k < terms; ++k) s += a[k] * std::cos(k * std::numbers::pi * x);
    phi[j] = ball ? s * std::pow(r / R1, ops.l) : s;
  }
  return phi;
}

PotentialModeState random_potential_state(const ModalOperatorSet& ops, const MaterialParams& p, std::uint64_t seed,
                                          bool constrained) {
  SplitMix64 rng(seed + static_cast<std::uint64_t>(ops.l));
  PotentialModeState s;
  s.l = ops.l;
  s.u = random_profile(ops, rng);
  s.ut = random_profile(ops, rng);
  if (ops.domain.has_gamma0()) s.u[0] = (4.0 * s.u[1] - s.u[2]) / 3.0;  // zero one-sided slope at R0
  s.v = 2.0 * rng.uniform() - 1.0;
  s.vt = surface_trace(ops, s.u, Boundary::Gamma1, TraceOrder::NormalDerivative);
  if (constrained && ops.l == 0) s.v = p.rho0 * volume_integral(ops, s.ut) / (p.B * ops.R1() * ops.R1());
  return s;
}

PotentialModeState stationary_drift_state(const ModalOperatorSet& ops, const MaterialParams& p, double u1, double k0) {
  if (k0 == 0.0) throw Error(ErrorKind::ValidationError, "initial_data.k0", "k0 must be nonzero");
  if (p.kappa != k0) throw Error(ErrorKind::ValidationError, "material.kappa", "stationary drift needs kappa == k0");
  PotentialModeState s = PotentialModeState::zero(ops);
  if (ops.l != 0) return s;
  std::fill(s.ut.begin(), s.ut.end(), u1);
  s.v = -p.rho0 * u1 / k0;
  return s;
}

namespace {

// psi, psi', psi'' of the manufactured potential
struct ManufacturedPsi {
  int l;
  bool ball;
  double R0;
  double operator()(double r) const {
    if (ball) return std::pow(r, l + 2) + 0.5 * std::pow(r, l + 4);
    if (l == 0) return r * r * r / 3.0 - R0 * R0 * r;
    return (r - R0) * (r - R0) * std::pow(r, l);
  }
  double d1(double r) const {
    if (ball) return (l + 2) * std::pow(r, l + 1) + 0.5 * (l + 4) * std::pow(r, l + 3);
    if (l == 0) return r * r - R0 * R0;
    return 2.0 * (r - R0) * std::pow(r, l) + l * (r - R0) * (r - R0) * std::pow(r, l - 1);
  }
  double d2(double r) const {
    if (ball) return (l + 2) * (l + 1) * std::pow(r, l) + 0.5 * (l + 4) * (l + 3) * std::pow(r, l + 2);
    if (l == 0) return 2.0 * r;
    const double x = r - R0;
    double s = 2.0 * std::pow(r, l) + 4.0 * l * x * std::pow(r, l - 1);
    if (l > 1) s += l * (l - 1) * x * x * std::pow(r, l - 2);
    return s;
  }
};

ManufacturedPsi manufactured_psi(const ModalOperatorSet& ops) {
  return {ops.l, ops.domain.is_ball(), ops.domain.R0};
}

}  // namespace

LagrangianModeState manufactured_lagrangian_state(const ModalOperatorSet& ops) {
  const ManufacturedPsi psi = manufactured_psi(ops);
  Samples ps(ops.N());
  for (int j = 0; j < ops.N(); ++j) ps[j] = psi(ops.r()[j]);
  LagrangianModeState s = LagrangianModeState::zero(ops);
  s.v = -psi.d1(ops.R1());
  s.F = face_grad(ops, ps, 0.0, -s.v);
  if (ops.l > 0) s.G = over_r(ops, ps);
  return s;
}

ManufacturedDivCurl manufactured_div_curl(const ModalOperatorSet& ops, const MaterialParams& p) {
  const ManufacturedPsi psi = manufactured_psi(ops);
  const int N = ops.N();
  ManufacturedDivCurl m;
  m.problem.l = ops.l;
  m.problem.vbar = -psi.d1(ops.R1());
  m.problem.w.resize(N);
  m.G.assign(N, 0.0);
  for (int j = 0; j < N; ++j) {
    const double r = ops.r()[j];
    const double lap_psi = psi.d2(r) + 2.0 * psi.d1(r) / r - ops.ll1 * psi(r) / (r * r);
    m.problem.w[j] = -p.B / p.rho0 * lap_psi;
    if (ops.l > 0) m.G[j] = psi(r) / r;
  }
  if (ops.l == 0) {
    double vol = 0.0;
    for (double w : ops.w) vol += w;
    const double shift = check_div_curl_compat(ops, p, m.problem) / (std::sqrt(4.0 * std::numbers::pi) * p.rho0 * vol);
    for (double& w : m.problem.w) w -= shift;
  }
  m.F.resize(N + 1);
  for (int f = 0; f <= N; ++f) m.F[f] = psi.d1(ops.rf[f]);
  if (ops.domain.is_ball()) m.F[0] = 0.0;
  return m;
}

ModeState make_initial_state(const ModalOperatorSet& ops, const MaterialParams& p, ModelTag tag,
                             const InitialDataRecipe& rc) {
  const bool constrained = is_constrained(tag) || tag == ModelTag::L;
  switch (rc.kind) {
    case PresetKind::Zero:
      if (tag == ModelTag::L) return LagrangianModeState::zero(ops);
      if (tag == ModelTag::E || tag == ModelTag::Ec) return EulerianModeState::zero(ops);
      return PotentialModeState::zero(ops);
    case PresetKind::StationaryDrift: {
      if (constrained)
        throw Error(ErrorKind::ValidationError, "initial_data.preset",
                    "stationary-drift data violates the integral constraint; use model P or E");
      const PotentialModeState s = stationary_drift_state(ops, p, rc.u1, rc.k0);
      if (tag == ModelTag::E) return map_potential_to_eulerian(ops, p, s);
      return s;
    }
    case PresetKind::ManufacturedElliptic: {
      const LagrangianModeState s = manufactured_lagrangian_state(ops);
      if (tag == ModelTag::L) return s;
      if (tag == ModelTag::E || tag == ModelTag::Ec) return map_lagrangian_to_eulerian(ops, p, s);
      LagrangianTrajectory one;
      one.l = ops.l;
      one.times = {0.0};
      one.states = {s};
      return map_lagrangian_to_potential(ops, p, one).states.front();
    }
    case PresetKind::RandomCompatible: {
      const PotentialModeState s = random_potential_state(ops, p, rc.seed, constrained);
      if (tag == ModelTag::L) return map_potential_to_lagrangian(ops, p, s);
      if (tag == ModelTag::E || tag == ModelTag::Ec) return map_potential_to_eulerian(ops, p, s);
      return s;
    }
  }
  throw Error(ErrorKind::ValidationError, "initial_data.preset", "unknown preset");
}

}  // namespace acbc
