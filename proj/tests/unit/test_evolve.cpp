#include <cmath>
#include <numbers>

#include "acousticbc/error.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace acbc;
using acbc::testing::mode_ops;

namespace {

const MaterialParams kMat{1.3, 1.7, 0.8, 1.1, 0.0, 0.9};

double max_diff(const PotentialModeState& a, const PotentialModeState& b) {
  double e = std::max(std::abs(a.v - b.v), std::abs(a.vt - b.vt));
  for (size_t j = 0; j < a.u.size(); ++j) e = std::max({e, std::abs(a.u[j] - b.u[j]), std::abs(a.ut[j] - b.ut[j])});
  return e;
}

}  // namespace

TEST_CASE("zero data stays zero") {
  const auto o = mode_ops(0.5, 1.0, 32, 1);
  const auto tr = evolve(o, kMat, LagrangianModeState::zero(o), IntegratorConfig{1e-2, 1.0});
  CHECK(tr.states.size() == 101);
  for (const auto& s : tr.states) CHECK(s.max_abs() == 0.0);
  const EnergyAudit a = audit_energy(tr);
  CHECK(a.E0 == 0.0);
  CHECK(a.residual_midpoint == 0.0);
  CHECK(std::isfinite(a.max_relative_drift));
}

TEST_CASE("semigroup property") {
  MaterialParams m = kMat;
  m.delta = 0.4;
  for (int l = 0; l <= 2; ++l) {
    const auto o = mode_ops(0.0, 1.0, 32, l);
    const PotentialModeState s0 = random_potential_state(o, m, 12, true);
    const auto whole = evolve(o, m, s0, IntegratorConfig{1e-2, 2.0});
    const auto first = evolve(o, m, s0, IntegratorConfig{1e-2, 1.0});
    const auto second = evolve(o, m, first.states.back(), IntegratorConfig{1e-2, 1.0});
    CHECK(max_diff(second.states.back(), whole.states.back()) < 1e-12 * (1.0 + s0.max_abs()));
  }
}

// The potential is velocity-like: reversal flips u and vt, keeps ut and v.
TEST_CASE("time reversal with negated damping") {
  MaterialParams fwd = kMat, bwd = kMat;
  fwd.delta = 0.4;
  bwd.delta = -0.4;
  const auto o = mode_ops(0.5, 1.0, 32, 1);
  const PotentialModeState s0 = random_potential_state(o, fwd, 21, true);
  PotentialModeState s = evolve(o, fwd, s0, IntegratorConfig{1e-2, 1.0}).states.back();
  for (double& x : s.u) x = -x;
  s.vt = -s.vt;
  PotentialModeState back = evolve(o, bwd, s, IntegratorConfig{1e-2, 1.0}).states.back();
  for (double& x : back.u) x = -x;
  back.vt = -back.vt;
  CHECK(max_diff(back, s0) < 1e-11);
}

TEST_CASE("normal-mode oscillation frequency") {
  // Midpoint maps a normal mode of frequency w to one of frequency
  // (2/dt) atan(w dt / 2); the zero crossings of v measure it.
  const auto o = mode_ops(0.5, 1.0, 48, 1);
  std::vector<double> w;
  const PotentialModeState s0 = acbc::testing::lowest_modes(o, kMat, 1, &w);
  const double dt = 5e-3, T = 80.0;
  const auto tr = evolve(o, kMat, s0, IntegratorConfig{dt, T});
  std::vector<double> zeros;
  for (size_t n = 1; n < tr.states.size(); ++n) {
    const double a = tr.states[n - 1].v, b = tr.states[n].v;
    if ((a < 0.0) != (b < 0.0)) {
      // cubic interpolation through four samples around the sign change
      const double t0 = tr.times[n - 1];
      if (n < 2 || n + 1 >= tr.states.size()) continue;
      const double ym = tr.states[n - 2].v, y0 = a, y1 = b, y2 = tr.states[n + 1].v;
      auto p = [&](double x) {
        return -x * (x - 1) * (x - 2) / 6 * ym + (x + 1) * (x - 1) * (x - 2) / 2 * y0 -
               (x + 1) * x * (x - 2) / 2 * y1 + (x + 1) * x * (x - 1) / 6 * y2;
      };
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((p(lo) < 0.0) == (p(mid) < 0.0) ? lo : hi) = mid;
      }
      zeros.push_back(t0 + dt * 0.5 * (lo + hi));
    }
  }
  REQUIRE(zeros.size() > 10);
  const double measured = std::numbers::pi * (zeros.size() - 1) / (zeros.back() - zeros.front());
  const double predicted = 2.0 / dt * std::atan(w[0] * dt / 2.0);
  CHECK(measured == doctest::Approx(predicted).epsilon(1e-6));
  CHECK(std::abs(predicted - w[0]) / w[0] < 1e-5);
}

TEST_CASE("RK4 agrees with midpoint on smooth data") {
  const auto o = mode_ops(0.5, 1.0, 32, 2);
  const PotentialModeState s0 = acbc::testing::lowest_modes(o, kMat, 2);
  IntegratorConfig a{5e-4, 0.5}, b = a;
  b.scheme = Scheme::ExplicitRK4;
  CHECK(trajectory_discrepancy(o, evolve(o, kMat, s0, a), evolve(o, kMat, s0, b), false) < 1e-6);
}

TEST_CASE("integrator configuration errors") {
  const auto o = mode_ops(0.5, 1.0, 16, 0);
  const auto s = PotentialModeState::zero(o);
  CHECK_THROWS_AS(evolve(o, kMat, s, IntegratorConfig{0.0, 1.0}), Error);
  CHECK_THROWS_AS(evolve(o, kMat, s, IntegratorConfig{0.3, 1.0}), Error);
  CHECK_THROWS_AS(evolve<PotentialModeState>(o, kMat, s, IntegratorConfig{0.1, 1.0}, ModelTag::E), Error);
  PotentialModeState bad = s;
  bad.v = 1.0;  // violates the l = 0 constraint
  try {
    evolve<PotentialModeState>(o, kMat, bad, IntegratorConfig{0.1, 1.0}, ModelTag::Pc);
    FAIL("constraint not enforced");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConstraintViolated);
  }
  CHECK_NOTHROW(evolve<PotentialModeState>(o, kMat, bad, IntegratorConfig{0.1, 1.0}, ModelTag::P));
}

TEST_CASE("records follow record_every and carry dissipation") {
  MaterialParams m = kMat;
  m.delta = 0.5;
  const auto o = mode_ops(0.5, 1.0, 32, 1);
  IntegratorConfig cfg{1e-2, 1.0};
  cfg.record_every = 10;
  const auto tr = evolve(o, m, random_potential_state(o, m, 3, true), cfg);
  REQUIRE(tr.times.size() == 11);
  CHECK(tr.times.back() == doctest::Approx(1.0));
  CHECK(tr.dissipation_midpoint.front() == 0.0);
  CHECK(tr.dissipation_midpoint.back() > 0.0);
  const EnergyAudit a = audit_energy(tr);
  CHECK(a.residual_midpoint < 1e-12 * a.E0);
}

TEST_CASE("trapezoid dissipation residual shrinks fourfold per halving") {
  MaterialParams m = kMat;
  m.delta = 0.5;
  const auto o = mode_ops(0.0, 1.0, 32, 0);
  const auto s0 = random_potential_state(o, m, 5, true);
  const double a = audit_energy(evolve(o, m, s0, IntegratorConfig{2e-2, 1.0})).residual_trapezoid;
  const double b = audit_energy(evolve(o, m, s0, IntegratorConfig{1e-2, 1.0})).residual_trapezoid;
  CHECK(a / b >= 3.5);
}

TEST_CASE("weak residual test functions are checked") {
  const auto ball = mode_ops(0.0, 1.0, 32, 0);
  const auto shell = mode_ops(0.5, 1.0, 32, 1);
  const auto tP = evolve(ball, kMat, random_potential_state(ball, kMat, 1, true), IntegratorConfig{1e-2, 1.0});
  const auto tL = evolve(shell, kMat, map_potential_to_lagrangian(shell, kMat, random_potential_state(shell, kMat, 1, true)),
                         IntegratorConfig{1e-2, 1.0});
  auto kind = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ValidationError;
  };
  // odd power is not smooth through the origin for l = 0
  CHECK(kind([&] { audit_weak_residual(ball, kMat, tP, {{"odd", Polynomial{{0.0, 1.0}}, {0.0, 1.0}}}); }) ==
        ErrorKind::InadmissibleTestFunction);
  // window past the horizon
  CHECK(kind([&] { audit_weak_residual(ball, kMat, tP, {{"late", Polynomial{{1.0}}, {0.5, 2.0}}}); }) ==
        ErrorKind::InadmissibleTestFunction);
  // vector test field with a normal trace on the inner sphere
  CHECK(kind([&] { audit_weak_residual(shell, kMat, tL, {{"trace", Polynomial{{0.0, 1.0}}, {0.0, 1.0}}}); }) ==
        ErrorKind::InadmissibleTestFunction);
  for (const auto& w : audit_weak_residual(ball, kMat, tP, default_test_family(ball, 1.0)))
    CHECK(w.relative() < 1e-2);
}

TEST_CASE("conservation audit on zero and stationary data") {
  const auto o = mode_ops(0.0, 1.0, 32, 0);
  const auto tr = evolve(o, kMat, stationary_drift_state(o, kMat, 0.5, kMat.kappa), IntegratorConfig{1e-2, 2.0});
  const ConservationAudit c = audit_conservation(o, kMat, tr);
  CHECK(c.horizon == doctest::Approx(2.0));
  CHECK(c.constraint_drift < 1e-13);
  CHECK(c.curl_drift == 0.0);
}
