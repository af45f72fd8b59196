// Brute-force 3-D quadrature against the single-mode reductions.
#include <gsl/gsl_integration.h>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"

using namespace acbc;
using acbc::testing::mode_ops;

namespace {

using Vec = std::array<double, 3>;

// Normalized real harmonics written as c P(x) / |x|^l with P homogeneous.
struct Harmonic {
  int l;
  double c;
  double P(const Vec& x) const {
    if (l == 0) return 1.0;
    if (l == 1) return x[2];
    return x[0] * x[1];
  }
  Vec gradP(const Vec& x) const {
    if (l == 0) return {0.0, 0.0, 0.0};
    if (l == 1) return {0.0, 0.0, 1.0};
    return {x[1], x[0], 0.0};
  }
};

Harmonic harmonic(int l) {
  const double pi = std::numbers::pi;
  if (l == 0) return {0, 1.0 / std::sqrt(4.0 * pi)};
  if (l == 1) return {1, std::sqrt(3.0 / (4.0 * pi))};
  return {2, std::sqrt(15.0 / (4.0 * pi))};
}

// grad of phi(r) Y(x): phi' x/r Y + phi c (grad P / r^l - l P x / r^(l+2))
Vec grad_field(const Harmonic& Y, double phi, double dphi, const Vec& x) {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  const double rl = std::pow(r, Y.l), P = Y.P(x);
  const Vec gP = Y.gradP(x);
  const double y = Y.c * P / rl;
  Vec g;
  for (int i = 0; i < 3; ++i)
    g[i] = dphi * x[i] / r * y + phi * Y.c * (gP[i] / rl - Y.l * P * x[i] / (rl * r * r));
  return g;
}

// Gauss-Legendre in r and cos(theta), trapezoid in the azimuth. GSL tabulates
// the 64-point rule; some other orders are computed and lose digits.
double ball_integral(double R0, double R1, const std::function<double(const Vec&)>& f, int n = 64) {
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
  const int naz = 64;
  long double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double r, wr;
    gsl_integration_glfixed_point(R0, R1, i, &r, &wr, t);
    for (int j = 0; j < n; ++j) {
      double mu, wm;
      gsl_integration_glfixed_point(-1.0, 1.0, j, &mu, &wm, t);
      const double s = std::sqrt(1.0 - mu * mu);
      for (int k = 0; k < naz; ++k) {
        const double ph = 2.0 * std::numbers::pi * k / naz;
        sum += wr * wm * (2.0 * std::numbers::pi / naz) * r * r * f({r * s * std::cos(ph), r * s * std::sin(ph), r * mu});
      }
    }
  }
  gsl_integration_glfixed_table_free(t);
  return static_cast<double>(sum);
}

double radial_integral(double R0, double R1, const std::function<double(double)>& f, int n = 64) {
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double r, w;
    gsl_integration_glfixed_point(R0, R1, i, &r, &w, t);
    sum += w * f(r);
  }
  gsl_integration_glfixed_table_free(t);
  return sum;
}

// Profiles with zero slope at both radial ends so the staggered quadrature is
// second order up to the boundary.
struct Profile {
  double R0, R1;
  int l;
  double f(double r) const {
    if (R0 > 0.0) return 1.0 + (r - R0) * (r - R0) * (R1 - r) * (R1 - r) * (1.0 + r);
    const double k = (2.0 * l + 2.0) / (l + 4.0);
    return std::pow(r, l) * (1.0 + r * r - k * r * r * r * r);
  }
  double d1(double r) const {
    const double e = 1e-6;
    return (f(r + e) - f(r - e)) / (2.0 * e);
  }
};

}  // namespace

TEST_CASE("single-mode reductions match 3-D quadrature") {
  for (double R0 : {0.0, 0.5})
    for (int l = 0; l <= 2; ++l) {
      const Harmonic Y = harmonic(l);
      const double R1 = 1.0;
      auto phi = [&](double r) { return std::cos(2.0 * r) * std::pow(r, l); };
      auto dphi = [&](double r) {
        return -2.0 * std::sin(2.0 * r) * std::pow(r, l) + (l ? l * std::cos(2.0 * r) * std::pow(r, l - 1) : 0.0);
      };
      const double grad3 = ball_integral(R0, R1, [&](const Vec& x) {
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const Vec g = grad_field(Y, phi(r), dphi(r), x);
        return g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
      });
      const double grad1 = radial_integral(R0, R1, [&](double r) {
        return r * r * dphi(r) * dphi(r) + l * (l + 1.0) * phi(r) * phi(r);
      });
      CHECK(grad3 == doctest::Approx(grad1).epsilon(1e-12));
      const double mean3 = ball_integral(R0, R1, [&](const Vec& x) {
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        return phi(r) * Y.c * Y.P(x) / std::pow(r, l);
      });
      const double mean1 = l == 0 ? std::sqrt(4.0 * std::numbers::pi) * radial_integral(R0, R1, [&](double r) {
        return phi(r) * r * r;
      })
                                  : 0.0;
      CHECK(std::abs(mean3 - mean1) < 1e-12);
    }
}

TEST_CASE("surface gradient of a harmonic integrates to l(l+1)") {
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(32);
  for (double R : {1.0, 1.5})
    for (int l = 0; l <= 2; ++l) {
      const Harmonic Y = harmonic(l);
      double s = 0.0, s2 = 0.0;
      const int naz = 64;
      for (int j = 0; j < 32; ++j) {
        double mu, wm;
        gsl_integration_glfixed_point(-1.0, 1.0, j, &mu, &wm, t);
        const double st = std::sqrt(1.0 - mu * mu);
        for (int k = 0; k < naz; ++k) {
          const double ph = 2.0 * std::numbers::pi * k / naz;
          const Vec x{R * st * std::cos(ph), R * st * std::sin(ph), R * mu};
          // Y is homogeneous of degree 0, so its gradient is tangential
          const Vec g = grad_field(Y, 1.0, 0.0, x);
          const double y = Y.c * Y.P(x) / std::pow(R, l);
          const double dA = wm * (2.0 * std::numbers::pi / naz) * R * R;
          s += dA * (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
          s2 += dA * y * y;
        }
      }
      CHECK(s == doctest::Approx(l * (l + 1.0)).epsilon(1e-12));
      CHECK(s2 == doctest::Approx(R * R).epsilon(1e-12));
      MaterialParams p;
      p.sigma = 1.7;
      const auto o = mode_ops(0.0, R, 16, l);
      PotentialModeState st = PotentialModeState::zero(o);
      st.v = 0.6;
      const EnergyBreakdown e = potential_energy(o, p, st);
      CHECK(e.membrane_tension == doctest::Approx(0.5 * p.sigma * s * st.v * st.v).epsilon(1e-10));
      CHECK(e.membrane_stiffness == doctest::Approx(0.5 * p.kappa * s2 * st.v * st.v).epsilon(1e-10));
    }
  gsl_integration_glfixed_table_free(t);
}

TEST_CASE("discrete acoustic energy converges to the 3-D integral") {
  MaterialParams p;
  p.rho0 = 1.3;
  p.B = 1.7;
  for (double R0 : {0.0, 0.5})
    for (int l = 0; l <= 2; ++l) {
      const Profile pr{R0, 1.0, l};
      const Harmonic Y = harmonic(l);
      const double exact = 0.5 * p.rho0 * ball_integral(R0, 1.0, [&](const Vec& x) {
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const Vec g = grad_field(Y, pr.f(r), pr.d1(r), x);
        return g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
      });
      const double exact_c = 0.5 * p.rho0 * p.rho0 / p.B * ball_integral(R0, 1.0, [&](const Vec& x) {
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const double y = pr.f(r) * Y.c * Y.P(x) / std::pow(r, l);
        return y * y;
      });
      double prev = 0.0, prev_c = 0.0;
      for (int N : {32, 64, 128}) {
        const auto o = mode_ops(R0, 1.0, N, l);
        PotentialModeState s = PotentialModeState::zero(o);
        for (int j = 0; j < N; ++j) s.u[j] = s.ut[j] = pr.f(o.r()[j]);
        const EnergyBreakdown e = potential_energy(o, p, s);
        const double err = std::abs(e.acoustic_kinetic - exact) / exact;
        const double err_c = std::abs(e.acoustic_compression - exact_c) / exact_c;
        if (prev > 0.0) {
          CHECK(acbc::testing::order(prev, err) > 1.7);
          CHECK(acbc::testing::order(prev_c, err_c) > 1.7);
        }
        prev = err;
        prev_c = err_c;
      }
      CHECK(prev < 1e-3);
    }
}
