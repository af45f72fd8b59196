// Shared oracles for the unit and acceptance tests.
#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

#include "acousticbc/audit.hpp"
#include "acousticbc/error.hpp"
#include "acousticbc/presets.hpp"
#include "acousticbc/transforms.hpp"

namespace acbc::testing {

inline ModalOperatorSet mode_ops(double R0, double R1, int N, int l) {
  const auto [d, g] = make_domain(R0, R1, N);
  return assemble_mode_operators(d, g, l);
}

inline double order(double coarse, double fine, double ratio = 2.0) { return std::log(coarse / fine) / std::log(ratio); }

// Shell radial profile with prescribed radial Laplacian q, a polynomial in r:
// phi'' + 2 phi'/r = q, phi'(R0) = 0. phi' = P1/r^2 with P1 = int_R0^r s^2 q.
struct RadialFromLaplacian {
  double R0;
  Polynomial P1;
  RadialFromLaplacian(double r0, const Polynomial& q) : R0(r0) {
    const Polynomial s2q = Polynomial{{0.0, 0.0, 1.0}} * q;
    P1.c.assign(s2q.c.size() + 1, 0.0);
    for (std::size_t k = 0; k < s2q.c.size(); ++k) P1.c[k + 1] = s2q.c[k] / static_cast<double>(k + 1);
    P1.c[0] = -P1(R0);
  }
  double d1(double r) const { return P1(r) / (r * r); }
  double lap_radial(double r) const { return P1.d1(r) / (r * r); }
  double operator()(double r) const {
    double s = 0.0;
    for (std::size_t k = 0; k < P1.c.size(); ++k) {
      const double c = P1.c[k];
      if (k == 0) s -= c / r;
      else if (k == 1) s += c * std::log(r);
      else s += c * std::pow(r, static_cast<double>(k) - 1.0) / (static_cast<double>(k) - 1.0);
    }
    return s;
  }
};

// a + c (3 H x^2 - 2 x^3) with x = r - R0: derivative vanishes at both ends.
inline Polynomial flat_ended(double R0, double R1, double a, double c) {
  const double H = R1 - R0;
  const Polynomial x{{-R0, 1.0}};
  const Polynomial x2 = x * x, x3 = x2 * x;
  Polynomial q;
  q.c.assign(4, 0.0);
  q.c[0] = a;
  for (std::size_t k = 0; k < x2.c.size(); ++k) q.c[k] += 3.0 * H * c * x2.c[k];
  for (std::size_t k = 0; k < x3.c.size(); ++k) q.c[k] -= 2.0 * c * x3.c[k];
  return q;
}

struct MatchedData {
  PotentialModeState P;
  LagrangianModeState L;
  EulerianModeState E;
};

// Initial data for the three models sampled from one continuous solution on a
// shell: displacement grad(psi Y), potential u0 Y, ut = -(B/rho0) Lap psi.
// Each model gets its own point samples; no discrete map is involved. For
// l = 0, p and ut get one O(h^2) constant so the discrete constraint holds.
inline MatchedData analytic_matched_data(const ModalOperatorSet& o, const MaterialParams& m) {
  const double R0 = o.domain.R0, R1 = o.R1();
  const RadialFromLaplacian psi(R0, flat_ended(R0, R1, 1.0, -0.5));
  const RadialFromLaplacian u0(R0, flat_ended(R0, R1, -0.6, 0.4));
  const int N = o.N();
  MatchedData d{PotentialModeState::zero(o), LagrangianModeState::zero(o), EulerianModeState::zero(o)};
  const double v = -psi.d1(R1), vt = u0.d1(R1);
  for (int j = 0; j < N; ++j) {
    const double r = o.r()[j];
    const double lap = psi.lap_radial(r) - o.ll1 * psi(r) / (r * r);
    d.P.u[j] = u0(r);
    d.P.ut[j] = -m.B / m.rho0 * lap;
    d.E.p[j] = -m.B * lap;
    if (o.l > 0) {
      d.E.g[j] = -u0(r) / r;
      d.L.G[j] = psi(r) / r;
      d.L.Gt[j] = -u0(r) / r;
    }
  }
  for (int f = 0; f <= N; ++f) {
    const double r = o.rf[f];
    d.E.f[f] = -u0.d1(r);
    d.L.F[f] = psi.d1(r);
    d.L.Ft[f] = -u0.d1(r);
  }
  d.E.f[N] = -vt;
  d.L.F[N] = -v;
  d.L.Ft[N] = -vt;
  d.P.v = d.L.v = d.E.v = v;
  d.P.vt = d.L.vt = d.E.vt = vt;
  if (o.l == 0) {
    double vol = 0.0;
    for (double w : o.w) vol += w;
    const double c = (m.B * R1 * R1 * v - volume_integral(o, d.E.p)) / vol;
    for (int j = 0; j < N; ++j) {
      d.E.p[j] += c;
      d.P.ut[j] += c / m.rho0;
    }
  }
  return d;
}

// Real part of a weighted sum of the k lowest oscillatory eigenvectors of the
// potential generator; frequencies (imaginary parts) are returned in freqs.
inline PotentialModeState lowest_modes(const ModalOperatorSet& o, const MaterialParams& m, int k,
                                       std::vector<double>* freqs = nullptr) {
  const Eigen::MatrixXd L(assemble_generator<PotentialModeState>(o, m));
  Eigen::EigenSolver<Eigen::MatrixXd> es(L);
  std::vector<int> idx;
  for (int i = 0; i < L.rows(); ++i)
    if (es.eigenvalues()[i].imag() > 1e-3) idx.push_back(i);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return es.eigenvalues()[a].imag() < es.eigenvalues()[b].imag(); });
  Eigen::VectorXd x = Eigen::VectorXd::Zero(L.rows());
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXcd v = es.eigenvectors().col(idx[i]);
    v /= v.cwiseAbs().maxCoeff();
    x += v.real() / (i + 1.0);
    if (freqs) freqs->push_back(es.eigenvalues()[idx[i]].imag());
  }
  return ModelTraits<PotentialModeState>::unpack(o, x);
}

}  // namespace acbc::testing
