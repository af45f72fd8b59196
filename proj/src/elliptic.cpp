#include "acousticbc/elliptic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "acousticbc/error.hpp"

namespace acbc {

namespace {

// Thomas algorithm for a symmetric tridiagonal system (diag, off, rhs).
Samples solve_tridiag(Samples diag, const Samples& off, Samples rhs) {
  const size_t n = diag.size();
  for (size_t i = 1; i < n; ++i) {
    const double piv = diag[i - 1];
    if (!(std::abs(piv) > 1e-300) || !std::isfinite(piv))
      throw Error(ErrorKind::SingularSystem, "psi", "zero pivot at row " + std::to_string(i - 1));
    const double m = off[i - 1] / piv;
    diag[i] -= m * off[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  if (!(std::abs(diag[n - 1]) > 1e-300) || !std::isfinite(diag[n - 1]))
    throw Error(ErrorKind::SingularSystem, "psi", "zero pivot at last row");
  Samples x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - off[i] * x[i + 1]) / diag[i];
  return x;
}

}  // namespace

double check_div_curl_compat(const ModalOperatorSet& ops, const MaterialParams& p, const DivCurlProblem& prob) {
  require_length(prob.w, ops.N(), "w");
  if (prob.l != 0) return 0.0;
  return std::sqrt(4.0 * std::numbers::pi) *
         (p.rho0 * volume_integral(ops, prob.w) - p.B * ops.R1() * ops.R1() * prob.vbar);
}

DivCurlSolution solve_div_curl(const ModalOperatorSet& ops, const MaterialParams& p, const DivCurlProblem& prob,
                               double compat_tol) {
  if (prob.l != ops.l) throw Error(ErrorKind::DegreeMismatch, "l", "problem degree differs from operators");
  require_length(prob.w, ops.N(), "w");
  const int N = ops.N();
  const double h = ops.h();
  const auto& r = ops.r();

  if (ops.l == 0) {
    double scale = 0.0;
    for (int j = 0; j < N; ++j) scale += ops.w[j] * std::abs(prob.w[j]);
    scale = std::sqrt(4.0 * std::numbers::pi) * (p.rho0 * scale + p.B * ops.R1() * ops.R1() * std::abs(prob.vbar));
    const double res = check_div_curl_compat(ops, p, prob);
    if (std::abs(res) > compat_tol * (1.0 + scale))
      throw Error(ErrorKind::IncompatibleData, "w,vbar",
                  "l=0 compatibility residual " + std::to_string(res) + " exceeds tolerance");
  }

  // Volume-weighted negative Laplacian with homogeneous boundary fluxes.
  Samples diag(N), off(N - 1), rhs(N);
  for (int j = 0; j < N; ++j) {
    double d = 0.0;
    if (j < N - 1) d += ops.area[j + 1] / h;
    if (j > 0) d += ops.area[j] / h;
    d += ops.ll1 * ops.w[j] / (r[j] * r[j]);
    diag[j] = d;
    rhs[j] = ops.w[j] * p.rho0 * prob.w[j] / p.B;
  }
  for (int j = 0; j < N - 1; ++j) off[j] = -ops.area[j + 1] / h;
  rhs[N - 1] -= ops.area[N] * prob.vbar;

  Samples psi;
  if (ops.l > 0) {
    psi = solve_tridiag(diag, off, rhs);
  } else {
    // Pin the outermost node, drop its (redundant) equation, then shift to zero mean.
    Samples d2(diag.begin(), diag.end() - 1), o2(off.begin(), off.end() - 1), b2(rhs.begin(), rhs.end() - 1);
    psi = solve_tridiag(d2, o2, b2);
    psi.push_back(0.0);
    double mean = 0.0, vol = 0.0;
    for (int j = 0; j < N; ++j) {
      mean += ops.w[j] * psi[j];
      vol += ops.w[j];
    }
    mean /= vol;
    for (double& x : psi) x -= mean;
  }

  DivCurlSolution sol;
  sol.F = face_grad(ops, psi, 0.0, -prob.vbar);
  sol.G = ops.l > 0 ? over_r(ops, psi) : Samples(N, 0.0);
  sol.psi = std::move(psi);
  return sol;
}

}  // namespace acbc
