#include "acousticbc/modal_ops.hpp"

#include <cmath>
#include <string>

#include "acousticbc/error.hpp"

namespace acbc {

void require_length(const Samples& x, size_t n, const char* field) {
  if (x.size() != n)
    throw Error(ErrorKind::LengthMismatch, field,
                "expected " + std::to_string(n) + " samples, got " + std::to_string(x.size()));
}

ModalOperatorSet assemble_mode_operators(const DomainSpec& d, const RadialGrid& g, int l) {
  if (l < 0) throw Error(ErrorKind::ValidationError, "l", "negative degree");
  if (g.N < 8 || static_cast<int>(g.r.size()) != g.N)
    throw Error(ErrorKind::GridTooCoarse, "N", "invalid grid");
  ModalOperatorSet ops;
  ops.l = l;
  ops.ll1 = static_cast<double>(l) * (l + 1);
  ops.lambda = ops.ll1 / (d.R1 * d.R1);
  ops.domain = d;
  ops.grid = g;
  const int N = g.N;
  ops.rf.resize(N + 1);
  ops.rf[0] = d.is_ball() ? 0.0 : d.R0;
  for (int f = 1; f < N; ++f) ops.rf[f] = 0.5 * (g.r[f - 1] + g.r[f]);
  ops.rf[N] = d.R1;
  ops.area.resize(N + 1);
  for (int f = 0; f <= N; ++f) ops.area[f] = ops.rf[f] * ops.rf[f];
  ops.w.resize(N);
  for (int j = 0; j < N; ++j) {
    const double a = ops.rf[j], b = ops.rf[j + 1];
    ops.w[j] = (b * b * b - a * a * a) / 3.0;
  }
  return ops;
}

double volume_integral(const ModalOperatorSet& ops, const Samples& phi) {
  require_length(phi, ops.N(), "phi");
  double s = 0.0;
  for (int j = 0; j < ops.N(); ++j) s += ops.w[j] * phi[j];
  return s;
}

double surface_trace(const ModalOperatorSet& ops, const Samples& phi, Boundary which, TraceOrder order) {
  require_length(phi, ops.N(), "phi");
  const int N = ops.N();
  const double h = ops.h();
  if (which == Boundary::Gamma0) {
    if (!ops.domain.has_gamma0()) throw Error(ErrorKind::NoGamma0, "which", "ball has no inner boundary");
    if (order == TraceOrder::Value) return phi[0];
    // outward normal points toward the center
    return -(-3.0 * phi[0] + 4.0 * phi[1] - phi[2]) / (2.0 * h);
  }
  if (order == TraceOrder::Value) return phi[N - 1];
  return (3.0 * phi[N - 1] - 4.0 * phi[N - 2] + phi[N - 3]) / (2.0 * h);
}

Samples face_grad(const ModalOperatorSet& ops, const Samples& u, double d_inner, double d_outer) {
  require_length(u, ops.N(), "u");
  const int N = ops.N();
  Samples F(N + 1);
  F[0] = ops.domain.is_ball() ? 0.0 : d_inner;
  for (int f = 1; f < N; ++f) F[f] = (u[f] - u[f - 1]) / ops.h();
  F[N] = d_outer;
  return F;
}

Samples div_mode(const ModalOperatorSet& ops, const Samples& F, const Samples& G) {
  const int N = ops.N();
  require_length(F, N + 1, "F");
  require_length(G, N, "G");
  const auto& r = ops.r();
  Samples D(N);
  for (int j = 0; j < N; ++j) {
    double v = (ops.area[j + 1] * F[j + 1] - ops.area[j] * F[j]) / ops.w[j];
    if (ops.l > 0) v -= ops.ll1 * G[j] / r[j];
    D[j] = v;
  }
  return D;
}

Samples over_r(const ModalOperatorSet& ops, const Samples& u) {
  require_length(u, ops.N(), "u");
  Samples G(ops.N());
  for (int j = 0; j < ops.N(); ++j) G[j] = u[j] / ops.r()[j];
  return G;
}

Samples lap(const ModalOperatorSet& ops, const Samples& u, double d_inner, double d_outer) {
  return div_mode(ops, face_grad(ops, u, d_inner, d_outer), over_r(ops, u));
}

Samples d1(const ModalOperatorSet& ops, const Samples& u) {
  require_length(u, ops.N(), "u");
  const int N = ops.N();
  const double h = ops.h();
  Samples D(N);
  for (int j = 1; j < N - 1; ++j) D[j] = (u[j + 1] - u[j - 1]) / (2.0 * h);
  if (ops.domain.is_ball()) {
    const double parity = (ops.l % 2 == 0) ? 1.0 : -1.0;
    D[0] = (u[1] - parity * u[0]) / (2.0 * h);
  } else {
    D[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  }
  D[N - 1] = (3.0 * u[N - 1] - 4.0 * u[N - 2] + u[N - 3]) / (2.0 * h);
  return D;
}

double face_inner(const ModalOperatorSet& ops, const Samples& a, const Samples& b) {
  const int N = ops.N();
  require_length(a, N + 1, "a");
  require_length(b, N + 1, "b");
  double s = 0.0;
  for (int f = 1; f < N; ++f) s += ops.area[f] * a[f] * b[f];
  return s * ops.h();
}

Samples curl_defect(const ModalOperatorSet& ops, const Samples& F, const Samples& G) {
  const int N = ops.N();
  require_length(F, N + 1, "F");
  require_length(G, N, "G");
  const auto& r = ops.r();
  Samples c(N + 1, 0.0);
  for (int f = 1; f < N; ++f) c[f] = F[f] - (r[f] * G[f] - r[f - 1] * G[f - 1]) / ops.h();
  return c;
}

}  // namespace acbc
