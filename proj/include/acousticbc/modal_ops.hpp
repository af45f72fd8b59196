/// @file modal_ops.hpp
/// @brief Per-degree radial operators on a staggered (node/face) layout.
///
/// Scalars live on the N nodes. Radial vector components live on N+1 faces:
/// face f sits between nodes f-1 and f, face 0 is r = R0 (or the origin for
/// the ball, where its area vanishes) and face N is r = R1. Node j owns the
/// cell [rf_j, rf_{j+1}], so the boundary nodes own half cells.
#pragma once

#include <vector>

#include "acousticbc/domain.hpp"

namespace acbc {

using Samples = std::vector<double>;

struct ModalOperatorSet {
  int l = 0;
  double ll1 = 0.0;     // l(l+1)
  double lambda = 0.0;  // l(l+1)/R1^2
  DomainSpec domain;
  RadialGrid grid;
  std::vector<double> rf;    // face radii, N+1
  std::vector<double> area;  // rf^2
  std::vector<double> w;     // cell volumes: integral of r^2 over the cell

  int N() const { return grid.N; }
  double h() const { return grid.h; }
  const std::vector<double>& r() const { return grid.r; }
  double R1() const { return domain.R1; }
};

ModalOperatorSet assemble_mode_operators(const DomainSpec& d, const RadialGrid& g, int l);

// sum_j w_j phi_j  ~  integral of phi r^2 dr
double volume_integral(const ModalOperatorSet& ops, const Samples& phi);

enum class Boundary { Gamma0, Gamma1 };
enum class TraceOrder { Value, NormalDerivative };

// Normal derivative uses the outward normal, one-sided second-order stencil.
double surface_trace(const ModalOperatorSet& ops, const Samples& phi, Boundary which, TraceOrder order);

// Face gradient; interior faces are differences, boundary faces take the
// supplied radial derivatives (inner ignored for the ball).
Samples face_grad(const ModalOperatorSet& ops, const Samples& u, double d_inner, double d_outer);

// Modal divergence of (F on faces, G on nodes): (r^2 F)'/r^2 - l(l+1) G / r.
Samples div_mode(const ModalOperatorSet& ops, const Samples& F, const Samples& G);

// div_mode(face_grad(u), u / r)
Samples lap(const ModalOperatorSet& ops, const Samples& u, double d_inner, double d_outer);

// u / r at nodes: tangential profile of a gradient field
Samples over_r(const ModalOperatorSet& ops, const Samples& u);

// Collocated derivative at nodes: central inside, one-sided second order at a
// shell end, parity ghost (-1)^l at the first ball node.
Samples d1(const ModalOperatorSet& ops, const Samples& u);

// sum over interior faces of area * h * a * b
double face_inner(const ModalOperatorSet& ops, const Samples& a, const Samples& b);

// Curl defect on interior faces: F_f - (r G)'_f. Boundary entries are 0.
Samples curl_defect(const ModalOperatorSet& ops, const Samples& F, const Samples& G);

void require_length(const Samples& x, size_t n, const char* field);

}  // namespace acbc
