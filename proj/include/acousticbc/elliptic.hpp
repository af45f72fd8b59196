/// @file elliptic.hpp
/// @brief Curl-free field with prescribed divergence and outer normal trace.
///
/// Solves -B Div r = rho0 w, r.nu = -vbar on the outer sphere, r.nu = 0 on the
/// inner one, through the Neumann problem for r = grad psi.
#pragma once

#include <optional>

#include "acousticbc/material.hpp"
#include "acousticbc/modal_ops.hpp"

namespace acbc {

struct DivCurlProblem {
  int l = 0;
  Samples w;
  double vbar = 0.0;
};

struct DivCurlSolution {
  Samples F;    // faces, F_N = -vbar
  Samples G;    // nodes, psi / r (zero for l = 0)
  Samples psi;  // zero volume mean for l = 0
};

// sqrt(4 pi) [rho0 int w r^2 dr - B R1^2 vbar] for l = 0, zero otherwise.
double check_div_curl_compat(const ModalOperatorSet& ops, const MaterialParams& p, const DivCurlProblem& prob);

// Relative threshold applied to the l = 0 compatibility residual.
inline constexpr double kDivCurlCompatTol = 1e-8;

DivCurlSolution solve_div_curl(const ModalOperatorSet& ops, const MaterialParams& p, const DivCurlProblem& prob,
                               double compat_tol = kDivCurlCompatTol);

}  // namespace acbc
