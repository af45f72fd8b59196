/// @file lagrangian.hpp
/// @brief Displacement model in first-order form: r = (F, G) per mode, s = (Ft, Gt).
#pragma once

#include <optional>

#include "acousticbc/material.hpp"
#include "acousticbc/modal_ops.hpp"
#include "acousticbc/reports.hpp"

namespace acbc {

// F, Ft on faces (N+1), G, Gt on nodes (N, held at zero for l = 0).
// Face N stores the outer normal trace; the dynamics close the divergence
// with F_N = -v and Ft_N = -vt.
struct LagrangianModeState {
  int l = 0;
  Samples F, G;
  double v = 0.0;
  Samples Ft, Gt;
  double vt = 0.0;

  static LagrangianModeState zero(const ModalOperatorSet& ops);
  double max_abs() const;
};

void validate(const ModalOperatorSet& ops, const LagrangianModeState& s);

// Modal Div r with the closure F_N = -v, F_0 = 0.
Samples lagrangian_div(const ModalOperatorSet& ops, const LagrangianModeState& s);

LagrangianModeState lagrangian_rhs(const ModalOperatorSet& ops, const MaterialParams& p,
                                   const LagrangianModeState& s);

EnergyBreakdown lagrangian_energy(const ModalOperatorSet& ops, const MaterialParams& p,
                                  const LagrangianModeState& s);

CompatReport check_compat_lagrangian(const ModalOperatorSet& ops, const MaterialParams& p,
                                     const LagrangianModeState& s, int order,
                                     std::optional<double> tol = std::nullopt);

}  // namespace acbc
