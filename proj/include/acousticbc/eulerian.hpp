/// @file eulerian.hpp
/// @brief Pressure/velocity model: p on nodes, velocity (f on faces, g on nodes).
#pragma once

#include <optional>

#include "acousticbc/material.hpp"
#include "acousticbc/modal_ops.hpp"
#include "acousticbc/reports.hpp"

namespace acbc {

// Face N of f stores the outer normal velocity; the divergence is closed
// with f_N = -vt.
struct EulerianModeState {
  int l = 0;
  Samples p, f, g;
  double v = 0.0, vt = 0.0;

  static EulerianModeState zero(const ModalOperatorSet& ops);
  double max_abs() const;
};

void validate(const ModalOperatorSet& ops, const EulerianModeState& s);

EulerianModeState eulerian_rhs(const ModalOperatorSet& ops, const MaterialParams& p_mat,
                               const EulerianModeState& s);

EnergyBreakdown eulerian_energy(const ModalOperatorSet& ops, const MaterialParams& p_mat,
                                const EulerianModeState& s);

// sqrt(4 pi) [int p r^2 dr - B R1^2 v] for l = 0, zero otherwise.
double eulerian_constraint(const ModalOperatorSet& ops, const MaterialParams& p_mat,
                           const EulerianModeState& s);

CompatReport check_compat_eulerian(const ModalOperatorSet& ops, const MaterialParams& p_mat,
                                   const EulerianModeState& s, int order,
                                   std::optional<double> tol = std::nullopt);

}  // namespace acbc
