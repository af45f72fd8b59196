/// @file potential.hpp
/// @brief Velocity-potential model: wave equation for u coupled to the membrane.
#pragma once

#include <optional>

#include "acousticbc/material.hpp"
#include "acousticbc/modal_ops.hpp"
#include "acousticbc/reports.hpp"

namespace acbc {

struct PotentialModeState {
  int l = 0;
  Samples u, ut;
  double v = 0.0, vt = 0.0;

  static PotentialModeState zero(const ModalOperatorSet& ops);
  double max_abs() const;
};

void validate(const ModalOperatorSet& ops, const PotentialModeState& s);

// Time derivative; dut uses the Neumann closure du/dr = vt at R1, 0 at R0.
PotentialModeState potential_rhs(const ModalOperatorSet& ops, const MaterialParams& p,
                                 const PotentialModeState& s);

EnergyBreakdown potential_energy(const ModalOperatorSet& ops, const MaterialParams& p,
                                 const PotentialModeState& s);

// sqrt(4 pi) [rho0 int ut r^2 dr - B R1^2 v] for l = 0, zero otherwise.
double constraint_functional(const ModalOperatorSet& ops, const MaterialParams& p,
                             const PotentialModeState& s);

CompatReport check_compat_potential(const ModalOperatorSet& ops, const MaterialParams& p,
                                    const PotentialModeState& s, int order,
                                    std::optional<double> tol = std::nullopt);

}  // namespace acbc
