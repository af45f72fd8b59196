#pragma once

#include <string>
#include <vector>

namespace acbc {

// acoustic_kinetic is (rho0/2)|velocity|^2, acoustic_compression is p^2/(2B)
// in each model's own variables, so the terms line up across the maps.
struct EnergyBreakdown {
  double acoustic_kinetic = 0.0;
  double acoustic_compression = 0.0;
  double membrane_tension = 0.0;
  double membrane_kinetic = 0.0;
  double membrane_stiffness = 0.0;

  double total() const {
    return acoustic_kinetic + acoustic_compression + membrane_tension + membrane_kinetic +
           membrane_stiffness;
  }
};

struct Residual {
  std::string name;
  double value = 0.0;  // signed
};

struct CompatReport {
  int order = 2;
  double tol = 0.0;
  bool pass = true;
  std::vector<Residual> residuals;

  double max_abs() const;
};

// Compatibility threshold: 1e-8 * (1 + max-abs state entry)
double default_compat_tol(double state_norm);

}  // namespace acbc
