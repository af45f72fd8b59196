#pragma once

namespace acbc {

// Constant coefficients on the membrane.
struct MaterialParams {
  double rho0 = 1.0;
  double B = 1.0;
  double mu = 1.0;
  double sigma = 1.0;
  double delta = 0.0;
  double kappa = 1.0;

  double c2() const { return B / rho0; }
};

// Throws AssumptionAViolated naming the first offending field.
MaterialParams validate_params(const MaterialParams& p);

}  // namespace acbc
