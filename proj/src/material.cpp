#include "acousticbc/material.hpp"

#include <cmath>
#include <string>

#include "acousticbc/error.hpp"

namespace acbc {

namespace {
void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw Error(ErrorKind::AssumptionAViolated, name, std::string(name) + " must be > 0");
}
}  // namespace

MaterialParams validate_params(const MaterialParams& p) {
  require_positive(p.rho0, "rho0");
  require_positive(p.B, "B");
  require_positive(p.mu, "mu");
  require_positive(p.sigma, "sigma");
  if (!std::isfinite(p.delta)) throw Error(ErrorKind::AssumptionAViolated, "delta", "not finite");
  if (!std::isfinite(p.kappa)) throw Error(ErrorKind::AssumptionAViolated, "kappa", "not finite");
  return p;
}

}  // namespace acbc
