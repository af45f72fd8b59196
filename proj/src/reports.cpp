#include "acousticbc/reports.hpp"

#include <algorithm>
#include <cmath>

namespace acbc {

double CompatReport::max_abs() const {
  double m = 0.0;
  for (const auto& r : residuals) m = std::max(m, std::abs(r.value));
  return m;
}

double default_compat_tol(double state_norm) { return 1e-8 * (1.0 + state_norm); }

}  // namespace acbc
