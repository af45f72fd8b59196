/// @file presets.hpp
/// @brief Named initial-data recipes and the portable random generator.
#pragma once

#include <cstdint>
#include <variant>

#include "acousticbc/elliptic.hpp"
#include "acousticbc/evolve.hpp"

namespace acbc {

// splitmix64; doubles are (x >> 11) * 2^-53 in [0, 1).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();

 private:
  std::uint64_t state_;
};

// Smooth random radial profile, regular at the origin for the ball.
Samples random_profile(const ModalOperatorSet& ops, SplitMix64& rng, int terms = 6);

// Order-2 compatible potential data; with constrained set, v is chosen so the
// l = 0 constraint vanishes. The stream is seeded with seed + l.
PotentialModeState random_potential_state(const ModalOperatorSet& ops, const MaterialParams& p, std::uint64_t seed,
                                          bool constrained);

// Stationary-drift solution: u = 0, ut = u1, v = -rho0 u1 / k0, vt = 0 (l = 0),
// zero for other degrees. Requires kappa == k0.
PotentialModeState stationary_drift_state(const ModalOperatorSet& ops, const MaterialParams& p, double u1, double k0);

// Static displacement r = grad psi with a polynomial psi, zero velocity.
LagrangianModeState manufactured_lagrangian_state(const ModalOperatorSet& ops);

// Div/curl problem whose exact solution is grad psi for the same polynomial
// psi. For l = 0 the sampled source is shifted by a constant, O(h^2), so the
// discrete compatibility condition holds exactly.
struct ManufacturedDivCurl {
  DivCurlProblem problem;
  Samples F;  // exact psi' at faces
  Samples G;  // exact psi / r at nodes
};
ManufacturedDivCurl manufactured_div_curl(const ModalOperatorSet& ops, const MaterialParams& p);

enum class PresetKind { Zero, StationaryDrift, ManufacturedElliptic, RandomCompatible };

struct InitialDataRecipe {
  PresetKind kind = PresetKind::Zero;
  double u1 = 1.0, k0 = 1.0;
  std::uint64_t seed = 0;
};

using ModeState = std::variant<PotentialModeState, LagrangianModeState, EulerianModeState>;

// Initial state for a model tag; ValidationError when the recipe cannot
// produce data for that model.
ModeState make_initial_state(const ModalOperatorSet& ops, const MaterialParams& p, ModelTag tag,
                             const InitialDataRecipe& recipe);

}  // namespace acbc
