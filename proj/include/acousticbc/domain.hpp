/// @file domain.hpp
/// @brief Concentric geometry (ball or shell), radial grid and harmonic mode set.
#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace acbc {

enum class Geometry { Ball, Shell };

struct DomainSpec {
  double R0 = 0.0;  // 0 means ball: no inner boundary
  double R1 = 1.0;

  Geometry kind() const { return R0 > 0.0 ? Geometry::Shell : Geometry::Ball; }
  bool is_ball() const { return kind() == Geometry::Ball; }
  bool has_gamma0() const { return kind() == Geometry::Shell; }
};

// Shell: r_j = R0 + j h, both endpoints are nodes.
// Ball:  r_j = (j + 1/2) h, h = R1 / (N - 1/2), no node at the origin.
struct RadialGrid {
  int N = 0;
  double h = 0.0;
  std::vector<double> r;
};

std::pair<DomainSpec, RadialGrid> make_domain(double R0, double R1, int N);

double volume(const DomainSpec& d);
double gamma1_area(const DomainSpec& d);

struct ModeEntry {
  int l = 0;
  std::optional<int> m;  // label only, does not affect dynamics
};

struct ModeSet {
  std::vector<ModeEntry> modes;

  std::vector<int> degrees() const;
  bool has_degree(int l) const;
};

// Sorts by degree; rejects duplicates, negative degrees and |m| > l.
ModeSet make_mode_set(std::vector<ModeEntry> modes);

}  // namespace acbc
