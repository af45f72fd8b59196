#include "acousticbc/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "acousticbc/error.hpp"

namespace acbc {

std::pair<DomainSpec, RadialGrid> make_domain(double R0, double R1, int N) {
  if (!(std::isfinite(R0) && std::isfinite(R1)) || R0 < 0.0 || !(R1 > R0))
    throw Error(ErrorKind::InvalidGeometry, "R0,R1",
                "need 0 <= R0 < R1, got R0=" + std::to_string(R0) + " R1=" + std::to_string(R1));
  if (N < 8) throw Error(ErrorKind::GridTooCoarse, "N", "need N >= 8, got " + std::to_string(N));

  DomainSpec d{R0, R1};
  RadialGrid g;
  g.N = N;
  g.r.resize(N);
  if (d.is_ball()) {
    g.h = R1 / (N - 0.5);
    for (int j = 0; j < N; ++j) g.r[j] = (j + 0.5) * g.h;
  } else {
    g.h = (R1 - R0) / (N - 1);
    for (int j = 0; j < N; ++j) g.r[j] = R0 + j * g.h;
    g.r[0] = R0;
  }
  g.r[N - 1] = R1;
  return {d, g};
}

double volume(const DomainSpec& d) {
  return 4.0 * std::numbers::pi / 3.0 * (d.R1 * d.R1 * d.R1 - d.R0 * d.R0 * d.R0);
}

double gamma1_area(const DomainSpec& d) { return 4.0 * std::numbers::pi * d.R1 * d.R1; }

std::vector<int> ModeSet::degrees() const {
  std::vector<int> out;
  for (const auto& e : modes) out.push_back(e.l);
  return out;
}

bool ModeSet::has_degree(int l) const {
  return std::any_of(modes.begin(), modes.end(), [l](const ModeEntry& e) { return e.l == l; });
}

ModeSet make_mode_set(std::vector<ModeEntry> modes) {
  for (const auto& e : modes) {
    if (e.l < 0) throw Error(ErrorKind::ValidationError, "modes.l", "negative degree");
    if (e.m && std::abs(*e.m) > e.l)
      throw Error(ErrorKind::ValidationError, "modes.m", "|m| > l for l=" + std::to_string(e.l));
  }
  std::sort(modes.begin(), modes.end(), [](const ModeEntry& a, const ModeEntry& b) { return a.l < b.l; });
  for (size_t i = 1; i < modes.size(); ++i)
    if (modes[i].l == modes[i - 1].l)
      throw Error(ErrorKind::ValidationError, "modes.l", "duplicate degree " + std::to_string(modes[i].l));
  return ModeSet{std::move(modes)};
}

}  // namespace acbc
