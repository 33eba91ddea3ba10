#pragma once

#include <string>
#include <vector>

namespace conespec {

// Lower-halflink descriptor for a cone singularity.
struct Halflink {
  enum Kind { Empty, FullLink, Points, Custom } kind = Empty;
  int points_m = 0;  // Points: number of sheets (curve case)
  // Custom: mapping-cone data of the restriction H^k(truncated cone) -> H^k(l^-).
  std::vector<int> lminus_betti;
  std::vector<int> ranks;  // r_k = rank of the restriction in degree k

  static Halflink empty() { return {}; }
  static Halflink full_link() { return {FullLink, 0, {}, {}}; }
  static Halflink points(int m) { return {Points, m, {}, {}}; }
  static Halflink custom(std::vector<int> lb, std::vector<int> r) {
    return {Custom, 0, std::move(lb), std::move(r)};
  }
};

// Cone dimension 2*nu, link Betti numbers, halflink descriptor.
struct ConeMorseDatum {
  int nu = 1;
  std::vector<int> bettiL;  // b_0 .. b_{2nu-1}
  Halflink halflink;
};

// Middle-perversity intersection cohomology of the (open) cone:
// bettiL[i] below the middle degree, 0 from it on.
int ih_cone(const std::vector<int>& bettiL, int nu, int degree);

// IH of the cone relative to the halflink.
int ih_cone_rel(const ConeMorseDatum& datum, int degree);

// The singular point's contribution vector m_p^0 .. m_p^{2 nu}.
std::vector<int> morse_contribution(const ConeMorseDatum& datum);

}  // namespace conespec
