// Exact eigenmodes of the curl-curl operator on an axis-aligned box with
// perfectly conducting walls, plus the gradient (curl-free) modes spanning
// the kernel. Products of sines and cosines; everything is closed form.
//
// A divergence-free mode with integer triple k and coefficient vector c is
//   E_i(x) = c_i cos(kh_i x_i) prod_{j != i} sin(kh_j x_j),   kh_i = k_i pi / L_i,
// subject to kh . c = 0. It satisfies curl curl E = |kh|^2 E and has zero
// tangential trace. At least two k_i must be positive; if exactly one k_i is
// zero there is a single polarization (along that axis), otherwise two.
//
// Gradient modes are grad of the Dirichlet eigenfunctions
//   w(x) = N sin(kh_1 x_1) sin(kh_2 x_2) sin(kh_3 x_3),  all k_i >= 1,
// normalized so |w|_{L2} = 1; their stored eigenvalue is the Dirichlet
// eigenvalue |kh|^2. Evaluation reuses the divergence-free formula with
// amplitude N * kh, which also makes their curl vanish identically.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "curlgs/geometry.hpp"

namespace curlgs {

enum class ModeKind { DivFree, Gradient };

struct ModeIndex {
  int k[3];
  ModeKind kind;
  int polarization;  // 0 or 1; 1 only for DivFree modes with all k_i >= 1
};

struct Mode {
  ModeIndex index;
  Vec3 khat;         // k_i * pi / L_i
  double eigenvalue; // |khat|^2 (curl-curl for DivFree, Dirichlet for Gradient)
  Vec3 amplitude;    // coefficient vector, scaled for unit L2 norm
  Vec3 bvec;         // khat x amplitude (curl amplitude; zero for Gradient)
};

// Field value at a point.
Vec3 mode_eval(const Mode& m, const Vec3& x);
// curl E at a point (identically zero for gradient modes).
Vec3 mode_curl_eval(const Mode& m, const Vec3& x);
// curl curl E at a point, by applying the closed-form curl twice.
Vec3 mode_curlcurl_eval(const Mode& m, const Vec3& x);
// Scalar potential w for gradient modes (throws for DivFree).
double mode_potential_eval(const Mode& m, const Vec3& x);

struct ModeBasis {
  BoxDomain domain;
  double cutoff;
  std::vector<Mode> divfree;
  std::vector<Mode> gradient;
  // Set when the cutoff admits no divergence-free mode. Such a basis can be
  // inspected but downstream operations reject it.
  bool degenerate = false;

  // Largest integer frequency appearing on each axis across both families.
  std::array<int, 3> max_frequency() const;
  // FNV-1a hash over the index data; identifies the basis in run manifests.
  std::uint64_t fingerprint() const;
};

// All modes with eigenvalue <= cutoff, each family sorted by
// (eigenvalue, k lexicographic, polarization).
ModeBasis enumerate_modes(const BoxDomain& domain, double cutoff);

// Max of |nu x field| over a lattice of samples_per_face^2 points per face.
double max_tangential_trace(const std::function<Vec3(const Vec3&)>& field,
                            const BoxDomain& domain, int samples_per_face);

}  // namespace curlgs
