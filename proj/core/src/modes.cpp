#include "curlgs/modes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <tuple>

#include "curlgs/errors.hpp"

namespace curlgs {

namespace {

// E_i(x) = a_i cos(kh_i x_i) prod_{j != i} sin(kh_j x_j) for amplitude a.
Vec3 trig_eval(const Vec3& khat, const Vec3& a, const Vec3& x) {
  const double s0 = std::sin(khat[0] * x[0]), c0 = std::cos(khat[0] * x[0]);
  const double s1 = std::sin(khat[1] * x[1]), c1 = std::cos(khat[1] * x[1]);
  const double s2 = std::sin(khat[2] * x[2]), c2 = std::cos(khat[2] * x[2]);
  return Vec3(a[0] * c0 * s1 * s2, a[1] * s0 * c1 * s2, a[2] * s0 * s1 * c2);
}

// B_i(x) = b_i sin(kh_i x_i) prod_{j != i} cos(kh_j x_j): the curl pattern.
Vec3 trig_eval_curl(const Vec3& khat, const Vec3& b, const Vec3& x) {
  const double s0 = std::sin(khat[0] * x[0]), c0 = std::cos(khat[0] * x[0]);
  const double s1 = std::sin(khat[1] * x[1]), c1 = std::cos(khat[1] * x[1]);
  const double s2 = std::sin(khat[2] * x[2]), c2 = std::cos(khat[2] * x[2]);
  return Vec3(b[0] * s0 * c1 * c2, b[1] * c0 * s1 * c2, b[2] * c0 * c1 * s2);
}

// L2 norm of the trig pattern with amplitude a on the box: per-axis factors
// are L/2 for sin or cos with k >= 1, L for cos with k = 0, 0 for sin with
// k = 0.
double pattern_l2_norm(const BoxDomain& box, const int k[3], const Vec3& a) {
  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (a[i] == 0.0) continue;
    double factor = 1.0;
    for (int j = 0; j < 3; ++j) {
      const bool is_cos = (j == i);
      if (k[j] == 0) {
        factor *= is_cos ? box.edge[j] : 0.0;
      } else {
        factor *= 0.5 * box.edge[j];
      }
    }
    total += a[i] * a[i] * factor;
  }
  return std::sqrt(total);
}

Mode make_divfree(const BoxDomain& box, const int k[3], int polarization, const Vec3& c_dir) {
  Mode m;
  m.index = ModeIndex{{k[0], k[1], k[2]}, ModeKind::DivFree, polarization};
  for (int i = 0; i < 3; ++i) m.khat[i] = k[i] * std::numbers::pi / box.edge[i];
  m.eigenvalue = m.khat.squaredNorm();
  const double norm = pattern_l2_norm(box, k, c_dir);
  m.amplitude = c_dir / norm;
  m.bvec = m.khat.cross(m.amplitude);
  return m;
}

Mode make_gradient(const BoxDomain& box, const int k[3]) {
  Mode m;
  m.index = ModeIndex{{k[0], k[1], k[2]}, ModeKind::Gradient, 0};
  for (int i = 0; i < 3; ++i) m.khat[i] = k[i] * std::numbers::pi / box.edge[i];
  m.eigenvalue = m.khat.squaredNorm();
  // |sin sin sin|_{L2}^2 = vol / 8; amplitude N * khat evaluates grad w.
  const double scale = std::sqrt(8.0 / box.volume());
  m.amplitude = scale * m.khat;
  m.bvec = Vec3::Zero();
  return m;
}

bool mode_order(const Mode& a, const Mode& b) {
  return std::make_tuple(a.eigenvalue, a.index.k[0], a.index.k[1], a.index.k[2],
                         a.index.polarization) <
         std::make_tuple(b.eigenvalue, b.index.k[0], b.index.k[1], b.index.k[2],
                         b.index.polarization);
}

}  // namespace

Vec3 mode_eval(const Mode& m, const Vec3& x) { return trig_eval(m.khat, m.amplitude, x); }

Vec3 mode_curl_eval(const Mode& m, const Vec3& x) { return trig_eval_curl(m.khat, m.bvec, x); }

Vec3 mode_curlcurl_eval(const Mode& m, const Vec3& x) {
  // curl of the b-pattern is the original pattern with amplitude -khat x b.
  const Vec3 d = -m.khat.cross(m.bvec);
  return trig_eval(m.khat, d, x);
}

double mode_potential_eval(const Mode& m, const Vec3& x) {
  if (m.index.kind != ModeKind::Gradient) {
    throw StructuralError("mode_potential_eval: mode has no scalar potential");
  }
  // amplitude = N * khat, so N = |amplitude| / |khat|.
  const double scale = m.amplitude.norm() / m.khat.norm();
  return scale * std::sin(m.khat[0] * x[0]) * std::sin(m.khat[1] * x[1]) *
         std::sin(m.khat[2] * x[2]);
}

std::array<int, 3> ModeBasis::max_frequency() const {
  std::array<int, 3> f{0, 0, 0};
  for (const auto* family : {&divfree, &gradient}) {
    for (const Mode& m : *family) {
      for (int i = 0; i < 3; ++i) f[i] = std::max(f[i], m.index.k[i]);
    }
  }
  return f;
}

std::uint64_t ModeBasis::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (8 * byte)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  auto mix_double = [&](double d) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(d));
    std::memcpy(&bits, &d, sizeof(bits));
    mix(bits);
  };
  for (double e : domain.edge) mix_double(e);
  mix_double(cutoff);
  for (const auto* family : {&divfree, &gradient}) {
    for (const Mode& m : *family) {
      mix(static_cast<std::uint64_t>(m.index.kind == ModeKind::Gradient ? 1 : 0));
      for (int i = 0; i < 3; ++i) mix(static_cast<std::uint64_t>(m.index.k[i]));
      mix(static_cast<std::uint64_t>(m.index.polarization));
      mix_double(m.eigenvalue);
    }
  }
  return h;
}

ModeBasis enumerate_modes(const BoxDomain& domain, double cutoff) {
  if (!(cutoff > 0.0)) throw ConfigError("enumerate_modes: cutoff must be positive");

  ModeBasis basis{domain, cutoff, {}, {}, false};
  const double pi = std::numbers::pi;
  int kmax[3];
  for (int i = 0; i < 3; ++i) {
    kmax[i] = static_cast<int>(std::floor(std::sqrt(cutoff) * domain.edge[i] / pi)) + 1;
  }

  for (int k1 = 0; k1 <= kmax[0]; ++k1) {
    for (int k2 = 0; k2 <= kmax[1]; ++k2) {
      for (int k3 = 0; k3 <= kmax[2]; ++k3) {
        const int k[3] = {k1, k2, k3};
        const int positive = (k1 > 0) + (k2 > 0) + (k3 > 0);
        if (positive < 2) continue;
        Vec3 khat(k1 * pi / domain.edge[0], k2 * pi / domain.edge[1], k3 * pi / domain.edge[2]);
        const double lambda = khat.squaredNorm();
        if (lambda > cutoff) continue;

        if (positive == 2) {
          // Single polarization along the axis with k_i = 0.
          int zero_axis = (k1 == 0) ? 0 : (k2 == 0) ? 1 : 2;
          Vec3 c = Vec3::Zero();
          c[zero_axis] = 1.0;
          basis.divfree.push_back(make_divfree(domain, k, 0, c));
        } else {
          // Two polarizations orthogonal to khat; fixed tie-breaking via the
          // x3 axis, which khat never parallels when all k_i >= 1.
          Vec3 c0 = khat.cross(Vec3::UnitZ()).normalized();
          Vec3 c1 = khat.cross(c0).normalized();
          basis.divfree.push_back(make_divfree(domain, k, 0, c0));
          basis.divfree.push_back(make_divfree(domain, k, 1, c1));
        }

        if (positive == 3) {
          basis.gradient.push_back(make_gradient(domain, k));
        }
      }
    }
  }

  basis.degenerate = basis.divfree.empty();
  std::sort(basis.divfree.begin(), basis.divfree.end(), mode_order);
  std::sort(basis.gradient.begin(), basis.gradient.end(), mode_order);
  return basis;
}

double max_tangential_trace(const std::function<Vec3(const Vec3&)>& field,
                            const BoxDomain& domain, int samples_per_face) {
  if (samples_per_face < 1) {
    throw StructuralError("max_tangential_trace: need at least one sample per face");
  }
  double worst = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const int t1 = (axis + 1) % 3, t2 = (axis + 2) % 3;
    for (int side = 0; side < 2; ++side) {
      const double coord = side == 0 ? 0.0 : domain.edge[axis];
      for (int i = 0; i < samples_per_face; ++i) {
        for (int j = 0; j < samples_per_face; ++j) {
          Vec3 x;
          x[axis] = coord;
          x[t1] = (i + 0.5) / samples_per_face * domain.edge[t1];
          x[t2] = (j + 0.5) / samples_per_face * domain.edge[t2];
          const Vec3 e = field(x);
          // |nu x E| is the magnitude of the tangential part.
          const double tangential = std::hypot(e[t1], e[t2]);
          worst = std::max(worst, tangential);
        }
      }
    }
  }
  return worst;
}

}  // namespace curlgs
