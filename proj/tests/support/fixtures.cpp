#include "support/fixtures.hpp"

#include <numbers>

#include "curlgs/errors.hpp"

namespace curlgs::testing {

BoxDomain pi_box() {
  const double pi = std::numbers::pi;
  return BoxDomain(pi, pi, pi);
}

ModeBasis single_mode_basis() {
  ModeBasis basis = enumerate_modes(pi_box(), 2.5);
  for (const Mode& m : basis.divfree) {
    if (m.index.k[0] == 1 && m.index.k[1] == 1 && m.index.k[2] == 0) {
      basis.divfree = {m};
      return basis;
    }
  }
  throw StructuralError("k=(1,1,0) mode not found at cutoff 2.5");
}

ModeBasis truncated_basis(double cutoff, std::size_t n_divfree) {
  ModeBasis basis = enumerate_modes(pi_box(), cutoff);
  if (basis.divfree.size() < n_divfree) {
    throw StructuralError("cutoff holds fewer modes than requested");
  }
  basis.divfree.resize(n_divfree);
  basis.gradient.clear();
  return basis;
}

NonlinearitySpec kerr_quartic(double gamma) {
  PowerTerm term;
  term.gamma = CoefficientField::constant(gamma);
  term.matrix = Mat3::Identity();
  term.exponent = 4.0;
  return NonlinearitySpec::power({term});
}

NonlinearitySpec anisotropic_model() {
  PowerTerm cubic;
  cubic.gamma = CoefficientField::constant(2.0);
  cubic.matrix = Vec3(2.0, 1.0, 1.0).asDiagonal();
  cubic.exponent = 3.0;
  PowerTerm quartic;
  quartic.gamma = CoefficientField::constant(1.0);
  quartic.matrix = Mat3::Identity();
  quartic.exponent = 4.0;
  return NonlinearitySpec::power({cubic, quartic});
}

}  // namespace curlgs::testing
