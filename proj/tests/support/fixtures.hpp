// Shared problem fixtures: the pi-cube, truncated bases, and the two model
// nonlinearities used across the solver tests.
#pragma once

#include "curlgs/modes.hpp"
#include "curlgs/nonlinearity.hpp"

namespace curlgs::testing {

// (0,pi)^3 box.
BoxDomain pi_box();

// Basis truncated to the single axis-3 polarized k=(1,1,0) mode, whose
// normalized field is proportional to (0,0, sin x1 sin x2).
ModeBasis single_mode_basis();

// Basis truncated to the given number of leading divfree modes (gradient
// block dropped).
ModeBasis truncated_basis(double cutoff, std::size_t n_divfree);

// F = (gamma/4)|u|^4, the cubic-response model.
NonlinearitySpec kerr_quartic(double gamma = 1.0);

// Two-term model: cubic with mixing diag(2,1,1) plus isotropic quartic.
NonlinearitySpec anisotropic_model();

}  // namespace curlgs::testing
